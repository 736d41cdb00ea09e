//! The buyer's sequential best response.
//!
//! The buyer holds value `v`, sees both menus, and picks an order: visit one
//! seller, choose an allocation from its menu, and — with the complementary
//! probability of not having received the item — visit the other seller and
//! choose again. With Alice offering the single lottery `(z, p)` at ex-ante
//! price `a = p z` and Bob offering menu `B`, the two order utilities are
//!
//! ```text
//! bob first:   x v - B(x) + (1 - x) * max(0, z v - a)
//! alice first: z v - a + (1 - z) * (x v - B(x))
//! ```
//!
//! Optimizing each order reduces to nested demand calls: the second-stage
//! choice maximizes surplus at value `v`, and the first-stage choice is the
//! demand of the first menu at the continuation-adjusted value
//! `v - (second-stage surplus)`.
//!
//! Indifference resolves through a fixed chain: higher utility, then larger
//! expected allocation from Bob, then larger expected allocation from Alice,
//! then the Bob-first order. Within a stage, `demand`'s largest-maximizer
//! rule already favors larger allocations.

use serde::Serialize;

use crate::error::Result;
use crate::menus::{PricingMenu, SingleLottery};

/// Which seller the buyer visits first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SellerOrder {
    BobFirst,
    AliceFirst,
}

/// Utility ties closer than this resolve through the allocation chain.
const TIE_EPS: f64 = 1e-12;

/// The buyer's optimal plan against a pair of menus.
///
/// `x_first` is the allocation chosen from the first seller's menu and
/// `x_second` the contingent choice at the second seller (taken only if the
/// first seller's lottery fails). Payments and allocations are expectations
/// over the lottery outcome; `utility = v * (alloc_alice + alloc_bob)
/// - pay_alice - pay_bob`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BuyerChoice {
    pub order: SellerOrder,
    pub x_first: f64,
    pub x_second: f64,
    pub utility: f64,
    pub pay_alice: f64,
    pub pay_bob: f64,
    pub alloc_alice: f64,
    pub alloc_bob: f64,
}

impl BuyerChoice {
    /// The menu option the buyer selects from Bob's menu.
    pub fn bob_option(&self) -> f64 {
        match self.order {
            SellerOrder::BobFirst => self.x_first,
            SellerOrder::AliceFirst => self.x_second,
        }
    }

    /// The menu option the buyer selects from Alice's menu.
    pub fn alice_option(&self) -> f64 {
        match self.order {
            SellerOrder::BobFirst => self.x_second,
            SellerOrder::AliceFirst => self.x_first,
        }
    }
}

/// Utility of visiting Bob first, choosing `x` there, and best-responding to
/// Alice's lottery afterwards. Errors when `x` exceeds Bob's `x_bar`.
pub fn utility_bob_first(alice: &SingleLottery, bob: &PricingMenu, x: f64, v: f64) -> Result<f64> {
    let price = bob.price(x).ok_or(crate::error::Error::Unavailable { x, x_bar: bob.x_bar() })?;
    let continuation = (alice.z() * v - alice.ex_ante()).max(0.0);
    Ok(x * v - price + (1.0 - x) * continuation)
}

/// Utility of taking Alice's lottery first and choosing `x` from Bob upon
/// failure. Errors when `x` exceeds Bob's `x_bar`.
pub fn utility_alice_first(alice: &SingleLottery, bob: &PricingMenu, x: f64, v: f64) -> Result<f64> {
    let price = bob.price(x).ok_or(crate::error::Error::Unavailable { x, x_bar: bob.x_bar() })?;
    Ok(alice.z() * v - alice.ex_ante() + (1.0 - alice.z()) * (x * v - price))
}

/// Optimal plan for one fixed order. `first`/`second` are the menus in visit
/// order; the caller maps them back to sellers.
fn plan(first: &PricingMenu, second: &PricingMenu, v: f64) -> (f64, f64, f64, f64, f64) {
    let x2 = second.demand(v);
    let price2 = second.price(x2).unwrap();
    let u2 = (x2 * v - price2).max(0.0);
    let x1 = first.demand(v - u2);
    let price1 = first.price(x1).unwrap();
    let utility = x1 * v - price1 + (1.0 - x1) * u2;
    (x1, x2, utility, price1, price2)
}

/// The buyer's best response to a pair of menus, applying the full
/// indifference chain.
pub fn best_response(alice: &PricingMenu, bob: &PricingMenu, v: f64) -> BuyerChoice {
    let (xb, xa_after, u_ba, pay_b_first, alice_price) = plan(bob, alice, v);
    let bob_first = BuyerChoice {
        order: SellerOrder::BobFirst,
        x_first: xb,
        x_second: xa_after,
        utility: u_ba,
        pay_bob: pay_b_first,
        pay_alice: (1.0 - xb) * alice_price,
        alloc_bob: xb,
        alloc_alice: (1.0 - xb) * xa_after,
    };
    let (xa, xb_after, u_ab, pay_a_first, bob_price) = plan(alice, bob, v);
    let alice_first = BuyerChoice {
        order: SellerOrder::AliceFirst,
        x_first: xa,
        x_second: xb_after,
        utility: u_ab,
        pay_alice: pay_a_first,
        pay_bob: (1.0 - xa) * bob_price,
        alloc_alice: xa,
        alloc_bob: (1.0 - xa) * xb_after,
    };

    if bob_first.utility > alice_first.utility + TIE_EPS {
        return bob_first;
    }
    if alice_first.utility > bob_first.utility + TIE_EPS {
        return alice_first;
    }
    if alice_first.alloc_bob > bob_first.alloc_bob + TIE_EPS {
        return alice_first;
    }
    if bob_first.alloc_bob > alice_first.alloc_bob + TIE_EPS {
        return bob_first;
    }
    if alice_first.alloc_alice > bob_first.alloc_alice + TIE_EPS {
        return alice_first;
    }
    bob_first
}

/// Classify a type against a single-lottery Alice: does it visit Bob first
/// (the default) or take Alice's lottery first?
pub fn classify(alice: &SingleLottery, bob: &PricingMenu, v: f64) -> SellerOrder {
    classify_menu(&alice.menu(), alice, bob, v)
}

fn classify_menu(
    alice_menu: &PricingMenu,
    alice: &SingleLottery,
    bob: &PricingMenu,
    v: f64,
) -> SellerOrder {
    let choice = best_response(alice_menu, bob, v);
    debug_assert!(bang_per_buck_consistent(alice, &choice, v));
    choice.order
}

/// Structural sanity on the chosen Bob option: when the buyer visits Bob
/// first its per-unit price cannot exceed min(p, v), and when it takes the
/// lottery first the per-unit price must sit strictly between p and v (up to
/// slack). Holds by the envelope argument; checked in debug builds.
fn bang_per_buck_consistent(alice: &SingleLottery, choice: &BuyerChoice, v: f64) -> bool {
    const SLACK: f64 = 1e-9;
    let x = choice.bob_option();
    if x <= 0.0 {
        return true;
    }
    match choice.order {
        // visiting Bob first, the buyer never pays more per unit than the
        // lottery's rate (or its own value, below the lottery's range)
        SellerOrder::BobFirst => choice.pay_bob / x <= alice.p().min(v) + SLACK,
        SellerOrder::AliceFirst => {
            let survival = 1.0 - choice.x_first;
            if survival <= TIE_EPS {
                return true; // contingent choice never executes
            }
            // pay_bob carries the survival factor; divide it back out
            let per_unit = choice.pay_bob / (survival * x);
            per_unit > alice.p() - SLACK && per_unit < v + SLACK
        }
    }
}

/// Threshold above which types take Alice's lottery first: the infimum of
/// the alice-first region over `[0, v_max]`, or `+inf` when that region is
/// empty. The returned point itself still classifies as Bob-first (the
/// region boundary), within bisection resolution `1e-9 * max(1, v_max)`.
pub fn ab_start(alice: &SingleLottery, bob: &PricingMenu, v_max: f64) -> f64 {
    let menu = alice.menu();
    let is_ab = |v: f64| classify_menu(&menu, alice, bob, v) == SellerOrder::AliceFirst;
    if !is_ab(v_max) {
        return f64::INFINITY;
    }
    // Types below the per-unit price p always start at Bob; the alice-first
    // region is upward closed, so one bisection finds its lower edge.
    let lo = alice.p().min(v_max);
    if is_ab(lo) {
        return lo;
    }
    let tol = 1e-9 * v_max.max(1.0);
    let (lo, _hi) = crate::numerics::bisect_boundary(is_ab, lo, v_max, tol);
    lo
}

/// The order-choice summary for a lottery-vs-menu pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderProfile {
    /// Infimum of the alice-first region (`+inf` when empty).
    pub ab_start: f64,
}

pub fn order_profile(alice: &SingleLottery, bob: &PricingMenu, v_max: f64) -> OrderProfile {
    OrderProfile { ab_start: ab_start(alice, bob, v_max) }
}
