//! Expected revenues when both sellers face a buyer with a random value.
//!
//! The buyer's optimal plan — order, first-stage choice, contingent
//! second-stage choice — is a step function of the value `v`: it changes
//! only where the preferred order flips or a demand call crosses a menu
//! slope. Payments depend on the plan alone, not on `v`, so expected
//! revenue is an exact sum of `payment * mass` over the plan's constancy
//! pieces. For continuous distributions we locate piece boundaries by
//! scanning the evaluation grid and bisecting each flagged cell down to
//! machine precision; for atomic distributions we sum over the atoms
//! directly. The truncated upper tail of an unbounded support is folded
//! into the last piece (high types' plans are constant there).
//!
//! The module also implements the reduction of the two-seller problem to a
//! single seller: given the lottery `(z, p)` and the threshold `s` above
//! which buyers take the lottery first, the *auxiliary distribution*
//! reshapes the value law so that Bob's duopoly revenue equals a
//! monopolist's revenue under it. Values at most `p` are kept; values in
//! `(p, s)` are compressed to `a + (1 - z) v`; values of at least `s` keep
//! their value with probability `1 - z` and collapse to an atom at `0`
//! (the lottery delivered) otherwise.

use serde::Serialize;

use crate::buyer::{best_response, BuyerChoice, SellerOrder};
use crate::distributions::{Kind, ValueDistribution};
use crate::error::{Error, Result};
use crate::menus::{PricingMenu, SingleLottery};

/// Expected revenues and sale probabilities for a menu pair.
#[derive(Clone, Debug, Serialize)]
pub struct CompetitionOutcome {
    pub rev_alice: f64,
    pub rev_bob: f64,
    pub alloc_alice: f64,
    pub alloc_bob: f64,
    /// Sampled buyer plans along the value axis, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePoint>>,
}

/// The buyer's plan at one sampled value.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TracePoint {
    pub v: f64,
    #[serde(flatten)]
    pub choice: BuyerChoice,
}

#[derive(Default)]
struct Accum {
    rev_alice: f64,
    rev_bob: f64,
    alloc_alice: f64,
    alloc_bob: f64,
}

impl Accum {
    fn add(&mut self, c: &BuyerChoice, mass: f64) {
        if mass <= 0.0 {
            return;
        }
        self.rev_alice += c.pay_alice * mass;
        self.rev_bob += c.pay_bob * mass;
        self.alloc_alice += c.alloc_alice * mass;
        self.alloc_bob += c.alloc_bob * mass;
    }

    fn outcome(self, trace: Option<Vec<TracePoint>>) -> CompetitionOutcome {
        CompetitionOutcome {
            rev_alice: self.rev_alice,
            rev_bob: self.rev_bob,
            alloc_alice: self.alloc_alice,
            alloc_bob: self.alloc_bob,
            trace,
        }
    }
}

fn plan_key(c: &BuyerChoice) -> (SellerOrder, u64, u64) {
    (c.order, c.x_first.to_bits(), c.x_second.to_bits())
}

/// Expected revenues for Alice's and Bob's menus under value law `d`.
pub fn revenues(alice: &PricingMenu, bob: &PricingMenu, d: &ValueDistribution) -> CompetitionOutcome {
    revenues_inner(alice, bob, d, None)
}

/// Like [`revenues`], additionally sampling the buyer's plan at every
/// `stride`-th grid point (and each atom of an atomic law).
pub fn revenues_traced(
    alice: &PricingMenu,
    bob: &PricingMenu,
    d: &ValueDistribution,
    stride: usize,
) -> CompetitionOutcome {
    revenues_inner(alice, bob, d, Some(stride.max(1)))
}

fn revenues_inner(
    alice: &PricingMenu,
    bob: &PricingMenu,
    d: &ValueDistribution,
    stride: Option<usize>,
) -> CompetitionOutcome {
    let mut acc = Accum::default();
    let mut trace: Option<Vec<TracePoint>> = stride.map(|_| Vec::new());

    if d.kind() != Kind::AnalyticContinuous {
        for (v, mass) in d.atoms().expect("atomic distribution exposes atoms") {
            let c = best_response(alice, bob, v);
            acc.add(&c, mass);
            if let Some(t) = trace.as_mut() {
                t.push(TracePoint { v, choice: c });
            }
        }
        return acc.outcome(trace);
    }

    let n = d.grid_size();
    let step = d.support_max() / (n - 1) as f64;
    let mut piece_start_cum = 0.0; // cdf at the current piece's left edge
    let mut piece_rep = best_response(alice, bob, 0.0);
    let mut prev_v = 0.0;
    for i in 1..n {
        let v = step * i as f64;
        let c = best_response(alice, bob, v);
        if plan_key(&c) != plan_key(&piece_rep) {
            // A cell may straddle several plan changes when the menus have
            // more breakpoints than the value grid has cells; peel pieces
            // off one boundary at a time until the cell-end plan is reached.
            let max_pieces = alice.breakpoints().len() + bob.breakpoints().len() + 8;
            let mut lo = prev_v;
            for _ in 0..max_pieces {
                let here = plan_key(&piece_rep);
                let (_, t) = crate::numerics::bisect_boundary(
                    |u| plan_key(&best_response(alice, bob, u)) != here,
                    lo,
                    v,
                    0.0,
                );
                let cum = d.cdf(t);
                acc.add(&piece_rep, cum - piece_start_cum);
                piece_start_cum = cum;
                piece_rep = best_response(alice, bob, t);
                lo = t;
                if plan_key(&piece_rep) == plan_key(&c) {
                    break;
                }
            }
            piece_rep = c;
        }
        if let Some(t) = trace.as_mut() {
            if i % stride.unwrap() == 0 {
                t.push(TracePoint { v, choice: c });
            }
        }
        prev_v = v;
    }
    // last piece absorbs the folded tail beyond the truncation point
    acc.add(&piece_rep, 1.0 - piece_start_cum);
    acc.outcome(trace)
}

/// Bob's revenue from posting the single price `q` against the lottery:
/// an undercutting price (`q <= p`) sells to every type above `q`, while a
/// higher price sells only to the `1 - z` of them the lottery misses.
pub fn rev_fixed_price(alice: &SingleLottery, q: f64, d: &ValueDistribution) -> f64 {
    if q <= alice.p() {
        d.gamma(q)
    } else {
        (1.0 - alice.z()) * d.gamma(q)
    }
}

/// A monopolist's expected revenue from posting `menu` to a buyer with
/// value law `d`.
pub fn monopolist_revenue(menu: &PricingMenu, d: &ValueDistribution) -> f64 {
    if let Some(atoms) = d.atoms() {
        return atoms
            .iter()
            .map(|&(v, m)| m * menu.price(menu.demand(v)).unwrap())
            .sum();
    }
    monopolist_revenue_by_cdf(menu, &|v| {
        if v >= d.support_max() {
            0.0
        } else {
            1.0 - d.cdf_left(v)
        }
    })
}

/// Monopolist revenue given the buyer's upper tail function `P[value >= v]`.
/// The buyer takes the largest option whose marginal price is below their
/// value, so revenue is a sum over menu segments of the price increment
/// times the tail at the segment's slope.
fn monopolist_revenue_by_cdf(menu: &PricingMenu, tail: &dyn Fn(f64) -> f64) -> f64 {
    let bp = menu.breakpoints();
    let slopes = menu.segment_slopes();
    let mut rev = 0.0;
    for (j, &s) in slopes.iter().enumerate() {
        // moving from option j to option j+1 costs the slope per unit and
        // happens exactly when the value reaches it
        let dprice = bp[j + 1].1 - bp[j].1;
        rev += dprice * tail(s);
    }
    rev
}

/// The single-seller law induced by the lottery `(z, p)` and the
/// alice-first threshold `s`.
///
/// Pass `s = f64::INFINITY` when no type takes the lottery first; the
/// threshold is then clamped just above the support so the collapsed-atom
/// piece is empty.
#[derive(Clone, Debug)]
pub struct AuxiliaryDistribution {
    base: ValueDistribution,
    z: f64,
    a: f64,
    p: f64,
    /// Clamped threshold actually used by the piecewise formulas.
    s_eff: f64,
    /// Threshold as requested (possibly infinite), for reporting.
    s: f64,
}

impl AuxiliaryDistribution {
    pub fn new(d: &ValueDistribution, lottery: &SingleLottery, s: f64) -> Result<Self> {
        if lottery.z() >= 1.0 {
            return Err(Error::InvalidParameter(
                "auxiliary distribution requires a lottery with z < 1".into(),
            ));
        }
        if s < lottery.p() {
            return Err(Error::InvalidThreshold { s, p: lottery.p() });
        }
        Ok(Self {
            base: d.clone(),
            z: lottery.z(),
            a: lottery.ex_ante(),
            p: lottery.p(),
            s_eff: s.min(d.support_max() + 1.0),
            s,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Mass collapsed to the atom at zero (types above `s` whose lottery
    /// delivered).
    pub fn atom_at_zero(&self) -> f64 {
        self.z * (1.0 - self.base.cdf(self.s_eff))
    }

    /// Largest value carrying mass under the auxiliary law.
    pub fn support_max(&self) -> f64 {
        let vmax = self.base.support_max();
        if self.s_eff > vmax {
            self.a + (1.0 - self.z) * vmax
        } else {
            vmax
        }
    }

    /// Density of the continuous part (the atom at zero is separate).
    pub fn pdf(&self, v: f64) -> f64 {
        if v < 0.0 {
            return 0.0;
        }
        let compressed_end = self.a + (1.0 - self.z) * self.s_eff;
        if v <= self.p {
            self.base.pdf(v)
        } else if v < compressed_end {
            self.base.pdf((v - self.a) / (1.0 - self.z)) / (1.0 - self.z)
        } else if v < self.s_eff {
            0.0
        } else {
            (1.0 - self.z) * self.base.pdf(v)
        }
    }

    pub fn cdf(&self, v: f64) -> f64 {
        if v < 0.0 {
            return 0.0;
        }
        let atom = self.atom_at_zero();
        let compressed_end = self.a + (1.0 - self.z) * self.s_eff;
        if v <= self.p {
            atom + self.base.cdf(v)
        } else if v < compressed_end {
            atom + self.base.cdf((v - self.a) / (1.0 - self.z))
        } else if v < self.s_eff {
            atom + self.base.cdf(self.s_eff)
        } else {
            atom + self.base.cdf(self.s_eff)
                + (1.0 - self.z) * (self.base.cdf(v) - self.base.cdf(self.s_eff))
        }
    }

    /// Revenue curve `q * P[value >= q]` of the auxiliary law. The only
    /// atom sits at zero, so the tail is continuous for `q > 0`.
    pub fn gamma(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return 0.0;
        }
        q * (1.0 - self.cdf(q))
    }
}

/// A monopolist's expected revenue from posting `menu` under the auxiliary
/// law.
pub fn monopolist_revenue_aux(menu: &PricingMenu, aux: &AuxiliaryDistribution) -> f64 {
    monopolist_revenue_by_cdf(menu, &|v| {
        if v <= 0.0 {
            // the atom at zero never buys a positive-slope segment, but a
            // zero-slope segment is free anyway
            1.0 - aux.atom_at_zero()
        } else {
            1.0 - aux.cdf(v)
        }
    })
}

/// Outcome of checking Bob's duopoly revenue against the auxiliary
/// single-seller problem.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OnesellerCheck {
    /// Alice-first threshold used to build the auxiliary law (`null` in
    /// JSON when no type starts at Alice).
    pub s: f64,
    pub monopolist_revenue: f64,
    pub duopoly_revenue: f64,
    pub gap: f64,
    /// Largest pointwise mismatch between the buyer's expected Bob
    /// allocation and the monopolist's demand at the mapped value.
    pub max_allocation_gap: f64,
}

/// Verify that Bob's revenue against the lottery equals a monopolist's
/// revenue under the auxiliary distribution, both in aggregate and
/// allocation-by-allocation along the value grid.
pub fn check_oneseller(
    alice: &SingleLottery,
    bob: &PricingMenu,
    d: &ValueDistribution,
) -> Result<OnesellerCheck> {
    let vmax = d.support_max();
    let s = crate::buyer::ab_start(alice, bob, vmax);
    let aux = AuxiliaryDistribution::new(d, alice, s)?;
    let monopolist = monopolist_revenue_aux(bob, &aux);
    let duopoly = revenues(&alice.menu(), bob, d).rev_bob;

    // Pointwise: the buyer's chosen Bob option must equal the monopolist's
    // demand at the value's auxiliary image — the identity behind the
    // reduction. Skip a thin window around the threshold, where the
    // bisected `s` cannot resolve which side a grid point belongs to.
    let alice_menu = alice.menu();
    let exclusion = 1e-6 * vmax.max(1.0);
    let mut max_gap: f64 = 0.0;
    for v in d.grid() {
        if (v - s).abs() < exclusion {
            continue;
        }
        let duop = best_response(&alice_menu, bob, v).bob_option();
        let image = if v >= alice.p() && v < s.min(vmax + 1.0) {
            alice.ex_ante() + (1.0 - alice.z()) * v
        } else {
            v
        };
        max_gap = max_gap.max((duop - bob.demand(image)).abs());
    }

    Ok(OnesellerCheck {
        s,
        monopolist_revenue: monopolist,
        duopoly_revenue: duopoly,
        gap: (monopolist - duopoly).abs(),
        max_allocation_gap: max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ValueDistribution;
    use crate::menus::{PricingMenu, SingleLottery};

    fn uniform01() -> ValueDistribution {
        ValueDistribution::uniform(0.0, 1.0).unwrap()
    }

    fn half_half() -> SingleLottery {
        SingleLottery::new(0.5, 0.5).unwrap()
    }

    #[test]
    fn unit_atom_revenues_are_exact() {
        let d = ValueDistribution::point_mass(1.0).unwrap();
        let alice = half_half();
        let out = revenues(&alice.menu(), &PricingMenu::fixed_price(1.0).unwrap(), &d);
        assert_eq!(out.rev_alice, 0.25);
        assert_eq!(out.rev_bob, 0.5);
        assert_eq!(out.alloc_alice, 0.5);
        assert_eq!(out.alloc_bob, 0.5);
        // undercutting at the lottery's rate takes the whole sale
        let out = revenues(&alice.menu(), &PricingMenu::fixed_price(0.5).unwrap(), &d);
        assert_eq!(out.rev_alice, 0.0);
        assert_eq!(out.rev_bob, 0.5);
    }

    #[test]
    fn guarantee_pair_on_uniform() {
        let d = uniform01();
        let p = 0.146_446_609_406_726_24; // (2 - sqrt(2)) / 4
        let alice = SingleLottery::new(0.5, p).unwrap();
        let out = revenues(&alice.menu(), &PricingMenu::fixed_price(0.5).unwrap(), &d);
        assert!((out.rev_alice - 0.0625).abs() < 1e-9, "rev_alice {}", out.rev_alice);
        assert!((out.rev_bob - 0.125).abs() < 1e-9, "rev_bob {}", out.rev_bob);
    }

    #[test]
    fn exponential_fixed_price_matches_closed_form() {
        let d = ValueDistribution::exponential(1.0).unwrap();
        let alice = SingleLottery::new(0.4, 0.3).unwrap();
        for q in [0.2, 0.3, 0.9, 2.0] {
            let swept = revenues(&alice.menu(), &PricingMenu::fixed_price(q).unwrap(), &d).rev_bob;
            let closed = rev_fixed_price(&alice, q, &d);
            assert!((swept - closed).abs() < 1e-8, "q = {q}: {swept} vs {closed}");
        }
    }

    #[test]
    fn fixed_price_closed_form_values() {
        let d = uniform01();
        let alice = half_half();
        assert!((rev_fixed_price(&alice, 0.3, &d) - 0.21).abs() < 1e-12);
        assert!((rev_fixed_price(&alice, 0.7, &d) - 0.105).abs() < 1e-12);
        assert!((rev_fixed_price(&alice, 0.5, &d) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn trace_samples_plans() {
        let d = uniform01();
        let alice = half_half();
        let out = revenues_traced(&alice.menu(), &PricingMenu::fixed_price(0.8).unwrap(), &d, 50_000);
        let trace = out.trace.unwrap();
        assert!(trace.len() >= 3);
        assert!(trace.windows(2).all(|w| w[0].v < w[1].v));
    }

    #[test]
    fn auxiliary_pieces_on_uniform() {
        let d = uniform01();
        let aux = AuxiliaryDistribution::new(&d, &half_half(), 0.8).unwrap();
        assert!((aux.atom_at_zero() - 0.1).abs() < 1e-12);
        assert!((aux.cdf(0.5) - 0.6).abs() < 1e-12);
        assert!((aux.cdf(0.6) - 0.8).abs() < 1e-12); // compressed piece
        assert!((aux.cdf(0.7) - 0.9).abs() < 1e-12); // dead zone is flat
        assert!((aux.gamma(0.9) - 0.045).abs() < 1e-12);
        assert_eq!(aux.support_max(), 1.0);
        // density: compressed piece doubles the rate, dead zone is empty
        assert!((aux.pdf(0.6) - 2.0).abs() < 1e-12);
        assert_eq!(aux.pdf(0.7), 0.0);
        assert!((aux.pdf(0.9) - 0.5).abs() < 1e-12);
        // total mass: atom plus integral of the pieces
        let n = 200_000;
        let mut mass = aux.atom_at_zero();
        for i in 0..n {
            let v = (i as f64 + 0.5) / n as f64;
            mass += aux.pdf(v) / n as f64;
        }
        assert!((mass - 1.0).abs() < 1e-6, "mass {mass}");
    }

    #[test]
    fn auxiliary_rejects_bad_parameters() {
        let d = uniform01();
        assert!(AuxiliaryDistribution::new(&d, &half_half(), 0.3).is_err());
        let fixed = SingleLottery::new(1.0, 0.5).unwrap();
        assert!(AuxiliaryDistribution::new(&d, &fixed, 0.8).is_err());
    }

    #[test]
    fn oneseller_identity_for_posted_prices() {
        let d = uniform01();
        let alice = half_half();
        let dear = check_oneseller(&alice, &PricingMenu::fixed_price(0.8).unwrap(), &d).unwrap();
        assert!((dear.s - 0.8).abs() < 1e-6);
        assert!((dear.duopoly_revenue - 0.08).abs() < 1e-8);
        assert!(dear.gap < 1e-6, "gap {}", dear.gap);
        assert!(dear.max_allocation_gap < 1e-9);

        let cheap = check_oneseller(&alice, &PricingMenu::fixed_price(0.3).unwrap(), &d).unwrap();
        assert_eq!(cheap.s, f64::INFINITY);
        assert!((cheap.duopoly_revenue - 0.21).abs() < 1e-8);
        assert!(cheap.gap < 1e-6, "gap {}", cheap.gap);
        assert!(cheap.max_allocation_gap < 1e-9);
    }

    #[test]
    fn oneseller_identity_for_a_kinked_menu() {
        let d = uniform01();
        let alice = SingleLottery::new(0.6, 0.35).unwrap();
        let menu = PricingMenu::properize(&[(0.4, 0.1), (1.0, 0.55)]).unwrap();
        let check = check_oneseller(&alice, &menu, &d).unwrap();
        assert!(check.gap < 1e-6, "gap {}", check.gap);
        assert!(check.max_allocation_gap < 1e-9, "alloc gap {}", check.max_allocation_gap);
    }

    #[test]
    fn monopolist_revenue_matches_posted_price_curve() {
        let d = uniform01();
        for q in [0.2, 0.5, 0.9] {
            let m = monopolist_revenue(&PricingMenu::fixed_price(q).unwrap(), &d);
            assert!((m - d.gamma(q)).abs() < 1e-12);
        }
        let pm = ValueDistribution::point_mass(1.0).unwrap();
        let m = monopolist_revenue(&PricingMenu::fixed_price(1.0).unwrap(), &pm);
        assert_eq!(m, 1.0);
    }
}
