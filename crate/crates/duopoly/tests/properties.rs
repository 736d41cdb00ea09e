//! Property-based checks: menu canonicalization is an idempotent lower
//! envelope, demand behaves like a demand curve, and the buyer's chosen
//! plan dominates every breakpoint plan in either visit order.

use duopoly::buyer::{best_response, utility_alice_first, utility_bob_first};
use duopoly::menus::{PricingMenu, SingleLottery};
use proptest::prelude::*;

fn raw_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..=1.0f64, 0.0..=2.0f64), 1..8)
}

proptest! {
    #[test]
    fn properize_is_idempotent(raw in raw_points()) {
        let once = PricingMenu::properize(&raw).unwrap();
        let twice = PricingMenu::properize(once.breakpoints()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn envelope_never_exceeds_raw_prices(raw in raw_points()) {
        let menu = PricingMenu::properize(&raw).unwrap();
        for &(x, price) in &raw {
            let offered = menu.price(x).unwrap();
            prop_assert!(offered <= price + 1e-12, "price({}) = {} > raw {}", x, offered, price);
        }
    }

    #[test]
    fn demand_is_monotone_in_value(
        raw in raw_points(),
        v1 in 0.0..=3.0f64,
        v2 in 0.0..=3.0f64,
    ) {
        let menu = PricingMenu::properize(&raw).unwrap();
        let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
        prop_assert!(menu.demand(lo) <= menu.demand(hi));
    }

    #[test]
    fn demand_maximizes_surplus(raw in raw_points(), v in 0.0..=3.0f64) {
        let menu = PricingMenu::properize(&raw).unwrap();
        let x = menu.demand(v);
        let best = v * x - menu.price(x).unwrap();
        for &(bx, bprice) in menu.breakpoints() {
            prop_assert!(v * bx - bprice <= best + 1e-12, "option {} beats demand {}", bx, x);
        }
    }

    #[test]
    fn chosen_plan_dominates_breakpoint_plans(
        z in 0.05..=0.95f64,
        p in 0.0..=1.5f64,
        raw in raw_points(),
        v in 0.0..=2.0f64,
    ) {
        let lottery = SingleLottery::new(z, p).unwrap();
        let bob = PricingMenu::properize(&raw).unwrap();
        let chosen = best_response(&lottery.menu(), &bob, v);
        for &(x, _) in bob.breakpoints() {
            let bf = utility_bob_first(&lottery, &bob, x, v).unwrap();
            let af = utility_alice_first(&lottery, &bob, x, v).unwrap();
            prop_assert!(bf <= chosen.utility + 1e-9, "bob-first x={} beats chosen", x);
            prop_assert!(af <= chosen.utility + 1e-9, "alice-first x={} beats chosen", x);
        }
    }
}
