//! Pricing menus: piecewise-linear convex price schedules over allocation
//! probabilities.
//!
//! A seller's offer is a menu `M : [0, x_bar] -> price` with `M(0) = 0`,
//! nondecreasing prices, and convexity (nondecreasing per-segment slopes).
//! Allocations above `x_bar` are unavailable — `price` returns `None` there,
//! which plays the role of an infinite price. Any finite list of raw
//! `(allocation, price)` offers canonicalizes into this form via
//! [`PricingMenu::properize`]: buying nothing for free is always allowed,
//! cheaper duplicates win, and the lower convex envelope removes offers no
//! rational buyer would ever select.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance for price/slope comparisons when canonicalizing and
/// when resolving buyer indifference between menu options.
pub const PRICE_EPS: f64 = 1e-12;

/// A proper pricing menu. Construct through [`PricingMenu::properize`],
/// [`PricingMenu::fixed_price`] or [`SingleLottery::menu`]; the invariants
/// (leading `(0, 0)`, strictly increasing allocations, strictly increasing
/// segment slopes) hold for every constructed value.
#[derive(Clone, Debug, PartialEq)]
pub struct PricingMenu {
    breakpoints: Vec<(f64, f64)>,
    slopes: Vec<f64>,
}

impl Serialize for PricingMenu {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PricingMenu", 1)?;
        s.serialize_field("breakpoints", &self.breakpoints)?;
        s.end()
    }
}

impl PricingMenu {
    /// Take-it-or-leave-it price `q` for the whole item.
    pub fn fixed_price(q: f64) -> Result<Self> {
        if !q.is_finite() || q < 0.0 {
            return Err(Error::InvalidPoint { x: 1.0, price: q });
        }
        Self::properize(&[(1.0, q)])
    }

    /// The whole item for free.
    pub fn give_away() -> Self {
        Self::fixed_price(0.0).unwrap()
    }

    /// Canonicalize raw offers into a proper menu.
    ///
    /// Adds `(0, 0)`, keeps the cheaper of duplicate allocations, and takes
    /// the monotone lower convex envelope. Offers with an allocation outside
    /// `[0, 1]`, a negative price, or a non-finite coordinate are rejected.
    pub fn properize(raw: &[(f64, f64)]) -> Result<Self> {
        for &(x, price) in raw {
            let ok = x.is_finite() && price.is_finite() && (0.0..=1.0).contains(&x) && price >= 0.0;
            if !ok {
                return Err(Error::InvalidPoint { x, price });
            }
        }
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(raw.len() + 1);
        pts.push((0.0, 0.0));
        pts.extend_from_slice(raw);
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        // merge allocations closer than the price tolerance, cheapest wins
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for (x, price) in pts {
            match merged.last() {
                Some(&(lx, _)) if x - lx <= PRICE_EPS => {} // sorted: earlier one is cheaper
                _ => merged.push((x, price)),
            }
        }
        // lower convex hull; near-collinear points (within PRICE_EPS of the
        // incoming slope) are dropped so the canonical form is stable
        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(merged.len());
        for p in merged {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                let slope_in = (b.1 - a.1) / (b.0 - a.0);
                let slope_out = (p.1 - b.1) / (p.0 - b.0);
                if slope_in >= slope_out - PRICE_EPS {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let slopes = hull
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        Ok(PricingMenu { breakpoints: hull, slopes })
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Largest allocation on offer.
    pub fn x_bar(&self) -> f64 {
        self.breakpoints.last().unwrap().0
    }

    pub(crate) fn segment_slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Price of allocation `x`, or `None` when `x` exceeds `x_bar` (the
    /// unavailable sentinel).
    pub fn price(&self, x: f64) -> Option<f64> {
        if x < 0.0 || x > self.x_bar() + PRICE_EPS {
            return None;
        }
        let x = x.min(self.x_bar());
        // index of the segment containing x
        let i = self
            .breakpoints
            .partition_point(|&(bx, _)| bx <= x)
            .saturating_sub(1);
        let (bx, bp) = self.breakpoints[i];
        if i == self.breakpoints.len() - 1 {
            return Some(bp);
        }
        Some(bp + self.slopes[i] * (x - bx))
    }

    /// The largest utility-maximizing allocation for a buyer with marginal
    /// willingness to pay `w`: ties at a segment slope resolve to the
    /// segment's right endpoint, so the demand curve is right-continuous and
    /// favors larger allocations.
    pub fn demand(&self, w: f64) -> f64 {
        let k = self.slopes.partition_point(|&s| s <= w + PRICE_EPS);
        self.breakpoints[k].0
    }

    /// Buyer surplus `max_x (x v - M(x))`, always at least 0.
    pub fn max_surplus(&self, v: f64) -> f64 {
        let x = self.demand(v);
        (x * v - self.price(x).unwrap()).max(0.0)
    }

    /// The canonical form of this menu. Proper menus are fixed points, so
    /// this is the identity; exposed for symmetry with `properize`, which
    /// computes the envelope of arbitrary raw offers.
    pub fn lower_convex_envelope(&self) -> Self {
        Self::properize(&self.breakpoints).expect("proper menu stays valid")
    }

    /// Subdifferential `(incoming, outgoing)` slope pair at `x`.
    ///
    /// Interior points of a segment return the segment slope twice. At a
    /// breakpoint the incoming and outgoing segment slopes appear, with
    /// `-inf` incoming at `x = 0` and `+inf` outgoing at `x = x_bar`.
    pub fn subgradient_range(&self, x: f64) -> Result<(f64, f64)> {
        if x < 0.0 || x > self.x_bar() + PRICE_EPS {
            return Err(Error::Unavailable { x, x_bar: self.x_bar() });
        }
        let x = x.min(self.x_bar());
        if let Some(i) = self
            .breakpoints
            .iter()
            .position(|&(bx, _)| (bx - x).abs() <= PRICE_EPS)
        {
            let incoming = if i == 0 { f64::NEG_INFINITY } else { self.slopes[i - 1] };
            let outgoing = if i == self.breakpoints.len() - 1 {
                f64::INFINITY
            } else {
                self.slopes[i]
            };
            return Ok((incoming, outgoing));
        }
        let i = self.breakpoints.partition_point(|&(bx, _)| bx < x) - 1;
        Ok((self.slopes[i], self.slopes[i]))
    }

    /// When the menu consists of exactly one priced option `(z, p*z)` (plus
    /// the free null option), view it as a [`SingleLottery`].
    pub fn as_single_lottery(&self) -> Option<SingleLottery> {
        if self.breakpoints.len() != 2 {
            return None;
        }
        let (z, total) = self.breakpoints[1];
        Some(SingleLottery { z, p: total / z })
    }
}

/// One lottery: the item with probability `z` at an ex-ante price `p * z`
/// (i.e. `p` per unit of probability).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleLottery {
    z: f64,
    p: f64,
}

impl SingleLottery {
    pub fn new(z: f64, p: f64) -> Result<Self> {
        if !(z > 0.0 && z <= 1.0) || !z.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lottery probability must lie in (0, 1], got {z}"
            )));
        }
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lottery price must be nonnegative, got {p}"
            )));
        }
        Ok(SingleLottery { z, p })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Per-unit price.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Ex-ante payment `a = p * z`.
    pub fn ex_ante(&self) -> f64 {
        self.p * self.z
    }

    /// The menu offering exactly this lottery.
    pub fn menu(&self) -> PricingMenu {
        PricingMenu::properize(&[(self.z, self.ex_ante())]).expect("lottery point is valid")
    }
}

impl Serialize for SingleLottery {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SingleLottery", 3)?;
        s.serialize_field("z", &self.z)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("a", &self.ex_ante())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_price_shape() {
        let m = PricingMenu::fixed_price(0.4).unwrap();
        assert_eq!(m.breakpoints(), &[(0.0, 0.0), (1.0, 0.4)]);
        assert_eq!(m.x_bar(), 1.0);
        assert_eq!(m.price(0.5), Some(0.2));
        assert_eq!(m.price(1.0), Some(0.4));
        assert_eq!(m.price(1.1), None);
        assert!(PricingMenu::fixed_price(-0.1).is_err());
    }

    #[test]
    fn properize_drops_dominated_offers() {
        // Decreasing marginal price: the middle offer sits above the chord
        // from (0,0) to (1, 0.3) and is never the cheapest way to any x.
        let m = PricingMenu::properize(&[(0.5, 0.2), (1.0, 0.3)]).unwrap();
        assert_eq!(m.breakpoints(), &[(0.0, 0.0), (1.0, 0.3)]);

        let m = PricingMenu::properize(&[(0.5, 0.4), (1.0, 0.5)]).unwrap();
        assert_eq!(m.breakpoints(), &[(0.0, 0.0), (1.0, 0.5)]);

        // Convex offers survive untouched.
        let m = PricingMenu::properize(&[(0.5, 0.1), (1.0, 0.9)]).unwrap();
        assert_eq!(m.breakpoints(), &[(0.0, 0.0), (0.5, 0.1), (1.0, 0.9)]);

        // Duplicate allocation keeps the cheaper price.
        let m = PricingMenu::properize(&[(1.0, 0.7), (1.0, 0.9)]).unwrap();
        assert_eq!(m.breakpoints(), &[(0.0, 0.0), (1.0, 0.7)]);

        assert!(PricingMenu::properize(&[(1.2, 0.1)]).is_err());
        assert!(PricingMenu::properize(&[(0.5, -0.1)]).is_err());
    }

    #[test]
    fn properize_is_idempotent() {
        let m = PricingMenu::properize(&[(0.3, 0.05), (0.8, 0.3), (1.0, 0.9)]).unwrap();
        let again = PricingMenu::properize(m.breakpoints()).unwrap();
        assert_eq!(m, again);
        assert_eq!(m.lower_convex_envelope(), m);
    }

    #[test]
    fn envelope_sits_below_raw_offers() {
        let raw = [(0.2, 0.5), (0.6, 0.55), (1.0, 0.6)];
        let m = PricingMenu::properize(&raw).unwrap();
        for &(x, price) in &raw {
            assert!(m.price(x).unwrap() <= price + PRICE_EPS);
        }
    }

    #[test]
    fn demand_walks_slopes() {
        let fp = PricingMenu::fixed_price(0.4).unwrap();
        assert_eq!(fp.demand(0.3), 0.0);
        assert_eq!(fp.demand(0.4), 1.0); // tie goes right
        assert_eq!(fp.demand(f64::INFINITY), 1.0);

        let lot = SingleLottery::new(0.5, 0.5).unwrap().menu();
        assert_eq!(lot.breakpoints(), &[(0.0, 0.0), (0.5, 0.25)]);
        assert_eq!(lot.demand(0.8), 0.5);
        assert_eq!(lot.demand(0.4), 0.0);

        let kinked = PricingMenu::properize(&[(0.5, 0.1), (1.0, 0.9)]).unwrap();
        assert_eq!(kinked.demand(1.0), 0.5); // slope 0.2 passes, 1.6 does not
        assert_eq!(kinked.demand(1.6), 1.0);
    }

    #[test]
    fn demand_on_degenerate_menu() {
        let empty = PricingMenu::properize(&[]).unwrap();
        assert_eq!(empty.breakpoints(), &[(0.0, 0.0)]);
        assert_eq!(empty.x_bar(), 0.0);
        assert_eq!(empty.demand(5.0), 0.0);
        assert_eq!(empty.price(0.0), Some(0.0));
    }

    #[test]
    fn subgradients() {
        let fp = PricingMenu::fixed_price(0.7).unwrap();
        assert_eq!(fp.subgradient_range(0.5).unwrap(), (0.7, 0.7));
        assert_eq!(fp.subgradient_range(1.0).unwrap(), (0.7, f64::INFINITY));
        assert_eq!(fp.subgradient_range(0.0).unwrap(), (f64::NEG_INFINITY, 0.7));
        assert!(fp.subgradient_range(1.5).is_err());

        let kinked = PricingMenu::properize(&[(0.5, 0.1), (1.0, 0.9)]).unwrap();
        let (incoming, outgoing) = kinked.subgradient_range(0.5).unwrap();
        assert!((incoming - 0.2).abs() < 1e-12);
        assert!((outgoing - 1.6).abs() < 1e-12);
    }

    #[test]
    fn max_surplus_matches_demand() {
        let m = PricingMenu::properize(&[(0.5, 0.1), (1.0, 0.9)]).unwrap();
        // at v = 1: best is x = 0.5 with surplus 0.5 - 0.1
        assert!((m.max_surplus(1.0) - 0.4).abs() < 1e-12);
        assert_eq!(m.max_surplus(0.1), 0.0);
    }

    #[test]
    fn lottery_roundtrip() {
        let lot = SingleLottery::new(0.5, 0.5).unwrap();
        assert_eq!(lot.ex_ante(), 0.25);
        let menu = lot.menu();
        let back = menu.as_single_lottery().unwrap();
        assert_eq!(back, lot);
        let fp = PricingMenu::fixed_price(0.3).unwrap().as_single_lottery().unwrap();
        assert_eq!(fp.z(), 1.0);
        assert_eq!(fp.p(), 0.3);
        assert!(SingleLottery::new(0.0, 0.5).is_err());
        assert!(SingleLottery::new(0.5, -0.5).is_err());
    }
}
