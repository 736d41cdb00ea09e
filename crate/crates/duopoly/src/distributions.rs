//! Buyer value distributions and their revenue curves.
//!
//! A [`ValueDistribution`] models the buyer's value `v >= 0`. Everything the
//! sellers care about flows through the revenue curve
//!
//! ```text
//! gamma(q) = q * P[v >= q]
//! ```
//!
//! i.e. the expected revenue of posting price `q` to a lone buyer. `P[v >= q]`
//! uses the left limit of the CDF so that an atom sitting exactly at `q` still
//! buys; for continuous families the two conventions coincide.
//!
//! Supported families:
//!
//! | family               | kind                | notes                          |
//! |----------------------|---------------------|--------------------------------|
//! | `uniform(lo, hi)`    | analytic-continuous | `0 <= lo < hi`                 |
//! | `exponential(rate)`  | analytic-continuous | truncated at the 1-1e-10 quantile |
//! | `pareto(scale, shape)` | analytic-continuous | `shape > 1`, truncated likewise |
//! | `two_uniform_mixture`| analytic-continuous | may have an interior density gap |
//! | `point_mass(v)`      | point-mass          | single atom                    |
//! | `discrete(atoms)`    | finite-discrete     | finitely many atoms            |
//!
//! Unbounded supports are cut at the `1 - 1e-10` quantile; the residual mass
//! is folded into the top of the support (the CDF reports exactly 1 there),
//! so expectations computed from CDF differences never lose it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::golden_section_max;

/// Default number of evaluation points for grid scans and sweeps.
pub const DEFAULT_GRID: usize = 200_001;

/// Tail mass discarded when truncating an unbounded support.
const TRUNCATION_TAIL: f64 = 1e-10;

/// Coarse classification of how a distribution must be handled numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    AnalyticContinuous,
    PointMass,
    FiniteDiscrete,
}

/// Monotonicity report for the virtual value `phi(v) = v - (1-F(v))/f(v)`
/// and the scaled virtual value `phi(v) * f(v)`, sampled on the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regularity {
    /// Both `phi` and `phi * f` are nondecreasing.
    Both,
    /// Only `phi` is nondecreasing.
    Regular,
    /// Only `phi * f` is nondecreasing.
    Dmr,
    Neither,
}

impl Regularity {
    pub fn is_regular(self) -> bool {
        matches!(self, Regularity::Both | Regularity::Regular)
    }

    pub fn is_dmr(self) -> bool {
        matches!(self, Regularity::Both | Regularity::Dmr)
    }
}

/// Revenue-maximizing posted price together with the revenue it earns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MyersonPoint {
    pub price: f64,
    pub revenue: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum Family {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    Pareto { scale: f64, shape: f64 },
    PointMass { value: f64 },
    Discrete { atoms: Vec<(f64, f64)> },
    TwoUniformMixture { first: (f64, f64), second: (f64, f64), weight: f64 },
}

/// A buyer value distribution plus the grid resolution used when scanning it.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueDistribution {
    family: Family,
    support_max: f64,
    grid_size: usize,
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.to_string()))
    }
}

impl ValueDistribution {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        require(lo.is_finite() && hi.is_finite(), "uniform bounds must be finite")?;
        require(lo >= 0.0, "uniform lower bound must be nonnegative")?;
        require(lo < hi, "uniform needs lo < hi")?;
        Ok(Self::new(Family::Uniform { lo, hi }, hi))
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        require(rate.is_finite() && rate > 0.0, "exponential rate must be positive")?;
        // quantile(1 - tail) = -ln(tail) / rate
        let support_max = -TRUNCATION_TAIL.ln() / rate;
        Ok(Self::new(Family::Exponential { rate }, support_max))
    }

    pub fn pareto(scale: f64, shape: f64) -> Result<Self> {
        require(scale.is_finite() && scale > 0.0, "pareto scale must be positive")?;
        require(shape.is_finite() && shape > 1.0, "pareto shape must exceed 1")?;
        let support_max = scale * TRUNCATION_TAIL.powf(-1.0 / shape);
        Ok(Self::new(Family::Pareto { scale, shape }, support_max))
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        require(value.is_finite() && value >= 0.0, "point mass needs a finite nonnegative value")?;
        Ok(Self::new(Family::PointMass { value }, value))
    }

    /// Finitely many atoms `(value, mass)`; masses must be positive and sum
    /// to 1 within 1e-9. Repeated values are merged.
    pub fn discrete(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        require(!atoms.is_empty(), "discrete distribution needs at least one atom")?;
        for &(v, m) in &atoms {
            require(v.is_finite() && v >= 0.0, "atom values must be finite and nonnegative")?;
            require(m.is_finite() && m > 0.0, "atom masses must be positive")?;
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, m) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => merged.push((v, m)),
            }
        }
        let total: f64 = merged.iter().map(|&(_, m)| m).sum();
        require((total - 1.0).abs() <= 1e-9, "atom masses must sum to 1")?;
        let support_max = merged.last().unwrap().0;
        Ok(Self::new(Family::Discrete { atoms: merged }, support_max))
    }

    /// Mixture of `Uniform[lo1, hi1]` (weight `weight`) and
    /// `Uniform[lo2, hi2]` (weight `1 - weight`).
    pub fn two_uniform_mixture(lo1: f64, hi1: f64, lo2: f64, hi2: f64, weight: f64) -> Result<Self> {
        require(weight > 0.0 && weight < 1.0, "mixture weight must lie in (0, 1)")?;
        let first = Self::uniform(lo1, hi1)?;
        let second = Self::uniform(lo2, hi2)?;
        let support_max = first.support_max.max(second.support_max);
        Ok(Self::new(
            Family::TwoUniformMixture { first: (lo1, hi1), second: (lo2, hi2), weight },
            support_max,
        ))
    }

    fn new(family: Family, support_max: f64) -> Self {
        ValueDistribution { family, support_max, grid_size: DEFAULT_GRID }
    }

    /// Replace the grid resolution (at least 3 points).
    pub fn with_grid_size(mut self, n: usize) -> Self {
        self.grid_size = n.max(3);
        self
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Top of the (possibly truncated) support.
    pub fn support_max(&self) -> f64 {
        self.support_max
    }

    pub fn kind(&self) -> Kind {
        match self.family {
            Family::PointMass { .. } => Kind::PointMass,
            Family::Discrete { .. } => Kind::FiniteDiscrete,
            _ => Kind::AnalyticContinuous,
        }
    }

    /// Short family label for reports.
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Uniform { .. } => "uniform",
            Family::Exponential { .. } => "exponential",
            Family::Pareto { .. } => "pareto",
            Family::PointMass { .. } => "point-mass",
            Family::Discrete { .. } => "discrete",
            Family::TwoUniformMixture { .. } => "two-uniform-mixture",
        }
    }

    /// The atoms when the distribution is purely atomic.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match &self.family {
            Family::PointMass { value } => Some(vec![(*value, 1.0)]),
            Family::Discrete { atoms } => Some(atoms.clone()),
            _ => None,
        }
    }

    /// Uniform evaluation grid `0 = v_0 < ... < v_{n-1} = support_max`.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.grid_size;
        let top = self.support_max;
        (0..n).map(move |i| top * i as f64 / (n - 1) as f64)
    }

    /// CDF with the truncated tail folded into the top of the support:
    /// `cdf(support_max) == 1` exactly.
    pub fn cdf(&self, v: f64) -> f64 {
        if v >= self.support_max {
            return 1.0;
        }
        self.cdf_raw(v)
    }

    fn cdf_raw(&self, v: f64) -> f64 {
        if v < 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Uniform { lo, hi } => ((v - lo) / (hi - lo)).clamp(0.0, 1.0),
            Family::Exponential { rate } => 1.0 - (-rate * v).exp(),
            Family::Pareto { scale, shape } => {
                if v < *scale {
                    0.0
                } else {
                    1.0 - (scale / v).powf(*shape)
                }
            }
            Family::PointMass { value } => {
                if v >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Discrete { atoms } => {
                atoms.iter().take_while(|&&(a, _)| a <= v).map(|&(_, m)| m).sum()
            }
            Family::TwoUniformMixture { first, second, weight } => {
                let u = |(lo, hi): (f64, f64)| ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
                weight * u(*first) + (1.0 - weight) * u(*second)
            }
        }
    }

    /// Left limit `P[value < v]`; differs from `cdf` only at atoms.
    pub fn cdf_left(&self, v: f64) -> f64 {
        match &self.family {
            Family::PointMass { value } => {
                if v > *value {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Discrete { atoms } => {
                atoms.iter().take_while(|&&(a, _)| a < v).map(|&(_, m)| m).sum()
            }
            _ => self.cdf_raw(v),
        }
    }

    /// Density; zero wherever the family places no continuous mass.
    pub fn pdf(&self, v: f64) -> f64 {
        if v < 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Uniform { lo, hi } => {
                if v >= *lo && v <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Family::Exponential { rate } => rate * (-rate * v).exp(),
            Family::Pareto { scale, shape } => {
                if v < *scale {
                    0.0
                } else {
                    shape * scale.powf(*shape) / v.powf(shape + 1.0)
                }
            }
            Family::PointMass { .. } | Family::Discrete { .. } => 0.0,
            Family::TwoUniformMixture { first, second, weight } => {
                let u = |(lo, hi): (f64, f64)| {
                    if v >= lo && v <= hi {
                        1.0 / (hi - lo)
                    } else {
                        0.0
                    }
                };
                weight * u(*first) + (1.0 - weight) * u(*second)
            }
        }
    }

    /// Revenue curve `gamma(q) = q * P[v >= q]` (left-limit convention).
    /// Prices above the support earn nothing.
    pub fn gamma(&self, q: f64) -> f64 {
        if q < 0.0 || q > self.support_max {
            return 0.0;
        }
        q * (1.0 - self.cdf_left(q))
    }

    /// Revenue-maximizing posted price, ties broken toward the larger price.
    pub fn myerson_price(&self) -> Result<MyersonPoint> {
        let point = match &self.family {
            Family::PointMass { .. } | Family::Discrete { .. } => {
                // gamma is piecewise linear and increasing between atoms, so
                // only atom values can maximize it.
                let atoms = self.atoms().unwrap();
                let mut best = MyersonPoint { price: 0.0, revenue: -1.0 };
                for &(a, _) in &atoms {
                    let g = self.gamma(a);
                    if g >= best.revenue {
                        best = MyersonPoint { price: a, revenue: g };
                    }
                }
                best
            }
            _ => {
                // Right-to-left grid scan keeps the largest maximizer, then a
                // golden-section pass refines within the bracketing cells.
                let n = self.grid_size;
                let step = self.support_max / (n - 1) as f64;
                let mut best_i = n - 1;
                let mut best_g = self.gamma(self.support_max);
                for i in (0..n - 1).rev() {
                    let g = self.gamma(step * i as f64);
                    if g > best_g {
                        best_g = g;
                        best_i = i;
                    }
                }
                let lo = step * best_i.saturating_sub(1) as f64;
                let hi = (step * (best_i + 1) as f64).min(self.support_max);
                let (x, gx) = golden_section_max(|q| self.gamma(q), lo, hi, 90);
                if gx > best_g {
                    MyersonPoint { price: x, revenue: gx }
                } else {
                    MyersonPoint { price: step * best_i as f64, revenue: best_g }
                }
            }
        };
        if point.revenue <= 1e-15 * self.support_max.max(1.0) {
            return Err(Error::DegenerateDistribution);
        }
        Ok(point)
    }

    /// Virtual value `v - (1 - F(v)) / f(v)`; analytic-continuous kinds only.
    pub fn virtual_value(&self, v: f64) -> Result<f64> {
        match self.kind() {
            Kind::AnalyticContinuous => {}
            Kind::PointMass => return Err(Error::UnsupportedKind("point-mass")),
            Kind::FiniteDiscrete => return Err(Error::UnsupportedKind("finite-discrete")),
        }
        let f = self.pdf(v);
        if f <= 0.0 {
            return Err(Error::ZeroDensity(v));
        }
        Ok(v - (1.0 - self.cdf_raw(v)) / f)
    }

    /// Sample `phi` and `phi * f` on the grid and report which of the two
    /// monotonicity properties hold (slack 1e-9 per step).
    ///
    /// `phi * f` is evaluated as `v * f(v) - (1 - F(v))`, which is defined
    /// even where the density vanishes. For the plain-`phi` check, an
    /// interior zero-density gap (mass both below and above) counts as a
    /// failure, while stretches before the support starts or after it ends
    /// are skipped.
    pub fn classify_regularity(&self) -> Result<Regularity> {
        if self.kind() != Kind::AnalyticContinuous {
            return Err(Error::UnsupportedKind("atomic"));
        }
        const SLACK: f64 = 1e-9;
        let mut regular = true;
        let mut dmr = true;
        let mut prev_phi = f64::NEG_INFINITY;
        let mut prev_phif = f64::NEG_INFINITY;
        for v in self.grid() {
            let f = self.pdf(v);
            let tail = 1.0 - self.cdf_raw(v);
            let phif = v * f - tail;
            if phif < prev_phif - SLACK {
                dmr = false;
            }
            prev_phif = phif;
            if f > 0.0 {
                let phi = v - tail / f;
                if phi < prev_phi - SLACK {
                    regular = false;
                }
                prev_phi = phi;
            } else if self.cdf_raw(v) > 1e-8 && tail > 1e-8 {
                // zero density strictly inside the support
                regular = false;
            }
        }
        Ok(match (regular, dmr) {
            (true, true) => Regularity::Both,
            (true, false) => Regularity::Regular,
            (false, true) => Regularity::Dmr,
            (false, false) => Regularity::Neither,
        })
    }

    /// Smallest `v` with `gamma(v) >= y`.
    ///
    /// Targets above the maximum of the revenue curve (beyond a 1e-12 slack)
    /// are rejected; targets within the slack clamp to the maximizer.
    pub fn gamma_inverse(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        let peak = self.myerson_price()?;
        if y > peak.revenue + 1e-12 {
            return Err(Error::OutOfRange { target: y, max: peak.revenue });
        }
        let y = y.min(peak.revenue);
        match &self.family {
            Family::PointMass { .. } | Family::Discrete { .. } => {
                // Between consecutive atoms gamma(v) = v * tail is linear and
                // increasing, so the first crossing is exact.
                let atoms = self.atoms().unwrap();
                let mut tail = 1.0;
                let mut lo = 0.0;
                for &(a, m) in &atoms {
                    // segment (lo, a] has constant tail mass
                    if a * tail >= y {
                        return Ok((y / tail).max(lo));
                    }
                    lo = a;
                    tail -= m;
                }
                Ok(peak.price)
            }
            _ => {
                let n = self.grid_size;
                let step = self.support_max / (n - 1) as f64;
                let mut prev = 0.0;
                for i in 1..n {
                    let v = step * i as f64;
                    if self.gamma(v) >= y {
                        let (lo, hi) =
                            crate::numerics::bisect_boundary(|t| self.gamma(t) >= y, prev, v, 0.0);
                        let _ = lo;
                        return Ok(hi);
                    }
                    prev = v;
                }
                Ok(peak.price)
            }
        }
    }

    /// `gamma_inverse` for a nondecreasing batch of targets, sharing a single
    /// left-to-right sweep of the grid. Used by menu constructions that need
    /// thousands of inversions.
    pub(crate) fn gamma_inverse_sweep(&self, targets: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(targets.len());
        if self.atoms().is_some() {
            for &y in targets {
                out.push(self.gamma_inverse(y)?);
            }
            return Ok(out);
        }
        let peak = self.myerson_price()?;
        let n = self.grid_size;
        let step = self.support_max / (n - 1) as f64;
        let mut i = 0usize;
        for &y in targets {
            if y <= 0.0 {
                out.push(0.0);
                continue;
            }
            if y > peak.revenue + 1e-12 {
                return Err(Error::OutOfRange { target: y, max: peak.revenue });
            }
            let y = y.min(peak.revenue);
            while i < n - 1 && self.gamma(step * (i + 1) as f64) < y {
                i += 1;
            }
            if i >= n - 1 {
                out.push(peak.price);
                continue;
            }
            let (_, hi) = crate::numerics::bisect_boundary(
                |t| self.gamma(t) >= y,
                step * i as f64,
                step * (i + 1) as f64,
                0.0,
            );
            out.push(hi);
        }
        Ok(out)
    }

    /// Points where the density is discontinuous (used by quadrature tests).
    pub fn density_breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::Uniform { lo, hi } => vec![*lo, *hi],
            Family::Exponential { .. } => vec![],
            Family::Pareto { scale, .. } => vec![*scale],
            Family::PointMass { .. } | Family::Discrete { .. } => vec![],
            Family::TwoUniformMixture { first, second, .. } => {
                let mut pts = vec![first.0, first.1, second.0, second.1];
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                pts
            }
        }
    }
}
