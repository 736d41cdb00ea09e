//! Seller-side optimization: Alice's guaranteed-split lottery, Bob's best
//! responses (posted prices and searched menus), bottom-properization, the
//! monopolist floor transform, the 1/e menu, Stackelberg outcome assembly,
//! and Nash deviation search at a point mass.
//!
//! Search routines are deterministic given a seed and use budgets that are
//! test budgets, not completeness claims: the structural results they
//! exercise supply the guarantees, the searches act as falsification
//! oracles.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::buyer::{ab_start, best_response};
use crate::competition::{monopolist_revenue, rev_fixed_price, revenues};
use crate::distributions::{Kind, ValueDistribution};
use crate::error::{Error, Result};
use crate::menus::{PricingMenu, SingleLottery};

/// Which seller an action belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seller {
    Alice,
    Bob,
}

/// Number of integrand samples for the discretized 1/e menu.
pub const ONE_OVER_E_GRID: usize = 4096;

/// Alice's lottery with allocation 1/2 priced at the smallest value where
/// the revenue curve reaches half its peak. Against a best-responding Bob
/// this guarantees the (1/4, 1/2) split of the monopoly benchmark for
/// regular or DMR distributions (checked for analytic kinds; atomic kinds
/// are caller-asserted).
pub fn construct_theorem31(d: &ValueDistribution) -> Result<SingleLottery> {
    let m = d.myerson_price()?;
    if d.kind() == Kind::AnalyticContinuous {
        let r = d.classify_regularity()?;
        if !(r.is_regular() || r.is_dmr()) {
            return Err(Error::InvalidParameter(
                "construct_theorem31 requires a regular or DMR distribution".into(),
            ));
        }
    }
    let p = d.gamma_inverse(0.5 * m.revenue)?;
    SingleLottery::new(0.5, p)
}

/// [`construct_theorem31`] with the price lowered by `nudge` (default
/// `1e-6` of the Myerson price), making Bob's preference for the high
/// branch strict instead of a tie.
pub fn construct_theorem31_nudged(d: &ValueDistribution, nudge: Option<f64>) -> Result<SingleLottery> {
    let base = construct_theorem31(d)?;
    let eps = nudge.unwrap_or(1e-6 * d.myerson_price()?.price);
    if eps < 0.0 {
        return Err(Error::InvalidParameter("nudge must be nonnegative".into()));
    }
    SingleLottery::new(base.z(), (base.p() - eps).max(0.0))
}

/// Bob's revenue-maximizing posted price against the lottery, with ties
/// broken toward the larger price. Optimizes the two closed-form branches
/// (undercut at `q <= p`, skim the lottery's complement at `q > p`)
/// separately and compares.
pub fn bob_best_posted_price(a: &SingleLottery, d: &ValueDistribution) -> (f64, f64) {
    let tie = 1e-9 * d.myerson_price().map(|m| m.revenue).unwrap_or(0.0).max(1.0);
    let mut best: (f64, f64) = (0.0, 0.0); // (q, revenue)
    let mut consider = |q: f64, rev: f64| {
        if rev > best.1 + tie || (rev > best.1 - tie && q > best.0) {
            best = (q, rev);
        }
    };

    if let Some(atoms) = d.atoms() {
        // revenue is piecewise `q * tail` between atoms, so maxima sit at
        // atom values or at the branch boundary p
        for &(v, _) in &atoms {
            consider(v, rev_fixed_price(a, v, d));
        }
        consider(a.p(), rev_fixed_price(a, a.p(), d));
        return best;
    }

    let vmax = d.support_max();
    let n = d.grid_size();
    let step = vmax / (n - 1) as f64;
    // undercut branch: maximize gamma on [0, min(p, vmax)]
    let hi1 = a.p().min(vmax);
    if hi1 > 0.0 {
        let mut arg = 0.0;
        let mut val = 0.0;
        let mut q = 0.0;
        while q < hi1 {
            let g = d.gamma(q);
            if g > val {
                val = g;
                arg = q;
            }
            q += step;
        }
        let (qr, vr) = crate::numerics::golden_section_max(
            |t| d.gamma(t),
            (arg - step).max(0.0),
            (arg + step).min(hi1),
            60,
        );
        consider(qr, vr);
        consider(hi1, d.gamma(hi1));
    }
    // high branch: maximize (1 - z) * gamma on (p, vmax]
    if a.z() < 1.0 && a.p() < vmax {
        let scale = 1.0 - a.z();
        let mut arg = vmax;
        let mut val = scale * d.gamma(vmax);
        let mut q = vmax;
        while q > a.p() {
            let g = scale * d.gamma(q);
            if g > val {
                val = g;
                arg = q;
            }
            q -= step;
        }
        let (qr, vr) = crate::numerics::golden_section_max(
            |t| scale * d.gamma(t),
            (arg - step).max(a.p()),
            (arg + step).min(vmax),
            60,
        );
        consider(qr, vr);
        consider(vmax, scale * d.gamma(vmax));
    }
    best
}

/// Outcome of pitting the best posted price against a searched menu.
#[derive(Clone, Debug, Serialize)]
pub struct BestResponseReport {
    pub best_posted_price: f64,
    pub posted_revenue: f64,
    pub challenger: PricingMenu,
    pub challenger_revenue: f64,
    /// posted minus challenger revenue; nonnegative when a posted price is
    /// a best response.
    pub margin: f64,
}

/// Random-restart coordinate search for a Bob menu beating his best posted
/// price. `budget` caps the number of candidate evaluations; search runs on
/// a coarse value grid, with the final margin recomputed on the full grid.
/// Deterministic given `seed`.
pub fn bob_menu_search(
    a: &SingleLottery,
    d: &ValueDistribution,
    budget: usize,
    seed: u64,
) -> BestResponseReport {
    let (q, posted) = bob_best_posted_price(a, d);
    let price_scale = match d.myerson_price() {
        Ok(m) => (2.0 * m.price).max(1e-3),
        Err(_) => d.support_max().max(1e-3),
    };
    let coarse = if d.kind() == Kind::AnalyticContinuous && d.grid_size() > 2001 {
        d.clone().with_grid_size(1001)
    } else {
        d.clone()
    };
    let alice_menu = a.menu();
    let eval = |menu: &PricingMenu| revenues(&alice_menu, menu, &coarse).rev_bob;

    let restarts = 32;
    let per_restart = (budget / restarts).max(8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_menu = PricingMenu::fixed_price(q).unwrap();
    let mut best_val = eval(&best_menu);
    for _ in 0..restarts {
        let mut menu = random_proper_menu(&mut rng, 8, price_scale);
        let mut val = eval(&menu);
        let mut delta = 0.3;
        for _ in 0..per_restart {
            if let Some(next) = perturb_menu(&mut rng, &menu, delta, price_scale) {
                let nval = eval(&next);
                if nval > val + 1e-12 {
                    menu = next;
                    val = nval;
                }
            }
            delta *= 0.97;
        }
        if val > best_val + 1e-12 {
            best_val = val;
            best_menu = menu;
        }
    }

    let challenger_revenue = revenues(&alice_menu, &best_menu, d).rev_bob;
    BestResponseReport {
        best_posted_price: q,
        posted_revenue: posted,
        challenger: best_menu,
        challenger_revenue,
        margin: posted - challenger_revenue,
    }
}

/// A random proper menu with at most `max_breakpoints` offers, prices
/// scaled so bang-per-buck stays below `scale`.
pub(crate) fn random_proper_menu(
    rng: &mut ChaCha8Rng,
    max_breakpoints: usize,
    scale: f64,
) -> PricingMenu {
    let k = rng.gen_range(1..=max_breakpoints);
    let mut pts = Vec::with_capacity(k);
    for _ in 0..k {
        let x: f64 = rng.gen_range(1e-3..=1.0);
        let price = rng.gen::<f64>() * scale * x;
        pts.push((x, price));
    }
    PricingMenu::properize(&pts).expect("random offers are in range")
}

/// Perturb one coordinate of one offer and re-properize. Returns `None`
/// for a menu with no offers beyond the origin.
fn perturb_menu(
    rng: &mut ChaCha8Rng,
    menu: &PricingMenu,
    delta: f64,
    scale: f64,
) -> Option<PricingMenu> {
    let bp = menu.breakpoints();
    if bp.len() < 2 {
        return None;
    }
    let mut pts: Vec<(f64, f64)> = bp[1..].to_vec();
    let j = rng.gen_range(0..pts.len());
    let bump = (rng.gen::<f64>() - 0.5) * 2.0 * delta;
    if rng.gen::<bool>() {
        pts[j].0 = (pts[j].0 + bump).clamp(1e-3, 1.0);
    } else {
        pts[j].1 = (pts[j].1 + bump * scale).max(0.0);
    }
    PricingMenu::properize(&pts).ok()
}

/// Raise the menu to at least the line `p_hat * x`, keeping it proper: the
/// pointwise maximum of a convex menu and a line, with crossing points
/// inserted as breakpoints.
pub fn bottom_properize(b: &PricingMenu, p_hat: f64) -> Result<PricingMenu> {
    if !(p_hat >= 0.0) {
        return Err(Error::InvalidParameter("p_hat must be nonnegative".into()));
    }
    let bp = b.breakpoints();
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(bp.len() + 2);
    for &(x, c) in bp {
        pts.push((x, c.max(p_hat * x)));
    }
    // a segment strictly straddling the line contributes its crossing point
    for w in bp.windows(2) {
        let ((x0, c0), (x1, c1)) = (w[0], w[1]);
        let d0 = c0 - p_hat * x0;
        let d1 = c1 - p_hat * x1;
        if (d0 > 0.0) != (d1 > 0.0) && d0 != 0.0 && d1 != 0.0 {
            let t = x0 + (x1 - x0) * d0 / (d0 - d1);
            pts.push((t, p_hat * t));
        }
    }
    PricingMenu::properize(&pts)
}

/// Result of testing that bottom-properization cannot cost Bob revenue.
#[derive(Clone, Debug, Serialize)]
pub struct BottomProperizeCheck {
    pub s: f64,
    pub p_hat: f64,
    pub rev_before: f64,
    pub rev_after: f64,
    pub ok: bool,
}

/// Raise Bob's menu to the bang-per-buck rate paid by the threshold type
/// and compare revenues. Against a single-lottery Alice and regular/DMR
/// values, the raised menu earns at least as much.
pub fn bottom_properize_check(
    a: &SingleLottery,
    b: &PricingMenu,
    d: &ValueDistribution,
) -> Result<BottomProperizeCheck> {
    let s = ab_start(a, b, d.support_max());
    let p_hat = if s.is_finite() {
        let x = best_response(&a.menu(), b, s).bob_option();
        if x > 0.0 {
            b.price(x).unwrap() / x
        } else {
            0.0 // threshold type buys nothing from Bob: any floor is vacuous
        }
    } else {
        0.0
    };
    let raised = bottom_properize(b, p_hat)?;
    let rev_before = revenues(&a.menu(), b, d).rev_bob;
    let rev_after = revenues(&a.menu(), &raised, d).rev_bob;
    Ok(BottomProperizeCheck { s, p_hat, rev_before, rev_after, ok: rev_after >= rev_before - 1e-6 })
}

/// Floor a monopolist's menu at the bang-per-buck rate of the option the
/// reference type buys: `M'(x) = max(M(x), q x)` with
/// `q = M(demand(v_ref)) / demand(v_ref)`.
pub fn monopolist_floor_transform(
    m: &PricingMenu,
    v_star_ref: f64,
    _d: &ValueDistribution,
) -> Result<PricingMenu> {
    bottom_properize(m, floor_rate(m, v_star_ref)?)
}

fn floor_rate(m: &PricingMenu, v_star_ref: f64) -> Result<f64> {
    let x = m.demand(v_star_ref);
    if x <= 0.0 {
        return Err(Error::ZeroDemand);
    }
    Ok(m.price(x).unwrap() / x)
}

/// The floor transform together with its numeric revenue comparison and
/// the density conditions under which the comparison is guaranteed.
#[derive(Clone, Debug, Serialize)]
pub struct FloorTransformReport {
    pub q: f64,
    pub menu: PricingMenu,
    /// Whether `v f(v) - (1 - F(v))` stays below its value at `q` on
    /// `[0, q]` and above it on `[q, v_ref)`, sampled on the grid.
    pub conditions_hold: bool,
    pub revenue_before: f64,
    pub revenue_after: f64,
}

pub fn floor_transform_report(
    m: &PricingMenu,
    v_star_ref: f64,
    d: &ValueDistribution,
) -> Result<FloorTransformReport> {
    if d.kind() != Kind::AnalyticContinuous {
        return Err(Error::UnsupportedKind("floor transform conditions need a density"));
    }
    let q = floor_rate(m, v_star_ref)?;
    let menu = bottom_properize(m, q)?;
    let h = |v: f64| v * d.pdf(v) - (1.0 - d.cdf(v));
    let hq = h(q);
    let slack = 1e-9;
    let mut conditions_hold = true;
    for v in d.grid() {
        if v <= q && h(v) > hq + slack {
            conditions_hold = false;
            break;
        }
        if v >= q && v < v_star_ref && h(v) < hq - slack {
            conditions_hold = false;
            break;
        }
    }
    Ok(FloorTransformReport {
        q,
        revenue_before: monopolist_revenue(m, d),
        revenue_after: monopolist_revenue(&menu, d),
        menu,
        conditions_hold,
    })
}

/// Alice's 1/e menu: marginal price at allocation `t` is the smallest value
/// whose revenue-curve level is `M / (e (1 - t))`, integrated up to the cap
/// `1 - 1/e`. Stored discretized on `grid` points with trapezoid prices.
pub fn alice_one_over_e_menu(d: &ValueDistribution, grid: usize) -> Result<PricingMenu> {
    let m = d.myerson_price()?;
    let n = grid.max(2);
    let x_bar = 1.0 - (-1.0f64).exp();
    let dx = x_bar / (n - 1) as f64;
    let targets: Vec<f64> = (0..n)
        .map(|i| {
            let x = dx * i as f64;
            (m.revenue / (std::f64::consts::E * (1.0 - x))).min(m.revenue)
        })
        .collect();
    let marginal = d.gamma_inverse_sweep(&targets)?;
    let mut pts = Vec::with_capacity(n);
    let mut price = 0.0;
    pts.push((0.0, 0.0));
    for i in 1..n {
        price += 0.5 * (marginal[i - 1] + marginal[i]) * dx;
        pts.push((dx * i as f64, price));
    }
    PricingMenu::properize(&pts)
}

/// Alice's lottery, Bob's best posted response, and the resulting revenue
/// split relative to the monopoly benchmark.
#[derive(Clone, Debug, Serialize)]
pub struct StackelbergOutcome {
    pub alice_menu: SingleLottery,
    pub bob_menu: PricingMenu,
    pub rev_alice: f64,
    pub rev_bob: f64,
    pub monopoly_benchmark: f64,
    pub ratio_alice: f64,
    pub ratio_bob: f64,
}

pub fn stackelberg_outcome(d: &ValueDistribution) -> Result<StackelbergOutcome> {
    stackelberg_from_lottery(d, construct_theorem31(d)?)
}

/// [`stackelberg_outcome`] built from the nudged lottery.
pub fn stackelberg_outcome_nudged(
    d: &ValueDistribution,
    nudge: Option<f64>,
) -> Result<StackelbergOutcome> {
    stackelberg_from_lottery(d, construct_theorem31_nudged(d, nudge)?)
}

fn stackelberg_from_lottery(
    d: &ValueDistribution,
    lottery: SingleLottery,
) -> Result<StackelbergOutcome> {
    let m = d.myerson_price()?;
    let (q, _) = bob_best_posted_price(&lottery, d);
    let bob = PricingMenu::fixed_price(q)?;
    let out = revenues(&lottery.menu(), &bob, d);
    Ok(StackelbergOutcome {
        alice_menu: lottery,
        bob_menu: bob,
        rev_alice: out.rev_alice,
        rev_bob: out.rev_bob,
        monopoly_benchmark: m.revenue,
        ratio_alice: out.rev_alice / m.revenue,
        ratio_bob: out.rev_bob / m.revenue,
    })
}

/// Verdict of the point-mass equilibrium check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NashVerdict {
    /// Both sellers already earn zero: consistent with equilibrium.
    EquilibriumConsistent,
    /// A strictly improving single-lottery deviation was found.
    DeviationFound,
    /// Positive revenue but no improving deviation at this grid step.
    InconclusiveAtResolution,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NashDeviation {
    pub seller: Seller,
    pub z: f64,
    pub p: f64,
    pub old_revenue: f64,
    pub new_revenue: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NashReport {
    pub rev_alice: f64,
    pub rev_bob: f64,
    pub verdict: NashVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<NashDeviation>,
}

/// At a point mass, any profile with positive total revenue admits a
/// strictly improving single-lottery deviation by one of the sellers. This
/// scans (z, p) deviations on a grid — Bob first, then Alice, descending in
/// z then p so that undercuts near the rival's price surface early — and
/// reports the first strict improvement.
pub fn nash_deviation_search(
    a: &PricingMenu,
    b: &PricingMenu,
    d: &ValueDistribution,
    step: f64,
) -> Result<NashReport> {
    if d.kind() != Kind::PointMass {
        return Err(Error::UnsupportedDistribution);
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("grid step must be positive".into()));
    }
    let v0 = d.atoms().unwrap()[0].0;
    let current = revenues(a, b, d);
    if current.rev_alice <= 1e-9 && current.rev_bob <= 1e-9 {
        return Ok(NashReport {
            rev_alice: current.rev_alice,
            rev_bob: current.rev_bob,
            verdict: NashVerdict::EquilibriumConsistent,
            deviation: None,
        });
    }
    let zn = (1.0 / step).round() as usize;
    let pn = (v0.max(step) / step).round() as usize;
    for seller in [Seller::Bob, Seller::Alice] {
        let old = match seller {
            Seller::Bob => current.rev_bob,
            Seller::Alice => current.rev_alice,
        };
        for zi in (1..=zn).rev() {
            let z = (zi as f64 * step).min(1.0);
            for pi in (0..=pn).rev() {
                let p = (pi as f64 * step).min(v0);
                let lottery = SingleLottery::new(z, p)?.menu();
                let new = match seller {
                    Seller::Bob => revenues(a, &lottery, d).rev_bob,
                    Seller::Alice => revenues(&lottery, b, d).rev_alice,
                };
                if new > old + 1e-9 {
                    return Ok(NashReport {
                        rev_alice: current.rev_alice,
                        rev_bob: current.rev_bob,
                        verdict: NashVerdict::DeviationFound,
                        deviation: Some(NashDeviation {
                            seller,
                            z,
                            p,
                            old_revenue: old,
                            new_revenue: new,
                        }),
                    });
                }
            }
        }
    }
    Ok(NashReport {
        rev_alice: current.rev_alice,
        rev_bob: current.rev_bob,
        verdict: NashVerdict::InconclusiveAtResolution,
        deviation: None,
    })
}

/// Bob's best posted price against a general Alice menu when the buyer's
/// value is a point mass at 1, with ties toward the larger price.
///
/// The returned revenue is an upper bound over all posted prices: Bob's
/// revenue can approach but not attain a left limit at each menu slope, so
/// those limits enter through prices just below the slopes.
pub fn best_posted_response_point_mass(a: &PricingMenu) -> (f64, f64) {
    let pm = ValueDistribution::point_mass(1.0).unwrap();
    let eval = |q: f64| revenues(a, &PricingMenu::fixed_price(q).unwrap(), &pm).rev_bob;
    let mut candidates: Vec<f64> = (0..=1000).map(|i| i as f64 * 1e-3).collect();
    // left limits just below each slope (past the menu's price epsilon, but
    // close enough that downstream bounds built from the result keep slack)
    for &s in a.segment_slopes() {
        if s > 0.0 && s <= 1.0 {
            candidates.push(s);
            candidates.push(s - 1e-10);
        }
    }
    candidates.push(1.0 - 1e-10);
    let mut best = (0.0, 0.0);
    for q in candidates {
        if q < 0.0 {
            continue;
        }
        let rev = eval(q);
        if rev > best.1 + 1e-12 || (rev > best.1 - 1e-12 && q > best.0) {
            best = (q, rev);
        }
    }
    best
}

/// One breakpoint's subgradient test against the fixed-price revenue bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SubgradientCheck {
    pub z: f64,
    pub slope: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgradientBoundReport {
    /// Upper bound on Bob's posted-price revenue against the menu.
    pub r: f64,
    pub r_price: f64,
    pub checks: Vec<SubgradientCheck>,
    pub all_ok: bool,
}

/// At a point mass at 1, every slope of Alice's (already convex) menu at a
/// breakpoint `z < 1 - R` is at most `R / (1 - z)`, where `R` bounds Bob's
/// posted-price revenue against the menu.
///
/// The hypothesis is strict, and menus exist whose extreme slopes sit
/// exactly on the `z = 1 - R` boundary (any marginal rate above the
/// buyer's value forces `R >= 1 - z` via a price just under 1). Since the
/// computed `R` is a finite-candidate maximum a hair below the true
/// supremum, breakpoints within `1e-6` of the boundary are treated as out
/// of hypothesis rather than misclassified.
pub fn subgradient_bound_check(a: &PricingMenu) -> SubgradientBoundReport {
    let (r_price, r) = best_posted_response_point_mass(a);
    let envelope = a.lower_convex_envelope();
    let bp = envelope.breakpoints();
    let slopes = envelope.segment_slopes();
    let mut checks = Vec::new();
    let mut all_ok = true;
    for (j, &slope) in slopes.iter().enumerate() {
        let z = bp[j].0;
        if z < 1.0 - r - 1e-6 {
            let bound = r / (1.0 - z);
            let ok = slope <= bound + 1e-9;
            all_ok &= ok;
            checks.push(SubgradientCheck { z, slope, bound, ok });
        }
    }
    SubgradientBoundReport { r, r_price, checks, all_ok }
}

/// Search over Alice menus at a point mass at 1, maximizing her revenue
/// under Bob's best posted response. Returns the best menu found and its
/// revenue. Deterministic given `seed`.
pub fn alice_menu_search_point_mass(
    seed: u64,
    restarts: usize,
    iters: usize,
    max_breakpoints: usize,
) -> (PricingMenu, f64) {
    let pm = ValueDistribution::point_mass(1.0).unwrap();
    let eval = |menu: &PricingMenu| {
        let (q, _) = best_posted_response_point_mass(menu);
        revenues(menu, &PricingMenu::fixed_price(q).unwrap(), &pm).rev_alice
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_menu = PricingMenu::give_away();
    let mut best_val = eval(&best_menu);
    for _ in 0..restarts {
        let mut menu = random_proper_menu(&mut rng, max_breakpoints, 1.0);
        let mut val = eval(&menu);
        let mut delta = 0.25;
        for _ in 0..iters {
            if let Some(next) = perturb_menu(&mut rng, &menu, delta, 1.0) {
                let nval = eval(&next);
                if nval > val + 1e-12 {
                    menu = next;
                    val = nval;
                }
            }
            delta *= 0.96;
        }
        if val > best_val + 1e-12 {
            best_val = val;
            best_menu = menu;
        }
    }
    (best_menu, best_val)
}
