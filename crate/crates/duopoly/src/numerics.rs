//! Small scalar search routines used by the distribution and solver code.

/// Golden-section maximization of `f` on `[a, b]`.
///
/// Assumes `f` is unimodal on the bracket (we only ever call it on a
/// two-cell bracket around a grid argmax, where that holds for every curve
/// we optimize). Returns the located maximizer and its value.
pub(crate) fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Bisect for the boundary of an upward-closed predicate on `[lo, hi]`.
///
/// Requires `pred(hi)` to hold and `pred(lo)` to fail; maintains that
/// invariant and returns the final `(lo, hi)` bracket with `hi - lo <= tol`.
pub(crate) fn bisect_boundary(
    pred: impl Fn(f64) -> bool,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket narrower than float resolution
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|v| v * (1.0 - v), 0.3, 0.7, 80);
        // maximizer accuracy is sqrt(eps)-limited on a smooth peak; the
        // attained value is far more accurate than the argument
        assert!((x - 0.5).abs() < 1e-7);
        assert!((fx - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bisect_locates_threshold() {
        let (lo, hi) = bisect_boundary(|v| v >= 0.3, 0.0, 1.0, 1e-12);
        assert!(lo < 0.3 && hi >= 0.3 && hi - lo <= 1e-12);
    }
}
