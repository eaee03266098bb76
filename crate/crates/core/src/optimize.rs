//! One-dimensional maximization helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximize over a uniform grid of `points` nodes on `[a, b]`, then refine
/// around the best node by golden section. Never returns less than the
/// best grid value.
pub fn grid_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize, tol: f64) -> (f64, f64) {
    let n = points.max(2);
    let h = (b - a) / (n - 1) as f64;
    let (mut bi, mut bv) = (0, f64::NEG_INFINITY);
    for i in 0..n {
        let v = f(a + h * i as f64);
        if v > bv {
            bi = i;
            bv = v;
        }
    }
    let lo = a + h * bi.saturating_sub(1) as f64;
    let hi = (a + h * (bi + 1) as f64).min(b);
    let (x, v) = golden_max(&f, lo, hi, tol);
    if v >= bv {
        (x, v)
    } else {
        (a + h * bi as f64, bv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6 && (v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_handles_multimodal() {
        let (x, _) = grid_max(|x| (5.0 * x).sin() + 0.1 * x, 0.0, 6.0, 200, 1e-10);
        assert!((x - (std::f64::consts::FRAC_PI_2 + 8.0 * std::f64::consts::PI) / 5.0).abs() < 1e-2);
    }
}
