//! Adaptive composite Gauss–Legendre quadrature on a real interval.
//!
//! Each panel carries its 15-point value and the value from its two
//! halves; the difference is the panel's error estimate. The panel with
//! the largest estimate is bisected until the total meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ORDER: usize = 15;
const MAX_PANELS: usize = 1 << 14;

/// Fifteen-point Gauss–Legendre nodes and weights on [-1, 1].
fn gauss_legendre_15() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut rule = [(0.0, 0.0); ORDER];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// Tolerances for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSpec {
    /// Relative tolerance on the integral.
    pub tol: f64,
    /// Absolute floor, used when the integral is (nearly) zero.
    pub abs_tol: f64,
    /// Maximum bisection depth of a single panel.
    pub max_depth: u32,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { tol: 1e-12, abs_tol: 1e-300, max_depth: 30 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Vector-valued counterpart of [`QuadResult`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuadVecResult {
    pub values: Vec<Complex64>,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rule<F>(f: &F, a: f64, b: f64, width: usize) -> Vec<Complex64>
where
    F: Fn(f64, &mut [Complex64]),
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = vec![Complex64::new(0.0, 0.0); width];
    let mut buf = vec![Complex64::new(0.0, 0.0); width];
    for &(x, w) in gauss_legendre_15() {
        f(mid + half * x, &mut buf);
        for (s, v) in acc.iter_mut().zip(&buf) {
            *s += v * (w * half);
        }
    }
    acc
}

fn max_diff(x: &[Complex64], y: &[Complex64], z: &[Complex64]) -> f64 {
    x.iter().zip(y).zip(z).map(|((a, b), c)| (a - b - c).norm()).fold(0.0, f64::max)
}

fn panel<F>(f: &F, a: f64, b: f64, depth: u32, whole: Vec<Complex64>, width: usize) -> Panel
where
    F: Fn(f64, &mut [Complex64]),
{
    let m = 0.5 * (a + b);
    let left = rule(f, a, m, width);
    let right = rule(f, m, b, width);
    let error = max_diff(&whole, &left, &right);
    Panel { a, b, depth, left, right, error }
}

/// Integrate a vector-valued function over `[a, b]`. The callback writes
/// `width` components into its output buffer; the error is the max over
/// components and the tolerance applies to the largest component.
pub fn integrate_vec<F>(f: F, a: f64, b: f64, width: usize, spec: &QuadSpec) -> QuadVecResult
where
    F: Fn(f64, &mut [Complex64]),
{
    let whole = rule(&f, a, b, width);
    let first = panel(&f, a, b, 0, whole, width);
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut converged = true;
    loop {
        let (values, error) = totals(&heap, width);
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if error <= (spec.tol * scale).max(spec.abs_tol) {
            break;
        }
        if heap.len() >= MAX_PANELS {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= spec.max_depth {
            heap.push(worst);
            converged = false;
            break;
        }
        let m = 0.5 * (worst.a + worst.b);
        heap.push(panel(&f, worst.a, m, worst.depth + 1, worst.left, width));
        heap.push(panel(&f, m, worst.b, worst.depth + 1, worst.right, width));
    }
    let panels = heap.len();
    let (values, error) = totals(&heap, width);
    QuadVecResult { values, error, panels, converged }
}

fn totals(heap: &BinaryHeap<Panel>, width: usize) -> (Vec<Complex64>, f64) {
    let mut values = vec![Complex64::new(0.0, 0.0); width];
    let mut error = 0.0;
    for p in heap.iter() {
        for (v, (l, r)) in values.iter_mut().zip(p.left.iter().zip(&p.right)) {
            *v += l + r;
        }
        error += p.error;
    }
    (values, error)
}

/// Integrate a complex-valued function of a real variable over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadSpec) -> QuadResult
where
    F: Fn(f64) -> Complex64,
{
    let r = integrate_vec(|x, out: &mut [Complex64]| out[0] = f(x), a, b, 1, spec);
    QuadResult { value: r.values[0], error: r.error, panels: r.panels, converged: r.converged }
}
