use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::extract::{extract_orders, ProbeSpec};
use super::{nonempty_subsets, nonempty_subsets_of, AxisSet, FamilyKey, TotalFamily};
use crate::error::Result;
use crate::exec::{self, Execution};
use crate::geometry::Polysector;
use crate::series::{index_box, MultiIndex};

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceOptions {
    pub tol: f64,
    /// Per-axis cap on both `N_J` and `N_L`.
    pub max_order: usize,
    /// Sample points for `z_{(J∪L)'}`.
    pub points: usize,
    pub probe: ProbeSpec,
    pub exec: Execution,
}

impl Default for CoherenceOptions {
    fn default() -> Self {
        CoherenceOptions { tol: 1e-6, max_order: 3, points: 2, probe: ProbeSpec::default(), exec: Execution::default() }
    }
}

/// Residual of one `(J, L, N_J, N_L)` pair, maximized over sample points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairResidual {
    pub j: Vec<usize>,
    pub l: Vec<usize>,
    pub n_j: MultiIndex,
    pub n_l: MultiIndex,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub checked_pairs: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Pairs whose residual exceeds the tolerance, sorted by pair key.
    pub failures: Vec<PairResidual>,
    /// Pairs whose probe did not converge (the residual still counts).
    pub nonconverged: usize,
}

impl CoherenceReport {
    pub fn is_coherent(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Deterministic interior sample points of `sub`.
pub(crate) fn sample_points(sub: Option<&Polysector>, count: usize) -> Vec<Vec<Complex64>> {
    let Some(sub) = sub else { return vec![Vec::new()] };
    (0..count.max(1))
        .map(|k| {
            let frac = (k + 1) as f64 / (count.max(1) + 1) as f64;
            sub.sectors()
                .iter()
                .map(|s| {
                    let r = s.rho().min(1.0) * (0.25 + 0.5 * frac);
                    let th = s.bisector() + 0.25 * s.opening().min(std::f64::consts::PI) * (2.0 * frac - 1.0);
                    Complex64::from_polar(r, th)
                })
                .collect()
        })
        .collect()
}

struct Task {
    j: AxisSet,
    n_j: MultiIndex,
    l: AxisSet,
    point: Vec<Complex64>,
}

type TaskResult = Vec<(PairKey, f64, bool)>;
type PairKey = (AxisSet, MultiIndex, AxisSet, MultiIndex);

/// Compare `lim D^{N_L} f_{N_J} / N_L!` against the stored `f_{(N_J,N_L)}`.
/// Residuals are `|extracted − stored| / max(1, |stored|)`.
pub fn check_coherence(fam: &TotalFamily, opts: &CoherenceOptions) -> Result<CoherenceReport> {
    opts.probe.validate()?;
    let n = fam.dim();
    let cap = |j: usize| fam.index_bound()[j].min(opts.max_order);
    let mut tasks = Vec::new();
    for j in nonempty_subsets(n) {
        if j.len() == n {
            continue;
        }
        let j_axes = j.axes();
        let rest = j.complement(n);
        let bound: Vec<usize> = j_axes.iter().map(|&a| cap(a)).collect();
        for n_j in index_box(&bound) {
            // only stored base elements are checked
            if fam.get(&FamilyKey { axes: j, index: n_j.clone() }).is_err() {
                continue;
            }
            for l in nonempty_subsets_of(&rest) {
                let outer = j.union(l);
                let sub = fam.element_domain(outer);
                for point in sample_points(sub.as_ref(), opts.points) {
                    tasks.push(Task { j, n_j: n_j.clone(), l, point });
                }
            }
        }
    }
    let results: Vec<Result<TaskResult>> = exec::map(opts.exec, &tasks, |t| run_task(fam, t, &cap, &opts.probe));
    let mut merged: std::collections::BTreeMap<PairKey, (f64, bool)> = std::collections::BTreeMap::new();
    for r in results {
        for (key, res, conv) in r? {
            let e = merged.entry(key).or_insert((0.0, true));
            e.0 = if res.is_nan() { f64::INFINITY } else { e.0.max(res) };
            e.1 &= conv;
        }
    }
    let mut report = CoherenceReport {
        checked_pairs: merged.len(),
        max_residual: 0.0,
        tolerance: opts.tol,
        failures: Vec::new(),
        nonconverged: 0,
    };
    for ((j, n_j, l, n_l), (res, conv)) in merged {
        report.max_residual = report.max_residual.max(res);
        if !conv {
            report.nonconverged += 1;
        }
        if res > opts.tol {
            report.failures.push(PairResidual { j: j.axes(), l: l.axes(), n_j, n_l, residual: res, converged: conv });
        }
    }
    Ok(report)
}

fn run_task(fam: &TotalFamily, t: &Task, cap: &dyn Fn(usize) -> usize, probe: &ProbeSpec) -> Result<TaskResult> {
    let n = fam.dim();
    let base = fam.get(&FamilyKey { axes: t.j, index: t.n_j.clone() })?;
    let Some(f) = base.as_function() else { return Ok(Vec::new()) };
    let rest = t.j.complement(n);
    let l_axes = t.l.axes();
    // positions of L and of (J∪L)' inside the element's own axes
    let local_l: Vec<usize> = l_axes.iter().map(|a| rest.iter().position(|r| r == a).expect("L ⊆ J'")).collect();
    let outer = t.j.union(t.l);
    let l_bound: Vec<usize> = l_axes.iter().map(|&a| cap(a)).collect();
    let mut orders = Vec::new();
    let mut targets = Vec::new();
    for n_l in index_box(&l_bound) {
        let mut merged: Vec<(usize, usize)> =
            t.j.axes().into_iter().zip(t.n_j.iter().copied()).chain(l_axes.iter().copied().zip(n_l.iter().copied())).collect();
        merged.sort_unstable();
        let key = FamilyKey { axes: outer, index: merged.into_iter().map(|p| p.1).collect() };
        if let Ok(el) = fam.get(&key) {
            orders.push(n_l.clone());
            targets.push((n_l, el.eval(&t.point)));
        }
    }
    if orders.is_empty() {
        return Ok(Vec::new());
    }
    let limits = extract_orders(f, &local_l, &orders, &t.point, probe)?;
    Ok(limits
        .into_iter()
        .zip(targets)
        .map(|(lim, (n_l, stored))| {
            let res = (lim.value - stored).norm() / stored.norm().max(1.0);
            ((t.j, t.n_j.clone(), t.l, n_l), res, lim.converged)
        })
        .collect())
}
