//! Limits `lim_{z_J→0} D^{N_J} f / N_J!` from Cauchy integrals on shrinking circles.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{Evaluation, SampledFunction};
use crate::series::MultiIndex;

/// How the probe point approaches the vertex and how derivatives are taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeSpec {
    /// First radius as a fraction of `min(ρ_j, 1)`.
    pub start_fraction: f64,
    /// Ratio between successive radii.
    pub ratio: f64,
    pub max_levels: usize,
    pub richardson_order: usize,
    /// Cauchy circle radius as a fraction of the distance to the boundary.
    pub circle_fraction: f64,
    pub nodes: usize,
    /// Relative agreement required of three successive extrapolants.
    pub tol: f64,
    /// Approach directions per axis of `J`; defaults to the sector bisectors.
    pub directions: Option<Vec<f64>>,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            start_fraction: 0.25,
            ratio: 0.8,
            max_levels: 32,
            richardson_order: 8,
            circle_fraction: 0.5,
            nodes: 64,
            tol: 1e-8,
            directions: None,
        }
    }
}

impl ProbeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidArgument("probe ratio must lie in (0, 1)".into()));
        }
        if !(self.start_fraction > 0.0 && self.start_fraction < 1.0) {
            return Err(Error::InvalidArgument("start_fraction must lie in (0, 1)".into()));
        }
        if !(self.circle_fraction > 0.0 && self.circle_fraction < 1.0) {
            return Err(Error::InvalidArgument("circle_fraction must lie in (0, 1)".into()));
        }
        if self.nodes < 4 || self.max_levels < 3 || !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("probe needs ≥ 4 nodes, ≥ 3 levels and tol > 0".into()));
        }
        Ok(())
    }
}

/// An extrapolated limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limit {
    pub value: Complex64,
    pub error: f64,
    /// Radii consumed before convergence (or in total).
    pub levels: usize,
    pub converged: bool,
}

/// Neville table for values sampled at radii `r0·q^k`, eliminating `r^m`.
#[derive(Clone, Debug)]
pub struct Richardson {
    q: f64,
    max_order: usize,
    tol: f64,
    rows: Vec<Vec<Complex64>>,
    best: Option<(Complex64, f64)>,
    done: Option<Limit>,
}

impl Richardson {
    pub fn new(q: f64, max_order: usize, tol: f64) -> Self {
        Richardson { q, max_order, tol, rows: Vec::new(), best: None, done: None }
    }

    pub fn converged(&self) -> Option<Limit> {
        self.done
    }

    /// Add the next sample. Convergence means some column has three
    /// successive entries agreeing to `tol·max(1, |value|)`.
    pub fn push(&mut self, v: Complex64) {
        if self.done.is_some() {
            return;
        }
        let k = self.rows.len();
        let mut row = vec![v];
        for m in 1..=k.min(self.max_order) {
            let prev = &self.rows[k - 1];
            let qm = self.q.powi(m as i32);
            row.push((row[m - 1] - qm * prev[m - 1]) / (1.0 - qm));
        }
        self.rows.push(row);
        let k = self.rows.len() - 1;
        let mut pick: Option<(Complex64, f64)> = None;
        for m in 0..=k.min(self.max_order) {
            if k < m + 2 {
                break;
            }
            let a = self.rows[k][m];
            let b = self.rows[k - 1][m];
            let c = self.rows[k - 2][m];
            let spread = (a - b).norm().max((b - c).norm());
            if !spread.is_finite() {
                continue;
            }
            if pick.is_none_or(|p| spread < p.1) {
                pick = Some((a, spread));
            }
        }
        if let Some((value, spread)) = pick {
            if self.best.is_none_or(|b| spread < b.1) {
                self.best = Some((value, spread));
            }
            if spread <= self.tol * value.norm().max(1.0) {
                self.done = Some(Limit { value, error: spread, levels: k + 1, converged: true });
            }
        }
    }

    pub fn finish(&self) -> Limit {
        if let Some(l) = self.done {
            return l;
        }
        let levels = self.rows.len();
        match self.best {
            Some((value, error)) => Limit { value, error, levels, converged: false },
            None => Limit {
                value: self.rows.last().map_or(Complex64::new(f64::NAN, 0.0), |r| r[0]),
                error: f64::INFINITY,
                levels,
                converged: false,
            },
        }
    }
}

fn twiddles(nodes: usize) -> Vec<Complex64> {
    (0..nodes).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / nodes as f64)).collect()
}

/// Taylor coefficients `D^{N} f(point)/N!` in the listed axes, for each
/// requested multi-index, from one trapezoid sample of the torus
/// `∏ {point_j + radii_j e^{iφ}}`.
pub fn taylor_coefficients(
    f: &SampledFunction,
    point: &[Complex64],
    axes: &[usize],
    radii: &[f64],
    orders: &[MultiIndex],
    nodes: usize,
) -> Vec<Complex64> {
    let d = axes.len();
    let roots = twiddles(nodes);
    let total = nodes.pow(d as u32);
    let mut acc = vec![Complex64::new(0.0, 0.0); orders.len()];
    let mut z = point.to_vec();
    let mut digits = vec![0usize; d];
    for _ in 0..total {
        for (i, &j) in axes.iter().enumerate() {
            z[j] = point[j] + radii[i] * roots[digits[i]];
        }
        let v = f.eval(&z);
        for (a, n) in acc.iter_mut().zip(orders) {
            // e^{−iφ·N} summed over the torus
            let idx = digits.iter().zip(n).map(|(&m, &o)| m * o).sum::<usize>() % nodes;
            *a += v * roots[(nodes - idx) % nodes];
        }
        for digit in digits.iter_mut() {
            *digit += 1;
            if *digit < nodes {
                break;
            }
            *digit = 0;
        }
    }
    acc.iter()
        .zip(orders)
        .map(|(a, n)| {
            let scale: f64 = radii.iter().zip(n).map(|(&r, &o)| r.powi(o as i32)).product();
            a / (total as f64 * scale)
        })
        .collect()
}

/// All requested limits `f_{N_J}(z_rest)` for one function, `J = axes`
/// (positions in `f`'s domain) and `z_rest` the values of the other axes.
/// Limits that fail to converge are returned with `converged = false`.
pub fn extract_orders(
    f: &SampledFunction,
    axes: &[usize],
    orders: &[MultiIndex],
    z_rest: &[Complex64],
    probe: &ProbeSpec,
) -> Result<Vec<Limit>> {
    probe.validate()?;
    let n = f.dim();
    let mut sorted = axes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != axes.len() || axes.is_empty() || axes.iter().any(|&j| j >= n) {
        return Err(Error::InvalidArgument("axes must be distinct and inside the domain".into()));
    }
    let rest: Vec<usize> = (0..n).filter(|j| !axes.contains(j)).collect();
    if z_rest.len() != rest.len() {
        return Err(Error::DimensionMismatch { expected: rest.len(), got: z_rest.len() });
    }
    if let Some(o) = orders.iter().find(|o| o.len() != axes.len()) {
        return Err(Error::DimensionMismatch { expected: axes.len(), got: o.len() });
    }
    let dom = f.domain();
    for (k, &j) in rest.iter().enumerate() {
        let s = dom.sector(j);
        if !s.contains(z_rest[k]) || s.distance_to_boundary(z_rest[k]) <= 0.0 {
            return Err(Error::OutsideDomain(format!("z_rest[{k}] is not interior to its sector")));
        }
    }
    let dirs: Vec<f64> = match &probe.directions {
        Some(d) if d.len() == axes.len() => d.clone(),
        Some(d) => return Err(Error::DimensionMismatch { expected: axes.len(), got: d.len() }),
        None => axes.iter().map(|&j| dom.sector(j).bisector()).collect(),
    };
    for (i, &j) in axes.iter().enumerate() {
        let s = dom.sector(j);
        if !(dirs[i] > s.alpha() && dirs[i] < s.beta()) {
            return Err(Error::OutsideDomain(format!("probe direction {} is outside sector {j}", dirs[i])));
        }
    }
    let mut point = vec![Complex64::new(0.0, 0.0); n];
    for (k, &j) in rest.iter().enumerate() {
        point[j] = z_rest[k];
    }
    let mut tables: Vec<Richardson> =
        orders.iter().map(|_| Richardson::new(probe.ratio, probe.richardson_order, probe.tol)).collect();
    for level in 0..probe.max_levels {
        if tables.iter().all(|t| t.converged().is_some()) {
            break;
        }
        let mut radii = Vec::with_capacity(axes.len());
        for (i, &j) in axes.iter().enumerate() {
            let s = dom.sector(j);
            let r = probe.start_fraction * s.rho().min(1.0) * probe.ratio.powi(level as i32);
            point[j] = Complex64::from_polar(r, dirs[i]);
            radii.push(probe.circle_fraction * s.distance_to_boundary(point[j]));
        }
        let pending: Vec<usize> = (0..orders.len()).filter(|&i| tables[i].converged().is_none()).collect();
        let wanted: Vec<MultiIndex> = pending.iter().map(|&i| orders[i].clone()).collect();
        let coeffs = taylor_coefficients(f, &point, axes, &radii, &wanted, probe.nodes);
        for (&i, v) in pending.iter().zip(coeffs) {
            tables[i].push(v);
        }
    }
    Ok(tables.iter().map(Richardson::finish).collect())
}

/// `lim_{z_J→0} D^{(N_J,0)} f(z)/N_J! = f_{N_J}(z_rest)`.
pub fn extract_element(
    f: &SampledFunction,
    axes: &[usize],
    order: &[usize],
    z_rest: &[Complex64],
    probe: &ProbeSpec,
) -> Result<Evaluation> {
    let lim = extract_orders(f, axes, &[order.to_vec()], z_rest, probe)?[0];
    if !lim.converged {
        return Err(Error::NonConvergence { what: format!("limit of D^{order:?} f"), error: lim.error });
    }
    Ok(Evaluation { value: lim.value, error: lim.error })
}
