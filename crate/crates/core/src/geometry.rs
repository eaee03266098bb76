//! Sectors, polysectors, multidirections and sampling grids.
//!
//! Angles are kept unreduced: a sector `S(α, β; ρ)` with `α = 3.0`,
//! `β = 3.5` straddles the negative real axis and membership is decided on
//! the branch of `arg z` closest to the bisector.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when deciding whether a point sits on a boundary.
/// Points closer than this to an edge or to the arc count as boundary points.
pub const BOUNDARY_SLACK: f64 = 1e-13;

/// Open sector `{0 < |z| < ρ, arg z ∈ (α, β)}`. `rho` may be `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SectorDesc", into = "SectorDesc")]
pub struct Sector {
    alpha: f64,
    beta: f64,
    rho: f64,
}

impl Sector {
    pub fn new(alpha: f64, beta: f64, rho: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha >= beta {
            return Err(Error::InvalidArgument(format!(
                "sector needs finite alpha < beta, got ({alpha}, {beta})"
            )));
        }
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::InvalidArgument(format!("sector radius must be positive, got {rho}")));
        }
        Ok(Sector { alpha, beta, rho })
    }

    /// `S(α, β; ∞)`.
    pub fn unbounded(alpha: f64, beta: f64) -> Result<Self> {
        Sector::new(alpha, beta, f64::INFINITY)
    }

    /// The half-plane sector `S(φ − π/2, φ + π/2; ∞)` around direction `φ`.
    pub fn half_plane(phi: f64) -> Self {
        Sector { alpha: phi - PI / 2.0, beta: phi + PI / 2.0, rho: f64::INFINITY }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn opening(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn bisector(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    pub fn is_bounded(&self) -> bool {
        self.rho.is_finite()
    }

    /// Branch of `arg z` nearest to the bisector.
    pub fn branch_arg(&self, z: Complex64) -> f64 {
        let theta = z.arg();
        let mid = self.bisector();
        theta + 2.0 * PI * ((mid - theta) / (2.0 * PI)).round()
    }

    /// Whether `theta` (unreduced) is a direction strictly inside the sector.
    pub fn contains_direction(&self, theta: f64) -> bool {
        theta > self.alpha && theta < self.beta
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if !(r > 0.0) || !r.is_finite() {
            return false;
        }
        if self.rho.is_finite() && r >= self.rho * (1.0 - BOUNDARY_SLACK) {
            return false;
        }
        let theta = self.branch_arg(z);
        let slack = BOUNDARY_SLACK * self.alpha.abs().max(self.beta.abs()).max(1.0);
        theta > self.alpha + slack && theta < self.beta - slack
    }

    /// Euclidean distance from an interior point to the boundary (edges,
    /// vertex and, when bounded, the arc).
    pub fn distance_to_boundary(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let theta = self.branch_arg(z);
        let to_edge = |d: f64| if d < PI / 2.0 { r * d.sin() } else { r };
        let mut d = r.min(to_edge(theta - self.alpha)).min(to_edge(self.beta - theta));
        if self.rho.is_finite() {
            d = d.min(self.rho - r);
        }
        d.max(0.0)
    }

    /// `T ≺ S` for a single pair of sectors.
    pub fn is_subsector_of(&self, s: &Sector) -> bool {
        self.rho.is_finite()
            && self.rho < s.rho
            && self.alpha > s.alpha
            && self.beta < s.beta
    }
}

#[derive(Serialize, Deserialize)]
struct SectorDesc {
    alpha: f64,
    beta: f64,
    rho: Radius,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Radius {
    Finite(f64),
    Named(String),
}

impl TryFrom<SectorDesc> for Sector {
    type Error = Error;

    fn try_from(d: SectorDesc) -> Result<Self> {
        let rho = match d.rho {
            Radius::Finite(r) => r,
            Radius::Named(s) if s == "inf" || s == "infinity" => f64::INFINITY,
            Radius::Named(s) => {
                return Err(Error::InvalidArgument(format!("radius must be a number or \"inf\", got {s:?}")))
            }
        };
        Sector::new(d.alpha, d.beta, rho)
    }
}

impl From<Sector> for SectorDesc {
    fn from(s: Sector) -> Self {
        let rho = if s.rho.is_finite() { Radius::Finite(s.rho) } else { Radius::Named("inf".into()) };
        SectorDesc { alpha: s.alpha, beta: s.beta, rho }
    }
}

/// Cartesian product of sectors, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolysectorDesc", into = "PolysectorDesc")]
pub struct Polysector {
    sectors: Vec<Sector>,
}

#[derive(Serialize, Deserialize)]
struct PolysectorDesc {
    sectors: Vec<Sector>,
}

impl TryFrom<PolysectorDesc> for Polysector {
    type Error = Error;

    fn try_from(d: PolysectorDesc) -> Result<Self> {
        Polysector::new(d.sectors)
    }
}

impl From<Polysector> for PolysectorDesc {
    fn from(p: Polysector) -> Self {
        PolysectorDesc { sectors: p.sectors }
    }
}

impl Polysector {
    pub fn new(sectors: Vec<Sector>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::InvalidArgument("a polysector needs at least one sector".into()));
        }
        Ok(Polysector { sectors })
    }

    /// The same sector repeated `n` times.
    pub fn uniform(sector: Sector, n: usize) -> Result<Self> {
        Polysector::new(vec![sector; n])
    }

    pub fn dim(&self) -> usize {
        self.sectors.len()
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector(&self, j: usize) -> &Sector {
        &self.sectors[j]
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        z.len() == self.dim() && self.sectors.iter().zip(z).all(|(s, &w)| s.contains(w))
    }

    /// Polysector made of the listed axes, in the given order.
    pub fn restrict(&self, axes: &[usize]) -> Result<Polysector> {
        Polysector::new(axes.iter().map(|&j| self.sectors[j]).collect())
    }

    pub fn bisector(&self) -> Multidirection {
        Multidirection::new(self.sectors.iter().map(Sector::bisector).collect())
    }

    pub fn is_bounded(&self) -> bool {
        self.sectors.iter().all(Sector::is_bounded)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polysector serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `T ≺ S`: componentwise `[α_T, β_T] ⊂ (α_S, β_S)`, `ρ_T < ρ_S` and `ρ_T` finite.
pub fn is_subpolysector(t: &Polysector, s: &Polysector) -> Result<bool> {
    if t.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: t.dim() });
    }
    Ok(t.sectors.iter().zip(&s.sectors).all(|(a, b)| a.is_subsector_of(b)))
}

/// One fixed argument per variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidirection {
    thetas: Vec<f64>,
}

impl Multidirection {
    pub fn new(thetas: Vec<f64>) -> Self {
        Multidirection { thetas }
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn dim(&self) -> usize {
        self.thetas.len()
    }

    /// Fails unless `α_j < θ_j < β_j` on every axis of `s`.
    pub fn check_in(&self, s: &Polysector) -> Result<()> {
        if self.dim() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), got: self.dim() });
        }
        for (j, (sec, &t)) in s.sectors().iter().zip(&self.thetas).enumerate() {
            if !sec.contains_direction(t) {
                return Err(Error::OutsideDomain(format!(
                    "direction {t} on axis {j} is not inside ({}, {})",
                    sec.alpha(),
                    sec.beta()
                )));
            }
        }
        Ok(())
    }

    pub fn unit(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.thetas[j])
    }
}

/// Geometric radii `r₀·qᵏ`, `k = 0..count`.
pub fn geometric_radii(r0: f64, q: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| r0 * q.powi(k as i32)).collect()
}

/// Points `(r_1 e^{iθ_1}, …, r_n e^{iθ_n})` over a product of radius lists.
#[derive(Clone, Debug, PartialEq)]
pub struct RayGrid {
    direction: Multidirection,
    radii: Vec<Vec<f64>>,
}

impl RayGrid {
    /// Radii must be positive and strictly decreasing on every axis.
    pub fn new(direction: Multidirection, radii: Vec<Vec<f64>>) -> Result<Self> {
        if radii.len() != direction.dim() {
            return Err(Error::DimensionMismatch { expected: direction.dim(), got: radii.len() });
        }
        for (j, rs) in radii.iter().enumerate() {
            if rs.is_empty() || rs.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
                return Err(Error::InvalidArgument(format!("axis {j}: radii must be positive and finite")));
            }
            if rs.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidArgument(format!("axis {j}: radii must be strictly decreasing")));
            }
        }
        Ok(RayGrid { direction, radii })
    }

    /// Same geometric radius list on every axis.
    pub fn geometric(direction: Multidirection, r0: f64, q: f64, count: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument(format!("geometric ratio must lie in (0,1), got {q}")));
        }
        let n = direction.dim();
        RayGrid::new(direction, vec![geometric_radii(r0, q, count); n])
    }

    pub fn direction(&self) -> &Multidirection {
        &self.direction
    }

    pub fn radii(&self) -> &[Vec<f64>] {
        &self.radii
    }

    /// All grid points together with their per-axis radii.
    pub fn points(&self, s: &Polysector) -> Result<Vec<(Vec<f64>, Vec<Complex64>)>> {
        let pts = ray_points(s, &self.direction, &self.radii)?;
        let rs = cartesian(&self.radii);
        Ok(rs.into_iter().zip(pts).collect())
    }
}

/// Cartesian product of per-axis `r·e^{iθ_j}` samples, first axis outermost.
pub fn ray_points(s: &Polysector, d: &Multidirection, radii: &[Vec<f64>]) -> Result<Vec<Vec<Complex64>>> {
    d.check_in(s)?;
    if radii.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: radii.len() });
    }
    let mut axes = Vec::with_capacity(s.dim());
    for (j, rs) in radii.iter().enumerate() {
        let rho = s.sector(j).rho();
        if let Some(&bad) = rs.iter().find(|&&r| !(r > 0.0) || r >= rho) {
            return Err(Error::OutsideDomain(format!("radius {bad} on axis {j} is not in (0, {rho})")));
        }
        let u = d.unit(j);
        axes.push(rs.iter().map(|&r| u * r).collect::<Vec<_>>());
    }
    Ok(cartesian(&axes))
}

/// Samples of `∏ (∂S_j ∖ {0})`: on every axis `density` points on each
/// radial edge (`r = ρ·k/density`) and `density` interior points of the arc.
pub fn distinguished_boundary_points(s: &Polysector, density: usize) -> Result<Vec<Vec<Complex64>>> {
    if density == 0 {
        return Err(Error::InvalidArgument("boundary density must be positive".into()));
    }
    let mut axes = Vec::with_capacity(s.dim());
    for (j, sec) in s.sectors().iter().enumerate() {
        if !sec.is_bounded() {
            return Err(Error::Unbounded(j));
        }
        let rho = sec.rho();
        let mut pts = Vec::with_capacity(3 * density);
        for edge in [sec.alpha(), sec.beta()] {
            for k in 1..=density {
                pts.push(Complex64::from_polar(rho * k as f64 / density as f64, edge));
            }
        }
        for k in 1..=density {
            let t = sec.alpha() + sec.opening() * k as f64 / (density + 1) as f64;
            pts.push(Complex64::from_polar(rho, t));
        }
        axes.push(pts);
    }
    Ok(cartesian(&axes))
}

/// Interior samples: on every axis, `count` geometric radii from `0.9ρ` down
/// to `ρ·min_fraction`, each at `count` angles strictly inside the opening.
pub fn interior_points(s: &Polysector, count: usize, min_fraction: f64) -> Result<Vec<Vec<Complex64>>> {
    if count == 0 {
        return Err(Error::InvalidArgument("interior sample count must be positive".into()));
    }
    let mut axes = Vec::with_capacity(s.dim());
    for (j, sec) in s.sectors().iter().enumerate() {
        if !sec.is_bounded() {
            return Err(Error::Unbounded(j));
        }
        let hi = 0.9 * sec.rho();
        let lo = sec.rho() * min_fraction;
        let q = if count > 1 { (lo / hi).powf(1.0 / (count - 1) as f64) } else { 1.0 };
        let mut pts = Vec::with_capacity(count * count);
        for k in 0..count {
            let r = hi * q.powi(k as i32);
            for m in 0..count {
                let t = sec.alpha() + sec.opening() * (m as f64 + 0.5) / count as f64;
                pts.push(Complex64::from_polar(r, t));
            }
        }
        axes.push(pts);
    }
    Ok(cartesian(&axes))
}

pub(crate) fn cartesian<T: Clone>(axes: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for v in axis {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn s(a: f64, b: f64, r: f64) -> Sector {
        Sector::new(a, b, r).unwrap()
    }

    #[test]
    fn membership() {
        let sec = s(-FRAC_PI_4, FRAC_PI_4, 1.0);
        assert!(sec.contains(Complex64::new(0.5, 0.0)));
        assert!(!sec.contains(Complex64::new(0.0, 0.0)));
        assert!(!sec.contains(Complex64::from_polar(0.5, PI / 3.0)));
        assert!(!sec.contains(Complex64::new(1.5, 0.0)));
    }

    #[test]
    fn membership_across_the_cut() {
        let sec = s(3.0, 3.5, 2.0);
        assert!(sec.contains(Complex64::from_polar(1.0, PI)));
        assert!(sec.contains(Complex64::from_polar(1.0, 3.4 - 2.0 * PI)));
        assert!(!sec.contains(Complex64::from_polar(1.0, 2.9)));
    }

    #[test]
    fn rejects_bad_sectors() {
        assert!(Sector::new(0.2, 0.1, 1.0).is_err());
        assert!(Sector::new(0.0, 0.1, 0.0).is_err());
        assert!(Polysector::new(vec![]).is_err());
    }

    #[test]
    fn subpolysector_examples() {
        let host = Polysector::new(vec![s(-0.2, 0.2, 1.0)]).unwrap();
        let t = |a, b, r| Polysector::new(vec![s(a, b, r)]).unwrap();
        assert!(is_subpolysector(&t(-0.1, 0.1, 0.5), &host).unwrap());
        assert!(!is_subpolysector(&t(-0.2, 0.1, 0.5), &host).unwrap());
        assert!(!is_subpolysector(&t(-0.1, 0.1, 1.0), &host).unwrap());
        let two = Polysector::uniform(s(-0.1, 0.1, 0.5), 2).unwrap();
        assert!(matches!(is_subpolysector(&two, &host), Err(Error::DimensionMismatch { .. })));
        assert!(!is_subpolysector(&host, &host).unwrap());
    }

    #[test]
    fn ray_point_examples() {
        let one = Polysector::new(vec![s(-1.0, 1.0, 1.0)]).unwrap();
        let d = Multidirection::new(vec![0.0]);
        let pts = ray_points(&one, &d, &[vec![1e-1, 1e-2]]).unwrap();
        assert_eq!(pts, vec![vec![Complex64::new(0.1, 0.0)], vec![Complex64::new(0.01, 0.0)]]);

        let two = Polysector::uniform(s(-1.0, 1.0, 1.0), 2).unwrap();
        let d2 = Multidirection::new(vec![0.0, PI / 6.0]);
        let pts = ray_points(&two, &d2, &[vec![0.3], vec![0.2]]).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0][1] - Complex64::from_polar(0.2, PI / 6.0)).norm() < 1e-16);

        assert!(ray_points(&one, &d, &[vec![1.0]]).is_err());
        assert!(ray_points(&one, &Multidirection::new(vec![1.5]), &[vec![0.5]]).is_err());
    }

    #[test]
    fn boundary_samples() {
        let one = Polysector::new(vec![s(0.0, PI / 2.0, 1.0)]).unwrap();
        let pts = distinguished_boundary_points(&one, 2).unwrap();
        assert_eq!(pts.len(), 6);
        assert!(pts.iter().all(|p| !one.contains(p)));
        let two = Polysector::uniform(s(0.0, PI / 2.0, 1.0), 2).unwrap();
        assert_eq!(distinguished_boundary_points(&two, 2).unwrap().len(), 36);
        let unb = Polysector::new(vec![Sector::unbounded(0.0, 1.0).unwrap()]).unwrap();
        assert!(matches!(distinguished_boundary_points(&unb, 2), Err(Error::Unbounded(0))));
    }

    #[test]
    fn json_descriptor() {
        let p = Polysector::from_json(r#"{"sectors":[{"alpha":-1,"beta":1,"rho":"inf"},{"alpha":0,"beta":1,"rho":2}]}"#)
            .unwrap();
        assert!(!p.sector(0).is_bounded());
        assert_eq!(p.sector(1).rho(), 2.0);
        assert_eq!(Polysector::from_json(&p.to_json()).unwrap(), p);
        assert!(Polysector::from_json(r#"{"sectors":[{"alpha":1,"beta":0,"rho":1}]}"#).is_err());
    }

    #[test]
    fn distance_to_boundary_on_bisector() {
        let sec = s(-FRAC_PI_4, FRAC_PI_4, f64::INFINITY);
        let d = sec.distance_to_boundary(Complex64::new(1.0, 0.0));
        assert!((d - FRAC_PI_4.sin()).abs() < 1e-15);
        let hp = Sector::half_plane(0.0);
        assert!((hp.distance_to_boundary(Complex64::new(2.0, 0.0)) - 2.0).abs() < 1e-15);
    }
}
