//! Explicit Gevrey type formulas, as pure functions of the angles.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Multidirection;
use crate::optimize::grid_max;

/// `g(1)`, the constant `γ` of the final type formula.
pub const GAMMA: f64 = 0.300_283_106_000_777_6;
pub const G_LOWER: f64 = 1.0 / 4.7;
pub const G_UPPER: f64 = 0.5;

const PROFILE_GRID: usize = 1024;

type ProfileFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A per-axis type `θ ↦ R(θ)` on `(α, β)`.
#[derive(Clone)]
pub struct TypeProfile {
    alpha: f64,
    beta: f64,
    label: String,
    eval: Arc<ProfileFn>,
}

impl fmt::Debug for TypeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TypeProfile({} on ({}, {}))", self.label, self.alpha, self.beta)
    }
}

impl TypeProfile {
    pub fn new<F>(alpha: f64, beta: f64, label: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(alpha < beta) {
            return Err(Error::InvalidArgument("profile needs α < β".into()));
        }
        Ok(TypeProfile { alpha, beta, label: label.into(), eval: Arc::new(f) })
    }

    pub fn constant(alpha: f64, beta: f64, value: f64) -> Result<Self> {
        if !(value > 0.0) {
            return Err(Error::InvalidArgument("constant type must be positive".into()));
        }
        TypeProfile::new(alpha, beta, format!("{value}"), move |_| value)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.eval)(theta)
    }

    /// Pointwise minimum on the intersection of the two domains.
    pub fn min(&self, other: &TypeProfile) -> Result<TypeProfile> {
        let (a, b) = (self.alpha.max(other.alpha), self.beta.min(other.beta));
        let (f, g) = (Arc::clone(&self.eval), Arc::clone(&other.eval));
        TypeProfile::new(a, b, format!("min({}, {})", self.label, other.label), move |t| f(t).min(g(t)))
    }

    /// `(θ*, sup R)` from a dense grid on `[α, β]` plus local refinement.
    pub fn sup(&self) -> (f64, f64) {
        grid_max(|t| self.eval(t), self.alpha, self.beta, PROFILE_GRID, 1e-12)
    }

    /// Sampled infimum over `[a, b]`, the positivity witness.
    pub fn inf_on(&self, a: f64, b: f64, samples: usize) -> f64 {
        let n = samples.max(2);
        (0..n)
            .map(|i| self.eval(a + (b - a) * i as f64 / (n - 1) as f64))
            .fold(f64::INFINITY, f64::min)
    }

    /// `inf_K R > 0` on each compact `K = [α + m·w, β − m·w]`, `w = β − α`.
    pub fn positive_on_compacts(&self, margins: &[f64]) -> bool {
        let w = self.beta - self.alpha;
        margins
            .iter()
            .filter(|&&m| m > 0.0 && m < 0.5)
            .all(|&m| self.inf_on(self.alpha + m * w, self.beta - m * w, 256) > 0.0)
    }
}

fn g_objective(c: f64, delta: f64) -> f64 {
    c * ((1.0 - c * c * delta * delta).sqrt() - c * (1.0 - delta * delta).max(0.0).sqrt()) / (1.0 + c * delta)
}

/// `g(δ) = sup_{c∈(0,1)} c(√(1−c²δ²) − c√(1−δ²))/(1+cδ)`.
pub fn g_of_delta(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("δ = {delta} is outside (0, 1]")));
    }
    Ok(grid_max(|c| g_objective(c, delta), 1e-6, 1.0 - 1e-6, 64, 1e-12).1)
}

/// The `c = 1/2` lower bound for `g(δ)`.
pub fn g_half_bound(delta: f64) -> f64 {
    (2.0 * (1.0 - delta * delta / 4.0).sqrt() - (1.0 - delta * delta).max(0.0).sqrt()) / (4.0 + 2.0 * delta)
}

/// `R̃` with its bracket `[|z0|cos²/4.7, |z0|cos²/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RTilde {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `R̃(θ) = |z0| δ² g(δ)`, `δ = cos(θ − θ0)`.
pub fn r_tilde(z0_mod: f64, theta: f64, theta0: f64) -> Result<RTilde> {
    if !(z0_mod > 0.0) {
        return Err(Error::InvalidArgument("|z0| must be positive".into()));
    }
    if (theta - theta0).abs() >= FRAC_PI_2 {
        return Err(Error::OutsideDomain(format!("θ − θ0 = {} is outside (−π/2, π/2)", theta - theta0)));
    }
    let delta = (theta - theta0).cos();
    let d2 = delta * delta;
    Ok(RTilde { value: z0_mod * d2 * g_of_delta(delta)?, lower: z0_mod * d2 * G_LOWER, upper: z0_mod * d2 * G_UPPER })
}

/// Three-branch sine law with `α' = min(θ0, α+π/2)`, `β' = max(θ0, β−π/2)`.
/// Accepts the closed interval so that the edges evaluate to 0.
pub fn fz_type(theta: f64, alpha: f64, beta: f64, theta0: f64, r0: f64) -> Result<f64> {
    if !(alpha < theta0 && theta0 < beta) || !(alpha <= theta && theta <= beta) {
        return Err(Error::OutsideDomain("need α < θ0 < β and θ in [α, β]".into()));
    }
    let a1 = theta0.min(alpha + FRAC_PI_2);
    let b1 = theta0.max(beta - FRAC_PI_2);
    Ok(if theta < a1 {
        r0 * (theta - alpha).sin() / (a1 - alpha).sin()
    } else if theta > b1 {
        r0 * (beta - theta).sin() / (beta - b1).sin()
    } else {
        r0
    })
}

/// Two-branch sine law on a sector of opening `< π`.
pub fn sine_type(theta: f64, alpha: f64, beta: f64, theta0: f64, r: f64) -> Result<f64> {
    if !(beta - alpha < PI) {
        return Err(Error::InvalidArgument("opening must be < π".into()));
    }
    if !(alpha < theta0 && theta0 < beta) || !(alpha <= theta && theta <= beta) {
        return Err(Error::OutsideDomain("need α < θ0 < β and θ in [α, β]".into()));
    }
    Ok(if theta <= theta0 {
        r * (theta - alpha).sin() / (theta0 - alpha).sin()
    } else {
        r * (theta - beta).sin() / (theta0 - beta).sin()
    })
}

/// Chord length along direction `θ` of the circle through 0 built from the
/// edge radii: the circumcircle of `{0, R_α e^{iα}, R_β e^{iβ}}` when both
/// are positive, the circle tangent at 0 to the other edge when one is, and
/// 0 otherwise.
pub fn circle_type(r_alpha: f64, r_beta: f64, alpha: f64, beta: f64, theta: f64) -> Result<f64> {
    if !(beta - alpha < PI && alpha < beta) {
        return Err(Error::InvalidArgument("need 0 < β − α < π".into()));
    }
    if !(alpha <= theta && theta <= beta) || r_alpha < 0.0 || r_beta < 0.0 {
        return Err(Error::OutsideDomain("need θ in [α, β] and nonnegative radii".into()));
    }
    if theta == alpha {
        return Ok(r_alpha);
    }
    if theta == beta {
        return Ok(r_beta);
    }
    let s = (beta - alpha).sin();
    if s.abs() < 1e-12 {
        return Err(Error::Degenerate("circumcircle points are collinear".into()));
    }
    Ok(match (r_alpha > 0.0, r_beta > 0.0) {
        (true, true) => {
            // centre c with 2 Re(P c̄) = |P|² for both points
            let (p1x, p1y) = (r_alpha * alpha.cos(), r_alpha * alpha.sin());
            let (p2x, p2y) = (r_beta * beta.cos(), r_beta * beta.sin());
            let det = 2.0 * (p1x * p2y - p1y * p2x);
            if det.abs() < 1e-12 * r_alpha * r_beta {
                return Err(Error::Degenerate("circumcircle points are collinear".into()));
            }
            let (q1, q2) = (r_alpha * r_alpha, r_beta * r_beta);
            let cx = (q1 * p2y - q2 * p1y) / det;
            let cy = (p1x * q2 - p2x * q1) / det;
            (2.0 * (theta.cos() * cx + theta.sin() * cy)).max(0.0)
        }
        (false, true) => r_beta * (theta - alpha).sin() / s,
        (true, false) => r_alpha * (beta - theta).sin() / s,
        (false, false) => 0.0,
    })
}

/// Per-axis data for [`final_type`].
#[derive(Clone, Debug)]
pub struct AxisTypeParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta0: f64,
    pub r0: f64,
    pub profile: TypeProfile,
}

/// Precomputed `γ_j` and `t_j` of the final type formula.
#[derive(Clone, Debug)]
pub struct FinalType {
    params: Vec<AxisTypeParams>,
    gammas: Vec<f64>,
    ts: Vec<f64>,
}

impl FinalType {
    pub fn new(params: Vec<AxisTypeParams>) -> Result<Self> {
        let mut gammas = Vec::new();
        let mut ts = Vec::new();
        for (j, p) in params.iter().enumerate() {
            if !(p.theta0 - FRAC_PI_2 < p.alpha && p.alpha < p.theta0 && p.theta0 < p.beta && p.beta < p.theta0 + FRAC_PI_2)
            {
                return Err(Error::InvalidArgument(format!("axis {j}: need θ0−π/2 < α < θ0 < β < θ0+π/2")));
            }
            if !(p.r0 > 0.0) {
                return Err(Error::InvalidArgument(format!("axis {j}: R0 must be positive")));
            }
            let g = p.profile.sup().1;
            gammas.push(g);
            ts.push(p.r0.min(g * GAMMA).min(p.profile.eval(p.theta0)));
        }
        Ok(FinalType { params, gammas, ts })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn t_values(&self) -> &[f64] {
        &self.ts
    }

    /// `R̄_j(θ_j)` for one axis.
    pub fn axis(&self, j: usize, theta: f64) -> Result<f64> {
        let p = &self.params[j];
        if !(p.alpha < theta && theta <= p.beta) {
            return Err(Error::OutsideDomain(format!("θ = {theta} outside ({}, {}]", p.alpha, p.beta)));
        }
        let sine = if theta <= p.theta0 {
            self.ts[j] * (theta - p.alpha).sin() / (p.theta0 - p.alpha).sin()
        } else {
            self.ts[j] * (p.beta - theta).sin() / (p.beta - p.theta0).sin()
        };
        let delta = (theta - p.theta0).cos();
        let third = self.gammas[j] * delta * delta * g_of_delta(delta)?;
        Ok(sine.min(p.profile.eval(theta)).min(third))
    }

    pub fn eval(&self, theta: &Multidirection) -> Result<Vec<f64>> {
        if theta.dim() != self.params.len() {
            return Err(Error::DimensionMismatch { expected: self.params.len(), got: theta.dim() });
        }
        theta.thetas().iter().enumerate().map(|(j, &t)| self.axis(j, t)).collect()
    }

    pub fn profile(&self, j: usize) -> Result<TypeProfile> {
        let me = self.clone();
        let p = &self.params[j];
        TypeProfile::new(p.alpha, p.beta, "final", move |t| me.axis(j, t).unwrap_or(0.0))
    }
}

pub fn final_type(theta: &Multidirection, params: &[AxisTypeParams]) -> Result<Vec<f64>> {
    FinalType::new(params.to_vec())?.eval(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

    #[test]
    fn g_at_one() {
        let g = g_of_delta(1.0).unwrap();
        assert!((g - 0.30028).abs() < 1e-4, "{g}");
        assert!((g - GAMMA).abs() < 1e-8);
    }

    #[test]
    fn g_bracket_and_half_bound() {
        for k in 1..=200 {
            let d = k as f64 / 200.0;
            let g = g_of_delta(d).unwrap();
            assert!((G_LOWER..=G_UPPER).contains(&g), "δ={d} g={g}");
            assert!(g >= g_half_bound(d) - 1e-12);
        }
        assert!(g_of_delta(0.0).is_err() && g_of_delta(1.1).is_err());
    }

    #[test]
    fn g_against_dense_grid() {
        let d = 0.5;
        let dense = (1..200_000).map(|i| g_objective(i as f64 / 200_000.0, d)).fold(0.0, f64::max);
        assert!((g_of_delta(d).unwrap() - dense).abs() < 1e-8);
    }

    #[test]
    fn r_tilde_values() {
        let r = r_tilde(1.0, 0.0, 0.0).unwrap();
        assert!((r.value - 0.30028).abs() < 1e-4 && r.lower <= r.value && r.value <= r.upper);
        let r = r_tilde(2.0, FRAC_PI_3, 0.0).unwrap();
        assert!(r.value >= 2.0 / 18.8 && r.value <= 2.0 / 8.0);
        assert!((r.value - 0.5 * g_of_delta(0.5).unwrap()).abs() < 1e-12);
        assert!(r_tilde(1.0, FRAC_PI_2 - 1e-9, 0.0).unwrap().value < 1e-12);
        assert!(r_tilde(1.0, FRAC_PI_2, 0.0).is_err());
    }

    #[test]
    fn fz_examples() {
        let v = fz_type(FRAC_PI_8, -FRAC_PI_4, FRAC_PI_4, 0.0, 1.0).unwrap();
        assert!((v - FRAC_PI_8.sin() / FRAC_PI_4.sin()).abs() < 1e-15);
        assert!((v - 0.5412).abs() < 1e-4);
        let m = fz_type(-FRAC_PI_8, -FRAC_PI_4, FRAC_PI_4, 0.0, 1.0).unwrap();
        assert!((v - m).abs() < 1e-15);
        assert_eq!(fz_type(-FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4, 0.0, 1.0).unwrap(), 0.0);
        // wide sector: flat middle branch
        assert_eq!(fz_type(0.3, -2.0, 2.0, 0.0, 1.5).unwrap(), 1.5);
    }

    #[test]
    fn sine_examples() {
        let v = sine_type(FRAC_PI_3, 0.0, FRAC_PI_2, FRAC_PI_4, 1.0).unwrap();
        assert!((v - FRAC_PI_6.sin() / FRAC_PI_4.sin()).abs() < 1e-15);
        assert_eq!(sine_type(FRAC_PI_4, 0.0, FRAC_PI_2, FRAC_PI_4, 0.7).unwrap(), 0.7);
        assert!(sine_type(0.0, 0.0, FRAC_PI_2, FRAC_PI_4, 1.0).unwrap().abs() < 1e-16);
        assert!(sine_type(FRAC_PI_2, 0.0, FRAC_PI_2, FRAC_PI_4, 1.0).unwrap().abs() < 1e-15);
        assert!(sine_type(0.0, -2.0, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn circle_examples() {
        let v = circle_type(1.0, 1.0, 0.0, FRAC_PI_2, FRAC_PI_4).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-14);
        // independent route: intersect the ray with |z − c|² = |c|² as a quadratic in t
        let (cx, cy) = (0.5, 0.5);
        let (ux, uy) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
        let t = 2.0 * (ux * cx + uy * cy);
        assert!((t * t - 2.0 * t * (ux * cx + uy * cy)).abs() < 1e-14 && (v - t).abs() < 1e-14);
        assert!((circle_type(0.7, 1.3, -0.4, 0.9, -0.4).unwrap() - 0.7).abs() < 1e-12);
        assert!((circle_type(0.7, 1.3, -0.4, 0.9, 0.9).unwrap() - 1.3).abs() < 1e-12);
        assert!((circle_type(0.7, 1.3, -0.4, 0.9, 0.9 - 1e-13).unwrap() - 1.3).abs() < 1e-12);
        assert_eq!(circle_type(0.0, 0.0, 0.0, 1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn tangent_circle_is_the_sine_law() {
        let (a, b) = (-0.3, 1.1);
        for k in 1..10 {
            let th = a + (b - a) * k as f64 / 10.0;
            let v = circle_type(0.0, 0.8, a, b, th).unwrap();
            assert!((v - 0.8 * (th - a).sin() / (b - a).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn final_type_properties() {
        let (a, b) = (-FRAC_PI_4, FRAC_PI_4);
        let params = vec![AxisTypeParams { alpha: a, beta: b, theta0: 0.0, r0: 2.0, profile: TypeProfile::constant(a, b, 1.5).unwrap() }];
        let ft = FinalType::new(params).unwrap();
        let at0 = ft.axis(0, 0.0).unwrap();
        assert!((at0 - 2f64.min(1.5 * GAMMA).min(1.5)).abs() < 1e-9);
        assert!(ft.axis(0, a + 1e-9).unwrap() < 1e-8);
        for k in 1..50 {
            let th = b * k as f64 / 50.0;
            let (p, m) = (ft.axis(0, th).unwrap(), ft.axis(0, -th).unwrap());
            assert!((p - m).abs() < 1e-12, "{th}");
            assert!(p <= 1.5);
        }
        assert!(ft.profile(0).unwrap().positive_on_compacts(&[0.05, 0.1, 0.25]));
        let bad = vec![AxisTypeParams { alpha: -2.0, beta: 0.5, theta0: 0.0, r0: 1.0, profile: TypeProfile::constant(-2.0, 0.5, 1.0).unwrap() }];
        assert!(FinalType::new(bad).is_err());
    }

    #[test]
    fn profile_sup_refines_grid() {
        let p = TypeProfile::new(0.0, 1.0, "bump", |t| 1.0 - (t - 0.123_456_7).powi(2)).unwrap();
        let (t, v) = p.sup();
        assert!((t - 0.123_456_7).abs() < 1e-5 && (v - 1.0).abs() < 1e-12);
        let m = p.min(&TypeProfile::constant(0.0, 1.0, 0.5).unwrap()).unwrap();
        assert_eq!(m.eval(0.1), 0.5);
    }
}
