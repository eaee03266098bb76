//! Construction of a function with a prescribed first-order family (n = 2).
//!
//! The first pass transforms `φ₁(t) = Σ_n f_{1n}(z₂) tⁿ/n!` in `z₁`. Its
//! first-order elements along axis 2 are `h_{2m}(z₁) = L[Σ_n A_{nm} tⁿ/n!]`
//! with `A_{nm} = lim D^m f_{1n}/m!`; the second pass transforms the
//! corrections `Σ_m (f_{2m} − h_{2m}) t^m/m!` in `z₂`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;

use super::{laplace_monomials, QuadSpec};
use crate::error::{Error, Result};
use crate::families::{extract_element, extract_orders, FirstOrderFamily, ProbeSpec};
use crate::function::{Evaluation, SampledFunction};
use crate::typecalc::{r_tilde, TypeProfile};

/// How `h_{2m}` is obtained inside the second pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HRoute {
    /// From the extracted constants `A_{nm}` and the Laplace basis.
    #[default]
    Coefficientwise,
    /// By extracting `lim D^m H₁ / m!` at every evaluation (slow).
    Extracted,
}

#[derive(Clone, Debug)]
pub struct InterpolationOptions {
    /// Orders `n, m ≤ order` of the family that are reproduced.
    pub order: usize,
    pub coherence_tol: f64,
    pub probe: ProbeSpec,
    pub quad: QuadSpec,
    pub route: HRoute,
}

impl Default for InterpolationOptions {
    fn default() -> Self {
        InterpolationOptions {
            order: 4,
            coherence_tol: 1e-6,
            probe: ProbeSpec::default(),
            quad: QuadSpec { tol: 1e-13, ..QuadSpec::default() },
            route: HRoute::default(),
        }
    }
}

/// The interpolating function with its intermediate data.
#[derive(Clone, Debug)]
pub struct Interpolant {
    pub function: SampledFunction,
    /// The first pass `H₁` alone.
    pub first_pass: SampledFunction,
    /// `A_{nm} = lim_{z₂→0} D^m f_{1n}(z₂)/m!`.
    pub constants: Vec<Vec<Complex64>>,
    /// `max |A_{nm} − B_{nm}|/max(1,|A_{nm}|)` with `B_{nm} = lim D^n f_{2m}/n!`.
    pub coherence_residual: f64,
    /// `R̂_j = min(R_j, R̃_j)`.
    pub r_hat: Vec<TypeProfile>,
}

struct Data {
    f1: Vec<SampledFunction>,
    f2: Vec<SampledFunction>,
    a: Vec<Vec<Complex64>>,
    z0: [Complex64; 2],
    quad: QuadSpec,
}

impl Data {
    fn basis(&self, axis: usize, z: Complex64) -> std::result::Result<(Vec<Complex64>, f64), f64> {
        laplace_monomials(self.z0[axis], &self.quad, self.f1.len() - 1, z).map_err(|e| match e {
            Error::NonConvergence { error, .. } => error,
            _ => f64::INFINITY,
        })
    }

    fn first_pass(&self, z: &[Complex64]) -> Evaluation {
        let (b1, e1) = match self.basis(0, z[0]) {
            Ok(v) => v,
            Err(error) => return nan(error),
        };
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for (f, b) in self.f1.iter().zip(&b1) {
            let v = f.eval_with_error(&z[1..]);
            value += v.value * b;
            error += v.error * b.norm() + v.value.norm() * e1;
        }
        Evaluation { value, error }
    }
}

fn nan(error: f64) -> Evaluation {
    Evaluation { value: Complex64::new(f64::NAN, 0.0), error }
}

fn functions(seq: &[crate::families::FunctionElement], count: usize, j: usize) -> Result<Vec<SampledFunction>> {
    if seq.len() < count {
        return Err(Error::MissingElement(format!("axis {j} has {} of the {count} required elements", seq.len())));
    }
    seq[..count]
        .iter()
        .map(|e| e.as_function().cloned().ok_or_else(|| Error::InvalidArgument("first-order elements must be functions".into())))
        .collect()
}

pub fn interpolate_first_order(
    fam1: &FirstOrderFamily,
    profiles: &[TypeProfile],
    z0: [Complex64; 2],
    opts: &InterpolationOptions,
) -> Result<Interpolant> {
    if fam1.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: fam1.dim() });
    }
    if profiles.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: profiles.len() });
    }
    let host = fam1.host().clone();
    for j in 0..2 {
        let s = host.sector(j);
        if s.opening() > PI {
            return Err(Error::InvalidArgument(format!("axis {j}: opening exceeds π")));
        }
        let phi = z0[j].arg();
        if s.alpha() < phi - FRAC_PI_2 - 1e-12 || s.beta() > phi + FRAC_PI_2 + 1e-12 {
            return Err(Error::OutsideDomain(format!("axis {j}: sector is not inside the half-plane of z0")));
        }
        let sup = profiles[j].sup().1;
        if !(z0[j].norm() < sup) {
            return Err(Error::OutsideDomain(format!("axis {j}: |z0| = {} is not below sup R = {sup}", z0[j].norm())));
        }
    }
    let count = opts.order + 1;
    let f1 = functions(fam1.sequence(0), count, 0)?;
    let f2 = functions(fam1.sequence(1), count, 1)?;
    let orders: Vec<Vec<usize>> = (0..count).map(|m| vec![m]).collect();
    let limits = |f: &SampledFunction| -> Result<Vec<Complex64>> {
        extract_orders(f, &[0], &orders, &[], &opts.probe)?
            .into_iter()
            .map(|l| {
                if l.converged {
                    Ok(l.value)
                } else {
                    Err(Error::NonConvergence { what: "first-order constant".into(), error: l.error })
                }
            })
            .collect()
    };
    let a: Vec<Vec<Complex64>> = f1.iter().map(limits).collect::<Result<_>>()?;
    let b: Vec<Vec<Complex64>> = f2.iter().map(limits).collect::<Result<_>>()?;
    let mut residual: f64 = 0.0;
    for n in 0..count {
        for m in 0..count {
            residual = residual.max((a[n][m] - b[m][n]).norm() / a[n][m].norm().max(1.0));
        }
    }
    if residual > opts.coherence_tol {
        return Err(Error::Incoherent(format!("first-order constants disagree by {residual:e}")));
    }
    let data = Arc::new(Data { f1, f2, a: a.clone(), z0, quad: opts.quad });
    let first_pass = {
        let d = Arc::clone(&data);
        SampledFunction::with_error(host.clone(), "H1", move |z| d.first_pass(z))
    };
    let function = match opts.route {
        HRoute::Coefficientwise => {
            let d = Arc::clone(&data);
            SampledFunction::with_error(host.clone(), "H1+H2", move |z| {
                let (b1, e1) = match d.basis(0, z[0]) {
                    Ok(v) => v,
                    Err(e) => return nan(e),
                };
                let (b2, e2) = match d.basis(1, z[1]) {
                    Ok(v) => v,
                    Err(e) => return nan(e),
                };
                let mut value = Complex64::new(0.0, 0.0);
                let mut error = 0.0;
                for (n, f) in d.f1.iter().enumerate() {
                    let v = f.eval_with_error(&z[1..]);
                    value += v.value * b1[n];
                    error += v.error * b1[n].norm() + v.value.norm() * e1;
                }
                for (m, f) in d.f2.iter().enumerate() {
                    let v = f.eval_with_error(&z[..1]);
                    let h: Complex64 = (0..b1.len()).map(|n| d.a[n][m] * b1[n]).sum();
                    value += (v.value - h) * b2[m];
                    error += v.error * b2[m].norm() + (v.value - h).norm() * e2 + h.norm() * e1;
                }
                Evaluation { value, error }
            })
        }
        HRoute::Extracted => {
            let d = Arc::clone(&data);
            let h1 = first_pass.clone();
            let probe = opts.probe.clone();
            SampledFunction::with_error(host.clone(), "H1+H2 (extracted h)", move |z| {
                let (b2, e2) = match d.basis(1, z[1]) {
                    Ok(v) => v,
                    Err(e) => return nan(e),
                };
                let mut acc = d.first_pass(z);
                for (m, f) in d.f2.iter().enumerate() {
                    let h = match extract_element(&h1, &[1], &[m], &z[..1], &probe) {
                        Ok(h) => h,
                        Err(_) => return nan(f64::INFINITY),
                    };
                    let v = f.eval_with_error(&z[..1]);
                    acc.value += (v.value - h.value) * b2[m];
                    acc.error += (v.error + h.error) * b2[m].norm() + (v.value - h.value).norm() * e2;
                }
                acc
            })
        }
    };
    let mut r_hat = Vec::new();
    for j in 0..2 {
        let (m, th0) = (z0[j].norm(), z0[j].arg());
        let s = host.sector(j);
        let tilde = TypeProfile::new(s.alpha(), s.beta(), "R~", move |t| r_tilde(m, t, th0).map_or(0.0, |r| r.value))?;
        r_hat.push(profiles[j].min(&tilde)?);
    }
    Ok(Interpolant { function, first_pass, constants: a, coherence_residual: residual, r_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::first_order_of;
    use crate::testbed;
    use std::f64::consts::FRAC_PI_3;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rat2() -> (FirstOrderFamily, Vec<TypeProfile>) {
        let e = testbed::get("rat2").unwrap();
        let fam1 = first_order_of(e.family.as_ref().unwrap());
        let p = TypeProfile::constant(-FRAC_PI_3, FRAC_PI_3, 10.0).unwrap();
        (fam1, vec![p.clone(), p])
    }

    fn loose_probe() -> ProbeSpec {
        ProbeSpec { tol: 1e-6, ..ProbeSpec::default() }
    }

    #[test]
    fn rat2_constants_and_elements() {
        let (fam1, prof) = rat2();
        let opts = InterpolationOptions { order: 3, ..InterpolationOptions::default() };
        let z0 = [c(0.5, 0.0); 2];
        let g = interpolate_first_order(&fam1, &prof, z0, &opts).unwrap();
        for n in 0..4 {
            for m in 0..4 {
                let want = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((g.constants[n][m] - want).norm() < 1e-6);
            }
        }
        assert!(g.coherence_residual < 1e-6);
        let z2 = c(0.3, 0.1);
        for n in 0..4 {
            let got = extract_element(&g.function, &[0], &[n], &[z2], &loose_probe()).unwrap();
            let want = fam1.sequence(0)[n].eval(&[z2]);
            assert!((got.value - want).norm() < 1e-4, "n={n}: {} vs {want}", got.value);
        }
    }

    #[test]
    fn routes_agree() {
        let (fam1, prof) = rat2();
        let z0 = [c(0.5, 0.0); 2];
        let a = interpolate_first_order(&fam1, &prof, z0, &InterpolationOptions { order: 2, ..Default::default() }).unwrap();
        let opts = InterpolationOptions { order: 2, route: HRoute::Extracted, probe: loose_probe(), ..Default::default() };
        let b = interpolate_first_order(&fam1, &prof, z0, &opts).unwrap();
        let z = [c(0.2, 0.05), c(0.15, -0.1)];
        assert!((a.function.eval(&z) - b.function.eval(&z)).norm() < 1e-5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (fam1, prof) = rat2();
        let opts = InterpolationOptions::default();
        assert!(interpolate_first_order(&fam1, &prof, [c(0.0, 0.5), c(0.5, 0.0)], &opts).is_err());
        let small = TypeProfile::constant(-FRAC_PI_3, FRAC_PI_3, 0.4).unwrap();
        assert!(interpolate_first_order(&fam1, &[small.clone(), small], [c(0.5, 0.0); 2], &opts).is_err());
        assert!(interpolate_first_order(&fam1, &prof[..1], [c(0.5, 0.0); 2], &opts).is_err());
    }

    #[test]
    fn r_hat_is_pointwise_min() {
        let (fam1, prof) = rat2();
        let g = interpolate_first_order(&fam1, &prof, [c(0.5, 0.0); 2], &InterpolationOptions { order: 1, ..Default::default() })
            .unwrap();
        for t in [-0.9, 0.0, 0.7] {
            let want = r_tilde(0.5, t, 0.0).unwrap().value.min(10.0);
            assert!((g.r_hat[0].eval(t) - want).abs() < 1e-12);
        }
    }
}
