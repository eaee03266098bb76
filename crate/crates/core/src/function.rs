use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::exec::{self, Execution};
use crate::geometry::Polysector;

/// A value together with an absolute error estimate (zero for closed forms).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub error: f64,
}

impl Evaluation {
    pub fn exact(value: Complex64) -> Self {
        Evaluation { value, error: 0.0 }
    }
}

type EvalFn = dyn Fn(&[Complex64]) -> Evaluation + Send + Sync;

/// A holomorphic function on a polysector given by an evaluation callback.
///
/// Callbacks must be pure; clones share the callback.
#[derive(Clone)]
pub struct SampledFunction {
    domain: Polysector,
    label: String,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction").field("label", &self.label).field("domain", &self.domain).finish()
    }
}

impl SampledFunction {
    /// A closed form with no evaluation error.
    pub fn exact<F>(domain: Polysector, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
    {
        SampledFunction { domain, label: label.into(), eval: Arc::new(move |z| Evaluation::exact(f(z))) }
    }

    /// A callback that reports its own error estimate.
    pub fn with_error<F>(domain: Polysector, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[Complex64]) -> Evaluation + Send + Sync + 'static,
    {
        SampledFunction { domain, label: label.into(), eval: Arc::new(f) }
    }

    pub fn zero(domain: Polysector) -> Self {
        SampledFunction::exact(domain, "0", |_| Complex64::new(0.0, 0.0))
    }

    pub fn domain(&self) -> &Polysector {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        (self.eval)(z).value
    }

    pub fn eval_with_error(&self, z: &[Complex64]) -> Evaluation {
        (self.eval)(z)
    }

    /// Evaluate on a batch of points, order preserved.
    pub fn eval_grid(&self, points: &[Vec<Complex64>], exec: Execution) -> Vec<Evaluation> {
        exec::map(exec, points, |z| self.eval_with_error(z))
    }

    /// Same callback on a different (typically smaller) domain.
    pub fn with_domain(&self, domain: Polysector) -> Self {
        SampledFunction { domain, label: self.label.clone(), eval: Arc::clone(&self.eval) }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}
