//! Gevrey asymptotics on polysectors: strong asymptotic expansions, truncated
//! Laplace transforms, explicit type formulas and numerical verification of
//! the associated bounds.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod error;
pub mod exec;
pub mod families;
pub mod flatness;
pub mod function;
pub mod geometry;
pub mod json;
mod optimize;
pub mod series;
pub mod testbed;
pub mod transforms;
pub mod typecalc;

pub use error::{Error, Result};
pub use exec::Execution;
pub use function::{Evaluation, SampledFunction};
pub use geometry::{Multidirection, Polysector, Sector};
pub use num_complex::Complex64;
pub use series::MultiIndexSeries;
