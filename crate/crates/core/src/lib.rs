//! Numerical tools for the log-Sobolev and cubic Sobolev inequalities on the
//! n-cycle `C_n`.
//!
//! All averages are taken with respect to the uniform probability measure on
//! `Z/nZ`, so `<f> = (1/n) sum_j f_j` and
//! `E_n(f, f) = (1/2n) sum_j (f_j - f_{j+1})^2`.

pub mod cycle;
pub mod error;
pub mod inequalities;
pub mod optimize;
pub mod parse;
pub mod products;
pub mod semigroup;
pub mod spectral;

pub use cycle::{
    average, d_quantity, dirichlet, entropy, inner, laplacian_apply, mean_square, nonlinear_term,
    norm2, sup_norm, variance, CycleFunction, FunctionalReport,
};
pub use error::{Error, Result};
pub use inequalities::DeficitReport;
pub use optimize::{
    estimate_alpha, estimate_cubic_constant, OptimizerConfig, Projection, RatioMinResult,
};
pub use spectral::{lambda, mu};
