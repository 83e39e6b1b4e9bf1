//! Matrix exponentials of hermitian matrices via unit-sphere averages.
//!
//! The crate computes `exp(A)` three independent ways and lets them
//! referee each other:
//!
//! * a Monte Carlo estimator that averages a closed-form integrand over
//!   random unit vectors of the complex sphere,
//! * an exact truncated series built from Gaussian moment recursions with
//!   a certified truncation bound,
//! * a classical oracle (eigendecomposition, or scaling and squaring for
//!   non-hermitian input) used as the yardstick.
//!
//! Start with the runnable examples (`cargo run --release -p expsphere
//! --example <name>`), or the `expsphere` binary for file-driven use.

// Dense kernels index several buffers per iteration; plain index loops
// stay readable where iterator adapters would not.
#![allow(clippy::needless_range_loop)]

pub mod charpoly;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod expm;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod mc;
pub mod report;
pub mod series;
pub mod sphere;
pub mod stats;

pub use charpoly::{char_poly_pieces, power_sums, CharPolyCoefficients};
pub use diagnostics::{conversion_identity_holds, run_diagnostics, DiagnosticCheck};
pub use error::{Error, Result};
pub use generate::{bench_suite, random_hermitian};
pub use expm::{expm_oracle, resolvent};
pub use matrix::{Complex64, ComplexMatrix, HermitianMatrix};
pub use mc::{
    expm_fourier_mode, expm_monte_carlo, expm_monte_carlo_threaded, s_derivative_closed_form,
    wrong_formula_demo, DerivativeWeights, WrongFormulaReport,
};
pub use report::{Backend, EstimateReport};
pub use series::{
    build_moment_table, expm_series, expm_series_fixed_order, expm_series_general,
    plan_truncation, resolvent_series_check, MomentTable, TruncationPlan,
};
pub use sphere::{
    gaussian_vs_sphere_check, sample_complex_gaussian, sample_unit_vector, sphere_moment_exact,
    MomentCheckReport, SamplerConfig, SphereSample,
};
