//! Runs the plausible-but-wrong determinant-weighted average beside the
//! graded estimator on identical draws.
//!
//! The wrong formula skips the grade-dependent derivative weights. On
//! A = I/2 it converges confidently to the wrong matrix, many standard
//! errors from exp(A), while the graded estimator lands on target with
//! the very same random numbers.

use expsphere::{
    expm_monte_carlo, expm_oracle, wrong_formula_demo, HermitianMatrix, SamplerConfig,
};

fn main() {
    let a = HermitianMatrix::from_real_diagonal(&[0.5, 0.5]);
    let cfg = SamplerConfig::new(9);
    let samples = 1_000_000;

    let wrong = wrong_formula_demo(&a, samples, &cfg);
    let graded = expm_monte_carlo(&a, samples, &cfg);
    let exact = expm_oracle(a.as_matrix());

    println!("A = I/2 in dimension 2, {samples} draws shared by both estimators");
    println!(
        "det-weighted average: max deviation {:.3e}, about {:.0} standard errors",
        wrong.max_abs_deviation,
        wrong.max_abs_deviation / wrong.abs_error_estimate
    );
    println!(
        "graded estimator:     max deviation {:.3e}, reported se {:.3e}",
        graded.value.max_abs_diff(&exact),
        graded.abs_error_estimate
    );
}
