//! Self-checks for the identities everything else leans on.
//!
//! The exact factorial identity behind the sphere/Gaussian weight
//! conversion is verified in integer arithmetic (no tolerance at all), and
//! a misread of the dimension convention is kept around as a negative
//! control that must fail. The sampling checks re-derive the moment ratios
//! and demonstrate that dropping the determinant grading breaks the
//! estimator.

use num_bigint::BigUint;
use serde::Serialize;

use crate::expm::expm_oracle;
use crate::generate::random_hermitian;
use crate::matrix::HermitianMatrix;
use crate::mc::{expm_monte_carlo, wrong_formula_demo};
use crate::series::{expm_series, resolvent_series_check};
use crate::sphere::{gaussian_vs_sphere_check, SamplerConfig};

/// n! in exact integer arithmetic.
pub fn factorial_big(n: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 2..=n {
        acc *= i as u64;
    }
    acc
}

/// Gamma(n) = (n-1)! for integer n >= 1.
fn gamma_integer(n: usize) -> BigUint {
    assert!(n >= 1, "integer Gamma needs n >= 1");
    factorial_big(n - 1)
}

/// Exact check of the weight conversion between the sphere average and the
/// Gaussian moments: for degree-(2k+2) moments in d real dimensions the
/// claim is
///
/// ```text
/// (1/Gamma(r)) (1/k!) ((r+k)!/(k+j)!) Gamma(d/2)/Gamma(k+1+d/2)
///     = (1/k!) (1/(k+j)!)
/// ```
///
/// Cross-multiplying clears every denominator, so the check is a pure
/// integer equality with zero tolerance. It holds identically when
/// `half_d = r` (d = 2r real dimensions for C^r) and fails for every k
/// under the halved misreading `half_d = r/4`.
pub fn conversion_identity_holds(r: usize, j: usize, k: usize, half_d: usize) -> bool {
    let lhs = gamma_integer(half_d)
        * factorial_big(r + k)
        * factorial_big(k)
        * factorial_big(k + j);
    let rhs = gamma_integer(r)
        * gamma_integer(k + 1 + half_d)
        * factorial_big(k)
        * factorial_big(k + j);
    lhs == rhs
}

/// One row of the diagnostic table.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl DiagnosticCheck {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        DiagnosticCheck {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Run the full diagnostic table. Sampling-based rows use `samples` draws
/// and the given sampler configuration; everything else is exact or
/// deterministic. All rows must pass for the build to be considered
/// healthy, including the rows whose job is to confirm that a wrong
/// formula fails.
pub fn run_diagnostics(samples: u64, cfg: &SamplerConfig) -> Vec<DiagnosticCheck> {
    let mut checks = Vec::new();

    // Exact conversion identity, full sweep.
    let mut failures = 0usize;
    let mut cases = 0usize;
    for r in 1..=8 {
        for j in 0..=r {
            for k in 0..=20 {
                cases += 1;
                if !conversion_identity_holds(r, j, k, r) {
                    failures += 1;
                }
            }
        }
    }
    checks.push(DiagnosticCheck::new(
        "conversion_identity_exact",
        failures == 0,
        format!("{cases} (r, j, k) cases in exact integer arithmetic, {failures} failures"),
    ));

    // The halved dimension misreading must break the identity.
    let mut wrongly_holds = 0usize;
    let mut wrong_cases = 0usize;
    for &r in &[4usize, 8] {
        for k in 0..=20 {
            wrong_cases += 1;
            if conversion_identity_holds(r, 0, k, r / 4) {
                wrongly_holds += 1;
            }
        }
    }
    checks.push(DiagnosticCheck::new(
        "conversion_identity_rejects_halved_dimension",
        wrongly_holds == 0,
        format!("halved convention fails all {wrong_cases} cases, as it must"),
    ));

    // Gaussian vs sphere moment ratios.
    let mut worst_rel = 0.0f64;
    let mut all_within = true;
    for dim in 1..=3 {
        for n_degree in 1..=2u32 {
            let report = gaussian_vs_sphere_check(dim, n_degree, samples, cfg);
            worst_rel = worst_rel.max(report.max_rel_deviation);
            all_within &= report.all_within_three_se;
        }
    }
    checks.push(DiagnosticCheck::new(
        "gaussian_sphere_moment_ratios",
        all_within,
        format!(
            "(dim, N) in {{1,2,3}} x {{1,2}} at {samples} samples, worst relative deviation {worst_rel:.2e}"
        ),
    ));

    // Dropping the determinant grading must visibly break the estimator...
    let half_identity = HermitianMatrix::from_real_diagonal(&[0.5, 0.5]);
    let wrong = wrong_formula_demo(&half_identity, samples, cfg);
    checks.push(DiagnosticCheck::new(
        "ungraded_average_fails",
        wrong.exceeds_ten_se,
        format!(
            "deviation {:.3e} vs standard error {:.3e} on the half identity",
            wrong.max_abs_deviation, wrong.abs_error_estimate
        ),
    ));

    // ...while the graded estimator passes on identical draws.
    let graded = expm_monte_carlo(&half_identity, samples, cfg);
    let oracle = expm_oracle(half_identity.as_matrix());
    let gap = graded.value.max_abs_diff(&oracle);
    let tolerance = 4.0 * graded.abs_error_estimate;
    checks.push(DiagnosticCheck::new(
        "graded_average_passes",
        gap <= tolerance,
        format!("deviation {gap:.3e} within 4 standard errors ({tolerance:.3e}) on the same draws"),
    ));

    // Hand-computable scalar case: the ungraded average of e^lambda at
    // A = [1] is det(1 - A) * e = 0 with zero variance, so the deviation
    // from e^1 is exactly e.
    let unit = HermitianMatrix::from_real_diagonal(&[1.0]);
    let scalar_wrong = wrong_formula_demo(&unit, 1000, cfg);
    let dev_is_e = (scalar_wrong.max_abs_deviation - std::f64::consts::E).abs() < 1e-12;
    checks.push(DiagnosticCheck::new(
        "ungraded_scalar_hand_value",
        dev_is_e && scalar_wrong.abs_error_estimate == 0.0,
        format!(
            "deviation {:.15} (e = {:.15}), spread {:.1e}",
            scalar_wrong.max_abs_deviation,
            std::f64::consts::E,
            scalar_wrong.abs_error_estimate
        ),
    ));

    // Geometric series face of the moment identity.
    let contraction = random_hermitian(4, cfg.seed ^ 0x5e71e5, 0.7);
    let residual = resolvent_series_check(&contraction, 60).unwrap_or(f64::INFINITY);
    checks.push(DiagnosticCheck::new(
        "resolvent_series_tail",
        residual <= 1e-8,
        format!("kmax 60 residual {residual:.3e} against the direct inverse"),
    ));

    // Series backend against the classical oracle.
    let probe = random_hermitian(4, cfg.seed ^ 0x0e5a, 2.0);
    let series = expm_series(&probe, 1e-10);
    let (passed, detail) = match series {
        Ok(report) => {
            let gap = report.value.max_abs_diff(&expm_oracle(probe.as_matrix()));
            (gap <= 1e-9, format!("4x4 spectral norm 2, deviation {gap:.3e}"))
        }
        Err(e) => (false, format!("series evaluation failed: {e}")),
    };
    checks.push(DiagnosticCheck::new("series_matches_oracle", passed, detail));

    checks
}
