//! Result envelope shared by every exponential backend.

use serde::Serialize;

use crate::matrix::ComplexMatrix;

/// Which engine produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Sphere-average Monte Carlo estimator.
    Mc,
    /// Truncated Gaussian-moment series.
    Series,
    /// Classical reference (eigendecomposition / scaling and squaring).
    Oracle,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Mc => "mc",
            Backend::Series => "series",
            Backend::Oracle => "oracle",
        })
    }
}

/// One backend's answer plus the error knowledge it can honestly claim.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    /// The estimated matrix exponential.
    pub value: ComplexMatrix,
    /// Never negative. Monte Carlo reports the largest per-entry standard
    /// error of the mean; the series backend reports its certified
    /// truncation tail bound; the oracle reports 0.
    pub abs_error_estimate: f64,
    pub backend: Backend,
    /// Samples drawn (Monte Carlo) or series terms kept (series).
    pub samples_or_terms: u64,
    /// Sampler seed for reproducibility; `None` for deterministic backends.
    pub seed: Option<u64>,
    /// Wall-clock seconds spent producing the value.
    pub wall_time: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_names_are_stable() {
        assert_eq!(Backend::Mc.to_string(), "mc");
        assert_eq!(Backend::Series.to_string(), "series");
        assert_eq!(Backend::Oracle.to_string(), "oracle");
        assert_eq!(serde_json::to_string(&Backend::Mc).unwrap(), "\"mc\"");
    }

    #[test]
    fn report_serializes_with_matrix_payload() {
        let report = EstimateReport {
            value: ComplexMatrix::identity(2),
            abs_error_estimate: 0.5,
            backend: Backend::Oracle,
            samples_or_terms: 1,
            seed: None,
            wall_time: 0.0,
        };
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"dim\":2"));
        assert!(text.contains("\"backend\":\"oracle\""));
    }
}
