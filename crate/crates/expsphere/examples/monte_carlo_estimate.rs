//! Estimates the exponential of a random 3x3 hermitian matrix by sphere
//! sampling and compares each estimate against the classical oracle.
//!
//! The reported standard error tracks the actual error as the sample
//! count grows, which is the estimator's whole value proposition: it
//! knows how wrong it is.

use expsphere::{expm_monte_carlo, expm_oracle, random_hermitian, SamplerConfig};

fn main() {
    let a = random_hermitian(3, 42, 1.5);
    let cfg = SamplerConfig::new(42);
    let exact = expm_oracle(a.as_matrix());

    println!("exp(A) for a random 3x3 hermitian A with spectral norm 1.5");
    println!("{:>9} {:>13} {:>13}", "samples", "max abs err", "reported se");
    for exponent in [3u32, 4, 5, 6] {
        let samples = 10u64.pow(exponent);
        let report = expm_monte_carlo(&a, samples, &cfg);
        let err = report.value.max_abs_diff(&exact);
        println!(
            "{:>9} {:>13.3e} {:>13.3e}",
            samples, err, report.abs_error_estimate
        );
    }
}
