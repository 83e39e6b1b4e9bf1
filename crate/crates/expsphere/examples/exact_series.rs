//! Evaluates the moment-series backend at a sequence of target accuracies
//! and prints the certified tail bound beside the error actually achieved.
//!
//! The planner picks the truncation order a priori from a majorant on the
//! discarded terms, so the bound is a promise rather than a measurement;
//! the last column shows how much slack the promise carries in practice.

use expsphere::{expm_oracle, expm_series, plan_truncation, random_hermitian};

fn main() {
    let a = random_hermitian(4, 7, 2.0);
    let exact = expm_oracle(a.as_matrix());

    println!("series evaluation of exp(A), 4x4 hermitian, spectral norm 2");
    println!(
        "{:>12} {:>6} {:>13} {:>13}",
        "target", "kmax", "tail bound", "actual err"
    );
    for target in [1e-4, 1e-8, 1e-12] {
        let plan = plan_truncation(a.as_matrix(), target).unwrap();
        let report = expm_series(&a, target).unwrap();
        let err = report.value.max_abs_diff(&exact);
        println!(
            "{:>12.0e} {:>6} {:>13.3e} {:>13.3e}",
            target, plan.kmax, plan.tail_bound, err
        );
    }
}
