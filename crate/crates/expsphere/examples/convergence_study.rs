//! Error scaling of both backends: the Monte Carlo error shrinks like
//! one over the square root of the sample count, while the series error
//! drops geometrically with the truncation order.

use expsphere::{
    expm_monte_carlo, expm_oracle, expm_series_fixed_order, random_hermitian, SamplerConfig,
};

fn main() {
    let a = random_hermitian(3, 2024, 1.0);
    let exact = expm_oracle(a.as_matrix());
    let cfg = SamplerConfig::new(2024);

    println!("Monte Carlo ladder (one seed, growing sample count):");
    println!("{:>9} {:>13} {:>13}", "samples", "max abs err", "reported se");
    let mut samples = 1_000u64;
    while samples <= 256_000 {
        let report = expm_monte_carlo(&a, samples, &cfg);
        println!(
            "{:>9} {:>13.3e} {:>13.3e}",
            samples,
            report.value.max_abs_diff(&exact),
            report.abs_error_estimate
        );
        samples *= 4;
    }

    println!();
    println!("series ladder (fixed truncation order):");
    println!("{:>6} {:>13}", "kmax", "max abs err");
    for kmax in (2..=20).step_by(3) {
        let value = expm_series_fixed_order(a.as_matrix(), kmax);
        println!("{:>6} {:>13.3e}", kmax, value.max_abs_diff(&exact));
    }
}
