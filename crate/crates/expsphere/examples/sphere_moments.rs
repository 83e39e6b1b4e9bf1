//! Exact moments of monomials over the complex unit sphere, then an
//! empirical check that Gaussian moments exceed sphere moments by exactly
//! the closed-form gamma ratio.

use expsphere::{gaussian_vs_sphere_check, sphere_moment_exact, SamplerConfig};

fn main() {
    println!("exact sphere moments in dimension 3:");
    for (label, monomial) in [
        ("E[|n_1|^2]        ", vec![(1u32, 1u32), (0, 0), (0, 0)]),
        ("E[|n_1|^4]        ", vec![(2, 2), (0, 0), (0, 0)]),
        ("E[|n_1|^2 |n_2|^2]", vec![(1, 1), (1, 1), (0, 0)]),
    ] {
        let value = sphere_moment_exact(3, &monomial).unwrap();
        println!("  {label} = {value}");
    }

    let cfg = SamplerConfig::new(5);
    let report = gaussian_vs_sphere_check(3, 2, 200_000, &cfg);
    println!();
    println!(
        "Gaussian over sphere, degree-4 monomials in dimension 3 ({} samples):",
        report.samples
    );
    for row in &report.rows {
        println!(
            "  powers {:?}: ratio {:.4} vs exact {:.4} ({})",
            row.powers,
            row.ratio,
            row.expected_ratio,
            if row.within_three_se {
                "within 3 se"
            } else {
                "OUTSIDE 3 se"
            }
        );
    }
}
