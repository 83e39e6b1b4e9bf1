//! Computes exp(iA) for a hermitian A through the series machinery and
//! checks that the result is unitary to near machine precision.

use expsphere::{expm_series_general, random_hermitian, Complex64, ComplexMatrix};

fn main() {
    let a = random_hermitian(4, 11, 2.5);
    let ia = a.as_matrix().scale(Complex64::new(0.0, 1.0));
    let report = expm_series_general(&ia, 1e-12).unwrap();

    let u = &report.value;
    let gram = u.adjoint().matmul(u).unwrap();
    let deviation = gram.max_abs_diff(&ComplexMatrix::identity(4));

    println!("exp(iA) via the series backend, 4x4 hermitian, spectral norm 2.5");
    println!("terms kept:            {}", report.samples_or_terms);
    println!("certified tail bound:  {:.3e}", report.abs_error_estimate);
    println!("max |U^H U - I| entry: {:.3e}", deviation);
}
