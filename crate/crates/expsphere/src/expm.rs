//! Reference matrix exponential and resolvent.
//!
//! These are the yardsticks the sphere-average backends are judged
//! against. `expm_oracle` takes two independent routes: hermitian input
//! goes through the eigendecomposition, everything else through scaling
//! and squaring, so the two can cross-validate each other in tests.

use crate::error::{Error, Result};
use crate::linalg::{self, LuFactors};
use crate::matrix::{Complex64, ComplexMatrix, HermitianMatrix, HERMITIAN_REL_TOL};

/// Taylor order of one scaling-and-squaring step.
const TAYLOR_ORDER: usize = 16;

/// Relative guard under which `1 - A` counts as singular.
pub const RESOLVENT_DET_GUARD: f64 = 1e-12;

/// Reference `exp(m)`.
///
/// Hermitian input is diagonalized and exponentiated on the spectrum;
/// general input is handled by scaling and squaring with a fixed-order
/// Taylor core. Intended for moderate norms (up to roughly 10), where the
/// result is accurate to about 1e-12 relative.
pub fn expm_oracle(m: &ComplexMatrix) -> ComplexMatrix {
    if m.is_hermitian(HERMITIAN_REL_TOL) {
        let h = HermitianMatrix::new(m.clone()).expect("checked hermitian above");
        expm_eigh(&h)
    } else {
        expm_scaling_squaring(m)
    }
}

/// `exp(a)` through the eigendecomposition `a = V diag(l) V^H`.
fn expm_eigh(a: &HermitianMatrix) -> ComplexMatrix {
    let (vals, v) = linalg::eigh(a);
    let exp_diag = ComplexMatrix::diagonal(
        &vals.iter().map(|&x| Complex64::new(x.exp(), 0.0)).collect::<Vec<_>>(),
    );
    &(&v * &exp_diag) * &v.adjoint()
}

/// `exp(m)` by scaling and squaring around a degree-16 Taylor core.
///
/// The argument is halved `ceil(log2(max(1, ||m||_F))) + 4` times, pushing
/// the scaled norm below 1/16 where the Taylor remainder is far beyond
/// double precision, then the result is squared back up.
fn expm_scaling_squaring(m: &ComplexMatrix) -> ComplexMatrix {
    let norm = m.frobenius_norm();
    let squarings = norm.max(1.0).log2().ceil() as u32 + 4;
    let scaled = m.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

    let mut sum = ComplexMatrix::identity(m.dim());
    let mut term = ComplexMatrix::identity(m.dim());
    for k in 1..=TAYLOR_ORDER {
        term = term.matmul(&scaled).expect("same dimension");
        term = term.scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = result.matmul(&result).expect("same dimension");
    }
    result
}

/// Resolvent `(1 - a)^{-1}` by LU solve.
///
/// Fails with `resolvent_singular` when `|det(1 - a)|` falls at or below
/// `1e-12 * (1 + ||a||_F)^dim`, which scales the guard with how large the
/// determinant could legitimately be.
pub fn resolvent(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    let one_minus_a = ComplexMatrix::identity(n).sub(a);
    let factors = LuFactors::new(&one_minus_a);
    let det_abs = factors.determinant().norm();
    let guard = RESOLVENT_DET_GUARD * (1.0 + a.frobenius_norm()).powi(n as i32);
    if det_abs <= guard {
        return Err(Error::ResolventSingular { det_abs, guard });
    }
    Ok(factors.inverse())
}
