//! Characteristic-polynomial pieces of `det(1 - A)`.
//!
//! Writing `det(1 - A) = sum_j P_j(A)` with `P_j` homogeneous of degree
//! `j` in the entries of `A`, the pieces are `P_j = (-1)^j e_j` where
//! `e_j` is the elementary symmetric polynomial of the eigenvalues. They
//! are recovered from the power sums `p_k = tr(A^k)` through Newton's
//! identities, so no eigendecomposition is needed. Both sphere-average
//! backends weight their degree-`j` contributions with these pieces.

use crate::matrix::{Complex64, ComplexMatrix};

/// The pieces `P_0..P_r` of `det(1 - A)`, graded by polynomial degree.
#[derive(Debug, Clone)]
pub struct CharPolyCoefficients {
    dim: usize,
    /// `coefficients[j] = P_j(A)`; `coefficients[0] = 1` always.
    coefficients: Vec<Complex64>,
}

impl CharPolyCoefficients {
    /// Matrix dimension `r`; there are `r + 1` pieces.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The degree-`j` piece `P_j(A)`.
    ///
    /// # Panics
    /// Panics if `j > dim`.
    pub fn piece(&self, j: usize) -> Complex64 {
        assert!(j <= self.dim, "piece degree out of range");
        self.coefficients[j]
    }

    /// All pieces `P_0..P_r` in degree order.
    pub fn pieces(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `det(1 - A)`, the plain sum of the pieces.
    pub fn det_one_minus(&self) -> Complex64 {
        self.coefficients.iter().sum()
    }

    /// Sum of piece magnitudes, the weight constant in truncation bounds.
    pub fn abs_sum(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm()).sum()
    }
}

/// Power sums `tr(A^k)` for `k = 1..=kmax`, by repeated multiplication.
///
/// `result[k - 1]` holds `tr(A^k)`.
pub fn power_sums(a: &ComplexMatrix, kmax: usize) -> Vec<Complex64> {
    let mut sums = Vec::with_capacity(kmax);
    if kmax == 0 {
        return sums;
    }
    let mut power = a.clone();
    sums.push(power.trace());
    for _ in 2..=kmax {
        power = &power * a;
        sums.push(power.trace());
    }
    sums
}

/// Degree-graded pieces of `det(1 - A)` via Newton's identities.
///
/// With `e_0 = 1` and `e_k = (1/k) * sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i`,
/// the pieces are `P_j = (-1)^j e_j`. Summation is plain; the recursion is
/// short (at most `dim` terms per step) and well conditioned at the matrix
/// scales this crate targets.
pub fn char_poly_pieces(a: &ComplexMatrix) -> CharPolyCoefficients {
    let r = a.dim();
    let p = power_sums(a, r);
    let mut e = vec![Complex64::new(0.0, 0.0); r + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for k in 1..=r {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut sign = 1.0;
        for i in 1..=k {
            acc += Complex64::new(sign, 0.0) * e[k - i] * p[i - 1];
            sign = -sign;
        }
        e[k] = acc / k as f64;
    }
    let coefficients = e
        .iter()
        .enumerate()
        .map(|(j, &ej)| if j % 2 == 0 { ej } else { -ej })
        .collect();
    CharPolyCoefficients { dim: r, coefficients }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::matrix::HermitianMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lcg_matrix(dim: usize, salt: u64) -> ComplexMatrix {
        let mut state = salt.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let data = (0..dim * dim).map(|_| c(next(), next())).collect();
        ComplexMatrix::from_vec(dim, data)
    }

    fn lcg_hermitian(dim: usize, salt: u64) -> HermitianMatrix {
        let g = lcg_matrix(dim, salt);
        HermitianMatrix::new(g.add(&g.adjoint()).scale(c(0.5, 0.0))).unwrap()
    }

    /// Elementary symmetric polynomials of given roots, by expanding
    /// `prod_i (1 + lambda_i t)` one factor at a time. Independent of the
    /// Newton recursion under test.
    fn elementary_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut coeffs = vec![c(1.0, 0.0)];
        for &root in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &ck) in coeffs.iter().enumerate() {
                next[k] += ck;
                next[k + 1] += ck * root;
            }
            coeffs = next;
        }
        coeffs
    }

    #[test]
    fn power_sums_match_direct_traces() {
        let a = lcg_matrix(4, 3);
        let p = power_sums(&a, 5);
        let mut power = ComplexMatrix::identity(4);
        for k in 1..=5 {
            power = &power * &a;
            assert!((p[k - 1] - power.trace()).norm() <= 1e-12 * power.trace().norm().max(1.0));
        }
    }

    #[test]
    fn power_sums_of_diagonal_are_eigenvalue_powers() {
        let h = HermitianMatrix::from_real_diagonal(&[2.0, -1.0, 0.5]);
        let p = power_sums(h.as_matrix(), 4);
        for k in 1..=4u32 {
            let want: f64 = [2.0f64, -1.0, 0.5].iter().map(|x| x.powi(k as i32)).sum();
            assert!((p[k as usize - 1] - c(want, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn scalar_pieces_are_one_and_minus_a() {
        let a = ComplexMatrix::from_vec(1, vec![c(0.7, 0.0)]);
        let cp = char_poly_pieces(&a);
        assert_eq!(cp.piece(0), c(1.0, 0.0));
        assert!((cp.piece(1) - c(-0.7, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn two_by_two_pieces_are_trace_and_determinant() {
        let a = lcg_matrix(2, 11);
        let cp = char_poly_pieces(&a);
        assert!((cp.piece(1) + a.trace()).norm() <= 1e-13 * a.trace().norm().max(1.0));
        let det = linalg::determinant(&a);
        assert!((cp.piece(2) - det).norm() <= 1e-13 * det.norm().max(1.0));
    }

    #[test]
    fn pieces_sum_to_determinant_of_shift() {
        // Cross-check against the LU route for several sizes.
        for dim in 1..=8 {
            let a = lcg_matrix(dim, 20 + dim as u64);
            let cp = char_poly_pieces(&a);
            let shifted = ComplexMatrix::identity(dim).sub(&a);
            let det = linalg::determinant(&shifted);
            let scale = det.norm().max(1.0);
            assert!(
                (cp.det_one_minus() - det).norm() <= 1e-11 * scale,
                "piece sum drifts from det at dim {dim}"
            );
        }
    }

    #[test]
    fn pieces_match_eigenvalue_expansion() {
        // P_j = (-1)^j e_j(spectrum); build e_j independently from the
        // Jacobi spectrum by direct polynomial expansion.
        let h = lcg_hermitian(5, 31);
        let (vals, _) = linalg::eigh(&h);
        let roots: Vec<Complex64> = vals.iter().map(|&x| c(-x, 0.0)).collect();
        // prod (1 - lambda_i t) at t = 1 gives coefficients (-1)^j e_j.
        let expansion = elementary_from_roots(&roots);
        let cp = char_poly_pieces(h.as_matrix());
        for j in 0..=5 {
            assert!(
                (cp.piece(j) - expansion[j]).norm() <= 1e-11,
                "piece {j} disagrees with eigenvalue expansion"
            );
        }
    }

    #[test]
    fn equal_eigenvalue_pieces_are_binomial() {
        // A = lambda * I has det(1 - A) = (1 - lambda)^r.
        let lambda = 0.6;
        for r in 1..=6usize {
            let h = HermitianMatrix::from_real_diagonal(&vec![lambda; r]);
            let cp = char_poly_pieces(h.as_matrix());
            let mut binom = 1.0;
            for j in 0..=r {
                let want = binom * (-lambda).powi(j as i32);
                assert!(
                    (cp.piece(j) - c(want, 0.0)).norm() <= 1e-10 * want.abs().max(1.0),
                    "binomial piece mismatch at r = {r}, j = {j}"
                );
                binom = binom * (r - j) as f64 / (j + 1) as f64;
            }
        }
    }

    #[test]
    fn pieces_are_homogeneous_in_scaling() {
        // P_j(t A) = t^j P_j(A).
        let a = lcg_matrix(4, 47);
        let base = char_poly_pieces(&a);
        for &t in &[0.5, -1.25, 2.0] {
            let scaled = char_poly_pieces(&a.scale(c(t, 0.0)));
            for j in 0..=4 {
                let want = base.piece(j) * c(t, 0.0).powu(j as u32);
                assert!(
                    (scaled.piece(j) - want).norm() <= 1e-11 * want.norm().max(1.0),
                    "homogeneity fails at t = {t}, j = {j}"
                );
            }
        }
    }

    #[test]
    fn pieces_are_similarity_invariant() {
        // Conjugating by the eigenvector unitary leaves every piece alone.
        let h = lcg_hermitian(4, 61);
        let (_, u) = linalg::eigh(&h);
        let conj = &(&u.adjoint() * h.as_matrix()) * &u;
        let before = char_poly_pieces(h.as_matrix());
        let after = char_poly_pieces(&conj);
        for j in 0..=4 {
            assert!(
                (before.piece(j) - after.piece(j)).norm() <= 1e-11,
                "similarity invariance fails at j = {j}"
            );
        }
    }
}
