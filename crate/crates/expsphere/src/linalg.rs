//! Dense linear algebra kernels: LU factorization with partial pivoting and
//! a cyclic Jacobi eigensolver for hermitian matrices.
//!
//! Both are self-contained textbook implementations sized for the small
//! dense matrices this crate works with. The two routes are independent,
//! which lets higher layers cross-check determinants against eigenvalue
//! products and exponentials against series evaluations.

use crate::matrix::{Complex64, ComplexMatrix, HermitianMatrix};

/// Convergence threshold for the Jacobi sweep, relative to the Frobenius
/// norm of the input: iteration stops once the off-diagonal mass drops
/// below `JACOBI_REL_TOL * ||A||_F`.
pub const JACOBI_REL_TOL: f64 = 1e-14;

const MAX_JACOBI_SWEEPS: usize = 60;

/// LU factorization `P * A = L * U` with partial pivoting.
pub struct LuFactors {
    dim: usize,
    /// Combined storage: strictly lower part holds L (unit diagonal
    /// implied), upper triangle holds U.
    lu: Vec<Complex64>,
    /// Row permutation: `perm[i]` is the source row of factored row `i`.
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl LuFactors {
    /// Factors `m`, always succeeding; exact singularity is recorded and
    /// surfaces as a zero determinant.
    pub fn new(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty pivot range");
            if pivot_mag == 0.0 {
                singular = true;
                continue;
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                sign = -sign;
            }
            let pivot = lu[col * n + col];
            for r in col + 1..n {
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                for j in col + 1..n {
                    let sub = factor * lu[col * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        LuFactors { dim: n, lu, perm, sign, singular }
    }

    /// Determinant of the factored matrix.
    pub fn determinant(&self) -> Complex64 {
        if self.singular {
            return Complex64::new(0.0, 0.0);
        }
        let mut det = Complex64::new(self.sign, 0.0);
        for i in 0..self.dim {
            det *= self.lu[i * self.dim + i];
        }
        det
    }

    /// Whether a zero pivot was encountered.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Solves `A x = b` for one right-hand side.
    ///
    /// # Panics
    /// Panics if the factorization is singular or `b.len() != dim`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert!(!self.singular, "solve called on a singular factorization");
        assert_eq!(b.len(), self.dim, "right-hand side length must match");
        let n = self.dim;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&src| b[src]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Solves `A X = I`, returning the inverse.
    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        let mut unit = vec![Complex64::new(0.0, 0.0); n];
        for col in 0..n {
            unit[col] = Complex64::new(1.0, 0.0);
            let x = self.solve(&unit);
            unit[col] = Complex64::new(0.0, 0.0);
            for row in 0..n {
                out.set(row, col, x[row]);
            }
        }
        out
    }
}

/// Determinant via LU factorization.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    LuFactors::new(m).determinant()
}

/// Eigendecomposition of a hermitian matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, v)` with real eigenvalues in unsorted order and
/// the columns of `v` the matching orthonormal eigenvectors, so that
/// `A = v * diag(eigenvalues) * v^H`.
///
/// # Panics
/// Panics if the sweep fails to converge, which does not happen for
/// hermitian input.
pub fn eigh(a: &HermitianMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    if n == 1 {
        return (vec![m.get(0, 0).re], v);
    }
    let threshold = JACOBI_REL_TOL * m.frobenius_norm();
    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_mass(&m) <= threshold {
            let eigenvalues = (0..n).map(|i| m.get(i, i).re).collect();
            return (eigenvalues, v);
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate_pair(&mut m, &mut v, p, q);
            }
        }
    }
    panic!("jacobi eigensolver did not converge in {MAX_JACOBI_SWEEPS} sweeps");
}

/// Frobenius mass of the off-diagonal part.
fn off_diagonal_mass(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing the `(p, q)` entry of the hermitian working
/// matrix `m`, accumulated into `v`.
///
/// The pivot `a_pq = rho * e^{i phi}` is reduced to the real symmetric case
/// by the phase `e^{-i phi}`, then the standard rotation angle choice
/// `t = sgn(theta) / (|theta| + sqrt(theta^2 + 1))` with
/// `theta = (a_qq - a_pp) / (2 rho)` zeroes it.
fn rotate_pair(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let rho = apq.norm();
    if rho == 0.0 {
        return;
    }
    let phase = apq / rho;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let theta = (aqq - app) / (2.0 * rho);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // Unitary pair rotation J: J[p][p] = c, J[p][q] = s,
    // J[q][p] = -s * conj(phase), J[q][q] = c * conj(phase).
    let n = m.dim();
    let jc = Complex64::new(c, 0.0);
    let js = Complex64::new(s, 0.0);

    // Columns: m <- m * J.
    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, mkp * jc - mkq * js * phase.conj());
        m.set(k, q, mkp * js + mkq * jc * phase.conj());
    }
    // Rows: m <- J^H * m.
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, mpk * jc - mqk * js * phase);
        m.set(q, k, mpk * js + mqk * jc * phase);
    }
    // Scrub rounding residue on the strictly zeroed pair and keep the
    // working matrix exactly hermitian on the touched entries.
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    m.set(p, p, Complex64::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex64::new(m.get(q, q).re, 0.0));

    // Accumulate eigenvectors: v <- v * J.
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * jc - vkq * js * phase.conj());
        v.set(k, q, vkp * js + vkq * jc * phase.conj());
    }
}
