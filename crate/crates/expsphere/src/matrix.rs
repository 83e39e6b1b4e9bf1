//! Dense complex matrices and the hermitian wrapper used by every backend.
//!
//! Storage is a flat row-major `Vec<Complex64>`. Matrices here are small
//! (dimensions up to a few dozen), so all operations are straightforward
//! dense loops; no blocking or SIMD is attempted.

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Double-precision complex scalar used throughout the crate.
pub type Complex64 = Complex<f64>;

/// Relative tolerance for admitting a matrix as hermitian.
pub const HERMITIAN_REL_TOL: f64 = 1e-12;

/// Dense complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Square zero matrix of dimension `dim`.
    ///
    /// # Panics
    /// Panics if `dim` is zero.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    /// Identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from a row-major coefficient vector.
    ///
    /// # Panics
    /// Panics if `data.len() != dim * dim` or any entry is non-finite.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        assert_eq!(data.len(), dim * dim, "row-major data length must be dim^2");
        assert!(
            data.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "matrix entries must be finite"
        );
        ComplexMatrix { dim, data }
    }

    /// Builds a diagonal matrix from the given diagonal entries.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m.set(i, i, z);
        }
        m
    }

    /// Matrix dimension (all matrices in this crate are square).
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(row, col)`.
    ///
    /// # Panics
    /// Panics if an index is out of bounds.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        self.data[row * self.dim + col]
    }

    /// Sets the entry at `(row, col)`.
    ///
    /// # Panics
    /// Panics if an index is out of bounds.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        self.data[row * self.dim + col] = value;
    }

    /// Row-major view of the coefficients.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Checked matrix product; fails with `dim_mismatch` on unequal dimensions.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(format!(
                "matmul of {}x{} with {}x{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    ///
    /// # Panics
    /// Panics if `v.len() != dim`.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match dimension");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.data[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Entrywise sum `self + other`.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    /// Entrywise difference `self - other`.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    /// Scalar multiple `c * self`.
    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        let data = self.data.iter().map(|a| a * c).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    /// Adds `c * other` into `self` in place.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn axpy(&mut self, c: Complex64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in axpy");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// Frobenius norm, the root sum of squared entry magnitudes.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self - other`.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Whether `self` equals its own adjoint within `rel_tol` times the
    /// largest entry magnitude. The zero matrix counts as hermitian.
    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        let scale = self.max_abs_entry();
        if scale == 0.0 {
            return true;
        }
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                let dev = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                if dev > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Upper bound on the spectral norm.
    ///
    /// For hermitian input this is the exact largest eigenvalue magnitude
    /// (to eigensolver accuracy); otherwise the Frobenius norm, which always
    /// dominates the spectral norm.
    pub fn operator_norm_upper(&self) -> f64 {
        if self.is_hermitian(HERMITIAN_REL_TOL) {
            let sym = HermitianMatrix { inner: hermitian_average(self) };
            let (eigenvalues, _) = crate::linalg::eigh(&sym);
            eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
        } else {
            self.frobenius_norm()
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Product for internal call sites where dimensions agree by
    /// construction; use [`ComplexMatrix::matmul`] for checked errors.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("operands constructed with equal dimensions")
    }
}

/// Exact hermitian average `(m + m^H) / 2`.
fn hermitian_average(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let avg = (m.get(i, j) + m.get(j, i).conj()) * Complex64::new(0.5, 0.0);
            out.set(i, j, avg);
        }
    }
    out
}

/// A matrix certified hermitian at construction.
///
/// Admission first checks hermiticity within [`HERMITIAN_REL_TOL`] relative
/// to the largest entry, then replaces the payload with its exact hermitian
/// average so downstream code can rely on `A = A^H` bitwise (real diagonal
/// included).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    /// Admits `m` as hermitian or fails with `not_hermitian`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_hermitian(HERMITIAN_REL_TOL) {
            let dev = m.sub(&m.adjoint()).max_abs_entry();
            return Err(Error::NotHermitian(format!(
                "max |A - A^H| entry {dev:.3e} exceeds {HERMITIAN_REL_TOL:e} of scale {:.3e}",
                m.max_abs_entry()
            )));
        }
        Ok(HermitianMatrix { inner: hermitian_average(&m) })
    }

    /// Builds a real diagonal matrix, which is trivially hermitian.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let entries: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        HermitianMatrix { inner: ComplexMatrix::diagonal(&entries) }
    }

    /// The underlying matrix.
    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    /// Consumes the wrapper and returns the underlying matrix.
    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }
}

impl std::ops::Deref for HermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.inner
    }
}

/// Serialized form: `{"dim": n, "re": [[..]; n], "im": [[..]; n]}` with both
/// coefficient tables always present, rows outermost.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim;
        let row = |i: usize, pick: fn(&Complex64) -> f64| -> Vec<f64> {
            (0..n).map(|j| pick(&self.data[i * n + j])).collect()
        };
        let repr = MatrixRepr {
            dim: n,
            re: (0..n).map(|i| row(i, |z| z.re)).collect(),
            im: (0..n).map(|i| row(i, |z| z.im)).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.dim == 0 {
            return Err(D::Error::custom("dim must be positive"));
        }
        let check = |name: &str, table: &Vec<Vec<f64>>| -> std::result::Result<(), D::Error> {
            if table.len() != repr.dim || table.iter().any(|r| r.len() != repr.dim) {
                return Err(D::Error::custom(format!(
                    "{name} must be a {0}x{0} table of rows",
                    repr.dim
                )));
            }
            if table.iter().flatten().any(|x| !x.is_finite()) {
                return Err(D::Error::custom(format!("{name} contains a non-finite entry")));
            }
            Ok(())
        };
        check("re", &repr.re)?;
        check("im", &repr.im)?;
        let mut data = Vec::with_capacity(repr.dim * repr.dim);
        for i in 0..repr.dim {
            for j in 0..repr.dim {
                data.push(Complex64::new(repr.re[i][j], repr.im[i][j]));
            }
        }
        Ok(ComplexMatrix::from_vec(repr.dim, data))
    }
}
