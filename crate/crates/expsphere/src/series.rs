//! Deterministic series backend: the same sphere average the Monte Carlo
//! estimator samples, integrated in closed form.
//!
//! Writing `Det(1 - A) = sum_j P_j(A)` and expanding the Gaussian
//! generating function `1/Det(1 - tA) = sum_k h[k] t^k`, the Gaussian
//! moment matrices come out as `G[k] = k! * sum_{m<=k} A^m h[k-m]` and the
//! exponential collapses to a weighted double sum
//!
//! ```text
//! e^A = sum_{j=0..r} P_j(A) * sum_{k>=0} G[k] / (k! (k+j)!)
//! ```
//!
//! The scaled moment `Q_k = G[k]/k!` obeys the one-product recurrence
//! `Q_k = A Q_{k-1} + h[k] I`, so evaluation costs one matrix multiply per
//! retained order. [`plan_truncation`] picks the cutoff from an explicit
//! entrywise majorant and the evaluator returns the certified tail bound
//! alongside the value.

use std::time::Instant;

use crate::charpoly::{char_poly_pieces, CharPolyCoefficients};
use crate::error::{Error, Result};
use crate::expm::resolvent;
use crate::linalg::eigh;
use crate::matrix::{Complex64, ComplexMatrix, HermitianMatrix};
use crate::report::{Backend, EstimateReport};

/// Hard ceiling on the truncation order of the k-sum.
pub const TRUNCATION_CAP: usize = 500;

/// Smallest n whose factorial overflows f64 (171! > 1.7e308).
const FACTORIAL_OVERFLOW_AT: usize = 171;

/// Inverse factorials `1/0!, 1/1!, ..., 1/up_to!`.
///
/// Up to 170! the factorial is accumulated exactly in floating point and
/// inverted; past the overflow threshold the inverse switches to
/// `exp(-ln n!)` from a running log sum, which underflows to zero once n!
/// exceeds the reciprocal f64 range. Both regimes are monotone decreasing,
/// so downstream weights degrade gracefully instead of turning infinite.
fn inverse_factorials(up_to: usize) -> Vec<f64> {
    let mut inv = Vec::with_capacity(up_to + 1);
    let mut fact = 1.0_f64;
    let mut log_fact = 0.0_f64;
    for n in 0..=up_to {
        if n > 0 {
            log_fact += (n as f64).ln();
            if n < FACTORIAL_OVERFLOW_AT {
                fact *= n as f64;
            }
        }
        if n < FACTORIAL_OVERFLOW_AT {
            inv.push(1.0 / fact);
        } else {
            inv.push((-log_fact).exp());
        }
    }
    inv
}

/// Incremental builder for the h coefficients and scaled moments.
struct MomentEngine {
    a: ComplexMatrix,
    /// A^(traces.len()), used to extend the trace list.
    power: ComplexMatrix,
    /// traces[i-1] = Tr(A^i).
    traces: Vec<Complex64>,
    h: Vec<Complex64>,
    scaled: Vec<ComplexMatrix>,
}

impl MomentEngine {
    fn new(a: &ComplexMatrix) -> Self {
        MomentEngine {
            power: ComplexMatrix::identity(a.dim()),
            traces: Vec::new(),
            h: vec![Complex64::new(1.0, 0.0)],
            scaled: vec![ComplexMatrix::identity(a.dim())],
            a: a.clone(),
        }
    }

    /// Number of computed orders (kmax + 1).
    fn len(&self) -> usize {
        self.h.len()
    }

    /// Append the next order: h[k] by the trace recursion
    /// `h[k] = (1/k) sum_{i=1..k} Tr(A^i) h[k-i]` and the scaled moment by
    /// `Q_k = A Q_{k-1} + h[k] I`.
    fn extend(&mut self) {
        let k = self.h.len();
        while self.traces.len() < k {
            self.power = &self.power * &self.a;
            self.traces.push(self.power.trace());
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            acc += self.traces[i - 1] * self.h[k - i];
        }
        let hk = acc / k as f64;
        let mut q = &self.a * &self.scaled[k - 1];
        for d in 0..q.dim() {
            let v = q.get(d, d) + hk;
            q.set(d, d, v);
        }
        assert!(
            q.as_slice()
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite()),
            "moment overflow at order {k}; rescale the input or lower the order"
        );
        self.h.push(hk);
        self.scaled.push(q);
    }
}

/// Moment data for one matrix: the coefficients `h[k]` of `1/Det(1 - tA)`,
/// the scaled Gaussian moments `Q_k = G[k]/k!`, and the characteristic
/// pieces `P_j` they are weighted by.
pub struct MomentTable {
    kmax: usize,
    h: Vec<Complex64>,
    scaled: Vec<ComplexMatrix>,
    pieces: CharPolyCoefficients,
}

impl MomentTable {
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn h(&self, k: usize) -> Complex64 {
        self.h[k]
    }

    pub fn h_coefficients(&self) -> &[Complex64] {
        &self.h
    }

    /// `Q_k = G[k]/k!`, the form all evaluation runs on.
    pub fn scaled_moment(&self, k: usize) -> &ComplexMatrix {
        &self.scaled[k]
    }

    pub fn pieces(&self) -> &CharPolyCoefficients {
        &self.pieces
    }

    /// The unscaled Gaussian moment `G[k] = k! * sum_m A^m h[k-m]`.
    ///
    /// # Panics
    /// Panics for `k >= 171`, where k! overflows f64; diagnostics only need
    /// small k, and evaluation always uses the scaled form.
    pub fn gaussian_moment(&self, k: usize) -> ComplexMatrix {
        assert!(
            k < FACTORIAL_OVERFLOW_AT,
            "k! overflows f64 for k = {k}; use scaled_moment instead"
        );
        let mut fact = 1.0_f64;
        for i in 1..=k {
            fact *= i as f64;
        }
        self.scaled[k].scale(Complex64::new(fact, 0.0))
    }

    /// Numerical residual of the generating identity
    /// `Det(1 - tA) * sum_k h[k] t^k = 1`: the largest magnitude among the
    /// coefficients of t^1..t^kmax of the product, together with the
    /// deviation of the t^0 coefficient from one. Exact arithmetic would
    /// give zero; float cancellation should stay near machine precision
    /// while the h sequence is bounded (spectral radius at most about one).
    pub fn generating_residual(&self) -> f64 {
        let r = self.scaled[0].dim();
        let mut worst = (self.pieces.piece(0) * self.h[0] - Complex64::new(1.0, 0.0)).norm();
        for m in 1..=self.kmax {
            let mut coeff = Complex64::new(0.0, 0.0);
            for j in 0..=r.min(m) {
                coeff += self.pieces.piece(j) * self.h[m - j];
            }
            worst = worst.max(coeff.norm());
        }
        worst
    }
}

/// Compute h and the scaled moments for orders 0..=kmax.
pub fn build_moment_table(a: &ComplexMatrix, kmax: usize) -> MomentTable {
    let mut engine = MomentEngine::new(a);
    while engine.len() <= kmax {
        engine.extend();
    }
    MomentTable {
        kmax,
        h: engine.h,
        scaled: engine.scaled,
        pieces: char_poly_pieces(a),
    }
}

/// Truncation order for the k-sum plus a certified entrywise bound on
/// everything discarded past it.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPlan {
    pub kmax: usize,
    pub tail_bound: f64,
}

/// Running majorant on the k-th term of the weighted sum.
///
/// With `nu` an upper bound on the spectral radius (hermitian input: the
/// largest eigenvalue magnitude; general input: the Frobenius norm), the
/// monomial count of the complete homogeneous form gives
/// `|h[l]| <= C(l+r-1, r-1) nu^l`, and summing over the powers in
/// `Q_k = sum_m A^m h[k-m]` telescopes by the hockey-stick identity to
///
/// ```text
/// |Q_k entry| <= C(k+r, r) * nu^k.
/// ```
///
/// The weight obeys `|sum_j P_j/(k+j)!| <= wsum/k!` with
/// `wsum = sum_j |P_j|`, so `t_k = wsum * C(k+r, r) * nu^k / k!` dominates
/// the k-th term entrywise. Consecutive majorants have ratio
/// `t_{k+1}/t_k = nu (k+1+r) / (k+1)^2`, strictly decreasing in k, so once
/// it falls below one the tail is dominated by a geometric series.
#[derive(Clone)]
struct TermMajorant {
    nu: f64,
    r: usize,
    k: usize,
    /// t_k for the current k.
    value: f64,
}

impl TermMajorant {
    fn new(nu: f64, r: usize, wsum: f64) -> Self {
        TermMajorant {
            nu,
            r,
            k: 0,
            value: wsum,
        }
    }

    /// t_{k+1} / t_k.
    fn next_ratio(&self) -> f64 {
        let k1 = (self.k + 1) as f64;
        self.nu * (k1 + self.r as f64) / (k1 * k1)
    }

    fn advance(&mut self) {
        self.value *= self.next_ratio();
        self.k += 1;
    }

    /// Bound on `sum_{k > self.k} t_k`, or `None` while the term ratio is
    /// still at or above one.
    fn tail_bound(&self) -> Option<f64> {
        let mut next = self.clone();
        next.advance();
        let rho = next.next_ratio();
        if rho >= 1.0 {
            return None;
        }
        Some(next.value / (1.0 - rho))
    }
}

/// Choose the smallest truncation order whose majorant tail meets
/// `target_abs_err`.
///
/// # Panics
/// Panics if `target_abs_err` is not positive.
pub fn plan_truncation(a: &ComplexMatrix, target_abs_err: f64) -> Result<TruncationPlan> {
    assert!(target_abs_err > 0.0, "target_abs_err must be positive");
    let nu = a.operator_norm_upper();
    let wsum = char_poly_pieces(a).abs_sum();
    let mut major = TermMajorant::new(nu, a.dim(), wsum);
    loop {
        if let Some(tail) = major.tail_bound() {
            if tail <= target_abs_err {
                return Ok(TruncationPlan {
                    kmax: major.k,
                    tail_bound: tail,
                });
            }
        }
        if major.k >= TRUNCATION_CAP {
            return Err(Error::TruncationCap {
                cap: TRUNCATION_CAP,
                target: target_abs_err,
            });
        }
        major.advance();
    }
}

/// Entrywise compensated accumulator; keeps the long k-sum from losing the
/// small late terms behind the large early ones.
struct KahanMatrixSum {
    dim: usize,
    sum: Vec<Complex64>,
    comp: Vec<Complex64>,
}

impl KahanMatrixSum {
    fn new(dim: usize) -> Self {
        KahanMatrixSum {
            dim,
            sum: vec![Complex64::new(0.0, 0.0); dim * dim],
            comp: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    fn add_scaled(&mut self, m: &ComplexMatrix, c: Complex64) {
        for (i, z) in m.as_slice().iter().enumerate() {
            let v = *z * c;
            kahan_add(&mut self.sum[i].re, &mut self.comp[i].re, v.re);
            kahan_add(&mut self.sum[i].im, &mut self.comp[i].im, v.im);
        }
    }

    fn into_value(self) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.dim, self.sum)
    }
}

fn kahan_add(sum: &mut f64, comp: &mut f64, v: f64) {
    let y = v - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// Series evaluation of `e^A` for hermitian `A`.
pub fn expm_series(a: &HermitianMatrix, target_abs_err: f64) -> Result<EstimateReport> {
    expm_series_general(a.as_matrix(), target_abs_err)
}

/// Series evaluation of `e^M` for a general square matrix.
///
/// The double sum converges for every finite matrix, so this also serves
/// the rotation mode `M = i A`. For non-hermitian input the truncation
/// plan falls back to the Frobenius norm as its spectral bound, costing a
/// few extra orders but never certainty.
///
/// The plan's order is extended while the last included term is not yet
/// small against the target (below one percent of it), so majorant slack
/// never converts into missing accuracy. `abs_error_estimate` in the
/// report is the majorant tail at the order actually used.
pub fn expm_series_general(a: &ComplexMatrix, target_abs_err: f64) -> Result<EstimateReport> {
    let start = Instant::now();
    let plan = plan_truncation(a, target_abs_err)?;
    let r = a.dim();
    let pieces = char_poly_pieces(a);
    let inv_fact = inverse_factorials(TRUNCATION_CAP + r);
    let mut engine = MomentEngine::new(a);
    let mut sum = KahanMatrixSum::new(r);
    let mut k = 0usize;
    let kmax_used;
    loop {
        while engine.len() <= k {
            engine.extend();
        }
        let mut weight = Complex64::new(0.0, 0.0);
        for j in 0..=r {
            weight += pieces.piece(j) * inv_fact[k + j];
        }
        sum.add_scaled(&engine.scaled[k], weight);
        let term_size = engine.scaled[k].max_abs_entry() * weight.norm();
        if k >= plan.kmax && (plan.tail_bound == 0.0 || term_size < 0.01 * target_abs_err) {
            kmax_used = k;
            break;
        }
        if k >= TRUNCATION_CAP {
            return Err(Error::TruncationCap {
                cap: TRUNCATION_CAP,
                target: target_abs_err,
            });
        }
        k += 1;
    }
    let mut major = TermMajorant::new(a.operator_norm_upper(), r, pieces.abs_sum());
    while major.k < kmax_used {
        major.advance();
    }
    let tail = major
        .tail_bound()
        .expect("term ratio is below one at and past the planned order");
    Ok(EstimateReport {
        value: sum.into_value(),
        abs_error_estimate: tail,
        backend: Backend::Series,
        samples_or_terms: (kmax_used + 1) as u64,
        seed: None,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Series evaluation at a caller-chosen truncation order, with no
/// planning, extension, or tail certificate. This is the raw object
/// convergence studies sweep: the k-sum of the weighted moments cut at
/// `kmax` exactly.
pub fn expm_series_fixed_order(a: &ComplexMatrix, kmax: usize) -> ComplexMatrix {
    let r = a.dim();
    let pieces = char_poly_pieces(a);
    let inv_fact = inverse_factorials(kmax + r);
    let mut engine = MomentEngine::new(a);
    let mut sum = KahanMatrixSum::new(r);
    for k in 0..=kmax {
        while engine.len() <= k {
            engine.extend();
        }
        let mut weight = Complex64::new(0.0, 0.0);
        for j in 0..=r {
            weight += pieces.piece(j) * inv_fact[k + j];
        }
        sum.add_scaled(&engine.scaled[k], weight);
    }
    sum.into_value()
}

/// Truncated geometric-series identity check.
///
/// With weight one in place of the exponential weights the double sum
/// telescopes degree by degree: `sum_{j+k=m} P_j Q_k = A^m` for every m.
/// Keeping every term of total degree `j + k <= kmax` therefore reproduces
/// the partial geometric sum `sum_{m<=kmax} A^m` exactly, and the returned
/// residual against the direct inverse `(1 - A)^{-1}` is the pure
/// geometric tail, decaying like `|A|^(kmax+1)`.
///
/// Requires spectral radius below one; larger input yields
/// [`Error::ResolventSeriesDivergent`].
pub fn resolvent_series_check(a: &HermitianMatrix, kmax: usize) -> Result<f64> {
    let (eigenvalues, _) = eigh(a);
    let spectral = eigenvalues.iter().fold(0.0_f64, |m, &l| m.max(l.abs()));
    if spectral >= 1.0 {
        return Err(Error::ResolventSeriesDivergent(spectral));
    }
    let m = a.as_matrix();
    let r = m.dim();
    let table = build_moment_table(m, kmax);
    let mut acc = ComplexMatrix::zeros(r);
    let mut prefix = ComplexMatrix::zeros(r);
    let mut next_k = 0usize;
    for j in (0..=r.min(kmax)).rev() {
        while next_k <= kmax - j {
            prefix = prefix.add(table.scaled_moment(next_k));
            next_k += 1;
        }
        acc.axpy(table.pieces().piece(j), &prefix);
    }
    let direct = resolvent(m)?;
    Ok(acc.max_abs_diff(&direct))
}
