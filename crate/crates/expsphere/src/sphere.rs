//! Sampling on the complex unit sphere and its exact moments.
//!
//! A point `n` of the unit sphere in `C^r` is drawn by normalizing a
//! vector of `2r` standard normals. Every sample is produced by a
//! counter-based generator keyed on `(seed, stream, index)`, so any sample
//! can be regenerated in isolation and multi-threaded runs see exactly the
//! same draws as serial ones.
//!
//! Closed-form moments: for multi-indices `a = b` with `N = sum a_i`,
//!
//! ```text
//! integral over the sphere of prod_i n_i^{a_i} conj(n_i)^{b_i}
//!     = (prod_i a_i!) * Gamma(r) / Gamma(r + N)
//! ```
//!
//! and the moment vanishes by phase invariance whenever `a != b`. The
//! matching complex-Gaussian moment (unit variance per coordinate) is
//! `prod_i a_i!`, so Gaussian and sphere moments of total degree `2N`
//! differ by exactly `Gamma(N + r) / Gamma(r)`. `gaussian_vs_sphere_check`
//! verifies that ratio empirically; the series backend relies on it to
//! trade sphere integrals for Gaussian ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix};
use crate::stats::WelfordAccumulator;

/// Identity of a deterministic sampling run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    /// Base seed; two runs with equal seeds see equal draws.
    pub seed: u64,
    /// Number of independent substreams the samples are split across.
    pub stream_count: u64,
}

impl SamplerConfig {
    /// Config with the given seed and a single stream.
    pub fn new(seed: u64) -> Self {
        SamplerConfig { seed, stream_count: 1 }
    }

    /// Config with the given seed and stream count (at least 1).
    pub fn with_streams(seed: u64, stream_count: u64) -> Self {
        SamplerConfig { seed, stream_count: stream_count.max(1) }
    }
}

/// One draw from the unit sphere of `C^r`.
#[derive(Debug, Clone)]
pub struct SphereSample {
    /// Unit vector, `sum_i |n_i|^2 = 1` up to rounding.
    pub n: Vec<Complex64>,
    /// Rank-one projector `w[i][j] = n_i * conj(n_j)`.
    pub w: ComplexMatrix,
}

/// Domain tags keeping the per-purpose substreams disjoint.
const DOMAIN_SPHERE: u32 = 0x5348_5052;
const DOMAIN_GAUSS: u32 = 0x4741_5553;
const DOMAIN_MONO: u32 = 0x4d4f_4e4f;

/// Counter-based generator for one sample: the key encodes
/// `(seed, stream, index, redraw, domain)`, so the draw depends on nothing
/// but those coordinates.
fn keyed_rng(cfg: &SamplerConfig, stream: u64, index: u64, redraw: u32, domain: u32) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&cfg.seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    key[24..28].copy_from_slice(&redraw.to_le_bytes());
    key[28..32].copy_from_slice(&domain.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// `2 * dim` standard normals as a complex vector, drawn from the keyed
/// generator for `(cfg.seed, stream, index, redraw)`.
fn normal_pairs(
    cfg: &SamplerConfig,
    stream: u64,
    index: u64,
    redraw: u32,
    domain: u32,
    dim: usize,
) -> Vec<Complex64> {
    let mut rng = keyed_rng(cfg, stream, index, redraw, domain);
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

/// Deterministic draw of a unit vector of `C^dim` and its projector.
///
/// The Gaussian vector is redrawn (with a fresh key) in the measure-zero
/// event that it is exactly zero, so the output is always normalized.
///
/// # Panics
/// Panics if `dim` is zero.
pub fn sample_unit_vector(cfg: &SamplerConfig, stream: u64, index: u64, dim: usize) -> SphereSample {
    assert!(dim > 0, "sphere dimension must be positive");
    let mut redraw = 0u32;
    let g = loop {
        let g = normal_pairs(cfg, stream, index, redraw, DOMAIN_SPHERE, dim);
        if g.iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.0 {
            break g;
        }
        redraw += 1;
    };
    let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let n: Vec<Complex64> = g.into_iter().map(|z| z / norm).collect();
    let mut w = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            w.set(i, j, n[i] * n[j].conj());
        }
    }
    SphereSample { n, w }
}

/// Deterministic draw of a complex Gaussian vector with unit variance per
/// coordinate (`E |z_i|^2 = 1`), the measure the exact moment table uses.
pub fn sample_complex_gaussian(
    cfg: &SamplerConfig,
    stream: u64,
    index: u64,
    dim: usize,
) -> Vec<Complex64> {
    assert!(dim > 0, "dimension must be positive");
    let half = std::f64::consts::FRAC_1_SQRT_2;
    normal_pairs(cfg, stream, index, 0, DOMAIN_GAUSS, dim)
        .into_iter()
        .map(|z| z * half)
        .collect()
}

/// Exact normalized sphere moment of the monomial
/// `prod_i n_i^{a_i} * conj(n_i)^{b_i}`, given as `(a_i, b_i)` pairs.
///
/// Returns the closed form for `a = b`, zero for even-degree `a != b`
/// (phase invariance kills those), and fails with
/// `odd_degree_moment_zero` when the total degree is odd, since asking for
/// one is almost always a caller bug.
pub fn sphere_moment_exact(dim: usize, monomial: &[(u32, u32)]) -> Result<f64> {
    if monomial.len() != dim {
        return Err(Error::DimMismatch(format!(
            "monomial has {} coordinate pairs for dimension {}",
            monomial.len(),
            dim
        )));
    }
    let total: u32 = monomial.iter().map(|&(a, b)| a + b).sum();
    if total % 2 == 1 {
        return Err(Error::OddDegreeMomentZero(total as usize));
    }
    if monomial.iter().any(|&(a, b)| a != b) {
        return Ok(0.0);
    }
    let n_degree: u32 = monomial.iter().map(|&(a, _)| a).sum();
    let mut value = 1.0;
    for &(a, _) in monomial {
        value *= factorial(a);
    }
    Ok(value / gaussian_sphere_ratio(dim, n_degree))
}

/// `Gamma(n_degree + dim) / Gamma(dim)`, the exact factor between the
/// Gaussian and sphere moments of total degree `2 * n_degree`.
pub fn gaussian_sphere_ratio(dim: usize, n_degree: u32) -> f64 {
    (0..n_degree).map(|t| (dim as u32 + t) as f64).product()
}

fn factorial(n: u32) -> f64 {
    assert!(n <= 170, "factorial overflows f64 beyond 170");
    (1..=n).map(f64::from).product()
}

/// One monomial's row in the Gaussian-versus-sphere comparison.
#[derive(Debug, Clone, Serialize)]
pub struct MomentRatioRow {
    /// Powers `a_i` of the tested monomial (`b = a`).
    pub powers: Vec<u32>,
    pub gaussian_mean: f64,
    pub gaussian_se: f64,
    pub sphere_mean: f64,
    pub sphere_se: f64,
    /// Empirical `gaussian_mean / sphere_mean`.
    pub ratio: f64,
    /// Exact `Gamma(N + dim) / Gamma(dim)`.
    pub expected_ratio: f64,
    /// `|ratio - expected| / expected`.
    pub rel_deviation: f64,
    /// Whether the ratio sits within three propagated standard errors.
    pub within_three_se: bool,
}

/// Outcome of the empirical Gaussian-to-sphere moment comparison.
#[derive(Debug, Clone, Serialize)]
pub struct MomentCheckReport {
    pub dim: usize,
    pub n_degree: u32,
    pub samples: u64,
    pub rows: Vec<MomentRatioRow>,
    pub max_rel_deviation: f64,
    pub all_within_three_se: bool,
}

/// Estimates Gaussian and sphere moments of total degree `2 * n_degree` by
/// Monte Carlo and compares their ratio to the exact
/// `Gamma(N + dim) / Gamma(dim)`.
///
/// Up to three distinct monomials (with `a = b`, chosen deterministically
/// from the seed) are evaluated on shared draws of `samples` points per
/// measure. Each row passes when its empirical ratio lies within three
/// propagated standard errors of the exact value.
///
/// # Panics
/// Panics if `dim` or `n_degree` or `samples` is zero.
pub fn gaussian_vs_sphere_check(
    dim: usize,
    n_degree: u32,
    samples: u64,
    cfg: &SamplerConfig,
) -> MomentCheckReport {
    assert!(dim > 0 && n_degree > 0 && samples > 0, "degenerate comparison requested");
    let monomials = pick_monomials(dim, n_degree, cfg);
    let count = monomials.len();

    let mut gauss = vec![WelfordAccumulator::new(); count];
    let mut sphere = vec![WelfordAccumulator::new(); count];
    for index in 0..samples {
        let z = sample_complex_gaussian(cfg, 0, index, dim);
        let s = sample_unit_vector(cfg, 0, index, dim);
        for (m, powers) in monomials.iter().enumerate() {
            gauss[m].update(monomial_value(&z, powers));
            sphere[m].update(monomial_value(&s.n, powers));
        }
    }

    let expected = gaussian_sphere_ratio(dim, n_degree);
    let rows: Vec<MomentRatioRow> = monomials
        .iter()
        .zip(gauss.iter().zip(&sphere))
        .map(|(powers, (g, s))| {
            let ratio = g.mean() / s.mean();
            // First-order error propagation through the quotient.
            let rel_se = ((g.standard_error() / g.mean()).powi(2)
                + (s.standard_error() / s.mean()).powi(2))
            .sqrt();
            let se = ratio.abs() * rel_se;
            let rel_deviation = (ratio - expected).abs() / expected;
            MomentRatioRow {
                powers: powers.clone(),
                gaussian_mean: g.mean(),
                gaussian_se: g.standard_error(),
                sphere_mean: s.mean(),
                sphere_se: s.standard_error(),
                ratio,
                expected_ratio: expected,
                rel_deviation,
                within_three_se: (ratio - expected).abs() <= 3.0 * se,
            }
        })
        .collect();

    MomentCheckReport {
        dim,
        n_degree,
        samples,
        max_rel_deviation: rows.iter().map(|r| r.rel_deviation).fold(0.0, f64::max),
        all_within_three_se: rows.iter().all(|r| r.within_three_se),
        rows,
    }
}

/// `prod_i |v_i|^(2 a_i)` for a monomial with `b = a`.
fn monomial_value(v: &[Complex64], powers: &[u32]) -> f64 {
    v.iter()
        .zip(powers)
        .map(|(z, &a)| z.norm_sqr().powi(a as i32))
        .product()
}

/// Up to three distinct compositions of `n_degree` into `dim` parts,
/// drawn deterministically from the seed.
fn pick_monomials(dim: usize, n_degree: u32, cfg: &SamplerConfig) -> Vec<Vec<u32>> {
    let mut rng = keyed_rng(cfg, 0, 0, 0, DOMAIN_MONO);
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut attempts = 0;
    while found.len() < 3 && attempts < 64 {
        attempts += 1;
        let mut powers = vec![0u32; dim];
        for _ in 0..n_degree {
            let slot = rng.gen_range(0..dim);
            powers[slot] += 1;
        }
        if !found.contains(&powers) {
            found.push(powers);
        }
    }
    found
}
