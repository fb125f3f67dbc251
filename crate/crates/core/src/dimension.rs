//! Dimensions of Taylor varieties.
//!
//! The variety of order-`m` Taylor polynomials of `P/Q` with `deg P <= d`,
//! `deg Q <= e` lives in the projective space of polynomials of degree `<= m`.
//! Its dimension equals `C(d+n,n) - 1 + rank(P̂_T)` at a generic point, where
//! `P̂_T` is the Padé matrix without its constant column. The Jacobian of the
//! parametrization gives an independent route to the same number.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{DenseMatrix, FieldElement, PrimeField};
use crate::monomial::count_monomials;
use crate::pade::{build_reduced, PadeParams};
use crate::series::{multiply_truncated, random_unit_poly, reciprocal_truncated, RationalPair, TruncatedPoly};

/// Field, base seed and number of random points per evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub field: PrimeField,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { field: PrimeField::default(), seed: 1, trials: 3 }
    }
}

impl SampleConfig {
    pub fn new(field: PrimeField, seed: u64, trials: usize) -> Self {
        SampleConfig { field, seed, trials: trials.max(1) }
    }

    /// Same field and trial count, unrelated seed stream.
    pub fn independent(&self) -> Self {
        SampleConfig { seed: mix(self.seed ^ 0x5bd1_e995_a5a5_a5a5), ..*self }
    }

    pub fn rng_for(&self, params: PadeParams, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(self.seed, params, salt))
    }
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-evaluation seed, a stable hash of the base seed and `(n, d, e, m)`.
pub fn derive_seed(seed: u64, params: PadeParams, salt: u64) -> u64 {
    [params.n as u64, params.d as u64, params.e as u64, params.m as u64, salt]
        .iter()
        .fold(mix(seed), |h, &v| mix(h ^ v))
}

/// How `actual_dim` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ReducedPadeRank,
    Jacobian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub params: PadeParams,
    pub expected_dim: u64,
    pub actual_dim: u64,
    pub ambient_dim: u64,
    pub parameter_count: u64,
    pub defect: u64,
    pub fiber_dim: u64,
    /// The variety is all of projective space.
    pub fills_ambient: bool,
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    pub method: Method,
}

impl DimensionReport {
    pub fn is_defective(&self) -> bool {
        self.defect > 0
    }
}

/// `C(m+n,n) - 1`.
pub fn ambient_dimension(n: usize, m: u32) -> Result<u64> {
    Ok(count_monomials(n, 0, m)? - 1)
}

/// `C(d+n,n) + C(e+n,n) - 2`.
pub fn parameter_count(n: usize, d: u32, e: u32) -> Result<u64> {
    count_monomials(n, 0, d)?
        .checked_add(count_monomials(n, 0, e)?)
        .map(|s| s - 2)
        .ok_or(Error::Overflow("parameter count"))
}

/// `min(C(d+n,n) + C(e+n,n) - 2, C(m+n,n) - 1)`.
pub fn expected_dimension(n: usize, d: u32, e: u32, m: u32) -> Result<u64> {
    Ok(parameter_count(n, d, e)?.min(ambient_dimension(n, m)?))
}

fn random_pair<R: rand::Rng>(field: PrimeField, params: PadeParams, rng: &mut R) -> RationalPair {
    let p = random_unit_poly(field, params.n, params.d, rng);
    let q = random_unit_poly(field, params.n, params.e, rng);
    RationalPair::new(p, q).expect("unit polynomials")
}

/// Taylor polynomial of a random `P/Q` of type `(d, e)`, drawn for trial `salt`.
pub fn random_variety_point(params: PadeParams, cfg: &SampleConfig, salt: u64) -> Result<TruncatedPoly> {
    let mut rng = cfg.rng_for(params, salt);
    let pq = random_pair(cfg.field, params, &mut rng);
    crate::series::taylor_quotient(&pq, params.m)
}

/// Dimension via the rank of `P̂_T` at random points of the variety.
pub fn taylor_dimension(params: PadeParams, cfg: &SampleConfig) -> Result<DimensionReport> {
    let PadeParams { n, d, e, m } = params;
    let ambient = ambient_dimension(n, m)?;
    let expected = expected_dimension(n, d, e, m)?;
    let numerator_part = count_monomials(n, 0, d)? - 1;
    let reduced_cols = count_monomials(n, 0, e)? - 1;
    let report = |actual: u64, fiber: u64| -> Result<DimensionReport> {
        let actual = actual.min(ambient);
        Ok(DimensionReport {
            params,
            expected_dim: expected,
            actual_dim: actual,
            ambient_dim: ambient,
            parameter_count: parameter_count(n, d, e)?,
            defect: expected - actual,
            fiber_dim: fiber,
            fills_ambient: actual == ambient,
            trials: cfg.trials,
            prime: cfg.field.modulus(),
            seed: cfg.seed,
            method: Method::ReducedPadeRank,
        })
    };
    if d >= m {
        // every polynomial of degree <= m is P/1
        return report(ambient, reduced_cols);
    }
    let mut best = 0usize;
    for trial in 0..cfg.trials.max(1) {
        let t = random_variety_point(params, cfg, trial as u64)?;
        let reduced = build_reduced(&t, d, e)?;
        best = best.max(reduced.rank());
        if best as u64 == reduced_cols {
            break;
        }
    }
    report(numerator_part + best as u64, reduced_cols - best as u64)
}

/// Same report layout as [`taylor_dimension`], computed from the Jacobian.
pub fn jacobian_report(params: PadeParams, cfg: &SampleConfig) -> Result<DimensionReport> {
    let PadeParams { n, d, e, m } = params;
    let actual = dimension_via_jacobian(params, cfg)?;
    let expected = expected_dimension(n, d, e, m)?;
    let ambient = ambient_dimension(n, m)?;
    let numerator_part = count_monomials(n, 0, d)? - 1;
    let reduced_cols = count_monomials(n, 0, e)? - 1;
    Ok(DimensionReport {
        params,
        expected_dim: expected,
        actual_dim: actual,
        ambient_dim: ambient,
        parameter_count: parameter_count(n, d, e)?,
        defect: expected.saturating_sub(actual),
        fiber_dim: (numerator_part + reduced_cols).saturating_sub(actual),
        fills_ambient: actual == ambient,
        trials: cfg.trials,
        prime: cfg.field.modulus(),
        seed: cfg.seed,
        method: Method::Jacobian,
    })
}

/// Jacobian matrix of `(p, q) -> trunc_m(P/Q)` at a point, in the affine chart
/// where all constant terms are 1. Rows: nonconstant coefficients of `T`;
/// columns: nonconstant coefficients of `P`, then of `Q`.
pub fn parametrization_jacobian(pq: &RationalPair, m: u32) -> Result<DenseMatrix> {
    let field = pq.numerator.field();
    let r = reciprocal_truncated(&pq.denominator, m)?;
    // d/dq_b of P/Q is -x^b * P/Q^2 = -x^b * (P/Q) * (1/Q)
    let t = multiply_truncated(&pq.numerator, &r, m)?;
    let neg_tr = multiply_truncated(&t, &r, m)?.scale(field.neg(field.one()));
    let rows = r.basis().len() - 1;
    let mut columns: Vec<Vec<FieldElement>> = Vec::new();
    let shifted = |base: &TruncatedPoly, alpha: &crate::monomial::Exponent| -> Result<Vec<FieldElement>> {
        let mono = TruncatedPoly::monomial(field, alpha, m);
        Ok(multiply_truncated(&mono, base, m)?.coefficients()[1..].to_vec())
    };
    for alpha in pq.numerator.basis().exponents().iter().skip(1) {
        columns.push(shifted(&r, alpha)?);
    }
    for beta in pq.denominator.basis().exponents().iter().skip(1) {
        columns.push(shifted(&neg_tr, beta)?);
    }
    let mut j = DenseMatrix::zeros(field, rows, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            j.set(r, c, v);
        }
    }
    Ok(j)
}

/// Generic rank of the parametrization's Jacobian, maximized over trials.
pub fn dimension_via_jacobian(params: PadeParams, cfg: &SampleConfig) -> Result<u64> {
    if params.n == 0 {
        return Err(Error::InvalidArgument("at least one variable is required".into()));
    }
    let cols = parameter_count(params.n, params.d, params.e)? as usize;
    let rows = ambient_dimension(params.n, params.m)? as usize;
    let mut best = 0usize;
    for trial in 0..cfg.trials.max(1) {
        let mut rng = cfg.rng_for(params, 0x1000 + trial as u64);
        let pq = random_pair(cfg.field, params, &mut rng);
        best = best.max(parametrization_jacobian(&pq, params.m)?.rank());
        if best == cols.min(rows) {
            break;
        }
    }
    Ok(best as u64)
}

/// Triples `(d, e, m)` with `1 <= d, e < m <= m_max`, in `(m, d, e)` order.
pub fn scan_triples(n: usize, m_max: u32) -> Vec<PadeParams> {
    let mut out = Vec::new();
    for m in 2..=m_max {
        for d in 1..m {
            for e in 1..m {
                out.push(PadeParams::new(n, d, e, m));
            }
        }
    }
    out
}

/// Report for one scanned triple, confirmed with an independent seed when defective.
pub fn scan_one(params: PadeParams, cfg: &SampleConfig) -> Result<DimensionReport> {
    let first = taylor_dimension(params, cfg)?;
    if !first.is_defective() {
        return Ok(first);
    }
    let second = taylor_dimension(params, &cfg.independent())?;
    Ok(if second.actual_dim > first.actual_dim { second } else { first })
}

/// Scan options beyond the sampling config.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScanOptions {
    /// Worker threads; 0 or 1 runs on the calling thread.
    pub jobs: usize,
    /// Skip triples sorting before this one.
    pub resume_from: Option<PadeParams>,
}

/// Visits every scanned triple in sorted order, evaluating up to `jobs` of
/// them at a time. `visit` sees all reports, defective or not.
pub fn scan_each<F>(n: usize, m_max: u32, cfg: &SampleConfig, opts: ScanOptions, mut visit: F) -> Result<()>
where
    F: FnMut(&DimensionReport) -> Result<()>,
{
    if n == 0 {
        return Err(Error::InvalidArgument("at least one variable is required".into()));
    }
    let key = |p: &PadeParams| (p.m, p.d, p.e);
    let triples: Vec<PadeParams> = scan_triples(n, m_max)
        .into_iter()
        .filter(|p| opts.resume_from.is_none_or(|r| key(p) >= key(&r)))
        .collect();
    let jobs = opts.jobs.max(1);
    if jobs == 1 {
        for p in triples {
            visit(&scan_one(p, cfg)?)?;
        }
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    for chunk in triples.chunks(jobs) {
        let reports: Vec<Result<DimensionReport>> = pool.install(|| chunk.par_iter().map(|&p| scan_one(p, cfg)).collect());
        for r in reports {
            visit(&r?)?;
        }
    }
    Ok(())
}

/// All defective triples with `m <= m_max`, sorted by `(m, d, e)`.
pub fn scan_defective(n: usize, m_max: u32, cfg: &SampleConfig, opts: ScanOptions) -> Result<Vec<DimensionReport>> {
    let mut out = Vec::new();
    scan_each(n, m_max, cfg, opts, |r| {
        if r.is_defective() {
            out.push(r.clone());
        }
        Ok(())
    })?;
    Ok(out)
}
