//! Gradient and Hessian of `f = det(P_T)` for square Padé matrices.
//!
//! With `A = P_T` at a point and `E_g` the 0/1 pattern of `c_g` in `P_T`,
//! `df/dc_g = f tr(A^-1 E_g)` and
//! `d2f/dc_g dc_h = f [tr(A^-1 E_g) tr(A^-1 E_h) - tr(A^-1 E_g A^-1 E_h)]`.
//! Everything is evaluated exactly over the prime field.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::dimension::SampleConfig;
use crate::error::{Error, Result};
use crate::field::{DenseMatrix, FieldElement, PrimeField};
use crate::monomial::{binomial, monomials_of_degree, Exponent};
use crate::pade::{PadeLayout, PadeParams};
use crate::series::{random_poly, TruncatedPoly};

/// Square layout with the cell positions of every variable.
#[derive(Clone, Debug)]
pub struct DetSetup {
    layout: PadeLayout,
    variables: Vec<Exponent>,
    occurrences: Vec<Vec<(usize, usize)>>,
}

impl DetSetup {
    pub fn new(params: PadeParams) -> Result<Self> {
        let layout = PadeLayout::new(params)?;
        if layout.rows() != layout.cols() {
            return Err(Error::NotSquare { rows: layout.rows(), cols: layout.cols() });
        }
        let variables = layout.variables();
        let occurrences = variables.iter().map(|g| layout.occurrences(g)).collect();
        Ok(DetSetup { layout, variables, occurrences })
    }

    pub fn params(&self) -> PadeParams {
        self.layout.params()
    }

    pub fn layout(&self) -> &PadeLayout {
        &self.layout
    }

    /// Coefficients that occur in `P_T`, in graded ascending order.
    pub fn variables(&self) -> &[Exponent] {
        &self.variables
    }

    fn prepared(&self, t: &TruncatedPoly) -> Result<Prepared> {
        let a = self.layout.evaluate(t)?;
        let f = a.determinant()?;
        let inv = a.inverse()?.ok_or(Error::Singular)?;
        let field = a.field();
        let traces = self
            .occurrences
            .iter()
            .map(|occ| occ.iter().fold(field.zero(), |s, &(r, c)| field.add(s, inv.get(c, r))))
            .collect();
        Ok(Prepared { field, f, inv, traces })
    }

    /// `(f, [df/dc_g])` at `t`, in the order of [`DetSetup::variables`].
    pub fn gradient(&self, t: &TruncatedPoly) -> Result<(FieldElement, Vec<FieldElement>)> {
        let p = self.prepared(t)?;
        let grad = p.traces.iter().map(|&tr| p.field.mul(p.f, tr)).collect();
        Ok((p.f, grad))
    }

    /// Hessian matrix of `f` over the appearing variables, at `t`.
    pub fn hessian(&self, t: &TruncatedPoly) -> Result<DenseMatrix> {
        let p = self.prepared(t)?;
        let field = p.field;
        let v = self.variables.len();
        let mut h = DenseMatrix::zeros(field, v, v);
        for g in 0..v {
            for k in g..v {
                let mut cross = field.zero();
                for &(r1, c1) in &self.occurrences[g] {
                    for &(r2, c2) in &self.occurrences[k] {
                        cross = field.add(cross, field.mul(p.inv.get(c1, r2), p.inv.get(c2, r1)));
                    }
                }
                let entry = field.mul(p.f, field.sub(field.mul(p.traces[g], p.traces[k]), cross));
                h.set(g, k, entry);
                h.set(k, g, entry);
            }
        }
        Ok(h)
    }
}

struct Prepared {
    field: PrimeField,
    f: FieldElement,
    inv: DenseMatrix,
    traces: Vec<FieldElement>,
}

/// Gradient of `det(P_T)` at `t`, keyed by exponent.
pub fn det_gradient(t: &TruncatedPoly, d: u32, e: u32) -> Result<BTreeMap<Exponent, FieldElement>> {
    let setup = DetSetup::new(PadeParams::new(t.n(), d, e, t.bound()))?;
    let (_, grad) = setup.gradient(t)?;
    Ok(setup.variables.iter().cloned().zip(grad).collect())
}

/// `C(n+e, n) - C(n+d-e, n-1)`, the corank expected when `m = d + 1`.
pub fn conjectured_corank(n: usize, d: u32, e: u32) -> Result<Option<u64>> {
    if n < 2 {
        return Ok(None);
    }
    let a = binomial(n as u64 + e as u64, n as u64)?;
    let b = if d + n as u32 >= e { binomial(n as u64 + d as u64 - e as u64, n as u64 - 1)? } else { 0 };
    Ok(a.checked_sub(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HessianReport {
    pub params: PadeParams,
    pub vars: Vec<String>,
    pub rank: usize,
    pub corank: usize,
    /// Only for `m = d + 1` and at least two variables.
    pub conjectured_corank: Option<u64>,
    pub conjecture_holds: Option<bool>,
    pub trials: usize,
    pub seed: u64,
    pub prime: u64,
}

impl HessianReport {
    pub fn vanishing(&self) -> bool {
        self.corank > 0
    }
}

/// Uniform point of the ambient space at which `P_T` is invertible.
fn invertible_sample<R: Rng>(setup: &DetSetup, field: PrimeField, rng: &mut R, attempts: usize) -> Result<TruncatedPoly> {
    let PadeParams { n, m, .. } = setup.params();
    for _ in 0..attempts {
        let t = random_poly(field, n, m, rng);
        if !setup.layout.evaluate(&t)?.determinant()?.is_zero() {
            return Ok(t);
        }
    }
    Err(Error::SamplesExhausted(attempts))
}

/// Generic rank of the Hessian of `det(P_T)`, maximized over trials.
pub fn hessian_rank(params: PadeParams, cfg: &SampleConfig) -> Result<HessianReport> {
    let setup = DetSetup::new(params)?;
    let mut rng = cfg.rng_for(params, 0x4e55);
    let v = setup.variables.len();
    let mut rank = 0;
    for _ in 0..cfg.trials.max(1) {
        let t = invertible_sample(&setup, cfg.field, &mut rng, 8)?;
        rank = rank.max(setup.hessian(&t)?.rank());
        if rank == v {
            break;
        }
    }
    let conjectured = if params.m == params.d + 1 { conjectured_corank(params.n, params.d, params.e)? } else { None };
    Ok(HessianReport {
        params,
        vars: setup.variables.iter().map(Exponent::label).collect(),
        rank,
        corank: v - rank,
        conjectured_corank: conjectured,
        conjecture_holds: conjectured.map(|c| c == (v - rank) as u64),
        trials: cfg.trials,
        seed: cfg.seed,
        prime: cfg.field.modulus(),
    })
}

/// The stacked matrix `M` of gradient values and the vector it should annihilate.
#[derive(Clone, Debug)]
pub struct PolarCheck {
    pub matrix: DenseMatrix,
    /// Coefficients of `T_{d-e+1}`, indexed like the columns of `matrix`.
    pub coefficients: Vec<FieldElement>,
    pub rank: usize,
    /// `M * coefficients == 0`.
    pub annihilates: bool,
}

impl PolarCheck {
    pub fn holds(&self) -> bool {
        self.annihilates && self.rank < self.matrix.cols()
    }
}

/// Rows `alpha` of degree `j - (d-e+1)` for `j = d+1, d, ..., d-e+2`, columns
/// `beta` of degree `d-e+1`, entry `f_{alpha+beta}`.
pub fn polar_matrix(
    field: PrimeField,
    n: usize,
    d: u32,
    e: u32,
    gradient: &BTreeMap<Exponent, FieldElement>,
) -> Result<(DenseMatrix, Vec<Exponent>)> {
    if e == 0 || e > d + 1 {
        return Err(Error::InvalidArgument(format!("polar relations need 1 <= e <= d + 1, got d={d}, e={e}")));
    }
    let base = d + 1 - e;
    let cols = monomials_of_degree(n, base);
    let mut rows = Vec::new();
    for j in (base + 1..=d + 1).rev() {
        for alpha in monomials_of_degree(n, j - base) {
            rows.push(cols.iter().map(|beta| gradient.get(&alpha.add(beta)).copied().unwrap_or(FieldElement::ZERO)).collect::<Vec<_>>());
        }
    }
    let mut m = DenseMatrix::zeros(field, rows.len(), cols.len());
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m.set(r, c, v);
        }
    }
    Ok((m, cols))
}

/// Checks the linear relations among the partials of `det(P_T)` for `m = d + 1`
/// at `t`: the stacked matrix annihilates the coefficients of `T_{d-e+1}`.
pub fn polar_relations_at(t: &TruncatedPoly, d: u32, e: u32) -> Result<PolarCheck> {
    if t.bound() != d + 1 {
        return Err(Error::InvalidArgument(format!("polar relations need m = d + 1, got m = {}", t.bound())));
    }
    let field = t.field();
    let gradient = det_gradient(t, d, e)?;
    let (matrix, cols) = polar_matrix(field, t.n(), d, e, &gradient)?;
    let coefficients: Vec<FieldElement> = cols.iter().map(|b| t.coeff(b)).collect();
    let annihilates = matrix.mul_vec(&coefficients)?.iter().all(|c| c.is_zero());
    let rank = matrix.rank();
    Ok(PolarCheck { matrix, coefficients, rank, annihilates })
}

/// [`polar_relations_at`] at a random point with `P_T` invertible.
pub fn polar_relations_check(n: usize, d: u32, e: u32, cfg: &SampleConfig) -> Result<PolarCheck> {
    let params = PadeParams::new(n, d, e, d + 1);
    let setup = DetSetup::new(params)?;
    let mut rng = cfg.rng_for(params, 0x9014);
    let t = invertible_sample(&setup, cfg.field, &mut rng, 8)?;
    polar_relations_at(&t, d, e)
}
