//! Fröberg series and the census of exceptional pairs.
//!
//! For forms of degrees `d, d-1, ..., d-e+1` in `n` variables the Fröberg
//! series is `F(d,e) = prod_{i=1..e} (1 - t^{d+1-i}) / (1-t)^n`. Its positive
//! truncation predicts the Hilbert function of an ideal generated by generic
//! forms, and the coefficient `alpha(d,e)` of `t^{d+1}` is the predicted
//! codimension of the Taylor variety with `m = d + 1`. The lower bound
//! `beta(d,e) = max(0, W(d,e))` needs only binomials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{DenseMatrix, PrimeField};
use crate::monomial::{monomials_of_degree, MonomialIndex};
use crate::series::random_form;

/// `b_i = a_i` while every `a_j` with `j <= i` is positive, zero afterwards.
pub fn truncate_positive(a: &[i128]) -> Vec<i128> {
    let mut alive = true;
    a.iter()
        .map(|&x| {
            alive &= x > 0;
            if alive {
                x
            } else {
                0
            }
        })
        .collect()
}

fn binom(a: i128, k: u32) -> Result<i128> {
    if a < 0 || (k as i128) > a {
        return Ok(0);
    }
    let k = (k as i128).min(a - k as i128);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(a - i).ok_or(Error::Overflow("binomial"))? / (i + 1);
    }
    Ok(acc)
}

/// Coefficients through `t^upto` of `prod (1 - t^g) / (1-t)^n`, untruncated.
pub fn froberg_coefficients(n: usize, degrees: &[u32], upto: usize) -> Result<Vec<i128>> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one variable is required".into()));
    }
    let mut a = (0..=upto)
        .map(|k| binom((k + n - 1) as i128, n as u32 - 1))
        .collect::<Result<Vec<_>>>()?;
    for &g in degrees {
        multiply_one_minus(&mut a, g as usize)?;
    }
    Ok(a)
}

fn multiply_one_minus(a: &mut [i128], g: usize) -> Result<()> {
    if g == 0 {
        a.iter_mut().for_each(|x| *x = 0);
        return Ok(());
    }
    for k in (g..a.len()).rev() {
        a[k] = a[k].checked_sub(a[k - g]).ok_or(Error::Overflow("Fröberg series"))?;
    }
    Ok(())
}

fn positive_prefix_coefficient(a: &[i128], k: usize) -> i128 {
    if a[..=k].iter().all(|&x| x > 0) {
        a[k]
    } else {
        0
    }
}

/// `alpha(d,e)`: coefficient of `t^{d+1}` in the positive part of `F(d,e)`.
pub fn alpha(n: usize, d: u32, e: u32) -> Result<i128> {
    if e > d + 1 {
        return Err(Error::InvalidArgument(format!("e = {e} exceeds d + 1 = {}", d + 1)));
    }
    let degrees: Vec<u32> = (1..=e).map(|i| d + 1 - i).collect();
    let a = froberg_coefficients(n, &degrees, d as usize + 1)?;
    Ok(positive_prefix_coefficient(&a, d as usize + 1))
}

/// `alpha(d, e)` for `e = 0..=d`, sharing the series between consecutive `e`.
pub fn alpha_row(n: usize, d: u32) -> Result<Vec<i128>> {
    let k = d as usize + 1;
    let mut a = froberg_coefficients(n, &[], k)?;
    let mut out = Vec::with_capacity(k);
    out.push(positive_prefix_coefficient(&a, k));
    for e in 1..=d {
        multiply_one_minus(&mut a, (d + 1 - e) as usize)?;
        out.push(positive_prefix_coefficient(&a, k));
    }
    Ok(out)
}

/// `W(d,e) = C(d+n, n-1) - C(e+n, n) + 1`.
pub fn w(n: usize, d: u32, e: u32) -> Result<i128> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one variable is required".into()));
    }
    let a = binom(d as i128 + n as i128, n as u32 - 1)?;
    let b = binom(e as i128 + n as i128, n as u32)?;
    a.checked_sub(b).and_then(|x| x.checked_add(1)).ok_or(Error::Overflow("W"))
}

/// `max(0, W(d,e))`.
pub fn beta(n: usize, d: u32, e: u32) -> Result<i128> {
    Ok(w(n, d, e)?.max(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobergReport {
    pub n: usize,
    pub d: u32,
    pub e: u32,
    pub alpha: i128,
    pub beta: i128,
    #[serde(rename = "W")]
    pub w: i128,
    pub defective_predicted: bool,
}

pub fn froberg_report(n: usize, d: u32, e: u32) -> Result<FrobergReport> {
    let alpha = alpha(n, d, e)?;
    let w = w(n, d, e)?;
    let beta = w.max(0);
    Ok(FrobergReport { n, d, e, alpha, beta, w, defective_predicted: alpha != beta })
}

/// Sign of `W(d, e)` at a half-integer `e = (d + shift) / 2`, with `d` real.
/// Both binomials are evaluated as polynomials, scaled by `2^n * n!`.
fn w_half_sign(n: usize, d: i128, shift: i128) -> Result<i128> {
    let nn = n as i128;
    let ovf = || Error::Overflow("d0 polynomial");
    // C(d+n, n-1) * (n-1)!
    let mut first: i128 = 1;
    for i in 0..nn - 1 {
        first = first.checked_mul(d + nn - i).ok_or_else(ovf)?;
    }
    let two_n = 1i128 << n;
    first = first.checked_mul(nn * two_n).ok_or_else(ovf)?;
    // C((d+shift)/2 + n, n) * n! * 2^n
    let mut second: i128 = 1;
    for i in 0..nn {
        second = second.checked_mul(d + shift + 2 * nn - 2 * i).ok_or_else(ovf)?;
    }
    let mut fact: i128 = 1;
    for i in 1..=nn {
        fact *= i;
    }
    let constant = two_n.checked_mul(fact).ok_or_else(ovf)?;
    first.checked_sub(second).and_then(|x| x.checked_add(constant)).ok_or_else(ovf)
}

/// Threshold beyond which every `(d, e)` satisfies `alpha = beta`.
///
/// For even `d` the witness is `e = d/2`, for odd `d` it is `e = (d+1)/2`.
/// Each choice turns `W` into a polynomial in `d`; the result is the least
/// integer past the largest real root of either polynomial.
pub fn compute_d0(n: usize) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two variables".into()));
    }
    let positive = |d: i128| -> Result<bool> { Ok(w_half_sign(n, d, 0)? > 0 || w_half_sign(n, d, 1)? > 0) };
    let mut window: i128 = 64;
    loop {
        let mut last = None;
        for d in 0..window {
            if positive(d)? {
                last = Some(d);
            }
        }
        match last {
            Some(l) if l >= window / 2 => window *= 2,
            Some(l) => return Ok(l as u32 + 1),
            None => return Ok(0),
        }
    }
}

/// `n`, `d0` and all `(d, e)` with `1 <= e <= d < d0` and `alpha != beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalCensus {
    pub n: usize,
    pub d0: u32,
    pub count: usize,
    pub pairs: Vec<(u32, u32)>,
}

pub fn exceptional_pairs(n: usize) -> Result<ExceptionalCensus> {
    exceptional_pairs_with_jobs(n, 1)
}

pub fn exceptional_pairs_with_jobs(n: usize, jobs: usize) -> Result<ExceptionalCensus> {
    let d0 = compute_d0(n)?;
    let row = |d: u32| -> Result<Vec<(u32, u32)>> {
        let alphas = alpha_row(n, d)?;
        let mut out = Vec::new();
        for e in 1..=d {
            if alphas[e as usize] != beta(n, d, e)? {
                out.push((d, e));
            }
        }
        Ok(out)
    };
    let rows: Vec<Result<Vec<(u32, u32)>>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| (1..d0).into_par_iter().map(row).collect())
    } else {
        (1..d0).map(row).collect()
    };
    let mut pairs = Vec::new();
    for r in rows {
        pairs.extend(r?);
    }
    Ok(ExceptionalCensus { n, d0, count: pairs.len(), pairs })
}

/// Hilbert function in degree `t` of the ideal generated by random forms of
/// the given degrees, by the rank of the degree-`t` multiplication matrix.
pub fn hilbert_function_generic_forms(field: PrimeField, n: usize, degrees: &[u32], t: u32, seed: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one variable is required".into()));
    }
    if let Some(&g) = degrees.iter().find(|&&g| g == 0 || g > t) {
        return Err(Error::InvalidArgument(format!("form degree {g} outside 1..={t}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = MonomialIndex::new(monomials_of_degree(n, t));
    let mut columns = Vec::new();
    for &g in degrees {
        let form = random_form(field, n, g, &mut rng)?;
        let terms: Vec<_> = form.terms().map(|(e, c)| (e.clone(), c)).collect();
        for mu in monomials_of_degree(n, t - g) {
            let mut col = vec![field.zero(); target.len()];
            for (gamma, c) in &terms {
                let pos = target.position(&mu.add(gamma)).expect("degree t monomial");
                col[pos] = field.add(col[pos], *c);
            }
            columns.push(col);
        }
    }
    let mut m = DenseMatrix::zeros(field, target.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    let rank = if columns.is_empty() { 0 } else { m.rank() };
    Ok((target.len() - rank) as u64)
}
