//! Padé approximation: recover `P/Q` of type `(d, e)` from a truncated series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{DenseMatrix, FieldElement};
use crate::monomial::Exponent;
use crate::pade::{build_pade_matrix, drop_constant_column};
use crate::series::{multiply_truncated, taylor_quotient, RationalPair, TruncatedPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxResult {
    /// `P/Q` with `Q(0) = 1`, when one exists in that chart.
    pub pair: Option<RationalPair>,
    /// Dimension of the kernel of the reduced Padé matrix at `T`.
    pub fiber_dim: usize,
    /// The returned pair reproduces `T` exactly.
    pub exact: bool,
}

/// JSON-friendly view of an [`ApproxResult`].
#[derive(Clone, Debug, Serialize)]
pub struct ApproxSummary {
    pub found: bool,
    #[serde(rename = "P")]
    pub p: Option<String>,
    #[serde(rename = "Q")]
    pub q: Option<String>,
    pub fiber_dim: usize,
    pub exact: bool,
}

impl ApproxResult {
    pub fn summary(&self) -> ApproxSummary {
        ApproxSummary {
            found: self.pair.is_some(),
            p: self.pair.as_ref().map(|pq| pq.numerator.to_string()),
            q: self.pair.as_ref().map(|pq| pq.denominator.to_string()),
            fiber_dim: self.fiber_dim,
            exact: self.exact,
        }
    }
}

/// Padé approximant of type `(d, e)` of `t`, read off the kernel of `P_T`.
pub fn pade_approximant(t: &TruncatedPoly, d: u32, e: u32) -> Result<ApproxResult> {
    let f = t.field();
    if t.constant() != f.one() {
        return Err(Error::NotUnit);
    }
    let (n, m) = (t.n(), t.bound());
    if d >= m {
        let p = t.with_bound(d);
        let q = TruncatedPoly::one(f, n, e);
        let cols = crate::monomial::count_monomials(n, 1, e)? as usize;
        return Ok(ApproxResult { pair: Some(RationalPair::new(p, q)?), fiber_dim: cols, exact: true });
    }
    let full = build_pade_matrix(t, d, e)?;
    let kernel = full.matrix.kernel_basis();
    let reduced = drop_constant_column(full.clone());
    let fiber_dim = reduced.matrix.cols() - reduced.rank();

    let Some(v) = kernel.iter().find(|v| !v[0].is_zero()) else {
        return Ok(ApproxResult { pair: None, fiber_dim, exact: false });
    };
    let scale = f.inv(v[0])?;
    let q = TruncatedPoly::from_terms(f, n, e, full.col_labels.iter().cloned().zip(v.iter().map(|&c| f.mul(c, scale))))?;
    let qt = multiply_truncated(&q, t, m)?;
    let residual_free = (d + 1..=m).all(|k| qt.component_coeffs(k).iter().all(|c| c.is_zero()));
    let p = qt.with_bound(d);
    let pair = RationalPair::new(p, q)?;
    let exact = residual_free && taylor_quotient(&pair, m)? == *t;
    Ok(ApproxResult { pair: Some(pair), fiber_dim, exact })
}

/// Whether `t` looks like a point of the Taylor variety of type `(d, e)`.
///
/// In one variable with `d + e < m` this is the exact rank test
/// `rank(P_T) <= e`. Otherwise it asks for an exact approximant, which only
/// detects the parametrized part of the variety and may miss boundary points.
pub fn on_variety_heuristic(t: &TruncatedPoly, d: u32, e: u32) -> Result<bool> {
    if t.constant() != t.field().one() {
        return Err(Error::NotUnit);
    }
    let m = t.bound();
    if t.n() == 1 && d + e < m {
        return Ok(build_pade_matrix(t, d, e)?.rank() <= e as usize);
    }
    Ok(pade_approximant(t, d, e)?.pair.is_some())
}

/// Univariate approximant with `d + e = m` from the square Hankel system for
/// `q_1..q_e`, or `None` when that system is singular.
pub fn solve_univariate_square(t: &TruncatedPoly, d: u32, e: u32) -> Result<Option<RationalPair>> {
    let f = t.field();
    let m = t.bound();
    if t.n() != 1 {
        return Err(Error::Unsupported("the square system is univariate".into()));
    }
    if d + e != m || e == 0 {
        return Err(Error::InvalidArgument(format!("need d + e = m and e > 0, got d={d}, e={e}, m={m}")));
    }
    let c = |i: i64| if i < 0 { FieldElement::ZERO } else { t.coeff(&Exponent::new(vec![i as u32])) };
    let mi = m as i64;
    let e_us = e as usize;
    let mut a = DenseMatrix::zeros(f, e_us, e_us);
    let mut rhs = Vec::with_capacity(e_us);
    for i in 0..e_us {
        for j in 0..e_us {
            a.set(i, j, c(mi - 1 - i as i64 - j as i64));
        }
        rhs.push(f.neg(c(mi - i as i64)));
    }
    if a.determinant()?.is_zero() {
        return Ok(None);
    }
    let qs = a.solve(&rhs)?.expect("nonsingular system");
    let mut q = TruncatedPoly::one(f, 1, e);
    for (j, &qj) in qs.iter().enumerate() {
        q.set_coeff(&Exponent::new(vec![j as u32 + 1]), qj)?;
    }
    let p = multiply_truncated(&q, t, m)?.with_bound(d);
    Ok(Some(RationalPair::new(p, q)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::series::{parse_poly, random_poly, random_unit_poly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn recovers_linear_over_quadratic() {
        let f = field();
        let p = parse_poly(f, 1, 1, "1 + x1").unwrap();
        let q = parse_poly(f, 1, 2, "1 + x1 + x1^2").unwrap();
        let pq = RationalPair::new(p.clone(), q.clone()).unwrap();
        // forward expansion by hand: (1+x)/(1+x+x^2) = 1 - x^2 + x^3 - x^5 + ...
        let t = parse_poly(f, 1, 5, "1 - x1^2 + x1^3 - x1^5").unwrap();
        assert_eq!(taylor_quotient(&pq, 5).unwrap(), t);
        let r = pade_approximant(&t, 1, 2).unwrap();
        assert!(r.exact);
        assert_eq!(r.fiber_dim, 0);
        assert_eq!(r.pair.unwrap(), pq);
    }

    #[test]
    fn generic_quintic_has_no_quadric_ratio() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut t = random_poly(f, 1, 5, &mut rng);
        t.set_coeff(&Exponent::zero(1), f.one()).unwrap();
        let r = pade_approximant(&t, 2, 2).unwrap();
        assert!(r.pair.is_none());
        assert!(!on_variety_heuristic(&t, 2, 2).unwrap());
    }

    #[test]
    fn low_degree_series_is_its_own_numerator() {
        let f = field();
        let t = parse_poly(f, 2, 4, "1 + 3*x1 - x1*x2 + 2*x2^2").unwrap();
        for e in 0..3 {
            let r = pade_approximant(&t, 2, e).unwrap();
            let pair = r.pair.unwrap();
            assert_eq!(pair.numerator, t.with_bound(2));
            assert_eq!(pair.denominator, TruncatedPoly::one(f, 2, e));
            assert!(r.exact);
        }
    }

    #[test]
    fn rejects_non_unit_series() {
        let f = field();
        let t = parse_poly(f, 1, 3, "2 + x1").unwrap();
        assert_eq!(pade_approximant(&t, 1, 1).unwrap_err(), Error::NotUnit);
        assert_eq!(on_variety_heuristic(&t, 1, 1).unwrap_err(), Error::NotUnit);
    }

    #[test]
    fn trivariate_quadric_ratio_has_one_dimensional_fiber() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_unit_poly(f, 3, 2, &mut rng);
        let q = random_unit_poly(f, 3, 2, &mut rng);
        let t = taylor_quotient(&RationalPair::new(p, q).unwrap(), 3).unwrap();
        let r = pade_approximant(&t, 2, 2).unwrap();
        assert!(r.exact);
        assert_eq!(r.fiber_dim, 1);
        assert!(on_variety_heuristic(&t, 2, 2).unwrap());
    }

    #[test]
    fn parametrized_univariate_points_are_on_the_variety() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let p = random_unit_poly(f, 1, 2, &mut rng);
            let q = random_unit_poly(f, 1, 2, &mut rng);
            let t = taylor_quotient(&RationalPair::new(p, q).unwrap(), 5).unwrap();
            assert!(on_variety_heuristic(&t, 2, 2).unwrap());
        }
    }

    #[test]
    fn summary_serializes() {
        let f = field();
        let t = parse_poly(f, 1, 5, "1 - x1^2 + x1^3 - x1^5").unwrap();
        let json = serde_json::to_string(&pade_approximant(&t, 1, 2).unwrap().summary()).unwrap();
        assert_eq!(json, r#"{"found":true,"P":"1 + x1","Q":"1 + x1 + x1^2","fiber_dim":0,"exact":true}"#);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(50))]

            #[test]
            fn univariate_round_trip(seed in any::<u64>(), m in 2u32..9, d_raw in 0u32..8, e_raw in 0u32..8) {
                let d = d_raw % m;
                let e = e_raw % (m - d);
                prop_assume!(d + e < m);
                let f = field();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pq = RationalPair::new(random_unit_poly(f, 1, d, &mut rng), random_unit_poly(f, 1, e, &mut rng)).unwrap();
                let t = taylor_quotient(&pq, m).unwrap();
                let r = pade_approximant(&t, d, e).unwrap();
                prop_assert!(r.exact);
                prop_assert_eq!(r.pair.unwrap(), pq);
            }

            #[test]
            fn congruence_whenever_found(seed in any::<u64>(), n in 1usize..4, m in 2u32..5, d_raw in 0u32..4, e in 0u32..4) {
                let d = d_raw % m;
                let f = field();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pq = RationalPair::new(random_unit_poly(f, n, d, &mut rng), random_unit_poly(f, n, e, &mut rng)).unwrap();
                let t = taylor_quotient(&pq, m).unwrap();
                let r = pade_approximant(&t, d, e).unwrap();
                let found = r.pair.unwrap();
                let qt = multiply_truncated(&found.denominator, &t, m).unwrap();
                for k in d + 1..=m {
                    prop_assert!(qt.component_coeffs(k).iter().all(|c| c.is_zero()));
                }
                prop_assert!(r.exact);
            }

            #[test]
            fn square_system_agrees(seed in any::<u64>(), m in 2u32..8, e_raw in 1u32..8) {
                let e = 1 + (e_raw - 1) % m;
                let d = m - e;
                let f = field();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut t = random_poly(f, 1, m, &mut rng);
                t.set_coeff(&Exponent::zero(1), f.one()).unwrap();
                if let Some(direct) = solve_univariate_square(&t, d, e).unwrap() {
                    let r = pade_approximant(&t, d, e).unwrap();
                    prop_assert_eq!(r.pair.unwrap(), direct);
                }
            }
        }
    }
}
