//! Truncated multivariate polynomials over a prime field.
//!
//! A [`TruncatedPoly`] stores every coefficient of total degree `<= bound`
//! densely, indexed by a shared graded basis (degree ascending, lex ascending).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::monomial::{DegreeOrder, Exponent, MonomialIndex, MonomialRange};

/// All monomials of degree `<= bound` with per-degree offsets.
#[derive(Debug)]
pub struct GradedBasis {
    n: usize,
    bound: u32,
    index: MonomialIndex,
    // offsets[k] = first position of degree k; offsets[bound + 1] = len
    offsets: Vec<usize>,
}

impl GradedBasis {
    fn build(n: usize, bound: u32) -> Self {
        let index = MonomialIndex::from_range(&MonomialRange::new(n, 0, bound, DegreeOrder::Ascending));
        let mut offsets = vec![0usize; bound as usize + 2];
        for e in index.items() {
            offsets[e.degree() as usize + 1] += 1;
        }
        for k in 1..offsets.len() {
            offsets[k] += offsets[k - 1];
        }
        GradedBasis { n, bound, index, offsets }
    }

    /// Shared basis for `(n, bound)`.
    pub fn get(n: usize, bound: u32) -> Arc<GradedBasis> {
        type Cache = Mutex<HashMap<(usize, u32), Arc<GradedBasis>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("basis cache poisoned");
        guard.entry((n, bound)).or_insert_with(|| Arc::new(GradedBasis::build(n, bound))).clone()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn exponents(&self) -> &[Exponent] {
        self.index.items()
    }

    pub fn position(&self, e: &Exponent) -> Option<usize> {
        self.index.position(e)
    }

    /// Positions of the monomials of degree exactly `k`.
    pub fn degree_range(&self, k: u32) -> std::ops::Range<usize> {
        if k > self.bound {
            return 0..0;
        }
        self.offsets[k as usize]..self.offsets[k as usize + 1]
    }
}

/// Polynomial of total degree `<= bound` in `n` variables.
#[derive(Clone)]
pub struct TruncatedPoly {
    field: PrimeField,
    basis: Arc<GradedBasis>,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for TruncatedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.bound() == other.bound() && self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for TruncatedPoly {}

impl fmt::Debug for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedPoly(n={}, bound={}, {})", self.n(), self.bound(), self)
    }
}

impl TruncatedPoly {
    pub fn zero(field: PrimeField, n: usize, bound: u32) -> Self {
        assert!(n >= 1, "at least one variable is required");
        let basis = GradedBasis::get(n, bound);
        let coeffs = vec![FieldElement::ZERO; basis.len()];
        TruncatedPoly { field, basis, coeffs }
    }

    pub fn one(field: PrimeField, n: usize, bound: u32) -> Self {
        let mut p = Self::zero(field, n, bound);
        p.coeffs[0] = field.one();
        p
    }

    /// Monomial `x^e` (zero when `|e| > bound`).
    pub fn monomial(field: PrimeField, e: &Exponent, bound: u32) -> Self {
        let mut p = Self::zero(field, e.n(), bound);
        if let Some(i) = p.basis.position(e) {
            p.coeffs[i] = field.one();
        }
        p
    }

    /// Builds a polynomial from `(exponent, value)` pairs; repeated exponents add up.
    pub fn from_terms<I>(field: PrimeField, n: usize, bound: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, FieldElement)>,
    {
        let mut p = Self::zero(field, n, bound);
        for (e, v) in terms {
            if e.n() != n {
                return Err(Error::VariableMismatch { left: n, right: e.n() });
            }
            let i = p
                .basis
                .position(&e)
                .ok_or_else(|| Error::InvalidArgument(format!("term {e} exceeds degree bound {bound}")))?;
            p.coeffs[i] = field.add(p.coeffs[i], v);
        }
        Ok(p)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn bound(&self) -> u32 {
        self.basis.bound
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    /// Coefficient of `x^e`; zero outside the bound.
    pub fn coeff(&self, e: &Exponent) -> FieldElement {
        assert_eq!(e.n(), self.n(), "exponent length mismatch");
        self.basis.position(e).map_or(FieldElement::ZERO, |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, e: &Exponent, v: FieldElement) -> Result<()> {
        let i = self
            .basis
            .position(e)
            .ok_or_else(|| Error::InvalidArgument(format!("term {e} exceeds degree bound {}", self.bound())))?;
        self.coeffs[i] = v;
        Ok(())
    }

    pub fn constant(&self) -> FieldElement {
        self.coeffs[0]
    }

    /// Dense coefficients in basis order.
    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, FieldElement)> + '_ {
        self.basis.exponents().iter().zip(self.coeffs.iter().copied()).filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Largest degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.iter().rposition(|c| !c.is_zero()).map(|i| self.basis.exponents()[i].degree())
    }

    /// Graded component `T_k` (same bound, only degree-`k` terms kept).
    pub fn component(&self, k: u32) -> TruncatedPoly {
        let mut out = Self::zero(self.field, self.n(), self.bound());
        let range = self.basis.degree_range(k);
        out.coeffs[range.clone()].copy_from_slice(&self.coeffs[range]);
        out
    }

    /// Coefficients of `T_k` in lex-ascending order of the degree-`k` monomials.
    pub fn component_coeffs(&self, k: u32) -> &[FieldElement] {
        &self.coeffs[self.basis.degree_range(k)]
    }

    /// Re-expresses the polynomial with a different bound, dropping terms above it.
    pub fn with_bound(&self, bound: u32) -> TruncatedPoly {
        if bound == self.bound() {
            return self.clone();
        }
        let mut out = Self::zero(self.field, self.n(), bound);
        let shared = self.coeffs.len().min(out.coeffs.len());
        out.coeffs[..shared].copy_from_slice(&self.coeffs[..shared]);
        out
    }

    fn check_compatible(&self, other: &TruncatedPoly) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::VariableMismatch { left: self.n(), right: other.n() });
        }
        if self.field != other.field {
            return Err(Error::InvalidArgument("polynomials over different fields".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedPoly) -> Result<TruncatedPoly> {
        self.check_compatible(other)?;
        let bound = self.bound().max(other.bound());
        let mut out = self.with_bound(bound);
        for (i, &c) in other.coeffs.iter().enumerate() {
            out.coeffs[i] = self.field.add(out.coeffs[i], c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedPoly) -> Result<TruncatedPoly> {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn scale(&self, s: FieldElement) -> TruncatedPoly {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c = self.field.mul(*c, s));
        out
    }
}

/// Product `a * b` with all terms of degree `> bound` dropped.
pub fn multiply_truncated(a: &TruncatedPoly, b: &TruncatedPoly, bound: u32) -> Result<TruncatedPoly> {
    a.check_compatible(b)?;
    let f = a.field;
    let p = f.modulus();
    let mut out = TruncatedPoly::zero(f, a.n(), bound);
    let mut acc = vec![0u64; out.coeffs.len()];
    for (ea, ca) in a.terms() {
        let da = ea.degree();
        if da > bound {
            break;
        }
        let limit = (bound - da).min(b.bound());
        let end = b.basis.degree_range(limit).end;
        for (eb, cb) in b.basis.exponents()[..end].iter().zip(&b.coeffs[..end]) {
            if cb.is_zero() {
                continue;
            }
            let target = out.basis.position(&ea.add(eb)).expect("sum within bound");
            acc[target] = (acc[target] + ca.0 * cb.0) % p;
        }
    }
    for (c, v) in out.coeffs.iter_mut().zip(acc) {
        *c = FieldElement(v);
    }
    Ok(out)
}

/// Inverse of a unit series up to degree `bound`, by the graded recursion
/// `R_0 = 1`, `R_k = -sum_{i=1..k} A_i R_{k-i}`.
pub fn reciprocal_truncated(a: &TruncatedPoly, bound: u32) -> Result<TruncatedPoly> {
    let f = a.field;
    if a.constant() != f.one() {
        return Err(Error::NotUnit);
    }
    let p = f.modulus();
    let mut r = TruncatedPoly::zero(f, a.n(), bound);
    r.coeffs[0] = f.one();
    let basis = r.basis.clone();
    for k in 1..=bound {
        let mut acc: HashMap<usize, u64> = HashMap::new();
        for i in 1..=k.min(a.bound()) {
            for (ea, ca) in a.basis.exponents()[a.basis.degree_range(i)].iter().zip(&a.coeffs[a.basis.degree_range(i)]) {
                if ca.is_zero() {
                    continue;
                }
                for pos in basis.degree_range(k - i) {
                    let cr = r.coeffs[pos];
                    if cr.is_zero() {
                        continue;
                    }
                    let target = basis.position(&ea.add(&basis.exponents()[pos])).expect("within bound");
                    let slot = acc.entry(target).or_insert(0);
                    *slot = (*slot + ca.0 * cr.0) % p;
                }
            }
        }
        for (target, v) in acc {
            r.coeffs[target] = f.neg(FieldElement(v));
        }
    }
    Ok(r)
}

/// Numerator and denominator of a rational function, both with constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPair {
    pub numerator: TruncatedPoly,
    pub denominator: TruncatedPoly,
}

impl RationalPair {
    pub fn new(numerator: TruncatedPoly, denominator: TruncatedPoly) -> Result<Self> {
        numerator.check_compatible(&denominator)?;
        let one = numerator.field.one();
        if numerator.constant() != one || denominator.constant() != one {
            return Err(Error::NotUnit);
        }
        Ok(RationalPair { numerator, denominator })
    }
}

/// Order-`m` Taylor polynomial of `P / Q`.
pub fn taylor_quotient(pq: &RationalPair, m: u32) -> Result<TruncatedPoly> {
    let inv = reciprocal_truncated(&pq.denominator, m)?;
    multiply_truncated(&pq.numerator, &inv, m)
}

/// Constant term 1, every other coefficient of degree `<= deg` uniform.
pub fn random_unit_poly<R: Rng + ?Sized>(field: PrimeField, n: usize, deg: u32, rng: &mut R) -> TruncatedPoly {
    let mut p = TruncatedPoly::zero(field, n, deg);
    p.coeffs[0] = field.one();
    for c in p.coeffs.iter_mut().skip(1) {
        *c = field.random(rng);
    }
    p
}

/// Homogeneous form of degree exactly `deg` with uniform coefficients.
pub fn random_form<R: Rng + ?Sized>(field: PrimeField, n: usize, deg: u32, rng: &mut R) -> Result<TruncatedPoly> {
    if deg == 0 {
        return Err(Error::InvalidArgument("forms must have positive degree".into()));
    }
    let mut p = TruncatedPoly::zero(field, n, deg);
    for pos in p.basis.degree_range(deg) {
        p.coeffs[pos] = field.random(rng);
    }
    Ok(p)
}

/// Uniform sample of all coefficients (constant included).
pub fn random_poly<R: Rng + ?Sized>(field: PrimeField, n: usize, bound: u32, rng: &mut R) -> TruncatedPoly {
    let mut p = TruncatedPoly::zero(field, n, bound);
    for c in p.coeffs.iter_mut() {
        *c = field.random(rng);
    }
    p
}

impl fmt::Display for TruncatedPoly {
    /// Terms `coeff*x1^a1*...` in basis order, with signed coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let v = self.field.to_signed(c);
            let (sign, mag) = if v < 0 { ("-", v.unsigned_abs()) } else { ("+", v as u64) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let constant = e.degree() == 0;
            match (constant, mag) {
                (true, _) => write!(f, "{mag}")?,
                (false, 1) => write!(f, "{e}")?,
                (false, _) => write!(f, "{mag}*{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses text such as `1 + 3*x1 - 2*x1*x2^2` into a polynomial with `n`
/// variables and degree bound `bound`.
pub fn parse_poly(field: PrimeField, n: usize, bound: u32, text: &str) -> Result<TruncatedPoly> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..=bytes.len() {
        // split before every +/- that is not the leading sign
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'*') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    let mut out = Vec::new();
    for raw in terms {
        out.push(parse_term(field, n, raw)?);
    }
    TruncatedPoly::from_terms(field, n, bound, out)
}

fn parse_term(field: PrimeField, n: usize, raw: &str) -> Result<(Exponent, FieldElement)> {
    let (negative, body) = match raw.as_bytes().first() {
        Some(b'+') => (false, &raw[1..]),
        Some(b'-') => (true, &raw[1..]),
        _ => (false, raw),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("dangling sign in '{raw}'")));
    }
    let mut coeff = field.one();
    let mut exps = vec![0u32; n];
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in '{raw}'")));
        }
        if let Some(var) = factor.strip_prefix('x') {
            let (idx, pow) = match var.split_once('^') {
                Some((i, p)) => (i, p.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?),
                None => (var, 1),
            };
            let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable in '{factor}'")))?;
            if idx == 0 || idx > n {
                return Err(Error::Parse(format!("variable x{idx} outside x1..x{n}")));
            }
            exps[idx - 1] += pow;
        } else {
            let v: i64 = factor.parse().map_err(|_| Error::Parse(format!("bad coefficient '{factor}'")))?;
            coeff = field.mul(coeff, field.from_i64(v));
        }
    }
    if negative {
        coeff = field.neg(coeff);
    }
    Ok((Exponent::new(exps), coeff))
}
