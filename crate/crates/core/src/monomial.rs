//! Exponent vectors and graded enumeration of monomials.
//!
//! Every row and column of a Padé matrix is labelled by a monomial. Ranges of
//! monomials are ordered first by total degree and then lexicographically with
//! `x1 > x2 > ... > xn`: descending lex inside degree-descending ranges,
//! ascending lex inside degree-ascending ranges.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector `(g1, ..., gn)` naming the monomial `x1^g1 * ... * xn^gn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "an exponent needs at least one variable");
        Exponent(entries)
    }

    /// The constant monomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        Exponent::new(vec![0; n])
    }

    /// `x_i` (zero-based `i`) in `n` variables.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent::new(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        assert_eq!(self.n(), other.n(), "exponent length mismatch");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - other` when `other <= self` componentwise, otherwise `None`.
    pub fn subtract(&self, other: &Exponent) -> Option<Exponent> {
        assert_eq!(self.n(), other.n(), "exponent length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        assert_eq!(self.n(), other.n(), "exponent length mismatch");
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Coefficient label in the style `c_{210}`; entries are comma separated once any exceeds 9.
    pub fn label(&self) -> String {
        let sep = if self.0.iter().any(|&g| g > 9) { "," } else { "" };
        let body: Vec<String> = self.0.iter().map(u32::to_string).collect();
        format!("c_{{{}}}", body.join(sep))
    }
}

impl fmt::Display for Exponent {
    /// Writes the monomial as `x1^2*x3`, or `1` for the constant.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &g) in self.0.iter().enumerate() {
            if g == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if g == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, g)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegreeOrder {
    Ascending,
    Descending,
}

/// Lexicographic tie-break inside one total degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TieBreak {
    /// Lex direction follows the degree direction.
    #[default]
    Standard,
    /// Lex direction opposite to the degree direction.
    Reversed,
}

/// All monomials in `n` variables with total degree in `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialRange {
    pub n: usize,
    pub lo: u32,
    pub hi: u32,
    pub order: DegreeOrder,
    pub tie_break: TieBreak,
}

impl MonomialRange {
    pub fn new(n: usize, lo: u32, hi: u32, order: DegreeOrder) -> Self {
        assert!(n >= 1, "at least one variable is required");
        MonomialRange { n, lo, hi, order, tie_break: TieBreak::Standard }
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn enumerate(&self) -> Vec<Exponent> {
        enumerate(self)
    }
}

/// Monomials of exactly degree `k`, lex descending (`x1^k` first).
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<Exponent> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(Exponent(prefix.clone()));
            prefix.pop();
            return;
        }
        for g in (0..=k).rev() {
            prefix.push(g);
            rec(n, k - g, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Lists the monomials of `range` in its total order.
pub fn enumerate(range: &MonomialRange) -> Vec<Exponent> {
    if range.lo > range.hi {
        return Vec::new();
    }
    let degrees: Vec<u32> = match range.order {
        DegreeOrder::Ascending => (range.lo..=range.hi).collect(),
        DegreeOrder::Descending => (range.lo..=range.hi).rev().collect(),
    };
    let lex_descending = matches!(
        (range.order, range.tie_break),
        (DegreeOrder::Descending, TieBreak::Standard) | (DegreeOrder::Ascending, TieBreak::Reversed)
    );
    let mut out = Vec::new();
    for k in degrees {
        let mut block = monomials_of_degree(range.n, k);
        if !lex_descending {
            block.reverse();
        }
        out.extend(block);
    }
    out
}

/// Binomial coefficient `C(a, k)`, with overflow reported.
pub fn binomial(a: u64, k: u64) -> Result<u64> {
    if k > a {
        return Ok(0);
    }
    let k = k.min(a - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.checked_mul((a - i) as u128).ok_or(Error::Overflow("binomial coefficient"))? / (i as u128 + 1);
    }
    u64::try_from(r).map_err(|_| Error::Overflow("binomial coefficient"))
}

/// Number of monomials in `n` variables of total degree `lo..=hi`.
pub fn count_monomials(n: usize, lo: u32, hi: u32) -> Result<u64> {
    if lo > hi {
        return Ok(0);
    }
    let n = n as u64;
    let upper = binomial(hi as u64 + n, n)?;
    let lower = if lo == 0 { 0 } else { binomial(lo as u64 - 1 + n, n)? };
    Ok(upper - lower)
}

/// Dense positions of an enumerated range, for O(1) matrix addressing.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    items: Vec<Exponent>,
    positions: HashMap<Exponent, usize>,
}

impl MonomialIndex {
    pub fn new(items: Vec<Exponent>) -> Self {
        let positions = items.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialIndex { items, positions }
    }

    pub fn from_range(range: &MonomialRange) -> Self {
        Self::new(enumerate(range))
    }

    pub fn position(&self, e: &Exponent) -> Option<usize> {
        self.positions.get(e).copied()
    }

    pub fn items(&self) -> &[Exponent] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    #[test]
    fn univariate_descending() {
        let r = MonomialRange::new(1, 3, 5, DegreeOrder::Descending);
        assert_eq!(r.enumerate(), vec![ex(&[5]), ex(&[4]), ex(&[3])]);
    }

    #[test]
    fn bivariate_ascending_matches_brute_force_sort() {
        let got = MonomialRange::new(2, 0, 2, DegreeOrder::Ascending).enumerate();
        let mut brute: Vec<Exponent> =
            (0..=2u32).flat_map(|a| (0..=2u32).map(move |b| ex(&[a, b]))).filter(|e| e.degree() <= 2).collect();
        brute.sort_by(|x, y| x.degree().cmp(&y.degree()).then(x.entries().cmp(y.entries())));
        assert_eq!(got, brute);
        assert_eq!(got, vec![ex(&[0, 0]), ex(&[0, 1]), ex(&[1, 0]), ex(&[0, 2]), ex(&[1, 1]), ex(&[2, 0])]);
    }

    #[test]
    fn ternary_cubic_rows() {
        let got = MonomialRange::new(3, 3, 3, DegreeOrder::Descending).enumerate();
        let want: Vec<Exponent> = [
            [3, 0, 0],
            [2, 1, 0],
            [2, 0, 1],
            [1, 2, 0],
            [1, 1, 1],
            [1, 0, 2],
            [0, 3, 0],
            [0, 2, 1],
            [0, 1, 2],
            [0, 0, 3],
        ]
        .iter()
        .map(|v| ex(v))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn reversed_tie_break() {
        let got = MonomialRange::new(2, 1, 1, DegreeOrder::Ascending).with_tie_break(TieBreak::Reversed).enumerate();
        assert_eq!(got, vec![ex(&[1, 0]), ex(&[0, 1])]);
    }

    #[test]
    fn empty_when_lo_exceeds_hi() {
        assert!(MonomialRange::new(3, 4, 2, DegreeOrder::Ascending).enumerate().is_empty());
        assert_eq!(count_monomials(3, 4, 2).unwrap(), 0);
    }

    #[test]
    fn subtraction() {
        assert_eq!(ex(&[2, 1]).subtract(&ex(&[1, 0])), Some(ex(&[1, 1])));
        assert_eq!(ex(&[2, 0]).subtract(&ex(&[0, 1])), None);
        assert_eq!(ex(&[3, 0, 0]).subtract(&ex(&[0, 0, 0])), Some(ex(&[3, 0, 0])));
    }

    #[test]
    fn counts() {
        // degrees 3, 4, 5 contribute 4 + 5 + 6 monomials: the 15 rows of the (2; 2, 2, 5) Padé matrix
        assert_eq!(MonomialRange::new(2, 3, 5, DegreeOrder::Descending).enumerate().len(), 15);
        assert_eq!(count_monomials(2, 3, 5).unwrap(), 15);
        assert_eq!(count_monomials(3, 0, 3).unwrap(), 20);
        for m in 0..8 {
            assert_eq!(count_monomials(1, 0, m).unwrap(), m as u64 + 1);
        }
        assert!(count_monomials(40, 0, 200).is_err());
    }

    #[test]
    fn enumeration_size_matches_count_exhaustively() {
        for n in 1..=6 {
            for hi in 0..=10 {
                for lo in 0..=hi {
                    let r = MonomialRange::new(n, lo, hi, DegreeOrder::Descending);
                    assert_eq!(r.enumerate().len() as u64, count_monomials(n, lo, hi).unwrap(), "n={n} lo={lo} hi={hi}");
                }
            }
        }
    }

    #[test]
    fn labels_and_display() {
        assert_eq!(ex(&[2, 1, 0]).label(), "c_{210}");
        assert_eq!(ex(&[12, 0]).label(), "c_{12,0}");
        assert_eq!(ex(&[2, 0, 1]).to_string(), "x1^2*x3");
        assert_eq!(ex(&[0, 0]).to_string(), "1");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn exponent(n: usize) -> impl Strategy<Value = Exponent> {
            proptest::collection::vec(0u32..5, n).prop_map(Exponent::new)
        }

        proptest! {
            #[test]
            fn subtract_defined_iff_divides((a, b) in (1usize..5).prop_flat_map(|n| (exponent(n), exponent(n)))) {
                match a.subtract(&b) {
                    Some(d) => {
                        prop_assert!(b.divides(&a));
                        prop_assert_eq!(d.add(&b), a);
                    }
                    None => prop_assert!(!b.divides(&a)),
                }
            }

            #[test]
            fn enumeration_is_strict_total_order(n in 1usize..4, hi in 0u32..5, desc in any::<bool>()) {
                let order = if desc { DegreeOrder::Descending } else { DegreeOrder::Ascending };
                let items = MonomialRange::new(n, 0, hi, order).enumerate();
                let idx = MonomialIndex::new(items.clone());
                prop_assert_eq!(idx.len(), items.len());
                // comparator agrees with enumeration position for all pairs
                let cmp = |a: &Exponent, b: &Exponent| {
                    let asc = a.degree().cmp(&b.degree()).then(a.entries().cmp(b.entries()));
                    if desc { asc.reverse() } else { asc }
                };
                for i in 0..items.len() {
                    for j in 0..items.len() {
                        prop_assert_eq!(i.cmp(&j), cmp(&items[i], &items[j]));
                    }
                }
            }
        }
    }
}
