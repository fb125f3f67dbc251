//! Arithmetic in a prime field `F_p` and dense matrices over it.
//!
//! Elements are stored as canonical residues in `[0, p)`. The modulus is
//! restricted to odd primes below `2^31` so that a product plus a residue
//! always fits in a `u64` without reduction in between.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime below `2^31`, the default modulus.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Residue class modulo the field's prime, in canonical form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(transparent)]
#[serde(transparent)]
pub struct FieldElement(pub(crate) u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A prime field `Z/pZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    /// Creates the field of residues modulo `p`; `p` must be an odd prime below `2^31`.
    pub fn new(p: u64) -> Result<Self> {
        if !(3..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    #[inline]
    pub fn from_u64(&self, v: u64) -> FieldElement {
        FieldElement(v % self.p)
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> FieldElement {
        let r = v.rem_euclid(self.p as i64);
        FieldElement(r as u64)
    }

    /// Symmetric lift to `(-p/2, p/2]`, used for printing.
    pub fn to_signed(&self, a: FieldElement) -> i64 {
        if a.0 > self.p / 2 {
            a.0 as i64 - self.p as i64
        } else {
            a.0 as i64
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 * b.0 % self.p)
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.from_i64(t0))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Uniform sample from the whole field.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.p))
    }

    /// Uniform sample from the nonzero elements.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.p))
    }
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Row-major dense matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Result of reduced row echelon form: the pivot column of each nonzero row.
struct Echelon {
    pivots: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from integer rows, reducing each entry modulo p.
    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Ok(DenseMatrix { field, rows: rows.len(), cols, data })
    }

    pub fn from_elements(field: PrimeField, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(DenseMatrix { field, rows, cols, data })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Copy with the columns listed in `keep`, in that order.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, keep.len());
        for r in 0..self.rows {
            for (j, &c) in keep.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Copy with the rows listed in `keep`, in that order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let mut data = Vec::with_capacity(keep.len() * self.cols);
        for &r in keep {
            data.extend_from_slice(self.row(r));
        }
        DenseMatrix { field: self.field, rows: keep.len(), cols: self.cols, data }
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.field.modulus();
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k).0;
                if a == 0 {
                    continue;
                }
                for (c, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.get(k, c).0) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.set(r, c, FieldElement(v));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let p = self.field.modulus();
        Ok((0..self.rows)
            .map(|r| {
                let s = self.row(r).iter().zip(v).fold(0u64, |acc, (a, b)| (acc + a.0 * b.0) % p);
                FieldElement(s)
            })
            .collect())
    }

    /// In-place Gaussian elimination with first-nonzero pivoting.
    ///
    /// With `reduced` the result is in reduced row echelon form; otherwise only
    /// entries below each pivot are cleared. Pivot rows are always normalized to 1.
    fn eliminate(&mut self, reduced: bool) -> Echelon {
        let p = self.field.modulus();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..cols {
            if prow == self.rows {
                break;
            }
            let Some(found) = (prow..self.rows).find(|&r| self.data[r * cols + col].0 != 0) else {
                continue;
            };
            if found != prow {
                for c in col..cols {
                    self.data.swap(found * cols + c, prow * cols + c);
                }
            }
            let inv = self.field.inv(self.data[prow * cols + col]).expect("pivot is nonzero");
            for c in col..cols {
                let v = &mut self.data[prow * cols + c];
                *v = self.field.mul(*v, inv);
            }
            let (head, tail) = self.data.split_at_mut(prow * cols);
            let (pivot_row, below) = tail.split_at_mut(cols);
            let clear = |row: &mut [FieldElement]| {
                let f = row[col].0;
                if f == 0 {
                    return;
                }
                let nf = p - f;
                for c in col..cols {
                    row[c].0 = (row[c].0 + nf * pivot_row[c].0) % p;
                }
            };
            below.chunks_exact_mut(cols).for_each(clear);
            if reduced {
                head.chunks_exact_mut(cols).for_each(clear);
            }
            pivots.push(col);
            prow += 1;
        }
        Echelon { pivots }
    }

    /// Exact rank over the field.
    pub fn rank(&self) -> usize {
        // eliminating along the shorter side is cheaper
        let mut work = if self.cols > self.rows { self.transpose() } else { self.clone() };
        work.eliminate(false).pivots.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let mut work = self.clone();
        let echelon = work.eliminate(true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &echelon.pivots {
            is_pivot[c] = true;
        }
        let f = self.field;
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[free] = f.one();
                for (r, &pc) in echelon.pivots.iter().enumerate() {
                    v[pc] = f.neg(work.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for (r, &rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, rhs);
        }
        let echelon = aug.eliminate(true);
        if echelon.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![FieldElement::ZERO; self.cols];
        for (r, &pc) in echelon.pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Ok(Some(x))
    }

    pub fn determinant(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let f = self.field;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col].0 != 0) else {
                return Ok(f.zero());
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let pv = a[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv)?;
            for r in col + 1..n {
                let factor = f.mul(a[r * n + col], inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let t = f.mul(factor, a[col * n + c]);
                    a[r * n + c] = f.sub(a[r * n + c], t);
                }
            }
        }
        Ok(det)
    }

    /// Inverse matrix, `None` when singular.
    pub fn inverse(&self) -> Result<Option<DenseMatrix>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, self.field.one());
        }
        let echelon = aug.eliminate(true);
        if echelon.pivots.len() < n || echelon.pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let keep: Vec<usize> = (n..2 * n).collect();
        Ok(Some(aug.select_columns(&keep)))
    }
}
