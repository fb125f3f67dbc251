//! Padé matrices of truncated series.
//!
//! For a series `T` of order `m` and a type `(d, e)`, the Padé matrix has rows
//! labelled by the monomials of degree `d+1..=m` (degree descending) and
//! columns labelled by the monomials of degree `0..=e` (degree ascending). The
//! entry at row `x^a`, column `x^b` is the coefficient `c_{a-b}` of `T` when
//! `b <= a` componentwise, and zero otherwise. Block `C_i` (multiplication by
//! the degree-`i` component of `T`) sits where row degree minus column degree
//! equals `i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{DenseMatrix, FieldElement, PrimeField};
use crate::monomial::{count_monomials, DegreeOrder, Exponent, MonomialRange, TieBreak};
use crate::series::{multiply_truncated, TruncatedPoly};

/// `(n, d, e, m)`: variables, numerator degree, denominator degree, order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PadeParams {
    pub n: usize,
    pub d: u32,
    pub e: u32,
    pub m: u32,
}

impl PadeParams {
    pub fn new(n: usize, d: u32, e: u32, m: u32) -> Self {
        PadeParams { n, d, e, m }
    }

    pub fn rows(&self) -> Result<u64> {
        count_monomials(self.n, self.d + 1, self.m)
    }

    pub fn cols(&self) -> Result<u64> {
        count_monomials(self.n, 0, self.e)
    }

    /// Square Padé matrix, the setting of the Hessian probes.
    pub fn is_square(&self) -> Result<bool> {
        Ok(self.rows()? == self.cols()?)
    }
}

/// Symbolic layout: which coefficient `c_g` (if any) sits in every cell.
#[derive(Clone, Debug)]
pub struct PadeLayout {
    params: PadeParams,
    row_labels: Vec<Exponent>,
    col_labels: Vec<Exponent>,
    // row-major, `None` is a structural zero
    cells: Vec<Option<Exponent>>,
}

impl PadeLayout {
    pub fn new(params: PadeParams) -> Result<Self> {
        Self::with_tie_break(params, TieBreak::Standard)
    }

    /// `tie_break` orders equal-degree columns; rows always use the standard order.
    pub fn with_tie_break(params: PadeParams, tie_break: TieBreak) -> Result<Self> {
        let PadeParams { n, d, e, m } = params;
        if n == 0 {
            return Err(Error::InvalidArgument("at least one variable is required".into()));
        }
        if d >= m {
            return Err(Error::EmptyRowSet { d, m });
        }
        // overflow guard for absurd sizes before enumerating
        params.rows()?;
        params.cols()?;
        let row_labels = MonomialRange::new(n, d + 1, m, DegreeOrder::Descending).enumerate();
        let col_labels = MonomialRange::new(n, 0, e, DegreeOrder::Ascending).with_tie_break(tie_break).enumerate();
        let mut cells = Vec::with_capacity(row_labels.len() * col_labels.len());
        for a in &row_labels {
            for b in &col_labels {
                cells.push(a.subtract(b));
            }
        }
        Ok(PadeLayout { params, row_labels, col_labels, cells })
    }

    pub fn params(&self) -> PadeParams {
        self.params
    }

    pub fn row_labels(&self) -> &[Exponent] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Exponent] {
        &self.col_labels
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn cell(&self, r: usize, c: usize) -> Option<&Exponent> {
        self.cells[r * self.cols() + c].as_ref()
    }

    /// Coefficients `c_g` that occur somewhere in the matrix, in first-seen order
    /// sorted by the graded ascending order.
    pub fn variables(&self) -> Vec<Exponent> {
        let mut vars: Vec<Exponent> = self.cells.iter().flatten().cloned().collect();
        vars.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.entries().cmp(b.entries())));
        vars.dedup();
        vars
    }

    /// Cells holding `c_g`, as `(row, col)` pairs.
    pub fn occurrences(&self, g: &Exponent) -> Vec<(usize, usize)> {
        let cols = self.cols();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, cell)| cell.as_ref() == Some(g))
            .map(|(i, _)| (i / cols, i % cols))
            .collect()
    }

    /// Fills in the coefficients of `t`.
    pub fn evaluate(&self, t: &TruncatedPoly) -> Result<DenseMatrix> {
        if t.n() != self.params.n {
            return Err(Error::VariableMismatch { left: self.params.n, right: t.n() });
        }
        let data = self.cells.iter().map(|cell| cell.as_ref().map_or(FieldElement::ZERO, |g| t.coeff(g))).collect();
        DenseMatrix::from_elements(t.field(), self.rows(), self.cols(), data)
    }

    /// Cell texts `c_{g}` or `0`.
    pub fn symbolic(&self) -> Vec<Vec<String>> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.cell(r, c).map_or_else(|| "0".to_string(), Exponent::label)).collect())
            .collect()
    }
}

/// A Padé matrix evaluated at a series, with its row and column labels.
#[derive(Clone, Debug)]
pub struct PadeMatrix {
    pub matrix: DenseMatrix,
    pub row_labels: Vec<Exponent>,
    pub col_labels: Vec<Exponent>,
    pub params: PadeParams,
}

impl PadeMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Rows of total degree `k`, as a contiguous index range.
    pub fn rows_of_degree(&self, k: u32) -> std::ops::Range<usize> {
        degree_span(&self.row_labels, k)
    }

    /// Columns of total degree `k`, as a contiguous index range.
    pub fn cols_of_degree(&self, k: u32) -> std::ops::Range<usize> {
        degree_span(&self.col_labels, k)
    }

    /// The block `C_i` acting on column degree `j`: rows of degree `i + j`,
    /// columns of degree `j`. Empty when that row degree is not present.
    pub fn block(&self, i: u32, j: u32) -> DenseMatrix {
        let rows: Vec<usize> = self.rows_of_degree(i + j).collect();
        let cols: Vec<usize> = self.cols_of_degree(j).collect();
        self.matrix.select_rows(&rows).select_columns(&cols)
    }
}

fn degree_span(labels: &[Exponent], k: u32) -> std::ops::Range<usize> {
    let start = labels.iter().position(|e| e.degree() == k);
    match start {
        Some(s) => {
            let len = labels[s..].iter().take_while(|e| e.degree() == k).count();
            s..s + len
        }
        None => 0..0,
    }
}

/// Padé matrix `P_T` of type `(d, e)` for a series of order `m = t.bound()`.
pub fn build_pade_matrix(t: &TruncatedPoly, d: u32, e: u32) -> Result<PadeMatrix> {
    build_pade_matrix_with(t, d, e, TieBreak::Standard)
}

pub fn build_pade_matrix_with(t: &TruncatedPoly, d: u32, e: u32, tie_break: TieBreak) -> Result<PadeMatrix> {
    let params = PadeParams::new(t.n(), d, e, t.bound());
    let layout = PadeLayout::with_tie_break(params, tie_break)?;
    let matrix = layout.evaluate(t)?;
    Ok(PadeMatrix { matrix, row_labels: layout.row_labels, col_labels: layout.col_labels, params })
}

/// Reduced Padé matrix: `P_T` without its constant column.
pub fn build_reduced(t: &TruncatedPoly, d: u32, e: u32) -> Result<PadeMatrix> {
    let full = build_pade_matrix(t, d, e)?;
    Ok(drop_constant_column(full))
}

pub(crate) fn drop_constant_column(full: PadeMatrix) -> PadeMatrix {
    let keep: Vec<usize> = (1..full.matrix.cols()).collect();
    PadeMatrix {
        matrix: full.matrix.select_columns(&keep),
        row_labels: full.row_labels,
        col_labels: full.col_labels[1..].to_vec(),
        params: full.params,
    }
}

/// Structural kernel vector of `P_T` for the type `(m-2, m-1)`.
///
/// The last three column degrees carry the signed 2x2 minors of
/// `[[T2, T1, T0], [T3, T2, T1]]`, namely `T2*T0 - T1^2`, `T2*T1 - T3*T0` and
/// `T3*T1 - T2^2`, scaled by `x1^(m-5)` so each block has the degree of its
/// column slot. In one variable every slot is a scalar, so any `m >= 3` works;
/// with two or more variables the degrees only line up for `m >= 5`.
pub fn cramer_kernel_vector(t: &TruncatedPoly) -> Result<Vec<FieldElement>> {
    let m = t.bound();
    let n = t.n();
    if m < 3 {
        return Err(Error::Unsupported(format!("order m = {m} is below 3")));
    }
    if n >= 2 && m < 5 {
        return Err(Error::Unsupported(format!(
            "with {n} variables the minors have degrees 2, 3, 4 and cannot fill column degrees {}..{}",
            m - 3,
            m - 1
        )));
    }
    let (d, e) = (m - 2, m - 1);
    let f = t.field();
    let comp = |k: u32| t.component(k);
    let (t0, t1, t2, t3) = (comp(0), comp(1), comp(2), comp(3));
    let prod = |a: &TruncatedPoly, b: &TruncatedPoly| multiply_truncated(a, b, 4);
    let minors = [
        prod(&t2, &t0)?.sub(&prod(&t1, &t1)?)?,
        prod(&t2, &t1)?.sub(&prod(&t3, &t0)?)?,
        prod(&t3, &t1)?.sub(&prod(&t2, &t2)?)?,
    ];
    let layout = PadeLayout::new(PadeParams::new(n, d, e, m))?;
    let mut v = vec![FieldElement::ZERO; layout.cols()];
    if n == 1 {
        for (k, minor) in minors.iter().enumerate() {
            let slot = (m - 3) as usize + k;
            v[slot] = minor.coeff(&Exponent::new(vec![k as u32 + 2]));
        }
        return Ok(v);
    }
    let mut shift = vec![0u32; n];
    shift[0] = m - 5;
    let shift = Exponent::new(shift);
    for minor in &minors {
        for (g, c) in minor.terms() {
            let target = g.add(&shift);
            let pos = layout.col_labels().iter().position(|b| *b == target).expect("column degree within e");
            v[pos] = f.add(v[pos], c);
        }
    }
    Ok(v)
}

/// Field this matrix was built over.
pub fn field_of(p: &PadeMatrix) -> PrimeField {
    p.matrix.field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{random_poly, random_unit_poly, taylor_quotient, RationalPair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ex(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    fn layout_strings(n: usize, d: u32, e: u32, m: u32, tie: TieBreak) -> Vec<Vec<String>> {
        PadeLayout::with_tie_break(PadeParams::new(n, d, e, m), tie).unwrap().symbolic()
    }

    fn rows_of(table: &[&[&str]]) -> Vec<Vec<String>> {
        table.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn univariate_quintic_hankel() {
        let got = layout_strings(1, 2, 2, 5, TieBreak::Standard);
        let want = rows_of(&[&["c_{5}", "c_{4}", "c_{3}"], &["c_{4}", "c_{3}", "c_{2}"], &["c_{3}", "c_{2}", "c_{1}"]]);
        assert_eq!(got, want);
    }

    #[test]
    fn perazzo_layout() {
        // the published display lists the degree-one columns as x1, x2
        let got = layout_strings(2, 1, 1, 2, TieBreak::Reversed);
        let want = rows_of(&[
            &["c_{20}", "c_{10}", "0"],
            &["c_{11}", "c_{01}", "c_{10}"],
            &["c_{02}", "0", "c_{01}"],
        ]);
        assert_eq!(got, want);
        // the default order swaps those two columns
        let std = layout_strings(2, 1, 1, 2, TieBreak::Standard);
        let swapped: Vec<Vec<String>> = want.iter().map(|r| vec![r[0].clone(), r[2].clone(), r[1].clone()]).collect();
        assert_eq!(std, swapped);
    }

    #[test]
    fn ternary_cubic_layout() {
        let got = layout_strings(3, 2, 2, 3, TieBreak::Standard);
        let want = rows_of(&[
            &["c_{300}", "0", "0", "c_{200}", "0", "0", "0", "0", "0", "c_{100}"],
            &["c_{210}", "0", "c_{200}", "c_{110}", "0", "0", "0", "0", "c_{100}", "c_{010}"],
            &["c_{201}", "c_{200}", "0", "c_{101}", "0", "0", "0", "c_{100}", "0", "c_{001}"],
            &["c_{120}", "0", "c_{110}", "c_{020}", "0", "0", "c_{100}", "0", "c_{010}", "0"],
            &["c_{111}", "c_{110}", "c_{101}", "c_{011}", "0", "c_{100}", "0", "c_{010}", "c_{001}", "0"],
            &["c_{102}", "c_{101}", "0", "c_{002}", "c_{100}", "0", "0", "c_{001}", "0", "0"],
            &["c_{030}", "0", "c_{020}", "0", "0", "0", "c_{010}", "0", "0", "0"],
            &["c_{021}", "c_{020}", "c_{011}", "0", "0", "c_{010}", "c_{001}", "0", "0", "0"],
            &["c_{012}", "c_{011}", "c_{002}", "0", "c_{010}", "c_{001}", "0", "0", "0", "0"],
            &["c_{003}", "c_{002}", "0", "0", "c_{001}", "0", "0", "0", "0", "0"],
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn reduced_catalecticant_block() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_poly(f, 1, 4, &mut rng);
        let full = build_pade_matrix(&t, 1, 2).unwrap();
        let red = build_reduced(&t, 1, 2).unwrap();
        assert_eq!((red.matrix.rows(), red.matrix.cols()), (3, 2));
        let c = |k: u32| t.coeff(&ex(&[k]));
        assert_eq!(red.matrix.row(0), &[c(3), c(2)]);
        assert_eq!(red.matrix.row(2), &[c(1), c(0)]);
        assert_eq!(full.matrix.row(0), &[c(4), c(3), c(2)]);
        assert_eq!(red.col_labels, vec![ex(&[1]), ex(&[2])]);

        let perazzo = build_reduced(&random_poly(f, 2, 2, &mut rng), 1, 1).unwrap();
        assert_eq!((perazzo.matrix.rows(), perazzo.matrix.cols()), (3, 2));
    }

    #[test]
    fn shapes_of_the_4445_case() {
        let p = PadeParams::new(4, 4, 4, 5);
        assert_eq!(p.rows().unwrap(), 56);
        assert_eq!(p.cols().unwrap(), 70);
        let f = PrimeField::default();
        let t = random_poly(f, 4, 5, &mut ChaCha8Rng::seed_from_u64(0));
        let red = build_reduced(&t, 4, 4).unwrap();
        assert_eq!((red.matrix.rows(), red.matrix.cols()), (56, 69));
    }

    #[test]
    fn empty_row_set_is_rejected() {
        let f = PrimeField::default();
        let t = TruncatedPoly::one(f, 2, 3);
        assert_eq!(build_pade_matrix(&t, 3, 1).unwrap_err(), Error::EmptyRowSet { d: 3, m: 3 });
        assert_eq!(build_pade_matrix(&t, 5, 1).unwrap_err(), Error::EmptyRowSet { d: 5, m: 3 });
    }

    #[test]
    fn blocks_are_multiplication_by_components() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = random_poly(f, 2, 5, &mut rng);
        let p = build_pade_matrix(&t, 2, 2).unwrap();
        // C_2 : degree 1 -> degree 3 is 4x2; C_2' : degree 2 -> degree 4 is 5x3
        let c2 = p.block(2, 1);
        assert_eq!((c2.rows(), c2.cols()), (4, 2));
        assert_eq!((p.block(2, 2).rows(), p.block(2, 2).cols()), (5, 3));
        // column x2 of C_2 is T_2 * x2 read in degree-3 rows
        let prod = multiply_truncated(&t.component(2), &TruncatedPoly::monomial(f, &ex(&[0, 1]), 3), 3).unwrap();
        let rows = &p.row_labels[p.rows_of_degree(3)];
        for (r, a) in rows.iter().enumerate() {
            assert_eq!(c2.get(r, 0), prod.coeff(a));
        }
    }

    #[test]
    fn quadric_parametrized_kernel() {
        // for generic T the kernel is spanned by (0, -T1, T2)
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = random_unit_poly(f, 3, 3, &mut rng);
        let pm = build_pade_matrix(&t, 2, 2).unwrap();
        assert_eq!(pm.rank(), 9);
        let k = pm.matrix.kernel_basis();
        assert_eq!(k.len(), 1);
        let want: Vec<FieldElement> = pm
            .col_labels
            .iter()
            .map(|b| match b.degree() {
                0 => f.zero(),
                1 => f.neg(t.coeff(b)),
                _ => t.coeff(b),
            })
            .collect();
        assert!(!want.iter().all(|c| c.is_zero()));
        let pivot = want.iter().position(|c| !c.is_zero()).unwrap();
        let scale = f.div(want[pivot], k[0][pivot]).unwrap();
        let scaled: Vec<FieldElement> = k[0].iter().map(|&c| f.mul(c, scale)).collect();
        assert_eq!(scaled, want);
    }

    #[test]
    fn nonic_hypersurface_ranks() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let generic = build_pade_matrix(&random_unit_poly(f, 3, 9, &mut rng), 8, 5).unwrap();
        assert_eq!((generic.matrix.rows(), generic.matrix.cols(), generic.rank()), (55, 56, 55));
        let k = generic.matrix.kernel_basis();
        assert!(k[0][..20].iter().all(|c| c.is_zero()));
        // Q sits in the kernel at a point of the variety
        let pq = RationalPair::new(random_unit_poly(f, 3, 8, &mut rng), random_unit_poly(f, 3, 5, &mut rng)).unwrap();
        let t = taylor_quotient(&pq, 9).unwrap();
        assert_eq!(build_pade_matrix(&t, 8, 5).unwrap().rank(), 54);
    }

    #[test]
    fn cramer_vector_degenerate_and_fibonacci() {
        let f = PrimeField::default();
        let one = TruncatedPoly::one(f, 1, 5);
        assert!(cramer_kernel_vector(&one).unwrap().iter().all(|c| c.is_zero()));

        let fib = TruncatedPoly::from_terms(
            f,
            1,
            5,
            [1i64, 1, 2, 3, 5, 8].iter().enumerate().map(|(i, &c)| (ex(&[i as u32]), f.from_i64(c))),
        )
        .unwrap();
        let v = cramer_kernel_vector(&fib).unwrap();
        assert!(v.iter().any(|c| !c.is_zero()));
        let pm = build_pade_matrix(&fib, 3, 4).unwrap();
        assert!(pm.matrix.mul_vec(&v).unwrap().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn cramer_vector_trivariate() {
        let f = PrimeField::default();
        for m in [5u32, 6, 7] {
            let t = random_unit_poly(f, 3, m, &mut ChaCha8Rng::seed_from_u64(m as u64));
            let v = cramer_kernel_vector(&t).unwrap();
            assert!(v.iter().any(|c| !c.is_zero()));
            let pm = build_pade_matrix(&t, m - 2, m - 1).unwrap();
            assert!(pm.matrix.mul_vec(&v).unwrap().iter().all(|c| c.is_zero()), "m={m}");
        }
        assert!(cramer_kernel_vector(&TruncatedPoly::one(f, 1, 2)).is_err());
        assert!(matches!(cramer_kernel_vector(&TruncatedPoly::one(f, 2, 4)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rank_independent_of_tie_break() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (n, d, e, m) in [(2, 1, 2, 4), (3, 2, 2, 3), (3, 3, 4, 5), (4, 2, 2, 3)] {
            let p = random_unit_poly(f, n, d, &mut rng);
            let q = random_unit_poly(f, n, e, &mut rng);
            let t = taylor_quotient(&RationalPair::new(p, q).unwrap(), m).unwrap();
            let a = build_pade_matrix_with(&t, d, e, TieBreak::Standard).unwrap();
            let b = build_pade_matrix_with(&t, d, e, TieBreak::Reversed).unwrap();
            assert_eq!(a.rank(), b.rank());
        }
    }

    #[test]
    fn shape_invariants_sweep() {
        for n in 1..=5usize {
            for m in 1..=9u32 {
                for d in 0..m {
                    for e in 0..=m {
                        let params = PadeParams::new(n, d, e, m);
                        let layout = PadeLayout::new(params).unwrap();
                        assert_eq!(layout.rows() as u64, params.rows().unwrap());
                        assert_eq!(layout.cols() as u64, params.cols().unwrap());
                        assert_eq!(layout.col_labels()[0], Exponent::zero(n));
                    }
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn entry_rule(seed in any::<u64>(), n in 1usize..4, m in 1u32..6, d_off in 0u32..6, e in 0u32..5) {
                let d = d_off % m;
                let f = PrimeField::default();
                let t = random_poly(f, n, m, &mut ChaCha8Rng::seed_from_u64(seed));
                let pm = build_pade_matrix(&t, d, e).unwrap();
                for (r, a) in pm.row_labels.iter().enumerate() {
                    for (c, b) in pm.col_labels.iter().enumerate() {
                        let want = a.subtract(b).map_or(FieldElement::ZERO, |g| t.coeff(&g));
                        prop_assert_eq!(pm.matrix.get(r, c), want);
                    }
                }
            }

            #[test]
            fn univariate_ranks(seed in any::<u64>(), m in 3u32..9, d_raw in 0u32..8, e_raw in 0u32..8) {
                let f = PrimeField::default();
                let d = d_raw % m;
                let e = e_raw % m;
                prop_assume!(d + e < m);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = random_unit_poly(f, 1, d, &mut rng);
                let q = random_unit_poly(f, 1, e, &mut rng);
                let t = taylor_quotient(&RationalPair::new(p, q).unwrap(), m).unwrap();
                prop_assert_eq!(build_pade_matrix(&t, d, e).unwrap().rank(), e as usize);
                let u = random_unit_poly(f, 1, m, &mut rng);
                prop_assert_eq!(build_pade_matrix(&u, d, e).unwrap().rank(), ((m - d) as usize).min(e as usize + 1));
            }
        }
    }
}
