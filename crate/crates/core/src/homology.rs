//! Exact integer linear algebra over the cell complex: boundary matrices,
//! Smith normal form with unimodular transform certificates, homology groups,
//! cycle and boundary membership, and homology-class ranks.
//!
//! All arithmetic uses unbounded integers; fraction-free elimination with
//! minimal-pivot selection keeps entry growth in check.

use crate::cells::{is_empty_cell, CellComplex, IntChain};
use crate::combinatorics::Rel;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Which part of the complex a computation runs over.
///
/// `EqOnly` is the subcomplex of cells inside the sphere union, `Relative`
/// the quotient by it (boundary terms landing in `=` cells are dropped),
/// `All` the whole complex. Geometrically empty index cells are excluded
/// from every basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Filter {
    EqOnly,
    Relative,
    All,
}

impl Filter {
    fn admits(self, rel: Rel) -> bool {
        match self {
            Filter::EqOnly => rel == Rel::Eq,
            Filter::Relative => rel == Rel::Le,
            Filter::All => true,
        }
    }
}

/// Positions (into the canonical cell list) of the basis cells of one degree
/// under a filter.
pub fn basis(cx: &CellComplex, degree: i64, filter: Filter) -> Vec<usize> {
    (0..cx.len())
        .filter(|&p| {
            let (cell, tau) = &cx.cells[p];
            cx.degree_of(p) == degree && filter.admits(cell.rel) && !is_empty_cell(cell, *tau)
        })
        .collect()
}

/// A sparse integer matrix with at most one entry per position, entries
/// sorted ascending by (row, col).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, BigInt)>,
    ) -> Self {
        entries.retain(|(_, _, v)| !v.is_zero());
        entries.sort_by_key(|a| (a.0, a.1));
        debug_assert!(entries
            .windows(2)
            .all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1)));
        SparseIntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Self {
        Self::from_triplets(
            rows,
            cols,
            entries
                .iter()
                .map(|&(r, c, v)| (r, c, BigInt::from(v)))
                .collect(),
        )
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matrix product; dimensions must agree.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut by_row: HashMap<usize, Vec<(usize, &BigInt)>> = HashMap::new();
        for (r, c, v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut acc: HashMap<(usize, usize), BigInt> = HashMap::new();
        for (r, k, v) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, w) in row {
                    let e = acc.entry((*r, *c)).or_insert_with(BigInt::zero);
                    *e += v * *w;
                }
            }
        }
        SparseIntMatrix::from_triplets(
            self.rows,
            other.cols,
            acc.into_iter().map(|((r, c), v)| (r, c, v)).collect(),
        )
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "matrix-vector shape mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r] += v * &x[*c];
        }
        out
    }

    fn to_dense(&self) -> Dense {
        let mut d = Dense::zero(self.rows, self.cols);
        for (r, c, v) in &self.entries {
            d.set(*r, *c, v.clone());
        }
        d
    }

    /// The interchange text format: a `rows cols nnz` header, then one
    /// `row col value` triple per line, 1-based, ascending (row, col).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {}", self.rows, self.cols, self.nnz()).unwrap();
        for (r, c, v) in &self.entries {
            writeln!(out, "{} {} {}", r + 1, c + 1, v).unwrap();
        }
        out
    }
}

/// Dense working matrix for the eliminations.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Dense {
    fn zero(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    fn identity(n: usize) -> Self {
        let mut d = Dense::zero(n, n);
        for i in 0..n {
            d.set(i, i, BigInt::one());
        }
        d
    }

    fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row a -= q * row b
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = q * self.get(b, c);
            let e = &mut self.data[a * self.cols + c];
            *e -= delta;
        }
    }

    /// col a -= q * col b
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let delta = q * self.get(r, b);
            let e = &mut self.data[r * self.cols + a];
            *e -= delta;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let e = &mut self.data[r * self.cols + c];
            *e = -std::mem::take(e);
        }
    }

    fn to_sparse(&self) -> SparseIntMatrix {
        let mut entries = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    entries.push((r, c, v.clone()));
                }
            }
        }
        SparseIntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

/// Smith normal form `u · A · v = diag(d)` with unimodular `u`, `v` and a
/// divisor chain `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: Vec<BigInt>,
    pub u: SparseIntMatrix,
    pub v: SparseIntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    /// Nontrivial elementary divisors, the torsion certificates.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.d
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .cloned()
            .collect()
    }

    /// Checks `u · a · v = diag(d)` and the divisor chain.
    pub fn verify_product(&self, a: &SparseIntMatrix) -> bool {
        let prod = self.u.mul(a).mul(&self.v);
        let mut expect = Vec::new();
        for (i, d) in self.d.iter().enumerate() {
            if !d.is_zero() {
                expect.push((i, i, d.clone()));
            }
        }
        let diag = SparseIntMatrix::from_triplets(a.rows, a.cols, expect);
        if prod != diag {
            return false;
        }
        let nonzero: Vec<&BigInt> = self.d.iter().filter(|x| !x.is_zero()).collect();
        nonzero.windows(2).all(|w| (w[1] % w[0]).is_zero())
            && self
                .d
                .iter()
                .skip_while(|x| !x.is_zero())
                .all(|x| x.is_zero())
    }

    /// Full certificate: the product identity plus independently recomputed
    /// `|det u| = |det v| = 1`.
    pub fn verify(&self, a: &SparseIntMatrix) -> bool {
        self.verify_product(a)
            && det_bareiss(&self.u.to_dense()).magnitude().is_one()
            && det_bareiss(&self.v.to_dense()).magnitude().is_one()
    }
}

fn min_abs_pivot(m: &Dense, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..m.rows {
        for c in t..m.cols {
            let v = m.get(r, c);
            if v.is_zero() {
                continue;
            }
            match best {
                None => best = Some((r, c)),
                Some((br, bc)) => {
                    if v.abs() < m.get(br, bc).abs() {
                        best = Some((r, c));
                    }
                }
            }
        }
    }
    best
}

/// Smith normal form by integer row/column elimination, pivoting on the
/// minimal nonzero absolute value. The transforms are tracked so the result
/// is a certificate, not a claim.
pub fn smith_normal_form(a: &SparseIntMatrix) -> SnfResult {
    let mut m = a.to_dense();
    let mut u = Dense::identity(a.rows);
    let mut v = Dense::identity(a.cols);
    let steps = a.rows.min(a.cols);

    let mut t = 0;
    while t < steps {
        let Some((pr, pc)) = min_abs_pivot(&m, t) else {
            break;
        };
        m.swap_rows(t, pr);
        u.swap_rows(t, pr);
        m.swap_cols(t, pc);
        v.swap_cols(t, pc);

        'reduce: loop {
            // clear the pivot column
            let mut remainder_row = None;
            for i in (t + 1)..m.rows {
                if m.get(i, t).is_zero() {
                    continue;
                }
                let q = m.get(i, t) / m.get(t, t);
                m.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
                if !m.get(i, t).is_zero() {
                    remainder_row = Some(i);
                }
            }
            if let Some(i) = remainder_row {
                // a strictly smaller pivot appeared below; promote it
                m.swap_rows(t, i);
                u.swap_rows(t, i);
                continue 'reduce;
            }
            // clear the pivot row
            let mut remainder_col = None;
            for j in (t + 1)..m.cols {
                if m.get(t, j).is_zero() {
                    continue;
                }
                let q = m.get(t, j) / m.get(t, t);
                m.col_sub(j, t, &q);
                v.col_sub(j, t, &q);
                if !m.get(t, j).is_zero() {
                    remainder_col = Some(j);
                }
            }
            if let Some(j) = remainder_col {
                m.swap_cols(t, j);
                v.swap_cols(t, j);
                continue 'reduce;
            }
            // column ops may have dirtied the pivot column; re-check
            if ((t + 1)..m.rows).any(|i| !m.get(i, t).is_zero()) {
                continue 'reduce;
            }
            // enforce divisibility of the remaining block by the pivot
            let mut fold = None;
            'scan: for i in (t + 1)..m.rows {
                for j in (t + 1)..m.cols {
                    if !(m.get(i, j) % m.get(t, t)).is_zero() {
                        fold = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = fold {
                // folding row i into row t lets the pivot gcd shrink
                let minus_one = BigInt::from(-1);
                m.row_sub(t, i, &minus_one);
                u.row_sub(t, i, &minus_one);
                continue 'reduce;
            }
            break;
        }
        if m.get(t, t).is_negative() {
            m.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let d = (0..steps).map(|i| m.get(i, i).clone()).collect();
    let result = SnfResult {
        d,
        u: u.to_sparse(),
        v: v.to_sparse(),
    };
    debug_assert!(result.verify_product(a), "smith normal form certificate");
    result
}

/// Exact determinant by Bareiss fraction-free elimination.
fn det_bareiss(a: &Dense) -> BigInt {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(swap) = ((k + 1)..n).find(|&r| !m.get(r, k).is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                m.set(i, j, num / &prev);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = m.get(k, k).clone();
    }
    sign * m.get(n - 1, n - 1).clone()
}

/// Exact integer determinant of a small matrix given by its columns.
pub fn det_int_columns(columns: &[Vec<i64>]) -> BigInt {
    let n = columns.len();
    let mut d = Dense::zero(n, n);
    for (c, col) in columns.iter().enumerate() {
        assert_eq!(col.len(), n, "determinant of a non-square matrix");
        for (r, &v) in col.iter().enumerate() {
            d.set(r, c, BigInt::from(v));
        }
    }
    det_bareiss(&d)
}

/// Rank by fraction-free Gaussian elimination; independent of the SNF path.
pub fn rank_bareiss(a: &SparseIntMatrix) -> usize {
    let mut m = a.to_dense();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        for i in (row + 1)..m.rows {
            for j in (col + 1)..m.cols {
                let num = m.get(i, j) * m.get(row, col) - m.get(i, col) * m.get(row, j);
                m.set(i, j, num / &prev);
            }
            m.set(i, col, BigInt::zero());
        }
        prev = m.get(row, col).clone();
        rank += 1;
        row += 1;
    }
    rank
}

/// Boundary matrix from `degree` to `degree - 1` under a filter, in canonical
/// basis order. Under `Relative`, boundary terms landing in `=` cells are
/// dropped.
pub fn boundary_matrix(cx: &CellComplex, degree: i64, filter: Filter) -> Result<SparseIntMatrix> {
    if degree < 0 || degree > cx.n as i64 + 2 {
        return Err(Error::UnknownDegree { degree, n: cx.n });
    }
    let col_basis = basis(cx, degree, filter);
    let row_basis = basis(cx, degree - 1, filter);
    let row_pos: HashMap<usize, usize> =
        row_basis.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut entries = Vec::new();
    for (j, &p) in col_basis.iter().enumerate() {
        for &(target, coeff) in cx.boundary_of(p) {
            if let Some(&i) = row_pos.get(&target) {
                entries.push((i, j, coeff));
            }
        }
    }
    Ok(SparseIntMatrix::from_i64(
        row_basis.len(),
        col_basis.len(),
        &entries,
    ))
}

/// A finitely generated abelian group: free rank and divisor-chain torsion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Homology of the filtered complex at one degree, from the SNF of the two
/// adjacent boundary matrices. Degree-0 reporting is unreduced.
pub fn homology_group(cx: &CellComplex, degree: i64, filter: Filter) -> Result<HomologyGroup> {
    let cells = basis(cx, degree, filter).len();
    let out = boundary_matrix(cx, degree, filter)?;
    let inc = boundary_matrix(cx, degree + 1, filter)?;
    let snf_out = smith_normal_form(&out);
    let snf_in = smith_normal_form(&inc);
    let free_rank = cells - snf_out.rank() - snf_in.rank();
    Ok(HomologyGroup {
        free_rank,
        torsion: snf_in.torsion(),
    })
}

/// Coordinates of a chain in the filter basis of its degree.
///
/// Terms outside the basis are rejected for `EqOnly` and `All` (they are not
/// chains of that complex) but projected away for `Relative`, which is a
/// quotient; terms on empty index cells vanish everywhere.
pub fn chain_to_vector(cx: &CellComplex, c: &IntChain, filter: Filter) -> Result<Vec<BigInt>> {
    let b = basis(cx, c.degree(), filter);
    let pos: HashMap<usize, usize> = b.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut out = vec![BigInt::zero(); b.len()];
    for ((cell, tau), &coeff) in c.iter() {
        let p = cx
            .position(cell, *tau)
            .ok_or_else(|| Error::OutOfRange(format!("cell not in complex: {cell:?}")))?;
        match pos.get(&p) {
            Some(&i) => out[i] = BigInt::from(coeff),
            None => {
                let quotiented = filter == Filter::Relative && cell.rel == Rel::Eq;
                if !quotiented && !is_empty_cell(cell, *tau) {
                    return Err(Error::OutOfRange(format!(
                        "term outside the {filter:?} complex: {cell:?}"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Whether the chain is a cycle of the filtered complex.
pub fn is_cycle(cx: &CellComplex, c: &IntChain, filter: Filter) -> Result<bool> {
    let vec = chain_to_vector(cx, c, filter)?;
    let m = boundary_matrix(cx, c.degree(), filter)?;
    Ok(m.mul_vec(&vec).iter().all(|x| x.is_zero()))
}

/// Whether `∂x = c` is solvable over the integers, decided through the SNF
/// transforms of the incoming boundary matrix. Rejects non-cycles.
pub fn is_boundary(cx: &CellComplex, c: &IntChain, filter: Filter) -> Result<bool> {
    if !is_cycle(cx, c, filter)? {
        return Err(Error::NotACycle);
    }
    let vec = chain_to_vector(cx, c, filter)?;
    let b = boundary_matrix(cx, c.degree() + 1, filter)?;
    let snf = smith_normal_form(&b);
    let y = snf.u.mul_vec(&vec);
    for (i, yi) in y.iter().enumerate() {
        let d = snf.d.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !yi.is_zero() {
                return Ok(false);
            }
        } else if !(yi % &d).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of the span of the homology classes of the given cycles:
/// `rank [B | C] - rank B` with `B` the incoming boundary image.
pub fn class_rank(cx: &CellComplex, cycles: &[IntChain], filter: Filter) -> Result<usize> {
    let Some(first) = cycles.first() else {
        return Ok(0);
    };
    let degree = first.degree();
    for c in cycles {
        if c.degree() != degree {
            return Err(Error::MixedDegree {
                expected: degree,
                got: c.degree(),
            });
        }
        if !is_cycle(cx, c, filter)? {
            return Err(Error::NotACycle);
        }
    }
    let b = boundary_matrix(cx, degree + 1, filter)?;
    let mut entries = b.entries.clone();
    for (j, c) in cycles.iter().enumerate() {
        let vec = chain_to_vector(cx, c, filter)?;
        for (i, v) in vec.into_iter().enumerate() {
            if !v.is_zero() {
                entries.push((i, b.cols + j, v));
            }
        }
    }
    let combined = SparseIntMatrix::from_triplets(b.rows, b.cols + cycles.len(), entries);
    Ok(rank_bareiss(&combined) - rank_bareiss(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{boundary_chain, cell_degree, top_generators};
    use crate::combinatorics::{CellIndex, FlagChain, SubsetMask};
    use proptest::prelude::*;

    #[test]
    fn snf_frozen_examples() {
        let a = SparseIntMatrix::from_i64(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.d, vec![BigInt::from(2), BigInt::from(4)]);
        assert!(snf.verify(&a));

        let z = SparseIntMatrix::zero(3, 2);
        let snf = smith_normal_form(&z);
        assert!(snf.d.iter().all(|x| x.is_zero()));
        assert!(snf.verify(&z));

        let id = SparseIntMatrix::from_i64(3, 3, &[(0, 0, 1), (1, 1, 1), (2, 2, 1)]);
        let snf = smith_normal_form(&id);
        assert!(snf.d.iter().all(|x| x.is_one()));
        assert!(snf.verify(&id));
    }

    #[test]
    fn boundary_matrices_compose_to_zero() {
        for n in 0..=2usize {
            let cx = CellComplex::build(n);
            for filter in [Filter::EqOnly, Filter::Relative, Filter::All] {
                for degree in 1..=(n as i64 + 2) {
                    let b1 = boundary_matrix(&cx, degree - 1, filter).unwrap();
                    let b2 = boundary_matrix(&cx, degree, filter).unwrap();
                    assert!(b1.mul(&b2).is_zero(), "n={n} degree={degree} {filter:?}");
                }
            }
        }
    }

    #[test]
    fn all_matrix_assembles_from_blocks() {
        let cx = CellComplex::build(1);
        for degree in 0..=3i64 {
            let all = boundary_matrix(&cx, degree, Filter::All).unwrap();
            let eq = boundary_matrix(&cx, degree, Filter::EqOnly).unwrap();
            let rel = boundary_matrix(&cx, degree, Filter::Relative).unwrap();
            assert_eq!(all.rows, eq.rows + rel.rows);
            assert_eq!(all.cols, eq.cols + rel.cols);

            let eq_rows = basis(&cx, degree - 1, Filter::EqOnly);
            let le_rows = basis(&cx, degree - 1, Filter::Relative);
            let eq_cols = basis(&cx, degree, Filter::EqOnly);
            let le_cols = basis(&cx, degree, Filter::Relative);
            let all_rows = basis(&cx, degree - 1, Filter::All);
            let all_cols = basis(&cx, degree, Filter::All);
            let mut rowmap = HashMap::new();
            for (i, &p) in eq_rows.iter().enumerate() {
                rowmap.insert(p, i);
            }
            for (i, &p) in le_rows.iter().enumerate() {
                rowmap.insert(p, eq_rows.len() + i);
            }
            let mut colmap = HashMap::new();
            for (j, &p) in eq_cols.iter().enumerate() {
                colmap.insert(p, j);
            }
            for (j, &p) in le_cols.iter().enumerate() {
                colmap.insert(p, eq_cols.len() + j);
            }
            // permuted to (eq block | le block) order the matrix must be
            // [[eq, X], [0, rel]]
            let mut seen_eq = 0usize;
            let mut seen_rel = 0usize;
            for (r, c, v) in &all.entries {
                let pr = rowmap[&all_rows[*r]];
                let pc = colmap[&all_cols[*c]];
                if pc < eq_cols.len() {
                    assert!(pr < eq_rows.len(), "eq column hits a le row");
                    assert!(eq
                        .entries
                        .iter()
                        .any(|(er, ec, ev)| *er == pr && *ec == pc && ev == v));
                    seen_eq += 1;
                } else if pr >= eq_rows.len() {
                    assert!(rel
                        .entries
                        .iter()
                        .any(|(er, ec, ev)| *er == pr - eq_rows.len()
                            && *ec == pc - eq_cols.len()
                            && ev == v));
                    seen_rel += 1;
                }
            }
            assert_eq!(seen_eq, eq.nnz());
            assert_eq!(seen_rel, rel.nnz());
        }
    }

    #[test]
    fn eq_degree_one_columns_are_pm_tau() {
        // n=1: every degree-1 Eq basis cell has tau = ±1
        let cx = CellComplex::build(1);
        let m = boundary_matrix(&cx, 1, Filter::EqOnly).unwrap();
        let count = basis(&cx, 1, Filter::EqOnly)
            .iter()
            .filter(|&&p| cx.cells[p].1 != 0)
            .count();
        assert_eq!(m.cols, count);
    }

    #[test]
    fn snf_certificate_on_boundary_matrices() {
        let cx = CellComplex::build(2);
        for degree in 0..=4i64 {
            for filter in [Filter::EqOnly, Filter::Relative, Filter::All] {
                let m = boundary_matrix(&cx, degree, filter).unwrap();
                let snf = smith_normal_form(&m);
                assert!(snf.verify(&m), "certificate fails deg {degree} {filter:?}");
            }
        }
    }

    #[test]
    fn homology_connected_eq_n1() {
        let cx = CellComplex::build(1);
        let h0 = homology_group(&cx, 0, Filter::EqOnly).unwrap();
        assert_eq!(h0.free_rank, 1);
        assert!(h0.torsion.is_empty());

        // independent connectivity oracle: union-find over boundary incidences
        let cells: Vec<usize> = (0..cx.len())
            .filter(|&p| {
                let (cell, tau) = &cx.cells[p];
                cell.rel == Rel::Eq && !is_empty_cell(cell, *tau)
            })
            .collect();
        let index: HashMap<usize, usize> = cells.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut parent: Vec<usize> = (0..cells.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for &p in &cells {
            for &(q, _) in cx.boundary_of(p) {
                if let Some(&qi) = index.get(&q) {
                    let a = find(&mut parent, index[&p]);
                    let b = find(&mut parent, qi);
                    parent[a] = b;
                }
            }
        }
        let comps: std::collections::BTreeSet<usize> =
            (0..cells.len()).map(|i| find(&mut parent, i)).collect();
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn relative_top_rank_at_least_three() {
        let cx = CellComplex::build(1);
        let h2 = homology_group(&cx, 2, Filter::Relative).unwrap();
        assert!(h2.free_rank >= 3, "got {}", h2.free_rank);
    }

    #[test]
    fn eq_generator_degree_torsion_free() {
        for n in 1..=2usize {
            let cx = CellComplex::build(n);
            let h = homology_group(&cx, n as i64, Filter::EqOnly).unwrap();
            assert!(h.torsion.is_empty());
        }
        // n = 3: torsion of the generator degree comes from the incoming
        // matrix alone
        let cx = CellComplex::build(3);
        let inc = boundary_matrix(&cx, 4, Filter::EqOnly).unwrap();
        assert!(smith_normal_form(&inc).torsion().is_empty());
    }

    #[test]
    fn generator_cycles_and_membership() {
        for n in 1..=2usize {
            let cx = CellComplex::build(n);
            let gens = top_generators(n).unwrap();
            for (set, e) in &gens.absolute {
                assert!(is_cycle(&cx, e, Filter::EqOnly).unwrap(), "e_{set:?}");
                assert!(is_cycle(&cx, e, Filter::All).unwrap());
                assert!(!is_boundary(&cx, e, Filter::EqOnly).unwrap(), "e_{set:?}");
                let rel = &gens.relative[set];
                assert!(is_cycle(&cx, rel, Filter::Relative).unwrap());
                assert!(is_boundary(&cx, &boundary_chain(rel), Filter::All).unwrap());
            }
        }
    }

    #[test]
    fn single_le_cell_not_a_cycle() {
        let cx = CellComplex::build(1);
        let cell = CellIndex::new(
            FlagChain::new(vec![SubsetMask::from_labels(&[1])]).unwrap(),
            SubsetMask::EMPTY,
            SubsetMask::from_labels(&[2]),
            Rel::Le,
        )
        .unwrap();
        let mut c = IntChain::zero(cell_degree(&cell, 1));
        c.add_term(cell, 1, 1);
        assert!(!is_cycle(&cx, &c, Filter::All).unwrap());
        // zero chain is a boundary
        let zero = IntChain::zero(1);
        assert!(is_boundary(&cx, &zero, Filter::All).unwrap());
    }

    #[test]
    fn class_ranks_small() {
        for (n, expect) in [(1usize, 3usize), (2, 7)] {
            let cx = CellComplex::build(n);
            let gens = top_generators(n).unwrap();
            let absolute: Vec<IntChain> = gens.absolute.values().cloned().collect();
            assert_eq!(class_rank(&cx, &absolute, Filter::EqOnly).unwrap(), expect);
            let relative: Vec<IntChain> = gens.relative.values().cloned().collect();
            assert_eq!(
                class_rank(&cx, &relative, Filter::Relative).unwrap(),
                expect
            );
        }
    }

    #[test]
    fn unknown_degree_rejected() {
        let cx = CellComplex::build(1);
        assert!(boundary_matrix(&cx, -1, Filter::All).is_err());
        assert!(boundary_matrix(&cx, 4, Filter::All).is_err());
    }

    #[test]
    fn matrix_text_format() {
        let m = SparseIntMatrix::from_i64(2, 3, &[(1, 0, -4), (0, 2, 7)]);
        assert_eq!(m.to_text(), "2 3 2\n1 3 7\n2 1 -4\n");
    }

    proptest! {
        /// SNF rank agrees with the fraction-free elimination oracle, and the
        /// certificate holds, on random small matrices.
        #[test]
        fn snf_matches_bareiss_rank(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in proptest::collection::vec(-9i64..=9, 36),
        ) {
            let mut entries: Vec<(usize, usize, i64)> = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    entries.push((r, c, seed[r * 6 + c]));
                }
            }
            let m = SparseIntMatrix::from_i64(rows, cols, &entries);
            let snf = smith_normal_form(&m);
            prop_assert!(snf.verify(&m));
            prop_assert_eq!(snf.rank(), rank_bareiss(&m));
        }
    }
}
