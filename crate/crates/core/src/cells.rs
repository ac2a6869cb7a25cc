//! The graded cellular chain complex: degrees, the boundary operator, grouped
//! cells, cube chains and the explicit generator chains.
//!
//! Chains are finitely supported integer combinations of `(CellIndex, tau)`
//! pairs of a single degree, stored sparsely in canonical order. All
//! arithmetic is exact.

use crate::combinatorics::{
    enumerate_cells, enumerate_group, position_in_complement, pow_neg_one, CellIndex, FlagChain,
    Rel, SubsetMask, Tau,
};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A finitely supported integer combination of cells of one degree.
#[derive(Clone, PartialEq, Eq)]
pub struct IntChain {
    degree: i64,
    terms: BTreeMap<(CellIndex, Tau), i64>,
}

impl IntChain {
    pub fn zero(degree: i64) -> Self {
        IntChain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, cell: &CellIndex, tau: Tau) -> i64 {
        *self.terms.get(&(cell.clone(), tau)).unwrap_or(&0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(CellIndex, Tau), &i64)> {
        self.terms.iter()
    }

    /// Adds `coeff * (cell, tau)`; zero coefficients are never stored.
    ///
    /// Panics if the cell's degree does not match the chain's degree: chains
    /// are degree-homogeneous by construction.
    pub fn add_term(&mut self, cell: CellIndex, tau: Tau, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let d = cell_degree(&cell, tau);
        assert_eq!(
            d, self.degree,
            "degree mismatch: cell {cell:?} tau {tau} has degree {d}, chain has {}",
            self.degree
        );
        match self.terms.entry((cell, tau)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &IntChain) {
        assert_eq!(self.degree, other.degree, "degree mismatch in chain sum");
        for ((cell, tau), &c) in other.terms.iter() {
            match self.terms.entry((cell.clone(), *tau)) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if *e.get() == 0 {
                        e.remove();
                    }
                }
            }
        }
    }

    #[must_use]
    pub fn scaled(&self, factor: i64) -> IntChain {
        if factor == 0 {
            return IntChain::zero(self.degree);
        }
        IntChain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    #[must_use]
    pub fn plus(&self, other: &IntChain) -> IntChain {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    #[must_use]
    pub fn minus(&self, other: &IntChain) -> IntChain {
        self.plus(&other.scaled(-1))
    }
}

impl fmt::Debug for IntChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (degree {})", self.degree);
        }
        for (i, ((cell, tau), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c:+}·e^{tau}{cell:?}")?;
        }
        Ok(())
    }
}

/// Dimension of the cell `e_i^tau`: the flag spans a (k-1)-simplex, the cone
/// contributes `|J_i| + |tau|` directions, and the `=` relation cuts one.
pub fn cell_degree(i: &CellIndex, tau: Tau) -> i64 {
    let base = (i.flag.len() as i64 - 1) + i.j_set().len() as i64 + tau.unsigned_abs() as i64;
    match i.rel {
        Rel::Le => base,
        Rel::Eq => base - 1,
    }
}

/// A cell index addresses the empty set precisely when the relation is `=`
/// and the cone is reduced to the origin.
pub fn is_empty_cell(i: &CellIndex, tau: Tau) -> bool {
    i.rel == Rel::Eq && tau == 0 && i.j_set().is_empty()
}

/// The boundary of a single cell.
///
/// Faces are: the `tau = 0` wall, the `=` face (only for `≤` cells), one face
/// per direction label, and the flag-removal faces. Removing the only flag
/// entry yields no face.
pub fn boundary_cell(i: &CellIndex, tau: Tau) -> IntChain {
    let mut out = IntChain::zero(cell_degree(i, tau) - 1);
    let j_len = i.j_set().len();
    let t = tau.unsigned_abs() as usize;
    let delta_le = usize::from(i.rel == Rel::Le);

    if t == 1 {
        out.add_term(i.clone(), 0, pow_neg_one(j_len));
    }
    if i.rel == Rel::Le {
        let mut face = i.clone();
        face.rel = Rel::Eq;
        out.add_term(face, tau, pow_neg_one(j_len + t));
    }
    for j in i.j_set().labels() {
        let face = CellIndex {
            flag: i.flag.clone(),
            j_le: i.j_le.without(j),
            j_ge: i.j_ge.without(j),
            rel: i.rel,
        };
        let n_i = position_in_complement(i, j).expect("j ranges over J_i");
        out.add_term(face, tau, pow_neg_one(n_i - 1));
    }
    let lead = pow_neg_one(j_len + t + delta_le + 1);
    for j in 1..=i.flag.len() {
        if let Some(flag) = i.flag.without_entry(j) {
            let face = CellIndex {
                flag,
                j_le: i.j_le,
                j_ge: i.j_ge,
                rel: i.rel,
            };
            out.add_term(face, tau, lead * pow_neg_one(j - 1));
        }
    }
    out
}

/// Boundary extended linearly to chains.
pub fn boundary_chain(c: &IntChain) -> IntChain {
    let mut out = IntChain::zero(c.degree() - 1);
    for ((cell, tau), &coeff) in c.iter() {
        out.add_assign(&boundary_cell(cell, *tau).scaled(coeff));
    }
    out
}

/// The grouped cell of an extended index, where `j_le` and `j_ge` may overlap:
/// the overlap is distributed over all partitions `A ⊔ B`, each disjoint term
/// contributing `(-1)^{|A|-1} (e^{+1} - e^{-1})`.
pub fn grouped_cell(flag: &FlagChain, j_le: SubsetMask, j_ge: SubsetMask, rel: Rel) -> IntChain {
    let top = flag.top();
    assert!(
        j_le.intersection(top).is_empty() && j_ge.intersection(top).is_empty(),
        "direction sets must avoid the top set"
    );
    let overlap = j_le.intersection(j_ge);
    let le_only = j_le.difference(overlap);
    let ge_only = j_ge.difference(overlap);
    let degree =
        (flag.len() as i64 - 1) + j_le.union(j_ge).len() as i64 + 1 - i64::from(rel == Rel::Eq);
    let mut out = IntChain::zero(degree);
    let mut a_bits = overlap.0;
    loop {
        let a = SubsetMask(a_bits);
        let b = overlap.difference(a);
        let coeff = pow_neg_one(a.len() + 1); // (-1)^{|A| - 1}
        let cell = CellIndex {
            flag: flag.clone(),
            j_le: le_only.union(a),
            j_ge: ge_only.union(b),
            rel,
        };
        out.add_term(cell.clone(), 1, coeff);
        out.add_term(cell, -1, -coeff);
        if a_bits == 0 {
            break;
        }
        a_bits = (a_bits - 1) & overlap.0;
    }
    out
}

/// The cube chain `e_{K1,K2,rel}`: signed sum of grouped cells over the group
/// index set. Empty (but of well-defined degree) when the index set is empty.
pub fn cube_chain(n: usize, k1: SubsetMask, k2: SubsetMask, rel: Rel) -> Result<IntChain> {
    if k1.is_empty() || k2.is_empty() {
        return Err(Error::EmptySubset);
    }
    let degree = (n as i64 + 2) - k1.len() as i64 - i64::from(rel == Rel::Eq);
    let mut out = IntChain::zero(degree);
    for g in enumerate_group(n, k1, k2, rel) {
        let j_le = k2.complement(n);
        let j_ge = g.flag.top().complement(n);
        let sign = crate::combinatorics::group_sign(&g);
        out.add_assign(&grouped_cell(&g.flag, j_le, j_ge, rel).scaled(sign));
    }
    Ok(out)
}

fn check_level(labels: &[usize], level: usize) -> Result<usize> {
    let m = labels.len();
    if m == 0 {
        return Err(Error::EmptySubset);
    }
    if !labels.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::OutOfRange("labels must be strictly sorted".into()));
    }
    if level < 1 || level > m {
        return Err(Error::InvalidLevel { level, size: m });
    }
    Ok(m)
}

/// The level-`level` generator chain of the sorted label set `I`:
/// `Σ_{k=level}^m τ_k^{m,m-level} · e_{{i_1,...,i_{level-1},i_k}, I, rel}`.
pub fn generator_level(n: usize, labels: &[usize], level: usize, rel: Rel) -> Result<IntChain> {
    let m = check_level(labels, level)?;
    let j = m - level;
    let mut out = IntChain::zero((n as i64 + 2) - level as i64 - i64::from(rel == Rel::Eq));
    let k2 = SubsetMask::from_labels(labels);
    for k in level..=m {
        let mut k1 = SubsetMask::from_labels(&labels[..level - 1]);
        k1 = k1.with(labels[k - 1]);
        let tau = crate::combinatorics::tau_sign(labels, m, j, k)?;
        out.add_assign(&cube_chain(n, k1, k2, rel)?.scaled(tau));
    }
    Ok(out)
}

/// The Mayer-Vietoris split `e_{I,level} = u + v` at levels below the top:
/// `u` is the single cube whose start set is an initial segment of `I`.
pub fn split_uv(n: usize, labels: &[usize], level: usize) -> Result<(IntChain, IntChain)> {
    let m = check_level(labels, level)?;
    if level == m {
        return Err(Error::InvalidLevel { level, size: m });
    }
    let j = m - level;
    let k1 = SubsetMask::from_labels(&labels[..level]);
    let k2 = SubsetMask::from_labels(labels);
    let tau = crate::combinatorics::tau_sign(labels, m, j, level)?;
    let u = cube_chain(n, k1, k2, Rel::Eq)?.scaled(tau);
    let v = generator_level(n, labels, level, Rel::Eq)?.minus(&u);
    Ok((u, v))
}

/// The sub-chain supported on cells lying inside the sphere `S_j`, i.e. cells
/// whose first flag entry contains `j`. Input cells should carry `rel = Eq`;
/// only those lie inside the sphere union.
pub fn part_in_sphere(c: &IntChain, j: usize) -> IntChain {
    let mut out = IntChain::zero(c.degree());
    for ((cell, tau), &coeff) in c.iter() {
        debug_assert_eq!(cell.rel, Rel::Eq, "part_in_sphere expects Eq cells");
        if cell.flag.first().contains(j) {
            out.add_term(cell.clone(), *tau, coeff);
        }
    }
    out
}

/// Iterated boundary `∂_{i_m} ∘ ... ∘ ∂_{i_1}` applied to a relative chain:
/// each step takes the boundary and keeps the part inside the next sphere.
pub fn iterated_boundary(c: &IntChain, labels: &[usize]) -> IntChain {
    let mut cur = c.clone();
    for &j in labels {
        cur = part_in_sphere(&boundary_chain(&cur), j);
    }
    cur
}

/// The full family of generator chains for one arrangement.
pub struct GeneratorSet {
    pub n: usize,
    /// `e_I`, cycles in the sphere union (rel = Eq), keyed by `I`.
    pub absolute: BTreeMap<SubsetMask, IntChain>,
    /// The relative chains bounded by them (rel = Le), keyed by `I`.
    pub relative: BTreeMap<SubsetMask, IntChain>,
}

/// All generator chains `e_I` and their relative counterparts, including the
/// `(-1)^{min I - 1}` prefactor.
pub fn top_generators(n: usize) -> Result<GeneratorSet> {
    let mut absolute = BTreeMap::new();
    let mut relative = BTreeMap::new();
    for bits in 1..=SubsetMask::full(n).0 {
        let set = SubsetMask(bits);
        let labels = set.labels();
        let pref = pow_neg_one(set.min_label().unwrap() + 1);
        absolute.insert(set, generator_level(n, &labels, 1, Rel::Eq)?.scaled(pref));
        relative.insert(set, generator_level(n, &labels, 1, Rel::Le)?.scaled(pref));
    }
    Ok(GeneratorSet {
        n,
        absolute,
        relative,
    })
}

/// The whole complex for one `n`, with cells interned in canonical order and
/// per-cell boundaries expressed through indices. Basis of all matrix work.
pub struct CellComplex {
    pub n: usize,
    pub cells: Vec<(CellIndex, Tau)>,
    index: HashMap<(CellIndex, Tau), usize>,
    boundaries: Vec<Vec<(usize, i64)>>,
}

impl CellComplex {
    pub fn build(n: usize) -> Self {
        let cells = enumerate_cells(n);
        let index: HashMap<(CellIndex, Tau), usize> = cells
            .iter()
            .enumerate()
            .map(|(p, c)| (c.clone(), p))
            .collect();
        let boundaries = cells
            .iter()
            .map(|(cell, tau)| {
                let mut terms: Vec<(usize, i64)> = boundary_cell(cell, *tau)
                    .iter()
                    .map(|((c, t), &v)| (index[&(c.clone(), *t)], v))
                    .collect();
                terms.sort_unstable();
                terms
            })
            .collect();
        CellComplex {
            n,
            cells,
            index,
            boundaries,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn position(&self, cell: &CellIndex, tau: Tau) -> Option<usize> {
        self.index.get(&(cell.clone(), tau)).copied()
    }

    pub fn degree_of(&self, pos: usize) -> i64 {
        let (cell, tau) = &self.cells[pos];
        cell_degree(cell, *tau)
    }

    pub fn boundary_of(&self, pos: usize) -> &[(usize, i64)] {
        &self.boundaries[pos]
    }

    /// Count of index cells per formal degree, canonically ordered.
    pub fn cells_per_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for pos in 0..self.cells.len() {
            *out.entry(self.degree_of(pos)).or_insert(0) += 1;
        }
        out
    }
}
