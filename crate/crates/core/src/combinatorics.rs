//! Index sets and the sign calculus of the cell complex.
//!
//! Labels are 1-based elements of `{1, ..., n+1}`, matching the sphere indices.
//! Cells are addressed by a strictly increasing flag of nonempty subsets, two
//! disjoint direction sets inside the complement of the flag's top set, a
//! relation tag and a cone sign `tau`. All enumerations are deterministic and
//! sorted in the canonical order (flag length, flag masks, j_le, j_ge, rel, tau).

use crate::{Error, Result};
use std::fmt;

/// Sign of the `v`-ray of a cone, one of -1, 0, +1.
pub type Tau = i8;

/// The three values of `tau` in canonical order.
pub const TAUS: [Tau; 3] = [-1, 0, 1];

/// A subset of the labels `{1, ..., n+1}` stored as a bitmask.
///
/// Bit `l - 1` is set iff label `l` is in the subset; only the low `n+1` bits
/// may be used. The natural integer order on masks is the canonical order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The full set `{1, ..., n+1}`.
    pub fn full(n: usize) -> Self {
        SubsetMask((1u32 << (n + 1)) - 1)
    }

    pub fn singleton(label: usize) -> Self {
        debug_assert!(label >= 1);
        SubsetMask(1 << (label - 1))
    }

    pub fn from_labels(labels: &[usize]) -> Self {
        labels.iter().fold(SubsetMask::EMPTY, |m, &l| m.with(l))
    }

    pub fn contains(self, label: usize) -> bool {
        label >= 1 && self.0 & (1 << (label - 1)) != 0
    }

    #[must_use]
    pub fn with(self, label: usize) -> Self {
        SubsetMask(self.0 | (1 << (label - 1)))
    }

    #[must_use]
    pub fn without(self, label: usize) -> Self {
        SubsetMask(self.0 & !(1 << (label - 1)))
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest label, if any.
    pub fn min_label(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Labels in ascending order.
    pub fn labels(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut bits = self.0;
        while bits != 0 {
            let l = bits.trailing_zeros() as usize + 1;
            out.push(l);
            bits &= bits - 1;
        }
        out
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// A strictly increasing chain `I_1 ⊊ ... ⊊ I_k` of nonempty subsets.
///
/// Ordered by (length, masks); this is the first component of the canonical
/// cell order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FlagChain {
    subsets: Vec<SubsetMask>,
}

impl FlagChain {
    pub fn new(subsets: Vec<SubsetMask>) -> Result<Self> {
        if subsets.is_empty() {
            return Err(Error::EmptySubset);
        }
        if subsets[0].is_empty() {
            return Err(Error::EmptySubset);
        }
        for w in subsets.windows(2) {
            if !(w[0].is_subset_of(w[1]) && w[0] != w[1]) {
                return Err(Error::OutOfRange(format!(
                    "flag not strictly increasing: {:?} then {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FlagChain { subsets })
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> SubsetMask {
        self.subsets[0]
    }

    pub fn top(&self) -> SubsetMask {
        *self.subsets.last().unwrap()
    }

    pub fn subsets(&self) -> &[SubsetMask] {
        &self.subsets
    }

    /// Flag with the `j`-th entry removed (1-based). `None` if that would
    /// empty the flag.
    pub fn without_entry(&self, j: usize) -> Option<FlagChain> {
        if self.subsets.len() <= 1 {
            return None;
        }
        let mut subsets = self.subsets.clone();
        subsets.remove(j - 1);
        Some(FlagChain { subsets })
    }

    /// Flag extended on top by `top`; caller guarantees `self.top() ⊊ top`.
    pub fn extended(&self, top: SubsetMask) -> FlagChain {
        let mut subsets = self.subsets.clone();
        subsets.push(top);
        FlagChain { subsets }
    }
}

impl PartialOrd for FlagChain {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FlagChain {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.subsets
            .len()
            .cmp(&other.subsets.len())
            .then_with(|| self.subsets.cmp(&other.subsets))
    }
}

impl fmt::Debug for FlagChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.subsets.iter().enumerate() {
            if i > 0 {
                write!(f, "⊂")?;
            }
            write!(f, "{s:?}")?;
        }
        write!(f, ")")
    }
}

/// The relation tag of a cell: `≤` for the solid (relative) cells, `=` for
/// the cells inside the sphere union.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rel {
    Le,
    Eq,
}

/// Address of one cell family: flag, direction sets and relation tag.
///
/// Base indices keep `j_le` and `j_ge` disjoint; overlapping pairs are only
/// ever expanded through the partition sum in [`crate::cells::grouped_cell`],
/// never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIndex {
    pub flag: FlagChain,
    pub j_le: SubsetMask,
    pub j_ge: SubsetMask,
    pub rel: Rel,
}

impl CellIndex {
    pub fn new(flag: FlagChain, j_le: SubsetMask, j_ge: SubsetMask, rel: Rel) -> Result<Self> {
        let top = flag.top();
        if !j_le.intersection(top).is_empty() || !j_ge.intersection(top).is_empty() {
            return Err(Error::OutOfRange(
                "direction sets must avoid the flag's top set".into(),
            ));
        }
        if !j_le.intersection(j_ge).is_empty() {
            return Err(Error::OutOfRange(
                "j_le and j_ge must be disjoint in a base index".into(),
            ));
        }
        Ok(CellIndex {
            flag,
            j_le,
            j_ge,
            rel,
        })
    }

    /// `J_i = J_≤ ∪ J_≥`.
    pub fn j_set(&self) -> SubsetMask {
        self.j_le.union(self.j_ge)
    }

    /// `min I_1`, the sphere whose equation cuts the cell.
    pub fn base_label(&self) -> usize {
        self.flag.first().min_label().unwrap()
    }
}

impl fmt::Debug for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}|le{:?}|ge{:?}|{}",
            self.flag,
            self.j_le,
            self.j_ge,
            match self.rel {
                Rel::Le => "≤",
                Rel::Eq => "=",
            }
        )
    }
}

/// Index of one summand of a cube chain: a flag growing from `k1` one element
/// at a time inside `k2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupIndex {
    pub n: usize,
    pub k1: SubsetMask,
    pub k2: SubsetMask,
    pub rel: Rel,
    pub flag: FlagChain,
}

impl GroupIndex {
    /// `J_i = {1,...,n+1} ∖ I_k`.
    pub fn j_set(&self) -> SubsetMask {
        self.flag.top().complement(self.n)
    }
}

/// A permutation of `{1, ..., n+1}` given by its images, together with its
/// parity computed by inversion counting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedPermutation {
    pub images: Vec<usize>,
    pub parity: i64,
}

impl SignedPermutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &x in &images {
            if x < 1 || x > m || seen[x] {
                return Err(Error::OutOfRange(format!("not a bijection: {images:?}")));
            }
            seen[x] = true;
        }
        let mut inversions = 0usize;
        for a in 0..m {
            for b in a + 1..m {
                if images[a] > images[b] {
                    inversions += 1;
                }
            }
        }
        let parity = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Ok(SignedPermutation { images, parity })
    }
}

/// Every strictly increasing chain of nonempty subsets of `{1, ..., n+1}`,
/// sorted canonically, without duplicates.
pub fn enumerate_flags(n: usize) -> Vec<FlagChain> {
    let full = SubsetMask::full(n);
    let mut out = Vec::new();
    let mut stack: Vec<Vec<SubsetMask>> = Vec::new();
    for bits in 1..=full.0 {
        stack.push(vec![SubsetMask(bits)]);
    }
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        // extend by any strict superset inside the full set
        let rest = top.complement(n);
        let mut sub = rest.0;
        loop {
            if sub != 0 {
                let ext = SubsetMask(top.0 | sub);
                let mut next = chain.clone();
                next.push(ext);
                stack.push(next);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest.0;
        }
        out.push(FlagChain { subsets: chain });
    }
    out.sort();
    out
}

/// All `(CellIndex, tau)` pairs of the base index set, canonically sorted.
///
/// This enumerates the full index set; the few indices whose cell is the
/// empty set (`rel = Eq`, no directions, `tau = 0`) are included, mirroring
/// the formal count `Σ_flags 3^{|complement|} · 6`.
pub fn enumerate_cells(n: usize) -> Vec<(CellIndex, Tau)> {
    let mut out = Vec::new();
    for flag in enumerate_flags(n) {
        let comp = flag.top().complement(n).labels();
        // each complement label goes to j_le, j_ge or neither
        let assignments = 3usize.pow(comp.len() as u32);
        for a in 0..assignments {
            let mut code = a;
            let mut j_le = SubsetMask::EMPTY;
            let mut j_ge = SubsetMask::EMPTY;
            for &l in &comp {
                match code % 3 {
                    1 => j_le = j_le.with(l),
                    2 => j_ge = j_ge.with(l),
                    _ => {}
                }
                code /= 3;
            }
            for rel in [Rel::Le, Rel::Eq] {
                for tau in TAUS {
                    out.push((
                        CellIndex {
                            flag: flag.clone(),
                            j_le,
                            j_ge,
                            rel,
                        },
                        tau,
                    ));
                }
            }
        }
    }
    out.sort();
    out
}

/// The index set of a cube chain: all flags starting at `k1` and growing one
/// element at a time inside `k2`. Empty unless both sets are nonempty and
/// `k1 ⊆ k2`.
pub fn enumerate_group(n: usize, k1: SubsetMask, k2: SubsetMask, rel: Rel) -> Vec<GroupIndex> {
    let mut out = Vec::new();
    if k1.is_empty() || k2.is_empty() || !k1.is_subset_of(k2) {
        return out;
    }
    let mut stack = vec![vec![k1]];
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        for l in k2.difference(top).labels() {
            let mut next = chain.clone();
            next.push(top.with(l));
            stack.push(next);
        }
        out.push(GroupIndex {
            n,
            k1,
            k2,
            rel,
            flag: FlagChain { subsets: chain },
        });
    }
    out.sort();
    out
}

/// `n_i(j)`: the 1-based rank of `j` inside `J_i = j_le ∪ j_ge` under the
/// natural order.
pub fn position_in_complement(i: &CellIndex, j: usize) -> Result<usize> {
    let js = i.j_set();
    if !js.contains(j) {
        return Err(Error::LabelNotInSet(j));
    }
    Ok(rank_in_mask(js, j))
}

fn rank_in_mask(mask: SubsetMask, j: usize) -> usize {
    let below = mask.0 & ((1u32 << (j - 1)) - 1);
    below.count_ones() as usize + 1
}

/// `N(j)`: the number of elements of `{1, ..., n+1} ∖ k1` smaller than `j`.
/// Rejects `j ∈ k1`.
pub fn count_smaller(k1: SubsetMask, j: usize) -> Result<usize> {
    if k1.contains(j) {
        return Err(Error::LabelInSet(j));
    }
    let below = (1u32 << (j - 1)) - 1;
    Ok((below & !k1.0).count_ones() as usize)
}

/// The permutation assigned to a cube-chain summand by the sign construction:
/// the labels outside `I_k ∖ K_1` in ascending order, followed by the growth
/// elements `I_2∖I_1, ..., I_k∖I_{k-1}` in flag order.
pub fn group_permutation(g: &GroupIndex) -> SignedPermutation {
    let full = SubsetMask::full(g.n);
    let fixed = full.difference(g.flag.top().difference(g.k1));
    let mut images = fixed.labels();
    for w in g.flag.subsets().windows(2) {
        let grown = w[1].difference(w[0]);
        images.push(grown.min_label().unwrap());
    }
    SignedPermutation::new(images).expect("group flags always yield a bijection")
}

/// The sign of a cube-chain summand.
///
/// Anchored at the one-entry flag with `sgn((K_1)) = (-1)^{|K_1|-1}` and
/// extended along the flag by the growth identity
/// `sgn(i·j) = (-1)^{|J_{i·j}| + k - n_i(j)} · sgn(i)`; the `≤` variant
/// carries the extra factor `(-1)^{|J_i|+1}`. Up to one global sign per
/// `(K_2, rel)` family this is the unique assignment satisfying all four
/// cancellation identities, which are tested exhaustively below.
pub fn group_sign(g: &GroupIndex) -> i64 {
    let mut exp = g.k1.len() + 1; // base (-1)^{|K_1|-1}
    let subs = g.flag.subsets();
    for (l, w) in subs.windows(2).enumerate() {
        let grown = w[1].difference(w[0]).min_label().unwrap();
        let comp = w[0].complement(g.n);
        // (3): |J| of the extended flag, current length, rank of the new label
        exp += (comp.len() - 1) + (l + 1) + rank_in_mask(comp, grown);
    }
    if g.rel == Rel::Le {
        exp += g.j_set().len() + 1;
    }
    pow_neg_one(exp)
}

/// `(-1)^exp`.
pub fn pow_neg_one(exp: usize) -> i64 {
    if exp.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `τ_k^{m,j} = (-1)^{i_k + Σ_{l=m-j}^m i_l - jm + j(j+1)/2}` for a sorted
/// label set `I = {i_1 < ... < i_m}`, with `0 ≤ j ≤ m-1` and `m-j ≤ k ≤ m`
/// (indices 1-based into `I`).
pub fn tau_sign(labels: &[usize], m: usize, j: usize, k: usize) -> Result<i64> {
    if labels.len() != m || m == 0 {
        return Err(Error::OutOfRange(format!(
            "expected {m} labels, got {}",
            labels.len()
        )));
    }
    if !labels.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::OutOfRange("labels must be strictly sorted".into()));
    }
    if j > m - 1 {
        return Err(Error::OutOfRange(format!(
            "j = {j} out of range for m = {m}"
        )));
    }
    if k < m - j || k > m {
        return Err(Error::OutOfRange(format!(
            "k = {k} out of range [{}..={m}] at level j = {j}",
            m - j
        )));
    }
    let mut exp = labels[k - 1] + j * m + j * (j + 1) / 2;
    for l in (m - j)..=m {
        exp += labels[l - 1];
    }
    Ok(pow_neg_one(exp))
}
