//! Intersection indices: orientation determinants, the pairing of the
//! generator chains with the imaginary subspace, sphere self-intersection,
//! Picard-Lefschetz and iterated-duality signs, and the vanishing-class
//! pairings.
//!
//! Indices are produced together with machine-checkable evidence: an exact
//! orientation determinant for the transverse case, or a per-cell flow
//! witness for the disjoint case. The case-split theorems are assertions over
//! this evidence, never table lookups.

use crate::cells::generator_level;
use crate::combinatorics::{pow_neg_one, tau_sign, CellIndex, Rel, SubsetMask, Tau};
use crate::homology::det_int_columns;
use crate::{Error, Result};

/// Exact determinant of the basis-change matrix with columns
/// `v_1, ..., v̂_k, ..., v_{n+1}, v`.
pub fn basis_change_det(n: usize, k: usize) -> Result<i64> {
    if k < 1 || k > n + 1 {
        return Err(Error::OutOfRange(format!("k = {k} outside 1..={}", n + 1)));
    }
    let dim = n + 1;
    let mut columns = Vec::with_capacity(dim);
    for j in 1..=dim {
        if j == k {
            continue;
        }
        let col: Vec<i64> = (1..=dim).map(|r| i64::from(r != j)).collect();
        columns.push(col);
    }
    columns.push(vec![1; dim]);
    let det = det_int_columns(&columns);
    Ok(i64::try_from(det).expect("determinant of a 0/1 matrix of desk size"))
}

/// Exact orientation evidence for a transverse single-point intersection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrientationCertificate {
    /// The class the index belongs to, e.g. `e_{3}`.
    pub class: String,
    /// Determinant of the combined (cell frame, imaginary frame) basis
    /// against the standard orientation of C^{n+1}.
    pub determinant: i64,
    /// The resulting intersection index.
    pub conclusion: i64,
}

/// Why one cell of the deformed representative misses the imaginary subspace:
/// the coefficient of `v_j` in its cone frame either is constrained
/// nonnegative or vanishes identically, so the uniform positive shift of all
/// frame coefficients keeps it away from zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessKind {
    NonnegativeCone,
    ZeroCoefficient,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CellWitness {
    pub cell: CellIndex,
    pub tau: Tau,
    pub label: usize,
    pub kind: WitnessKind,
}

/// Evidence that every cell of the generator chain flows off the imaginary
/// subspace, hence index zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DisjointnessCertificate {
    pub class: String,
    /// The frame label `i_0 = min I` excluded from the shift frame.
    pub base_label: usize,
    pub witnesses: Vec<CellWitness>,
}

impl DisjointnessCertificate {
    /// Re-checks every witness against the cell data it claims to describe.
    pub fn verify(&self) -> bool {
        self.witnesses.iter().all(|w| {
            w.label != self.base_label
                && match w.kind {
                    WitnessKind::NonnegativeCone => w.cell.j_ge.contains(w.label),
                    WitnessKind::ZeroCoefficient => w.cell.flag.top().contains(w.label),
                }
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IndexEvidence {
    Orientation(OrientationCertificate),
    Disjointness(DisjointnessCertificate),
}

/// The intersection index `⟨(i·R)^{n+1} | e_I⟩` together with its evidence.
///
/// For `|I| = 1` the generator meets the imaginary subspace transversally in
/// the single point `a_k`; the index is the product of the chain prefactor
/// and the exact orientation determinant. For `|I| ≥ 2` every cell of the
/// chain carries a frame coefficient that the deformation flow keeps
/// positive, so the index vanishes.
pub fn index_with_imaginary(n: usize, set: SubsetMask) -> Result<(i64, IndexEvidence)> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !set.is_subset_of(SubsetMask::full(n)) {
        return Err(Error::OutOfRange(format!(
            "{set:?} exceeds the label range"
        )));
    }
    let labels = set.labels();
    let min = labels[0];
    if labels.len() == 1 {
        let k = min;
        // chain prefactor (-1)^{min I - 1} · tau_1^{1,0}
        let prefactor = pow_neg_one(k + 1) * tau_sign(&labels, 1, 0, 1)?;
        // orientation of (cell frame, imaginary frame) vs the standard one:
        // block determinant of the real 2(n+1)-dimensional column matrix
        let dim = n + 1;
        let mut columns: Vec<Vec<i64>> = Vec::with_capacity(2 * dim);
        for j in 1..=dim {
            if j == k {
                continue;
            }
            let mut col = vec![0i64; 2 * dim];
            for r in 1..=dim {
                col[r - 1] = i64::from(r != j);
            }
            columns.push(col);
        }
        let mut vcol = vec![0i64; 2 * dim];
        vcol[..dim].fill(1);
        columns.push(vcol);
        for j in 0..dim {
            let mut col = vec![0i64; 2 * dim];
            col[dim + j] = 1;
            columns.push(col);
        }
        let det = i64::try_from(det_int_columns(&columns)).expect("unit determinant");
        debug_assert_eq!(det, basis_change_det(n, k)?);
        if det.abs() != 1 {
            return Err(Error::OutOfRange(format!(
                "orientation determinant {det} is not a unit"
            )));
        }
        let conclusion = prefactor * det;
        Ok((
            conclusion,
            IndexEvidence::Orientation(OrientationCertificate {
                class: format!("e_{labels:?}"),
                determinant: det,
                conclusion,
            }),
        ))
    } else {
        let chain = generator_level(n, &labels, 1, Rel::Le)?;
        let mut witnesses = Vec::new();
        for ((cell, tau), _) in chain.iter() {
            let top = cell.flag.top();
            let candidates = cell.j_ge.union(top).without(min);
            let Some(label) = candidates.min_label() else {
                return Err(Error::OutOfRange(format!(
                    "no flow witness for {cell:?}; |I| must be at least 2"
                )));
            };
            let kind = if top.contains(label) {
                WitnessKind::ZeroCoefficient
            } else {
                WitnessKind::NonnegativeCone
            };
            witnesses.push(CellWitness {
                cell: cell.clone(),
                tau: *tau,
                label,
                kind,
            });
        }
        let cert = DisjointnessCertificate {
            class: format!("e_{labels:?}"),
            base_label: min,
            witnesses,
        };
        if !cert.verify() {
            return Err(Error::OutOfRange("disjointness certificate invalid".into()));
        }
        Ok((0, IndexEvidence::Disjointness(cert)))
    }
}

/// Self-intersection of the real k-sphere inside the complex k-sphere:
/// `2·(-1)^{k/2}` for even k, zero for odd k.
pub fn sphere_self_intersection(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        2 * pow_neg_one(k / 2)
    } else {
        0
    }
}

/// The Picard-Lefschetz sign `(-1)^{(n-m)(n-m+1)/2}`.
pub fn pl_sign(n: usize, m: usize) -> i64 {
    let d = n as i64 - m as i64;
    let exp = d * (d + 1) / 2;
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The iterated-duality sign `(-1)^{N·k + N(N+1)/2}`.
pub fn duality_sign(big_n: usize, k: usize) -> i64 {
    pow_neg_one(big_n * k + big_n * (big_n + 1) / 2)
}

/// The pairing of a vanishing sphere at a pinch of the spheres in `sphere_set`
/// with the transported generator of `cell_set`, computed through the proof
/// chain: iterated duality, iterated boundary down to `e_{I,I,=}`, and the
/// sphere self-intersection.
pub fn vanishing_pair_index(sphere_set: SubsetMask, cell_set: SubsetMask, n: usize) -> Result<i64> {
    if sphere_set.is_empty() || cell_set.is_empty() {
        return Err(Error::EmptySubset);
    }
    if sphere_set != cell_set {
        // the transported top chain lies inside a different intersection
        return Ok(0);
    }
    let m = sphere_set.len();
    let k = (n + 1)
        .checked_sub(m)
        .ok_or_else(|| Error::OutOfRange(format!("|I| = {m} exceeds n+1 = {}", n + 1)))?;
    Ok(duality_sign(m, k) * sphere_self_intersection(k))
}

/// The closed form of the vanishing pairing, used as the check target:
/// `2·(-1)^{(n+1)(n+2)/2}` when the sets agree and `n+1-|I|` is even.
pub fn vanishing_pair_closed_form(sphere_set: SubsetMask, cell_set: SubsetMask, n: usize) -> i64 {
    if sphere_set != cell_set || !(n + 1 - sphere_set.len()).is_multiple_of(2) {
        return 0;
    }
    2 * pow_neg_one((n + 1) * (n + 2) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(labels: &[usize]) -> SubsetMask {
        SubsetMask::from_labels(labels)
    }

    #[test]
    fn basis_change_determinants() {
        assert_eq!(basis_change_det(1, 1).unwrap(), 1);
        assert_eq!(basis_change_det(1, 2).unwrap(), -1);
        for n in 0..=8usize {
            for k in 1..=n + 1 {
                assert_eq!(
                    basis_change_det(n, k).unwrap(),
                    pow_neg_one(k + 1),
                    "n={n} k={k}"
                );
            }
        }
        assert!(basis_change_det(2, 0).is_err());
        assert!(basis_change_det(2, 4).is_err());
    }

    #[test]
    fn single_sphere_index_is_one() {
        for n in 1..=3usize {
            for k in 1..=n + 1 {
                let (index, evidence) = index_with_imaginary(n, mask(&[k])).unwrap();
                assert_eq!(index, 1);
                match evidence {
                    IndexEvidence::Orientation(cert) => {
                        assert_eq!(cert.determinant, pow_neg_one(k + 1));
                        assert_eq!(cert.determinant * cert.determinant, 1);
                        assert_eq!(cert.conclusion, 1);
                    }
                    _ => panic!("expected an orientation certificate"),
                }
            }
        }
    }

    #[test]
    fn larger_sets_vanish_with_witnesses() {
        for n in 1..=3usize {
            for bits in 1..=SubsetMask::full(n).0 {
                let set = SubsetMask(bits);
                if set.len() < 2 {
                    continue;
                }
                let (index, evidence) = index_with_imaginary(n, set).unwrap();
                assert_eq!(index, 0, "set {set:?}");
                match evidence {
                    IndexEvidence::Disjointness(cert) => {
                        assert!(cert.verify());
                        assert_eq!(cert.base_label, set.min_label().unwrap());
                        assert!(!cert.witnesses.is_empty());
                    }
                    _ => panic!("expected a disjointness certificate"),
                }
            }
        }
    }

    #[test]
    fn self_intersection_values() {
        assert_eq!(sphere_self_intersection(0), 2);
        assert_eq!(sphere_self_intersection(1), 0);
        assert_eq!(sphere_self_intersection(2), -2);
        assert_eq!(sphere_self_intersection(3), 0);
        assert_eq!(sphere_self_intersection(4), 2);
    }

    #[test]
    fn pl_sign_values() {
        for n in 0..6 {
            assert_eq!(pl_sign(n, n), 1);
            assert_eq!(pl_sign(n + 1, n), -1);
        }
        // bubble form: (D-3)(D-2)/2 and (D+1)(D+2)/2 agree mod 2 at D = n+1
        for d in 2..=9usize {
            let bubble = pow_neg_one((d + 1) * (d + 2) / 2);
            assert_eq!(pl_sign(d - 1, 2), bubble, "D = {d}");
        }
    }

    #[test]
    fn duality_sign_values() {
        assert_eq!(duality_sign(1, 0), -1);
        for k in 0..5 {
            assert_eq!(duality_sign(2, k), -1); // exponent 2k + 3 is odd
        }
        assert_eq!(duality_sign(0, 3), 1);
    }

    #[test]
    fn vanishing_chain_matches_closed_form() {
        for n in 1..=3usize {
            let full = SubsetMask::full(n);
            for a in 1..=full.0 {
                for b in 1..=full.0 {
                    let (sa, sb) = (SubsetMask(a), SubsetMask(b));
                    assert_eq!(
                        vanishing_pair_index(sa, sb, n).unwrap(),
                        vanishing_pair_closed_form(sa, sb, n),
                        "n={n} I={sa:?} J={sb:?}"
                    );
                }
            }
        }
        // odd codimension kills the diagonal case
        assert_eq!(
            vanishing_pair_index(mask(&[1, 2]), mask(&[1, 2]), 2).unwrap(),
            0
        );
    }
}
