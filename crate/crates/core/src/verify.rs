//! Property suites over the whole construction, one check per lemma-level
//! statement. Each check reports a pass/fail line with a counterexample dump
//! on failure; runs are deterministic for fixed `n` and seed, so two reports
//! over the same arguments are byte-identical.

use crate::cells::{
    boundary_chain, cube_chain, generator_level, is_empty_cell, iterated_boundary, split_uv,
    top_generators, CellComplex, IntChain,
};
use crate::combinatorics::{
    count_smaller, enumerate_group, group_sign, pow_neg_one, tau_sign, CellIndex, FlagChain,
    GroupIndex, Rel, SubsetMask, Tau,
};
use crate::geometry::{
    cell_interior_membership, cell_membership, check_general_position, corner_map,
    corner_map_inverse, param_point, retraction_step, ConeSpec, Point, TOL,
};
use crate::homology::{boundary_matrix, class_rank, Filter};
use crate::intersection::{
    basis_change_det, index_with_imaginary, pl_sign, vanishing_pair_closed_form,
    vanishing_pair_index, IndexEvidence,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// Outcome of one named check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Boundary,
    Signs,
    Cube,
    Generators,
    Geometry,
    Intersection,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "boundary" => Some(Suite::Boundary),
            "signs" => Some(Suite::Signs),
            "cube" => Some(Suite::Cube),
            "generators" => Some(Suite::Generators),
            "geometry" => Some(Suite::Geometry),
            "intersection" => Some(Suite::Intersection),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

struct Collector {
    count: usize,
    failures: Vec<String>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            count: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.failures.len() < 3 {
            self.failures.push(counterexample());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn finish(self, name: &str, results: &mut Vec<CheckResult>) {
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{} instances", self.count)
        } else {
            let shown: Vec<&String> = self.failures.iter().filter(|s| !s.is_empty()).collect();
            let mut d = format!("{} of {} failed", self.failures.len(), self.count);
            for s in shown {
                write!(d, "; counterexample: {s}").unwrap();
            }
            d
        };
        results.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn subsets_of(mask: SubsetMask) -> Vec<SubsetMask> {
    let mut out = Vec::new();
    let mut bits = mask.0;
    loop {
        out.push(SubsetMask(bits));
        if bits == 0 {
            break;
        }
        bits = (bits - 1) & mask.0;
    }
    out.reverse();
    out
}

/// Runs one suite at dimension `n` with the given sampling seed.
pub fn run_suite(suite: Suite, n: usize, seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    match suite {
        Suite::Boundary => suite_boundary(n, &mut out),
        Suite::Signs => suite_signs(n, &mut out),
        Suite::Cube => suite_cube(n, &mut out),
        Suite::Generators => suite_generators(n, &mut out),
        Suite::Geometry => suite_geometry(n, seed, &mut out),
        Suite::Intersection => suite_intersection(n, &mut out),
        Suite::All => {
            suite_boundary(n, &mut out);
            suite_signs(n, &mut out);
            suite_cube(n, &mut out);
            suite_generators(n, &mut out);
            suite_geometry(n, seed, &mut out);
            suite_intersection(n, &mut out);
        }
    }
    out
}

/// Renders the report in its stable text form.
pub fn render_report(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        writeln!(s, "{tag} {} — {}", r.name, r.detail).unwrap();
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        writeln!(s, "all {} checks passed", results.len()).unwrap();
    } else {
        writeln!(s, "{failed} of {} checks FAILED", results.len()).unwrap();
    }
    s
}

fn suite_boundary(n: usize, out: &mut Vec<CheckResult>) {
    let cx = CellComplex::build(n);

    let mut c = Collector::new();
    // second boundary accumulated through the interned index table
    let mut acc: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
    for pos in 0..cx.len() {
        acc.clear();
        for &(mid, v1) in cx.boundary_of(pos) {
            for &(target, v2) in cx.boundary_of(mid) {
                *acc.entry(target).or_insert(0) += v1 * v2;
            }
        }
        let ok = acc.values().all(|&v| v == 0);
        let (cell, tau) = &cx.cells[pos];
        c.check(ok, || format!("∂∂ e^{tau}{cell:?} ≠ 0"));
    }
    c.finish("boundary.squares-to-zero", out);

    let mut c = Collector::new();
    for pos in 0..cx.len() {
        let d = cx.degree_of(pos);
        for &(target, _) in cx.boundary_of(pos) {
            let (cell, tau) = &cx.cells[target];
            c.check(cx.degree_of(target) == d - 1, || {
                format!("face e^{tau}{cell:?} does not drop one degree")
            });
        }
    }
    c.finish("boundary.degree-step", out);

    let mut c = Collector::new();
    for filter in [Filter::EqOnly, Filter::Relative, Filter::All] {
        for degree in 1..=(n as i64 + 2) {
            let b1 = boundary_matrix(&cx, degree - 1, filter).unwrap();
            let b2 = boundary_matrix(&cx, degree, filter).unwrap();
            c.check(b1.mul(&b2).is_zero(), || {
                format!("B({})·B({degree}) ≠ 0 under {filter:?}", degree - 1)
            });
        }
    }
    c.finish("boundary.matrix-compose", out);
}

fn suite_signs(n: usize, out: &mut Vec<CheckResult>) {
    let full = SubsetMask::full(n);
    let mut id1 = Collector::new();
    let mut id2 = Collector::new();
    let mut id3 = Collector::new();
    let mut id4 = Collector::new();
    for k2 in subsets_of(full) {
        if k2.is_empty() {
            continue;
        }
        for k1 in subsets_of(k2) {
            if k1.is_empty() {
                continue;
            }
            for rel in [Rel::Le, Rel::Eq] {
                for g in enumerate_group(n, k1, k2, rel) {
                    let j_len = g.j_set().len();
                    let k = g.flag.len();
                    if rel == Rel::Le {
                        let eq = GroupIndex {
                            rel: Rel::Eq,
                            ..g.clone()
                        };
                        id1.check(
                            group_sign(&g) == pow_neg_one(j_len + 1) * group_sign(&eq),
                            || format!("identity (1) at {g:?}"),
                        );
                    }
                    let subs = g.flag.subsets();
                    for j in 1..k.saturating_sub(1) {
                        let j1 = subs[j].difference(subs[j - 1]).min_label().unwrap();
                        let j2 = subs[j + 1].difference(subs[j]).min_label().unwrap();
                        let mut swapped = subs.to_vec();
                        swapped[j] = subs[j].without(j1).with(j2);
                        let g2 = GroupIndex {
                            flag: FlagChain::new(swapped).unwrap(),
                            ..g.clone()
                        };
                        id2.check(group_sign(&g) == -group_sign(&g2), || {
                            format!("identity (2) at {g:?}")
                        });
                    }
                    for j in k2.difference(g.flag.top()).labels() {
                        let ext = GroupIndex {
                            flag: g.flag.extended(g.flag.top().with(j)),
                            ..g.clone()
                        };
                        let n_i = crate::combinatorics::position_in_complement(
                            &CellIndex::new(g.flag.clone(), SubsetMask::EMPTY, g.j_set(), rel)
                                .unwrap(),
                            j,
                        )
                        .unwrap();
                        let delta = usize::from(rel == Rel::Le);
                        let exp = ext.j_set().len() + delta + k + n_i;
                        id3.check(
                            group_sign(&ext) == pow_neg_one(exp) * group_sign(&g),
                            || format!("identity (3) at {g:?}, j = {j}"),
                        );
                    }
                    if k > 1 {
                        let j = subs[1].difference(subs[0]).min_label().unwrap();
                        let stripped = GroupIndex {
                            k1: k1.with(j),
                            flag: FlagChain::new(subs[1..].to_vec()).unwrap(),
                            ..g.clone()
                        };
                        let nj = count_smaller(k1, j).unwrap();
                        id4.check(
                            group_sign(&g) == pow_neg_one(j_len + nj + 1) * group_sign(&stripped),
                            || format!("identity (4) at {g:?}"),
                        );
                    }
                }
            }
        }
    }
    id1.finish("signs.sgn-rel-flip", out);
    id2.finish("signs.sgn-swap-antisymmetry", out);
    id3.finish("signs.sgn-growth", out);
    id4.finish("signs.sgn-strip-first", out);

    let mut c = Collector::new();
    for labels_mask in subsets_of(SubsetMask::full(7)) {
        let labels = labels_mask.labels();
        let m = labels.len();
        if m == 0 || m > 6 {
            continue;
        }
        for j in 1..m {
            for k in (m - j + 1)..=m {
                let r1 = pow_neg_one(labels[k - 1] + m + j)
                    * tau_sign(&labels, m, j, m - j).unwrap()
                    == tau_sign(&labels, m, j - 1, k).unwrap();
                c.check(r1, || {
                    format!("tau recurrence (1) at I={labels:?} j={j} k={k}")
                });
                let r2 = pow_neg_one(labels[m - j - 1] + m + j)
                    * tau_sign(&labels, m, j, k).unwrap()
                    == tau_sign(&labels, m, j - 1, k).unwrap();
                c.check(r2, || {
                    format!("tau recurrence (2) at I={labels:?} j={j} k={k}")
                });
                for l in (m - j + 1)..=m {
                    let r3 = pow_neg_one(labels[k - 1]) * tau_sign(&labels, m, j, l).unwrap()
                        == pow_neg_one(labels[l - 1]) * tau_sign(&labels, m, j, k).unwrap();
                    c.check(r3, || {
                        format!("tau recurrence (3) at I={labels:?} j={j} k={k} l={l}")
                    });
                }
            }
        }
    }
    c.finish("signs.tau-recurrences", out);
}

fn suite_cube(n: usize, out: &mut Vec<CheckResult>) {
    let full = SubsetMask::full(n);
    let mut c = Collector::new();
    let mut closed = Collector::new();
    for k2 in subsets_of(full) {
        if k2.is_empty() {
            continue;
        }
        for k1 in subsets_of(k2) {
            if k1.is_empty() {
                continue;
            }
            for rel in [Rel::Le, Rel::Eq] {
                let lhs = boundary_chain(&cube_chain(n, k1, k2, rel).unwrap());
                let delta = usize::from(rel == Rel::Le);
                let mut rhs = IntChain::zero(lhs.degree());
                if rel == Rel::Le {
                    rhs.add_assign(&cube_chain(n, k1, k2, Rel::Eq).unwrap());
                }
                for j in k2.difference(k1).labels() {
                    let nj = count_smaller(k1, j).unwrap();
                    rhs.add_assign(
                        &cube_chain(n, k1.with(j), k2, rel)
                            .unwrap()
                            .scaled(pow_neg_one(nj + delta + 1)),
                    );
                }
                c.check(lhs == rhs, || {
                    format!("∂e_({k1:?},{k2:?},{rel:?}) differs from the identity")
                });
                if k1 == k2 && rel == Rel::Eq {
                    closed.check(lhs.is_zero(), || format!("∂e_({k1:?},{k1:?},=) ≠ 0"));
                }
            }
        }
    }
    c.finish("cube.boundary-identity", out);
    closed.finish("cube.top-cycles", out);
}

fn suite_generators(n: usize, out: &mut Vec<CheckResult>) {
    let cx = CellComplex::build(n);
    let gens = top_generators(n).unwrap();

    let mut cycles = Collector::new();
    let mut bounding = Collector::new();
    for (set, e) in &gens.absolute {
        cycles.check(boundary_chain(e).is_zero(), || format!("∂e_{set:?} ≠ 0"));
        bounding.check(boundary_chain(&gens.relative[set]) == *e, || {
            format!("∂E_{set:?} ≠ e_{set:?}")
        });
    }
    cycles.finish("generators.cycles", out);
    bounding.finish("generators.bounding", out);

    let mut mv = Collector::new();
    for bits in 1..=SubsetMask::full(n).0 {
        let labels = SubsetMask(bits).labels();
        let m = labels.len();
        for level in 1..m {
            let (u, v) = split_uv(n, &labels, level).unwrap();
            let du = boundary_chain(&u);
            let dv = boundary_chain(&v);
            let next = generator_level(n, &labels, level + 1, Rel::Eq).unwrap();
            mv.check(du == dv.scaled(-1) && du == next, || {
                format!("splitting fails at I={labels:?} level={level}")
            });
            mv.check(
                u.plus(&v) == generator_level(n, &labels, level, Rel::Eq).unwrap(),
                || format!("u+v ≠ e at I={labels:?} level={level}"),
            );
        }
    }
    mv.finish("generators.mv-splitting", out);

    let mut iter = Collector::new();
    for bits in 1..=SubsetMask::full(n).0 {
        let set = SubsetMask(bits);
        let labels = set.labels();
        let rel_chain = generator_level(n, &labels, 1, Rel::Le).unwrap();
        let end = iterated_boundary(&rel_chain, &labels);
        iter.check(end == cube_chain(n, set, set, Rel::Eq).unwrap(), || {
            format!("iterated boundary misses e_(I,I,=) at I={labels:?}")
        });
    }
    iter.finish("generators.iterated-boundary", out);

    let expect = (1usize << (n + 1)) - 1;
    let absolute: Vec<IntChain> = gens.absolute.values().cloned().collect();
    let rank_eq = class_rank(&cx, &absolute, Filter::EqOnly).unwrap();
    out.push(CheckResult {
        name: "generators.class-rank-absolute".into(),
        passed: rank_eq == expect,
        detail: format!("rank {rank_eq}, expected {expect}"),
    });
    let relative: Vec<IntChain> = gens.relative.values().cloned().collect();
    let rank_rel = class_rank(&cx, &relative, Filter::Relative).unwrap();
    out.push(CheckResult {
        name: "generators.class-rank-relative".into(),
        passed: rank_rel == expect,
        detail: format!("rank {rank_rel}, expected {expect}"),
    });
}

fn interior_sample(n: usize, cell: &CellIndex, tau: Tau, rng: &mut ChaCha8Rng) -> Option<Point> {
    let m = ConeSpec::of_cell(cell, tau).dim();
    let k = cell.flag.len();
    let wlen = if cell.rel == Rel::Eq { m - 1 } else { m };
    let mut bary: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
    let s: f64 = bary.iter().sum();
    bary.iter_mut().for_each(|t| *t /= s);
    let w: Vec<f64> = (0..wlen)
        .map(|_| rng.gen_range(0.1..0.85) / wlen.max(1) as f64)
        .collect();
    let z = param_point(n, cell, tau, &w, &bary).ok()?;
    if cell_interior_membership(n, &z, cell, tau, TOL) {
        Some(z)
    } else {
        None
    }
}

fn suite_geometry(n: usize, seed: u64, out: &mut Vec<CheckResult>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // corner map round trips per orthant signature, dimensions up to 6
    let mut c = Collector::new();
    for dim in 1..=6usize {
        for pattern in 0..(1u32 << dim) {
            let signs: Vec<i8> = (0..dim)
                .map(|b| if pattern >> b & 1 == 1 { -1 } else { 1 })
                .collect();
            for _ in 0..1000 {
                let mut x: Vec<f64> = signs
                    .iter()
                    .map(|&s| f64::from(s) * rng.gen_range(0.0..1.0))
                    .collect();
                let n2 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if n2 > 1.0 {
                    x.iter_mut().for_each(|v| *v /= n2 * 1.0001);
                }
                let ok = match corner_map(&x, &signs) {
                    Ok(w) => {
                        let n1: f64 = w.iter().map(|v| v.abs()).sum();
                        let n2x = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                        let back = corner_map_inverse(&w, &signs).unwrap();
                        (n1 - n2x).abs() < TOL
                            && x.iter().zip(&back).all(|(a, b)| (a - b).abs() < TOL)
                    }
                    Err(_) => false,
                };
                c.check(ok, || format!("round trip fails at {x:?} signs {signs:?}"));
            }
        }
    }
    c.finish(&format!("geometry.corner-roundtrip[seed={seed}]"), out);

    // geometric sampling is specified at desk scale; larger n reuse the n = 2
    // complex
    let gn = n.min(2);
    let cx = CellComplex::build(gn);
    let mut member = Collector::new();
    let mut imsq = Collector::new();
    for (cell, tau) in &cx.cells {
        if is_empty_cell(cell, *tau) {
            continue;
        }
        let m = ConeSpec::of_cell(cell, *tau).dim();
        let k = cell.flag.len();
        let wlen = if cell.rel == Rel::Eq { m - 1 } else { m };
        for _ in 0..1000 {
            let mut bary: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
            let s: f64 = bary.iter().sum();
            bary.iter_mut().for_each(|t| *t /= s);
            let mut w: Vec<f64> = (0..wlen).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s: f64 = w.iter().sum();
            if s > 1.0 {
                w.iter_mut().for_each(|v| *v /= s * 1.0001);
            }
            match param_point(gn, cell, *tau, &w, &bary) {
                Ok(z) => {
                    member.check(cell_membership(gn, &z, cell, *tau, TOL), || {
                        format!("sample escapes e^{tau}{cell:?}")
                    });
                    let j0 = cell.base_label();
                    let mut sq = Complex64::new(0.0, 0.0);
                    for (l, zl) in z.coords.iter().enumerate() {
                        let shifted = zl - Complex64::new(0.0, if l + 1 == j0 { 1.0 } else { 0.0 });
                        sq += shifted * shifted;
                    }
                    imsq.check(sq.im.abs() < TOL, || {
                        format!("Im((z-a)²) = {} at e^{tau}{cell:?}", sq.im)
                    });
                }
                Err(e) => member.check(false, || format!("param failed: {e} at {cell:?}")),
            }
        }
    }
    member.finish(
        &format!("geometry.param-membership[n={gn},seed={seed}]"),
        out,
    );
    imsq.finish("geometry.imaginary-square-real", out);

    // retraction invariants along random sphere points
    let mut c = Collector::new();
    for _ in 0..100 {
        // a point of the complex unit sphere: unit real direction scaled
        // against an orthogonal imaginary part
        let mut a: Vec<f64> = (0..gn + 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let an = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if an < 1e-3 {
            continue;
        }
        a.iter_mut().for_each(|v| *v /= an);
        let w: Vec<f64> = (0..gn + 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let proj: f64 = w.iter().zip(&a).map(|(x, y)| x * y).sum();
        let b: Vec<f64> = w.iter().zip(&a).map(|(wi, ai)| wi - proj * ai).collect();
        let scale = (1.0 + b.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let z = Point {
            coords: a
                .iter()
                .zip(&b)
                .map(|(x, y)| Complex64::new(scale * x, *y))
                .collect(),
        };
        let t = rng.gen_range(0.0..1.0);
        let ok = match retraction_step(&z, t) {
            Ok(g) => (g.square() - Complex64::new(1.0, 0.0)).norm() < TOL,
            Err(_) => false,
        };
        c.check(ok, || format!("retraction leaves the sphere at t={t}"));
    }
    c.finish(&format!("geometry.retraction-on-sphere[seed={seed}]"), out);

    // general position of every intersection
    let mut c = Collector::new();
    for bits in 1..=SubsetMask::full(gn).0 {
        let set = SubsetMask(bits);
        let ok = check_general_position(gn, set, 100, seed).unwrap_or(false);
        c.check(ok, || format!("gradients degenerate on {set:?}"));
    }
    c.finish(
        &format!("geometry.general-position[n={gn},seed={seed}]"),
        out,
    );

    // relative interiors of distinct cells are disjoint
    let mut c = Collector::new();
    let nonempty: Vec<&(CellIndex, Tau)> = cx
        .cells
        .iter()
        .filter(|(cell, tau)| !is_empty_cell(cell, *tau))
        .collect();
    for (cell, tau) in &nonempty {
        let Some(z) = interior_sample(gn, cell, *tau, &mut rng) else {
            continue;
        };
        for (other, tau2) in &nonempty {
            if (other, tau2) == (cell, tau) {
                continue;
            }
            c.check(!cell_interior_membership(gn, &z, other, *tau2, TOL), || {
                format!("interiors of e^{tau}{cell:?} and e^{tau2}{other:?} overlap")
            });
        }
    }
    c.finish(
        &format!("geometry.disjoint-interiors[n={gn},seed={seed}]"),
        out,
    );
}

fn suite_intersection(n: usize, out: &mut Vec<CheckResult>) {
    let mut c = Collector::new();
    for k in 0..=8usize {
        for j in 1..=k + 1 {
            c.check(
                basis_change_det(k, j).unwrap() == pow_neg_one(j + 1),
                || format!("det differs from (-1)^(k-1) at n={k} k={j}"),
            );
        }
    }
    c.finish("intersection.basis-change-dets", out);

    let mut c = Collector::new();
    for bits in 1..=SubsetMask::full(n).0 {
        let set = SubsetMask(bits);
        let (index, evidence) = index_with_imaginary(n, set).unwrap();
        let ok = if set.len() == 1 {
            index == 1
                && matches!(&evidence, IndexEvidence::Orientation(cert)
                    if cert.determinant * pow_neg_one(set.min_label().unwrap() + 1) == 1)
        } else {
            index == 0 && matches!(&evidence, IndexEvidence::Disjointness(cert) if cert.verify())
        };
        c.check(ok, || {
            format!("case split fails at I={set:?}: index {index}")
        });
    }
    c.finish("intersection.index-case-split", out);

    let mut c = Collector::new();
    let full = SubsetMask::full(n);
    for a in 1..=full.0 {
        for b in 1..=full.0 {
            let (sa, sb) = (SubsetMask(a), SubsetMask(b));
            c.check(
                vanishing_pair_index(sa, sb, n).unwrap() == vanishing_pair_closed_form(sa, sb, n),
                || format!("vanishing pairing differs at I={sa:?} J={sb:?}"),
            );
        }
    }
    c.finish("intersection.vanishing-pairings", out);

    let mut c = Collector::new();
    for d in 2..=9usize {
        c.check(
            pl_sign(d - 1, 2) == pow_neg_one((d + 1) * (d + 2) / 2),
            || format!("pl parity differs at D={d}"),
        );
    }
    c.finish("intersection.pl-parity", out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_small() {
        for n in 1..=2usize {
            let results = run_suite(Suite::All, n, 7);
            for r in &results {
                assert!(r.passed, "n={n}: {} — {}", r.name, r.detail);
            }
        }
    }

    #[test]
    fn reports_are_byte_identical() {
        let a = render_report(&run_suite(Suite::All, 1, 7));
        let b = render_report(&run_suite(Suite::All, 1, 7));
        assert_eq!(a, b);
        assert!(a.contains("PASS"));
    }

    #[test]
    fn suite_names_parse() {
        for s in [
            "boundary",
            "signs",
            "cube",
            "generators",
            "geometry",
            "intersection",
            "all",
        ] {
            assert!(Suite::parse(s).is_some());
        }
        assert!(Suite::parse("nonsense").is_none());
    }
}
