//! Numeric realization of the cells in C^{n+1}: sphere centers, cone bases,
//! the corner homeomorphism between an orthant piece of the ball and the
//! simplex, cell parametrization and membership, the deformation retraction
//! of the complex sphere, and general-position sampling.
//!
//! Everything here is double precision with the fixed tolerances 1e-9
//! (membership, round trips) and 1e-6 (singular-value cutoffs); sampling is
//! seeded and reproducible.

use crate::combinatorics::{CellIndex, SubsetMask, Tau};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;
pub const RANK_TOL: f64 = 1e-6;

/// A point of C^{n+1}.
#[derive(Clone, PartialEq, Debug)]
pub struct Point {
    pub coords: Vec<Complex64>,
}

impl Point {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn re(&self) -> Vec<f64> {
        self.coords.iter().map(|z| z.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.coords.iter().map(|z| z.im).collect()
    }

    /// `z^2 = Σ z_j^2` (the complex bilinear square, not a norm).
    pub fn square(&self) -> Complex64 {
        self.coords.iter().map(|z| z * z).sum()
    }
}

/// A signed cone `V^tau_{J_le, J_ge}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ConeSpec {
    pub j_le: SubsetMask,
    pub j_ge: SubsetMask,
    pub tau: Tau,
}

impl ConeSpec {
    pub fn new(j_le: SubsetMask, j_ge: SubsetMask, tau: Tau) -> Result<Self> {
        if !j_le.intersection(j_ge).is_empty() {
            return Err(Error::OutOfRange("j_le and j_ge must be disjoint".into()));
        }
        Ok(ConeSpec { j_le, j_ge, tau })
    }

    pub fn of_cell(i: &CellIndex, tau: Tau) -> Self {
        ConeSpec {
            j_le: i.j_le,
            j_ge: i.j_ge,
            tau,
        }
    }

    /// Number of spanning directions, `|J| + |tau|`.
    pub fn dim(&self) -> usize {
        self.j_le.len() + self.j_ge.len() + usize::from(self.tau != 0)
    }

    /// The ordered spanning vectors (`v_j` for `j ∈ J` ascending, then `v`
    /// when `tau != 0`) and their sign constraints.
    pub fn ordered_basis(&self, n: usize) -> (Vec<Vec<f64>>, Vec<i8>) {
        let (v, vj) = cone_basis(n);
        let mut basis = Vec::new();
        let mut signs = Vec::new();
        for j in self.j_le.union(self.j_ge).labels() {
            basis.push(vj[j - 1].clone());
            signs.push(if self.j_le.contains(j) { -1 } else { 1 });
        }
        if self.tau != 0 {
            basis.push(v);
            signs.push(self.tau);
        }
        (basis, signs)
    }
}

/// Center of the sphere intersection indexed by `I`: `i/|I|` on `I`, zero off.
pub fn center(n: usize, set: SubsetMask) -> Result<Point> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    let val = 1.0 / set.len() as f64;
    let coords = (1..=n + 1)
        .map(|j| {
            if set.contains(j) {
                Complex64::new(0.0, val)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(Point { coords })
}

/// The real direction vectors: `v = (1,...,1)` and `v_j = v - e_j`.
pub fn cone_basis(n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let v = vec![1.0; n + 1];
    let vj = (0..n + 1)
        .map(|j| {
            let mut w = v.clone();
            w[j] = 0.0;
            w
        })
        .collect();
    (v, vj)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram matrix of the cell's ordered cone basis.
pub fn gram_matrix(n: usize, i: &CellIndex, tau: Tau) -> Result<DMatrix<f64>> {
    let (basis, _) = ConeSpec::of_cell(i, tau).ordered_basis(n);
    let m = basis.len();
    if m == 0 {
        return Err(Error::OutOfRange("cone has no spanning directions".into()));
    }
    Ok(DMatrix::from_fn(m, m, |r, c| dot(&basis[r], &basis[c])))
}

/// Upper-triangular factor `M` with `Mᵀ·M = Gram`; `|x|² = |M·d|²` for a cone
/// point with coefficients `d`.
pub fn gram_factor(n: usize, i: &CellIndex, tau: Tau) -> Result<DMatrix<f64>> {
    let g = gram_matrix(n, i, tau)?;
    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::OutsideDomain("gram matrix not positive definite".into()))?;
    Ok(chol.l().transpose())
}

fn norm1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// The corner homeomorphism `h` from the signed orthant piece of the unit
/// ball onto the corner simplex: `h(x) = (|x|₂/|x|₁)·(τ_1 x_1, ..., τ_n x_n)`.
pub fn corner_map(x: &[f64], signs: &[i8]) -> Result<Vec<f64>> {
    if x.len() != signs.len() {
        return Err(Error::DimensionMismatch("corner_map".into()));
    }
    for (v, &s) in x.iter().zip(signs) {
        if v * f64::from(s) < -TOL {
            return Err(Error::OutsideDomain(format!(
                "{v} violates orthant sign {s}"
            )));
        }
    }
    let n2 = norm2(x);
    if n2 > 1.0 + TOL {
        return Err(Error::OutsideDomain(format!("|x|₂ = {n2} > 1")));
    }
    if n2 == 0.0 {
        return Ok(vec![0.0; x.len()]);
    }
    let scale = n2 / norm1(x);
    Ok(x.iter()
        .zip(signs)
        .map(|(v, &s)| scale * s as f64 * v)
        .collect())
}

/// Inverse corner map, from the simplex back into the signed orthant piece.
pub fn corner_map_inverse(w: &[f64], signs: &[i8]) -> Result<Vec<f64>> {
    if w.len() != signs.len() {
        return Err(Error::DimensionMismatch("corner_map_inverse".into()));
    }
    for v in w {
        if *v < -TOL {
            return Err(Error::OutsideDomain(format!("simplex coordinate {v} < 0")));
        }
    }
    let n1 = norm1(w);
    if n1 > 1.0 + TOL {
        return Err(Error::OutsideDomain(format!("|w|₁ = {n1} > 1")));
    }
    if n1 == 0.0 {
        return Ok(vec![0.0; w.len()]);
    }
    let scale = n1 / norm2(w);
    Ok(w.iter()
        .zip(signs)
        .map(|(v, &s)| scale * s as f64 * v)
        .collect())
}

/// The real center vectors `ĉ_I` of the flag mixed barycentrically.
fn imaginary_part(n: usize, i: &CellIndex, bary: &[f64]) -> Result<Vec<f64>> {
    if bary.len() != i.flag.len() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} barycentric coordinates",
            i.flag.len()
        )));
    }
    let sum: f64 = bary.iter().sum();
    if (sum - 1.0).abs() > TOL || bary.iter().any(|t| *t < -TOL) {
        return Err(Error::OutsideDomain("barycentric coordinates".into()));
    }
    Ok(imaginary_part_unchecked(n, i, bary).unwrap())
}

fn imaginary_part_unchecked(n: usize, i: &CellIndex, bary: &[f64]) -> Option<Vec<f64>> {
    if bary.len() != i.flag.len() {
        return None;
    }
    let mut y = vec![0.0; n + 1];
    for (t, set) in bary.iter().zip(i.flag.subsets()) {
        let val = t / set.len() as f64;
        for l in set.labels() {
            y[l - 1] += val;
        }
    }
    Some(y)
}

/// Modified radius `r̃ = sqrt(1 + (y - e_{j0})²)` at imaginary part `y`.
fn modified_radius(y: &[f64], j0: usize) -> f64 {
    let mut s = 0.0;
    for (l, v) in y.iter().enumerate() {
        let d = v - if l + 1 == j0 { 1.0 } else { 0.0 };
        s += d * d;
    }
    (1.0 + s).sqrt()
}

/// Parametrizes a cell point from corner-simplex coordinates and barycentric
/// flag coordinates.
///
/// For `≤` cells `corner` has length `m = |J| + |tau|`; for `=` cells it has
/// length `m - 1` and is completed to the outer simplex face. Rays of the
/// cone are scaled by the Gram norm of their coefficient vector, so the image
/// is exactly the cell: corner faces with `|w|₁ = 1` land on the sphere.
pub fn param_point(
    n: usize,
    i: &CellIndex,
    tau: Tau,
    corner: &[f64],
    bary: &[f64],
) -> Result<Point> {
    use crate::cells::is_empty_cell;
    use crate::combinatorics::Rel;
    if is_empty_cell(i, tau) {
        return Err(Error::OutsideDomain("the cell is empty".into()));
    }
    let spec = ConeSpec::of_cell(i, tau);
    let m = spec.dim();
    let y = imaginary_part(n, i, bary)?;
    let j0 = i.base_label();
    let radius = modified_radius(&y, j0);

    let w: Vec<f64> = match i.rel {
        Rel::Le => {
            if corner.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "expected {m} corner coordinates"
                )));
            }
            corner.to_vec()
        }
        Rel::Eq => {
            if corner.len() + 1 != m {
                return Err(Error::DimensionMismatch(format!(
                    "expected {} corner coordinates",
                    m - 1
                )));
            }
            let mut w = corner.to_vec();
            let last = 1.0 - w.iter().sum::<f64>();
            if last < -TOL {
                return Err(Error::OutsideDomain("face coordinates exceed 1".into()));
            }
            w.push(last.max(0.0));
            w
        }
    };
    if w.iter().any(|x| *x < -TOL) || norm1(&w) > 1.0 + TOL {
        return Err(Error::OutsideDomain("corner coordinates".into()));
    }

    let (basis, signs) = spec.ordered_basis(n);
    let mut x = vec![0.0; n + 1];
    if m > 0 && norm1(&w) > 0.0 {
        // signed ray direction through w, rescaled so the Gram norm of the
        // coefficient vector equals |w|₁ · r̃
        let dir: Vec<f64> = w.iter().zip(&signs).map(|(v, &s)| s as f64 * v).collect();
        let mut gnorm2 = 0.0;
        for (a, ba) in dir.iter().zip(&basis) {
            for (b, bb) in dir.iter().zip(&basis) {
                gnorm2 += a * b * dot(ba, bb);
            }
        }
        let scale = radius * norm1(&w) / gnorm2.sqrt();
        for (c, vec) in dir.iter().zip(&basis) {
            for (xi, vi) in x.iter_mut().zip(vec) {
                *xi += scale * c * vi;
            }
        }
    }
    let coords = x
        .into_iter()
        .zip(y)
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    Ok(Point { coords })
}

/// Coefficients of `Re z` in the cell's cone frame: the `v`-coefficient, the
/// `v_j` coefficients, and the residual of the off-frame coordinates.
fn cone_coefficients(x: &[f64], i: &CellIndex) -> (f64, Vec<(usize, f64)>, f64) {
    let j_set = i.j_set();
    let s0 = x[i.base_label() - 1];
    let mut residual: f64 = 0.0;
    for (l, v) in x.iter().enumerate() {
        if !j_set.contains(l + 1) {
            residual = residual.max((v - s0).abs());
        }
    }
    let d: Vec<(usize, f64)> = j_set.labels().iter().map(|&j| (j, s0 - x[j - 1])).collect();
    let c = s0 - d.iter().map(|(_, v)| v).sum::<f64>();
    (c, d, residual)
}

fn membership(n: usize, z: &Point, i: &CellIndex, tau: Tau, tol: f64, interior: bool) -> bool {
    use crate::combinatorics::Rel;
    if z.dim() != n + 1 {
        return false;
    }
    // barycentric coordinates over the flag centers, unwound from the top
    let y = z.im();
    let k = i.flag.len();
    let mut t = vec![0.0; k];
    for l in (0..k).rev() {
        let set = i.flag.subsets()[l];
        let fresh = if l == 0 {
            set
        } else {
            set.difference(i.flag.subsets()[l - 1])
        };
        let probe = fresh.min_label().unwrap();
        let tail: f64 = (l + 1..k)
            .map(|l2| t[l2] / i.flag.subsets()[l2].len() as f64)
            .sum();
        t[l] = set.len() as f64 * (y[probe - 1] - tail);
    }
    let reconstructed = match imaginary_part_unchecked(n, i, &t) {
        Some(y2) => y2,
        None => return false,
    };
    let max_dev = y
        .iter()
        .zip(&reconstructed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    if max_dev > tol {
        return false;
    }
    let sum: f64 = t.iter().sum();
    if (sum - 1.0).abs() > tol {
        return false;
    }
    let lower = if interior { tol } else { -tol };
    if t.iter().any(|v| *v < lower) {
        return false;
    }

    // cone coefficients of the real part
    let x = z.re();
    let (c, d, residual) = cone_coefficients(&x, i);
    if residual > tol {
        return false;
    }
    let sign_ok = |value: f64, sign: i8| -> bool {
        match sign {
            0 => value.abs() <= tol,
            1 => {
                if interior {
                    value >= tol
                } else {
                    value >= -tol
                }
            }
            _ => {
                if interior {
                    value <= -tol
                } else {
                    value <= tol
                }
            }
        }
    };
    if !sign_ok(c, tau) {
        return false;
    }
    for (j, dj) in &d {
        let s = if i.j_le.contains(*j) { -1 } else { 1 };
        if !sign_ok(*dj, s) {
            return false;
        }
    }

    // the defining constraint (z - a_{j0})² ≺ 1
    let j0 = i.base_label();
    let mut w = Complex64::new(0.0, 0.0);
    for (l, zl) in z.coords.iter().enumerate() {
        let shifted = zl - Complex64::new(0.0, if l + 1 == j0 { 1.0 } else { 0.0 });
        w += shifted * shifted;
    }
    if w.im.abs() > tol {
        return false;
    }
    match i.rel {
        Rel::Le => {
            if interior {
                w.re <= 1.0 - tol
            } else {
                w.re <= 1.0 + tol
            }
        }
        Rel::Eq => (w.re - 1.0).abs() <= tol,
    }
}

/// Closed-cell membership within tolerance.
pub fn cell_membership(n: usize, z: &Point, i: &CellIndex, tau: Tau, tol: f64) -> bool {
    membership(n, z, i, tau, tol, false)
}

/// Relative-interior membership within tolerance.
pub fn cell_interior_membership(n: usize, z: &Point, i: &CellIndex, tau: Tau, tol: f64) -> bool {
    membership(n, z, i, tau, tol, true)
}

/// One step of the deformation retraction of the complex unit sphere onto
/// the real sphere: `g(z, t) = f(z,t)·Re z + i·(1-t)·Im z`.
pub fn retraction_step(z: &Point, t: f64) -> Result<Point> {
    let sq = z.square();
    let err = (sq - Complex64::new(1.0, 0.0)).norm();
    if err > TOL {
        return Err(Error::OffSphere(err));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutsideDomain(format!("t = {t} outside [0,1]")));
    }
    let re = z.re();
    let im = z.im();
    let re2 = dot(&re, &re);
    let im2 = dot(&im, &im);
    let f = ((1.0 + (1.0 - t) * (1.0 - t) * im2) / re2).sqrt();
    let coords = re
        .iter()
        .zip(&im)
        .map(|(x, y)| Complex64::new(f * x, (1.0 - t) * y))
        .collect();
    Ok(Point { coords })
}

/// Seeded sample points on the intersection `⋂_{i∈I} S_i`, produced through
/// the coordinate reduction onto the base sphere.
pub fn sample_intersection(
    n: usize,
    set: SubsetMask,
    samples: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !set.is_subset_of(SubsetMask::full(n)) {
        return Err(Error::OutOfRange(format!(
            "{set:?} exceeds the label range"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = set.len() as f64;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut z = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut off_sum = Complex64::new(0.0, 0.0);
        for j in 1..=n + 1 {
            if !set.contains(j) {
                let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                z[j - 1] = w;
                off_sum += w * w;
            }
        }
        // |I|·(z_{j0} - i/|I|)² = 2 - 1/|I| - Σ_{j∉I} z_j²
        let rhs = (Complex64::new(2.0 - 1.0 / m, 0.0) - off_sum) / m;
        let root = rhs.sqrt() * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let zj = Complex64::new(0.0, 1.0 / m) + root;
        for j in set.labels() {
            z[j - 1] = zj;
        }
        out.push(Point { coords: z });
    }
    Ok(out)
}

/// Smallest singular value of the gradient system `{2(z - a_i)}_{i∈I}` at `z`.
pub fn gradient_min_singular(n: usize, set: SubsetMask, z: &Point) -> f64 {
    let labels = set.labels();
    let m = labels.len();
    let rows: Vec<Vec<Complex64>> = (0..m)
        .map(|i| {
            (0..n + 1)
                .map(|l| {
                    let a = Complex64::new(0.0, if l + 1 == labels[i] { 1.0 } else { 0.0 });
                    2.0 * (z.coords[l] - a)
                })
                .collect()
        })
        .collect();
    // Hermitian Gram of the gradient rows, embedded as a real symmetric matrix
    let mut h = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for a in 0..m {
        for b in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            for (x, y) in rows[a].iter().zip(&rows[b]) {
                s += x * y.conj();
            }
            h[a][b] = s;
        }
    }
    let emb = DMatrix::from_fn(2 * m, 2 * m, |r, c| {
        let (rr, rc) = (r % m, c % m);
        match (r / m, c / m) {
            (0, 0) | (1, 1) => h[rr][rc].re,
            (1, 0) => h[rr][rc].im,
            _ => -h[rr][rc].im,
        }
    });
    let eigen = emb.symmetric_eigen();
    let min = eigen
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    min.max(0.0).sqrt()
}

/// Checks general position of the gradients along `samples` seeded points of
/// the intersection: smallest singular value above the rank cutoff at all of
/// them.
pub fn check_general_position(
    n: usize,
    set: SubsetMask,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let points = sample_intersection(n, set, samples, seed)?;
    for z in &points {
        // the sample must actually lie on every participating sphere
        for j in set.labels() {
            let mut w = Complex64::new(0.0, 0.0);
            for (l, zl) in z.coords.iter().enumerate() {
                let shifted = zl - Complex64::new(0.0, if l + 1 == j { 1.0 } else { 0.0 });
                w += shifted * shifted;
            }
            if (w - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
                return Err(Error::OutsideDomain("sampler left the intersection".into()));
            }
        }
        if gradient_min_singular(n, set, z) <= RANK_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
