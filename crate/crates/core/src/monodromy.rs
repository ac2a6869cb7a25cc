//! Picard-Lefschetz monodromy on Borel-Moore classes over the generator
//! basis, specialized to the one-loop bubble arrangement of two spheres in
//! C^D, together with the closed form of its discontinuity.

use crate::combinatorics::{pow_neg_one, SubsetMask};
use crate::intersection::{index_with_imaginary, pl_sign, vanishing_pair_index};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// An integer combination of the relative generators `e_I`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelClass {
    pub n: usize,
    coeffs: BTreeMap<SubsetMask, i64>,
}

impl RelClass {
    pub fn zero(n: usize) -> Self {
        RelClass {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: &[(SubsetMask, i64)]) -> Result<Self> {
        let mut out = RelClass::zero(n);
        for &(set, c) in terms {
            if set.is_empty() {
                return Err(Error::EmptySubset);
            }
            if !set.is_subset_of(SubsetMask::full(n)) {
                return Err(Error::OutOfRange(format!(
                    "{set:?} exceeds the label range"
                )));
            }
            out.add(set, c);
        }
        Ok(out)
    }

    pub fn add(&mut self, set: SubsetMask, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(set).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&set);
        }
    }

    pub fn coefficient(&self, set: SubsetMask) -> i64 {
        *self.coeffs.get(&set).unwrap_or(&0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SubsetMask, &i64)> {
        self.coeffs.iter()
    }
}

/// A Borel-Moore class in the complement: an integer multiple of the
/// imaginary subspace plus integer multiples of vanishing spheres. Sphere
/// slots are keyed by (pinching set, orientation).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BMClass {
    pub n: usize,
    pub base: i64,
    spheres: BTreeMap<(SubsetMask, i8), i64>,
}

impl BMClass {
    /// The class of `(i·R)^{n+1}` itself.
    pub fn imaginary_base(n: usize) -> Self {
        BMClass {
            n,
            base: 1,
            spheres: BTreeMap::new(),
        }
    }

    pub fn sphere_coefficient(&self, set: SubsetMask, orient: i8) -> i64 {
        *self.spheres.get(&(set, orient)).unwrap_or(&0)
    }

    pub fn spheres(&self) -> impl Iterator<Item = (&(SubsetMask, i8), &i64)> {
        self.spheres.iter()
    }

    pub fn add_sphere(&mut self, set: SubsetMask, orient: i8, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.spheres.entry((set, orient)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.spheres.remove(&(set, orient));
        }
    }

    #[must_use]
    pub fn plus(&self, other: &BMClass) -> BMClass {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        out.base += other.base;
        for (&(set, orient), &c) in other.spheres.iter() {
            out.add_sphere(set, orient, c);
        }
        out
    }
}

impl fmt::Display for BMClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·(i·R)^{}", self.base, self.n + 1)?;
        for (&(set, orient), &c) in self.spheres.iter() {
            let tag = if orient >= 0 { "+" } else { "-" };
            write!(f, " {c:+}·s{tag}{set:?}")?;
        }
        Ok(())
    }
}

/// A simple pinch of the spheres indexed by `set`, its vanishing cell in the
/// generator basis, and the orientation of its vanishing sphere.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pinch {
    pub set: SubsetMask,
    pub cell: RelClass,
    pub sphere_orient: i8,
    pub m: usize,
}

impl Pinch {
    /// Builds a pinch, solving the sphere orientation from the self-pairing
    /// requirement `⟨sphere | cell⟩ = 2·(-1)^{(n+1)(n+2)/2}` whenever the
    /// vanishing sphere has even dimension; odd dimensions leave it free and
    /// default to +1.
    pub fn new(n: usize, set: SubsetMask, cell: RelClass) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySubset);
        }
        if cell.n != n {
            return Err(Error::DimensionMismatch(format!(
                "cell lives at n = {} but the pinch at n = {n}",
                cell.n
            )));
        }
        let m = set.len();
        let k = (n + 1)
            .checked_sub(m)
            .ok_or_else(|| Error::OutOfRange(format!("|I| = {m} exceeds n+1 = {}", n + 1)))?;
        // orient · self_coeff · ⟨s|e⟩ must equal ⟨s|e⟩; for odd-dimensional
        // spheres the pairing vanishes and the same rule just fixes the slot
        let self_coeff = cell.coefficient(set);
        let sphere_orient = if self_coeff.abs() == 1 {
            self_coeff as i8
        } else if k % 2 == 0 {
            return Err(Error::NonUnitSelfCoefficient(self_coeff));
        } else {
            1
        };
        Ok(Pinch {
            set,
            cell,
            sphere_orient,
            m,
        })
    }

    /// The unit class of this pinch's vanishing sphere.
    pub fn sphere_class(&self, n: usize) -> BMClass {
        let mut out = BMClass {
            n,
            base: 0,
            spheres: BTreeMap::new(),
        };
        out.add_sphere(self.set, self.sphere_orient, 1);
        out
    }
}

/// The intersection pairing, extended bilinearly: the base pairs through the
/// orientation-certified generator indices, sphere slots through the
/// vanishing pairings times their stored orientation.
pub fn pairing(b: &BMClass, r: &RelClass) -> Result<i64> {
    if b.n != r.n {
        return Err(Error::DimensionMismatch(format!(
            "classes at n = {} and n = {}",
            b.n, r.n
        )));
    }
    let n = b.n;
    let mut total = 0i64;
    for (&set, &c) in r.iter() {
        if b.base != 0 {
            total += b.base * c * index_with_imaginary(n, set)?.0;
        }
        for (&(sphere, orient), &sc) in b.spheres.iter() {
            total += sc * i64::from(orient) * c * vanishing_pair_index(sphere, set, n)?;
        }
    }
    Ok(total)
}

/// One loop around the pinch: `g + pl·⟨g|cell⟩·sphere`.
pub fn loop_action(g: &BMClass, p: &Pinch) -> Result<BMClass> {
    if g.n + 1 < p.m {
        return Err(Error::DimensionMismatch("pinch exceeds dimension".into()));
    }
    let x = pl_sign(g.n, p.m) * pairing(g, &p.cell)?;
    let mut out = g.clone();
    out.add_sphere(p.set, p.sphere_orient, x);
    Ok(out)
}

/// The two variants of the pseudo-threshold bubble pinch: its vanishing cell
/// is `e_{12}` or `e_1 - e_2 + e_{12}` up to sign.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MinusVariant {
    A,
    B,
}

/// The two pinches of the one-loop bubble in D dimensions: the threshold
/// pinch with vanishing cell `e_1 - e_{12}`, and the pseudo-threshold pinch
/// with the selected variant. Variant signs are fixed so the two pinches
/// carry distinct sphere orientations.
pub fn bubble_pinches(d: usize, variant: MinusVariant) -> Result<(Pinch, Pinch)> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("D = {d} below 2")));
    }
    let n = d - 1;
    let s1 = SubsetMask::from_labels(&[1]);
    let s2 = SubsetMask::from_labels(&[2]);
    let s12 = SubsetMask::from_labels(&[1, 2]);
    let plus_cell = RelClass::from_terms(n, &[(s1, 1), (s12, -1)])?;
    let plus = Pinch::new(n, s12, plus_cell)?;
    let minus_cell = match variant {
        MinusVariant::A => RelClass::from_terms(n, &[(s12, 1)])?,
        MinusVariant::B => RelClass::from_terms(n, &[(s1, 1), (s2, -1), (s12, 1)])?,
    };
    let minus = Pinch::new(n, s12, minus_cell)?;
    Ok((plus, minus))
}

/// The Källén function `λ(a,b,c) = a² + b² + c² - 2ab - 2bc - 2ca`.
pub fn kallen(a: f64, b: f64, c: f64) -> f64 {
    a * a + b * b + c * c - 2.0 * (a * b + b * c + c * a)
}

/// `Γ(num/2)` for positive half-integer arguments.
fn gamma_half(num: usize) -> f64 {
    assert!(num >= 1);
    if num.is_multiple_of(2) {
        let k = num / 2;
        (1..k).map(|i| i as f64).product()
    } else {
        let k = (num - 1) / 2;
        let mut val = std::f64::consts::PI.sqrt();
        for i in 0..k {
            val *= i as f64 + 0.5;
        }
        val
    }
}

/// The bubble discontinuity above threshold:
/// `(-1)^{(D+1)(D+2)/2} · π^{(D+3)/2} / (2^{D-4}·Γ((D-1)/2)) ·
///  λ^{(D-3)/2} / (-p²)^{(D-2)/2}` with `λ = λ(-p², m1², m2²)`.
pub fn discontinuity_value(d: usize, p2: f64, m1: f64, m2: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("D = {d} below 2")));
    }
    let s = -p2;
    let threshold = (m1 + m2) * (m1 + m2);
    if s <= threshold {
        return Err(Error::BelowThreshold(s, threshold));
    }
    let lambda = kallen(s, m1 * m1, m2 * m2);
    let sign = pow_neg_one((d + 1) * (d + 2) / 2) as f64;
    let pi = std::f64::consts::PI;
    let value = sign * pi.powf((d as f64 + 3.0) / 2.0)
        / (2f64.powi(d as i32 - 4) * gamma_half(d - 1))
        * lambda.powf((d as f64 - 3.0) / 2.0)
        / s.powf((d as f64 - 2.0) / 2.0);
    Ok(value)
}
