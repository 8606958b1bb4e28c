//! Truncated polynomials in the Picard-model coordinates.
//!
//! A [`SymCycle`] is an element of the free commutative algebra on the
//! rational coordinates of `Pic(A)_Q`, with every monomial of size above the
//! degree cap set to zero. It models the divisor-generated part of
//! `CH(A)_Q` with no relations except the top-degree vanishing, so spans
//! computed here bound the spans of the actual classes from above.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use super::OrbitError;
use crate::divisor_model::{ModelSpec, PicClass};
use crate::scalars::{fmt_rational, Rational};
use crate::semigroup::{affine_pullback, AffineEndo};

/// A multiset of coordinate indices, kept sorted. Ordered by size, then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        Monomial(indices)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn times(&self, i: u32) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        let pos = self.0.partition_point(|&x| x <= i);
        v.extend_from_slice(&self.0[..pos]);
        v.push(i);
        v.extend_from_slice(&self.0[pos..]);
        Monomial(v)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial::new(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A truncated polynomial over the Picard model of `spec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymCycle {
    spec: ModelSpec,
    degree_cap: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SymCycle {
    pub fn zero(spec: &ModelSpec, degree_cap: usize) -> Self {
        SymCycle {
            spec: *spec,
            degree_cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &ModelSpec, degree_cap: usize) -> Self {
        let mut x = Self::zero(spec, degree_cap);
        x.add_term(Monomial::one(), Rational::one());
        x
    }

    /// The default cap: the dimension `g` of the model variety, so products
    /// of more than `g` divisor classes vanish.
    pub fn default_cap(spec: &ModelSpec) -> usize {
        spec.g()
    }

    /// A divisor class as a degree-one cycle.
    pub fn from_class(spec: &ModelSpec, d: &PicClass, degree_cap: usize) -> Result<Self, OrbitError> {
        spec.check_class(d)?;
        let mut x = Self::zero(spec, degree_cap);
        if degree_cap == 0 {
            return Ok(x);
        }
        for (i, c) in spec.coords(d).into_iter().enumerate() {
            x.add_term(Monomial(vec![i as u32]), c);
        }
        Ok(x)
    }

    /// Builds a cycle from explicit monomials; sizes above the cap are dropped.
    pub fn from_terms(
        spec: &ModelSpec,
        degree_cap: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self, OrbitError> {
        let mut x = Self::zero(spec, degree_cap);
        for (m, c) in terms {
            if let Some(&i) = m.0.iter().find(|&&i| i as usize >= spec.pic_dim()) {
                return Err(OrbitError::VariableOutOfRange {
                    index: i as usize,
                    n_vars: spec.pic_dim(),
                });
            }
            x.add_term(m, c);
        }
        Ok(x)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn n_vars(&self) -> usize {
        self.spec.pic_dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Rational> {
        self.terms.get(m)
    }

    /// Smallest monomial in the canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.degree() > self.degree_cap {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &SymCycle) -> Result<(), OrbitError> {
        if self.spec != other.spec || self.degree_cap != other.degree_cap {
            return Err(OrbitError::ModelMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SymCycle) -> Result<SymCycle, OrbitError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymCycle) -> Result<SymCycle, OrbitError> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> SymCycle {
        let mut out = SymCycle::zero(&self.spec, self.degree_cap);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        out
    }

    /// `self - c · other`, in place.
    pub(crate) fn sub_scaled(&mut self, c: &Rational, other: &SymCycle) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), -(c * x));
        }
    }

    pub fn mul(&self, other: &SymCycle) -> Result<SymCycle, OrbitError> {
        self.check(other)?;
        let mut out = SymCycle::zero(&self.spec, self.degree_cap);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.degree() + b.degree() <= self.degree_cap {
                    out.add_term(a.mul(b), x * y);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> SymCycle {
        let mut acc = SymCycle::one(&self.spec, self.degree_cap);
        for _ in 0..n {
            acc = acc.mul(self).expect("same model");
        }
        acc
    }

    /// Distinct monomial sizes, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(Monomial::degree).collect();
        ds.dedup();
        ds
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn component(&self, k: usize) -> SymCycle {
        let mut out = SymCycle::zero(&self.spec, self.degree_cap);
        out.terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        out
    }

    pub fn homogeneous_components(&self) -> Vec<SymCycle> {
        self.degrees().into_iter().map(|k| self.component(k)).collect()
    }

    /// Recovers the divisor class of a degree-one cycle.
    pub fn to_class(&self) -> Option<PicClass> {
        if self.terms.keys().any(|m| m.degree() != 1) {
            return None;
        }
        let mut coords = vec![Rational::zero(); self.n_vars()];
        for (m, c) in &self.terms {
            coords[m.0[0] as usize] = c.clone();
        }
        self.spec.class_from_coords(&coords).ok()
    }
}

impl fmt::Display for SymCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let labels = self.spec.coordinate_labels();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mut names = Vec::new();
            let mut idx = m.0.iter().peekable();
            while let Some(&i) = idx.next() {
                let mut power = 1;
                while idx.peek() == Some(&&i) {
                    idx.next();
                    power += 1;
                }
                let name = &labels[i as usize];
                names.push(if power == 1 {
                    name.clone()
                } else {
                    format!("{name}^{power}")
                });
            }
            if names.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", names.join("*"))?;
            } else {
                write!(f, "{} {}", fmt_rational(&mag), names.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The pullback of an affine endomorphism as a `Q`-linear map on Picard
/// coordinates, stored column by column.
#[derive(Debug, Clone)]
pub struct PicLinearMap {
    spec: ModelSpec,
    columns: Vec<Vec<(u32, Rational)>>,
}

impl PicLinearMap {
    pub fn from_affine(spec: &ModelSpec, h: &AffineEndo) -> Result<Self, OrbitError> {
        spec.check_endo(&h.linear)?;
        spec.check_point(&h.shift)?;
        let columns = (0..spec.pic_dim())
            .map(|i| {
                let image = affine_pullback(h, &spec.basis_class(i))?;
                Ok(spec
                    .coords(&image)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j as u32, c))
                    .collect())
            })
            .collect::<Result<Vec<_>, OrbitError>>()?;
        Ok(PicLinearMap { spec: *spec, columns })
    }

    /// Column `i` lists the image of coordinate `i` as `(index, coefficient)`.
    pub(crate) fn columns(&self) -> &[Vec<(u32, Rational)>] {
        &self.columns
    }

    /// Image of a single monomial, as a sorted list of terms.
    pub fn expand(&self, m: &Monomial) -> Vec<(Monomial, Rational)> {
        let mut partial: BTreeMap<Monomial, Rational> = BTreeMap::new();
        partial.insert(Monomial::one(), Rational::one());
        for &i in &m.0 {
            let mut next: BTreeMap<Monomial, Rational> = BTreeMap::new();
            for (pm, pc) in &partial {
                for (j, a) in &self.columns[i as usize] {
                    let e = next.entry(pm.times(*j)).or_insert_with(Rational::zero);
                    *e += pc * a;
                }
            }
            next.retain(|_, v| !v.is_zero());
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        partial.into_iter().collect()
    }

    /// Extends the map multiplicatively to monomials.
    pub fn apply(&self, x: &SymCycle) -> Result<SymCycle, OrbitError> {
        if x.spec != self.spec {
            return Err(OrbitError::ModelMismatch);
        }
        Ok(apply_expanded(x, |m| self.expand(m)))
    }
}

/// `Σ c_m · image(m)` over the terms of `x`.
pub(crate) fn apply_expanded<E, I>(x: &SymCycle, mut image: E) -> SymCycle
where
    E: FnMut(&Monomial) -> I,
    I: std::borrow::Borrow<Vec<(Monomial, Rational)>>,
{
    let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (m, c) in &x.terms {
        for (pm, pc) in image(m).borrow() {
            let e = acc.entry(pm.clone()).or_insert_with(Rational::zero);
            *e += c * pc;
        }
    }
    let mut out = SymCycle::zero(&x.spec, x.degree_cap);
    for (m, c) in acc {
        out.add_term(m, c);
    }
    out
}

/// `h^*` extended to a ring homomorphism on truncated cycles.
pub fn sym_pullback(h: &AffineEndo, x: &SymCycle) -> Result<SymCycle, OrbitError> {
    PicLinearMap::from_affine(&x.spec, h)?.apply(x)
}
