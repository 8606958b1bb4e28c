//! Exterior algebra `Λ(Q^m)` over exact rationals.
//!
//! This is the cohomological model of the Chow ring of an abelian variety of
//! dimension `g` (with `m = 2g` degree-one generators) and of products such as
//! `A × Â`. Elements are sparse: a map from basis blades (strictly increasing
//! index sets, stored as bitmasks) to nonzero rational coefficients.
//!
//! Orientation: the fundamental class of a factor is the wedge of its
//! generators in increasing label order. Fiber integration over a factor keeps
//! the terms containing that whole class and multiplies by the sign of the
//! permutation moving the factor's generators to the front.
//!
//! Pullback is contravariant: for substitutions `T` and `S`,
//! `pullback(T.compose(S), u) == pullback(S, pullback(T, u))`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::scalars::{fmt_rational, int, Rational};

/// Largest supported number of degree-one generators.
pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("ground space mismatch: {0}")]
    GroundMismatch(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid ground space: {0}")]
    InvalidGround(String),
    #[error("ground space is not a product")]
    NotProduct,
    #[error("generator index {index} out of range for {dim} generators")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error(
        "exponential needs an element with only even-degree terms of positive degree (found degree {0})"
    )]
    BadExponent(usize),
}

/// One of the two factors of a product ground space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    First,
    Second,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::First => Factor::Second,
            Factor::Second => Factor::First,
        }
    }
}

/// The degree-one generators of an exterior algebra, with labels.
#[derive(Debug, PartialEq, Eq)]
pub struct GroundSpace {
    labels: Vec<String>,
    factors: Option<(Arc<GroundSpace>, Arc<GroundSpace>)>,
}

impl GroundSpace {
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Arc<Self>, CohomologyError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_GENERATORS {
            return Err(CohomologyError::InvalidGround(format!(
                "need between 1 and {MAX_GENERATORS} generators, got {}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(CohomologyError::InvalidGround(format!("duplicate label {l}")));
            }
        }
        Ok(Arc::new(GroundSpace {
            labels,
            factors: None,
        }))
    }

    /// Generators `{prefix}1 .. {prefix}m`.
    pub fn with_prefix(prefix: &str, m: usize) -> Result<Arc<Self>, CohomologyError> {
        Self::new((1..=m).map(|i| format!("{prefix}{i}")).collect())
    }

    /// The ground space of a product: `first`'s labels followed by `second`'s.
    pub fn product(first: &Arc<Self>, second: &Arc<Self>) -> Result<Arc<Self>, CohomologyError> {
        let mut labels = first.labels.clone();
        labels.extend(second.labels.iter().cloned());
        let mut space = Arc::try_unwrap(Self::new(labels)?).expect("fresh arc");
        space.factors = Some((first.clone(), second.clone()));
        Ok(Arc::new(space))
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn factor(&self, which: Factor) -> Option<&Arc<GroundSpace>> {
        self.factors.as_ref().map(|(a, b)| match which {
            Factor::First => a,
            Factor::Second => b,
        })
    }

    pub fn is_product(&self) -> bool {
        self.factors.is_some()
    }

    fn full_mask(&self) -> u64 {
        mask_below(self.dim())
    }

    /// Bitmask of the generators belonging to `which` inside this product.
    fn factor_mask(&self, which: Factor) -> Result<u64, CohomologyError> {
        let (a, _) = self.factors.as_ref().ok_or(CohomologyError::NotProduct)?;
        let first = mask_below(a.dim());
        Ok(match which {
            Factor::First => first,
            Factor::Second => self.full_mask() & !first,
        })
    }
}

fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn same_ground(a: &Arc<GroundSpace>, b: &Arc<GroundSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_ground(a: &Arc<GroundSpace>, b: &Arc<GroundSpace>) -> Result<(), CohomologyError> {
    if same_ground(a, b) {
        Ok(())
    } else {
        Err(CohomologyError::GroundMismatch(format!(
            "{:?} vs {:?}",
            a.labels, b.labels
        )))
    }
}

/// A basis blade `e_{i1} ∧ … ∧ e_{ik}` with `i1 < … < ik`, as a bitmask.
///
/// Ordered by degree first, then lexicographically by index list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(u64);

impl Blade {
    pub const ONE: Blade = Blade(0);

    pub fn from_mask(mask: u64) -> Self {
        Blade(mask)
    }

    /// Sorts `indices` into a blade, returning the sign of the sorting
    /// permutation, or `None` if an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(Blade, i32)> {
        let mut mask = 0u64;
        let mut sign = 1;
        for &i in indices {
            let bit = 1u64 << i;
            if mask & bit != 0 {
                return None;
            }
            // generators already present with a larger index
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((Blade(mask), sign))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.0 >> i & 1 == 1).collect()
    }

    /// `self ∧ other` as `(blade, sign)`, or `None` when they overlap.
    pub fn wedge(self, other: Blade) -> Option<(Blade, i32)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            inversions += (self.0 >> j).count_ones();
            rest &= rest - 1;
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((Blade(self.0 | other.0), sign))
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 >> diff.trailing_zeros() & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the exterior algebra over a [`GroundSpace`].
#[derive(Debug, Clone)]
pub struct Multivector {
    ground: Arc<GroundSpace>,
    terms: BTreeMap<Blade, Rational>,
}

impl PartialEq for Multivector {
    fn eq(&self, other: &Self) -> bool {
        same_ground(&self.ground, &other.ground) && self.terms == other.terms
    }
}

impl Eq for Multivector {}

impl Multivector {
    pub fn zero(ground: &Arc<GroundSpace>) -> Self {
        Multivector {
            ground: ground.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ground: &Arc<GroundSpace>) -> Self {
        Self::scalar(ground, Rational::one())
    }

    pub fn scalar(ground: &Arc<GroundSpace>, c: Rational) -> Self {
        let mut v = Self::zero(ground);
        v.add_term(Blade::ONE, c);
        v
    }

    /// The degree-one generator with index `i` (0-based).
    pub fn generator(ground: &Arc<GroundSpace>, i: usize) -> Result<Self, CohomologyError> {
        Self::blade(ground, &[i], Rational::one())
    }

    /// `c · e_{i1} ∧ … ∧ e_{ik}` for indices in any order (0-based).
    pub fn blade(ground: &Arc<GroundSpace>, indices: &[usize], c: Rational) -> Result<Self, CohomologyError> {
        if let Some(&index) = indices.iter().find(|&&i| i >= ground.dim()) {
            return Err(CohomologyError::IndexOutOfRange {
                index,
                dim: ground.dim(),
            });
        }
        let mut v = Self::zero(ground);
        if let Some((b, sign)) = Blade::from_indices(indices) {
            v.add_term(b, c * int(sign as i64));
        }
        Ok(v)
    }

    /// Wedge of generators given by label, e.g. `["e1", "f2"]`.
    pub fn from_labels(
        ground: &Arc<GroundSpace>,
        labels: &[&str],
        c: Rational,
    ) -> Result<Self, CohomologyError> {
        let indices = labels
            .iter()
            .map(|l| {
                ground
                    .index_of(l)
                    .ok_or_else(|| CohomologyError::InvalidGround(format!("unknown label {l}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::blade(ground, &indices, c)
    }

    /// All `2^m` basis blades in canonical (degree, lex) order.
    pub fn basis(ground: &Arc<GroundSpace>) -> Vec<Multivector> {
        let m = ground.dim();
        assert!(m < 32, "basis enumeration is limited to fewer than 32 generators");
        let mut blades: Vec<Blade> = (0..1u64 << m).map(Blade).collect();
        blades.sort();
        blades
            .into_iter()
            .map(|b| {
                let mut v = Self::zero(ground);
                v.add_term(b, Rational::one());
                v
            })
            .collect()
    }

    pub fn ground(&self) -> &Arc<GroundSpace> {
        &self.ground
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Rational)> {
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

    pub fn coefficient(&self, blade: Blade) -> Rational {
        self.terms.get(&blade).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, blade: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
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

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|b| b.degree()).collect();
        ds.dedup();
        ds
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    /// The degree-`k` component.
    pub fn grade(&self, k: usize) -> Self {
        Multivector {
            ground: self.ground.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.degree() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ground);
        }
        Multivector {
            ground: self.ground.clone(),
            terms: self.terms.iter().map(|(b, x)| (*b, x * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CohomologyError> {
        check_ground(&self.ground, &other.ground)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.try_add(&-other)
    }

    /// Graded-commutative product with sign bookkeeping.
    pub fn wedge(&self, other: &Self) -> Result<Self, CohomologyError> {
        check_ground(&self.ground, &other.ground)?;
        let mut out = Self::zero(&self.ground);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((blade, sign)) = a.wedge(*b) {
                    let c = x * y;
                    out.add_term(blade, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, CohomologyError> {
        let mut acc = Self::one(&self.ground);
        for _ in 0..n {
            if acc.is_zero() {
                break;
            }
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("multivector add")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_sub(rhs).expect("multivector sub")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector {
            ground: self.ground.clone(),
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (blade, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let name: Vec<&str> = blade
                .indices()
                .into_iter()
                .map(|i| self.ground.labels[i].as_str())
                .collect();
            if name.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", name.join("^"))?;
            } else {
                write!(f, "{} {}", fmt_rational(&mag), name.join("^"))?;
            }
        }
        Ok(())
    }
}

/// A linear map on degree-one generators; its pullback is the induced algebra
/// homomorphism.
///
/// `matrix[i][j]` is the coefficient of generator `i` in the image of
/// generator `j` (column `j` is the image of generator `j`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSubstitution {
    ground: Arc<GroundSpace>,
    matrix: Vec<Vec<Rational>>,
}

impl LinearSubstitution {
    pub fn new(ground: &Arc<GroundSpace>, matrix: Vec<Vec<Rational>>) -> Result<Self, CohomologyError> {
        let m = ground.dim();
        if matrix.len() != m {
            return Err(CohomologyError::Dimension {
                expected: m,
                found: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != m) {
            return Err(CohomologyError::Dimension {
                expected: m,
                found: row.len(),
            });
        }
        Ok(LinearSubstitution {
            ground: ground.clone(),
            matrix,
        })
    }

    pub fn identity(ground: &Arc<GroundSpace>) -> Self {
        Self::scalar(ground, Rational::one())
    }

    /// `c · id`; for integer `c = n` this is the pullback `[n]^*`.
    pub fn scalar(ground: &Arc<GroundSpace>, c: Rational) -> Self {
        let m = ground.dim();
        let matrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { c.clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        LinearSubstitution {
            ground: ground.clone(),
            matrix,
        }
    }

    pub fn ground(&self) -> &Arc<GroundSpace> {
        &self.ground
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    /// The substitution of the composite map `self ∘ inner`: its pullback
    /// applies `self^*` first, then `inner^*`. The matrix is `inner · self`.
    ///
    /// ```text
    /// pullback(T.compose(S), u) == pullback(S, pullback(T, u))
    /// ```
    pub fn compose(&self, inner: &Self) -> Result<Self, CohomologyError> {
        check_ground(&self.ground, &inner.ground)?;
        let m = self.ground.dim();
        let matrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..m).fold(Rational::zero(), |acc, k| {
                            acc + &inner.matrix[i][k] * &self.matrix[k][j]
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(LinearSubstitution {
            ground: self.ground.clone(),
            matrix,
        })
    }

    /// `first × second` on a product ground space (block diagonal).
    pub fn product(first: &Self, second: &Self, product: &Arc<GroundSpace>) -> Result<Self, CohomologyError> {
        let (a, b) = product.factors.as_ref().ok_or(CohomologyError::NotProduct)?;
        check_ground(a, &first.ground)?;
        check_ground(b, &second.ground)?;
        let (m1, m) = (a.dim(), product.dim());
        let matrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| match (i < m1, j < m1) {
                        (true, true) => first.matrix[i][j].clone(),
                        (false, false) => second.matrix[i - m1][j - m1].clone(),
                        _ => Rational::zero(),
                    })
                    .collect()
            })
            .collect();
        Ok(LinearSubstitution {
            ground: product.clone(),
            matrix,
        })
    }

    fn generator_images(&self) -> Vec<Multivector> {
        let m = self.ground.dim();
        (0..m)
            .map(|j| {
                let mut v = Multivector::zero(&self.ground);
                for i in 0..m {
                    v.add_term(Blade(1 << i), self.matrix[i][j].clone());
                }
                v
            })
            .collect()
    }
}

/// The algebra homomorphism extending `t` on degree one.
pub fn pullback(t: &LinearSubstitution, u: &Multivector) -> Result<Multivector, CohomologyError> {
    check_ground(&t.ground, &u.ground)?;
    let images = t.generator_images();
    let mut out = Multivector::zero(&u.ground);
    for (blade, c) in &u.terms {
        let mut acc = Multivector::scalar(&u.ground, c.clone());
        for i in blade.indices() {
            acc = acc.wedge(&images[i])?;
            if acc.is_zero() {
                break;
            }
        }
        for (b, x) in acc.terms {
            out.add_term(b, x);
        }
    }
    Ok(out)
}

/// Pullback along the projection of `product` onto `factor`: re-indexes `u`
/// into the product's generators.
pub fn project_pullback(
    factor: Factor,
    u: &Multivector,
    product: &Arc<GroundSpace>,
) -> Result<Multivector, CohomologyError> {
    let (a, b) = product.factors.as_ref().ok_or(CohomologyError::NotProduct)?;
    let (target, shift) = match factor {
        Factor::First => (a, 0),
        Factor::Second => (b, a.dim()),
    };
    check_ground(target, &u.ground)?;
    Ok(Multivector {
        ground: product.clone(),
        terms: u
            .terms
            .iter()
            .map(|(bl, c)| (Blade(bl.0 << shift), c.clone()))
            .collect(),
    })
}

/// Pushforward along the projection that forgets `over`: integrates the
/// generators of factor `over` and returns a class on the other factor.
pub fn fiber_integrate(over: Factor, u: &Multivector) -> Result<Multivector, CohomologyError> {
    let product = &u.ground;
    let int_mask = product.factor_mask(over)?;
    let remaining = product.factor(over.other()).expect("product").clone();
    let shift = match over {
        Factor::First => product.factor(Factor::First).expect("product").dim(),
        Factor::Second => 0,
    };
    let mut out = Multivector::zero(&remaining);
    for (blade, c) in &u.terms {
        if blade.0 & int_mask != int_mask {
            continue;
        }
        let rest = blade.0 & !int_mask;
        // transpositions needed to move every integrated generator in front of
        // the remaining ones that precede it
        let mut moves = 0u32;
        let mut bits = int_mask;
        while bits != 0 {
            let i = bits.trailing_zeros();
            moves += (rest & mask_below(i as usize)).count_ones();
            bits &= bits - 1;
        }
        let c = if moves % 2 == 0 { c.clone() } else { -c };
        out.add_term(Blade(rest >> shift), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;
    use proptest::prelude::*;

    fn space(m: usize) -> Arc<GroundSpace> {
        GroundSpace::with_prefix("e", m).unwrap()
    }

    fn product(g: usize) -> (Arc<GroundSpace>, Arc<GroundSpace>, Arc<GroundSpace>) {
        let a = GroundSpace::with_prefix("e", 2 * g).unwrap();
        let b = GroundSpace::with_prefix("f", 2 * g).unwrap();
        let p = GroundSpace::product(&a, &b).unwrap();
        (a, b, p)
    }

    fn mv(ground: &Arc<GroundSpace>, terms: &[(i64, &[usize])]) -> Multivector {
        terms.iter().fold(Multivector::zero(ground), |acc, (c, idx)| {
            &acc + &Multivector::blade(ground, idx, int(*c)).unwrap()
        })
    }

    #[test]
    fn wedge_examples() {
        let g = space(2);
        let e1 = mv(&g, &[(1, &[0])]);
        let e2 = mv(&g, &[(1, &[1])]);
        assert!(e1.wedge(&e1).unwrap().is_zero());
        assert!((&e1.wedge(&e2).unwrap() + &e2.wedge(&e1).unwrap()).is_zero());
        let lhs = (&e1 + &e2).wedge(&e2).unwrap();
        assert_eq!(lhs, mv(&g, &[(1, &[0, 1])]));
    }

    #[test]
    fn ground_mismatch_rejected() {
        let a = space(2);
        let b = GroundSpace::with_prefix("f", 2).unwrap();
        let err = Multivector::one(&a).wedge(&Multivector::one(&b)).unwrap_err();
        assert!(matches!(err, CohomologyError::GroundMismatch(_)));
    }

    #[test]
    fn ground_validation() {
        assert!(GroundSpace::new(vec!["a", "a"]).is_err());
        assert!(GroundSpace::new(Vec::<String>::new()).is_err());
        let a = GroundSpace::with_prefix("e", 2).unwrap();
        assert!(GroundSpace::product(&a, &a).is_err());
    }

    #[test]
    fn blade_order_is_graded_lex() {
        let mut blades: Vec<Blade> = (0..8u64).map(Blade).collect();
        blades.sort();
        let idx: Vec<Vec<usize>> = blades.iter().map(|b| b.indices()).collect();
        assert_eq!(
            idx,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn pullback_examples() {
        let g = space(2);
        let u = mv(&g, &[(1, &[0, 1])]);
        let two = LinearSubstitution::scalar(&g, int(2));
        assert_eq!(pullback(&two, &u).unwrap(), u.scale(&int(4)));
        assert_eq!(pullback(&LinearSubstitution::identity(&g), &u).unwrap(), u);
        // e1 -> e1 + e2, e2 -> e2
        let shear = LinearSubstitution::new(&g, vec![vec![int(1), int(0)], vec![int(1), int(1)]]).unwrap();
        assert_eq!(pullback(&shear, &u).unwrap(), u);
        assert_eq!(
            pullback(&shear, &mv(&g, &[(1, &[0])])).unwrap(),
            mv(&g, &[(1, &[0]), (1, &[1])])
        );
    }

    #[test]
    fn pullback_dimension_checked() {
        let g = space(2);
        assert!(matches!(
            LinearSubstitution::new(&g, vec![vec![int(1)]]),
            Err(CohomologyError::Dimension {
                expected: 2,
                found: 1
            })
        ));
        let t = LinearSubstitution::identity(&space(3));
        assert!(pullback(&t, &Multivector::one(&g)).is_err());
    }

    #[test]
    fn composition_convention() {
        let g = space(2);
        let t = LinearSubstitution::new(&g, vec![vec![int(1), int(2)], vec![int(0), int(1)]]).unwrap();
        let s = LinearSubstitution::new(&g, vec![vec![int(0), int(1)], vec![int(3), int(0)]]).unwrap();
        let u = mv(&g, &[(1, &[0]), (5, &[1]), (2, &[0, 1])]);
        assert_eq!(
            pullback(&t.compose(&s).unwrap(), &u).unwrap(),
            pullback(&s, &pullback(&t, &u).unwrap()).unwrap()
        );
    }

    #[test]
    fn projection_examples() {
        let (a, b, p) = product(1);
        assert_eq!(
            project_pullback(Factor::First, &Multivector::one(&a), &p).unwrap(),
            Multivector::one(&p)
        );
        assert_eq!(
            project_pullback(Factor::First, &mv(&a, &[(1, &[0])]), &p).unwrap(),
            Multivector::from_labels(&p, &["e1"], int(1)).unwrap()
        );
        assert_eq!(
            project_pullback(Factor::Second, &mv(&b, &[(1, &[0, 1])]), &p).unwrap(),
            Multivector::from_labels(&p, &["f1", "f2"], int(1)).unwrap()
        );
        assert!(project_pullback(Factor::Second, &mv(&a, &[(1, &[0])]), &p).is_err());
        assert!(project_pullback(Factor::First, &Multivector::one(&a), &a).is_err());
    }

    #[test]
    fn fiber_integration_examples() {
        let (_, b, p) = product(1);
        let full = Multivector::from_labels(&p, &["e1", "e2"], int(1)).unwrap();
        assert_eq!(
            fiber_integrate(Factor::First, &full).unwrap(),
            Multivector::one(&b)
        );
        let partial = Multivector::from_labels(&p, &["e1", "f1"], int(1)).unwrap();
        assert!(fiber_integrate(Factor::First, &partial).unwrap().is_zero());
        let mixed = Multivector::from_labels(&p, &["e1", "f1", "e2", "f2"], int(1)).unwrap();
        assert_eq!(
            fiber_integrate(Factor::First, &mixed).unwrap(),
            mv(&b, &[(-1, &[0, 1])])
        );
        assert_eq!(
            fiber_integrate(Factor::First, &Multivector::one(&space(2))),
            Err(CohomologyError::NotProduct)
        );
    }

    #[test]
    fn fiber_integration_sign_for_odd_factors() {
        // factors of odd size: moving the second factor in front costs parity
        let a = GroundSpace::with_prefix("x", 1).unwrap();
        let b = GroundSpace::with_prefix("y", 1).unwrap();
        let p = GroundSpace::product(&a, &b).unwrap();
        let u = Multivector::from_labels(&p, &["x1", "y1"], int(1)).unwrap();
        assert_eq!(
            fiber_integrate(Factor::Second, &u).unwrap(),
            mv(&a, &[(-1, &[0])])
        );
        assert_eq!(
            fiber_integrate(Factor::First, &u).unwrap(),
            Multivector::blade(&b, &[0], int(1)).unwrap()
        );
    }

    #[test]
    fn display_format() {
        let g = space(2);
        let u = &mv(&g, &[(2, &[0, 1]), (-1, &[1])]) + &Multivector::scalar(&g, rat(1, 2));
        assert_eq!(u.to_string(), "1/2 - e2 + 2 e1^e2");
        assert_eq!(Multivector::zero(&g).to_string(), "0");
    }

    fn arb_mv(g: Arc<GroundSpace>, max_terms: usize) -> impl Strategy<Value = Multivector> {
        let m = g.dim();
        proptest::collection::vec((0u64..(1 << m), -6i64..6, 1i64..4), 0..max_terms).prop_map(move |ts| {
            ts.into_iter().fold(Multivector::zero(&g), |acc, (mask, n, d)| {
                let mut t = Multivector::zero(&g);
                t.add_term(Blade(mask), rat(n, d));
                &acc + &t
            })
        })
    }

    fn arb_homogeneous(g: Arc<GroundSpace>) -> impl Strategy<Value = Multivector> {
        let m = g.dim();
        (0..=m, arb_mv(g, 6)).prop_map(|(k, v)| v.grade(k))
    }

    fn arb_subst(g: Arc<GroundSpace>) -> impl Strategy<Value = LinearSubstitution> {
        let m = g.dim();
        proptest::collection::vec(proptest::collection::vec(-3i64..4, m), m).prop_map(move |rows| {
            LinearSubstitution::new(
                &g,
                rows.into_iter()
                    .map(|r| r.into_iter().map(int).collect())
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn graded_commutativity(u in arb_homogeneous(space(5)), v in arb_homogeneous(space(5))) {
            let du = u.degrees().first().copied().unwrap_or(0);
            let dv = v.degrees().first().copied().unwrap_or(0);
            let sign = if (du * dv) % 2 == 0 { int(1) } else { int(-1) };
            prop_assert_eq!(u.wedge(&v).unwrap(), v.wedge(&u).unwrap().scale(&sign));
        }

        #[test]
        fn wedge_is_associative(u in arb_mv(space(4), 5), v in arb_mv(space(4), 5), w in arb_mv(space(4), 5)) {
            prop_assert_eq!(u.wedge(&v).unwrap().wedge(&w).unwrap(), u.wedge(&v.wedge(&w).unwrap()).unwrap());
        }

        #[test]
        fn pullback_is_ring_homomorphism(t in arb_subst(space(4)), u in arb_mv(space(4), 5), v in arb_mv(space(4), 5)) {
            let lhs = pullback(&t, &u.wedge(&v).unwrap()).unwrap();
            let rhs = pullback(&t, &u).unwrap().wedge(&pullback(&t, &v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn multiplication_by_n_scales_by_n_to_the_degree(n in -5i64..=5, u in arb_homogeneous(space(4))) {
            let k = u.degrees().first().copied().unwrap_or(0) as u32;
            let t = LinearSubstitution::scalar(&space(4), int(n));
            prop_assert_eq!(pullback(&t, &u).unwrap(), u.scale(&int(n.pow(k))));
        }

        #[test]
        fn composition_is_contravariant(t in arb_subst(space(3)), s in arb_subst(space(3)), u in arb_mv(space(3), 6)) {
            prop_assert_eq!(
                pullback(&t.compose(&s).unwrap(), &u).unwrap(),
                pullback(&s, &pullback(&t, &u).unwrap()).unwrap()
            );
        }
    }
}
