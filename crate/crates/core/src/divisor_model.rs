//! Arithmetic model of `Pic(A) ⊗ Q` for `A = E^g`.
//!
//! `E` is an elliptic curve with `End(E) ⊗ Q = Q(√−d)` (`d = 0` for `Q`), and
//! the Mordell–Weil space `E(k) ⊗ Q` is modelled as `Q(√−d)^ρ`. With the
//! product principal polarization:
//!
//! * `NS(A)_Q` is the space of Hermitian `g × g` matrices `N`;
//! * `Pic⁰(A)_Q ≅ A(k)_Q` is the space of `g × ρ` matrices `c`;
//! * a class is a pair `(N, c)`, the split form of
//!   `0 → Pic⁰ → Pic → NS → 0`.
//!
//! Group endomorphisms are `g × g` matrices `f` acting by
//! `f^*(N, c) = (f†Nf, f†c)` (`†` = conjugate transpose, the Rosati
//! involution) and translations act by `t_a^*(N, c) = (N, c + N·a)`.
//! `[−1]^*` is `(N, c) ↦ (N, −c)`, so `N` is the symmetric part and `c` the
//! antisymmetric part.

use std::sync::Arc;

use num::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::cohomology::{CohomologyError, GroundSpace, LinearSubstitution};
use crate::matrix::{MatrixError, QuadMatrix};
use crate::scalars::{rat, QuadField, QuadScalar, Rational, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    InvalidSpec(String),
    #[error("{what}: expected shape {expected:?}, found {found:?}")]
    Shape {
        what: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("NS part is not hermitian")]
    NotHermitian,
    #[error("coordinate vector has length {found}, expected {expected}")]
    Coordinates { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Parameters of the model: `A = E^g`, `End⁰(E) = Q(√−d)`, Mordell–Weil rank `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelSpec {
    g: usize,
    field: QuadField,
    rho: usize,
}

impl ModelSpec {
    pub fn new(g: usize, d: u64, rho: usize) -> Result<Self, ModelError> {
        if g == 0 {
            return Err(ModelError::InvalidSpec("g must be positive".into()));
        }
        if rho == 0 {
            return Err(ModelError::InvalidSpec("rho must be positive".into()));
        }
        Ok(ModelSpec {
            g,
            field: QuadField::new(d)?,
            rho,
        })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn d(&self) -> u64 {
        self.field.d()
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// The same curve and Mordell–Weil data with `g` replaced.
    pub fn with_g(&self, g: usize) -> Result<Self, ModelError> {
        ModelSpec::new(g, self.d(), self.rho)
    }

    /// `dim_Q NS(A)_Q`: `g(g+1)/2` over `Q`, `g²` over `Q(√−d)`.
    pub fn ns_dim(&self) -> usize {
        if self.field.is_rational() {
            self.g * (self.g + 1) / 2
        } else {
            self.g * self.g
        }
    }

    /// `dim_Q Pic⁰(A)_Q = g·ρ·[Q(√−d):Q]`.
    pub fn pic0_dim(&self) -> usize {
        self.g * self.rho * self.field.rational_dim()
    }

    pub fn pic_dim(&self) -> usize {
        self.ns_dim() + self.pic0_dim()
    }

    pub fn zero_class(&self) -> PicClass {
        PicClass {
            ns: HermClass(QuadMatrix::zeros(self.field, self.g, self.g)),
            alg0: Pic0Class(QuadMatrix::zeros(self.field, self.g, self.rho)),
        }
    }

    pub fn identity_endo(&self) -> Endo {
        Endo(QuadMatrix::identity(self.field, self.g))
    }

    /// `[n]`, multiplication by `n`.
    pub fn multiplication(&self, n: i64) -> Endo {
        Endo(QuadMatrix::scalar(self.field, self.g, self.field.from_int(n)))
    }

    pub fn zero_point(&self) -> Point {
        Point(QuadMatrix::zeros(self.field, self.g, self.rho))
    }

    pub fn check_class(&self, d: &PicClass) -> Result<(), ModelError> {
        self.check_shape("ns", &d.ns.0, (self.g, self.g))?;
        self.check_shape("pic0", &d.alg0.0, (self.g, self.rho))?;
        if !d.ns.0.is_hermitian() {
            return Err(ModelError::NotHermitian);
        }
        Ok(())
    }

    pub fn check_endo(&self, f: &Endo) -> Result<(), ModelError> {
        self.check_shape("endomorphism", &f.0, (self.g, self.g))
    }

    pub fn check_point(&self, a: &Point) -> Result<(), ModelError> {
        self.check_shape("point", &a.0, (self.g, self.rho))
    }

    fn check_shape(
        &self,
        what: &'static str,
        m: &QuadMatrix,
        expected: (usize, usize),
    ) -> Result<(), ModelError> {
        if m.field() != self.field {
            return Err(ScalarError::DiscriminantMismatch {
                left: self.field.d(),
                right: m.field().d(),
            }
            .into());
        }
        if m.shape() != expected {
            return Err(ModelError::Shape {
                what,
                expected,
                found: m.shape(),
            });
        }
        Ok(())
    }

    /// Names of the rational coordinates used by [`ModelSpec::coords`].
    pub fn coordinate_labels(&self) -> Vec<String> {
        let imag = !self.field.is_rational();
        let mut out = Vec::with_capacity(self.pic_dim());
        for i in 0..self.g {
            for j in i..self.g {
                if i == j || !imag {
                    out.push(format!("ns[{i},{j}]"));
                } else {
                    out.push(format!("ns[{i},{j}].re"));
                    out.push(format!("ns[{i},{j}].im"));
                }
            }
        }
        for i in 0..self.g {
            for k in 0..self.rho {
                if imag {
                    out.push(format!("pic0[{i},{k}].re"));
                    out.push(format!("pic0[{i},{k}].im"));
                } else {
                    out.push(format!("pic0[{i},{k}]"));
                }
            }
        }
        out
    }

    /// The class as a vector over `Q`: upper-triangular NS entries
    /// (real diagonal, then re/im off the diagonal), then Pic⁰ entries.
    pub fn coords(&self, d: &PicClass) -> Vec<Rational> {
        let imag = !self.field.is_rational();
        let mut out = Vec::with_capacity(self.pic_dim());
        for i in 0..self.g {
            for j in i..self.g {
                let x = d.ns.0.get(i, j);
                out.push(x.re().clone());
                if i != j && imag {
                    out.push(x.im().clone());
                }
            }
        }
        for i in 0..self.g {
            for k in 0..self.rho {
                let x = d.alg0.0.get(i, k);
                out.push(x.re().clone());
                if imag {
                    out.push(x.im().clone());
                }
            }
        }
        out
    }

    pub fn class_from_coords(&self, coords: &[Rational]) -> Result<PicClass, ModelError> {
        if coords.len() != self.pic_dim() {
            return Err(ModelError::Coordinates {
                expected: self.pic_dim(),
                found: coords.len(),
            });
        }
        let imag = !self.field.is_rational();
        let mut it = coords.iter().cloned();
        let mut ns = QuadMatrix::zeros(self.field, self.g, self.g);
        for i in 0..self.g {
            for j in i..self.g {
                let re = it.next().expect("length checked");
                let im = if i != j && imag {
                    it.next().expect("length checked")
                } else {
                    Rational::zero()
                };
                let x = self.field.element(re, im)?;
                ns.set(j, i, x.conj());
                ns.set(i, j, x);
            }
        }
        let mut alg0 = QuadMatrix::zeros(self.field, self.g, self.rho);
        for i in 0..self.g {
            for k in 0..self.rho {
                let re = it.next().expect("length checked");
                let im = if imag {
                    it.next().expect("length checked")
                } else {
                    Rational::zero()
                };
                alg0.set(i, k, self.field.element(re, im)?);
            }
        }
        Ok(PicClass {
            ns: HermClass(ns),
            alg0: Pic0Class(alg0),
        })
    }

    /// The `i`-th coordinate basis class.
    pub fn basis_class(&self, i: usize) -> PicClass {
        let mut coords = vec![Rational::zero(); self.pic_dim()];
        coords[i] = Rational::one();
        self.class_from_coords(&coords)
            .expect("basis coordinates are valid")
    }

    /// Ground space `e1..e_{2g}` of `H¹(A)` used by [`Endo::cohomology_substitution`].
    pub fn cohomology_ground(&self) -> Result<Arc<GroundSpace>, CohomologyError> {
        GroundSpace::with_prefix("e", 2 * self.g)
    }
}

/// A class in `NS(A)_Q`: a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HermClass(QuadMatrix);

impl HermClass {
    pub fn new(m: QuadMatrix) -> Result<Self, ModelError> {
        if !m.is_hermitian() {
            return Err(ModelError::NotHermitian);
        }
        Ok(HermClass(m))
    }

    pub fn matrix(&self) -> &QuadMatrix {
        &self.0
    }
}

/// A class in `Pic⁰(A)_Q`, stored as a `g × ρ` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pic0Class(QuadMatrix);

impl Pic0Class {
    pub fn new(m: QuadMatrix) -> Self {
        Pic0Class(m)
    }

    pub fn matrix(&self) -> &QuadMatrix {
        &self.0
    }
}

/// A class in `Pic(A)_Q` in split form `(N, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PicClass {
    pub ns: HermClass,
    pub alg0: Pic0Class,
}

impl PicClass {
    pub fn new(ns: HermClass, alg0: Pic0Class) -> Result<Self, ModelError> {
        if ns.0.field() != alg0.0.field() || ns.0.rows() != alg0.0.rows() {
            return Err(ModelError::Shape {
                what: "pic0",
                expected: (ns.0.rows(), alg0.0.cols()),
                found: alg0.0.shape(),
            });
        }
        Ok(PicClass { ns, alg0 })
    }

    pub fn field(&self) -> QuadField {
        self.ns.0.field()
    }

    pub fn is_zero(&self) -> bool {
        self.ns.0.is_zero() && self.alg0.0.is_zero()
    }

    pub fn add(&self, other: &PicClass) -> Result<PicClass, ModelError> {
        Ok(PicClass {
            ns: HermClass(self.ns.0.add(&other.ns.0)?),
            alg0: Pic0Class(self.alg0.0.add(&other.alg0.0)?),
        })
    }

    pub fn sub(&self, other: &PicClass) -> Result<PicClass, ModelError> {
        Ok(PicClass {
            ns: HermClass(self.ns.0.sub(&other.ns.0)?),
            alg0: Pic0Class(self.alg0.0.sub(&other.alg0.0)?),
        })
    }

    /// Multiplication by a rational.
    pub fn scale(&self, r: &Rational) -> PicClass {
        PicClass {
            ns: HermClass(self.ns.0.map(|x| x.scale(r))),
            alg0: Pic0Class(self.alg0.0.map(|x| x.scale(r))),
        }
    }
}

/// A group endomorphism of `A`: a `g × g` matrix over `End⁰(E)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endo(pub QuadMatrix);

impl Endo {
    pub fn matrix(&self) -> &QuadMatrix {
        &self.0
    }

    /// Rosati adjoint `f†`.
    pub fn rosati(&self) -> Endo {
        Endo(self.0.adjoint())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endo) -> Result<Endo, ModelError> {
        Ok(Endo(self.0.mul(&other.0)?))
    }

    pub fn add(&self, other: &Endo) -> Result<Endo, ModelError> {
        Ok(Endo(self.0.add(&other.0)?))
    }

    pub fn apply(&self, a: &Point) -> Result<Point, ModelError> {
        Ok(Point(self.0.mul(&a.0)?))
    }

    /// The pullback `f^*` on `H¹(A) = Q^{2g}`.
    ///
    /// Factor `i` of `E^g` contributes generators `e_{2i+1}, e_{2i+2}`, the
    /// coordinates of `H¹(E)` in the basis `(1, ω)`. The substitution is the
    /// transpose of the real action of `f`, so compositions follow the
    /// contravariant convention of [`LinearSubstitution::compose`].
    pub fn cohomology_substitution(
        &self,
        ground: &Arc<GroundSpace>,
    ) -> Result<LinearSubstitution, CohomologyError> {
        let g = self.0.rows();
        let d = Rational::from_integer(self.0.field().d().into());
        let mut real = vec![vec![Rational::zero(); 2 * g]; 2 * g];
        for i in 0..g {
            for j in 0..g {
                let x = self.0.get(i, j);
                let (a, b) = (x.re().clone(), x.im().clone());
                // multiplication by a + bω on the basis (1, ω)
                real[2 * i][2 * j] = a.clone();
                real[2 * i + 1][2 * j] = b.clone();
                real[2 * i][2 * j + 1] = -(&d * &b);
                real[2 * i + 1][2 * j + 1] = a;
            }
        }
        let transposed = (0..2 * g)
            .map(|r| (0..2 * g).map(|c| real[c][r].clone()).collect())
            .collect();
        LinearSubstitution::new(ground, transposed)
    }
}

/// A `k`-rational point of `A`, as an element of `A(k)_Q = M^g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point(pub QuadMatrix);

impl Point {
    pub fn matrix(&self) -> &QuadMatrix {
        &self.0
    }

    pub fn add(&self, other: &Point) -> Result<Point, ModelError> {
        Ok(Point(self.0.add(&other.0)?))
    }

    pub fn neg(&self) -> Point {
        Point(self.0.neg())
    }

    pub fn scale_int(&self, k: i64) -> Point {
        let s = self.0.field().from_int(k);
        Point(self.0.scale(&s))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

fn shape_err(what: &'static str, expected: (usize, usize), found: (usize, usize)) -> ModelError {
    ModelError::Shape {
        what,
        expected,
        found,
    }
}

fn check_pair(
    n: &QuadMatrix,
    other: &QuadMatrix,
    what: &'static str,
    cols: Option<usize>,
) -> Result<(), ModelError> {
    let expected = (n.rows(), cols.unwrap_or(other.cols()));
    if other.shape() != expected || other.field() != n.field() {
        return Err(shape_err(what, expected, other.shape()));
    }
    Ok(())
}

/// `f^*(N, c) = (f†Nf, f†c)`.
pub fn endo_pullback(f: &Endo, d: &PicClass) -> Result<PicClass, ModelError> {
    check_pair(&d.ns.0, &f.0, "endomorphism", Some(d.ns.0.rows()))?;
    let adj = f.0.adjoint();
    Ok(PicClass {
        ns: HermClass(adj.mul(&d.ns.0)?.mul(&f.0)?),
        alg0: Pic0Class(adj.mul(&d.alg0.0)?),
    })
}

/// `t_a^*(N, c) = (N, c + N·a)`.
pub fn translate_pullback(a: &Point, d: &PicClass) -> Result<PicClass, ModelError> {
    check_pair(&d.ns.0, &a.0, "point", Some(d.alg0.0.cols()))?;
    Ok(PicClass {
        ns: d.ns.clone(),
        alg0: Pic0Class(d.alg0.0.add(&d.ns.0.mul(&a.0)?)?),
    })
}

/// `[−1]^*(N, c) = (N, −c)`.
pub fn minus_one_pullback(d: &PicClass) -> PicClass {
    PicClass {
        ns: d.ns.clone(),
        alg0: Pic0Class(d.alg0.0.neg()),
    }
}

/// The antisymmetric splitting `φ(D) = (D − [−1]^*D)/2`, which is the stored
/// Pic⁰ component.
pub fn split_antisym(d: &PicClass) -> Pic0Class {
    d.alg0.clone()
}

/// `φ` evaluated literally through [`minus_one_pullback`]; must agree with
/// [`split_antisym`].
pub fn split_antisym_via_formula(d: &PicClass) -> Result<PicClass, ModelError> {
    Ok(d.sub(&minus_one_pullback(d))?.scale(&rat(1, 2)))
}

/// `p_±(D) = (D ± [−1]^*D)/2`, returned as `(p₊(D), p₋(D)) = ((N,0), (0,c))`.
pub fn sym_antisym_projectors(d: &PicClass) -> (PicClass, PicClass) {
    let field = d.field();
    let g = d.ns.0.rows();
    let plus = PicClass {
        ns: d.ns.clone(),
        alg0: Pic0Class(QuadMatrix::zeros(field, g, d.alg0.0.cols())),
    };
    let minus = PicClass {
        ns: HermClass(QuadMatrix::zeros(field, g, g)),
        alg0: d.alg0.clone(),
    };
    (plus, minus)
}

/// `p_±` evaluated literally through [`minus_one_pullback`].
pub fn projectors_via_formula(d: &PicClass) -> Result<(PicClass, PicClass), ModelError> {
    let flipped = minus_one_pullback(d);
    let half = rat(1, 2);
    Ok((d.add(&flipped)?.scale(&half), d.sub(&flipped)?.scale(&half)))
}

/// The section `ψ: NS → Pic`, `N ↦ (N, 0)`.
pub fn ns_lift(n: &HermClass, rho: usize) -> PicClass {
    let m = n.0.rows();
    PicClass {
        ns: n.clone(),
        alg0: Pic0Class(QuadMatrix::zeros(n.0.field(), m, rho)),
    }
}

/// Random exact scalars and model elements with small numerators and
/// denominators, for property checks.
pub mod sample {
    use super::*;

    pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: QuadField, bound: i64) -> QuadScalar {
        let re = rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=3));
        let im = if field.is_rational() {
            Rational::zero()
        } else {
            rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=3))
        };
        field.element(re, im).expect("imaginary part only for d > 0")
    }

    /// Integral entries (elements of `Z[ω]`).
    pub fn integral_scalar<R: Rng + ?Sized>(rng: &mut R, field: QuadField, bound: i64) -> QuadScalar {
        let re = rat(rng.gen_range(-bound..=bound), 1);
        let im = if field.is_rational() {
            Rational::zero()
        } else {
            rat(rng.gen_range(-bound..=bound), 1)
        };
        field.element(re, im).expect("imaginary part only for d > 0")
    }

    pub fn matrix<R: Rng + ?Sized>(
        rng: &mut R,
        field: QuadField,
        rows: usize,
        cols: usize,
        bound: i64,
    ) -> QuadMatrix {
        QuadMatrix::from_fn(field, rows, cols, |_, _| scalar(rng, field, bound))
    }

    pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, field: QuadField, g: usize, bound: i64) -> HermClass {
        let mut m = QuadMatrix::zeros(field, g, g);
        for i in 0..g {
            for j in i..g {
                let x = scalar(rng, field, bound);
                let x = if i == j {
                    field.from_rational(x.re().clone())
                } else {
                    x
                };
                m.set(j, i, x.conj());
                m.set(i, j, x);
            }
        }
        HermClass(m)
    }

    pub fn class<R: Rng + ?Sized>(rng: &mut R, spec: &ModelSpec, bound: i64) -> PicClass {
        PicClass {
            ns: hermitian(rng, spec.field(), spec.g(), bound),
            alg0: Pic0Class(matrix(rng, spec.field(), spec.g(), spec.rho(), bound)),
        }
    }

    pub fn endo<R: Rng + ?Sized>(rng: &mut R, spec: &ModelSpec, bound: i64) -> Endo {
        let field = spec.field();
        Endo(QuadMatrix::from_fn(field, spec.g(), spec.g(), |_, _| {
            integral_scalar(rng, field, bound)
        }))
    }

    pub fn point<R: Rng + ?Sized>(rng: &mut R, spec: &ModelSpec, bound: i64) -> Point {
        let field = spec.field();
        Point(QuadMatrix::from_fn(field, spec.g(), spec.rho(), |_, _| {
            integral_scalar(rng, field, bound)
        }))
    }

    /// A random small model (`g ≤ 3`, `d ∈ {0,1,2,3,7}`, `ρ ≤ 2`).
    pub fn spec<R: Rng + ?Sized>(rng: &mut R) -> ModelSpec {
        let d = [0u64, 1, 2, 3, 7][rng.gen_range(0..5)];
        ModelSpec::new(rng.gen_range(1..=3), d, rng.gen_range(1..=2)).expect("valid parameters")
    }
}
