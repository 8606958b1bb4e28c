//! The Fourier–Mukai transform on the cohomological model.
//!
//! For an abelian variety of dimension `g`, `A` has generators `e1..e_{2g}`,
//! the dual `Â` has `f1..f_{2g}`, and the Poincaré class on `A × Â` is
//! `l = Σ e_i ∧ f_i`. Then
//!
//! ```text
//! F(α)  = p2_*(p1^*(α) ∧ exp(l))     CH(A) → CH(Â)
//! F̂(β)  = p1_*(p2^*(β) ∧ exp(l))     CH(Â) → CH(A)
//! ```
//!
//! and [`check_inversion`] verifies `F̂ ∘ F = (−1)^g [−1]^*` on every basis
//! element.

use std::sync::Arc;

use num::{BigInt, One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cohomology::{
    fiber_integrate, project_pullback, pullback, CohomologyError, Factor, GroundSpace, LinearSubstitution,
    Multivector,
};
use crate::scalars::{int, Rational};

/// Largest `g` accepted by [`check_inversion`] (the basis has `2^{2g}` elements).
pub const MAX_INVERSION_G: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourierError {
    #[error("dimension g must be at least 1")]
    ZeroDimension,
    #[error("dimension g = {0} exceeds the supported bound {MAX_INVERSION_G}")]
    TooLarge(usize),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// Ground spaces of `A`, `Â`, `A × Â` and the Poincaré class.
#[derive(Debug, Clone)]
pub struct FmContext {
    g: usize,
    a: Arc<GroundSpace>,
    dual: Arc<GroundSpace>,
    product: Arc<GroundSpace>,
    l: Multivector,
    exp_l: Multivector,
}

impl FmContext {
    pub fn g(&self) -> usize {
        self.g
    }

    /// Ground space of `A` (labels `e1..e_{2g}`).
    pub fn a(&self) -> &Arc<GroundSpace> {
        &self.a
    }

    /// Ground space of `Â` (labels `f1..f_{2g}`).
    pub fn dual(&self) -> &Arc<GroundSpace> {
        &self.dual
    }

    pub fn product(&self) -> &Arc<GroundSpace> {
        &self.product
    }

    /// The Poincaré class `l`.
    pub fn l(&self) -> &Multivector {
        &self.l
    }

    pub fn exp_l(&self) -> &Multivector {
        &self.exp_l
    }
}

/// Builds the context for dimension `g`, with `l = Σ_{i=1}^{2g} e_i ∧ f_i`.
pub fn poincare_class(g: usize) -> Result<FmContext, FourierError> {
    if g == 0 {
        return Err(FourierError::ZeroDimension);
    }
    if 4 * g > crate::cohomology::MAX_GENERATORS {
        return Err(FourierError::TooLarge(g));
    }
    let a = GroundSpace::with_prefix("e", 2 * g)?;
    let dual = GroundSpace::with_prefix("f", 2 * g)?;
    let product = GroundSpace::product(&a, &dual)?;
    let mut l = Multivector::zero(&product);
    for i in 0..2 * g {
        l = &l + &Multivector::blade(&product, &[i, 2 * g + i], Rational::one())?;
    }
    let exp_l = exp_class(&l, product.dim())?;
    Ok(FmContext {
        g,
        a,
        dual,
        product,
        l,
        exp_l,
    })
}

/// `Σ_{n=0}^{N} u^n / n!`, truncated where `n · (lowest degree of u)` exceeds
/// `dim_cap` or the powers vanish.
///
/// Only even positive degrees are accepted: odd parts do not commute and a
/// nonzero constant term has no rational exponential.
pub fn exp_class(u: &Multivector, dim_cap: usize) -> Result<Multivector, CohomologyError> {
    let degrees = u.degrees();
    if let Some(&bad) = degrees.iter().find(|&&k| k % 2 == 1 || k == 0) {
        return Err(CohomologyError::BadExponent(bad));
    }
    let ground = u.ground();
    let mut total = Multivector::one(ground);
    let Some(&min_degree) = degrees.first() else {
        return Ok(total);
    };
    let max_n = dim_cap / min_degree;
    let mut power = Multivector::one(ground);
    let mut factorial = BigInt::one();
    for n in 1..=max_n {
        power = power.wedge(u)?;
        if power.is_zero() {
            break;
        }
        factorial *= BigInt::from(n);
        total = &total + &power.scale(&Rational::new(BigInt::one(), factorial.clone()));
    }
    Ok(total)
}

/// `F(α) = p2_*(p1^*(α) ∧ exp(l))`.
pub fn fourier(ctx: &FmContext, alpha: &Multivector) -> Result<Multivector, FourierError> {
    let lifted = project_pullback(Factor::First, alpha, &ctx.product)?;
    Ok(fiber_integrate(Factor::First, &lifted.wedge(&ctx.exp_l)?)?)
}

/// `F̂(β) = p1_*(p2^*(β) ∧ exp(l))`, with the same Poincaré class as [`fourier`].
pub fn dual_fourier(ctx: &FmContext, beta: &Multivector) -> Result<Multivector, FourierError> {
    let lifted = project_pullback(Factor::Second, beta, &ctx.product)?;
    Ok(fiber_integrate(Factor::Second, &lifted.wedge(&ctx.exp_l)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionEntry {
    pub basis: Multivector,
    pub image: Multivector,
    pub expected: Multivector,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionReport {
    pub g: usize,
    /// One entry per basis blade of `Λ(A)`, in canonical basis order.
    pub entries: Vec<InversionEntry>,
    pub passed: bool,
}

impl InversionReport {
    pub fn failures(&self) -> impl Iterator<Item = &InversionEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

/// Checks `F̂(F(b)) = (−1)^g [−1]^* b` for all `2^{2g}` basis elements `b`.
pub fn check_inversion(g: usize) -> Result<InversionReport, FourierError> {
    if g > MAX_INVERSION_G {
        return Err(FourierError::TooLarge(g));
    }
    let ctx = poincare_class(g)?;
    let minus_one = LinearSubstitution::scalar(&ctx.a, int(-1));
    let sign = if g % 2 == 0 { int(1) } else { int(-1) };
    let basis = Multivector::basis(&ctx.a);
    // collect() on an indexed parallel iterator keeps basis order
    let entries = basis
        .into_par_iter()
        .map(|b| {
            let image = dual_fourier(&ctx, &fourier(&ctx, &b)?)?;
            let expected = pullback(&minus_one, &b)?.scale(&sign);
            let passed = image == expected;
            Ok(InversionEntry {
                basis: b,
                image,
                expected,
                passed,
            })
        })
        .collect::<Result<Vec<_>, FourierError>>()?;
    let passed = entries.iter().all(|e| e.passed);
    Ok(InversionReport { g, entries, passed })
}

/// Sum of `coeffs[i] · basis[i]`, a helper for linearity checks.
pub fn linear_combination(ground: &Arc<GroundSpace>, items: &[(Rational, Multivector)]) -> Multivector {
    items.iter().fold(Multivector::zero(ground), |acc, (c, v)| {
        if c.is_zero() {
            acc
        } else {
            &acc + &v.scale(c)
        }
    })
}
