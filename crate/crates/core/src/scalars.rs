//! Exact scalars: rationals and the imaginary-quadratic field `Q(√−d)`.
//!
//! A [`QuadScalar`] is `re + im·ω` with `ω² = −d`. The discriminant `d` is a
//! non-negative square-free integer carried by every scalar; `d = 0` is the
//! degenerate case where only rationals occur (endomorphism algebra `Q`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("discriminant mismatch: {left} vs {right}")]
    DiscriminantMismatch { left: u64, right: u64 },
    #[error("discriminant {0} is not square-free")]
    NotSquareFree(u64),
    #[error("nonzero imaginary part is not allowed when d = 0")]
    ImaginaryInRationalField,
    #[error("{0} is not invertible")]
    NotInvertible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// The coefficient field `Q(√−d)`, or `Q` itself when `d = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: u64,
}

fn is_square_free(d: u64) -> bool {
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadField {
    pub fn new(d: u64) -> Result<Self, ScalarError> {
        // 0 and 1 are both accepted; 1 gives the Gaussian rationals.
        if d > 1 && !is_square_free(d) {
            return Err(ScalarError::NotSquareFree(d));
        }
        Ok(QuadField { d })
    }

    /// The field `Q` (no imaginary part).
    pub fn rationals() -> Self {
        QuadField { d: 0 }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    /// Dimension of the field as a `Q`-vector space.
    pub fn rational_dim(&self) -> usize {
        if self.d == 0 {
            1
        } else {
            2
        }
    }

    pub fn zero(&self) -> QuadScalar {
        QuadScalar {
            d: self.d,
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    pub fn one(&self) -> QuadScalar {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&self, n: i64) -> QuadScalar {
        self.from_rational(int(n))
    }

    pub fn from_rational(&self, re: Rational) -> QuadScalar {
        QuadScalar {
            d: self.d,
            re,
            im: Rational::zero(),
        }
    }

    /// `re + im·ω`; rejects `im ≠ 0` over `Q`.
    pub fn element(&self, re: Rational, im: Rational) -> Result<QuadScalar, ScalarError> {
        if self.d == 0 && !im.is_zero() {
            return Err(ScalarError::ImaginaryInRationalField);
        }
        Ok(QuadScalar { d: self.d, re, im })
    }

    /// The generator `ω`, absent over `Q`.
    pub fn omega(&self) -> Option<QuadScalar> {
        (self.d != 0).then(|| QuadScalar {
            d: self.d,
            re: Rational::zero(),
            im: Rational::one(),
        })
    }

    /// A `Q`-basis of the field: `[1]` or `[1, ω]`.
    pub fn rational_basis(&self) -> Vec<QuadScalar> {
        let mut basis = vec![self.one()];
        basis.extend(self.omega());
        basis
    }
}

/// An element `re + im·ω` of `Q(√−d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    d: u64,
    re: Rational,
    im: Rational,
}

impl QuadScalar {
    pub fn field(&self) -> QuadField {
        QuadField { d: self.d }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn check(&self, other: &QuadScalar) -> Result<(), ScalarError> {
        if self.d != other.d {
            return Err(ScalarError::DiscriminantMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        self.check(other)?;
        Ok(QuadScalar {
            d: self.d,
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        })
    }

    pub fn checked_sub(&self, other: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        self.check(other)?;
        Ok(QuadScalar {
            d: self.d,
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        })
    }

    /// `(a+bω)(a'+b'ω) = (aa' − d·bb') + (ab' + a'b)ω`.
    pub fn checked_mul(&self, other: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        self.check(other)?;
        let d = Rational::from_integer(BigInt::from(self.d));
        let re = &self.re * &other.re - d * (&self.im * &other.im);
        let im = &self.re * &other.im + &other.re * &self.im;
        Ok(QuadScalar { d: self.d, re, im })
    }

    /// `re − im·ω`.
    pub fn conj(&self) -> QuadScalar {
        QuadScalar {
            d: self.d,
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `x·conj(x) = re² + d·im²`.
    pub fn norm(&self) -> Rational {
        let d = Rational::from_integer(BigInt::from(self.d));
        &self.re * &self.re + d * (&self.im * &self.im)
    }

    pub fn scale(&self, r: &Rational) -> QuadScalar {
        QuadScalar {
            d: self.d,
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn inverse(&self) -> Result<QuadScalar, ScalarError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ScalarError::NotInvertible(self.to_string()));
        }
        Ok(self.conj().scale(&n.recip()))
    }
}

/// `x op y` over a shared discriminant.
pub fn qs_arith(x: &QuadScalar, y: &QuadScalar, op: ArithOp) -> Result<QuadScalar, ScalarError> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
    }
}

pub fn qs_conj(x: &QuadScalar) -> QuadScalar {
    x.conj()
}

// The operator impls panic on a discriminant mismatch. Model types validate
// the field of every entry on construction, so inside the crate they are
// only ever used on scalars of the same field.
impl Add for &QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        self.checked_add(rhs).expect("quad scalar add")
    }
}

impl Sub for &QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        self.checked_sub(rhs).expect("quad scalar sub")
    }
}

impl Mul for &QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        self.checked_mul(rhs).expect("quad scalar mul")
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar {
            d: self.d,
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im = if self.im.is_negative() {
            format!("- {}", fmt_rational(&-&self.im))
        } else {
            format!("+ {}", fmt_rational(&self.im))
        };
        if self.re.is_zero() {
            write!(f, "{}w", fmt_rational(&self.im))
        } else {
            write!(f, "{} {}w", fmt_rational(&self.re), im)
        }
    }
}
