use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use super::{QuadScalar, Rational};
use crate::error::{Error, Result};

/// The handful of field operations the closed-form formulas need, shared by
/// plain rationals and elements of `Q(√D)`.
pub trait ExactField: Clone + PartialEq + Debug {
    /// Embeds a rational into the same field as `self`.
    fn embed(&self, r: &Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn recip(&self) -> Result<Self>;
    fn is_zero_elem(&self) -> bool;
    /// `Some` exactly when the element has no irrational part.
    fn to_rational(&self) -> Option<Rational>;
    /// Sign of a real element; `None` for non-real elements of an imaginary extension.
    fn real_sign(&self) -> Option<Ordering>;

    fn divided_by(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.recip()?))
    }

    fn power(&self, n: u64) -> Self {
        let mut acc = self.embed(&Rational::one());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }

    /// Compares absolute values of two real elements.
    fn cmp_abs(&self, other: &Self) -> Option<Ordering> {
        let abs = |x: &Self| -> Option<Self> {
            Some(if x.real_sign()? == Ordering::Less { x.negated() } else { x.clone() })
        };
        abs(self)?.minus(&abs(other)?).real_sign()
    }
}

impl ExactField for Rational {
    fn embed(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational::recip(self))
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn real_sign(&self) -> Option<Ordering> {
        Some(if self.is_negative() {
            Ordering::Less
        } else if self.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        })
    }
}

impl ExactField for QuadScalar {
    fn embed(&self, r: &Rational) -> Self {
        QuadScalar::from_rational(r.clone(), self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Result<Self> {
        self.inv()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn to_rational(&self) -> Option<Rational> {
        self.q().is_zero().then(|| self.p().clone())
    }
    fn real_sign(&self) -> Option<Ordering> {
        self.signum()
    }
}
