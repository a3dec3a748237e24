use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::{rational_sqrt, Rational};
use crate::error::{Error, Result};

/// `p + q√D` for a fixed radicand `D` that is not the square of a rational.
///
/// `D` may be negative, in which case the arithmetic is that of an imaginary
/// quadratic field; `√D` is only ever used through `(√D)² = D`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadScalar {
    p: Rational,
    q: Rational,
    d: Rational,
}

impl QuadScalar {
    pub fn new(p: Rational, q: Rational, d: Rational) -> Result<Self> {
        if rational_sqrt(&d).is_some() {
            return Err(Error::SquareRadicand(d.to_string()));
        }
        Ok(Self { p, q, d })
    }

    /// `√D` itself.
    pub fn sqrt(d: Rational) -> Result<Self> {
        Self::new(Rational::zero(), num_traits::One::one(), d)
    }

    /// Embeds `r` into the extension that `like` belongs to.
    pub fn from_rational(r: Rational, like: &QuadScalar) -> Self {
        Self { p: r, q: Rational::zero(), d: like.d.clone() }
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { p: self.p.clone(), q: -&self.q, d: self.d.clone() }
    }

    /// `p² - q²D`, the product of the element with its conjugate.
    pub fn norm(&self) -> Rational {
        &self.p * &self.p - &self.q * &self.q * &self.d
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { p: &self.p / &n, q: -&self.q / &n, d: self.d.clone() })
    }

    /// Exact sign for real extensions (`D > 0`), or for rational elements of
    /// an imaginary one.
    pub fn signum(&self) -> Option<Ordering> {
        let sign = |r: &Rational| r.cmp(&Rational::zero());
        if self.q.is_zero() {
            return Some(sign(&self.p));
        }
        if self.d.is_negative() {
            return None;
        }
        let (sp, sq) = (sign(&self.p), sign(&self.q));
        if sp == Ordering::Equal || sp == sq {
            return Some(sq);
        }
        // opposite signs: whichever of p² and q²D is larger wins; they
        // cannot tie because D is not a rational square
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * &self.d;
        Some(if lhs > rhs { sp } else { sq })
    }

    fn check(&self, other: &Self) {
        assert!(self.d == other.d, "{}", Error::RadicandMismatch);
    }
}

fn same_field(x: &QuadScalar, y: &QuadScalar) -> Result<()> {
    if x.d == y.d {
        Ok(())
    } else {
        Err(Error::RadicandMismatch)
    }
}

pub fn quad_add(x: &QuadScalar, y: &QuadScalar) -> Result<QuadScalar> {
    same_field(x, y)?;
    Ok(x + y)
}

pub fn quad_mul(x: &QuadScalar, y: &QuadScalar) -> Result<QuadScalar> {
    same_field(x, y)?;
    Ok(x * y)
}

pub fn quad_inv(x: &QuadScalar) -> Result<QuadScalar> {
    x.inv()
}

pub fn quad_conj(x: &QuadScalar) -> QuadScalar {
    x.conj()
}

impl<'a> Add<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        self.check(rhs);
        QuadScalar { p: &self.p + &rhs.p, q: &self.q + &rhs.q, d: self.d.clone() }
    }
}

impl<'a> Sub<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        self.check(rhs);
        QuadScalar { p: &self.p - &rhs.p, q: &self.q - &rhs.q, d: self.d.clone() }
    }
}

impl<'a> Mul<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        self.check(rhs);
        QuadScalar {
            p: &self.p * &rhs.p + &self.q * &rhs.q * &self.d,
            q: &self.p * &rhs.q + &self.q * &rhs.p,
            d: self.d.clone(),
        }
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { p: -&self.p, q: -&self.q, d: self.d.clone() }
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_negative() {
            write!(f, "{} - {}·√{}", self.p, -&self.q, self.d)
        } else {
            write!(f, "{} + {}·√{}", self.p, self.q, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{parse_rational, ExactField};
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn qs(p: &str, r: &str, d: &str) -> QuadScalar {
        QuadScalar::new(q(p), q(r), q(d)).unwrap()
    }

    #[test]
    fn rejects_square_radicands() {
        for d in ["0", "4", "9/16", "1"] {
            assert!(matches!(QuadScalar::new(q("1"), q("1"), q(d)), Err(Error::SquareRadicand(_))));
        }
        assert!(QuadScalar::new(q("1"), q("1"), q("-4")).is_ok());
    }

    #[test]
    fn worked_products() {
        assert_eq!(quad_mul(&qs("1", "1", "2"), &qs("1", "-1", "2")).unwrap(), qs("-1", "0", "2"));
        assert_eq!(quad_inv(&qs("0", "1", "2")).unwrap(), qs("0", "1/2", "2"));
        // (3 + 2√-5)(1 + √-5) = 3 + 3√-5 + 2√-5 + 2·(-5)
        assert_eq!(quad_mul(&qs("3", "2", "-5"), &qs("1", "1", "-5")).unwrap(), qs("-7", "5", "-5"));
        assert_eq!(quad_add(&qs("1", "2", "3"), &qs("1/2", "-2", "3")).unwrap(), qs("3/2", "0", "3"));
        assert_eq!(quad_conj(&qs("1", "2", "3")), qs("1", "-2", "3"));
    }

    #[test]
    fn errors() {
        assert_eq!(quad_inv(&qs("0", "0", "2")), Err(Error::DivisionByZero));
        assert_eq!(quad_mul(&qs("1", "1", "2"), &qs("1", "1", "3")), Err(Error::RadicandMismatch));
    }

    #[test]
    fn signs() {
        assert_eq!(qs("1", "-1", "2").signum(), Some(Ordering::Less));
        assert_eq!(qs("-1", "1", "2").signum(), Some(Ordering::Greater));
        assert_eq!(qs("3/2", "-1", "2").signum(), Some(Ordering::Greater));
        assert_eq!(qs("0", "-1", "2").signum(), Some(Ordering::Less));
        assert_eq!(qs("0", "0", "2").signum(), Some(Ordering::Equal));
        assert_eq!(qs("1", "1", "-2").signum(), None);
        assert_eq!(qs("-1", "0", "-2").signum(), Some(Ordering::Less));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn radicand() -> impl Strategy<Value = Rational> {
        prop::sample::select(vec![2i64, 3, 5, 8, -1, -3, -5, -8]).prop_map(|d| Rational::from_integer(d.into()))
    }

    fn triple() -> impl Strategy<Value = (QuadScalar, QuadScalar, QuadScalar)> {
        (radicand(), prop::collection::vec(small_rational(), 6)).prop_map(|(d, v)| {
            let mk = |i: usize| QuadScalar::new(v[i].clone(), v[i + 1].clone(), d.clone()).unwrap();
            (mk(0), mk(2), mk(4))
        })
    }

    proptest! {
        #[test]
        fn field_laws((x, y, z) in triple()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                let one = x.embed(&Rational::from_integer(1.into()));
                prop_assert_eq!(&x * &x.inv().unwrap(), one);
            }
        }

        #[test]
        fn conjugation_is_a_ring_homomorphism((x, y, _z) in triple()) {
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            prop_assert_eq!((&x * &x.conj()).to_rational(), Some(x.norm()));
        }
    }
}
