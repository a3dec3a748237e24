use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::log10_abs;
use super::{pow_rational, BigExponent, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(s: i8) -> Option<Self> {
        match s {
            -1 => Some(Sign::Negative),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Positive),
            _ => None,
        }
    }

    fn flip(self) -> Self {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            Sign::Zero => Sign::Zero,
        }
    }

    fn times(self, other: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * other.as_i8()).unwrap()
    }
}

/// `sign · ∏ base^exp`, kept unexpanded.
///
/// Canonical form: bases are positive, distinct, different from 1 and sorted;
/// exponents are nonzero; a zero value has no factors. Equality compares the
/// denoted values, so `6^1` equals `2^1 · 3^1`.
#[derive(Clone, Debug)]
pub struct FactoredValue {
    sign: Sign,
    factors: Vec<(Rational, BigExponent)>,
}

impl FactoredValue {
    pub fn one() -> Self {
        Self { sign: Sign::Positive, factors: Vec::new() }
    }

    pub fn zero() -> Self {
        Self { sign: Sign::Zero, factors: Vec::new() }
    }

    /// Builds the canonical form of `sign · ∏ base^exp`. A zero base with a
    /// positive exponent zeroes the whole value; `0^0` is 1.
    pub fn new(sign: Sign, factors: impl IntoIterator<Item = (Rational, BigExponent)>) -> Self {
        if sign == Sign::Zero {
            return Self::zero();
        }
        let mut sign = sign;
        let mut merged: Vec<(Rational, BigExponent)> = Vec::new();
        for (base, exp) in factors {
            if exp.is_zero() {
                continue;
            }
            if base.is_zero() {
                return Self::zero();
            }
            if base.is_negative() && exp.is_odd() {
                sign = sign.flip();
            }
            let base = base.abs();
            if base.is_one() {
                continue;
            }
            match merged.iter_mut().find(|(b, _)| *b == base) {
                Some((_, e)) => *e += exp,
                None => merged.push((base, exp)),
            }
        }
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        Self { sign, factors: merged }
    }

    pub fn from_rational(r: &Rational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            Self::new(Sign::Positive, [(r.clone(), BigUint::one())])
        }
    }

    pub fn power_of(base: &Rational, exp: BigExponent) -> Self {
        Self::new(Sign::Positive, [(base.clone(), exp)])
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn factors(&self) -> &[(Rational, BigExponent)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn mul(&self, other: &Self) -> Self {
        let sign = self.sign.times(other.sign);
        Self::new(sign, self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn pow(&self, exp: &BigExponent) -> Self {
        if exp.is_zero() {
            return Self::one();
        }
        let sign = match self.sign {
            Sign::Negative if exp.is_even() => Sign::Positive,
            s => s,
        };
        Self::new(sign, self.factors.iter().map(|(b, e)| (b.clone(), e * exp)))
    }

    /// Upper estimate of the decimal digits of the expanded numerator or denominator.
    pub fn estimate_digits(&self) -> u64 {
        let total: f64 = self
            .factors
            .iter()
            .map(|(b, e)| {
                e.to_f64().unwrap_or(f64::INFINITY) * (log10_abs(b.numer()) + log10_abs(b.denom()))
            })
            .sum();
        if total.is_finite() && total < u64::MAX as f64 {
            total.floor() as u64 + 1
        } else {
            u64::MAX
        }
    }

    /// `log10 |value|` in floating point, `None` for zero. Cheap for any exponent size.
    pub fn log10_abs(&self) -> Option<f64> {
        if self.sign == Sign::Zero {
            return None;
        }
        Some(
            self.factors
                .iter()
                .map(|(b, e)| e.to_f64().unwrap_or(f64::INFINITY) * (log10_abs(b.numer()) - log10_abs(b.denom())))
                .sum(),
        )
    }

    pub fn expand(&self, digit_budget: u64) -> Result<Rational> {
        if self.sign == Sign::Zero {
            return Ok(Rational::zero());
        }
        let estimate = self.estimate_digits();
        if estimate > digit_budget {
            return Err(Error::DigitBudgetExceeded { estimate, budget: digit_budget });
        }
        let mut acc = Rational::one();
        for (b, e) in &self.factors {
            acc *= pow_rational(b, e, digit_budget)?;
        }
        Ok(if self.sign == Sign::Negative { -acc } else { acc })
    }

    /// Signed exponent vectors of `self` and `other` over a common pairwise
    /// coprime basis of integers.
    fn joint_exponents(&self, other: &Self) -> (Vec<BigInt>, Vec<BigInt>) {
        let integers = self
            .factors
            .iter()
            .chain(&other.factors)
            .flat_map(|(b, _)| [b.numer().magnitude().clone(), b.denom().magnitude().clone()]);
        let basis = coprime_basis(integers);
        let vector = |v: &Self| {
            let mut out = vec![BigInt::zero(); basis.len()];
            for (b, e) in &v.factors {
                let e = BigInt::from(e.clone());
                for (slot, (k_num, k_den)) in out.iter_mut().zip(basis.iter().map(|q| {
                    (multiplicity(b.numer().magnitude(), q), multiplicity(b.denom().magnitude(), q))
                })) {
                    *slot += &e * (BigInt::from(k_num) - BigInt::from(k_den));
                }
            }
            out
        };
        (vector(self), vector(other))
    }
}

impl PartialEq for FactoredValue {
    fn eq(&self, other: &Self) -> bool {
        if self.sign != other.sign {
            return false;
        }
        if self.sign == Sign::Zero || self.factors == other.factors {
            return true;
        }
        let (a, b) = self.joint_exponents(other);
        a == b
    }
}

impl Eq for FactoredValue {}

/// Refines a list of positive integers into pairwise coprime factors, each
/// greater than 1, such that every input is a product of their powers.
fn coprime_basis(input: impl IntoIterator<Item = BigUint>) -> Vec<BigUint> {
    let mut set: Vec<BigUint> = input.into_iter().filter(|n| !n.is_one() && !n.is_zero()).collect();
    set.sort();
    set.dedup();
    'outer: loop {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let g = set[i].gcd(&set[j]);
                if !g.is_one() {
                    let x = set.swap_remove(j);
                    let y = set.swap_remove(i);
                    set.extend([&x / &g, &y / &g, g].into_iter().filter(|n| !n.is_one()));
                    set.sort();
                    set.dedup();
                    continue 'outer;
                }
            }
        }
        return set;
    }
}

fn multiplicity(n: &BigUint, q: &BigUint) -> u64 {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % q).is_zero() {
        n /= q;
        k += 1;
    }
    k
}

impl fmt::Display for FactoredValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => return write!(f, "0"),
            Sign::Negative => write!(f, "-")?,
            Sign::Positive => {}
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (b, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if b.is_integer() {
                write!(f, "{b}")?;
            } else {
                write!(f, "({b})")?;
            }
            if !e.is_one() {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{parse_rational, three_pow, DEFAULT_DIGIT_BUDGET};
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn e(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn log10_of_factored() {
        let v = FactoredValue::power_of(&Rational::from_integer(2.into()), 10u32.into())
            .mul(&FactoredValue::power_of(&Rational::new((-1).into(), 5.into()), 3u32.into()));
        assert!((v.log10_abs().unwrap() - (1024.0f64 / 125.0).log10()).abs() < 1e-12);
        assert_eq!(FactoredValue::zero().log10_abs(), None);
    }

    #[test]
    fn expansion_examples() {
        let b = DEFAULT_DIGIT_BUDGET;
        assert_eq!(FactoredValue::new(Sign::Positive, []).expand(b).unwrap(), q("1"));
        let v = FactoredValue::new(Sign::Positive, [(q("2"), e(3)), (q("3/2"), e(2))]);
        assert_eq!(v.expand(b).unwrap(), q("18"));

        let v = FactoredValue::new(Sign::Negative, [(q("2"), three_pow(4))]);
        let mut oracle = BigInt::one();
        for _ in 0..81 {
            oracle *= 2;
        }
        assert_eq!(v.expand(b).unwrap(), Rational::from_integer(-oracle));
    }

    #[test]
    fn canonical_form() {
        let v = FactoredValue::new(
            Sign::Positive,
            [(q("-2"), e(3)), (q("1"), e(9)), (q("5"), e(0)), (q("2"), e(1)), (q("-3"), e(2))],
        );
        assert_eq!(v.sign(), Sign::Negative);
        assert_eq!(v.factors(), &[(q("2"), e(4)), (q("3"), e(2))]);
        assert!(FactoredValue::new(Sign::Positive, [(q("0"), e(2))]).is_zero());
        assert_eq!(FactoredValue::new(Sign::Positive, [(q("0"), e(0))]), FactoredValue::one());
        assert_eq!(v.to_string(), "-2^4 * 3^2");
        assert_eq!(FactoredValue::from_rational(&q("-3/2")).to_string(), "-(3/2)");
    }

    #[test]
    fn value_equality_across_bases() {
        let six = FactoredValue::power_of(&q("6"), e(5));
        let split = FactoredValue::new(Sign::Positive, [(q("2"), e(5)), (q("3"), e(5))]);
        assert_eq!(six, split);
        let a = FactoredValue::new(Sign::Positive, [(q("4/9"), e(3)), (q("3"), e(6))]);
        let b = FactoredValue::new(Sign::Positive, [(q("2"), e(6))]);
        assert_eq!(a, b);
        assert_ne!(a, FactoredValue::new(Sign::Positive, [(q("2"), e(7))]));
        assert_ne!(a, FactoredValue::new(Sign::Negative, [(q("2"), e(6))]));
        let big = FactoredValue::power_of(&q("12"), three_pow(40));
        let parts = FactoredValue::power_of(&q("2"), three_pow(40) * 2u32)
            .mul(&FactoredValue::power_of(&q("3"), three_pow(40)));
        assert_eq!(big, parts);
    }

    #[test]
    fn budget() {
        let v = FactoredValue::power_of(&q("7"), three_pow(30));
        assert!(matches!(v.expand(DEFAULT_DIGIT_BUDGET), Err(Error::DigitBudgetExceeded { .. })));
    }

    fn factored() -> impl Strategy<Value = FactoredValue> {
        let base = (-12i64..=12, 1i64..=12).prop_map(|(n, d)| Rational::new(n.into(), d.into()));
        (prop::sample::select(vec![Sign::Negative, Sign::Positive]), prop::collection::vec((base, 0u64..5), 0..5))
            .prop_map(|(s, fs)| FactoredValue::new(s, fs.into_iter().map(|(b, x)| (b, BigUint::from(x)))))
    }

    proptest! {
        #[test]
        fn expand_then_refactor_round_trips(v in factored()) {
            let r = v.expand(DEFAULT_DIGIT_BUDGET).unwrap();
            prop_assert_eq!(FactoredValue::from_rational(&r), v.clone());
        }

        #[test]
        fn mul_and_pow_match_expansion(v in factored(), w in factored(), k in 0u64..4) {
            let b = DEFAULT_DIGIT_BUDGET;
            prop_assert_eq!(v.mul(&w).expand(b).unwrap(), v.expand(b).unwrap() * w.expand(b).unwrap());
            let direct = pow_rational(&v.expand(b).unwrap(), &BigUint::from(k), b).unwrap();
            prop_assert_eq!(v.pow(&BigUint::from(k)).expand(b).unwrap(), direct);
        }
    }
}
