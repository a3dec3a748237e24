use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Nonnegative exponent of arbitrary size, e.g. `3^n` or `(3^n - 1) / 2`.
pub type BigExponent = BigUint;

/// Default cap on the decimal digits of any expanded value.
pub const DEFAULT_DIGIT_BUDGET: u64 = 1_000_000;

/// Parses `-3/7`, `42` or a decimal such as `0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::ParseRational(text.to_string());
    let s = text.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());

    let value = if let Some((num, den)) = body.split_once('/') {
        if !all_digits(num) || !all_digits(den) {
            return Err(err());
        }
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Rational::new(num.parse().map_err(|_| err())?, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        if !(all_digits(int) || int.is_empty()) || !all_digits(frac) {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        Rational::new(digits.parse().map_err(|_| err())?, scale)
    } else {
        if !all_digits(body) {
            return Err(err());
        }
        Rational::from_integer(body.parse().map_err(|_| err())?)
    };
    Ok(if negative { -value } else { value })
}

pub(crate) fn log10_abs(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        n.abs().to_f64().unwrap_or(f64::INFINITY).log10()
    } else {
        let shift = bits - 64;
        let top = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    }
}

/// Decimal digits of the larger of numerator and denominator of `base^exp`.
pub fn estimate_pow_digits(base: &Rational, exp: &BigExponent) -> u64 {
    if exp.is_zero() || base.is_zero() {
        return 1;
    }
    let size = log10_abs(base.numer()).max(log10_abs(base.denom()));
    let digits = exp.to_f64().unwrap_or(f64::INFINITY) * size;
    if digits.is_finite() && digits < u64::MAX as f64 {
        digits.floor() as u64 + 1
    } else {
        u64::MAX
    }
}

/// `base^exp` exactly, with `0^0 = 1`.
pub fn pow_rational(base: &Rational, exp: &BigExponent, digit_budget: u64) -> Result<Rational> {
    if exp.is_zero() {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        return Ok(Rational::zero());
    }
    if base.abs().is_one() {
        let odd = exp.bit(0);
        return Ok(if base.is_negative() && odd { -Rational::one() } else { Rational::one() });
    }
    let estimate = estimate_pow_digits(base, exp);
    if estimate > digit_budget {
        return Err(Error::DigitBudgetExceeded { estimate, budget: digit_budget });
    }
    // A base other than 0 and ±1 has at least one bit of size, so an
    // exponent that passed the budget fits comfortably in u32.
    let e = exp.to_u32().ok_or(Error::DigitBudgetExceeded { estimate, budget: digit_budget })?;
    Ok(Rational::new_raw(
        num_traits::pow(base.numer().clone(), e as usize),
        num_traits::pow(base.denom().clone(), e as usize),
    ))
}

/// The nonnegative rational square root of `r`, when one exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}
