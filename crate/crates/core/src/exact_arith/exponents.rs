use num_bigint::BigUint;
use num_traits::One;

use super::BigExponent;

/// `3^n`.
pub fn three_pow(n: u64) -> BigExponent {
    let mut acc = BigUint::one();
    let mut base = BigUint::from(3u32);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// `(3^n - 1) / 2`, the exponent of a constant coefficient after `n` cubings.
pub fn geometric_exponent(n: u64) -> BigExponent {
    (three_pow(n) - 1u32) >> 1
}

/// `((3^(2n) - 1) / 8, (3^(2n+1) - 3) / 8)`. Both are integers since `9^n ≡ 1 (mod 8)`.
pub fn antitrace_exponents(n: u64) -> (BigExponent, BigExponent) {
    let nine_n = three_pow(2 * n);
    let even = (&nine_n - 1u32) >> 3;
    let odd = (nine_n * 3u32 - 3u32) >> 3;
    (even, odd)
}
