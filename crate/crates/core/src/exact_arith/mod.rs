//! Exact scalar arithmetic.
//!
//! All quantities are arbitrary-precision rationals. Eigenvalues that are not
//! rational live in a single quadratic extension `Q(√D)`, and the
//! triple-exponentially large orbit terms are carried as [`FactoredValue`]s
//! until an explicit, budgeted expansion.

mod exponents;
mod factored;
mod field;
mod quad;
mod rational;

pub use exponents::{antitrace_exponents, geometric_exponent, three_pow};
pub use factored::{FactoredValue, Sign};
pub use field::ExactField;
pub use quad::{quad_add, quad_conj, quad_inv, quad_mul, QuadScalar};
pub use rational::{
    estimate_pow_digits, parse_rational, pow_rational, rational_sqrt, BigExponent, Rational,
    DEFAULT_DIGIT_BUDGET,
};
