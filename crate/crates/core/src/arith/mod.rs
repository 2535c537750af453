//! Exact rational arithmetic: truncated power series over `Q` and Bernoulli
//! numbers.
//!
//! Everything here is exact. Rationals are `num_rational::BigRational`, which
//! keeps values reduced with a positive denominator.

mod bernoulli;
mod series;

pub use bernoulli::{bernoulli, bernoulli_numbers, binomial};
pub use series::{SeriesError, TruncSeries, DEFAULT_ORDER};

use num_bigint::BigInt;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
