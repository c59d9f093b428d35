//! Scalar helpers on top of `BigRational`.
//!
//! All coefficients in the crate are exact rationals. `BigRational` keeps
//! values in lowest terms with a positive denominator, and its `Display`
//! impl already produces the canonical `num/den` form (denominator omitted
//! when it is one), so the text form used by cache files and reports is just
//! `to_string()`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

pub type Rational = BigRational;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses the canonical `num/den` (or bare `num`) text form.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r: Rational = s.parse().ok()?;
    Some(r)
}

/// Binomial coefficient `C(x, k)` for rational `x` and `k >= 0`.
pub fn binomial(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= x - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

/// Binomial coefficient for integer top, valid for negative `n`.
pub fn binomial_int(n: i64, k: u32) -> Rational {
    binomial(&int(n), k)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Least common multiple of the denominators of `values`.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `true` if the value is a (possibly negative) integer.
pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn to_i64(r: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if is_integral(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}
