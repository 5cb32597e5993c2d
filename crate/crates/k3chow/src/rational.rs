//! Exact rational scalars. All arithmetic in this crate is exact; there is no
//! floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

/// The coefficient field.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// `n!` as an exact integer scalar.
pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q, crate::Error> {
    s.trim()
        .parse::<Q>()
        .map_err(|e| crate::Error::Input(format!("bad rational `{s}`: {e}")))
}
