//! Exact rational scalars.
//!
//! Everything in this crate is computed over arbitrary-precision rationals;
//! there is no floating point anywhere. `Rat` is a thin alias plus a few
//! constructors that keep call sites short.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on zero denominator.
pub fn frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// `n!` as a rational.
pub fn factorial_rat(n: u32) -> Rat {
    Rat::from_integer(factorial(n))
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}
