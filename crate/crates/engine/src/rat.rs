//! Exact rational scalars. All arithmetic in the engine is over `Rat`;
//! nothing is ever rounded.

use num::bigint::BigInt;
use num::traits::{One, Zero};

pub type Rat = num::BigRational;

/// `n` as an exact rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational. `d` must be nonzero.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `x^e` for a signed exponent. `x` must be nonzero when `e < 0`.
pub fn pow_i(x: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    let p = x.pow(i32::try_from(e.unsigned_abs()).expect("exponent fits i32"));
    if e < 0 {
        Rat::one() / p
    } else {
        p
    }
}

/// (-1)^e without building a bigint power.
pub fn sign_pow(e: i64) -> Rat {
    if e % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

pub fn is_zero(x: &Rat) -> bool {
    x.is_zero()
}

pub fn is_one(x: &Rat) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_handles_negative_exponents() {
        let x = rat(2, 3);
        assert_eq!(pow_i(&x, -2), rat(9, 4));
        assert_eq!(pow_i(&x, 0), rat_i(1));
        assert_eq!(pow_i(&x, 3), rat(8, 27));
    }
}
