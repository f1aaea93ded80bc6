//! Numeric substrate: exact rationals, multiprecision reals, cosines of
//! rational multiples of π and a deterministic primality test.
//!
//! Rationals and integers are GMP-backed ([`rug::Rational`] is always kept in
//! lowest terms with a positive denominator). Reals are MPFR floats whose
//! precision travels with the value; every arithmetic operation on them is
//! correctly rounded to that precision.

mod decimal;
mod prime;
mod trig;

pub use decimal::{agreeing_digits, format_significant, format_significant_rational};
pub use prime::is_prime;
pub use trig::{cos_pi_exact, cos_pi_multiple};

pub use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Configurable-precision binary floating-point real.
pub type BigReal = rug::Float;

/// Working precision used unless a caller asks otherwise.
pub const DEFAULT_PRECISION: u32 = 256;

/// Smallest precision accepted by the public entry points.
pub const MIN_PRECISION: u32 = 64;

/// `a / b`, refusing a zero divisor instead of panicking.
pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if *b == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::from(a / b))
}

/// Correctly rounded (round-to-nearest) conversion to a real of `precision` bits.
pub fn to_big_real(q: &Rational, precision: u32) -> BigReal {
    BigReal::with_val(precision, q)
}

/// Exact rational value of a finite real.
pub fn to_rational(x: &BigReal) -> Option<Rational> {
    x.to_rational()
}

pub fn big_real(value: impl Into<f64>, precision: u32) -> BigReal {
    BigReal::with_val(precision, value.into())
}

/// `2^exponent` at the given precision (exact).
pub fn pow2(exponent: i32, precision: u32) -> BigReal {
    let one = BigReal::with_val(precision, 1);
    one << exponent
}

/// Relative error `|a - b| / |b|`, or the absolute error when `b` is zero.
pub fn relative_error(a: &BigReal, b: &BigReal) -> BigReal {
    let prec = a.prec().max(b.prec());
    let diff = BigReal::with_val(prec, a - b).abs();
    if b.is_zero() {
        diff
    } else {
        diff / BigReal::with_val(prec, b.abs_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rationals_are_normalized() {
        let q = rat(6, -4);
        assert_eq!(*q.numer(), -3);
        assert_eq!(*q.denom(), 2);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(checked_div(&rat(1, 2), &rat(0, 1)), Err(Error::DivisionByZero));
        assert_eq!(checked_div(&rat(1, 2), &rat(3, 4)).unwrap(), rat(2, 3));
    }

    #[test]
    fn representable_rationals_round_trip() {
        let q = rat(-12345, 1 << 20);
        let x = to_big_real(&q, DEFAULT_PRECISION);
        assert_eq!(to_rational(&x).unwrap(), q);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1..i64::MAX).prop_map(|(n, d)| rat(n, d))
    }

    fn wide_rational() -> impl Strategy<Value = Rational> {
        // numerators and denominators up to 2^100
        (any::<i64>(), any::<u64>(), 1u64.., any::<u64>()).prop_map(|(nh, nl, dh, dl)| {
            let num = (Integer::from(nh) << 36) + Integer::from(nl >> 28);
            let den = (Integer::from(dh) << 36) + Integer::from(dl >> 28);
            Rational::from((num, den))
        })
    }

    proptest! {
        #[test]
        fn addition_is_associative(a in small_rational(), b in small_rational(), c in small_rational()) {
            let left = Rational::from(&a + &b) + &c;
            let right = a + Rational::from(&b + &c);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn multiplication_distributes(a in small_rational(), b in small_rational(), c in small_rational()) {
            let left = Rational::from(&a * Rational::from(&b + &c));
            let right = Rational::from(&a * &b) + Rational::from(&a * &c);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn conversion_is_within_one_ulp(q in wide_rational()) {
            let x = to_big_real(&q, DEFAULT_PRECISION);
            let back = to_rational(&x).unwrap();
            if back == q {
                return Ok(());
            }
            // one ulp at 256 bits relative to |q|
            let err = Rational::from(&back - &q).abs();
            let bound = q.clone().abs() >> (DEFAULT_PRECISION - 1);
            prop_assert!(err <= bound, "error {} exceeds bound {}", err, bound);
        }

        #[test]
        fn dyadic_rationals_round_trip(num in any::<i64>(), shift in 0u32..100) {
            let q = Rational::from(num) >> shift;
            let x = to_big_real(&q, DEFAULT_PRECISION);
            prop_assert_eq!(to_rational(&x).unwrap(), q);
        }
    }
}
