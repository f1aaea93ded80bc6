use rug::{Integer, Rational};

use super::BigReal;

/// Decimal rendering of `q` rounded to `digits` significant digits, ties to
/// even, in positional notation (`1.998137`, `600739.5`, `0.0001234`).
pub fn format_significant_rational(q: &Rational, digits: u32) -> String {
    assert!(digits > 0, "at least one significant digit");
    if *q == 0 {
        return "0".to_string();
    }
    let negative = *q < 0;
    let magnitude = Rational::from(q.abs_ref());

    // 10^(e-1) <= |q| < 10^e
    let mut e = decimal_exponent_estimate(&magnitude);
    while magnitude >= pow10(e) {
        e += 1;
    }
    while magnitude < pow10(e - 1) {
        e -= 1;
    }

    let shift = digits as i64 - e;
    let scaled = magnitude * pow10(shift);
    let mut mantissa = round_half_even(&scaled);
    let mut point = e;
    if mantissa == Integer::from(Integer::u_pow_u(10, digits)) {
        mantissa /= 10;
        point += 1;
    }

    let body = place_point(&mantissa.to_string(), point);
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Round-half-even of a finite real to `digits` significant digits.
pub fn format_significant(x: &BigReal, digits: u32) -> String {
    match x.to_rational() {
        Some(q) => format_significant_rational(&q, digits),
        None => x.to_string(),
    }
}

/// Number of leading decimal digits on which `a` and `b` agree, judged by
/// their relative difference. Identical values agree to the full decimal
/// capacity of the smaller precision.
pub fn agreeing_digits(a: &BigReal, b: &BigReal) -> u32 {
    let prec = a.prec().min(b.prec());
    let cap = (f64::from(prec) * std::f64::consts::LOG10_2).floor() as u32;
    if a == b {
        return cap;
    }
    let rel = super::relative_error(a, b);
    if rel.is_zero() {
        return cap;
    }
    let digits = -rel.log10();
    if digits.is_sign_negative() {
        0
    } else {
        (digits.to_f64().floor() as u32).min(cap)
    }
}

fn pow10(e: i64) -> Rational {
    let p = Integer::from(Integer::u_pow_u(10, e.unsigned_abs() as u32));
    if e >= 0 {
        Rational::from(p)
    } else {
        Rational::from((Integer::from(1), p))
    }
}

fn decimal_exponent_estimate(q: &Rational) -> i64 {
    let bits = q.numer().significant_bits() as i64 - q.denom().significant_bits() as i64;
    (bits as f64 * std::f64::consts::LOG10_2).floor() as i64
}

fn round_half_even(q: &Rational) -> Integer {
    let (fract, trunc) = q.clone().fract_trunc(Integer::new());
    let twice = Rational::from(&fract * 2u32);
    match twice.cmp(&Rational::from(1)) {
        std::cmp::Ordering::Less => trunc,
        std::cmp::Ordering::Greater => trunc + 1u32,
        std::cmp::Ordering::Equal => {
            if trunc.is_even() {
                trunc
            } else {
                trunc + 1u32
            }
        }
    }
}

fn place_point(mantissa: &str, point: i64) -> String {
    let len = mantissa.len() as i64;
    if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), mantissa)
    } else if point >= len {
        format!("{}{}", mantissa, "0".repeat((point - len) as usize))
    } else {
        let (int, frac) = mantissa.split_at(point as usize);
        format!("{int}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fmt(n: i64, d: i64, digits: u32) -> String {
        format_significant_rational(&Rational::from((n, d)), digits)
    }

    #[test]
    fn positional_layout() {
        assert_eq!(fmt(2, 1, 7), "2.000000");
        assert_eq!(fmt(15, 2, 7), "7.500000");
        assert_eq!(fmt(720, 61, 7), "11.80328");
        assert_eq!(fmt(96, 19, 7), "5.052632");
        assert_eq!(fmt(5760, 127, 7), "45.35433");
        assert_eq!(fmt(6007395, 10, 7), "600739.5");
        assert_eq!(fmt(-1, 8, 3), "-0.125");
        assert_eq!(fmt(1, 8000, 2), "0.00012");
        assert_eq!(fmt(123456789, 1, 3), "123000000");
    }

    #[test]
    fn ties_go_to_even() {
        assert_eq!(fmt(125, 100, 2), "1.2");
        assert_eq!(fmt(135, 100, 2), "1.4");
        assert_eq!(fmt(-125, 100, 2), "-1.2");
        assert_eq!(fmt(1251, 1000, 2), "1.3");
    }

    #[test]
    fn carry_into_a_new_digit() {
        assert_eq!(fmt(99996, 10000, 4), "10.00");
        assert_eq!(fmt(9_999_999_6, 10_000_000, 7), "10.00000");
    }

    #[test]
    fn agreement_count() {
        let a = BigReal::with_val(256, 1.0);
        let b = BigReal::with_val(256, 1.0 + 1e-10);
        assert_eq!(agreeing_digits(&a, &b), 9);
        assert_eq!(agreeing_digits(&a, &a), 77);
    }
}
