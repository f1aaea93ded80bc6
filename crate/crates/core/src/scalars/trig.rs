use rug::float::Constant;
use rug::Rational;

use super::BigReal;
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 32;

/// Canonical form of the angle `πp/q` after exact range reduction:
/// `cos(πp/q) = sign · cos(π·num/den)` with `0 ≤ num/den ≤ 1/2`,
/// `gcd(num, den) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Reduced {
    negate: bool,
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn reduce(p: i64, q: u64) -> Result<Reduced> {
    if q == 0 {
        return Err(Error::InvalidArgument("cos_pi_multiple: q must be positive".into()));
    }
    let two_q = 2 * i128::from(q);
    let mut p = i128::from(p).rem_euclid(two_q);
    let q = i128::from(q);
    // cos is even and 2π-periodic
    if p > q {
        p = two_q - p;
    }
    // cos(π - x) = -cos(x)
    let negate = 2 * p > q;
    if negate {
        p = q - p;
    }
    let (p, q) = (p as u64, q as u64);
    let g = gcd(p, q).max(1);
    Ok(Reduced { negate, num: p / g, den: q / g })
}

/// Exact value of `cos(πp/q)` when it is rational (0, ±1/2, ±1), else `None`.
pub fn cos_pi_exact(p: i64, q: u64) -> Result<Option<Rational>> {
    let r = reduce(p, q)?;
    let magnitude = match (r.num, r.den) {
        (0, _) => Rational::from(1),
        (1, 2) => Rational::new(),
        (1, 3) => Rational::from((1, 2)),
        _ => return Ok(None),
    };
    Ok(Some(if r.negate { -magnitude } else { magnitude }))
}

/// `cos(πp/q)` at `precision` bits.
///
/// The angle is reduced exactly to `[0, π/2]` first, so equivalent angles give
/// bit-identical results and the quarter-period points return exact zeros.
/// Angles above `π/4` are evaluated as `sin(π/2 - x)` so that the result keeps
/// full relative accuracy near the zero of the cosine.
pub fn cos_pi_multiple(p: i64, q: u64, precision: u32) -> Result<BigReal> {
    if let Some(exact) = cos_pi_exact(p, q)? {
        return Ok(BigReal::with_val(precision, &exact));
    }
    let r = reduce(p, q)?;
    let work = precision + GUARD_BITS;
    let pi = BigReal::with_val(work, Constant::Pi);
    let value = if 4 * r.num <= r.den {
        let x = pi * r.num / r.den;
        x.cos()
    } else {
        // π/2 - πn/d = π(d - 2n)/(2d)
        let x = pi * (r.den - 2 * r.num) / (2 * r.den);
        x.sin()
    };
    let value = BigReal::with_val(precision, value);
    Ok(if r.negate { -value } else { value })
}
