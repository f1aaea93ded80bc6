//! Cardinal B-splines with integer knots `0, 1, …, d+1` and their collocation
//! symbol at the knot averages.
//!
//! Two independent evaluation routes are provided: the alternating
//! truncated-power sum and the degree recurrence. [`symbol`] computes every
//! entry through both and refuses to return anything if they disagree.

use std::sync::{Arc, OnceLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Largest degree for which symbols are produced.
pub const MAX_DEGREE: u32 = 40;

/// `(x - i)_+^d`, with `(x - i)_+^0 = 1` for `x >= i`.
pub fn truncated_power(x: &Rational, i: i64, d: u32) -> Rational {
    let shifted = Rational::from(x - i);
    if shifted < 0 {
        return Rational::new();
    }
    pow(&shifted, d)
}

fn pow(base: &Rational, exp: u32) -> Rational {
    let num = Integer::from(base.numer().pow(exp));
    let den = Integer::from(base.denom().pow(exp));
    Rational::from((num, den))
}

/// `N^d(x) = (1/d!) Σ_{i=0}^{d+1} (-1)^i C(d+1, i) (x - i)_+^d`.
pub fn spline_value_tp(d: u32, x: &Rational) -> Rational {
    let mut sum = Integer::new();
    let mut den = Integer::from(1);
    // accumulate over a common denominator x.denom()^d
    let q = x.denom();
    let qd = Integer::from(q.pow(d));
    for i in 0..=d + 1 {
        // (x - i) * q = numer - i*q
        let shifted = Integer::from(x.numer() - Integer::from(q * i));
        if shifted < 0 {
            break;
        }
        let term = Integer::from((&shifted).pow(d)) * Integer::from(Integer::binomial_u(d + 1, i));
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    den *= qd;
    den *= Integer::from(Integer::factorial(d));
    Rational::from((sum, den))
}

/// `N^d(x)` via `N^d(x) = [x N^{d-1}(x) + (d+1-x) N^{d-1}(x-1)] / d`,
/// starting from the indicator of `[0, 1)`.
pub fn spline_value_dbc(d: u32, x: &Rational) -> Rational {
    // values[k] holds N^e(x - k) for the current degree e; N^d(x) needs
    // shifts 0..=d of the degree-0 spline.
    let mut values: Vec<Rational> = (0..=d)
        .map(|k| {
            let y = Rational::from(x - k);
            if y >= 0 && y < 1 {
                Rational::from(1)
            } else {
                Rational::new()
            }
        })
        .collect();
    for e in 1..=d {
        for k in 0..=(d - e) as usize {
            let y = Rational::from(x - k as u32);
            let right = Rational::from(Rational::from((e + 1) as u32) - &y) * &values[k + 1];
            let left = y * &values[k];
            values[k] = (left + right) / e;
        }
    }
    values.swap_remove(0)
}

/// Collocation values `t_j = N^d(j + (d+1)/2)`, `j = 0..=⌊d/2⌋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplineSymbol {
    degree: u32,
    values: Vec<Rational>,
}

impl SplineSymbol {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `r = ⌊d/2⌋`, the number of nonzero off-diagonals on each side.
    pub fn half_bandwidth(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `t_j`, zero beyond the half-bandwidth.
    pub fn get(&self, j: usize) -> Rational {
        self.values.get(j).cloned().unwrap_or_default()
    }

    /// `t_0 + 2 Σ_{j≥1} t_j`; equals 1 for every degree.
    pub fn row_sum(&self) -> Rational {
        let tail: Rational = self.values[1..].iter().sum();
        Rational::from(&self.values[0] + tail * 2u32)
    }
}

/// Closed form of the smallest nonzero symbol entry: `1/d!` for odd `d`,
/// `1/(2^d d!)` for even `d`.
pub fn edge_value(d: u32) -> Rational {
    let mut den = Integer::from(Integer::factorial(d));
    if d % 2 == 0 {
        den <<= d;
    }
    Rational::from((Integer::from(1), den))
}

fn compute_symbol(d: u32) -> Result<SplineSymbol> {
    let r = d / 2;
    let centre = Rational::from((d + 1, 2u32));
    let mut values = Vec::with_capacity(r as usize + 1);
    for j in 0..=r {
        let x = Rational::from(&centre + j);
        let tp = spline_value_tp(d, &x);
        let dbc = spline_value_dbc(d, &x);
        if tp != dbc {
            return Err(Error::CrossCheckMismatch { degree: d, x: x.to_string() });
        }
        values.push(tp);
    }
    Ok(SplineSymbol { degree: d, values })
}

static SYMBOLS: [OnceLock<Arc<SplineSymbol>>; MAX_DEGREE as usize + 1] =
    [const { OnceLock::new() }; MAX_DEGREE as usize + 1];

/// The degree-`d` collocation symbol, computed once and shared.
pub fn symbol(d: u32) -> Result<Arc<SplineSymbol>> {
    if d == 0 {
        return Err(Error::InvalidArgument("symbol degree must be at least 1".into()));
    }
    if d > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree: d, max: MAX_DEGREE });
    }
    let slot = &SYMBOLS[d as usize];
    if let Some(s) = slot.get() {
        return Ok(Arc::clone(s));
    }
    let computed = Arc::new(compute_symbol(d)?);
    Ok(Arc::clone(slot.get_or_init(|| computed)))
}
