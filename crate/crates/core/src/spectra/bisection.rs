//! Eigenvalue bisection driven by inertia counts.

use crate::error::{Error, Result};
use crate::scalars::{self, BigReal};

use super::band::{self, SymmetricBand};

/// How close the bracket has to be before bisection stops.
#[derive(Debug, Clone)]
pub struct Tolerance {
    /// Stop once `width <= 2^-bits * min(|lo|, |hi|)` (and `lo`, `hi` share a
    /// sign, unless `floor` is met).
    pub bits: u32,
    /// Absolute width below which bisection stops regardless of sign.
    pub floor: Option<BigReal>,
}

impl Tolerance {
    /// Relative error `2^(-precision/2)` with no absolute floor.
    pub fn relative(precision: u32) -> Self {
        Tolerance { bits: precision / 2 + 1, floor: None }
    }
}

/// Maximum number of halvings before giving up.
pub fn iteration_cap(precision: u32) -> u32 {
    precision + 64
}

/// Bisects `[lo, hi]` towards the point where `left_of(σ)` switches from
/// false to true, where `left_of(σ)` means "the target lies below σ".
///
/// A factorization breakdown at the midpoint moves the split point by a
/// small fraction of the bracket and retries; any split point inside the
/// bracket keeps the invariant.
pub fn bisect<F>(mut lo: BigReal, mut hi: BigReal, tol: &Tolerance, mut left_of: F) -> Result<BigReal>
where
    F: FnMut(&BigReal) -> Result<bool>,
{
    let prec = lo.prec().max(hi.prec());
    let cap = iteration_cap(prec);
    for _ in 0..cap {
        if converged(&lo, &hi, tol) {
            return Ok(midpoint(&lo, &hi));
        }
        let mut mid = midpoint(&lo, &hi);
        if mid <= lo || mid >= hi {
            // bracket is down to adjacent floating-point numbers
            return Ok(mid);
        }
        let mut attempt = 0;
        let below = loop {
            match left_of(&mid) {
                Ok(v) => break v,
                Err(Error::FactorizationBreakdown { .. }) if attempt < 8 => {
                    attempt += 1;
                    let width = BigReal::with_val(prec, &hi - &lo);
                    let step = width >> (4 + attempt as i32);
                    if attempt % 2 == 1 {
                        mid += step;
                    } else {
                        mid -= step;
                    }
                }
                Err(e) => return Err(e),
            }
        };
        if below {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if converged(&lo, &hi, tol) {
        return Ok(midpoint(&lo, &hi));
    }
    Err(Error::NonConvergence { iterations: cap, precision: prec })
}

fn midpoint(lo: &BigReal, hi: &BigReal) -> BigReal {
    let prec = lo.prec().max(hi.prec());
    BigReal::with_val(prec, lo + hi) / 2u32
}

fn converged(lo: &BigReal, hi: &BigReal, tol: &Tolerance) -> bool {
    let prec = lo.prec().max(hi.prec());
    let width = BigReal::with_val(prec, hi - lo);
    if let Some(floor) = &tol.floor {
        if width <= *floor {
            return true;
        }
    }
    if lo.is_sign_negative() != hi.is_sign_negative() || lo.is_zero() || hi.is_zero() {
        return false;
    }
    let scale = BigReal::with_val(prec, lo.abs_ref()).min(&BigReal::with_val(prec, hi.abs_ref()));
    width <= (scale >> tol.bits as i32)
}

/// Smallest eigenvalue, given a bracket `[lo, hi]` that contains it.
pub fn smallest<M: SymmetricBand + ?Sized>(a: &M, lo: BigReal, hi: BigReal, tol: &Tolerance) -> Result<BigReal> {
    bisect(lo, hi, tol, |s| Ok(band::count_below(a, s, 1)? >= 1))
}

/// Largest eigenvalue, given a bracket `[lo, hi]` that contains it.
pub fn largest<M: SymmetricBand + ?Sized>(a: &M, lo: BigReal, hi: BigReal, tol: &Tolerance) -> Result<BigReal> {
    bisect(lo, hi, tol, |s| Ok(band::count_above(a, s, 1)? == 0))
}

/// `k`-th smallest eigenvalue (0-based).
pub fn kth<M: SymmetricBand + ?Sized>(a: &M, k: usize, lo: BigReal, hi: BigReal, tol: &Tolerance) -> Result<BigReal> {
    bisect(lo, hi, tol, |s| Ok(band::count_below(a, s, k + 1)? > k))
}

/// All eigenvalues in ascending order, each to the tolerance used by
/// [`Tolerance::relative`] with an absolute floor of `2^(-3P/4)` times the
/// Gershgorin scale.
pub fn all<M: SymmetricBand + ?Sized>(a: &M) -> Result<Vec<BigReal>> {
    let prec = a.precision();
    let (lo, hi) = a.gershgorin();
    let scale = BigReal::with_val(prec, lo.abs_ref()).max(&BigReal::with_val(prec, hi.abs_ref()));
    let tol = Tolerance { bits: prec / 2 + 1, floor: Some(scale * scalars::pow2(-(3 * prec as i32) / 4, prec)) };
    (0..a.order()).map(|k| kth(a, k, lo.clone(), hi.clone(), &tol)).collect()
}
