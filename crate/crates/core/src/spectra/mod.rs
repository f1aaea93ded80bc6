//! Eigenvalues and spectral condition numbers of the collocation matrices
//! and their circulant embeddings.

pub mod band;
pub mod bisection;
mod circulant;
mod dense;

pub use circulant::{circulant_condition, circulant_eigenvalues, circulant_eigenvalues_with, CosineTable};
pub(crate) use circulant::CosineSum;
pub use dense::{interlace_check, DenseSymmetric, InterlaceReport, DENSE_ORACLE_MAX_ORDER};

use rug::float::Round;
use rug::Rational;

use crate::error::{Error, Result};
use crate::scalars::{self, BigReal};
use crate::splines::SplineSymbol;
use crate::toeplitz::BandedToeplitz;

use bisection::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    CirculantDft,
    Bisection,
    TridiagonalClosedForm,
    Gershgorin,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::CirculantDft => "circulant_dft",
            Method::Bisection => "bisection",
            Method::TridiagonalClosedForm => "tridiagonal_closed_form",
            Method::Gershgorin => "gershgorin",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub lambda_min: BigReal,
    pub lambda_max: BigReal,
    /// `σ_max / σ_min`; equals `lambda_max / lambda_min` for definite matrices.
    pub condition: BigReal,
    pub method: Method,
    pub precision: u32,
    /// Leading decimal digits shared with a run at twice the precision.
    pub certified_digits: u32,
}

/// Diagonal-dominance bounds `2t_0 - 1 <= λ <= 1` for every `T_n^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GershgorinBounds {
    pub lower: Rational,
    pub upper: Rational,
    /// Strict diagonal dominance, i.e. `lower > 0`.
    pub dominant: bool,
}

impl GershgorinBounds {
    /// `GB(d) = upper / lower`, an upper bound on `κ₂(T_n^d)` for every `n`,
    /// available only under strict diagonal dominance.
    pub fn condition_bound(&self) -> Option<Rational> {
        self.dominant.then(|| Rational::from(&self.upper / &self.lower))
    }
}

pub fn gershgorin_bounds(s: &SplineSymbol) -> GershgorinBounds {
    let t0 = &s.values()[0];
    let off: Rational = s.values()[1..].iter().sum();
    let off2 = Rational::from(&off * 2u32);
    let upper = Rational::from(t0 + &off2);
    let lower = Rational::from(t0 - &off2);
    let dominant = lower > 0;
    GershgorinBounds { lower, upper, dominant }
}

fn require_tridiagonal(t: &BandedToeplitz) -> Result<()> {
    if t.half_bandwidth() != 1 {
        return Err(Error::BandwidthMismatch { expected: 1, found: t.half_bandwidth() });
    }
    Ok(())
}

/// `λ_k = t_0 + 2t_1 cos(πk/(N+1))`, `k = 1..=N`, for tridiagonal `T`
/// (degrees 2 and 3). Returned in `k` order, i.e. descending.
pub fn tridiagonal_eigenvalues(t: &BandedToeplitz, precision: u32) -> Result<Vec<BigReal>> {
    require_tridiagonal(t)?;
    let n = t.order();
    let t0 = scalars::to_big_real(&t.symbol().values()[0], precision);
    let t1x2 = scalars::to_big_real(&Rational::from(&t.symbol().values()[1] * 2u32), precision);
    (1..=n)
        .map(|k| {
            let c = scalars::cos_pi_multiple(k as i64, n as u64 + 1, precision)?;
            Ok(c * &t1x2 + &t0)
        })
        .collect()
}

/// Extreme eigenvalues of a tridiagonal `T` from the closed form.
pub fn tridiagonal_report(t: &BandedToeplitz, precision: u32) -> Result<SpectrumReport> {
    let run = |prec: u32| -> Result<(BigReal, BigReal)> {
        let eig = tridiagonal_eigenvalues(t, prec)?;
        Ok((eig.last().cloned().expect("nonempty"), eig[0].clone()))
    };
    let (lo, hi) = run(precision)?;
    let (lo2, hi2) = run(2 * precision)?;
    Ok(build_report(lo, hi, &lo2, &hi2, Method::TridiagonalClosedForm, precision))
}

fn build_report(lo: BigReal, hi: BigReal, lo2: &BigReal, hi2: &BigReal, method: Method, precision: u32) -> SpectrumReport {
    let cond = BigReal::with_val(precision, &hi / &lo);
    let cond2 = BigReal::with_val(2 * precision, hi2 / lo2);
    let certified = scalars::agreeing_digits(&cond, &cond2)
        .min(scalars::agreeing_digits(&lo, lo2))
        .min(scalars::agreeing_digits(&hi, hi2));
    SpectrumReport { lambda_min: lo, lambda_max: hi, condition: cond, method, precision, certified_digits: certified }
}

/// `(λ_min, λ_max)` of `T` by inertia bisection on the Gershgorin interval
/// `[2t_0 - 1, 1]`, each to relative error `2^(-precision/2)`.
pub fn extreme_eigenvalues(t: &BandedToeplitz, precision: u32) -> Result<(BigReal, BigReal)> {
    if precision < scalars::MIN_PRECISION {
        return Err(Error::InvalidArgument(format!("precision must be at least {} bits", scalars::MIN_PRECISION)));
    }
    let band = t.band(precision);
    let g = gershgorin_bounds(t.symbol());
    let lo = BigReal::with_val_round(precision, &g.lower, Round::Down).0;
    let hi = BigReal::with_val_round(precision, &g.upper, Round::Up).0;
    let tol = Tolerance::relative(precision);
    let min = bisection::smallest(&band, lo.clone(), hi.clone(), &tol)?;
    let max = bisection::largest(&band, lo, hi, &tol)?;
    Ok((min, max))
}

/// Extreme eigenvalues and `κ₂(T)` by inertia bisection, with certified
/// digits taken from a second run at twice the precision.
pub fn extreme_eigenvalues_bisection(t: &BandedToeplitz, precision: u32) -> Result<SpectrumReport> {
    let (lo, hi) = extreme_eigenvalues(t, precision)?;
    let (lo2, hi2) = extreme_eigenvalues(t, 2 * precision)?;
    Ok(build_report(lo, hi, &lo2, &hi2, Method::Bisection, precision))
}
