//! Collocation matrices `T_n^d`, their circulant periodizations and the
//! other circulant embeddings used to bound their spectra.
//!
//! Nothing here is stored densely: a Toeplitz matrix is its symbol plus an
//! order, a circulant is its first row.

use std::sync::Arc;

use rug::ops::Pow;
use rug::Rational;

use crate::error::{Error, Result};
use crate::scalars::{self, BigReal};
use crate::spectra::band::{self, ToeplitzBand};
use crate::splines::{self, SplineSymbol};

/// Symmetric banded Toeplitz matrix generated by a spline symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedToeplitz {
    symbol: Arc<SplineSymbol>,
    order: usize,
}

impl BandedToeplitz {
    pub fn new(symbol: Arc<SplineSymbol>, order: usize) -> Result<Self> {
        let r = symbol.half_bandwidth();
        if order < r + 1 {
            return Err(Error::OrderTooSmall { order, bandwidth: r });
        }
        Ok(BandedToeplitz { symbol, order })
    }

    pub fn symbol(&self) -> &Arc<SplineSymbol> {
        &self.symbol
    }

    pub fn degree(&self) -> u32 {
        self.symbol.degree()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn half_bandwidth(&self) -> usize {
        self.symbol.half_bandwidth()
    }

    /// The `n` for which this is `T_n^d` (order `n - d`).
    pub fn knot_count(&self) -> usize {
        self.order + self.degree() as usize
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.order && j < self.order, "index out of range");
        self.symbol.get(i.abs_diff(j))
    }

    /// Band entries `t_0..t_r` rounded to `precision` bits.
    pub fn band(&self, precision: u32) -> ToeplitzBand {
        ToeplitzBand::new(
            self.symbol.values().iter().map(|t| scalars::to_big_real(t, precision)).collect(),
            self.order,
        )
    }
}

/// `T_n^d`: the order-`(n - d)` collocation matrix of the degree-`d` cardinal
/// B-spline basis at the knot averages.
pub fn build_toeplitz(d: u32, n: usize) -> Result<BandedToeplitz> {
    let symbol = splines::symbol(d)?;
    let r = symbol.half_bandwidth();
    let order = n.checked_sub(d as usize).filter(|&o| o > r).ok_or(Error::OrderTooSmall {
        order: n.saturating_sub(d as usize),
        bandwidth: r,
    })?;
    BandedToeplitz::new(symbol, order)
}

/// Real symmetric circulant, stored as its first row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circulant {
    row: Vec<Rational>,
}

impl Circulant {
    /// Fails unless `row` is nonempty and `row[j] == row[m - j]`.
    pub fn from_row(row: Vec<Rational>) -> Result<Self> {
        let m = row.len();
        if m == 0 {
            return Err(Error::InvalidArgument("circulant order must be positive".into()));
        }
        if (1..m).any(|j| row[j] != row[m - j]) {
            return Err(Error::InvalidArgument("circulant first row is not symmetric".into()));
        }
        Ok(Circulant { row })
    }

    pub fn order(&self) -> usize {
        self.row.len()
    }

    pub fn row(&self) -> &[Rational] {
        &self.row
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        let m = self.order();
        assert!(i < m && j < m, "index out of range");
        &self.row[(j + m - i) % m]
    }

    /// Nonzero lags `j` in `1..=m/2` with their values.
    pub fn half_row_support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        let m = self.order();
        (1..=m / 2).filter_map(move |j| {
            let c = &self.row[j];
            (*c != 0).then_some((j, c))
        })
    }

    /// Common row sum, which is also the eigenvalue at index 0.
    pub fn row_sum(&self) -> Rational {
        self.row.iter().sum()
    }
}

/// Smallest circulant whose leading block of order `n - d` is `T_n^d`:
/// order `m = n - d + r`, first row `(t_0, …, t_r, 0, …, 0, t_r, …, t_1)`.
pub fn periodize(t: &BandedToeplitz) -> Circulant {
    let r = t.half_bandwidth();
    let m = t.order() + r;
    let mut row = vec![Rational::new(); m];
    for (j, value) in t.symbol().values().iter().enumerate() {
        row[j] = value.clone();
        if j > 0 {
            row[m - j] = value.clone();
        }
    }
    Circulant { row }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddingKind {
    Periodization,
    PrimePeriodization,
    Ferreira,
    DemboMallowsShepp,
    NewsamDietrich,
}

impl EmbeddingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EmbeddingKind::Periodization => "periodization",
            EmbeddingKind::PrimePeriodization => "prime_periodization",
            EmbeddingKind::Ferreira => "ferreira",
            EmbeddingKind::DemboMallowsShepp => "dms",
            EmbeddingKind::NewsamDietrich => "newsam_dietrich",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Guarantee {
    None,
    Nonsingular,
    PositiveSemidefinite,
}

impl Guarantee {
    pub fn as_str(self) -> &'static str {
        match self {
            Guarantee::None => "none",
            Guarantee::Nonsingular => "nonsingular",
            Guarantee::PositiveSemidefinite => "positive_semidefinite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingPlan {
    pub kind: EmbeddingKind,
    pub source_order: usize,
    pub target_order: usize,
    /// Knot count `p >= n` the Toeplitz matrix is first extended to, when the
    /// embedding goes through a larger `T_p^d`.
    pub padded_size: Option<usize>,
    pub guarantees: Guarantee,
}

/// Smallest `p >= n` for which the periodization of `T_p^d` has prime order
/// `m = p - d + r`; such a circulant is nonsingular because its row sum is 1
/// and its entries are not all equal.
pub fn prime_embedding_order(d: u32, n: usize) -> Result<EmbeddingPlan> {
    let t = build_toeplitz(d, n)?;
    let r = t.half_bandwidth();
    let mut p = n;
    while !scalars::is_prime((p - d as usize + r) as u64) {
        p += 1;
    }
    Ok(EmbeddingPlan {
        kind: EmbeddingKind::PrimePeriodization,
        source_order: t.order(),
        target_order: p - d as usize + r,
        padded_size: Some(p),
        guarantees: Guarantee::Nonsingular,
    })
}

/// Plan describing the plain periodization of `T_n^d`. Positive
/// definiteness of that circulant is conjectured, not guaranteed.
pub fn periodization_plan(t: &BandedToeplitz) -> EmbeddingPlan {
    EmbeddingPlan {
        kind: EmbeddingKind::Periodization,
        source_order: t.order(),
        target_order: t.order() + t.half_bandwidth(),
        padded_size: None,
        guarantees: Guarantee::None,
    }
}

/// Outcome of testing the sufficient condition `|bᵀ T⁻¹ c| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FerreiraVerdict {
    /// Below `1 - 2^(-precision/4)`: the embedding is positive semidefinite.
    Certified,
    /// Above `1 + 2^(-precision/4)`: the sufficient condition fails.
    NotSatisfied,
    /// Within the margin of 1 at this precision.
    Indeterminate,
}

impl FerreiraVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            FerreiraVerdict::Certified => "certified",
            FerreiraVerdict::NotSatisfied => "not_satisfied",
            FerreiraVerdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FerreiraEmbedding {
    pub circulant: Circulant,
    pub condition_value: BigReal,
    pub verdict: FerreiraVerdict,
    pub plan: EmbeddingPlan,
}

/// Doubling embedding `C = [[T, S], [S, T]]` of order `2N` (`N` the order of
/// `T`), where `S` has first row `(0, …, 0, t_r, …, t_1)`.
///
/// Also evaluates `|bᵀ T⁻¹ c|` with `b = (t_0, …, t_{N-1})` (the first column
/// of `T`) and `c = (0, t_{N-1}, …, t_1)` (the first column of `S`), using a
/// banded LDLᵀ solve at `precision` bits.
pub fn ferreira_embed(t: &BandedToeplitz, precision: u32) -> Result<FerreiraEmbedding> {
    let n = t.order();
    let band = t.band(precision);
    if band::count_below(&band, &BigReal::with_val(precision, 0), n)? != 0 {
        return Err(Error::NotPositiveDefinite);
    }

    let m = 2 * n;
    let mut row = vec![Rational::new(); m];
    for (j, value) in t.symbol().values().iter().enumerate() {
        row[j] = value.clone();
        if j > 0 {
            row[m - j] = value.clone();
        }
    }
    let circulant = Circulant::from_row(row)?;

    let b: Vec<BigReal> = (0..n).map(|i| scalars::to_big_real(&t.symbol().get(i), precision)).collect();
    let c: Vec<BigReal> = (0..n)
        .map(|i| if i == 0 { BigReal::new(precision) } else { scalars::to_big_real(&t.symbol().get(n - i), precision) })
        .collect();
    let x = band::solve(&band, &c)?;
    let mut dot = BigReal::new(precision);
    for (bi, xi) in b.iter().zip(&x) {
        dot += bi * xi;
    }
    let value = dot.abs();

    let margin = scalars::pow2(-(precision as i32) / 4, precision);
    let one = BigReal::with_val(precision, 1);
    let verdict = if value < BigReal::with_val(precision, &one - &margin) {
        FerreiraVerdict::Certified
    } else if value > BigReal::with_val(precision, &one + &margin) {
        FerreiraVerdict::NotSatisfied
    } else {
        FerreiraVerdict::Indeterminate
    };

    let plan = EmbeddingPlan {
        kind: EmbeddingKind::Ferreira,
        source_order: n,
        target_order: m,
        padded_size: None,
        guarantees: if verdict == FerreiraVerdict::Certified {
            Guarantee::PositiveSemidefinite
        } else {
            Guarantee::None
        },
    };
    Ok(FerreiraEmbedding { circulant, condition_value: value, verdict, plan })
}

fn check_kappa(kappa: &BigReal) -> Result<()> {
    if !(*kappa >= 1) {
        return Err(Error::InvalidArgument(format!("condition number must be >= 1, got {kappa}")));
    }
    Ok(())
}

fn ceil_to_u64(x: BigReal) -> Result<u64> {
    x.ceil()
        .to_integer()
        .and_then(|i| i.to_u64())
        .ok_or_else(|| Error::InvalidArgument("embedding order overflows u64".into()))
}

/// Smallest `m` with `m >= 2 (n + κ n² / √6)`.
pub fn dms_order(n: u64, kappa: &BigReal) -> Result<u64> {
    check_kappa(kappa)?;
    let prec = kappa.prec().max(scalars::MIN_PRECISION);
    let sqrt6 = BigReal::with_val(prec, 6).sqrt();
    let n2 = BigReal::with_val(prec, n) * n;
    let bound = (BigReal::with_val(prec, kappa * n2) / sqrt6 + n) * 2u32;
    ceil_to_u64(bound)
}

/// Smallest `m` with `m >= 2 √(6n² + κ · 3 · 2^{11/2} n^{5/2} / 5^{5/2})`.
pub fn newsam_dietrich_order(n: u64, kappa: &BigReal) -> Result<u64> {
    check_kappa(kappa)?;
    let prec = kappa.prec().max(scalars::MIN_PRECISION);
    let five_halves = BigReal::with_val(prec, 2.5);
    let coeff = BigReal::with_val(prec, 2).pow(BigReal::with_val(prec, 5.5)) * 3u32
        / BigReal::with_val(prec, 5).pow(&five_halves);
    let n_real = BigReal::with_val(prec, n);
    let n52 = BigReal::with_val(prec, (&n_real).pow(&five_halves));
    let radicand = BigReal::with_val(prec, &n_real * &n_real) * 6u32 + coeff * kappa * n52;
    ceil_to_u64(radicand.sqrt() * 2u32)
}
