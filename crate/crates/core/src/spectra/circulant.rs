//! Circulant spectra as cosine sums over the first row.

use rug::Rational;

use crate::error::{Error, Result};
use crate::scalars::{self, BigReal};
use crate::toeplitz::Circulant;

use super::{Method, SpectrumReport};

/// `cos(2πℓ/m)` for `ℓ = 0..m`, with the rational values kept exactly.
#[derive(Debug, Clone)]
pub struct CosineTable {
    order: usize,
    precision: u32,
    values: Vec<BigReal>,
    exact: Vec<Option<Rational>>,
}

impl CosineTable {
    pub fn new(order: usize, precision: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("cosine table order must be positive".into()));
        }
        let m = order as u64;
        let mut values = Vec::with_capacity(order);
        let mut exact = Vec::with_capacity(order);
        for l in 0..order {
            let p = 2 * l as i64;
            exact.push(scalars::cos_pi_exact(p, m)?);
            values.push(scalars::cos_pi_multiple(p, m, precision)?);
        }
        Ok(CosineTable { order, precision, values, exact })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `cos(2πℓ/m)`.
    pub fn get(&self, l: usize) -> &BigReal {
        &self.values[l % self.order]
    }
}

struct Term {
    lag: usize,
    coeff: Rational,
    coeff_real: BigReal,
}

/// First row reduced to the nonzero cosine terms:
/// `λ_k = c_0 + Σ coeff_j cos(2πk·lag_j/m)`, where each lag `j < m/2`
/// carries `2c_j` and the middle lag of an even order carries `c_{m/2}`.
pub(crate) struct CosineSum {
    order: usize,
    precision: u32,
    c0: Rational,
    c0_real: BigReal,
    terms: Vec<Term>,
}

impl CosineSum {
    pub(crate) fn new(c: &Circulant, precision: u32) -> Self {
        let m = c.order();
        let terms = c
            .half_row_support()
            .map(|(lag, value)| {
                let coeff = if 2 * lag == m { value.clone() } else { Rational::from(value * 2u32) };
                let coeff_real = scalars::to_big_real(&coeff, precision);
                Term { lag, coeff, coeff_real }
            })
            .collect();
        CosineSum {
            order: m,
            precision,
            c0: c.row()[0].clone(),
            c0_real: scalars::to_big_real(&c.row()[0], precision),
            terms,
        }
    }

    /// `λ_k` from a precomputed table. Terms whose cosine is rational are
    /// summed exactly and rounded once, so rational eigenvalues (`λ_0`, and
    /// `λ_{m/2}` for even `m`) come out correctly rounded.
    pub(crate) fn eigenvalue(&self, k: usize, table: &CosineTable) -> BigReal {
        debug_assert_eq!(table.order, self.order);
        let m = self.order;
        let mut exact: Option<Rational> = None;
        let mut approx = BigReal::new(self.precision);
        for term in &self.terms {
            let l = (k % m) * term.lag % m;
            match &table.exact[l] {
                Some(cos) => {
                    let acc = exact.get_or_insert_with(|| self.c0.clone());
                    *acc += Rational::from(&term.coeff * cos);
                }
                None => approx += &term.coeff_real * &table.values[l],
            }
        }
        match exact {
            None => approx + &self.c0_real,
            Some(q) => approx + scalars::to_big_real(&q, self.precision),
        }
    }

    /// `λ_k` evaluated without a table, at the precision of this sum.
    pub(crate) fn eigenvalue_direct(&self, k: usize) -> Result<BigReal> {
        let m = self.order;
        let mut exact: Option<Rational> = None;
        let mut approx = BigReal::new(self.precision);
        for term in &self.terms {
            let p = 2 * ((k % m) * term.lag % m) as i64;
            match scalars::cos_pi_exact(p, m as u64)? {
                Some(cos) => {
                    let acc = exact.get_or_insert_with(|| self.c0.clone());
                    *acc += Rational::from(&term.coeff * &cos);
                }
                None => approx += &term.coeff_real * &scalars::cos_pi_multiple(p, m as u64, self.precision)?,
            }
        }
        Ok(match exact {
            None => approx + &self.c0_real,
            Some(q) => approx + scalars::to_big_real(&q, self.precision),
        })
    }

    /// Exact value of `λ_k` when every cosine involved is rational.
    pub(crate) fn exact_eigenvalue(&self, k: usize) -> Result<Option<Rational>> {
        let m = self.order;
        let mut acc = self.c0.clone();
        for term in &self.terms {
            let p = 2 * ((k % m) * term.lag % m) as i64;
            match scalars::cos_pi_exact(p, m as u64)? {
                Some(cos) => acc += Rational::from(&term.coeff * &cos),
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }
}

/// All eigenvalues `λ_k = Σ_j c_j cos(2πkj/m)`, in DFT index order.
pub fn circulant_eigenvalues(c: &Circulant, precision: u32) -> Result<Vec<BigReal>> {
    let table = CosineTable::new(c.order(), precision)?;
    Ok(circulant_eigenvalues_with(c, &table))
}

/// As [`circulant_eigenvalues`], reusing a cosine table of matching order.
pub fn circulant_eigenvalues_with(c: &Circulant, table: &CosineTable) -> Vec<BigReal> {
    assert_eq!(c.order(), table.order(), "cosine table order mismatch");
    let sum = CosineSum::new(c, table.precision());
    (0..c.order()).map(|k| sum.eigenvalue(k, table)).collect()
}

struct Extremes {
    lambda_min: BigReal,
    lambda_max: BigReal,
    sigma_min: BigReal,
    sigma_max: BigReal,
}

fn extremes(eigenvalues: &[BigReal]) -> Extremes {
    let mut it = eigenvalues.iter();
    let first = it.next().expect("nonempty spectrum");
    let mut e = Extremes {
        lambda_min: first.clone(),
        lambda_max: first.clone(),
        sigma_min: first.clone().abs(),
        sigma_max: first.clone().abs(),
    };
    for v in it {
        if *v < e.lambda_min {
            e.lambda_min = v.clone();
        }
        if *v > e.lambda_max {
            e.lambda_max = v.clone();
        }
        let a = v.clone().abs();
        if a < e.sigma_min {
            e.sigma_min = a.clone();
        }
        if a > e.sigma_max {
            e.sigma_max = a;
        }
    }
    e
}

/// Spectral condition number `max|λ_k| / min|λ_k|` of a symmetric circulant,
/// certified against a doubled-precision recomputation.
pub fn circulant_condition(c: &Circulant, precision: u32) -> Result<SpectrumReport> {
    let run = |prec: u32| -> Result<(Extremes, BigReal)> {
        let e = extremes(&circulant_eigenvalues(c, prec)?);
        if e.sigma_min < scalars::pow2(-(prec as i32) / 2, prec) {
            return Err(Error::SingularCirculant { order: c.order(), precision: prec });
        }
        let cond = BigReal::with_val(prec, &e.sigma_max / &e.sigma_min);
        Ok((e, cond))
    };
    let (e, cond) = run(precision)?;
    let (e2, cond2) = run(2 * precision)?;
    let certified = scalars::agreeing_digits(&cond, &cond2)
        .min(scalars::agreeing_digits(&e.sigma_min, &e2.sigma_min))
        .min(scalars::agreeing_digits(&e.sigma_max, &e2.sigma_max));
    Ok(SpectrumReport {
        lambda_min: e.lambda_min,
        lambda_max: e.lambda_max,
        condition: cond,
        method: Method::CirculantDft,
        precision,
        certified_digits: certified,
    })
}
