//! Tangent and Euler numbers, Euler polynomials, the limiting value `λ_∞`
//! of the collocation spectra, and auditing of the minimal-eigenvalue index
//! of the periodized matrices.

use std::collections::BTreeSet;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::scalars::{self, BigReal};
use crate::spectra::{CosineSum, CosineTable};
use crate::splines::{self, SplineSymbol};
use crate::toeplitz::{build_toeplitz, periodize};

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Tangent numbers `T_1, T_3, …, T_{2k_max+1}` by the integer-only
/// triangular recurrence.
pub fn tangent_numbers(k_max: usize) -> Vec<Integer> {
    let n = k_max + 1;
    let mut t = vec![Integer::new(); n + 1];
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let next = Integer::from(&t[j - 1] * (j - k) as u32) + Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = next;
        }
    }
    t.split_off(1)
}

/// Euler (secant) numbers `E_0, E_2, …, E_{2k_max}`, all positive.
pub fn euler_numbers(k_max: usize) -> Vec<Integer> {
    let n = k_max;
    let mut s = vec![Integer::new(); n + 1];
    s[0] = Integer::from(1);
    for k in 1..=n {
        s[k] = Integer::from(&s[k - 1] * k as u32);
    }
    for k in 1..=n {
        for j in k + 1..=n {
            let next = Integer::from(&s[j - 1] * (j - k) as u32) + Integer::from(&s[j] * (j - k + 1) as u32);
            s[j] = next;
        }
    }
    s
}

/// Tangent number `T_n`, zero for even `n`.
pub fn tangent_number(n: u32) -> Integer {
    if n % 2 == 0 {
        return Integer::new();
    }
    tangent_numbers((n as usize - 1) / 2).pop().expect("nonempty")
}

/// Euler number `E_n`, zero for odd `n`.
pub fn euler_number(n: u32) -> Integer {
    if n % 2 == 1 {
        return Integer::new();
    }
    euler_numbers(n as usize / 2).pop().expect("nonempty")
}

/// Euler polynomial `E_n(x)` with generating function `2e^{xt}/(e^t+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerPolynomial {
    n: u32,
    coefficients: Vec<Rational>,
}

impl EulerPolynomial {
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Coefficients in ascending powers of `x`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coefficients.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficients of `E_n(x+1)`.
    pub fn shifted(&self) -> Vec<Rational> {
        let n = self.n;
        let mut out = vec![Rational::new(); n as usize + 1];
        for (p, c) in self.coefficients.iter().enumerate() {
            for (q, slot) in out.iter_mut().enumerate().take(p + 1) {
                *slot += Rational::from(c * binomial(p as u32, q as u32));
            }
        }
        out
    }

    /// Coefficients of `E_n'(x)`.
    pub fn derivative(&self) -> Vec<Rational> {
        self.coefficients.iter().enumerate().skip(1).map(|(p, c)| Rational::from(c * p as u32)).collect()
    }
}

/// `E_n(0)` for `n = 0..=n_max`.
fn euler_polynomial_constants(n_max: u32) -> Vec<Rational> {
    let mut e: Vec<Rational> = Vec::with_capacity(n_max as usize + 1);
    e.push(Rational::from(1));
    for n in 1..=n_max {
        let mut sum = Rational::new();
        for (k, ek) in e.iter().enumerate() {
            sum += Rational::from(ek * binomial(n, k as u32));
        }
        e.push(-sum / 2u32);
    }
    e
}

pub fn euler_polynomial(n: u32) -> EulerPolynomial {
    let e = euler_polynomial_constants(n);
    let coefficients = (0..=n).map(|p| Rational::from(&e[(n - p) as usize] * binomial(n, p))).collect();
    EulerPolynomial { n, coefficients }
}

fn alternating_binomial_sum(d: u32, n: u32, shift: i64) -> Rational {
    let poly = euler_polynomial(n);
    let mut acc = Rational::new();
    for l in 0..=d + 1 {
        let term = Rational::from(poly.eval(&Rational::from(l as i64 + shift)) * binomial(d + 1, l));
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `Σ_{ℓ=0}^{d+1} (-1)^ℓ C(d+1, ℓ) E_n(ℓ)`.
pub fn lemma_sum_a(d: u32, n: u32) -> Rational {
    alternating_binomial_sum(d, n, 0)
}

/// `Σ_{ℓ=0}^{d+1} (-1)^ℓ C(d+1, ℓ) E_n(ℓ+1)`.
pub fn lemma_sum_b(d: u32, n: u32) -> Rational {
    alternating_binomial_sum(d, n, 1)
}

/// `t_0 + 2Σ_{j=1}^r (-1)^j t_j`, the symbol evaluated at `π`.
pub fn alternating_symbol_sum(s: &SplineSymbol) -> Rational {
    let mut acc = s.values()[0].clone();
    for (j, t) in s.values().iter().enumerate().skip(1) {
        let twice = Rational::from(t * 2u32);
        if j % 2 == 0 {
            acc += twice;
        } else {
            acc -= twice;
        }
    }
    acc
}

/// `λ_∞^d` from the spline symbol in exact arithmetic.
pub fn lambda_infinity_sum(d: u32) -> Result<Rational> {
    let s = splines::symbol(d)?;
    Ok(alternating_symbol_sum(&s))
}

/// `λ_∞^d = T_d/d!` for odd `d`, `E_d/d!` for even `d`.
pub fn lambda_infinity_theorem(d: u32) -> Rational {
    let numerator = if d % 2 == 1 { tangent_number(d) } else { euler_number(d) };
    Rational::from((numerator, factorial(d)))
}

/// Indices `k` at which `λ_k(C_m)` is predicted to be minimal:
/// `{(m-1)/2, (m+1)/2}` for odd `m`, `{m/2}` for even `m`.
pub fn predicted_min_indices(m: usize) -> BTreeSet<usize> {
    if m % 2 == 1 {
        [(m - 1) / 2, (m + 1) / 2].into_iter().collect()
    } else {
        [m / 2].into_iter().collect()
    }
}

/// Result of checking the location of the smallest periodization eigenvalue.
#[derive(Debug, Clone)]
pub struct ConjectureVerdict {
    pub d: u32,
    pub n: usize,
    pub m: usize,
    pub min_index_set: BTreeSet<usize>,
    pub predicted_indices: BTreeSet<usize>,
    /// Every eigenvalue exceeds `2^(-P/2)`.
    pub positive_definite: bool,
    pub agrees: bool,
    /// Gap between the minimum and the smallest eigenvalue outside the
    /// argmin set, or zero when every eigenvalue is minimal.
    pub margin: BigReal,
    pub lambda_min: BigReal,
    /// For even `m`, whether `λ_{m/2}` equals `λ_∞^d` exactly.
    pub half_index_identity: Option<bool>,
    /// A near-tie persisted at doubled precision without becoming exact.
    pub indeterminate: bool,
    /// Leading digits of `lambda_min` confirmed at doubled precision.
    pub certified_digits: u32,
}

impl ConjectureVerdict {
    /// The cell contradicts the conjecture.
    pub fn is_counterexample(&self) -> bool {
        !self.indeterminate && (!self.agrees || !self.positive_definite || self.half_index_identity == Some(false))
    }
}

/// Audits the periodization `C_m^d` of `T_n^d`.
pub fn conjecture_audit(d: u32, n: usize, precision: u32) -> Result<ConjectureVerdict> {
    let t = build_toeplitz(d, n)?;
    let table = CosineTable::new(periodize(&t).order(), precision)?;
    conjecture_audit_with(d, n, &table)
}

/// As [`conjecture_audit`], reusing a cosine table of order `m`.
pub fn conjecture_audit_with(d: u32, n: usize, table: &CosineTable) -> Result<ConjectureVerdict> {
    let t = build_toeplitz(d, n)?;
    let r = t.half_bandwidth();
    if t.order() < r + 1 {
        return Err(Error::OrderTooSmall { order: t.order(), bandwidth: r });
    }
    let c = periodize(&t);
    let m = c.order();
    if table.order() != m {
        return Err(Error::InvalidArgument(format!("cosine table has order {}, expected {m}", table.order())));
    }
    let precision = table.precision();
    let sum = CosineSum::new(&c, precision);
    let eig: Vec<BigReal> = (0..m).map(|k| sum.eigenvalue(k, table)).collect();

    let min = eig.iter().min_by(|a, b| a.partial_cmp(b).expect("finite")).expect("nonempty").clone();
    let scale = BigReal::with_val(precision, min.abs_ref());
    let near = BigReal::with_val(precision, &scale >> (precision / 2) as i32);
    let candidates: Vec<usize> =
        (0..m).filter(|&k| BigReal::with_val(precision, &eig[k] - &min) <= near).collect();

    let fine = 2 * precision;
    let sum2 = CosineSum::new(&c, fine);
    let refined: Vec<(usize, BigReal)> =
        candidates.iter().map(|&k| Ok((k, sum2.eigenvalue_direct(k)?))).collect::<Result<_>>()?;
    let min2 = refined.iter().map(|(_, v)| v).min_by(|a, b| a.partial_cmp(b).expect("finite")).expect("nonempty");
    let tie = BigReal::with_val(fine, min2.abs_ref()) >> precision as i32;
    let min_index_set: BTreeSet<usize> =
        refined.iter().filter(|(_, v)| BigReal::with_val(fine, v - min2) <= tie).map(|(k, _)| *k).collect();
    // separated at 2P, but by less than the P-level tie threshold
    let indeterminate = refined.iter().any(|(k, v)| {
        !min_index_set.contains(k) && BigReal::with_val(fine, v - min2) <= BigReal::with_val(fine, &near >> 8)
    });
    let certified_digits = scalars::agreeing_digits(&min, min2);

    let mut margin: Option<BigReal> = None;
    for (k, v) in eig.iter().enumerate() {
        if min_index_set.contains(&k) {
            continue;
        }
        let gap = BigReal::with_val(precision, v - &min);
        if margin.as_ref().map_or(true, |g| gap < *g) {
            margin = Some(gap);
        }
    }
    let margin = margin.unwrap_or_else(|| BigReal::new(precision));

    let positive_definite = min > scalars::pow2(-(precision as i32) / 2, precision);
    let half_index_identity = if m % 2 == 0 {
        let exact = sum.exact_eigenvalue(m / 2)?.expect("cos(π) is rational");
        Some(exact == alternating_symbol_sum(t.symbol()))
    } else {
        None
    };
    let predicted_indices = predicted_min_indices(m);
    let agrees = min_index_set == predicted_indices;
    Ok(ConjectureVerdict {
        d,
        n,
        m,
        min_index_set,
        predicted_indices,
        positive_definite,
        agrees,
        margin,
        lambda_min: min,
        half_index_identity,
        indeterminate,
        certified_digits,
    })
}

/// Second differences `Δ²a_j = a_j - 2a_{j+1} + a_{j+2}` of the symbol
/// extended by zeros; returns whether all are nonnegative and the first
/// index where one is negative.
pub fn convexity_check(s: &SplineSymbol) -> (bool, Option<usize>) {
    convexity_of(s.values())
}

/// Convexity of a finite sequence extended by zeros.
pub fn convexity_of(values: &[Rational]) -> (bool, Option<usize>) {
    let at = |j: usize| values.get(j).cloned().unwrap_or_default();
    for j in 0..values.len() + 2 {
        let second = Rational::from(at(j) - Rational::from(at(j + 1) * 2u32)) + at(j + 2);
        if second < 0 {
            return (false, Some(j));
        }
    }
    (true, None)
}

/// Second differences of the zero-extended sequence up to the last
/// possibly nonzero one.
pub fn second_differences(values: &[Rational]) -> Vec<Rational> {
    let at = |j: usize| values.get(j).cloned().unwrap_or_default();
    (0..values.len() + 2).map(|j| Rational::from(at(j) - Rational::from(at(j + 1) * 2u32)) + at(j + 2)).collect()
}
