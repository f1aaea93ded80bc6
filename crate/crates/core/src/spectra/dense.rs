//! Dense cross-check eigensolver for small instances.
//!
//! A dense symmetric matrix is reduced to tridiagonal form by Householder
//! reflections at the working precision and its spectrum is then found with
//! the same inertia-bisection kernel used for the banded matrices.

use crate::error::{Error, Result};
use crate::scalars::{self, BigReal};
use crate::toeplitz::{BandedToeplitz, Circulant};

use super::band::Tridiagonal;
use super::bisection;

/// Largest order handled by the dense oracle.
pub const DENSE_ORACLE_MAX_ORDER: usize = 128;

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct DenseSymmetric {
    order: usize,
    entries: Vec<BigReal>,
}

impl DenseSymmetric {
    pub fn from_fn(order: usize, precision: u32, mut f: impl FnMut(usize, usize) -> BigReal) -> Result<Self> {
        if order > DENSE_ORACLE_MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "dense oracle limited to order {DENSE_ORACLE_MAX_ORDER}, got {order}"
            )));
        }
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(BigReal::with_val(precision, f(i, j)));
            }
        }
        Ok(DenseSymmetric { order, entries })
    }

    pub fn from_toeplitz(t: &BandedToeplitz, precision: u32) -> Result<Self> {
        Self::from_fn(t.order(), precision, |i, j| scalars::to_big_real(&t.entry(i, j), precision))
    }

    pub fn from_circulant(c: &Circulant, precision: u32) -> Result<Self> {
        Self::from_fn(c.order(), precision, |i, j| scalars::to_big_real(c.entry(i, j), precision))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.entries[i * self.order + j]
    }

    /// Householder reduction to a similar tridiagonal matrix.
    pub fn tridiagonalize(&self) -> Tridiagonal {
        let n = self.order;
        let prec = self.entries.first().map_or(scalars::DEFAULT_PRECISION, BigReal::prec);
        let mut a = self.entries.clone();
        let idx = |i: usize, j: usize| i * n + j;

        for k in 0..n.saturating_sub(2) {
            // x = A[k+1.., k]
            let x: Vec<BigReal> = (k + 1..n).map(|i| a[idx(i, k)].clone()).collect();
            let mut norm2 = BigReal::new(prec);
            for v in &x {
                norm2 += BigReal::with_val(prec, v * v);
            }
            if norm2.is_zero() {
                continue;
            }
            let norm = norm2.sqrt();
            let alpha = if x[0].is_sign_negative() { norm } else { -norm };
            let mut v = x;
            v[0] -= &alpha;
            let mut vv = BigReal::new(prec);
            for e in &v {
                vv += BigReal::with_val(prec, e * e);
            }
            if vv.is_zero() {
                continue;
            }
            let beta = BigReal::with_val(prec, 2) / &vv;
            let len = v.len();
            // p = beta * S v on the trailing block S = A[k+1.., k+1..]
            let mut p = vec![BigReal::new(prec); len];
            for (r, pr) in p.iter_mut().enumerate() {
                let mut acc = BigReal::new(prec);
                for (c, vc) in v.iter().enumerate() {
                    acc += &a[idx(k + 1 + r, k + 1 + c)] * vc;
                }
                *pr = acc * &beta;
            }
            let mut vp = BigReal::new(prec);
            for (vi, pi) in v.iter().zip(&p) {
                vp += vi * pi;
            }
            let kcoef = BigReal::with_val(prec, &beta * &vp) / 2u32;
            let w: Vec<BigReal> = p.iter().zip(&v).map(|(pi, vi)| BigReal::with_val(prec, pi - &kcoef * vi)).collect();
            for r in 0..len {
                for c in 0..len {
                    let delta = BigReal::with_val(prec, &v[r] * &w[c]) + BigReal::with_val(prec, &w[r] * &v[c]);
                    a[idx(k + 1 + r, k + 1 + c)] -= delta;
                }
            }
            a[idx(k + 1, k)] = alpha.clone();
            a[idx(k, k + 1)] = alpha;
            for i in k + 2..n {
                a[idx(i, k)] = BigReal::new(prec);
                a[idx(k, i)] = BigReal::new(prec);
            }
        }

        let diagonal = (0..n).map(|i| a[idx(i, i)].clone()).collect();
        let off = (0..n.saturating_sub(1)).map(|i| a[idx(i + 1, i)].clone()).collect();
        Tridiagonal { diagonal, off }
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<BigReal>> {
        if self.order == 0 {
            return Ok(Vec::new());
        }
        bisection::all(&self.tridiagonalize())
    }

    /// Singular values `|λ|`, descending.
    pub fn singular_values(&self) -> Result<Vec<BigReal>> {
        let mut s: Vec<BigReal> = self.eigenvalues()?.into_iter().map(BigReal::abs).collect();
        s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
        Ok(s)
    }
}

/// Outcome of checking `σ_k(C) ≥ σ_k(T) ≥ σ_{k+ℓ}(C)`.
#[derive(Debug, Clone)]
pub struct InterlaceReport {
    pub passed: bool,
    /// Smallest of all the margins in both inequalities.
    pub worst_margin: BigReal,
    /// `ℓ`, the number of rows and columns deleted from `C` to obtain `T`.
    pub deleted: usize,
    pub kappa_toeplitz: BigReal,
    pub kappa_circulant: BigReal,
    /// `κ₂(T) ≤ κ₂(C)`.
    pub condition_ordered: bool,
}

/// Cauchy interlacing of the singular values of `T` against those of a
/// circulant `C` whose leading principal block is `T`. Both spectra come
/// from the dense oracle; margins down to `-2^(-P/2)` count as nonnegative.
pub fn interlace_check(t: &BandedToeplitz, c: &Circulant, precision: u32) -> Result<InterlaceReport> {
    let n = t.order();
    let m = c.order();
    if m < n {
        return Err(Error::InvalidArgument("circulant smaller than the Toeplitz matrix".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if &t.entry(i, j) != c.entry(i, j) {
                return Err(Error::InvalidArgument(format!(
                    "Toeplitz matrix is not the leading block of the circulant (entry {i},{j})"
                )));
            }
        }
    }
    let sigma_t = DenseSymmetric::from_toeplitz(t, precision)?.singular_values()?;
    let sigma_c = DenseSymmetric::from_circulant(c, precision)?.singular_values()?;
    let deleted = m - n;
    let zero = BigReal::new(precision);

    let mut worst: Option<BigReal> = None;
    let mut consider = |margin: BigReal| {
        if worst.as_ref().map_or(true, |w| margin < *w) {
            worst = Some(margin);
        }
    };
    for k in 0..n {
        consider(BigReal::with_val(precision, &sigma_c[k] - &sigma_t[k]));
        let lower = sigma_c.get(k + deleted).unwrap_or(&zero);
        consider(BigReal::with_val(precision, &sigma_t[k] - lower));
    }
    let worst_margin = worst.unwrap_or(zero);
    let tolerance = -scalars::pow2(-(precision as i32) / 2, precision);

    let kappa = |s: &[BigReal]| BigReal::with_val(precision, &s[0] / s.last().expect("nonempty"));
    let kappa_toeplitz = kappa(&sigma_t);
    let kappa_circulant = kappa(&sigma_c);
    let condition_ordered = kappa_toeplitz <= kappa_circulant;
    Ok(InterlaceReport {
        passed: worst_margin >= tolerance,
        worst_margin,
        deleted,
        kappa_toeplitz,
        kappa_circulant,
        condition_ordered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::circulant::circulant_eigenvalues;
    use crate::toeplitz::{build_toeplitz, periodize};

    const P: u32 = 256;

    #[test]
    fn tridiagonalization_preserves_spectrum() {
        let c = periodize(&build_toeplitz(7, 23).unwrap());
        let dense = DenseSymmetric::from_circulant(&c, P).unwrap().eigenvalues().unwrap();
        let mut dft = circulant_eigenvalues(&c, P).unwrap();
        dft.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in dense.iter().zip(&dft) {
            assert!(scalars::relative_error(a, b) < 1e-35, "{a} vs {b}");
        }
    }

    #[test]
    fn agrees_with_f64_eigensolver() {
        let t = build_toeplitz(9, 40).unwrap();
        let ours = DenseSymmetric::from_toeplitz(&t, P).unwrap().eigenvalues().unwrap();
        let n = t.order();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| t.entry(i, j).to_f64());
        let mut theirs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a.to_f64() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn interlacing_on_figure_instance() {
        let t = build_toeplitz(7, 23).unwrap();
        let c = periodize(&t);
        let report = interlace_check(&t, &c, P).unwrap();
        assert!(report.passed, "worst margin {}", report.worst_margin);
        assert_eq!(report.deleted, 3);
        assert!(report.condition_ordered);
    }

    #[test]
    fn rejects_unrelated_matrices() {
        let t = build_toeplitz(5, 20).unwrap();
        let c = periodize(&build_toeplitz(7, 30).unwrap());
        assert!(interlace_check(&t, &c, P).is_err());
    }
}
