//! Symmetric banded LDLᵀ without pivoting: Sylvester inertia counts and
//! linear solves.

use rug::ops::NegAssign;
use rug::Assign;

use crate::error::{Error, Result};
use crate::scalars::{self, BigReal};

/// Read access to a real symmetric band matrix.
pub trait SymmetricBand {
    fn order(&self) -> usize;
    /// Number of nonzero superdiagonals.
    fn bandwidth(&self) -> usize;
    fn precision(&self) -> u32;
    /// `A[i][i + k]` for `k <= bandwidth` and `i + k < order`.
    fn upper(&self, i: usize, k: usize) -> &BigReal;

    /// Gershgorin inclusion interval `[lower, upper]` for the spectrum.
    fn gershgorin(&self) -> (BigReal, BigReal) {
        let prec = self.precision();
        let n = self.order();
        let w = self.bandwidth();
        let mut lo: Option<BigReal> = None;
        let mut hi: Option<BigReal> = None;
        for i in 0..n {
            let mut radius = BigReal::new(prec);
            for k in 1..=w {
                if i + k < n {
                    radius += BigReal::with_val(prec, self.upper(i, k).abs_ref());
                }
                if k <= i {
                    radius += BigReal::with_val(prec, self.upper(i - k, k).abs_ref());
                }
            }
            let a = self.upper(i, 0);
            let l = BigReal::with_val(prec, a - &radius);
            let u = BigReal::with_val(prec, a + &radius);
            if lo.as_ref().map_or(true, |x| l < *x) {
                lo = Some(l);
            }
            if hi.as_ref().map_or(true, |x| u > *x) {
                hi = Some(u);
            }
        }
        let (mut lo, mut hi) = (lo.unwrap_or_else(|| BigReal::new(prec)), hi.unwrap_or_else(|| BigReal::new(prec)));
        // widen by a few ulps to absorb rounding in the radius sums
        let magnitude = BigReal::with_val(prec, lo.abs_ref()).max(&BigReal::with_val(prec, hi.abs_ref()));
        let slack = (magnitude + 1u32) >> (prec as i32 - 8);
        lo -= &slack;
        hi += &slack;
        (lo, hi)
    }
}

/// Banded symmetric Toeplitz matrix with real band entries `t_0..t_r`.
#[derive(Debug, Clone)]
pub struct ToeplitzBand {
    values: Vec<BigReal>,
    order: usize,
}

impl ToeplitzBand {
    pub fn new(values: Vec<BigReal>, order: usize) -> Self {
        assert!(!values.is_empty(), "band needs a diagonal");
        ToeplitzBand { values, order }
    }

    pub fn values(&self) -> &[BigReal] {
        &self.values
    }
}

impl SymmetricBand for ToeplitzBand {
    fn order(&self) -> usize {
        self.order
    }

    fn bandwidth(&self) -> usize {
        (self.values.len() - 1).min(self.order.saturating_sub(1))
    }

    fn precision(&self) -> u32 {
        self.values[0].prec()
    }

    fn upper(&self, _i: usize, k: usize) -> &BigReal {
        &self.values[k]
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diagonal: Vec<BigReal>,
    /// `off[i] = A[i][i+1]`, length `order - 1` (a trailing entry is ignored).
    pub off: Vec<BigReal>,
}

impl SymmetricBand for Tridiagonal {
    fn order(&self) -> usize {
        self.diagonal.len()
    }

    fn bandwidth(&self) -> usize {
        usize::from(self.diagonal.len() > 1)
    }

    fn precision(&self) -> u32 {
        self.diagonal.first().map_or(scalars::DEFAULT_PRECISION, BigReal::prec)
    }

    fn upper(&self, i: usize, k: usize) -> &BigReal {
        if k == 0 {
            &self.diagonal[i]
        } else {
            &self.off[i]
        }
    }
}

/// Pivots with magnitude below `2^(-3P/4)` are treated as breakdowns.
pub fn tiny_pivot(precision: u32) -> BigReal {
    scalars::pow2(-(3 * precision as i32) / 4, precision)
}

/// Rolling `(w+1) x (w+1)` window of the partially eliminated band.
struct Window {
    width: usize,
    buf: Vec<BigReal>,
}

impl Window {
    fn new(width: usize, prec: u32) -> Self {
        Window { width, buf: vec![BigReal::new(prec); width * width] }
    }

    /// Loads row `i` of `sign * (A - shift I)` into its slot.
    fn load<M: SymmetricBand + ?Sized>(&mut self, a: &M, i: usize, shift: &BigReal, negate: bool) {
        let w = self.width;
        let n = a.order();
        let slot = (i % w) * w;
        for k in 0..w {
            let cell = &mut self.buf[slot + k];
            if i + k < n && k <= a.bandwidth() {
                cell.assign(a.upper(i, k));
                if k == 0 {
                    *cell -= shift;
                }
                if negate {
                    cell.neg_assign();
                }
            } else {
                cell.assign(0);
            }
        }
    }

    /// Row `s` (read) and row `t` (write), `s != t`.
    fn pair(&mut self, s: usize, t: usize) -> (&[BigReal], &mut [BigReal]) {
        let w = self.width;
        if s < t {
            let (lo, hi) = self.buf.split_at_mut(t * w);
            (&lo[s * w..s * w + w], &mut hi[..w])
        } else {
            let (lo, hi) = self.buf.split_at_mut(s * w);
            (&hi[..w], &mut lo[t * w..t * w + w])
        }
    }
}

/// Number of negative pivots of `LDLᵀ(sign * (A - shift I))`, stopping as
/// soon as `stop_at` negatives have been seen.
fn negative_pivots<M: SymmetricBand + ?Sized>(a: &M, shift: &BigReal, negate: bool, stop_at: usize) -> Result<usize> {
    let n = a.order();
    let prec = a.precision();
    let w = a.bandwidth() + 1;
    let tiny = tiny_pivot(prec);
    let mut window = Window::new(w, prec);
    for i in 0..w.min(n) {
        window.load(a, i, shift, negate);
    }
    let mut factor = BigReal::new(prec);
    let mut negatives = 0;
    for j in 0..n {
        let s = j % w;
        {
            let pivot = &window.buf[s * w];
            if pivot.cmp_abs(&tiny).map_or(true, |o| o.is_lt()) {
                return Err(Error::FactorizationBreakdown { row: j });
            }
            if pivot.is_sign_negative() {
                negatives += 1;
                if negatives >= stop_at {
                    return Ok(negatives);
                }
            }
        }
        for a_off in 1..w {
            if j + a_off >= n {
                break;
            }
            let t = (j + a_off) % w;
            let (row_s, row_t) = window.pair(s, t);
            factor.assign(&row_s[a_off] / &row_s[0]);
            if factor.is_zero() {
                continue;
            }
            for b in 0..(w - a_off) {
                row_t[b] -= &factor * &row_s[a_off + b];
            }
        }
        if j + w < n {
            window.load(a, j + w, shift, negate);
        }
    }
    Ok(negatives)
}

/// Number of eigenvalues of `a` strictly below `shift` (capped at `stop_at`).
pub fn count_below<M: SymmetricBand + ?Sized>(a: &M, shift: &BigReal, stop_at: usize) -> Result<usize> {
    negative_pivots(a, shift, false, stop_at.max(1))
}

/// Number of eigenvalues of `a` strictly above `shift` (capped at `stop_at`).
pub fn count_above<M: SymmetricBand + ?Sized>(a: &M, shift: &BigReal, stop_at: usize) -> Result<usize> {
    negative_pivots(a, shift, true, stop_at.max(1))
}

/// Solves `A x = rhs` by banded LDLᵀ at the matrix precision.
pub fn solve<M: SymmetricBand + ?Sized>(a: &M, rhs: &[BigReal]) -> Result<Vec<BigReal>> {
    let n = a.order();
    assert_eq!(rhs.len(), n, "right-hand side length");
    let prec = a.precision();
    let w = a.bandwidth();
    let tiny = tiny_pivot(prec);

    // l[i][k] = L[i + k][i] for k in 1..=w, d[i] the pivots
    let mut d: Vec<BigReal> = Vec::with_capacity(n);
    let mut l: Vec<Vec<BigReal>> = Vec::with_capacity(n);
    for i in 0..n {
        // D_i = A_ii - Σ_k L_ik² D_k
        let mut di = BigReal::with_val(prec, a.upper(i, 0));
        for k in i.saturating_sub(w)..i {
            let lik = &l[k][i - k];
            di -= BigReal::with_val(prec, lik * lik) * &d[k];
        }
        if di.cmp_abs(&tiny).map_or(true, |o| o.is_lt()) {
            return Err(Error::FactorizationBreakdown { row: i });
        }
        let mut column = vec![BigReal::new(prec); w + 1];
        for off in 1..=w {
            let row = i + off;
            if row >= n {
                break;
            }
            // L_row,i = (A_row,i - Σ_k L_row,k L_i,k D_k) / D_i
            let mut v = BigReal::with_val(prec, a.upper(i, off));
            for k in row.saturating_sub(w)..i {
                if i - k > w {
                    continue;
                }
                let prod = BigReal::with_val(prec, &l[k][row - k] * &l[k][i - k]);
                v -= prod * &d[k];
            }
            column[off] = v / &di;
        }
        d.push(di);
        l.push(column);
    }

    // forward: L y = rhs
    let mut x: Vec<BigReal> = rhs.iter().map(|v| BigReal::with_val(prec, v)).collect();
    for i in 0..n {
        for k in i.saturating_sub(w)..i {
            let delta = BigReal::with_val(prec, &l[k][i - k] * &x[k]);
            x[i] -= delta;
        }
    }
    for (xi, di) in x.iter_mut().zip(&d) {
        *xi /= di;
    }
    // backward: Lᵀ x = y
    for i in (0..n).rev() {
        for off in 1..=w {
            if i + off >= n {
                break;
            }
            let delta = BigReal::with_val(prec, &l[i][off] * &x[i + off]);
            x[i] -= delta;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn band(values: &[f64], order: usize) -> ToeplitzBand {
        ToeplitzBand::new(values.iter().map(|&v| BigReal::with_val(P, v)).collect(), order)
    }

    fn f(v: f64) -> BigReal {
        BigReal::with_val(P, v)
    }

    #[test]
    fn counts_for_tridiagonal_toeplitz() {
        // eigenvalues 3/4 + (1/4) cos(πk/5), k = 1..4
        let a = band(&[0.75, 0.125], 4);
        let eig: Vec<f64> =
            (1..=4).map(|k| 0.75 + 0.25 * (std::f64::consts::PI * k as f64 / 5.0).cos()).collect();
        for shift in [0.4, 0.55, 0.7, 0.76, 0.85, 0.95, 1.1] {
            let below = eig.iter().filter(|&&e| e < shift).count();
            assert_eq!(count_below(&a, &f(shift), usize::MAX).unwrap(), below, "shift {shift}");
            assert_eq!(count_above(&a, &f(shift), usize::MAX).unwrap(), 4 - below, "shift {shift}");
        }
        assert_eq!(count_below(&a, &f(1.1), 2).unwrap(), 2);
    }

    #[test]
    fn breakdown_is_reported() {
        let a = band(&[1.0, 0.0], 3);
        assert_eq!(count_below(&a, &f(1.0), 5), Err(Error::FactorizationBreakdown { row: 0 }));
    }

    #[test]
    fn solve_matches_residual() {
        let a = band(&[0.55, 13.0 / 60.0, 1.0 / 120.0], 9);
        let rhs: Vec<BigReal> = (0..9).map(|i| f(i as f64 - 3.5)).collect();
        let x = solve(&a, &rhs).unwrap();
        for i in 0..9usize {
            let mut acc = BigReal::new(P);
            for j in 0..9 {
                let k = i.abs_diff(j);
                if k <= 2 {
                    acc += BigReal::with_val(P, &a.values()[k] * &x[j]);
                }
            }
            let r = BigReal::with_val(P, &acc - &rhs[i]).abs();
            assert!(r < 1e-70, "residual {r} at row {i}");
        }
    }

    #[test]
    fn gershgorin_encloses() {
        let a = band(&[0.75, 0.125], 6);
        let (lo, hi) = a.gershgorin();
        assert!(lo <= 0.5 && lo > 0.49);
        assert!(hi >= 1.0 && hi < 1.01);
    }
}
