//! Small least-squares helpers for exponent and coefficient fits.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub slope_error: f64,
    pub points: usize,
}

pub fn line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len().min(ys.len());
    if n < 3 {
        return Err(Error::InsufficientRange {
            span: 0.0,
            points: n,
        });
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientRange {
            span: 0.0,
            points: n,
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = (0..n)
        .map(|i| {
            let r = ys[i] - intercept - slope * xs[i];
            r * r
        })
        .sum();
    let slope_error = if n > 2 {
        (ss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        slope_error,
        points: n,
    })
}

/// Fit `log|y| = p log x + c`; `p` is the exponent.
pub fn power_law(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && y.abs() > 0.0)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .unzip();
    let span = span_of(xs);
    if lx.len() < 3 {
        return Err(Error::InsufficientRange {
            span,
            points: lx.len(),
        });
    }
    line(&lx, &ly)
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo; n];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Ratio between the largest and smallest positive abscissa.
pub fn span_of(xs: &[f64]) -> f64 {
    let lo = xs
        .iter()
        .copied()
        .filter(|x| *x > 0.0)
        .fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(0.0, f64::max);
    if lo.is_finite() && lo > 0.0 {
        hi / lo
    } else {
        0.0
    }
}

/// Least-squares coefficients of `sum_k c_k basis_k(x)`.
pub fn linear_least_squares(
    xs: &[f64],
    ys: &[f64],
    basis: &[&dyn Fn(f64) -> f64],
) -> Result<Vec<f64>> {
    let m = basis.len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (x, y) in xs.iter().zip(ys) {
        let phi: Vec<f64> = basis.iter().map(|b| b(*x)).collect();
        for i in 0..m {
            for j in 0..m {
                a[i][j] += phi[i] * phi[j];
            }
            a[i][m] += phi[i] * y;
        }
    }
    solve_augmented(a).ok_or(Error::InsufficientRange {
        span: span_of(xs),
        points: xs.len(),
    })
}

/// Gaussian elimination with partial pivoting on `[A | b]`.
pub fn solve_augmented(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * y;
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (a[i][n] - s) / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs: Vec<f64> = (1..20).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-2.5)).collect();
        let f = power_law(&xs, &ys).unwrap();
        assert!((f.slope + 2.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn quadratic_in_square() {
        let xs: Vec<f64> = (1..30).map(|i| i as f64 * 0.01).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 0.5 - 2.0 * x * x + 0.3 * x.powi(4))
            .collect();
        let c = linear_least_squares(&xs, &ys, &[&|_| 1.0, &|x: f64| x * x, &|x: f64| x.powi(4)])
            .unwrap();
        assert!((c[0] - 0.5).abs() < 1e-10);
        assert!((c[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn too_few_points() {
        assert!(line(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }
}
