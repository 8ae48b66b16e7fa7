//! Power series of regular solutions at the zero section.
//!
//! With `h^2 = rho^2 psi(rho^2)`, a solution with `a(0) = 1`, `phi(0) = 0` has
//! `a = sum a_2j rho^2j` and `phi = sum phi_2j+1 rho^2j+1`. The order-zero
//! balance is resonant and leaves `alpha = a_2 = phi_1` free; every higher
//! pair `(a_2j+2, phi_2j+1)` solves a 2x2 system.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::ReducedState;
use crate::error::{Error, Result};
use crate::stenzel_geometry::WarpProfile;

/// Number of `(a, phi)` coefficient pairs used by [`series_seed`].
pub const SEED_TERMS: usize = 16;

/// Largest `|alpha| rho0^2` accepted by [`series_seed`].
pub const SEED_LIMIT: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
pub struct SeedSeries {
    pub alpha: f64,
    /// `a[k]` multiplies `rho^(2k)`.
    pub a: Vec<f64>,
    /// `phi[k]` multiplies `rho^(2k+1)`.
    pub phi: Vec<f64>,
}

impl SeedSeries {
    pub fn new(alpha: f64, psi: &[f64], terms: usize) -> Self {
        let terms = terms.max(1);
        let c = |i: usize| psi.get(i).copied().unwrap_or(0.0);
        let mut a = alloc::vec![0.0; terms + 1];
        let mut f = alloc::vec![0.0; terms];
        a[0] = 1.0;
        a[1] = alpha;
        f[0] = alpha;
        for j in 1..terms {
            let s1: f64 = 2.0 * (0..j).map(|i| f[i] * a[j - i]).sum::<f64>();
            let s2: f64 = 2.0
                * (1..=j)
                    .map(|i| c(i) * (2 * (j - i) + 1) as f64 * f[j - i])
                    .sum::<f64>()
                - (1..=j).map(|p| a[p] * a[j + 1 - p]).sum::<f64>();
            let jf = j as f64;
            let det = 4.0 - 4.0 * (2.0 * jf + 1.0) * (jf + 1.0);
            a[j + 1] = (-2.0 * (2.0 * jf + 1.0) * s1 + 2.0 * s2) / det;
            f[j] = ((2.0 * jf + 2.0) * s2 - 2.0 * s1) / det;
        }
        SeedSeries { alpha, a, phi: f }
    }

    pub fn eval(&self, rho: f64) -> ReducedState {
        let x = rho * rho;
        let a = self.a.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let phi = self.phi.iter().rev().fold(0.0, |acc, c| acc * x + c) * rho;
        ReducedState { a, phi }
    }

    /// Magnitude of the last retained terms at `rho`.
    pub fn truncation(&self, rho: f64) -> f64 {
        let n = self.phi.len();
        let x = rho * rho;
        (self.a[n] * x.powi(n as i32)).abs() + (self.phi[n - 1] * rho * x.powi(n as i32 - 1)).abs()
    }
}

/// `(a, phi)` at `rho0` on the regular branch with `a = 1 + alpha rho^2 + ...`.
pub fn series_seed<P: WarpProfile + ?Sized>(
    alpha: f64,
    rho0: f64,
    profile: &P,
) -> Result<ReducedState> {
    check_seed(alpha, rho0, profile)?;
    Ok(SeedSeries::new(alpha, profile.psi_coefficients(), SEED_TERMS).eval(rho0))
}

pub(crate) fn check_seed<P: WarpProfile + ?Sized>(
    alpha: f64,
    rho0: f64,
    profile: &P,
) -> Result<()> {
    if !(rho0 > 0.0) || rho0 > profile.series_radius() {
        return Err(Error::Domain {
            what: "rho0",
            value: rho0,
        });
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
        });
    }
    let size = alpha.abs() * rho0 * rho0;
    if size > SEED_LIMIT {
        return Err(Error::SeriesInvalid { size });
    }
    Ok(())
}

/// Coefficients `b_0..=b_n` of `B1 = sum b_i rho^i` solving
/// `B1'' = rho^-2 (sum_j phi_j rho^j) B1` with `b_0 = b_1 = 0`.
pub fn series_recurrence(phi: &[f64], b2: f64, n: usize) -> Result<Vec<f64>> {
    let p = |j: usize| phi.get(j).copied().unwrap_or(0.0);
    let mut b = alloc::vec![0.0; n.max(2) + 1];
    b[2] = b2;
    for i in 1..=n.saturating_sub(2) {
        let den = ((i + 1) * (i + 2)) as f64 - p(0);
        if den.abs() < 1e-12 {
            return Err(Error::Resonant { index: i });
        }
        let s: f64 = (1..=i).map(|j| p(j) * b[i + 2 - j]).sum();
        b[i + 2] = s / den;
    }
    b.truncate(n + 1);
    Ok(b)
}
