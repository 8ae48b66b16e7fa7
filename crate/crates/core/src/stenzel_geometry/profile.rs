//! Tabulated radial profile and the warping functions consumed by the ODEs.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::small_rho::{even_series, psi_series};
use super::{drho_dt, g_of_t, k_of_t, GeometryParams, RadialPoint};
use crate::error::{Error, Result};
use crate::fit;
use crate::quadrature::{gk15, integrate, Tolerance};

/// Number of `rho^2` powers kept in the small-`rho` expansion of `psi`.
const PSI_TERMS: usize = 12;

/// `h^2 = c (rho + shift)^exponent`, used past the end of a table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailLaw {
    pub coefficient: f64,
    pub shift: f64,
    pub exponent: f64,
}

impl TailLaw {
    pub fn h2(&self, rho: f64) -> f64 {
        self.coefficient * (rho + self.shift).powf(self.exponent)
    }

    /// `int_rho^inf 1 / (2 h^2)`.
    pub fn integral_from(&self, rho: f64) -> f64 {
        let p = self.exponent - 1.0;
        1.0 / (2.0 * self.coefficient * p * (rho + self.shift).powf(p))
    }

    /// Fit `h2^(1/p)` linearly in `rho`.
    pub fn fit(rhos: &[f64], h2s: &[f64], exponent: f64) -> Result<TailLaw> {
        let ys: Vec<f64> = h2s.iter().map(|h| h.powf(1.0 / exponent)).collect();
        let line = fit::line(rhos, &ys)?;
        Ok(TailLaw {
            coefficient: line.slope.powf(exponent),
            shift: line.intercept / line.slope,
            exponent,
        })
    }
}

/// Radial warping `h^2(rho)` of the fibres, as seen by the ODE systems.
pub trait WarpProfile: Send + Sync {
    /// `h^2(rho)`, continued past the table by the tail law.
    fn h2(&self, rho: f64) -> f64;
    /// `psi = h^2 / rho^2 = sum_j c_j rho^(2j)` near `rho = 0`.
    fn psi_coefficients(&self) -> &[f64];
    fn tail_law(&self) -> TailLaw;
    /// End of the tabulated range.
    fn rho_limit(&self) -> f64;
    /// `int_rho^inf 1 / (2 h^2)`.
    fn tail_integral(&self, rho: f64) -> Result<f64>;
    /// Scale of the rescaled fields, `B4(0) = epsilon / 2`.
    fn epsilon(&self) -> f64;
    /// Largest `rho` at which the `psi` expansion may seed an integration.
    fn series_radius(&self) -> f64;
}

/// Euclidean `R^3`: `h = rho`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FlatProfile;

impl WarpProfile for FlatProfile {
    fn h2(&self, rho: f64) -> f64 {
        rho * rho
    }

    fn psi_coefficients(&self) -> &[f64] {
        &[1.0]
    }

    fn tail_law(&self) -> TailLaw {
        TailLaw {
            coefficient: 1.0,
            shift: 0.0,
            exponent: 2.0,
        }
    }

    fn rho_limit(&self) -> f64 {
        f64::INFINITY
    }

    fn tail_integral(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain {
                what: "tail integral",
                value: rho,
            });
        }
        Ok(0.5 / rho)
    }

    fn epsilon(&self) -> f64 {
        1.0
    }

    fn series_radius(&self) -> f64 {
        f64::INFINITY
    }
}

/// The conifold with `h^2 = R_+ R_- G / eps^2 = c5(eps) rho^5`. There is no
/// zero section, so no series seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeProfile {
    pub epsilon: f64,
}

impl Default for ConeProfile {
    fn default() -> Self {
        ConeProfile { epsilon: 1.0 }
    }
}

impl WarpProfile for ConeProfile {
    fn h2(&self, rho: f64) -> f64 {
        super::cone_h2(rho, self.epsilon)
    }

    fn psi_coefficients(&self) -> &[f64] {
        &[]
    }

    fn tail_law(&self) -> TailLaw {
        TailLaw {
            coefficient: super::c5(self.epsilon),
            shift: 0.0,
            exponent: 5.0,
        }
    }

    fn rho_limit(&self) -> f64 {
        f64::INFINITY
    }

    fn tail_integral(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain {
                what: "tail integral",
                value: rho,
            });
        }
        Ok(self.tail_law().integral_from(rho))
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn series_radius(&self) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileGrid {
    pub t_max: f64,
    pub dt: f64,
    /// Extra nodes at `dt / 2^k`, `k = 1..=refine`.
    pub refine: usize,
}

impl Default for ProfileGrid {
    fn default() -> Self {
        ProfileGrid {
            t_max: 24.0,
            dt: 0.01,
            refine: 6,
        }
    }
}

/// Stenzel radial data on a `t`-grid with cubic Hermite interpolation of
/// `psi(rho)` and `t(rho)` using exact node derivatives.
#[derive(Clone, Debug)]
pub struct GeometryProfile {
    params: GeometryParams,
    points: Vec<RadialPoint>,
    psi: Vec<f64>,
    dpsi: Vec<f64>,
    dtdrho: Vec<f64>,
    series: Vec<f64>,
    series_limit: f64,
    tail: TailLaw,
}

fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

impl GeometryProfile {
    pub fn build(params: GeometryParams, grid: ProfileGrid) -> Result<Self> {
        if params.is_cone() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: 0.0,
            });
        }
        if !(grid.dt > 0.0 && grid.t_max > 10.0 * grid.dt) {
            return Err(Error::InvalidParameter {
                name: "t_max",
                value: grid.t_max,
            });
        }
        let eps = params.epsilon;
        let mut ts: Vec<f64> = (1..=grid.refine)
            .rev()
            .map(|k| grid.dt / 2f64.powi(k as i32))
            .collect();
        let n = (grid.t_max / grid.dt).ceil() as usize;
        ts.extend((1..=n).map(|i| i as f64 * grid.dt));

        let series = psi_series(eps, PSI_TERMS);
        let mut points = Vec::with_capacity(ts.len() + 1);
        let mut psi = Vec::with_capacity(ts.len() + 1);
        let mut dpsi = Vec::with_capacity(ts.len() + 1);
        let mut dtdrho = Vec::with_capacity(ts.len() + 1);
        points.push(RadialPoint {
            r: eps,
            t: 0.0,
            fprime: 2f64.powf(1.0 / 3.0) * eps.powf(-2.0 / 3.0),
            g: 0.0,
            gdot: f64::INFINITY,
            rho: 0.0,
            h2: 0.0,
            rplus: eps,
            rminus: 0.0,
        });
        psi.push(1.0);
        dpsi.push(0.0);
        dtdrho.push(1.0 / drho_dt(0.0, eps));

        let mut rho = 0.0;
        let mut prev = 0.0;
        for &t in &ts {
            rho += gk15(&mut |s| drho_dt(s, eps), prev, t).0;
            prev = t;
            let p = RadialPoint::at_t_with_rho(t, rho, eps)?;
            let v = drho_dt(t, eps);
            // h^2 = sinh t G / 2 and G_t = G k_t / (3 k) with k_t = 2 sinh^2 t.
            let g = p.g;
            let gt = g * 2.0 * t.sinh().powi(2) / (3.0 * k_of_t(t));
            let dh2 = 0.5 * (t.cosh() * g + t.sinh() * gt) / v;
            let ps = p.h2 / (rho * rho);
            points.push(p);
            psi.push(ps);
            dpsi.push((dh2 - 2.0 * rho * ps) / (rho * rho));
            dtdrho.push(1.0 / v);
        }
        let rho_end = rho;
        let mut profile = GeometryProfile {
            params,
            points,
            psi,
            dpsi,
            dtdrho,
            series,
            series_limit: 0.1 * eps.powf(2.0 / 3.0),
            tail: TailLaw {
                coefficient: 0.0,
                shift: 0.0,
                exponent: 5.0,
            },
        };
        profile.tail = profile.fit_tail(0.6 * rho_end, rho_end)?;
        Ok(profile)
    }

    pub fn params(&self) -> GeometryParams {
        self.params
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    pub fn points(&self) -> &[RadialPoint] {
        &self.points
    }

    pub fn rho_max(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.rho)
    }

    pub fn series_limit(&self) -> f64 {
        self.series_limit
    }

    /// Fit `h^2 = c (rho + beta)^5` on the nodes inside `[lo, hi]`.
    pub fn fit_tail(&self, lo: f64, hi: f64) -> Result<TailLaw> {
        let (rhos, h2s) = self.window(lo, hi);
        TailLaw::fit(&rhos, &h2s, 5.0)
    }

    /// Log-log fit of `h^2` against `rho` on the nodes inside `[lo, hi]`.
    pub fn h2_exponent(&self, lo: f64, hi: f64) -> Result<fit::LineFit> {
        let (rhos, h2s) = self.window(lo, hi);
        fit::power_law(&rhos, &h2s)
    }

    fn window(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        self.points
            .iter()
            .filter(|p| p.rho >= lo && p.rho <= hi && p.rho > 0.0)
            .map(|p| (p.rho, p.h2))
            .unzip()
    }

    /// Index `i` with `rho_i <= rho <= rho_{i+1}`.
    fn interval(&self, rho: f64) -> usize {
        let k = self.points.partition_point(|p| p.rho <= rho);
        k.saturating_sub(1).min(self.points.len() - 2)
    }

    fn check_range(&self, rho: f64) -> Result<()> {
        if !(rho >= 0.0) {
            return Err(Error::Domain {
                what: "rho",
                value: rho,
            });
        }
        if rho > self.rho_max() {
            return Err(Error::OutsideTable {
                rho,
                max: self.rho_max(),
            });
        }
        Ok(())
    }

    /// `psi = h^2 / rho^2` and its `rho`-derivative inside the table.
    pub fn psi(&self, rho: f64) -> Result<(f64, f64)> {
        self.check_range(rho)?;
        Ok(self.psi_unchecked(rho))
    }

    fn psi_unchecked(&self, rho: f64) -> (f64, f64) {
        if rho <= self.series_limit {
            return even_series(&self.series, rho);
        }
        let i = self.interval(rho);
        let (a, b) = (&self.points[i], &self.points[i + 1]);
        let v = hermite(
            a.rho,
            b.rho,
            self.psi[i],
            self.psi[i + 1],
            self.dpsi[i],
            self.dpsi[i + 1],
            rho,
        );
        let h = b.rho - a.rho;
        let s = (rho - a.rho) / h;
        // Derivative of the Hermite cubic.
        let d = (6.0 * s * s - 6.0 * s) / h * (self.psi[i] - self.psi[i + 1])
            + (3.0 * s * s - 4.0 * s + 1.0) * self.dpsi[i]
            + (3.0 * s * s - 2.0 * s) * self.dpsi[i + 1];
        (v, d)
    }

    /// `h^2(rho)`; errors beyond the table.
    pub fn h2_of_rho(&self, rho: f64) -> Result<f64> {
        self.check_range(rho)?;
        Ok(rho * rho * self.psi_unchecked(rho).0)
    }

    /// `h^2(rho)` continued past the table with the fitted tail law.
    pub fn h2_extrapolated(&self, rho: f64) -> Result<f64> {
        if !(rho >= 0.0) {
            return Err(Error::Domain {
                what: "rho",
                value: rho,
            });
        }
        if rho > self.rho_max() {
            return Ok(self.tail.h2(rho));
        }
        self.h2_of_rho(rho)
    }

    /// `t(rho)`: Hermite guess then Newton on `rho(t) - rho`.
    pub fn t_of_rho(&self, rho: f64) -> Result<f64> {
        self.check_range(rho)?;
        if rho == 0.0 {
            return Ok(0.0);
        }
        let eps = self.params.epsilon;
        let i = self.interval(rho);
        let (a, b) = (&self.points[i], &self.points[i + 1]);
        let mut t = hermite(
            a.rho,
            b.rho,
            a.t,
            b.t,
            self.dtdrho[i],
            self.dtdrho[i + 1],
            rho,
        );
        for _ in 0..3 {
            let f = a.rho + gk15(&mut |s| drho_dt(s, eps), a.t, t).0 - rho;
            t -= f / drho_dt(t, eps);
        }
        Ok(t)
    }

    pub fn point_at_rho(&self, rho: f64) -> Result<RadialPoint> {
        let t = self.t_of_rho(rho)?;
        if t == 0.0 {
            return Ok(self.points[0]);
        }
        RadialPoint::at_t_with_rho(t, rho, self.params.epsilon)
    }

    pub fn r_of_rho(&self, rho: f64) -> Result<f64> {
        let t = self.t_of_rho(rho)?;
        Ok(self.params.epsilon * t.cosh().sqrt())
    }

    /// `rho(r)` by interpolation in the table.
    pub fn rho_of_r(&self, r: f64) -> Result<f64> {
        let eps = self.params.epsilon;
        let t = super::t_of_r(r, eps)?;
        let last = self.points.last().expect("non-empty");
        if t > last.t {
            return Err(Error::OutsideTable {
                rho: f64::NAN,
                max: last.rho,
            });
        }
        let k = self.points.partition_point(|p| p.t <= t);
        let i = k.saturating_sub(1).min(self.points.len() - 2);
        let a = &self.points[i];
        Ok(a.rho + gk15(&mut |s| drho_dt(s, eps), a.t, t).0)
    }

    /// `int_rho^inf 1/(2 h^2) d rho = int_t^inf eps^2 / (4 G^2) dt`.
    pub fn dirac_tail(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain {
                what: "tail integral",
                value: rho,
            });
        }
        let rho_end = self.rho_max();
        if rho >= rho_end {
            return Ok(self.tail.integral_from(rho));
        }
        let eps = self.params.epsilon;
        let t0 = self.t_of_rho(rho)?;
        let t1 = self.points.last().expect("non-empty").t;
        let body = integrate(
            |t| {
                let g = g_of_t(t, eps);
                eps * eps / (4.0 * g * g)
            },
            t0,
            t1,
            Tolerance::relative(1e-13),
        )?;
        Ok(body.value + self.tail.integral_from(rho_end))
    }
}

impl WarpProfile for GeometryProfile {
    fn h2(&self, rho: f64) -> f64 {
        if rho > self.rho_max() {
            return self.tail.h2(rho);
        }
        rho * rho * self.psi_unchecked(rho.max(0.0)).0
    }

    fn psi_coefficients(&self) -> &[f64] {
        &self.series
    }

    fn tail_law(&self) -> TailLaw {
        self.tail
    }

    fn rho_limit(&self) -> f64 {
        self.rho_max()
    }

    fn tail_integral(&self, rho: f64) -> Result<f64> {
        self.dirac_tail(rho)
    }

    fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    fn series_radius(&self) -> f64 {
        self.series_limit
    }
}
