//! Radial data of the Stenzel metric on `T*S^3` and of the conifold.
//!
//! For `eps > 0` the radius is parameterised by `r^2 = eps^2 cosh t`, so
//! `R_+ = eps cosh(t/2)` and `R_- = eps sinh(t/2)`. The Kähler potential
//! enters only through `G = R_+ R_- F'(r^2)`, which satisfies
//! `2 G' G^2 = r R_+ R_-`. For `eps = 0` the closed conifold formulas are
//! used.

mod kahler;
mod profile;
mod small_rho;

pub use kahler::{assemble_kahler_data, KahlerData};
pub use profile::{ConeProfile, FlatProfile, GeometryProfile, ProfileGrid, TailLaw, WarpProfile};
pub use small_rho::{psi_series, rho_hat_series};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature::{integrate, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryParams {
    pub epsilon: f64,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams { epsilon: 1.0 }
    }
}

impl GeometryParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
            });
        }
        Ok(GeometryParams { epsilon })
    }

    pub const fn cone() -> Self {
        GeometryParams { epsilon: 0.0 }
    }

    pub fn is_cone(&self) -> bool {
        self.epsilon == 0.0
    }
}

/// `(sinh 2t - 2t) / 2`, with a series near `t = 0`.
pub fn k_of_t(t: f64) -> f64 {
    if t.abs() < 1.0 {
        // sum_{n>=1} (2t)^(2n+1) / (2 (2n+1)!)
        let x = 2.0 * t;
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = 0.0;
        let mut n = 1;
        while term.abs() > 1e-18 * sum.abs() || n < 3 {
            sum += term;
            term *= x2 / (((2 * n + 2) * (2 * n + 3)) as f64);
            n += 1;
        }
        0.5 * sum
    } else {
        0.5 * ((2.0 * t).sinh() - 2.0 * t)
    }
}

/// `k(x) = x sqrt(x^2 - 1) - log(x + sqrt(x^2 - 1))`.
pub fn k_fn(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Domain {
            what: "k(x)",
            value: x,
        });
    }
    if x < 2.0 {
        // Cancellation-free route through x = cosh t.
        let y = x - 1.0;
        let t = (y + (y * (2.0 + y)).sqrt()).ln_1p();
        return Ok(k_of_t(t));
    }
    let s = (x * x - 1.0).sqrt();
    Ok(x * s - (x + s).ln())
}

/// `t` with `r^2 = eps^2 cosh t`, accurate as `r -> eps`.
pub fn t_of_r(r: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !(r >= epsilon) {
        return Err(Error::Domain {
            what: "t(r)",
            value: r,
        });
    }
    let y = (r - epsilon) * (r + epsilon) / (epsilon * epsilon);
    Ok((y + (y * (2.0 + y)).sqrt()).ln_1p())
}

/// `G(t) = (3 eps^4 / 16)^(1/3) k(t)^(1/3)`.
pub fn g_of_t(t: f64, epsilon: f64) -> f64 {
    (3.0 * epsilon.powi(4) / 16.0).cbrt() * k_of_t(t).cbrt()
}

/// `dG/dr` from the Monge-Ampère identity `2 G' G^2 = r R_+ R_-`.
pub fn gdot_identity(r: f64, rprm: f64, g: f64) -> f64 {
    r * rprm / (2.0 * g * g)
}

/// `F'` in the closed t-form of the potential.
pub fn fprime_t_form(t: f64, epsilon: f64) -> f64 {
    if t < 1e-3 {
        // (sinh 2t - 2t)^(1/3) / sinh t via k to avoid cancellation.
        return (3.0 / (4.0 * epsilon * epsilon)).cbrt() * (2.0 * k_of_t(t)).cbrt() / t.sinh();
    }
    (3.0 / (4.0 * epsilon * epsilon)).cbrt() * ((2.0 * t).sinh() - 2.0 * t).cbrt() / t.sinh()
}

/// `F' = (3/2)^(1/3) eps^(-2/3) k(x)^(1/3) / sqrt(x^2 - 1)` with `x = r^2/eps^2`.
pub fn fprime_k_form(x: f64, epsilon: f64) -> Result<f64> {
    let k = k_fn(x)?;
    Ok(1.5f64.cbrt() * epsilon.powf(-2.0 / 3.0) * k.cbrt() / ((x - 1.0) * (x + 1.0)).sqrt())
}

/// `F'(r^2)` of the Stenzel potential, or of the cone for `eps = 0`.
pub fn fprime(r: f64, params: GeometryParams) -> Result<f64> {
    if params.is_cone() {
        if !(r > 0.0) {
            return Err(Error::Domain {
                what: "F'",
                value: r,
            });
        }
        return Ok(1.5f64.cbrt() * r.powf(-2.0 / 3.0));
    }
    if !(r > params.epsilon) {
        return Err(Error::Domain {
            what: "F'",
            value: r,
        });
    }
    let t = t_of_r(r, params.epsilon)?;
    Ok(g_of_t(t, params.epsilon) / (0.5 * params.epsilon * params.epsilon * t.sinh()))
}

/// `d rho / dt = R_+ R_- / (2 G)`, finite at `t = 0`.
pub fn drho_dt(t: f64, epsilon: f64) -> f64 {
    if t == 0.0 {
        // Limit of eps^2 sinh t / (4 G) with G ~ (eps^4/8)^(1/3) t.
        return 0.5 * epsilon.powf(2.0 / 3.0);
    }
    epsilon * epsilon * t.sinh() / (4.0 * g_of_t(t, epsilon))
}

/// `rho(t) = int_0^t R_+ R_- / (2G) dt`.
pub fn rho_of_t(t: f64, epsilon: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain {
            what: "rho(t)",
            value: t,
        });
    }
    Ok(integrate(|s| drho_dt(s, epsilon), 0.0, t, Tolerance::relative(1e-14))?.value)
}

/// Geodesic distance from the zero section,
/// `rho(r) = int_eps^r l / (2 G(l)) dl`, integrated in `u = sqrt(l^2 - eps^2)`
/// so that the square-root endpoint behaviour becomes smooth.
pub fn rho_of_r(r: f64, params: GeometryParams) -> Result<f64> {
    let eps = params.epsilon;
    if params.is_cone() {
        if !(r >= 0.0) {
            return Err(Error::Domain {
                what: "rho(r)",
                value: r,
            });
        }
        return Ok(1.5f64.powf(2.0 / 3.0) * r.powf(2.0 / 3.0));
    }
    if !(r >= eps) {
        return Err(Error::Domain {
            what: "rho(r)",
            value: r,
        });
    }
    let upper = ((r - eps) * (r + eps)).sqrt();
    let integrand = |u: f64| {
        let y = u * u / (eps * eps);
        let t = (y + (y * (2.0 + y)).sqrt()).ln_1p();
        // l dl = u du
        u / (2.0 * g_of_t(t, eps))
    };
    Ok(integrate(integrand, 0.0, upper, Tolerance::relative(1e-13))?.value)
}

/// Coefficient of the large-`rho` law `h^2 ~ c5 rho^5` of the cone.
pub fn c5(epsilon: f64) -> f64 {
    2.0 / (27.0 * epsilon * epsilon)
}

/// `h^2` of the conifold, `R_+ R_- G / eps^2 = 2 rho^5 / (27 eps^2)`, as the
/// comparison profile for the Stenzel `h^2` at the same `eps`.
pub fn cone_h2(rho: f64, epsilon: f64) -> f64 {
    c5(epsilon) * rho.powi(5)
}

/// Tabulated radial quantities at one radius. `t` is NaN and `h2` is NaN on
/// the cone, where neither is defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialPoint {
    pub r: f64,
    pub t: f64,
    pub fprime: f64,
    pub g: f64,
    pub gdot: f64,
    pub rho: f64,
    pub h2: f64,
    pub rplus: f64,
    pub rminus: f64,
}

impl RadialPoint {
    pub fn at_r(r: f64, params: GeometryParams) -> Result<Self> {
        if params.is_cone() {
            if !(r > 0.0) {
                return Err(Error::Domain {
                    what: "radial point",
                    value: r,
                });
            }
            let rp = r / 2f64.sqrt();
            let fp = 1.5f64.cbrt() * r.powf(-2.0 / 3.0);
            let g = rp * rp * fp;
            return Ok(RadialPoint {
                r,
                t: f64::NAN,
                fprime: fp,
                g,
                gdot: gdot_identity(r, rp * rp, g),
                rho: rho_of_r(r, params)?,
                h2: f64::NAN,
                rplus: rp,
                rminus: rp,
            });
        }
        if !(r > params.epsilon) {
            return Err(Error::Domain {
                what: "radial point",
                value: r,
            });
        }
        let t = t_of_r(r, params.epsilon)?;
        Self::at_t(t, params.epsilon)
    }

    pub fn at_t(t: f64, epsilon: f64) -> Result<Self> {
        let rho = rho_of_t(t, epsilon)?;
        Self::at_t_with_rho(t, rho, epsilon)
    }

    /// Closed-form quantities at `t` with a precomputed `rho`.
    pub fn at_t_with_rho(t: f64, rho: f64, epsilon: f64) -> Result<Self> {
        if !(t > 0.0 && epsilon > 0.0) {
            return Err(Error::Domain {
                what: "radial point",
                value: t,
            });
        }
        let r = epsilon * t.cosh().sqrt();
        let rplus = epsilon * (0.5 * t).cosh();
        let rminus = epsilon * (0.5 * t).sinh();
        let g = g_of_t(t, epsilon);
        let rprm = rplus * rminus;
        Ok(RadialPoint {
            r,
            t,
            fprime: g / rprm,
            g,
            gdot: gdot_identity(r, rprm, g),
            rho,
            h2: rprm * g / (epsilon * epsilon),
            rplus,
            rminus,
        })
    }
}

/// Radial functions as jets in `r`, the coefficients of the invariant forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialJets {
    pub r: Jet,
    pub rplus: Jet,
    pub rminus: Jet,
    /// `R_+ R_-`
    pub rprm: Jet,
    pub g: Jet,
    pub gdot: Jet,
}

impl RadialJets {
    pub fn at(r: f64, params: GeometryParams) -> Result<Self> {
        let p = RadialPoint::at_r(r, params)?;
        Ok(Self::from_point(&p))
    }

    pub fn from_point(p: &RadialPoint) -> Self {
        let r = Jet::variable(p.r);
        let rplus = Jet::new(p.rplus, p.r / (2.0 * p.rplus));
        let rminus = Jet::new(p.rminus, p.r / (2.0 * p.rminus));
        let rprm = Jet::new(p.rplus * p.rminus, p.r.powi(3) / (2.0 * p.rplus * p.rminus));
        let g = Jet::new(p.g, p.gdot);
        let gdot = r * rprm / (g * g * 2.0);
        RadialJets {
            r,
            rplus,
            rminus,
            rprm,
            g,
            gdot,
        }
    }
}

/// Relative residual `|2 G' G^2 - r R_+ R_-| / (r R_+ R_-)` with `G'` from
/// Richardson-extrapolated central differences of `G(r)`.
pub fn monge_ampere_residual(r: f64, params: GeometryParams) -> Result<f64> {
    let p = RadialPoint::at_r(r, params)?;
    let g = |s: f64| -> Result<f64> { Ok(RadialPoint::at_r(s, params)?.g) };
    let room = if params.is_cone() {
        r
    } else {
        r - params.epsilon
    };
    let h = (1e-2 * room).min(1e-2 * r);
    let d = |h: f64| -> Result<f64> { Ok((g(r + h)? - g(r - h)?) / (2.0 * h)) };
    let d1 = d(h)?;
    let d2 = d(0.5 * h)?;
    let d3 = d(0.25 * h)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let gdot = (16.0 * r2 - r1) / 15.0;
    let target = r * p.rplus * p.rminus;
    Ok((2.0 * gdot * p.g * p.g - target).abs() / target)
}

/// Residual of `eps^2 cosh t F'^3 + (eps^2 sinh t / 3) d/dt F'^3 = 1` with
/// the `t`-derivative taken numerically.
pub fn monge_ampere_t_residual(t: f64, epsilon: f64) -> f64 {
    let f3 = |s: f64| fprime_t_form(s, epsilon).powi(3);
    let h = 1e-2 * t.min(1.0);
    let d = |h: f64| (f3(t + h) - f3(t - h)) / (2.0 * h);
    let r1 = (4.0 * d(0.5 * h) - d(h)) / 3.0;
    let r2 = (4.0 * d(0.25 * h) - d(0.5 * h)) / 3.0;
    let df3 = (16.0 * r2 - r1) / 15.0;
    let e2 = epsilon * epsilon;
    (e2 * t.cosh() * f3(t) + e2 * t.sinh() / 3.0 * df3 - 1.0).abs()
}
