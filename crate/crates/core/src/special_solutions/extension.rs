//! Behaviour of invariant connections at the zero section: the orthonormal
//! curvature components `I1..I8` in the gauge `B2 = B5 = 0`, and exponent
//! fits of `B1`, `B3`, `B4 - eps/2` on a window `[rho0, 10 rho0]`.
//!
//! In the orthonormal coframe, with `eps^2 h^2 = R_+ R_- G`,
//!
//! ```text
//! I1 = (B1' - 4 G' B1 / r) / (eps^2 h^2)            on drho e1  T1
//! I2 = (B3' - G B3 / R_-^2) / (eps h)               on drho e2  T3
//! I3 = (B4' - G B4 / R_+^2) / (eps h)               on drho e4  T2
//! I4 = (4 B3^2 - R_-^2) / (2 eps^2 h^2)             on e23      T1
//! I5 = (4 B4^2 - R_+^2) / (2 eps^2 h^2)             on e45      T1
//! I6 = (B4/R_+ - 2 B1 B3 / (G^2 R_-)) sqrt(G / R_+ R_-) / R_+   on e12 T2
//! I7 = (B3/R_- - 2 B1 B4 / (G^2 R_+)) sqrt(G / R_+ R_-) / R_-   on e15 T2
//! I8 = (B1/G^2 - 2 B3 B4 / (R_+ R_-)) / G           on e24      T1
//! ```
//!
//! where `'` is `d/drho` and `G'` is `dG/dr`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fit;
use crate::monopole_ode::{full_rhs, series_seed, solve_full, FullState, StepControl};
use crate::stenzel_geometry::{GeometryProfile, RadialPoint, WarpProfile};

/// Slack on the exponent thresholds of the extension verdict.
pub const FIT_TOLERANCE: f64 = 0.05;
/// Allowed error of the extrapolated `B4(0)`.
const B4_TOLERANCE: f64 = 1e-4;
/// Fields below this are treated as identically zero.
const VANISH: f64 = 1e-13;
/// A component with fitted exponent above this is bounded at `rho = 0`.
const BOUNDED_EXPONENT: f64 = -0.5;

/// `I1..I8` at one radius from the state and its `rho`-derivative.
pub fn components_at(s: &FullState, d: &FullState, p: &RadialPoint) -> Result<[f64; 8]> {
    if s.b2.abs() > VANISH || s.b5.abs() > VANISH {
        return Err(Error::InvalidParameter {
            name: "B2, B5 (gauge B2 = B5 = 0)",
            value: s.b2.abs().max(s.b5.abs()),
        });
    }
    let (rp, rm, g) = (p.rplus, p.rminus, p.g);
    let e2h2 = rp * rm * g;
    let eh = e2h2.sqrt();
    let root = (g / (rp * rm)).sqrt();
    Ok([
        (d.b1 - 4.0 * p.gdot * s.b1 / p.r) / e2h2,
        (d.b3 - g * s.b3 / (rm * rm)) / eh,
        (d.b4 - g * s.b4 / (rp * rp)) / eh,
        (4.0 * s.b3 * s.b3 - rm * rm) / (2.0 * e2h2),
        (4.0 * s.b4 * s.b4 - rp * rp) / (2.0 * e2h2),
        (s.b4 / rp - 2.0 * s.b1 * s.b3 / (g * g * rm)) * root / rp,
        (s.b3 / rm - 2.0 * s.b1 * s.b4 / (g * g * rp)) * root / rm,
        (s.b1 / (g * g) - 2.0 * s.b3 * s.b4 / (rp * rm)) / g,
    ])
}

/// `I1..I8` on a grid; radii `<= 0` are skipped.
pub fn curvature_components<F>(
    sample: &F,
    profile: &GeometryProfile,
    rhos: &[f64],
) -> Result<Vec<(f64, [f64; 8])>>
where
    F: Fn(f64) -> Result<(FullState, FullState)>,
{
    rhos.iter()
        .filter(|&&rho| rho > 0.0)
        .map(|&rho| {
            let (s, d) = sample(rho)?;
            let p = profile.point_at_rho(rho)?;
            Ok((rho, components_at(&s, &d, &p)?))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    /// The field is identically zero on the window; the fit is not defined.
    pub vanishes: bool,
    pub exponent: f64,
    pub coefficient: f64,
    pub slope_error: f64,
    /// Change of the exponent when the window is halved.
    pub halving_shift: f64,
}

impl ExponentFit {
    fn of(xs: &[f64], ys: &[f64], xs_half: &[f64], ys_half: &[f64]) -> Result<Self> {
        let scale = ys.iter().chain(ys_half).fold(0.0f64, |m, y| m.max(y.abs()));
        if scale <= VANISH {
            return Ok(ExponentFit {
                vanishes: true,
                exponent: f64::NAN,
                coefficient: 0.0,
                slope_error: 0.0,
                halving_shift: 0.0,
            });
        }
        let f = fit::power_law(xs, ys)?;
        let h = fit::power_law(xs_half, ys_half)?;
        Ok(ExponentFit {
            vanishes: false,
            exponent: f.slope,
            coefficient: f.intercept.exp(),
            slope_error: f.slope_error,
            halving_shift: (f.slope - h.slope).abs(),
        })
    }

    /// `O(rho^p)` at the zero section, with the fit slack.
    pub fn at_least(&self, p: f64) -> bool {
        self.vanishes || self.exponent >= p - FIT_TOLERANCE
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureVerdict {
    pub max_abs: f64,
    /// NaN when the component vanishes.
    pub exponent: f64,
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionReport {
    pub rho0: f64,
    pub b1: ExponentFit,
    pub b3: ExponentFit,
    /// Fit of `B4 - eps/2`.
    pub b4_shift: ExponentFit,
    /// `B4(0)` from a quadratic fit in `rho^2`.
    pub b4_at_zero: f64,
    pub b4_target: f64,
    pub b1_ok: bool,
    pub b3_ok: bool,
    pub b4_ok: bool,
    pub extends: bool,
    pub curvature: [CurvatureVerdict; 8],
    pub curvature_bounded: bool,
}

impl ExtensionReport {
    /// Whether the curvature verdict and the exponent verdict agree.
    pub fn consistent(&self) -> bool {
        self.extends == self.curvature_bounded
    }
}

/// Fit a trajectory near the zero section on `[rho0, 10 rho0]`, with the
/// halved window `[rho0/2, 5 rho0]` as a convergence check.
pub fn extension_fit<F>(
    sample: F,
    rho0: f64,
    points: usize,
    profile: &GeometryProfile,
) -> Result<ExtensionReport>
where
    F: Fn(f64) -> Result<(FullState, FullState)>,
{
    if points < 4 || !(rho0 > 0.0) {
        return Err(Error::InsufficientRange { span: 10.0, points });
    }
    let eps = profile.epsilon();
    let xs = fit::log_grid(rho0, 10.0 * rho0, points);
    let xs_half = fit::log_grid(0.5 * rho0, 5.0 * rho0, points);
    let states = xs.iter().map(|&r| sample(r)).collect::<Result<Vec<_>>>()?;
    let states_half = xs_half
        .iter()
        .map(|&r| sample(r))
        .collect::<Result<Vec<_>>>()?;

    let column = |v: &[(FullState, FullState)], f: &dyn Fn(&FullState) -> f64| {
        v.iter().map(|(s, _)| f(s)).collect::<Vec<_>>()
    };
    let fit_of = |f: &dyn Fn(&FullState) -> f64| {
        ExponentFit::of(&xs, &column(&states, f), &xs_half, &column(&states_half, f))
    };
    let b1 = fit_of(&|s| s.b1)?;
    let b3 = fit_of(&|s| s.b3)?;
    let b4_shift = fit_of(&|s| s.b4 - eps / 2.0)?;

    let x2: Vec<f64> = xs.iter().map(|r| r * r).collect();
    let c = fit::linear_least_squares(
        &x2,
        &column(&states, &|s| s.b4),
        &[&|_| 1.0, &|x| x, &|x| x * x],
    )?;
    let b4_at_zero = c[0];

    let mut values = [[0.0; 8]; 0].to_vec();
    for (&rho, (s, d)) in xs.iter().zip(&states) {
        values.push(components_at(s, d, &profile.point_at_rho(rho)?)?);
    }
    let mut curvature = [CurvatureVerdict {
        max_abs: 0.0,
        exponent: f64::NAN,
        bounded: true,
    }; 8];
    for (i, v) in curvature.iter_mut().enumerate() {
        let ys: Vec<f64> = values.iter().map(|c| c[i]).collect();
        v.max_abs = ys.iter().fold(0.0, |m, y| m.max(y.abs()));
        if v.max_abs > VANISH {
            v.exponent = fit::power_law(&xs, &ys)?.slope;
            v.bounded = v.exponent > BOUNDED_EXPONENT;
        }
    }

    let b1_ok = b1.at_least(3.0);
    let b3_ok = b3.at_least(2.0);
    let b4_ok = (b4_at_zero - eps / 2.0).abs() <= B4_TOLERANCE && b4_shift.at_least(2.0);
    Ok(ExtensionReport {
        rho0,
        b1,
        b3,
        b4_shift,
        b4_at_zero,
        b4_target: eps / 2.0,
        b1_ok,
        b3_ok,
        b4_ok,
        extends: b1_ok && b3_ok && b4_ok,
        curvature_bounded: curvature.iter().all(|v| v.bounded),
        curvature,
    })
}

/// The regular seed for `alpha` at `rho_s` with `B1 = delta rho_s^power`
/// added and `B3 = 0`.
pub fn rigidity_seed<P: WarpProfile + ?Sized>(
    alpha: f64,
    delta: f64,
    power: i32,
    rho_s: f64,
    profile: &P,
) -> Result<FullState> {
    let mut s = series_seed(alpha, rho_s, profile)?.embed(profile.epsilon());
    s.b1 = delta * rho_s.powi(power);
    Ok(s)
}

/// Integrate the rigidity seed at `rho0 / 2` through `10 rho0` and fit it.
pub fn rigidity_harness(
    alpha: f64,
    delta: f64,
    power: i32,
    rho0: f64,
    profile: &GeometryProfile,
    control: &StepControl,
) -> Result<ExtensionReport> {
    let start = 0.5 * rho0;
    let seed = rigidity_seed(alpha, delta, power, start, profile)?;
    let tr = solve_full(
        seed,
        start,
        10.0 * rho0 * (1.0 + 1e-9),
        f64::INFINITY,
        profile,
        control,
    )?;
    let sample = |rho: f64| {
        let s = FullState::from_array(tr.eval(rho).ok_or(Error::Domain {
            what: "rho",
            value: rho,
        })?);
        Ok((s, full_rhs(rho, &s, profile)?))
    };
    extension_fit(sample, rho0, 16, profile)
}
