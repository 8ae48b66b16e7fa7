//! Large-mass behaviour of the regular solutions: after rescaling by
//! `eta ~ 1/lambda` the mass `-lambda` solution approaches the flat BPS
//! monopole, and away from the zero section it approaches the zero-mass
//! Dirac monopole shifted by the mass.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fit;
use crate::monopole_ode::{
    flat_oracle, shoot_for_mass, solve_reduced, ShootOptions, SolutionProfile,
};
use crate::stenzel_geometry::{FlatProfile, WarpProfile};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BubbleOptions {
    /// Radius of the rescaled ball `(0, R]`.
    pub radius: f64,
    /// `[rho1, rho2]`.
    pub annulus: (f64, f64),
    /// Sample points per sup-norm.
    pub samples: usize,
    /// Points of the `eta` scan over `[0.3/lambda, 3/lambda]`.
    pub eta_points: usize,
    pub shoot: ShootOptions,
}

impl Default for BubbleOptions {
    fn default() -> Self {
        BubbleOptions {
            radius: 3.0,
            annulus: (1.0, 3.0),
            samples: 400,
            eta_points: 21,
            shoot: ShootOptions::default(),
        }
    }
}

fn ensure_range(sol: &SolutionProfile, rho: f64) -> Result<()> {
    if rho > sol.rho_end() {
        return Err(Error::InsufficientRange {
            span: sol.rho_end(),
            points: 0,
        });
    }
    Ok(())
}

/// `sup |a(eta s) - a_BPS(s)| + |eta phi(eta s) - phi_BPS(s)|` over
/// `s in (0, R]`, with the mass-1 flat monopole.
pub fn bps_comparison(sol: &SolutionProfile, radius: f64, eta: f64, samples: usize) -> Result<f64> {
    if !(eta > 0.0 && radius > 0.0) || samples == 0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
        });
    }
    ensure_range(sol, eta * radius)?;
    let mut worst: f64 = 0.0;
    for i in 1..=samples {
        let s = radius * i as f64 / samples as f64;
        let y = sol.eval(eta * s).ok_or(Error::Domain {
            what: "rho",
            value: eta * s,
        })?;
        let o = flat_oracle(1.0, s);
        worst = worst.max((y.a - o.a).abs() + (eta * y.phi - o.phi).abs());
    }
    Ok(worst)
}

/// The `eta` minimizing the BPS error over a decade around `eta0`.
pub fn eta_scan(
    sol: &SolutionProfile,
    radius: f64,
    eta0: f64,
    points: usize,
    samples: usize,
) -> Result<(f64, f64)> {
    let etas = fit::log_grid(eta0 / 10f64.sqrt(), eta0 * 10f64.sqrt(), points.max(2));
    let mut best = (eta0, f64::INFINITY);
    for eta in etas {
        if eta * radius > sol.rho_end() {
            continue;
        }
        let e = bps_comparison(sol, radius, eta, samples)?;
        if e < best.1 {
            best = (eta, e);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiracComparison {
    /// `sup |(phi - m) - phi_D| + |a|`.
    pub value: f64,
    /// `sup |phi' - phi_D'| + |a'|`.
    pub derivative: f64,
    /// `a(rho1)`.
    pub a_inner: f64,
}

/// Compare with the zero-mass Dirac monopole `phi_D = int_rho^inf 1/(2h^2)` on
/// the annulus.
pub fn dirac_comparison<P: WarpProfile + ?Sized>(
    sol: &SolutionProfile,
    mass: f64,
    annulus: (f64, f64),
    samples: usize,
    profile: &P,
) -> Result<DiracComparison> {
    let (lo, hi) = annulus;
    if !(lo > 0.0 && hi >= lo) || samples < 2 {
        return Err(Error::InvalidParameter {
            name: "annulus",
            value: lo,
        });
    }
    ensure_range(sol, hi)?;
    let mut out = DiracComparison {
        value: 0.0,
        derivative: 0.0,
        a_inner: sol.eval(lo).map_or(f64::NAN, |y| y.a),
    };
    for i in 0..samples {
        let rho = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let (y, d) = sol
            .eval_with_derivative(rho, profile)
            .ok_or(Error::Domain {
                what: "rho",
                value: rho,
            })?;
        let dirac = profile.tail_integral(rho)?;
        let ddirac = -0.5 / profile.h2(rho);
        out.value = out.value.max((y.phi - mass - dirac).abs() + y.a.abs());
        out.derivative = out.derivative.max((d.phi - ddirac).abs() + d.a.abs());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BubbleRow {
    pub lambda: f64,
    pub alpha: f64,
    pub mass: f64,
    pub eta: f64,
    pub bps_error: f64,
    pub eta_best: f64,
    pub bps_error_best: f64,
    pub dirac_error: f64,
    pub dirac_derivative_error: f64,
    pub a_inner: f64,
}

/// Shoot for mass `-lambda` and run both comparisons.
pub fn bubble_row<P: WarpProfile + ?Sized>(
    lambda: f64,
    profile: &P,
    opts: &BubbleOptions,
) -> Result<BubbleRow> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
        });
    }
    let shot = shoot_for_mass(-lambda, profile, &opts.shoot)?;
    let eta = 1.0 / lambda;
    let reach = (opts.annulus.1).max(3.0 * eta * opts.radius);
    let sol = solve_reduced(
        shot.alpha,
        profile,
        &ShootOptions {
            rho_max: Some(reach * (1.0 + 1e-9)),
            ..opts.shoot
        },
    )?;
    let bps_error = bps_comparison(&sol, opts.radius, eta, opts.samples)?;
    let (eta_best, bps_error_best) =
        eta_scan(&sol, opts.radius, eta, opts.eta_points, opts.samples)?;
    let d = dirac_comparison(&sol, shot.mass, opts.annulus, opts.samples, profile)?;
    Ok(BubbleRow {
        lambda,
        alpha: shot.alpha,
        mass: shot.mass,
        eta,
        bps_error,
        eta_best,
        bps_error_best,
        dirac_error: d.value,
        dirac_derivative_error: d.derivative,
        a_inner: d.a_inner,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BubbleReport {
    pub rows: Vec<BubbleRow>,
    /// Smallest `lambda` of the grid from which both error columns are
    /// non-increasing, if any.
    pub threshold: Option<f64>,
}

impl BubbleReport {
    pub fn new(mut rows: Vec<BubbleRow>) -> Self {
        rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        let ok = |w: &[BubbleRow]| {
            w[1].bps_error <= w[0].bps_error && w[1].dirac_error <= w[0].dirac_error
        };
        let mut threshold = rows.last().map(|r| r.lambda);
        for i in (0..rows.len().saturating_sub(1)).rev() {
            if ok(&rows[i..i + 2]) {
                threshold = Some(rows[i].lambda);
            } else {
                break;
            }
        }
        BubbleReport { rows, threshold }
    }

    /// Both error columns strictly decrease along the computed grid.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].bps_error < w[0].bps_error && w[1].dirac_error < w[0].dirac_error)
    }
}

pub fn bubble_sweep<P: WarpProfile + ?Sized>(
    lambdas: &[f64],
    profile: &P,
    opts: &BubbleOptions,
) -> Result<BubbleReport> {
    let rows = lambdas
        .iter()
        .map(|&l| bubble_row(l, profile, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(BubbleReport::new(rows))
}

/// The BPS comparison run on flat data, where rescaling is exact.
pub fn flat_scale_covariance(lambda: f64, opts: &BubbleOptions) -> Result<f64> {
    let shot = shoot_for_mass(-lambda, &FlatProfile, &opts.shoot)?;
    let sol = solve_reduced(
        shot.alpha,
        &FlatProfile,
        &ShootOptions {
            rho_max: Some(opts.radius / lambda * (1.0 + 1e-9)),
            ..opts.shoot
        },
    )?;
    bps_comparison(&sol, opts.radius, 1.0 / lambda, opts.samples)
}
