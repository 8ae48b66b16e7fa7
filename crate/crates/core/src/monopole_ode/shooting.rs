//! Regular solutions of the reduced system, their mass, and shooting on the
//! seed parameter `alpha`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::integrator::{integrate, StepControl, Trajectory};
use super::seed::{check_seed, SeedSeries, SEED_TERMS};
use super::{reduced_rhs, ReducedState};
use crate::error::{Error, Result};
use crate::stenzel_geometry::WarpProfile;

/// `a` must fall below this at the end of a run before the tail is trusted.
pub const DECAY_BOUND: f64 = 1e-8;
/// Automatic runs stop once `a` is this small.
const AUTO_STOP: f64 = 1e-12;
/// Automatic runs give up here.
const AUTO_CAP: f64 = 1e4;
/// `a` above this is treated as blow-up.
const BLOW_UP: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShootOptions {
    /// Start of the numerical integration; [`default_rho0`] when `None`.
    pub rho0: Option<f64>,
    /// End of the integration; when `None` the run continues until `a`
    /// has decayed.
    pub rho_max: Option<f64>,
    pub control: StepControl,
    /// Accuracy of the mass in [`shoot_for_mass`].
    pub mass_tol: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            rho0: None,
            rho_max: None,
            control: StepControl::default(),
            mass_tol: 1e-8,
        }
    }
}

/// `min(1e-2, series radius, sqrt(0.05 / |alpha|))`.
pub fn default_rho0<P: WarpProfile + ?Sized>(alpha: f64, profile: &P) -> f64 {
    let mut r = 1e-2f64.min(profile.series_radius());
    if alpha != 0.0 {
        r = r.min((0.05 / alpha.abs()).sqrt());
    }
    r
}

/// A regular solution: the seed series below `rho0`, dense numerical output
/// above.
#[derive(Clone, Debug)]
pub struct SolutionProfile {
    pub alpha: f64,
    pub rho0: f64,
    pub series: SeedSeries,
    pub trajectory: Trajectory<2>,
}

impl SolutionProfile {
    pub fn rho_end(&self) -> f64 {
        self.trajectory.end()
    }

    pub fn end_state(&self) -> ReducedState {
        ReducedState::from_array(self.trajectory.last())
    }

    pub fn steps(&self) -> usize {
        self.trajectory.steps()
    }

    /// `(a, phi)` at `rho`, with the limit `(1, 0)` at the origin.
    pub fn eval(&self, rho: f64) -> Option<ReducedState> {
        if rho < 0.0 {
            return None;
        }
        if rho <= self.rho0 {
            return Some(self.series.eval(rho));
        }
        self.trajectory.eval(rho).map(ReducedState::from_array)
    }

    /// `(a, phi)` and their `rho`-derivatives from the equations.
    pub fn eval_with_derivative<P: WarpProfile + ?Sized>(
        &self,
        rho: f64,
        profile: &P,
    ) -> Option<(ReducedState, ReducedState)> {
        let s = self.eval(rho)?;
        let d = reduced_rhs(rho, &s, profile).ok()?;
        Some((s, d))
    }

    pub fn is_fixed_point(&self) -> bool {
        self.alpha == 0.0 && self.trajectory.states().iter().all(|y| *y == [1.0, 0.0])
    }
}

/// Integrate the reduced system from the series seed for `alpha`.
pub fn solve_reduced<P: WarpProfile + ?Sized>(
    alpha: f64,
    profile: &P,
    opts: &ShootOptions,
) -> Result<SolutionProfile> {
    let rho0 = opts.rho0.unwrap_or_else(|| default_rho0(alpha, profile));
    check_seed(alpha, rho0, profile)?;
    let series = SeedSeries::new(alpha, profile.psi_coefficients(), SEED_TERMS);
    let seed = series.eval(rho0);
    let (rho_max, auto) = match opts.rho_max {
        Some(r) => (r, false),
        None => (AUTO_CAP, true),
    };
    if !(rho_max > rho0) {
        return Err(Error::InvalidParameter {
            name: "rho_max",
            value: rho_max,
        });
    }
    let mut crossing = None;
    let mut blow_up = None;
    let trajectory = integrate(
        |rho, y: &[f64; 2]| {
            reduced_rhs(rho, &ReducedState::from_array(*y), profile).map(ReducedState::to_array)
        },
        rho0,
        seed.to_array(),
        rho_max,
        &opts.control,
        |rho, y| {
            if y[0] <= 0.0 {
                crossing = Some(rho);
                return true;
            }
            if y[0] > BLOW_UP {
                blow_up = Some(rho);
                return true;
            }
            auto && y[0] < AUTO_STOP
        },
    )
    .map_err(|e| match e {
        Error::StepUnderflow { x, .. } | Error::NonFinite { x } if alpha > 0.0 => {
            Error::BlowUp { rho: x }
        }
        e => e,
    })?;
    if let Some(rho) = crossing {
        return Err(Error::ZeroCrossing { rho });
    }
    if let Some(rho) = blow_up {
        return Err(Error::BlowUp { rho });
    }
    Ok(SolutionProfile {
        alpha,
        rho0,
        series,
        trajectory,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassEstimate {
    pub mass: f64,
    /// `int_rho_end^inf (1 - a^2) / (2 h^2)`.
    pub tail: f64,
    pub phi_end: f64,
    pub a_end: f64,
    pub rho_end: f64,
}

/// `m = phi(rho_end) - int_rho_end^inf (1 - a^2) / (2 h^2)` with `a` treated
/// as zero past `rho_end`.
pub fn extract_mass<P: WarpProfile + ?Sized>(
    sol: &SolutionProfile,
    profile: &P,
) -> Result<MassEstimate> {
    let rho_end = sol.rho_end();
    let end = sol.end_state();
    if sol.is_fixed_point() {
        return Ok(MassEstimate {
            mass: 0.0,
            tail: 0.0,
            phi_end: 0.0,
            a_end: 1.0,
            rho_end,
        });
    }
    if !(end.a.abs() < DECAY_BOUND) {
        return Err(Error::NotDecayed {
            rho_max: rho_end,
            a: end.a,
        });
    }
    let tail = profile.tail_integral(rho_end)? * (1.0 - end.a * end.a);
    Ok(MassEstimate {
        mass: end.phi - tail,
        tail,
        phi_end: end.phi,
        a_end: end.a,
        rho_end,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShootResult {
    pub alpha: f64,
    pub mass: f64,
    pub tail_estimate: f64,
    /// `|B2 B4 + B3 B5|`; identically zero on the reduced slice.
    pub constraint_drift: f64,
    pub steps: usize,
    pub rho0: f64,
    pub rho_end: f64,
}

/// Solve for `alpha` and extract the mass.
pub fn mass_at<P: WarpProfile + ?Sized>(
    alpha: f64,
    profile: &P,
    opts: &ShootOptions,
) -> Result<ShootResult> {
    let sol = solve_reduced(alpha, profile, opts)?;
    let m = extract_mass(&sol, profile)?;
    Ok(ShootResult {
        alpha,
        mass: m.mass,
        tail_estimate: m.tail,
        constraint_drift: 0.0,
        steps: sol.steps(),
        rho0: sol.rho0,
        rho_end: m.rho_end,
    })
}

/// Masses over a grid of seed parameters.
pub fn mass_sweep<P: WarpProfile + ?Sized>(
    alphas: &[f64],
    profile: &P,
    opts: &ShootOptions,
) -> Vec<Result<ShootResult>> {
    alphas.iter().map(|&a| mass_at(a, profile, opts)).collect()
}

/// Find `alpha < 0` with `m(alpha) = target` by bisection, using that `m`
/// decreases as `alpha` does.
pub fn shoot_for_mass<P: WarpProfile + ?Sized>(
    target: f64,
    profile: &P,
    opts: &ShootOptions,
) -> Result<ShootResult> {
    if !(target < 0.0) || !target.is_finite() {
        return Err(Error::InvalidParameter {
            name: "target mass",
            value: target,
        });
    }
    let tol = opts.mass_tol;
    // (alpha, mass) with mass(hi) > target > mass(lo).
    let mut hi = (0.0, 0.0);
    let mut alpha = -(2.0 * target * target / 3.0).max(1e-4);
    let mut lo = loop {
        let r = mass_at(alpha, profile, opts)?;
        if (r.mass - target).abs() <= tol {
            return Ok(r);
        }
        if !(r.mass < hi.1) {
            return Err(Error::NotMonotone { alpha });
        }
        if r.mass < target {
            break (alpha, r.mass);
        }
        hi = (alpha, r.mass);
        alpha *= 4.0;
        if alpha < -1e6 {
            return Err(Error::BracketNotFound {
                target,
                alpha: hi.0,
                mass: hi.1,
            });
        }
    };
    for _ in 0..200 {
        let mid = if hi.0 < 0.0 {
            -(lo.0 * hi.0).sqrt()
        } else {
            0.5 * lo.0
        };
        let r = mass_at(mid, profile, opts)?;
        if !(r.mass < hi.1 && r.mass > lo.1) {
            return Err(Error::NotMonotone { alpha: mid });
        }
        if (r.mass - target).abs() <= tol {
            return Ok(r);
        }
        if r.mass > target {
            hi = (mid, r.mass);
        } else {
            lo = (mid, r.mass);
        }
        if (lo.0 - hi.0).abs() <= 4.0 * f64::EPSILON * lo.0.abs() {
            break;
        }
    }
    Err(Error::Unresolved {
        target,
        lower: lo.1,
        upper: hi.1,
    })
}

/// Checks that masses strictly decrease along `alpha`-decreasing results.
pub fn check_monotone(results: &[ShootResult]) -> Result<()> {
    let mut sorted: Vec<&ShootResult> = results.iter().collect();
    sorted.sort_by(|a, b| b.alpha.total_cmp(&a.alpha));
    for w in sorted.windows(2) {
        if !(w[1].mass < w[0].mass) {
            return Err(Error::NotMonotone { alpha: w[1].alpha });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monopole_ode::flat_oracle;
    use crate::stenzel_geometry::{FlatProfile, GeometryParams, GeometryProfile, ProfileGrid};

    fn stenzel() -> GeometryProfile {
        GeometryProfile::build(GeometryParams::default(), ProfileGrid::default()).unwrap()
    }

    #[test]
    fn flat_solution_tracks_oracle() {
        for mu in [0.5, 1.0, 2.0] {
            let alpha = -2.0 * mu * mu / 3.0;
            let sol = solve_reduced(alpha, &FlatProfile, &ShootOptions::default()).unwrap();
            let mut sup: f64 = 0.0;
            for k in 0..=1000 {
                let rho = sol.rho0 + (5.0 - sol.rho0) * k as f64 / 1000.0;
                let s = sol.eval(rho).unwrap();
                let o = flat_oracle(mu, rho);
                sup = sup.max((s.a - o.a).abs()).max((s.phi - o.phi).abs());
            }
            assert!(sup < 1e-7, "mu {mu}: {sup}");
            let m = extract_mass(&sol, &FlatProfile).unwrap();
            assert!((m.mass + mu).abs() < 1e-5, "mu {mu}: {}", m.mass);
        }
    }

    #[test]
    fn fixed_point_has_zero_mass() {
        let sol = solve_reduced(
            0.0,
            &FlatProfile,
            &ShootOptions {
                rho_max: Some(50.0),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(sol.is_fixed_point());
        let m = extract_mass(&sol, &FlatProfile).unwrap();
        assert_eq!((m.mass, m.tail), (0.0, 0.0));
    }

    #[test]
    fn undecayed_solution_is_rejected() {
        let opts = ShootOptions {
            rho_max: Some(3.0),
            ..Default::default()
        };
        let sol = solve_reduced(-2.0 / 3.0, &FlatProfile, &opts).unwrap();
        assert!(matches!(
            extract_mass(&sol, &FlatProfile),
            Err(Error::NotDecayed { .. })
        ));
    }

    #[test]
    fn positive_alpha_blows_up() {
        let r = solve_reduced(1.0, &FlatProfile, &ShootOptions::default());
        assert!(matches!(r, Err(Error::BlowUp { .. })), "{r:?}");
    }

    #[test]
    fn stenzel_mass_is_self_consistent() {
        let g = stenzel();
        let base = ShootOptions {
            rho_max: Some(120.0),
            ..Default::default()
        };
        let m1 = mass_at(
            -1.0,
            &g,
            &ShootOptions {
                rho0: Some(1e-2),
                ..base
            },
        )
        .unwrap();
        let m2 = mass_at(
            -1.0,
            &g,
            &ShootOptions {
                rho0: Some(5e-3),
                ..base
            },
        )
        .unwrap();
        let m3 = mass_at(
            -1.0,
            &g,
            &ShootOptions {
                rho0: Some(1e-2),
                rho_max: Some(240.0),
                ..base
            },
        )
        .unwrap();
        assert!(m1.mass < 0.0);
        assert!((m1.mass - m2.mass).abs() < 1e-6, "{} {}", m1.mass, m2.mass);
        assert!((m1.mass - m3.mass).abs() < 1e-6, "{} {}", m1.mass, m3.mass);
        let auto = mass_at(-1.0, &g, &ShootOptions::default()).unwrap();
        assert!((auto.mass - m1.mass).abs() < 1e-6);
    }

    #[test]
    fn solutions_stay_positive() {
        let g = stenzel();
        let sol = solve_reduced(-3.0, &g, &ShootOptions::default()).unwrap();
        assert!(sol.trajectory.states().iter().all(|y| y[0] > 0.0));
    }

    #[test]
    fn shooting_round_trip() {
        let g = stenzel();
        let opts = ShootOptions::default();
        for target in [-0.25, -1.0, -4.0] {
            let r = shoot_for_mass(target, &g, &opts).unwrap();
            assert!((r.mass - target).abs() <= opts.mass_tol);
            let again = mass_at(r.alpha, &g, &opts).unwrap();
            assert!((again.mass - target).abs() < 1e-5);
        }
        assert!(shoot_for_mass(0.0, &g, &opts).is_err());
    }

    #[test]
    fn flat_shooting_recovers_oracle_alpha() {
        let r = shoot_for_mass(-1.0, &FlatProfile, &ShootOptions::default()).unwrap();
        assert!((r.alpha + 2.0 / 3.0).abs() < 1e-6, "{}", r.alpha);
    }

    #[test]
    fn sweep_is_monotone() {
        let g = stenzel();
        let alphas: Vec<f64> = (0..8).map(|k| -0.1 * 2f64.powi(k)).collect();
        let res: Vec<ShootResult> = mass_sweep(&alphas, &g, &ShootOptions::default())
            .into_iter()
            .collect::<Result<_>>()
            .unwrap();
        check_monotone(&res).unwrap();
        let mut bad = res.clone();
        bad[3].mass = bad[0].mass + 1.0;
        assert!(check_monotone(&bad).is_err());
    }
}
