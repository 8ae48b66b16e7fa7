use std::f64::consts::{FRAC_PI_2, PI};

use cymono_core::monopole_ode::{
    constraint_drift, solve_full, solve_reduced, ComplexState, FullState, ShootOptions, StepControl,
};
use cymono_core::stenzel_geometry::{GeometryParams, GeometryProfile, ProfileGrid};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const RHO0: f64 = 0.5;
const RHO1: f64 = 10.0;
/// Trajectories leaving this box have started to blow up and are cut there.
const BOUND: f64 = 10.0;

fn stenzel() -> GeometryProfile {
    GeometryProfile::build(GeometryParams::default(), ProfileGrid::default()).unwrap()
}

/// A seed on the constraint surface with `f1 f2 != 0`.
fn seed(rng: &mut StdRng) -> FullState {
    let chi1 = rng.gen_range(0.0..2.0 * PI);
    let k = f64::from(rng.gen_range(0..2));
    ComplexState {
        phi: rng.gen_range(-0.2..0.2),
        b1: rng.gen_range(-0.2..0.2),
        f1: Complex64::from_polar(rng.gen_range(0.05..0.3), chi1),
        f2: Complex64::from_polar(rng.gen_range(0.05..0.3), chi1 + FRAC_PI_2 + k * PI),
    }
    .to_full()
}

/// Distance of an angle from the nearest multiple of `pi`; `f = r e^(i chi)`
/// with real `r`, so a sign change of `r` is not a phase change.
fn off_line(x: f64) -> f64 {
    let y = x.rem_euclid(PI);
    y.min(PI - y)
}

fn line_drift(z: Complex64, z0: Complex64) -> f64 {
    if z.norm() < 1e-12 {
        0.0
    } else {
        off_line(z.arg() - z0.arg())
    }
}

#[test]
fn constraint_and_phases_are_preserved() {
    let g = stenzel();
    let ctl = StepControl::with_tol(1e-10, 1e-12);
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let s = seed(&mut rng);
        let tr = solve_full(s, RHO0, RHO1, BOUND, &g, &ctl).unwrap();
        assert!(constraint_drift(&tr) <= 10.0 * ctl.rtol * (tr.end() - RHO0));
        let c0 = s.to_complex();
        let phase = tr.max_over_nodes(|_, y| {
            let c = FullState::from_array(*y).to_complex();
            let gap = if c.f1.norm() < 1e-12 || c.f2.norm() < 1e-12 {
                0.0
            } else {
                off_line(c.f2.arg() - c.f1.arg() - FRAC_PI_2)
            };
            line_drift(c.f1, c0.f1)
                .max(line_drift(c.f2, c0.f2))
                .max(gap)
        });
        assert!(phase <= 1e-6, "phase drift {phase}");
    }
}

#[test]
fn gauge_orbit_invariance() {
    let g = stenzel();
    let ctl = StepControl::with_tol(1e-13, 1e-15);
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..10 {
        let s = seed(&mut rng);
        let angle = rng.gen_range(0.0..2.0 * PI);
        let a = solve_full(s, RHO0, RHO1, BOUND, &g, &ctl).unwrap();
        let b = solve_full(s.rotate(angle), RHO0, RHO1, BOUND, &g, &ctl).unwrap();
        let end = a.end().min(b.end());
        for i in 0..=40 {
            let rho = RHO0 + (end - RHO0) * f64::from(i) / 40.0;
            let x = FullState::from_array(a.eval(rho).unwrap()).to_complex();
            let y = FullState::from_array(b.eval(rho).unwrap()).to_complex();
            let d = (x.f1.norm() - y.f1.norm())
                .abs()
                .max((x.f2.norm() - y.f2.norm()).abs())
                .max((x.b1 - y.b1).abs())
                .max((x.phi - y.phi).abs());
            assert!(d <= 1e-9, "rho {rho}: {d}");
        }
    }
}

#[test]
fn reduced_embeds_in_full_system() {
    let g = stenzel();
    let opts = ShootOptions {
        rho_max: Some(RHO1),
        control: StepControl::with_tol(1e-12, 1e-14),
        ..ShootOptions::default()
    };
    for alpha in [-0.3, -1.0, -4.0] {
        let sol = solve_reduced(alpha, &g, &opts).unwrap();
        let seed = sol.eval(sol.rho0).unwrap().embed(1.0);
        let tr = solve_full(seed, sol.rho0, RHO1, f64::INFINITY, &g, &opts.control).unwrap();
        let err = tr.max_over_nodes(|rho, y| {
            let r = sol.eval(rho).unwrap();
            (y[4] - 0.5 * r.a).abs().max((y[0] - r.phi).abs())
        });
        assert!(err <= 1e-8, "alpha {alpha}: {err}");
        assert!(tr.max_over_nodes(|_, y| y[1].abs() + y[2].abs() + y[3].abs() + y[5].abs()) == 0.0);
    }
}
