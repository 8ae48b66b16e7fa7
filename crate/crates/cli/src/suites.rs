//! Verification suites. Each returns checks carrying the tolerance they were
//! run at; `verify` and the acceptance target share them.

use std::f64::consts::{FRAC_PI_2, PI};

use cymono_core::bubbling_analysis::{
    bubble_row, flat_scale_covariance, BubbleOptions, BubbleReport,
};
use cymono_core::fit::{self, log_grid};
use cymono_core::invariant_fields::{
    closed_form_covariant_derivative, closed_form_curvature, HiggsField, InvariantConnection,
};
use cymono_core::lie_coframe::{self, ScalarForm, GENERATORS};
use cymono_core::monopole_ode::{
    constraint_drift, extract_mass, flat_oracle, mass_at, shoot_for_mass, solve_full,
    solve_reduced, ComplexState, FullState, ShootOptions, ShootResult, StepControl,
};
use cymono_core::special_solutions::{
    dirac_fit, dirac_harmonicity, dirac_state, extension_fit, hym_stenzel, Background,
    ConeMonopole, DiracMonopole,
};
use cymono_core::stenzel_geometry::{
    assemble_kahler_data, monge_ampere_residual, ConeProfile, FlatProfile, GeometryParams,
    GeometryProfile,
};
use cymono_core::{Error, Jet, Result};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::report::Check;

/// `d theta^k` for `k = 1..=6` as `(coefficient, i, j)` terms of `theta^ij`.
const MAURER_CARTAN: [&[(f64, usize, usize)]; 6] = [
    &[(1.0, 2, 4), (1.0, 3, 5)],
    &[(1.0, 3, 6), (-1.0, 1, 4)],
    &[(-1.0, 1, 5), (-1.0, 2, 6)],
    &[(1.0, 1, 2), (1.0, 5, 6)],
    &[(1.0, 1, 3), (-1.0, 4, 6)],
    &[(1.0, 2, 3), (1.0, 4, 5)],
];

fn random_form(rng: &mut StdRng, degree: usize, terms: usize) -> ScalarForm {
    let mut f = ScalarForm::zero(degree);
    for _ in 0..terms {
        let mut word = Vec::with_capacity(degree);
        while word.len() < degree {
            let g = rng.gen_range(0..GENERATORS);
            if !word.contains(&g) {
                word.push(g);
            }
        }
        f.add_term(
            &word,
            Jet::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        );
    }
    f
}

/// Structure equations of the coframe and `d^2 = 0` on random forms.
pub fn maurer_cartan(forms: usize, seed: u64, tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for (k, terms) in MAURER_CARTAN.iter().enumerate() {
        let mut expected = ScalarForm::zero(2);
        for &(c, i, j) in terms.iter() {
            expected.add_term(&[i, j], Jet::constant(c));
        }
        let d = ScalarForm::generator(k + 1).d();
        out.push(Check::at_most("maurer_cartan", (&d - &expected).max_abs(), 0.0).with("k", k + 1));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let worst = (0..forms)
        .map(|n| random_form(&mut rng, n % 5, 6).d().d().max_abs())
        .fold(0.0, f64::max);
    out.push(Check::at_most("d_squared", worst, tol).with("forms", forms));
    out
}

/// Largest Monge-Ampere residual over `radii` log-spaced radii in
/// `eps (1, 100]`.
pub fn monge_ampere(epsilon: f64, radii: usize, tol: f64) -> Result<Check> {
    let p = GeometryParams::new(epsilon)?;
    let mut worst: f64 = 0.0;
    for x in log_grid(1e-3, 100.0, radii) {
        worst = worst.max(monge_ampere_residual(epsilon * (1.0 + x), p)?);
    }
    Ok(Check::at_most("monge_ampere", worst, tol)
        .with("epsilon", epsilon)
        .with("radii", radii))
}

/// Relative residual of the volume identity with sign `s` in front of the
/// `(i/8) Omega ^ conj(Omega)` term, worst over a few radii.
pub fn volume_identity(epsilon: f64, sign: f64, tol: f64) -> Result<Check> {
    let p = GeometryParams::new(epsilon)?;
    let mut worst: f64 = 0.0;
    for x in [1.001, 1.1, 2.0, 5.0, 30.0] {
        worst = worst.max(assemble_kahler_data(epsilon * x, p)?.volume_identity_residual(sign));
    }
    let name = if sign > 0.0 {
        "volume_identity_literal"
    } else {
        "volume_identity"
    };
    Ok(Check::at_most(name, worst, tol)
        .with("epsilon", epsilon)
        .with("sign", sign))
}

/// `h / rho -> 1` at the zero section and `h^2 ~ rho^5` at infinity.
pub fn h_asymptotics(
    profile: &GeometryProfile,
    tol_small: f64,
    tol_exponent: f64,
) -> Result<Vec<Check>> {
    let eps = profile.epsilon();
    let xs: Vec<f64> = (1..=10).map(|i| 1e-3 * i as f64).collect();
    let ratios = xs
        .iter()
        .map(|&r| Ok(profile.h2_of_rho(r)?.sqrt() / r))
        .collect::<Result<Vec<_>>>()?;
    let x2: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let line = fit::line(&x2, &ratios)?;
    let hi = profile.rho_max().min(1000.0);
    let tail = profile.h2_exponent(0.6 * hi, hi)?;
    Ok(vec![
        Check::near("h_over_rho_at_zero", line.intercept, 1.0, tol_small).with("epsilon", eps),
        Check::near("h2_exponent_at_infinity", tail.slope, 5.0, tol_exponent)
            .with("epsilon", eps)
            .with("rho_lo", 0.6 * hi)
            .with("rho_hi", hi),
    ])
}

/// Engine curvature and covariant derivative against the closed forms on
/// random invariant jets.
pub fn engine_vs_formula(samples: usize, seed: u64, tol: f64) -> Result<Vec<Check>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let jet = |rng: &mut StdRng| Jet::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let (mut curv, mut cov): (f64, f64) = (0.0, 0.0);
    for i in 0..samples {
        let l = [1, 1, 1, 0, 2, -1][i % 6];
        let mut a: [Jet; 5] = std::array::from_fn(|_| jet(&mut rng));
        if l != 1 {
            a[1..].iter_mut().for_each(|c| *c = Jet::ZERO);
        }
        let radius = rng.gen_range(1.01..5.0);
        let conn = InvariantConnection::new(l, a, radius)?;
        let engine = lie_coframe::curvature(&conn.form())?;
        curv = curv.max((&engine - &closed_form_curvature(&conn)).max_abs());
        let higgs = HiggsField::new(jet(&mut rng), radius);
        let nabla = lie_coframe::covariant_derivative(&conn.form(), &higgs.form())?;
        cov = cov.max((&nabla - &closed_form_covariant_derivative(&conn, &higgs)).max_abs());
    }
    Ok(vec![
        Check::at_most("engine_curvature", curv, tol).with("samples", samples),
        Check::at_most("engine_covariant_derivative", cov, tol).with("samples", samples),
    ])
}

/// Reduced solution in flat geometry against the closed-form BPS monopole.
pub fn flat_oracle_suite(
    mu: f64,
    opts: &ShootOptions,
    tol_sup: f64,
    tol_mass: f64,
) -> Result<Vec<Check>> {
    let alpha = -2.0 * mu * mu / 3.0;
    let sol = solve_reduced(alpha, &FlatProfile, opts)?;
    let n = 2000;
    let mut sup: f64 = 0.0;
    for k in 0..=n {
        let rho = sol.rho0 + (5.0 - sol.rho0) * k as f64 / n as f64;
        let s = sol.eval(rho).ok_or(Error::Domain {
            what: "flat solution",
            value: rho,
        })?;
        let o = flat_oracle(mu, rho);
        sup = sup.max((s.a - o.a).abs()).max((s.phi - o.phi).abs());
    }
    let m = extract_mass(&sol, &FlatProfile)?;
    Ok(vec![
        Check::at_most("flat_sup_error", sup, tol_sup)
            .with("mu", mu)
            .with("rho0", sol.rho0)
            .with("rho1", 5.0),
        Check::near("flat_mass", m.mass, -mu, tol_mass).with("mu", mu),
    ])
}

/// Masses over an `alpha` grid, run in parallel and sorted by `alpha`.
pub fn mass_grid(
    alphas: &[f64],
    profile: &GeometryProfile,
    opts: &ShootOptions,
) -> Result<Vec<ShootResult>> {
    let mut res = alphas
        .par_iter()
        .map(|&a| mass_at(a, profile, opts))
        .collect::<Result<Vec<_>>>()?;
    res.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    Ok(res)
}

/// Number of adjacent pairs where `|m|` fails to increase as `alpha`
/// decreases.
pub fn monotonicity_violations(sorted_by_alpha: &[ShootResult]) -> usize {
    sorted_by_alpha
        .windows(2)
        .filter(|w| !(w[0].mass < w[1].mass))
        .count()
}

/// Shooting round trip for `target` and the stability of the mass under
/// `rho_max` doubling and `rho0` halving.
pub fn shooting_suite(
    target: f64,
    profile: &GeometryProfile,
    opts: &ShootOptions,
    tol: f64,
    stab: f64,
) -> Result<Vec<Check>> {
    let shot = shoot_for_mass(target, profile, opts)?;
    let again = mass_at(shot.alpha, profile, opts)?;
    let doubled = mass_at(
        shot.alpha,
        profile,
        &ShootOptions {
            rho_max: Some(2.0 * shot.rho_end),
            ..*opts
        },
    )?;
    let halved = mass_at(
        shot.alpha,
        profile,
        &ShootOptions {
            rho0: Some(0.5 * shot.rho0),
            ..*opts
        },
    )?;
    Ok(vec![
        Check::near("shoot_round_trip", again.mass, target, tol).with("alpha", shot.alpha),
        Check::at_most(
            "mass_rho_max_doubling",
            (doubled.mass - shot.mass).abs(),
            stab,
        )
        .with("alpha", shot.alpha)
        .with("rho_max", 2.0 * shot.rho_end),
        Check::at_most("mass_rho0_halving", (halved.mass - shot.mass).abs(), stab)
            .with("alpha", shot.alpha)
            .with("rho0", 0.5 * shot.rho0),
    ])
}

/// Range of the random full-system runs; trajectories leaving
/// `|B| <= FULL_BOUND` have started to blow up and are cut there.
pub const FULL_RANGE: (f64, f64) = (0.5, 10.0);
pub const FULL_BOUND: f64 = 10.0;

/// A seed on the constraint surface with both complex amplitudes non-zero.
pub fn random_seed(rng: &mut StdRng) -> FullState {
    let chi = rng.gen_range(0.0..2.0 * PI);
    let k = f64::from(rng.gen_range(0..2u8));
    ComplexState {
        phi: rng.gen_range(-0.2..0.2),
        b1: rng.gen_range(-0.2..0.2),
        f1: Complex64::from_polar(rng.gen_range(0.05..0.3), chi),
        f2: Complex64::from_polar(rng.gen_range(0.05..0.3), chi + FRAC_PI_2 + k * PI),
    }
    .to_full()
}

/// Distance of an angle from the nearest multiple of `pi`. The amplitudes
/// are real multiples of a fixed phase, so sign changes do not count.
fn off_line(x: f64) -> f64 {
    let y = x.rem_euclid(PI);
    y.min(PI - y)
}

fn line_drift(z: Complex64, z0: Complex64) -> f64 {
    if z.norm() < 1e-12 || z0.norm() < 1e-12 {
        0.0
    } else {
        off_line(z.arg() - z0.arg())
    }
}

/// Constraint drift, phase drift and gauge-orbit invariance over `seeds`
/// random seeds.
pub fn random_full_system(
    profile: &GeometryProfile,
    seeds: usize,
    seed: u64,
    tols: [f64; 3],
) -> Result<Vec<Check>> {
    let (rho0, rho1) = FULL_RANGE;
    let ctl = StepControl::with_tol(1e-10, 1e-12);
    let fine = StepControl::with_tol(1e-13, 1e-15);
    let mut rng = StdRng::seed_from_u64(seed);
    let jobs: Vec<(FullState, f64)> = (0..seeds)
        .map(|_| {
            let s = random_seed(&mut rng);
            (s, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let per_seed = jobs
        .par_iter()
        .map(|&(s, angle)| -> Result<[f64; 3]> {
            let tr = solve_full(s, rho0, rho1, FULL_BOUND, profile, &ctl)?;
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
            let a = solve_full(s, rho0, rho1, FULL_BOUND, profile, &fine)?;
            let b = solve_full(s.rotate(angle), rho0, rho1, FULL_BOUND, profile, &fine)?;
            let end = a.end().min(b.end());
            let mut orbit: f64 = 0.0;
            for i in 0..=40 {
                let rho = (rho0 + (end - rho0) * f64::from(i) / 40.0).min(end);
                let (Some(x), Some(y)) = (a.eval(rho), b.eval(rho)) else {
                    return Err(Error::Domain {
                        what: "gauge orbit",
                        value: rho,
                    });
                };
                let (x, y) = (
                    FullState::from_array(x).to_complex(),
                    FullState::from_array(y).to_complex(),
                );
                orbit = orbit
                    .max((x.f1.norm() - y.f1.norm()).abs())
                    .max((x.f2.norm() - y.f2.norm()).abs())
                    .max((x.b1 - y.b1).abs())
                    .max((x.phi - y.phi).abs());
            }
            Ok([constraint_drift(&tr), phase, orbit])
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = |i: usize| per_seed.iter().map(|v| v[i]).fold(0.0, f64::max);
    Ok(["constraint_drift", "phase_drift", "gauge_orbit"]
        .iter()
        .enumerate()
        .map(|(i, name)| {
            Check::at_most(*name, worst(i), tols[i])
                .with("seeds", seeds)
                .with("rho1", rho1)
        })
        .collect())
}

/// HYM residuals on Stenzel at radii `r`.
pub fn hym_suite(epsilon: f64, radii: &[f64], tol: f64) -> Result<Vec<Check>> {
    let p = GeometryParams::new(epsilon)?;
    radii
        .iter()
        .map(|&r| {
            let rep = hym_stenzel(r, p)?;
            Ok(Check::at_most("hym_residual", rep.max_residual(), tol)
                .with("epsilon", epsilon)
                .with("radius", r))
        })
        .collect()
}

/// Dirac residuals at `rhos`, harmonicity of `phi`, and the power laws at
/// both ends.
pub fn dirac_suite(
    profile: &GeometryProfile,
    mono: DiracMonopole,
    rhos: &[f64],
    tol: f64,
    fit_tol: f64,
) -> Result<Vec<Check>> {
    let bg = Background::Stenzel(profile);
    let mut out = Vec::new();
    for &rho in rhos {
        let r = mono.residuals(&bg, rho)?.max();
        out.push(
            Check::at_most("dirac_residual", r, tol)
                .with("l", mono.l)
                .with("rho", rho),
        );
    }
    out.push(
        Check::at_most(
            "dirac_harmonicity",
            dirac_harmonicity(mono.l, &bg, rhos)?,
            1e-8,
        )
        .with("l", mono.l),
    );
    if mono.l != 0 {
        let hi = profile.rho_max().min(1000.0);
        let tail = dirac_fit(mono.l, profile, 0.2 * hi, hi, 12)?;
        out.push(
            Check::near("dirac_tail_exponent", tail.slope, -4.0, fit_tol * 4.0)
                .with("rho_lo", 0.2 * hi)
                .with("rho_hi", hi),
        );
        let core = dirac_fit(mono.l, profile, 1e-5, 1e-4, 12)?;
        out.push(Check::near(
            "dirac_core_exponent",
            core.slope,
            -1.0,
            fit_tol,
        ));
    }
    Ok(out)
}

/// Cone Dirac residuals at `rhos` and the `rho^-5` decay of the deviation
/// from the canonical connection.
pub fn cone_suite(mono: ConeMonopole, rhos: &[f64], tol: f64, fit_tol: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &rho in rhos {
        let r = mono.residuals(rho)?.max();
        out.push(
            Check::at_most("cone_residual", r, tol)
                .with("l", mono.l)
                .with("rho", rho),
        );
    }
    if mono.c != 0.0 {
        let xs = log_grid(2.0, 200.0, 20);
        let ys = xs
            .iter()
            .map(|&r| mono.deviation_norm(r))
            .collect::<Result<Vec<_>>>()?;
        let f = fit::power_law(&xs, &ys)?;
        out.push(Check::near(
            "cone_decay_exponent",
            f.slope,
            -5.0,
            5.0 * fit_tol,
        ));
    }
    let bg = Background::Cone(ConeProfile::default());
    out.push(
        Check::at_most(
            "cone_dirac_harmonicity",
            dirac_harmonicity(mono.l, &bg, rhos)?,
            1e-8,
        )
        .with("l", mono.l),
    );
    Ok(out)
}

/// Extension analysis of the mass `target` solution (which must extend)
/// and of the `B4 = 0` Dirac family (which must not).
pub fn extension_suite(
    target: f64,
    profile: &GeometryProfile,
    opts: &ShootOptions,
    b4_tol: f64,
) -> Result<Vec<Check>> {
    let eps = profile.epsilon();
    let shot = shoot_for_mass(target, profile, opts)?;
    let sol = solve_reduced(shot.alpha, profile, opts)?;
    let sample = |rho: f64| {
        let (s, d) = sol
            .eval_with_derivative(rho, profile)
            .ok_or(Error::Domain {
                what: "rho",
                value: rho,
            })?;
        Ok((s.embed(eps), d.embed(eps)))
    };
    let rep = extension_fit(sample, 1e-3, 12, profile)?;
    let dirac = extension_fit(|rho| dirac_state(target, rho, profile), 1e-3, 12, profile)?;
    let i5 = &dirac.curvature[4];
    Ok(vec![
        Check::near("extension_b4_at_zero", rep.b4_at_zero, eps / 2.0, b4_tol)
            .with("alpha", shot.alpha),
        Check::holds("extension_b1_exponent", rep.b1_ok)
            .with("exponent", rep.b1.exponent)
            .with("vanishes", rep.b1.vanishes),
        Check::holds("extension_b3_exponent", rep.b3_ok)
            .with("exponent", rep.b3.exponent)
            .with("vanishes", rep.b3.vanishes),
        Check::holds(
            "extension_curvature_bounded",
            rep.extends && rep.curvature_bounded && rep.consistent(),
        ),
        Check::holds(
            "reducible_flagged",
            !dirac.extends && !i5.bounded && dirac.consistent(),
        )
        .with("i5_exponent", i5.exponent)
        .with("i5_max", i5.max_abs),
    ])
}

/// Bubble rows for `lambdas` in parallel, merged by `lambda`.
pub fn bubble_report(
    lambdas: &[f64],
    profile: &GeometryProfile,
    opts: &BubbleOptions,
) -> Result<BubbleReport> {
    let rows = lambdas
        .par_iter()
        .map(|&l| bubble_row(l, profile, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(BubbleReport::new(rows))
}

pub fn bubble_checks(
    rep: &BubbleReport,
    opts: &BubbleOptions,
    flat_tol: f64,
) -> Result<Vec<Check>> {
    let bps: Vec<f64> = rep.rows.iter().map(|r| r.bps_error).collect();
    let dirac: Vec<f64> = rep.rows.iter().map(|r| r.dirac_error).collect();
    let down = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let mut out = vec![
        Check::holds("bps_error_decreasing", down(&bps)).with("radius", opts.radius),
        Check::holds("dirac_error_decreasing", down(&dirac))
            .with("annulus_lo", opts.annulus.0)
            .with("annulus_hi", opts.annulus.1),
    ];
    for r in &rep.rows {
        let e = flat_scale_covariance(r.lambda, opts)?;
        out.push(Check::at_most("flat_scale_covariance", e, flat_tol).with("lambda", r.lambda));
    }
    Ok(out)
}

/// Builds the Stenzel profile, or fails on the cone.
pub fn stenzel(
    epsilon: f64,
    grid: cymono_core::stenzel_geometry::ProfileGrid,
) -> Result<GeometryProfile> {
    GeometryProfile::build(GeometryParams::new(epsilon)?, grid)
}
