//! Batch driver for the monopole solvers: reads a TOML run configuration,
//! runs one subcommand and writes CSV tables plus a JSON check report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod report;
pub mod suites;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cymono_core::bubbling_analysis::BubbleOptions;
use cymono_core::fit::log_grid;
use cymono_core::monopole_ode::{extract_mass, shoot_for_mass, solve_reduced};
use cymono_core::special_solutions::{
    cone_hym_irreducible, hym_stenzel, Background, ConeMonopole, DiracMonopole,
};
use cymono_core::stenzel_geometry::{
    assemble_kahler_data, monge_ampere_residual, GeometryParams, GeometryProfile, RadialPoint,
};

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use report::{Check, Outcome, Report, Table};

/// Environment variable holding the worker count for parallel sweeps.
pub const WORKERS_ENV: &str = "CYMONO_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "cymono",
    version,
    about = "Spin(4)-invariant Calabi-Yau monopoles on the deformed conifold"
)]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub rho0: Option<f64>,
    #[arg(long = "rho-max", global = true)]
    pub rho_max: Option<f64>,
    /// Relative integration tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hym,
    Dirac,
    Cone,
    Random,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stenzel radial data and the Monge-Ampere and volume checks.
    Geometry {
        /// Largest radius in units of epsilon.
        #[arg(long = "r-max")]
        r_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Residual suites for a solution family.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        family: Family,
        /// Radii `r` of the residual grid; defaults to multiples of epsilon.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        /// Residual bound.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = 50)]
        seeds: usize,
    },
    /// One regular solution, by mass magnitude or seed parameter.
    Shoot {
        #[arg(long, required_unless_present = "alpha", conflicts_with = "alpha")]
        mass: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Masses over a grid of seed parameters.
    Moduli {
        /// `lo:hi:n`, linearly spaced.
        #[arg(long = "alpha-grid", allow_hyphen_values = true)]
        alpha_grid: Option<String>,
    },
    /// Dirac monopole profile and residuals on Stenzel.
    Dirac {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        l: i32,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        m: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        c: f64,
        /// `lo:hi:n`, log-spaced in rho.
        #[arg(long = "rho-grid", default_value = "0.05:50:30")]
        rho_grid: String,
    },
    /// Dirac monopoles on the cone, and optionally an irreducible HYM branch.
    Cone {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        l: i32,
        #[arg(long, default_value_t = 0.8, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        m: f64,
        #[arg(long = "rho-grid", default_value = "0.5:50:30")]
        rho_grid: String,
        /// Initial `B1` of the irreducible branch at the start of the grid.
        #[arg(long, allow_hyphen_values = true, requires = "b4")]
        b1: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "b1")]
        b4: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        sign: f64,
    },
    /// The HYM connection on Stenzel.
    Hym {
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
    },
    /// Large-mass comparisons with the flat BPS and Dirac monopoles.
    Bubble {
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<f64>,
        #[arg(long = "R")]
        radius: Option<f64>,
        /// `lo:hi`.
        #[arg(long)]
        annulus: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Geometry { .. } => "geometry",
            Command::Verify { .. } => "verify",
            Command::Shoot { .. } => "shoot",
            Command::Moduli { .. } => "moduli",
            Command::Dirac { .. } => "dirac",
            Command::Cone { .. } => "cone",
            Command::Hym { .. } => "hym",
            Command::Bubble { .. } => "bubble",
        }
    }
}

/// The configuration after applying flags on top of the file.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cli.epsilon.is_some() {
        c.epsilon = cli.epsilon;
    }
    if cli.rho0.is_some() {
        c.rho0 = cli.rho0;
    }
    if cli.rho_max.is_some() {
        c.rho_max = cli.rho_max;
    }
    if let Some(t) = cli.tol {
        c.tolerances.rtol = t;
    }
    if let Some(o) = &cli.out {
        c.output_dir = o.clone();
    }
    match &cli.command {
        Command::Geometry { r_max, points } => {
            c.geometry.r_max = r_max.unwrap_or(c.geometry.r_max);
            c.geometry.points = points.unwrap_or(c.geometry.points);
        }
        Command::Verify {
            tolerance: Some(t), ..
        } => c.tolerances.residual = *t,
        Command::Moduli {
            alpha_grid: Some(g),
        } => c.moduli.alpha_grid = g.clone(),
        Command::Bubble {
            lambdas,
            radius,
            annulus,
        } => {
            if !lambdas.is_empty() {
                c.bubble.lambdas = lambdas.clone();
            }
            c.bubble.radius = radius.unwrap_or(c.bubble.radius);
            if let Some(a) = annulus {
                let (lo, hi) = config::parse_range(a)?;
                c.bubble.annulus = [lo, hi];
            }
        }
        _ => {}
    }
    c.validate()?;
    Ok(c)
}

/// Worker count from [`WORKERS_ENV`], or `None` for the rayon default.
pub fn workers_from_env() -> CliResult<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{WORKERS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
    }
}

/// Runs the subcommand on a pool of `workers` threads.
pub fn run(cli: &Cli, workers: Option<usize>) -> CliResult<Outcome> {
    let config = resolve_config(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(&cli.command, &config))
}

fn need_stenzel(config: &RunConfig) -> CliResult<GeometryProfile> {
    let eps = config.epsilon()?;
    if eps == 0.0 {
        return Err(CliError::Usage("this subcommand needs epsilon > 0".into()));
    }
    Ok(suites::stenzel(eps, config.profile_grid())?)
}

fn log_spec(spec: &str) -> CliResult<Vec<f64>> {
    let g = config::parse_grid(spec)?;
    let (lo, hi, n) = (g[0], g[g.len() - 1], g.len());
    if !(lo > 0.0 && hi > lo) {
        return Err(CliError::Usage(format!(
            "log grid needs 0 < lo < hi, got `{spec}`"
        )));
    }
    Ok(log_grid(lo, hi, n))
}

fn default_radii(eps: f64) -> Vec<f64> {
    [1.01, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0]
        .iter()
        .map(|x| eps * x)
        .collect()
}

pub fn dispatch(cmd: &Command, config: &RunConfig) -> CliResult<Outcome> {
    let mut report = Report::new(cmd.name());
    let mut tables = Vec::new();
    let eps = config.epsilon()?;
    let tol = config.tolerances.residual;
    match cmd {
        Command::Geometry { .. } => {
            let params = GeometryParams::new(eps)?;
            let g = &config.geometry;
            let radii: Vec<f64> = if params.is_cone() {
                log_grid(g.r_max * 1e-3, g.r_max, g.points)
            } else {
                log_grid(1e-3, g.r_max - 1.0, g.points)
                    .iter()
                    .map(|x| eps * (1.0 + x))
                    .collect()
            };
            let mut t = Table::new(
                "geometry",
                &[
                    "r", "t", "rho", "Fprime", "G", "Gdot", "h2", "Rplus", "Rminus",
                ],
            );
            let mut ma: f64 = 0.0;
            for &r in &radii {
                let p = RadialPoint::at_r(r, params)?;
                t.push_numbers(&[
                    p.r, p.t, p.rho, p.fprime, p.g, p.gdot, p.h2, p.rplus, p.rminus,
                ]);
                ma = ma.max(monge_ampere_residual(r, params)?);
            }
            tables.push(t);
            report.push(
                Check::at_most("monge_ampere", ma, 1e-7)
                    .with("epsilon", eps)
                    .with("radii", radii.len()),
            );
            let scale = if params.is_cone() { 1.0 } else { eps };
            let mut worst = [0.0f64; 2];
            for x in [1.001, 1.1, 2.0, 5.0, 30.0] {
                let k = assemble_kahler_data(scale * x, params)?;
                worst[0] = worst[0].max(k.volume_identity_residual(-1.0));
                worst[1] = worst[1].max(k.volume_identity_residual(1.0));
            }
            report.push(
                Check::at_most("volume_identity", worst[0], 1e-9)
                    .with("epsilon", eps)
                    .with("sign", -1.0),
            );
            report.note(
                Check::at_most("volume_identity_literal", worst[1], 1e-9)
                    .with("epsilon", eps)
                    .with("sign", 1.0),
            );
            if !params.is_cone() {
                let p = suites::stenzel(eps, config.profile_grid())?;
                report.extend(suites::h_asymptotics(&p, 1e-3, 0.02)?);
            }
        }
        Command::Verify {
            family,
            radii,
            seeds,
            ..
        } => {
            let radii = if radii.is_empty() {
                default_radii(eps.max(1.0))
            } else {
                radii.clone()
            };
            let all = *family == Family::All;
            if all || *family == Family::Hym {
                if eps == 0.0 {
                    return Err(CliError::Usage("the hym family needs epsilon > 0".into()));
                }
                report.extend(suites::hym_suite(eps, &radii, tol)?);
            }
            if all || *family == Family::Dirac {
                let p = need_stenzel(config)?;
                let rhos = radii
                    .iter()
                    .map(|&r| p.rho_of_r(r))
                    .collect::<Result<Vec<_>, _>>()?;
                report.extend(suites::dirac_suite(
                    &p,
                    DiracMonopole::new(1, -1.0, 0.5),
                    &rhos,
                    tol,
                    1e-2,
                )?);
            }
            if all || *family == Family::Cone {
                let rhos: Vec<f64> = radii.iter().map(|r| (1.5 * r).powf(2.0 / 3.0)).collect();
                report.extend(suites::cone_suite(
                    ConeMonopole::new(1, 0.8, 1.0)?,
                    &rhos,
                    tol,
                    1e-2,
                )?);
            }
            if all || *family == Family::Random {
                let p = need_stenzel(config)?;
                report.extend(suites::random_full_system(
                    &p,
                    *seeds,
                    7,
                    [1e-8, 1e-6, 1e-9],
                )?);
            }
        }
        Command::Shoot { mass, alpha } => {
            let p = need_stenzel(config)?;
            let opts = config.shoot_options();
            let alpha = match (mass, alpha) {
                (Some(m), _) => {
                    if !(*m > 0.0) {
                        return Err(CliError::Usage(format!(
                            "--mass takes a magnitude > 0, got {m}"
                        )));
                    }
                    shoot_for_mass(-m, &p, &opts)?.alpha
                }
                (None, Some(a)) => *a,
                (None, None) => return Err(CliError::Usage("give --mass or --alpha".into())),
            };
            let sol = solve_reduced(alpha, &p, &opts)?;
            let est = extract_mass(&sol, &p)?;
            let mut t = Table::new("shoot", &["alpha", "mass", "tail", "drift", "steps"]);
            t.push(vec![
                report::fmt12(alpha),
                report::fmt12(est.mass.abs()),
                report::fmt12(est.tail),
                report::fmt12(0.0),
                sol.steps().to_string(),
            ]);
            tables.push(t);
            let mut prof = Table::new("shoot_profile", &["rho", "a", "phi"]);
            for (rho, y) in sol.trajectory.nodes().iter().zip(sol.trajectory.states()) {
                prof.push_numbers(&[*rho, y[0], y[1]]);
            }
            tables.push(prof);
            if let Some(m) = mass {
                report.push(
                    Check::near("mass", est.mass.abs(), *m, 10.0 * config.tolerances.mass)
                        .with("alpha", alpha),
                );
            }
            report.push(
                Check::at_most(
                    "a_at_end",
                    est.a_end,
                    cymono_core::monopole_ode::DECAY_BOUND,
                )
                .with("alpha", alpha)
                .with("rho_end", est.rho_end),
            );
        }
        Command::Moduli { .. } => {
            let p = need_stenzel(config)?;
            let alphas = config::parse_grid(&config.moduli.alpha_grid)?;
            let res = suites::mass_grid(&alphas, &p, &config.shoot_options())?;
            let mut t = Table::new("moduli", &["alpha", "mass", "tail", "drift", "steps"]);
            for r in &res {
                t.push(vec![
                    report::fmt12(r.alpha),
                    report::fmt12(r.mass.abs()),
                    report::fmt12(r.tail_estimate),
                    report::fmt12(r.constraint_drift),
                    r.steps.to_string(),
                ]);
            }
            tables.push(t);
            report.push(
                Check::at_most(
                    "mass_monotone",
                    suites::monotonicity_violations(&res) as f64,
                    0.0,
                )
                .with("alpha_grid", config.moduli.alpha_grid.clone()),
            );
        }
        Command::Dirac { l, m, c, rho_grid } => {
            let p = need_stenzel(config)?;
            let rhos = log_spec(rho_grid)?;
            let mono = DiracMonopole::new(*l, *m, *c);
            let bg = Background::Stenzel(&p);
            let mut t = Table::new("dirac", &["rho", "r", "phi", "dphi_dr", "a1", "residual"]);
            for &rho in &rhos {
                let (k, conn, higgs) = mono.fields(&bg, rho)?;
                let res = mono.residuals(&bg, rho)?.max();
                t.push_numbers(&[
                    rho,
                    k.radius(),
                    higgs.phi.value,
                    higgs.phi.dvalue,
                    conn.a[0].value,
                    res,
                ]);
            }
            tables.push(t);
            report.extend(suites::dirac_suite(&p, mono, &rhos, tol, 1e-2)?);
        }
        Command::Cone {
            l,
            c,
            m,
            rho_grid,
            b1,
            b4,
            sign,
        } => {
            let rhos = log_spec(rho_grid)?;
            let mono = ConeMonopole::new(*l, *c, *m)?;
            let mut t = Table::new("cone", &["rho", "r", "phi", "a1", "residual"]);
            for &rho in &rhos {
                let (k, conn, higgs) = mono.fields(rho)?;
                let res = mono.residuals(rho)?.max();
                t.push_numbers(&[rho, k.radius(), higgs.phi.value, conn.a[0].value, res]);
            }
            tables.push(t);
            report.extend(suites::cone_suite(mono, &rhos, tol, 1e-2)?);
            if let (Some(b1), Some(b4)) = (b1, b4) {
                let (lo, hi) = (rhos[0], rhos[rhos.len() - 1]);
                let tr = cone_hym_irreducible(*b1, *b4, lo, hi, *sign, &config.step_control())?;
                let mut it = Table::new("cone_irreducible", &["rho", "b1", "b4", "residual"]);
                let mut worst: f64 = 0.0;
                for &rho in &rhos {
                    let y = tr
                        .eval(rho.min(tr.trajectory.end()))
                        .unwrap_or([f64::NAN; 2]);
                    let res = tr.residuals(rho.min(tr.trajectory.end()))?.max();
                    worst = worst.max(res);
                    it.push_numbers(&[rho, y[0], y[1], res]);
                }
                tables.push(it);
                report.push(
                    Check::at_most("cone_irreducible_residual", worst, tol).with("sign", *sign),
                );
                report.note(
                    Check::holds("cone_irreducible_decays", tr.decays())
                        .with("b4_end", tr.b4_end()),
                );
            }
        }
        Command::Hym { radii } => {
            if eps == 0.0 {
                return Err(CliError::Usage("hym needs epsilon > 0".into()));
            }
            let radii = if radii.is_empty() {
                default_radii(eps)
            } else {
                radii.clone()
            };
            let params = GeometryParams::new(eps)?;
            let mut t = Table::new(
                "hym",
                &[
                    "r",
                    "rho",
                    "theta45",
                    "curvature_defect",
                    "lambda",
                    "f20",
                    "f11_defect",
                    "monopole",
                    "deviation",
                ],
            );
            for &r in &radii {
                let h = hym_stenzel(r, params)?;
                t.push_numbers(&[
                    h.r,
                    h.rho,
                    h.theta45,
                    h.curvature_defect,
                    h.lambda,
                    h.f20,
                    h.f11_defect,
                    h.monopole,
                    h.deviation,
                ]);
            }
            tables.push(t);
            report.extend(suites::hym_suite(eps, &radii, tol)?);
        }
        Command::Bubble { .. } => {
            let p = need_stenzel(config)?;
            let b = &config.bubble;
            let opts = BubbleOptions {
                radius: b.radius,
                annulus: (b.annulus[0], b.annulus[1]),
                samples: config.grid.samples,
                shoot: config.shoot_options(),
                ..BubbleOptions::default()
            };
            let rep = suites::bubble_report(&b.lambdas, &p, &opts)?;
            let mut t = Table::new(
                "bubble",
                &[
                    "lambda",
                    "alpha",
                    "mass",
                    "eta",
                    "bps_error",
                    "eta_best",
                    "bps_error_best",
                    "dirac_error",
                    "dirac_derivative_error",
                    "a_inner",
                ],
            );
            for r in &rep.rows {
                t.push_numbers(&[
                    r.lambda,
                    r.alpha,
                    r.mass.abs(),
                    r.eta,
                    r.bps_error,
                    r.eta_best,
                    r.bps_error_best,
                    r.dirac_error,
                    r.dirac_derivative_error,
                    r.a_inner,
                ]);
            }
            tables.push(t);
            report.extend(suites::bubble_checks(&rep, &opts, 1e-7)?);
            if let Some(th) = rep.threshold {
                report.note(Check::at_most("decrease_threshold", th, f64::INFINITY));
            }
        }
    }
    Ok(Outcome { report, tables })
}

/// The report written when a run aborts with an error other than a usage
/// error.
pub fn error_report(command: &str, err: &CliError) -> Report {
    let mut r = Report::new(command);
    r.push(Check::holds("run_completed", false).with("error", err.to_string()));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("cymono").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "epsilon = 2.0\nrho0 = 0.001\n[tolerances]\nrtol = 1e-9\n",
        )
        .unwrap();
        let cli = parse(&[
            "--config",
            path.to_str().unwrap(),
            "--epsilon",
            "1.5",
            "moduli",
            "--alpha-grid",
            "-2:-1:3",
        ]);
        let c = resolve_config(&cli).unwrap();
        assert_eq!(c.epsilon, Some(1.5));
        assert_eq!(c.rho0, Some(1e-3));
        assert_eq!(c.tolerances.rtol, 1e-9);
        assert_eq!(c.moduli.alpha_grid, "-2:-1:3");
    }

    #[test]
    fn missing_epsilon_is_a_usage_error() {
        let e = run(&parse(&["hym"]), Some(1)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&parse(&["--epsilon", "0", "shoot", "--mass", "1"]), Some(1)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(
            &parse(&["--epsilon", "1", "bubble", "--annulus", "3:1"]),
            Some(1),
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn bubble_flags() {
        let cli = parse(&[
            "--epsilon",
            "1",
            "bubble",
            "--lambdas",
            "2,4",
            "--R",
            "2.5",
            "--annulus",
            "1:2",
        ]);
        let c = resolve_config(&cli).unwrap();
        assert_eq!(c.bubble.lambdas, vec![2.0, 4.0]);
        assert_eq!(c.bubble.radius, 2.5);
        assert_eq!(c.bubble.annulus, [1.0, 2.0]);
    }

    #[test]
    fn hym_outcome() {
        let out = run(
            &parse(&["--epsilon", "1", "hym", "--radii", "1.01,2,10"]),
            Some(2),
        )
        .unwrap();
        assert!(out.report.pass);
        assert_eq!(out.tables[0].rows.len(), 3);
    }

    #[test]
    fn geometry_keeps_the_literal_sign_as_a_note() {
        let out = run(
            &parse(&["--epsilon", "1", "geometry", "--points", "20"]),
            Some(2),
        )
        .unwrap();
        assert!(out.report.pass, "{}", out.report.to_json());
        assert_eq!(out.report.notes[0].check, "volume_identity_literal");
        assert!(!out.report.notes[0].pass);
        assert_eq!(
            out.tables[0].header,
            ["r", "t", "rho", "Fprime", "G", "Gdot", "h2", "Rplus", "Rminus"]
        );
    }

    #[test]
    fn cone_geometry() {
        let out = run(
            &parse(&["--epsilon", "0", "geometry", "--points", "10"]),
            Some(1),
        )
        .unwrap();
        assert!(out.report.pass, "{}", out.report.to_json());
    }
}
