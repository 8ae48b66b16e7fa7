//! Run configuration, read from TOML and overridden by flags.

use std::path::{Path, PathBuf};

use cymono_core::monopole_ode::{ShootOptions, StepControl};
use cymono_core::stenzel_geometry::ProfileGrid;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Deformation parameter; required. `0` selects the cone where allowed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub moduli: ModuliSection,
    #[serde(default)]
    pub bubble: BubbleSection,
}

fn default_output() -> PathBuf {
    PathBuf::from("cymono-out")
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            epsilon: None,
            rho0: None,
            rho_max: None,
            output_dir: default_output(),
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            geometry: GeometrySection::default(),
            moduli: ModuliSection::default(),
            bubble: BubbleSection::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Stenzel table range and spacing in the parameter `t`.
    pub t_max: f64,
    pub dt: f64,
    pub refine: usize,
    /// Sample count for sup-norms and CSV profiles.
    pub samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = ProfileGrid::default();
        GridConfig {
            t_max: g.t_max,
            dt: g.dt,
            refine: g.refine,
            samples: 400,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Bisection accuracy of the mass.
    pub mass: f64,
    /// Bound on monopole equation residuals.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let c = StepControl::default();
        Tolerances {
            rtol: c.rtol,
            atol: c.atol,
            mass: ShootOptions::default().mass_tol,
            residual: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    /// Largest radius in the geometry table, in units of `epsilon`.
    pub r_max: f64,
    pub points: usize,
}

impl Default for GeometrySection {
    fn default() -> Self {
        GeometrySection {
            r_max: 20.0,
            points: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModuliSection {
    /// `lo:hi:n`, linearly spaced.
    pub alpha_grid: String,
}

impl Default for ModuliSection {
    fn default() -> Self {
        ModuliSection {
            alpha_grid: "-5:-0.1:20".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BubbleSection {
    pub lambdas: Vec<f64>,
    pub radius: f64,
    pub annulus: [f64; 2],
}

impl Default for BubbleSection {
    fn default() -> Self {
        BubbleSection {
            lambdas: vec![2.0, 4.0, 8.0, 16.0],
            radius: 3.0,
            annulus: [1.0, 3.0],
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    /// The required `epsilon`.
    pub fn epsilon(&self) -> CliResult<f64> {
        self.epsilon.ok_or_else(|| {
            CliError::Usage(
                "epsilon is required (--epsilon or `epsilon = ...` in the config)".into(),
            )
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        let eps = self.epsilon()?;
        if !(eps.is_finite() && eps >= 0.0) {
            return usage(format!("epsilon must be finite and >= 0, got {eps}"));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("rtol", t.rtol),
            ("atol", t.atol),
            ("mass", t.mass),
            ("residual", t.residual),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return usage(format!("tolerance {name} must be > 0, got {v}"));
            }
        }
        for (name, v) in [("rho0", self.rho0), ("rho_max", self.rho_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return usage(format!("{name} must be > 0, got {v}"));
                }
            }
        }
        if let (Some(a), Some(b)) = (self.rho0, self.rho_max) {
            if !(a < b) {
                return usage(format!("rho0 ({a}) must be below rho_max ({b})"));
            }
        }
        let g = &self.grid;
        if !(g.t_max > 0.0 && g.dt > 0.0 && g.dt < g.t_max) || g.samples < 2 {
            return usage("grid needs 0 < dt < t_max and samples >= 2".into());
        }
        if !(self.geometry.r_max > 1.0) || self.geometry.points < 2 {
            return usage("geometry needs r_max > 1 and points >= 2".into());
        }
        parse_grid(&self.moduli.alpha_grid)?;
        let b = &self.bubble;
        if b.lambdas.is_empty() || b.lambdas.iter().any(|l| !(*l > 0.0)) {
            return usage("bubble lambdas must be positive".into());
        }
        if !(b.radius > 0.0 && 0.0 < b.annulus[0] && b.annulus[0] < b.annulus[1]) {
            return usage("bubble needs radius > 0 and 0 < annulus lo < hi".into());
        }
        Ok(())
    }

    pub fn profile_grid(&self) -> ProfileGrid {
        ProfileGrid {
            t_max: self.grid.t_max,
            dt: self.grid.dt,
            refine: self.grid.refine,
        }
    }

    pub fn step_control(&self) -> StepControl {
        StepControl::with_tol(self.tolerances.rtol, self.tolerances.atol)
    }

    pub fn shoot_options(&self) -> ShootOptions {
        ShootOptions {
            rho0: self.rho0,
            rho_max: self.rho_max,
            control: self.step_control(),
            mass_tol: self.tolerances.mass,
        }
    }
}

fn usage<T>(msg: String) -> CliResult<T> {
    Err(CliError::Usage(msg))
}

/// Parses `lo:hi:n` into `n` linearly spaced values.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("expected lo:hi:n, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite()) || n == 0 || (n > 1 && lo == hi) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

/// Parses `lo:hi` into a pair.
pub fn parse_range(spec: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Usage(format!("expected lo:hi, got `{spec}`"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn valid() -> RunConfig {
        RunConfig {
            epsilon: Some(1.0),
            ..Default::default()
        }
    }

    #[test]
    fn defaults_validate_once_epsilon_is_set() {
        assert!(matches!(
            RunConfig::default().validate(),
            Err(CliError::Usage(_))
        ));
        valid().validate().unwrap();
    }

    #[test]
    fn invalid_values_are_usage_errors() {
        let mut c = valid();
        c.tolerances.rtol = 0.0;
        assert!(c.validate().is_err());
        let mut c = valid();
        c.rho0 = Some(2.0);
        c.rho_max = Some(1.0);
        assert!(c.validate().is_err());
        let mut c = valid();
        c.moduli.alpha_grid = "-5:-1".into();
        assert!(c.validate().is_err());
        assert!(RunConfig::from_toml("epsilon = 1.0\nbogus = 2").is_err());
    }

    #[test]
    fn partial_file() {
        let c = RunConfig::from_toml("epsilon = 0.5\n[tolerances]\nrtol = 1e-9\n").unwrap();
        assert_eq!(c.epsilon, Some(0.5));
        assert_eq!(c.tolerances.rtol, 1e-9);
        assert_eq!(c.tolerances.atol, Tolerances::default().atol);
        assert_eq!(c.bubble, BubbleSection::default());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("-5:-0.1:20").unwrap().len(), 20);
        assert_eq!(parse_grid("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_grid("1:1:3").is_err());
        assert!(parse_grid("1:x:3").is_err());
        assert_eq!(parse_range("1:3").unwrap(), (1.0, 3.0));
        assert!(parse_range("3:1").is_err());
    }

    proptest! {
        #[test]
        fn toml_round_trip_is_lossless(
            eps in 0.0f64..10.0,
            rho0 in proptest::option::of(1e-6f64..1.0),
            rtol in 1e-14f64..1e-3,
            residual in 1e-14f64..1.0,
            lambdas in proptest::collection::vec(0.1f64..100.0, 1..6),
            radius in 0.1f64..10.0,
            samples in 2usize..10_000,
        ) {
            let mut c = valid();
            c.epsilon = Some(eps);
            c.rho0 = rho0;
            c.rho_max = rho0.map(|r| r * 1e3);
            c.tolerances.rtol = rtol;
            c.tolerances.residual = residual;
            c.grid.samples = samples;
            c.bubble.lambdas = lambdas;
            c.bubble.radius = radius;
            c.output_dir = PathBuf::from(format!("out-{samples}"));
            let back = RunConfig::from_toml(&c.to_toml()).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert!(back.validate().is_ok());
        }
    }
}
