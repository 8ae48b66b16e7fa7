//! Monopoles and HYM connections on the conifold, where `G = rho^2 / 3`,
//! `R_+ = R_- = r / sqrt 2` and `rho = (3r/2)^(2/3)`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::invariant_fields::{
    monopole_residuals, HiggsField, InvariantConnection, MonopoleResiduals,
};
use crate::jet::Jet;
use crate::monopole_ode::{integrate, StepControl, Trajectory};
use crate::stenzel_geometry::{assemble_kahler_data, GeometryParams, KahlerData};

/// Magnitude at which the cone HYM integration is declared to blow up.
const BLOW_UP: f64 = 1e8;

/// `r = (2/3) rho^(3/2)`.
pub fn cone_r_of_rho(rho: f64) -> f64 {
    2.0 / 3.0 * rho.powf(1.5)
}

fn cone_data(rho: f64) -> Result<KahlerData> {
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "cone rho",
            value: rho,
        });
    }
    assemble_kahler_data(cone_r_of_rho(rho), GeometryParams::cone())
}

/// `rho` as a jet in `r`.
fn rho_jet(k: &KahlerData) -> Jet {
    (k.jets.r * 1.5).powf(2.0 / 3.0)
}

/// `A = A_c^l + C rho^-4 theta1 T1`, `Phi = m T1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeMonopole {
    pub l: i32,
    pub c: f64,
    pub m: f64,
}

impl ConeMonopole {
    pub fn new(l: i32, c: f64, m: f64) -> Result<Self> {
        if m == 0.0 || !m.is_finite() {
            return Err(Error::InvalidParameter {
                name: "m",
                value: m,
            });
        }
        Ok(ConeMonopole { l, c, m })
    }

    pub fn fields(&self, rho: f64) -> Result<(KahlerData, InvariantConnection, HiggsField)> {
        let k = cone_data(rho)?;
        let a1 = rho_jet(&k).powi(-4) * self.c;
        let conn = InvariantConnection::new(
            self.l,
            [a1, Jet::ZERO, Jet::ZERO, Jet::ZERO, Jet::ZERO],
            k.radius(),
        )?;
        let higgs = HiggsField::new(Jet::constant(self.m), k.radius());
        Ok((k, conn, higgs))
    }

    pub fn residuals(&self, rho: f64) -> Result<MonopoleResiduals> {
        let (k, conn, higgs) = self.fields(rho)?;
        monopole_residuals(&conn, &higgs, &k)
    }

    /// `|A - A_c^l|` in the cone metric, `|C| rho^-4 / |theta1|`.
    pub fn deviation_norm(&self, rho: f64) -> Result<f64> {
        let k = cone_data(rho)?;
        Ok(self.c.abs() * rho.powi(-4) / k.metric.scales()[1].value)
    }
}

/// A solution of the `m = 0`, `B3 = s B4` cone system
/// `B1' = 18 s B4^2`, `B4' = 3 s B1 B4 / rho^5`, with `B1 = rho^4 A1` and
/// `B3,4 = r A3,4`.
#[derive(Clone, Debug)]
pub struct ConeHymTrajectory {
    /// The branch `s = +-1`.
    pub sign: f64,
    /// `(B1, B4)`.
    pub trajectory: Trajectory<2>,
}

fn cone_rhs(sign: f64, rho: f64, y: &[f64; 2]) -> [f64; 2] {
    let [b1, b4] = *y;
    [18.0 * sign * b4 * b4, 3.0 * sign * b1 * b4 / rho.powi(5)]
}

/// Integrate the cone HYM system from `(b1_0, b4_0)` at `rho0` to `rho_end`.
pub fn cone_hym_irreducible(
    b1_0: f64,
    b4_0: f64,
    rho0: f64,
    rho_end: f64,
    sign: f64,
    control: &StepControl,
) -> Result<ConeHymTrajectory> {
    if sign.abs() != 1.0 {
        return Err(Error::InvalidParameter {
            name: "sign",
            value: sign,
        });
    }
    if !(rho0 > 0.0 && rho_end > rho0) {
        return Err(Error::Domain {
            what: "rho0",
            value: rho0,
        });
    }
    let tr = integrate(
        |rho, y: &[f64; 2]| Ok(cone_rhs(sign, rho, y)),
        rho0,
        [b1_0, b4_0],
        rho_end,
        control,
        |_, y| y.iter().any(|v| v.abs() > BLOW_UP),
    )
    .map_err(|e| match e {
        Error::StepUnderflow { x, .. } | Error::NonFinite { x } => Error::BlowUp { rho: x },
        other => other,
    })?;
    if tr.stopped() {
        return Err(Error::BlowUp { rho: tr.end() });
    }
    Ok(ConeHymTrajectory {
        sign,
        trajectory: tr,
    })
}

impl ConeHymTrajectory {
    /// `(B1, B4)` at `rho`.
    pub fn eval(&self, rho: f64) -> Option<[f64; 2]> {
        self.trajectory.eval(rho)
    }

    pub fn b4_start(&self) -> f64 {
        self.trajectory.states()[0][1]
    }

    pub fn b4_end(&self) -> f64 {
        self.trajectory.last()[1]
    }

    /// Whether `|B4|` ends below its initial value.
    pub fn decays(&self) -> bool {
        self.b4_end().abs() < self.b4_start().abs()
    }

    /// Geometry and fields at `rho`, with `A'` taken from the equations.
    pub fn fields(&self, rho: f64) -> Result<(KahlerData, InvariantConnection, HiggsField)> {
        let y = self.eval(rho).ok_or(Error::Domain {
            what: "cone trajectory",
            value: rho,
        })?;
        let d = cone_rhs(self.sign, rho, &y);
        let k = cone_data(rho)?;
        let rho_r = k.point.r / (2.0 * k.point.g);
        let b1 = Jet::new(y[0], d[0] * rho_r);
        let b4 = Jet::new(y[1], d[1] * rho_r);
        let a1 = b1 * rho_jet(&k).powi(-4);
        let a4 = b4 / k.jets.r;
        let conn = InvariantConnection::new(
            1,
            [a1, Jet::ZERO, a4 * self.sign, a4, Jet::ZERO],
            k.radius(),
        )?;
        let higgs = HiggsField::new(Jet::ZERO, k.radius());
        Ok((k, conn, higgs))
    }

    /// Monopole residuals of the connection at `rho` with `Phi = 0`.
    pub fn residuals(&self, rho: f64) -> Result<MonopoleResiduals> {
        let (k, conn, higgs) = self.fields(rho)?;
        monopole_residuals(&conn, &higgs, &k)
    }
}
