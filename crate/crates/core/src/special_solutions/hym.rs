//! The irreducible HYM connection `A = A_c^1 + (eps / 2R_+)(theta4 T2 + theta5 T3)`
//! on the Stenzel metric: the fixed point `a = 1`, `phi = 0` of the reduced
//! system.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::invariant_fields::{monopole_residuals, project_11, HiggsField, InvariantConnection};
use crate::jet::Jet;
use crate::lie_coframe::{curvature, LieForm};
use crate::monopole_ode::FullState;
use crate::stenzel_geometry::{assemble_kahler_data, GeometryParams, KahlerData};
use crate::su2::Su2;

pub fn hym_connection(k: &KahlerData, epsilon: f64) -> InvariantConnection {
    let a4 = Jet::constant(epsilon / 2.0) / k.jets.rplus;
    InvariantConnection {
        l: 1,
        a: [Jet::ZERO, Jet::ZERO, Jet::ZERO, a4, Jet::ZERO],
        radius: k.radius(),
    }
}

/// `-(1/2)(theta23 + (R_-/R_+)^2 theta45) T1 + (eps/2R_+)(T2 theta12 + T3 theta13)
///  - (eps r / 4R_+^3)(T2 dr theta4 + T3 dr theta5)`.
pub fn hym_displayed_curvature(k: &KahlerData, epsilon: f64) -> LieForm {
    let j = &k.jets;
    let ratio = j.rminus / j.rplus;
    let a4 = Jet::constant(epsilon / 2.0) / j.rplus;
    let da4 = -(j.r * (epsilon / 4.0) / j.rplus.powi(3));
    let terms: [(&[usize], Su2<Jet>); 6] = [
        (&[2, 3], Su2::along(1, Jet::constant(-0.5))),
        (&[4, 5], Su2::along(1, ratio * ratio * -0.5)),
        (&[1, 2], Su2::along(2, a4)),
        (&[1, 3], Su2::along(3, a4)),
        (&[0, 4], Su2::along(2, da4)),
        (&[0, 5], Su2::along(3, da4)),
    ];
    let mut f = LieForm::zero(2);
    for (w, x) in terms {
        f.add_term(w, x);
    }
    f
}

/// The HYM solution as an ODE state, `B4 = eps/2`, and its zero derivative.
pub fn hym_state(epsilon: f64) -> (FullState, FullState) {
    let s = FullState {
        b4: epsilon / 2.0,
        ..FullState::default()
    };
    (s, FullState::default())
}

/// Checks of the HYM connection at one radius, as orthonormal maxima.
#[derive(Clone, Debug)]
pub struct HymReport {
    pub r: f64,
    pub rho: f64,
    /// Engine curvature minus the displayed formula.
    pub curvature_defect: f64,
    /// `Lambda F`.
    pub lambda: f64,
    /// `F^{2,0} + F^{0,2}`.
    pub f20: f64,
    /// `F - F^{1,1}`.
    pub f11_defect: f64,
    /// Largest monopole residual with `Phi = 0`.
    pub monopole: f64,
    /// `theta45 T1` coefficient of the curvature.
    pub theta45: f64,
    /// `|A - A_c^1|`.
    pub deviation: f64,
}

impl HymReport {
    pub fn max_residual(&self) -> f64 {
        self.curvature_defect
            .max(self.lambda)
            .max(self.f20)
            .max(self.f11_defect)
            .max(self.monopole)
    }
}

pub fn hym_stenzel(r: f64, params: GeometryParams) -> Result<HymReport> {
    if params.is_cone() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: params.epsilon,
        });
    }
    let eps = params.epsilon;
    let k = assemble_kahler_data(r, params)?;
    let conn = hym_connection(&k, eps);
    let f = curvature(&conn.form())?;
    let shown = hym_displayed_curvature(&k, eps);
    let m = &k.metric;
    let (f20, f11) = project_11(&f, &k)?;
    let res = monopole_residuals(&conn, &HiggsField::new(Jet::ZERO, k.radius()), &k)?;
    Ok(HymReport {
        r,
        rho: k.point.rho,
        curvature_defect: m.orthonormal_max(&(&f - &shown)),
        lambda: m.lambda(&f, &k.omega)?.max_abs(),
        f20: m.orthonormal_max(&f20),
        f11_defect: m.orthonormal_max(&(&f - &f11)),
        monopole: res.max(),
        theta45: f.coefficient(&[4, 5]).c1.value,
        deviation: m.orthonormal_max(&conn.deviation()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant_fields::closed_form_curvature;
    use crate::monopole_ode::full_rhs;
    use crate::stenzel_geometry::{GeometryProfile, ProfileGrid};

    #[test]
    fn hym_on_stenzel() {
        for eps in [0.5, 1.0, 2.0] {
            let p = GeometryParams::new(eps).unwrap();
            for x in [1.0001, 1.1, 2.0, 10.0, 300.0] {
                let rep = hym_stenzel(eps * x, p).unwrap();
                assert!(
                    rep.max_residual() <= 1e-9,
                    "eps {eps} r {}: {rep:?}",
                    eps * x
                );
                let k = assemble_kahler_data(eps * x, p).unwrap();
                let (rp, rm) = (k.point.rplus, k.point.rminus);
                assert!((rep.theta45 + rm * rm / (2.0 * rp * rp)).abs() < 1e-14);
            }
        }
        assert!(hym_stenzel(1.0, GeometryParams::cone()).is_err());
    }

    #[test]
    fn display_matches_closed_form() {
        let p = GeometryParams::default();
        let k = assemble_kahler_data(1.7, p).unwrap();
        let conn = hym_connection(&k, 1.0);
        let d = &closed_form_curvature(&conn) - &hym_displayed_curvature(&k, 1.0);
        assert!(d.max_abs() < 1e-14);
    }

    #[test]
    fn zero_section_and_infinity() {
        let p = GeometryParams::default();
        let near = hym_stenzel(1.0 + 1e-10, p).unwrap();
        assert!(near.theta45.abs() < 1e-9);
        let devs: alloc::vec::Vec<f64> = [2.0, 20.0, 200.0, 2000.0]
            .iter()
            .map(|&r| hym_stenzel(r, p).unwrap().deviation)
            .collect();
        assert!(devs.windows(2).all(|w| w[1] < w[0]));
        assert!(devs[3] < 1e-2);
    }

    #[test]
    fn state_is_a_fixed_point() {
        let g = GeometryProfile::build(GeometryParams::new(1.5).unwrap(), ProfileGrid::default())
            .unwrap();
        let (s, d) = hym_state(1.5);
        for rho in [0.01, 1.0, 50.0] {
            let rhs = full_rhs(rho, &s, &g).unwrap();
            let diff = rhs
                .to_array()
                .iter()
                .zip(d.to_array())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(diff < 1e-15 / (rho * rho));
        }
    }
}
