//! Dirac monopoles: `A = A_c^l + (C / G^2) theta1 T1`, `Phi = phi T1` with
//! `phi = m + l int_rho^inf 1/(2h^2)`, singular along the zero section.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::Background;
use crate::error::{Error, Result};
use crate::fit::{self, LineFit};
use crate::invariant_fields::{
    monopole_residuals, HiggsField, InvariantConnection, MonopoleResiduals,
};
use crate::jet::Jet;
use crate::lie_coframe::ScalarForm;
use crate::monopole_ode::FullState;
use crate::stenzel_geometry::{KahlerData, RadialJets, WarpProfile};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiracMonopole {
    pub l: i32,
    pub m: f64,
    pub c: f64,
}

/// `phi(rho)`, normalized so that `phi -> m` at infinity.
pub fn dirac_higgs<P: WarpProfile + ?Sized>(l: i32, m: f64, rho: f64, profile: &P) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "Dirac Higgs field",
            value: rho,
        });
    }
    if l == 0 {
        return Ok(m);
    }
    Ok(m + f64::from(l) * profile.tail_integral(rho)?)
}

/// `d phi / dr = -l eps^2 r / (4 R_+ R_- G^2)` as a jet in `r`.
pub fn dirac_gradient(l: i32, j: &RadialJets, epsilon: f64) -> Jet {
    j.r * (-f64::from(l) * epsilon * epsilon / 4.0) / (j.rprm * j.g * j.g)
}

impl DiracMonopole {
    pub fn new(l: i32, m: f64, c: f64) -> Self {
        DiracMonopole { l, m, c }
    }

    /// Geometry and fields at `rho`.
    pub fn fields(
        &self,
        bg: &Background,
        rho: f64,
    ) -> Result<(KahlerData, InvariantConnection, HiggsField)> {
        let k = bg.kahler_at_rho(rho)?;
        let r = k.radius();
        let phi = dirac_higgs(self.l, self.m, rho, bg.warp())?;
        let dphi = dirac_gradient(self.l, &k.jets, bg.warp().epsilon()).value;
        let a1 = Jet::constant(self.c) / (k.jets.g * k.jets.g);
        let conn =
            InvariantConnection::new(self.l, [a1, Jet::ZERO, Jet::ZERO, Jet::ZERO, Jet::ZERO], r)?;
        Ok((k, conn, HiggsField::new(Jet::new(phi, dphi), r)))
    }

    pub fn residuals(&self, bg: &Background, rho: f64) -> Result<MonopoleResiduals> {
        let (k, conn, higgs) = self.fields(bg, rho)?;
        monopole_residuals(&conn, &higgs, &k)
    }
}

/// Largest `|* d * d phi|` over `rhos`, in the orthonormal coframe.
pub fn dirac_harmonicity(l: i32, bg: &Background, rhos: &[f64]) -> Result<f64> {
    let eps = bg.warp().epsilon();
    let mut worst: f64 = 0.0;
    for &rho in rhos {
        if !(rho > 0.0) {
            return Err(Error::Domain {
                what: "Dirac harmonicity grid",
                value: rho,
            });
        }
        let k = bg.kahler_at_rho(rho)?;
        let dphi = ScalarForm::term(&[0], dirac_gradient(l, &k.jets, eps));
        let lap = k.metric.hodge_star(&dphi)?.d();
        worst = worst.max(k.metric.orthonormal_max(&lap));
    }
    Ok(worst)
}

/// Power-law fit of `phi - m` on `points` log-spaced radii in `[lo, hi]`.
pub fn dirac_fit<P: WarpProfile + ?Sized>(
    l: i32,
    profile: &P,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<LineFit> {
    let xs = fit::log_grid(lo, hi, points);
    let ys = xs
        .iter()
        .map(|&rho| dirac_higgs(l, 0.0, rho, profile))
        .collect::<Result<Vec<_>>>()?;
    fit::power_law(&xs, &ys)
}

/// The `l = 1` Dirac monopole with mass `m` as an ODE state and its derivative.
pub fn dirac_state<P: WarpProfile + ?Sized>(
    m: f64,
    rho: f64,
    profile: &P,
) -> Result<(FullState, FullState)> {
    let phi = dirac_higgs(1, m, rho, profile)?;
    let state = FullState {
        phi,
        ..FullState::default()
    };
    let deriv = FullState {
        phi: -0.5 / profile.h2(rho),
        ..FullState::default()
    };
    Ok((state, deriv))
}
