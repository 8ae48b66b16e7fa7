//! Closed-form solution families and the extension analysis at the zero
//! section.
//!
//! * Dirac monopoles `A_c^l + (C / G^2) theta1 T1`, `phi` harmonic,
//! * cone monopoles `A_c^l + C rho^-4 theta1 T1`, `Phi = m T1`, and the
//!   irreducible `m = 0` cone branch,
//! * the irreducible HYM connection on the Stenzel metric,
//! * the curvature components `I1..I8` and exponent fits near `rho = 0`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::stenzel_geometry::{
    assemble_kahler_data, ConeProfile, GeometryParams, GeometryProfile, KahlerData, WarpProfile,
};

mod cone;
mod dirac;
mod extension;
mod hym;

pub use cone::{cone_hym_irreducible, cone_r_of_rho, ConeHymTrajectory, ConeMonopole};
pub use dirac::{
    dirac_fit, dirac_gradient, dirac_harmonicity, dirac_higgs, dirac_state, DiracMonopole,
};
pub use extension::{
    components_at, curvature_components, extension_fit, rigidity_harness, rigidity_seed,
    CurvatureVerdict, ExponentFit, ExtensionReport, FIT_TOLERANCE,
};
pub use hym::{hym_connection, hym_displayed_curvature, hym_state, hym_stenzel, HymReport};

/// The ambient geometry of a closed-form family.
#[derive(Clone, Copy, Debug)]
pub enum Background<'a> {
    Stenzel(&'a GeometryProfile),
    /// The conifold; `h^2` is normalized with the profile's `epsilon`.
    Cone(ConeProfile),
}

impl Background<'_> {
    pub fn warp(&self) -> &dyn WarpProfile {
        match self {
            Background::Stenzel(p) => *p,
            Background::Cone(c) => c,
        }
    }

    pub fn params(&self) -> GeometryParams {
        match self {
            Background::Stenzel(p) => p.params(),
            Background::Cone(_) => GeometryParams::cone(),
        }
    }

    pub fn r_of_rho(&self, rho: f64) -> Result<f64> {
        match self {
            Background::Stenzel(p) => p.r_of_rho(rho),
            Background::Cone(_) => Ok(cone_r_of_rho(rho)),
        }
    }

    pub fn kahler_at_rho(&self, rho: f64) -> Result<KahlerData> {
        assemble_kahler_data(self.r_of_rho(rho)?, self.params())
    }
}
