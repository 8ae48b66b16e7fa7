//! Radial ODE systems for invariant monopoles in the rescaled fields
//! `B1 = G^2 A1`, `B2,3 = R_- A2,3`, `B4,5 = R_+ A4,5`.
//!
//! Three equivalent forms are provided: the six real equations, the
//! complexified form with `f1 = B2 + i B3`, `f2 = B4 + i B5`, and the reduced
//! `(a, phi)` system on the slice `B1 = B2 = B3 = B5 = 0`, `B4 = (eps/2) a`.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::invariant_fields::{HiggsField, InvariantConnection};
use crate::jet::Jet;
use crate::stenzel_geometry::{KahlerData, WarpProfile};

pub mod integrator;
pub mod seed;
pub mod shooting;

pub use integrator::{integrate, StepControl, Trajectory};

pub use seed::{series_recurrence, series_seed, SeedSeries};
pub use shooting::{
    check_monotone, default_rho0, extract_mass, mass_at, mass_sweep, shoot_for_mass, solve_reduced,
    MassEstimate, ShootOptions, ShootResult, SolutionProfile, DECAY_BOUND,
};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ReducedState {
    pub a: f64,
    pub phi: f64,
}

impl ReducedState {
    pub const FIXED_POINT: ReducedState = ReducedState { a: 1.0, phi: 0.0 };

    pub fn to_array(self) -> [f64; 2] {
        [self.a, self.phi]
    }

    pub fn from_array(y: [f64; 2]) -> Self {
        ReducedState { a: y[0], phi: y[1] }
    }

    /// The full state on the reduced slice.
    pub fn embed(self, epsilon: f64) -> FullState {
        FullState {
            phi: self.phi,
            b4: 0.5 * epsilon * self.a,
            ..FullState::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FullState {
    pub phi: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
}

impl FullState {
    pub fn to_array(self) -> [f64; 6] {
        [self.phi, self.b1, self.b2, self.b3, self.b4, self.b5]
    }

    pub fn from_array(y: [f64; 6]) -> Self {
        FullState {
            phi: y[0],
            b1: y[1],
            b2: y[2],
            b3: y[3],
            b4: y[4],
            b5: y[5],
        }
    }

    /// `B2 B4 + B3 B5`, which must vanish.
    pub fn constraint(&self) -> f64 {
        self.b2 * self.b4 + self.b3 * self.b5
    }

    pub fn to_complex(self) -> ComplexState {
        ComplexState {
            phi: self.phi,
            b1: self.b1,
            f1: Complex64::new(self.b2, self.b3),
            f2: Complex64::new(self.b4, self.b5),
        }
    }

    /// The `l = 1` connection and Higgs field at the radius of `k`, given the
    /// state and its `rho`-derivative.
    pub fn fields(&self, deriv: &FullState, k: &KahlerData) -> (InvariantConnection, HiggsField) {
        let j = &k.jets;
        let rho_r = k.point.r / (2.0 * k.point.g);
        let jet = |v: f64, d: f64| Jet::new(v, d * rho_r);
        let a = [
            jet(self.b1, deriv.b1) / (j.g * j.g),
            jet(self.b2, deriv.b2) / j.rminus,
            jet(self.b3, deriv.b3) / j.rminus,
            jet(self.b4, deriv.b4) / j.rplus,
            jet(self.b5, deriv.b5) / j.rplus,
        ];
        let conn = InvariantConnection {
            l: 1,
            a,
            radius: k.radius(),
        };
        (conn, HiggsField::new(jet(self.phi, deriv.phi), k.radius()))
    }

    /// Rotate `(B2, B3)` and `(B4, B5)` together by `angle`, the residual
    /// constant gauge freedom.
    pub fn rotate(self, angle: f64) -> FullState {
        let z = Complex64::from_polar(1.0, angle);
        let c = self.to_complex();
        ComplexState {
            f1: c.f1 * z,
            f2: c.f2 * z,
            ..c
        }
        .to_full()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexState {
    pub phi: f64,
    pub b1: f64,
    pub f1: Complex64,
    pub f2: Complex64,
}

impl ComplexState {
    pub fn to_full(self) -> FullState {
        FullState {
            phi: self.phi,
            b1: self.b1,
            b2: self.f1.re,
            b3: self.f1.im,
            b4: self.f2.re,
            b5: self.f2.im,
        }
    }

    /// `Re(f1 conj f2)`, equal to the real constraint.
    pub fn constraint(&self) -> f64 {
        (self.f1 * self.f2.conj()).re
    }
}

/// `h^2(rho)` with the domain checks shared by all right-hand sides.
fn warp<P: WarpProfile + ?Sized>(rho: f64, profile: &P) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "rho",
            value: rho,
        });
    }
    let h2 = profile.h2(rho);
    if !(h2 > 0.0) {
        return Err(Error::Domain {
            what: "h^2",
            value: h2,
        });
    }
    Ok(h2)
}

pub fn full_rhs<P: WarpProfile + ?Sized>(
    rho: f64,
    s: &FullState,
    profile: &P,
) -> Result<FullState> {
    let h2 = warp(rho, profile)?;
    let eps2 = profile.epsilon().powi(2);
    let k = 2.0 / (eps2 * h2);
    let q = (s.b4 * s.b4 + s.b5 * s.b5) - (s.b2 * s.b2 + s.b3 * s.b3);
    Ok(FullState {
        phi: -(1.0 - 4.0 * q / eps2) / (2.0 * h2),
        b1: -4.0 * (s.b2 * s.b5 - s.b4 * s.b3),
        b2: -k * s.b1 * s.b5 - 2.0 * s.phi * s.b2,
        b3: k * s.b1 * s.b4 - 2.0 * s.phi * s.b3,
        b4: k * s.b1 * s.b3 + 2.0 * s.phi * s.b4,
        b5: -k * s.b1 * s.b2 + 2.0 * s.phi * s.b5,
    })
}

pub fn complex_rhs<P: WarpProfile + ?Sized>(
    rho: f64,
    s: &ComplexState,
    profile: &P,
) -> Result<ComplexState> {
    let h2 = warp(rho, profile)?;
    let eps2 = profile.epsilon().powi(2);
    let k = Complex64::new(0.0, 2.0 / (eps2 * h2));
    let q = s.f2.norm_sqr() - s.f1.norm_sqr();
    Ok(ComplexState {
        phi: -(1.0 - 4.0 * q / eps2) / (2.0 * h2),
        b1: 4.0 * (s.f1 * s.f2.conj()).im,
        f1: k * s.b1 * s.f2 - 2.0 * s.phi * s.f1,
        f2: -k * s.b1 * s.f1 + 2.0 * s.phi * s.f2,
    })
}

pub fn reduced_rhs<P: WarpProfile + ?Sized>(
    rho: f64,
    s: &ReducedState,
    profile: &P,
) -> Result<ReducedState> {
    let h2 = warp(rho, profile)?;
    Ok(ReducedState {
        a: 2.0 * s.phi * s.a,
        phi: -(1.0 - s.a * s.a) / (2.0 * h2),
    })
}

/// `x coth x`, accurate near zero.
fn x_coth_x(x: f64) -> f64 {
    if x.abs() < 0.05 {
        let x2 = x * x;
        1.0 + x2 * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 - x2 / 4725.0)))
    } else {
        x / x.tanh()
    }
}

/// The mass-`mu` solution of the reduced system with `h = rho`.
pub fn flat_oracle(mu: f64, rho: f64) -> ReducedState {
    let x = 2.0 * mu * rho;
    let a = if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else if x > 700.0 {
        0.0
    } else {
        x / x.sinh()
    };
    ReducedState {
        a,
        phi: (1.0 - x_coth_x(x)) / (2.0 * rho),
    }
}

/// Integrate the six real equations from `seed` at `rho0` to `rho1`,
/// stopping early once a component exceeds `bound` in magnitude.
pub fn solve_full<P: WarpProfile + ?Sized>(
    seed: FullState,
    rho0: f64,
    rho1: f64,
    bound: f64,
    profile: &P,
    control: &StepControl,
) -> Result<Trajectory<6>> {
    integrate(
        |rho, y: &[f64; 6]| {
            full_rhs(rho, &FullState::from_array(*y), profile).map(FullState::to_array)
        },
        rho0,
        seed.to_array(),
        rho1,
        control,
        |_, y| y.iter().any(|v| v.abs() > bound),
    )
}

/// Largest `|B2 B4 + B3 B5|` over the nodes of a full trajectory.
pub fn constraint_drift(tr: &Trajectory<6>) -> f64 {
    tr.max_over_nodes(|_, y| FullState::from_array(*y).constraint().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stenzel_geometry::{FlatProfile, GeometryParams, GeometryProfile, ProfileGrid};
    use proptest::prelude::*;

    fn stenzel() -> GeometryProfile {
        GeometryProfile::build(GeometryParams::new(1.3).unwrap(), ProfileGrid::default()).unwrap()
    }

    #[test]
    fn reduced_slice_of_full_system() {
        let p = stenzel();
        let eps = 1.3;
        let s = FullState {
            phi: -0.3,
            b4: 0.4,
            ..FullState::default()
        };
        let d = full_rhs(0.7, &s, &p).unwrap();
        let h2 = p.h2(0.7);
        assert_eq!(d.b4, 2.0 * s.phi * s.b4);
        assert!((d.phi + (1.0 - 4.0 / (eps * eps) * 0.16) / (2.0 * h2)).abs() < 1e-15);
        assert_eq!([d.b1, d.b2, d.b3, d.b5], [0.0; 4]);

        let r = ReducedState {
            a: 2.0 * 0.4 / eps,
            phi: -0.3,
        };
        let dr = reduced_rhs(0.7, &r, &p).unwrap();
        let de = full_rhs(0.7, &r.embed(eps), &p).unwrap();
        assert!((de.b4 - 0.5 * eps * dr.a).abs() < 1e-15);
        assert!((de.phi - dr.phi).abs() < 1e-15);
    }

    #[test]
    fn zero_state() {
        let p = stenzel();
        let d = full_rhs(2.0, &FullState::default(), &p).unwrap();
        assert_eq!(d.phi, -1.0 / (2.0 * p.h2(2.0)));
        assert_eq!([d.b1, d.b2, d.b3, d.b4, d.b5], [0.0; 5]);
        let c = complex_rhs(2.0, &ComplexState::default(), &p).unwrap();
        assert_eq!(c.b1, 0.0);
    }

    #[test]
    fn reduced_special_values() {
        let p = FlatProfile;
        assert_eq!(
            reduced_rhs(0.5, &ReducedState::FIXED_POINT, &p).unwrap(),
            ReducedState::default()
        );
        let d = reduced_rhs(0.5, &ReducedState { a: 0.0, phi: 0.3 }, &p).unwrap();
        assert_eq!(d.phi, -1.0 / (2.0 * 0.25));
        assert_eq!(d.a, 0.0);
    }

    #[test]
    fn nonpositive_rho_rejected() {
        let p = FlatProfile;
        assert!(full_rhs(0.0, &FullState::default(), &p).is_err());
        assert!(reduced_rhs(-1.0, &ReducedState::FIXED_POINT, &p).is_err());
    }

    #[test]
    fn flat_oracle_values() {
        let s = flat_oracle(1.0, 1.0);
        assert!((s.a - 0.551_441_129_543_566_4).abs() < 1e-15);
        assert!((s.phi - (0.5 - 1.0 / 2f64.tanh())).abs() < 1e-15);
        assert!((s.phi + 0.537_314_720_727_548).abs() < 1e-12);
        let s0 = flat_oracle(1.0, 1e-9);
        assert!((s0.a - 1.0).abs() < 1e-15 && s0.phi.abs() < 1e-8);
        let s_inf = flat_oracle(1.0, 400.0);
        assert!(s_inf.a == 0.0 && (s_inf.phi + 1.0 - 1.0 / 800.0).abs() < 1e-15);
        // Series and closed form agree at the switch.
        let x = 0.05;
        assert!((x_coth_x(x * (1.0 - 1e-12)) - x / x.tanh()).abs() < 1e-14);
    }

    #[test]
    fn flat_oracle_solves_reduced_system() {
        for mu in [0.5, 1.0, 2.0] {
            for rho in [0.1, 0.5, 1.0, 2.5] {
                let hstep = 1e-3 * rho;
                let p = flat_oracle(mu, rho + hstep);
                let m = flat_oracle(mu, rho - hstep);
                let p2 = flat_oracle(mu, rho + 2.0 * hstep);
                let m2 = flat_oracle(mu, rho - 2.0 * hstep);
                let da = (8.0 * (p.a - m.a) - (p2.a - m2.a)) / (12.0 * hstep);
                let dphi = (8.0 * (p.phi - m.phi) - (p2.phi - m2.phi)) / (12.0 * hstep);
                let d = reduced_rhs(rho, &flat_oracle(mu, rho), &FlatProfile).unwrap();
                assert!((d.a - da).abs() < 1e-10, "mu {mu} rho {rho}");
                assert!((d.phi - dphi).abs() < 1e-10, "mu {mu} rho {rho}");
            }
        }
    }

    #[test]
    fn real_complex_agreement_with_real_fields() {
        let p = stenzel();
        let s = FullState {
            phi: 0.2,
            b1: 0.3,
            b2: 0.5,
            b3: 0.0,
            b4: -0.1,
            b5: 0.0,
        };
        let d = full_rhs(1.1, &s, &p).unwrap();
        let c = complex_rhs(1.1, &s.to_complex(), &p).unwrap().to_full();
        for (x, y) in d.to_array().iter().zip(c.to_array()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(
            c.b1,
            4.0 * (s.to_complex().f1 * s.to_complex().f2.conj()).im
        );
    }

    proptest! {
        #[test]
        fn complex_matches_full(
            v in proptest::array::uniform6(-2.0f64..2.0),
            rho in 0.05f64..20.0,
        ) {
            let p = FlatProfile;
            let s = FullState::from_array(v);
            let d = full_rhs(rho, &s, &p).unwrap();
            let c = complex_rhs(rho, &s.to_complex(), &p).unwrap().to_full();
            for (x, y) in d.to_array().iter().zip(c.to_array()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }

        #[test]
        fn rhs_is_gauge_equivariant(
            v in proptest::array::uniform6(-2.0f64..2.0),
            angle in -3.2f64..3.2,
        ) {
            let p = FlatProfile;
            let s = FullState::from_array(v);
            let lhs = full_rhs(0.8, &s.rotate(angle), &p).unwrap();
            let rhs = full_rhs(0.8, &s, &p).unwrap().rotate(angle);
            for (x, y) in lhs.to_array().iter().zip(rhs.to_array()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
            prop_assert!((s.rotate(angle).constraint() - s.constraint()).abs() < 1e-12);
        }

        #[test]
        fn constraint_is_stationary_on_the_surface(
            r1 in 0.0f64..2.0, r2 in 0.0f64..2.0, chi in -3.2f64..3.2,
            phi in -1.0f64..1.0, b1 in -1.0f64..1.0, flip in proptest::bool::ANY,
        ) {
            // f1 = +-i r1 e^{i chi}, f2 = r2 e^{i chi}.
            let z = Complex64::from_polar(1.0, chi);
            let sgn = if flip { 1.0 } else { -1.0 };
            let s = ComplexState { phi, b1, f1: Complex64::new(0.0, sgn * r1) * z, f2: z * r2 };
            let d = complex_rhs(1.3, &s, &FlatProfile).unwrap();
            let dc = (d.f1 * s.f2.conj() + s.f1 * d.f2.conj()).re;
            prop_assert!(s.constraint().abs() < 1e-14);
            prop_assert!(dc.abs() < 1e-12);
        }
    }
}
