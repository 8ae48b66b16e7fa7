//! Spin(4)-invariant Calabi-Yau monopoles on the Stenzel deformed conifold.
//!
//! The crate is `no_std` with `alloc`. It provides
//!
//! * an exterior algebra on the invariant coframe with jet coefficients
//!   ([`lie_coframe`]),
//! * the radial data of the Stenzel metric and of the conifold
//!   ([`stenzel_geometry`]),
//! * invariant connections, Higgs fields and monopole residuals
//!   ([`invariant_fields`]),
//! * the reduced ODE systems, their series seed at the zero section and a
//!   shooting solver for the mass ([`monopole_ode`]),
//! * the closed-form solution families and the extension analysis
//!   ([`special_solutions`]),
//! * the large-mass bubbling comparisons ([`bubbling_analysis`]).
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bubbling_analysis;
pub mod error;
pub mod fit;
pub mod invariant_fields;
pub mod jet;
pub mod lie_coframe;
pub mod monopole_ode;
pub mod quadrature;
pub mod series;
pub mod special_solutions;
pub mod stenzel_geometry;
pub mod su2;

pub use error::{Error, Result};
pub use jet::Jet;
pub use su2::{Su2, Su2Jet, Su2Vector};
