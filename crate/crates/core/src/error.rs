use crate::lie_coframe::CoefficientKind;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} is outside its domain at {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("cannot {op} a {left:?}-valued form with a {right:?}-valued form")]
    IncompatibleCoefficients {
        op: &'static str,
        left: CoefficientKind,
        right: CoefficientKind,
    },

    #[error("expected a form of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("{op} needs a Lie-algebra-valued form")]
    NotLieValued { op: &'static str },

    #[error("form has a component along the vertical direction theta6")]
    VerticalComponent,

    #[error("fields evaluated at r = {fields} but geometry at r = {geometry}")]
    RadiusMismatch { fields: f64, geometry: f64 },

    #[error("rho = {rho} lies beyond the tabulated range [0, {max}]")]
    OutsideTable { rho: f64, max: f64 },

    #[error("step size underflow at rho = {x} (h = {h})")]
    StepUnderflow { x: f64, h: f64 },

    #[error("state became non-finite at rho = {x}")]
    NonFinite { x: f64 },

    #[error("step budget exhausted at rho = {x}")]
    StepBudget { x: f64 },

    #[error("series seed invalid: alpha * rho0^2 = {size}")]
    SeriesInvalid { size: f64 },

    #[error("resonant recurrence denominator at index {index}")]
    Resonant { index: usize },

    #[error("a = {a} has not decayed at rho_max = {rho_max}; increase rho_max")]
    NotDecayed { rho_max: f64, a: f64 },

    #[error("a crossed zero at rho = {rho}")]
    ZeroCrossing { rho: f64 },

    #[error("no bracket for target mass {target}: alpha = {alpha} gives mass {mass}")]
    BracketNotFound { target: f64, alpha: f64, mass: f64 },

    #[error("mass is not monotone in alpha near alpha = {alpha}")]
    NotMonotone { alpha: f64 },

    #[error(
        "cannot resolve target mass {target} against bounds [{lower}, {upper}]; increase rho_max"
    )]
    Unresolved { target: f64, lower: f64, upper: f64 },

    #[error("quadrature on [{a}, {b}] did not converge (error estimate {estimate})")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("fit window spans a factor {span} with {points} points")]
    InsufficientRange { span: f64, points: usize },

    #[error("solution blew up at rho = {rho}")]
    BlowUp { rho: f64 },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
