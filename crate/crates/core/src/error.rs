use thiserror::Error;

/// Errors raised by parameter derivation, special-function evaluation,
/// the Mellin–Barnes engine and the numerical oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} is a pole of the gamma function")]
    GammaPole(f64),

    #[error("hypergeometric lower parameter {0} is a non-positive integer")]
    LowerParameterPole(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation `{op}` is not available in the {regime} regime: {hint}")]
    Regime {
        op: &'static str,
        regime: String,
        hint: String,
    },

    #[error("x = {x} is outside the convergence region of the {direction} residue series: {hint}")]
    OutsideConvergence {
        x: f64,
        direction: &'static str,
        hint: String,
    },

    #[error("contour Re(s) = {shift} passes through the pole at s = {pole}")]
    ContourOnPole { shift: f64, pole: f64 },

    #[error("left and right pole chains meet at s = {0}; no contour separates them")]
    PinchedContour(f64),

    #[error("integrand does not decay along the contour: {0}")]
    InsufficientDecay(String),

    #[error("t = {t} (x = {x}) is outside the validity range of the {basis} basis; {hint}")]
    OutsideValidity {
        t: f64,
        x: f64,
        basis: &'static str,
        hint: &'static str,
    },

    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("non-finite value encountered at t = {0}")]
    NonFinite(f64),

    #[error("linear system is singular")]
    Singular,

    #[error("complex indicial pair: {0}")]
    ComplexIndices(String),
}

pub type Result<T> = std::result::Result<T, Error>;
