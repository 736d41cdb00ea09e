//! Error type shared by every module of the crate.

/// Everything that can go wrong when constructing model objects or running
/// the solvers. Variants carry enough context to format a useful message;
/// the CLI maps all of them to exit code 3.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The revenue curve is identically zero, so no revenue-maximizing
    /// price exists.
    #[error("degenerate distribution: the revenue curve is identically zero")]
    DegenerateDistribution,

    /// Operation is only defined for a subset of distribution kinds.
    #[error("operation not supported for {0} distributions")]
    UnsupportedKind(&'static str),

    /// Virtual value requested at a point with zero density.
    #[error("zero density at v = {0}")]
    ZeroDensity(f64),

    /// Target outside the range of the revenue curve.
    #[error("target {target} lies outside the revenue-curve range [0, {max}]")]
    OutOfRange { target: f64, max: f64 },

    /// Allocation probability not offered by the menu.
    #[error("allocation {x} is unavailable: menu ends at x_bar = {x_bar}")]
    Unavailable { x: f64, x_bar: f64 },

    /// A raw menu point outside [0,1] x [0, inf).
    #[error("invalid menu point ({x}, {price})")]
    InvalidPoint { x: f64, price: f64 },

    /// Threshold handed to the auxiliary-distribution builder is below the
    /// lottery price.
    #[error("threshold {s} is below the lottery price {p}")]
    InvalidThreshold { s: f64, p: f64 },

    /// The reference type demands nothing from the menu, so no floor price
    /// can be derived from its choice.
    #[error("menu has zero demand at the reference value")]
    ZeroDemand,

    /// Operation restricted to point-mass distributions.
    #[error("operation requires a point-mass distribution")]
    UnsupportedDistribution,

    #[error("parse error: {0}")]
    Parse(String),

    /// Failed to write a report artifact.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
