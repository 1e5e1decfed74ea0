use thiserror::Error;

/// Every failure the library can report.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// failing routine was instantiated with.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{name}` must be positive (got {value})")]
    NonpositiveParameter { name: &'static str, value: f64 },

    #[error("hole {index} does not fit inside the unit disc: {reason}")]
    HoleOutsideDomain { index: usize, reason: String },

    #[error("holes {first} and {second} are {distance} apart, below the separation minimum {minimum}")]
    HolesOverlapping {
        first: usize,
        second: usize,
        distance: f64,
        minimum: f64,
    },

    #[error("initial point {reason}")]
    InvalidSource { reason: String },

    #[error("growth condition violated: gamma0/|Omega| = {mean_density} >= min phi = {min_phi}")]
    GrowthConditionViolated { mean_density: f64, min_phi: f64 },

    #[error("hole {index} has radius scale {value}; only unit radius scale is supported")]
    UnsupportedHoleShape { index: usize, value: f64 },

    #[error("give exactly one of `nu` and `epsilon`")]
    AmbiguousGauge,

    #[error("scene has no holes")]
    NoHoles,

    #[error("{function}: argument {value} outside domain {domain}")]
    DomainError {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{function}: argument {value} overflows")]
    Overflow { function: &'static str, value: f64 },

    #[error("Bessel order {order} exceeds the cap {cap}")]
    BesselOrderTooLarge { order: i64, cap: usize },

    #[error("coincident source and field points; use the regular part instead")]
    CoincidentPoints,

    #[error("Helmholtz series did not reach tolerance {tol} within {n_max} terms")]
    SeriesNotConverged { n_max: usize, tol: f64 },

    #[error("interaction system is numerically singular (condition number {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("point lies inside hole {index}")]
    EvaluationInsideHole { index: usize },

    #[error("point lies outside the unit disc (|x| = {radius})")]
    PointOutsideDomain { radius: f64 },

    #[error("point is within {distance:e} of a singular point of the field")]
    EvaluationAtSingularPoint { distance: f64 },

    #[error("s-extrapolation did not settle: T(s) = {coarse}, T(s/2) = {fine}")]
    NonConvergedExtrapolation { coarse: f64, fine: f64 },

    #[error("no eigenvalue root bracketed in (0, {upper}]")]
    NoRootBracketed { upper: f64 },

    #[error("operation supports exactly one hole, scene has {count}")]
    UnsupportedHoleCount { count: usize },

    #[error("grid spacing {h} does not resolve hole radius {epsilon} (need h <= epsilon/3)")]
    HoleUnresolved { h: f64, epsilon: f64 },

    #[error("conjugate gradient stopped after {iterations} iterations at relative residual {residual:e}")]
    CgNotConverged { iterations: usize, residual: f64 },

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNotConverged { estimate: f64 },

    #[error("field grids differ: {reason}")]
    GridMismatch { reason: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Short machine-readable tag, used by the CLI's JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonpositiveParameter { .. } => "NonpositiveParameter",
            Error::HoleOutsideDomain { .. } => "HoleOutsideDomain",
            Error::HolesOverlapping { .. } => "HolesOverlapping",
            Error::InvalidSource { .. } => "InvalidSource",
            Error::GrowthConditionViolated { .. } => "GrowthConditionViolated",
            Error::UnsupportedHoleShape { .. } => "UnsupportedHoleShape",
            Error::AmbiguousGauge => "AmbiguousGauge",
            Error::NoHoles => "NoHoles",
            Error::DomainError { .. } => "DomainError",
            Error::Overflow { .. } => "Overflow",
            Error::BesselOrderTooLarge { .. } => "BesselOrderTooLarge",
            Error::CoincidentPoints => "CoincidentPoints",
            Error::SeriesNotConverged { .. } => "SeriesNotConverged",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::EvaluationInsideHole { .. } => "EvaluationInsideHole",
            Error::PointOutsideDomain { .. } => "PointOutsideDomain",
            Error::EvaluationAtSingularPoint { .. } => "EvaluationAtSingularPoint",
            Error::NonConvergedExtrapolation { .. } => "NonConvergedExtrapolation",
            Error::NoRootBracketed { .. } => "NoRootBracketed",
            Error::UnsupportedHoleCount { .. } => "UnsupportedHoleCount",
            Error::HoleUnresolved { .. } => "HoleUnresolved",
            Error::CgNotConverged { .. } => "CgNotConverged",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::GridMismatch { .. } => "GridMismatch",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
