use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure mode surfaced by the engine.
///
/// The variant names double as the machine-readable `kind` field that the
/// command-line front end prints, so renaming one is a format change.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element is not a unit modulo p^k")]
    NotUnit,
    #[error("not ordinary: {0}")]
    NotOrdinary(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("form has an empty domain")]
    EmptyDomain,
    #[error("eigen data lacks the U_p eigenvalue alpha_p")]
    MissingEigenvalue,
    #[error("orbit collision at level {level}: labels {first} and {second} reach the same point")]
    TransitivityViolation { level: usize, first: usize, second: usize },
    #[error("operation is only defined for one variable (delta = 1), got delta = {0}")]
    UnsupportedDelta(usize),
    #[error("element is not divisible: {0}")]
    NotDivisible(String),
    #[error("system is not supersingular: {0}")]
    NotSupersingular(String),
    #[error("tower compatibility fails at layer {layer}")]
    CompatibilityViolation { layer: usize },
    #[error("character conductor p^{conductor} exceeds layer {layer}")]
    ConductorTooLarge { conductor: u32, layer: usize },
    #[error("distribution relation fails at layer {layer}, label {label}")]
    DistributionViolation { layer: usize, label: usize },
}

impl Error {
    /// Stable identifier of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotUnit => "NotUnit",
            Error::NotOrdinary(_) => "NotOrdinary",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::EmptyDomain => "EmptyDomain",
            Error::MissingEigenvalue => "MissingEigenvalue",
            Error::TransitivityViolation { .. } => "TransitivityViolation",
            Error::UnsupportedDelta(_) => "UnsupportedDelta",
            Error::NotDivisible(_) => "NotDivisible",
            Error::NotSupersingular(_) => "NotSupersingular",
            Error::CompatibilityViolation { .. } => "CompatibilityViolation",
            Error::ConductorTooLarge { .. } => "ConductorTooLarge",
            Error::DistributionViolation { .. } => "DistributionViolation",
        }
    }
}
