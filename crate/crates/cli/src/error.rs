use serde::Serialize;
use serde_json::{Map, Value};
use theta_forge::Error;

/// The machine-readable failure printed on a nonzero exit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    #[serde(flatten)]
    pub location: Map<String, Value>,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.into(), message: message.into(), location: Map::new() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new("InvalidInput", message)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.location.insert(key.into(), value.into());
        self
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let out = CliError::new(e.kind(), e.to_string());
        match e {
            Error::DistributionViolation { layer, label } => out.with("layer", layer).with("label", label),
            Error::CompatibilityViolation { layer } => out.with("layer", layer),
            Error::TransitivityViolation { level, first, second } => {
                out.with("level", level).with("first", first).with("second", second)
            }
            Error::ConductorTooLarge { conductor, layer } => out.with("conductor", conductor).with("layer", layer),
            _ => out,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("Io", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new("Parse", e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
