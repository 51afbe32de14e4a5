use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("power exponent {0} must lie strictly between 0 and 1")]
    ExponentOutOfRange(f64),

    #[error("radius {0} is outside (0, 1)")]
    RadiusOutOfRange(f64),

    #[error("parameter {name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("profile is not eventually decreasing within the search horizon (t = {t})")]
    NotEventuallyDecreasing { t: f64 },

    #[error("ladder geometry violated at level {level}: {what}")]
    Geometry { level: usize, what: String },

    #[error("non-finite sample encountered at offset {0:?}")]
    NonFinite(Vec<f64>),

    #[error("point ({0}, {1}) lies outside the disk x^2 + y^2 <= 1/4")]
    OutsideDisk(f64, f64),

    #[error("the radial hessian is not defined at the origin")]
    Origin,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
