use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{field} not applicable to family={family}")]
    FieldNotApplicable {
        field: &'static str,
        family: &'static str,
    },
    #[error("energy {t} outside annulus range ({lo}, {hi})")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("no two-saddle loop for a = {0}")]
    NoTwoSaddleLoop(f64),
    #[error("annulus not available: {0}")]
    NoAnnulus(String),
    #[error("root bracketing failed: {0}")]
    Bracketing(String),
    #[error("singular solve at step j = {j} (condition {condition:e})")]
    Singular { j: usize, condition: f64 },
    #[error("Melnikov identically zero; order insufficient")]
    IdenticallyZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
