use thiserror::Error;

/// Everything that can go wrong in the pipeline.
///
/// Variants are grouped by the module that raises them; [`Error::code`] gives
/// a stable machine-readable tag and [`Error::class`] the exit-code family.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // exactalg
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("spectrum is not rational: {0}")]
    NonRationalSpectrum(String),

    // freediv
    #[error("h has degree {degree} but lives in {nvars} variables")]
    DegreeMismatch { degree: u32, nvars: usize },
    #[error("h is not homogeneous")]
    NotHomogeneous,
    #[error("divisor is not linear free: {0}")]
    NotLinearFree(String),
    #[error("Saito check needs exactly {expected} fields, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("commutators leave the span of the supplied fields")]
    NotClosed,

    // defalg
    #[error("linear form expected, got degree {0}")]
    NotLinear(u32),
    #[error("linear form is not generic: {0}")]
    NotGeneric(String),
    #[error("no decomposition modulo the Jacobian ideal in degree {0}")]
    NoDecomposition(u32),

    // brieskorn
    #[error("connection matrix entry ({row},{col}) is not weighted homogeneous")]
    NotHomogeneousEntry { row: usize, col: usize },
    #[error("spectrum window unstable at size {0}")]
    WindowUnstable(usize),
    #[error("calibration self-test failed: {0}")]
    CalibrationFailed(String),

    // bfunctional
    #[error("operator output is not a multiple of h^(n-1): {0}")]
    NotProportional(String),

    // cli
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("input too large: {0}")]
    TooLarge(String),
}

/// Exit-code family of an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// A mathematical self-check failed.
    Check,
    /// The input is malformed or not a linear free divisor.
    Input,
    /// The input is valid but outside what the algorithms handle.
    OutOfScope,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "Syntax",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::VariableCountMismatch { .. } => "VariableCountMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonRationalSpectrum(_) => "NonRationalSpectrum",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::NotLinearFree(_) => "NotLinearFree",
            Error::WrongCount { .. } => "WrongCount",
            Error::NotClosed => "NotClosed",
            Error::NotLinear(_) => "NotLinear",
            Error::NotGeneric(_) => "NotGeneric",
            Error::NoDecomposition(_) => "NoDecomposition",
            Error::NotHomogeneousEntry { .. } => "NotHomogeneousEntry",
            Error::WindowUnstable(_) => "WindowUnstable",
            Error::CalibrationFailed(_) => "CalibrationFailed",
            Error::NotProportional(_) => "NotProportional",
            Error::UnknownCatalogEntry(_) => "UnknownCatalogEntry",
            Error::InvalidInput(_) => "InvalidInput",
            Error::TooLarge(_) => "TooLarge",
        }
    }

    /// Module that raised the error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Syntax { .. }
            | Error::UnknownVariable { .. }
            | Error::VariableCountMismatch { .. }
            | Error::NotSquare { .. }
            | Error::DimensionMismatch(_)
            | Error::NonRationalSpectrum(_) => "exactalg",
            Error::DegreeMismatch { .. }
            | Error::NotHomogeneous
            | Error::NotLinearFree(_)
            | Error::WrongCount { .. }
            | Error::NotClosed => "freediv",
            Error::NotLinear(_) | Error::NotGeneric(_) | Error::NoDecomposition(_) => "defalg",
            Error::NotHomogeneousEntry { .. } | Error::WindowUnstable(_) | Error::CalibrationFailed(_) => "brieskorn",
            Error::NotProportional(_) => "bfunctional",
            Error::UnknownCatalogEntry(_) | Error::InvalidInput(_) | Error::TooLarge(_) => "cli",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonRationalSpectrum(_) | Error::NotProportional(_) | Error::TooLarge(_) => {
                ErrorClass::OutOfScope
            }
            Error::NotHomogeneousEntry { .. }
            | Error::WindowUnstable(_)
            | Error::CalibrationFailed(_)
            | Error::NotClosed => {
                ErrorClass::Check
            }
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
