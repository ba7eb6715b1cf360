use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Bloch vector has squared norm {norm_sq}, outside the unit ball")]
    OutsideBall { norm_sq: f64 },
    #[error("axis has norm {norm}, expected a unit vector")]
    NotUnitAxis { norm: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("mixture weights must be nonnegative and sum to 1 (sum = {sum})")]
    BadWeights { sum: f64 },
    #[error("map is not covariant (max commutator entry {deviation})")]
    NotCovariant { deviation: f64 },
    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue})")]
    NotCptp { min_eigenvalue: f64 },
    #[error("target cannot be produced from any element of the chain")]
    Unreachable,
    #[error("values are not jointly realizable: {0}")]
    NotRealizable(String),
    #[error("input belongs to a pure state; use the pure-state branch")]
    PureInput,
    #[error("state is not pure (radius {radius})")]
    NotPure { radius: f64 },
    #[error("argument out of range: {0}")]
    RangeViolation(String),
    #[error("sample is degenerate: {0}")]
    DegenerateSample(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// Variant name, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OutsideBall { .. } => "OutsideBall",
            Error::NotUnitAxis { .. } => "NotUnitAxis",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::BadWeights { .. } => "BadWeights",
            Error::NotCovariant { .. } => "NotCovariant",
            Error::NotCptp { .. } => "NotCptp",
            Error::Unreachable => "Unreachable",
            Error::NotRealizable(_) => "NotRealizable",
            Error::PureInput => "PureInput",
            Error::NotPure { .. } => "NotPure",
            Error::RangeViolation(_) => "RangeViolation",
            Error::DegenerateSample(_) => "DegenerateSample",
            Error::Precondition(_) => "Precondition",
        }
    }
}
