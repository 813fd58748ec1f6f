//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector has no nonzero entry")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid target qubits: {0}")]
    Target(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    Unitary(f64),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    Hermiticity(f64),
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unknown label {label:?} at line {line}")]
    Label { line: usize, label: String },
    #[error("cannot stratify: {0}")]
    Stratify(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Short machine-readable name, used for error rows in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::Dimension(_) => "DimensionError",
            Error::Target(_) => "TargetError",
            Error::Argument(_) => "ArgumentError",
            Error::Size(_) => "SizeError",
            Error::Unitary(_) => "UnitaryError",
            Error::Hermiticity(_) => "HermiticityError",
            Error::Singular(_) => "SingularError",
            Error::Config(_) => "ConfigError",
            Error::Format { .. } => "FormatError",
            Error::Label { .. } => "LabelError",
            Error::Stratify(_) => "StratifyError",
            Error::Io { .. } => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
