use thiserror::Error;

use crate::chart::ChartSpec;
use crate::fun::FunElem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("chart mismatch: {left} vs {right}")]
    ChartMismatch { left: ChartSpec, right: ChartSpec },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("frame index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("malformed expression: {0}")]
    MalformedExpr(String),

    #[error("not divisible by z: term {term} has z-power 0")]
    NotDivisible { term: String },

    #[error("elements belong to different free Lie contexts")]
    ContextMismatch,

    #[error("invalid structure constants: {0}")]
    InvalidStructureConstants(String),

    #[error("Killing form is degenerate; the Lie algebra is not semisimple")]
    NotSemisimple,

    #[error("partition certificate failed, residual {residual}")]
    CertificateFailed { residual: FunElem },

    #[error("element is not central: nonzero bracket with {witness}")]
    CentralityFailed { witness: String },

    #[error("cutoff {cutoff} too small for Fourier degree {degree}")]
    CutoffTooSmall { degree: i64, cutoff: usize },

    #[error("quantum representation needs chart torus:1, got {0}")]
    WrongChart(ChartSpec),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("syntax error at {line}:{column}: expected {expected}, found {found}")]
    Syntax { line: usize, column: usize, expected: String, found: String },

    #[error("unbound name `{0}`")]
    UnboundName(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
