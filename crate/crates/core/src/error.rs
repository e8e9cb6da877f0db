use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("eigen-solver did not converge (off-diagonal residual {residual:.3e})")]
    NoConvergence { residual: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("local factorisation failed (residual {residual:.3e})")]
    KakFailed { residual: f64 },

    #[error("family {family} expects {expected} angle parameters, got {got}")]
    ParameterCount {
        family: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("gate is singular at these parameters")]
    SingularGate,

    #[error("expected {expected} distinct eigenvalues, found {found}")]
    EigenvalueCount { expected: usize, found: usize },

    #[error("eigenvalue {0} does not belong to the spectrum")]
    UnknownEigenvalue(String),

    #[error("synthesis residual {residual:.3e} exceeds tolerance")]
    SynthesisResidual { residual: f64 },

    #[error("qubit index {0} out of range")]
    QubitIndex(usize),

    #[error("circuit parse error on line {line}: {message}")]
    CircuitParse { line: usize, message: String },

    #[error("Monte-Carlo estimate needs at least one sample")]
    NoSamples,
}

pub type Result<T> = std::result::Result<T, Error>;
