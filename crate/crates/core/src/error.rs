use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative radicand {value} in the chi formula (frame is not contact-compatible)")]
    NegativeRadicand { value: f64 },

    #[error("operation is not representable exactly: {0}")]
    Inexact(String),

    #[error("structure constants match no canonical family: {0}")]
    Unclassifiable(String),

    #[error("structure is not in canonical form: {0}")]
    NotCanonical(String),

    #[error("structure is not a canonical solv+ structure: {0}")]
    NotSolvPlus(String),

    #[error("jet order exhausted: needed order {needed}, have {available}")]
    OrderExhausted { needed: usize, available: usize },

    #[error("frame is not a contact frame: {0}")]
    NotAContactFrame(String),

    #[error("singular matrix: {0}")]
    SingularMetric(String),

    #[error("identity `{name}` violated, residual {residual:e}")]
    IdentityViolation { name: String, residual: f64 },

    #[error("alpha/beta scaling violated: residuals ({alpha:e}, {beta:e})")]
    ScalingViolation { alpha: f64, beta: f64 },

    #[error("structure is not conformally flat")]
    NotFlat,

    #[error("invalid integration step: {0}")]
    StepRejected(String),

    #[error("outside the domain of the invariant: {0}")]
    DomainViolation(String),

    #[error("bracket leaves the span of the generators: {0}")]
    NotClosed(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("expression error: {0}")]
    Expr(String),
}

impl Error {
    pub(crate) fn identity(name: impl Into<String>, residual: f64) -> Self {
        Error::IdentityViolation {
            name: name.into(),
            residual,
        }
    }
}
