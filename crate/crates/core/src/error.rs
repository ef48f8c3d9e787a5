use thiserror::Error;

/// Errors raised across the library. Variants map one-to-one onto the
/// failure modes that callers are expected to distinguish.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("complex dimension {0} is outside the supported range 1..={max}", max = crate::exterior::MAX_DIM)]
    DimOutOfRange(usize),
    #[error("unsupported bidegree ({0},{1}) for this operation")]
    UnsupportedBidegree(usize, usize),
    #[error("expected a form of total degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("metric is not Hermitian positive definite: {0}")]
    InvalidMetric(String),
    #[error("model parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("integrability violated: d e^{0} has a nonzero (0,2) component")]
    IntegrabilityViolated(usize),
    #[error("d^2 != 0 on generator {generator} (defect {defect:.3e})")]
    NotClosedSquare { generator: String, defect: f64 },
    #[error("model is not unimodular; adjoint-dependent operations are unavailable")]
    NotUnimodular,
    #[error("input form is not closed for the requested theory (defect {0:.3e})")]
    NotInKernel(f64),
    #[error("no d-closed representative exists in this class (residual {0:.3e})")]
    NoDClosedRepresentative(f64),
    #[error("no holomorphic trivialisation: {0}")]
    NoTrivialization(String),
    #[error("volume form vanishes")]
    VanishingForm,
    #[error("order-{order} obstruction is not in the image of dbar-del (residual {residual:.3e})")]
    ObstructionNotExact { order: usize, residual: f64 },
    #[error("order {0} is out of range for this series")]
    OrderOutOfRange(usize),
    #[error("metric is not balanced (defect {0:.3e})")]
    NotBalanced(f64),
    #[error("class is not primitive (defect {0:.3e})")]
    NotPrimitiveClass(f64),
    #[error("complex dimension {0} is too small for this construction")]
    DimTooSmall(usize),
    #[error("class is not in the plus eigenspace (defect {0:.3e})")]
    NotInPlusSpace(f64),
    #[error("holomorphic 2-form is degenerate")]
    Degenerate,
    #[error("space of holomorphic 2-forms has dimension {0}, expected 1")]
    NotUnique(usize),
    #[error("Gram matrix asymmetry {0:.3e} exceeds tolerance")]
    Asymmetric(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
