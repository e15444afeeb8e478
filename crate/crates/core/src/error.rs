use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PovError {
    #[error("matrix is not hermitian (defect {defect:e})")]
    NonHermitian { defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("effects do not commute (commutator norm {defect:e})")]
    NotCommuting { defect: f64 },
    #[error("degeneracy resolution failed (residual {residual:e})")]
    DegeneracyResolutionFailed { residual: f64 },
    #[error("elements are not comparable: {0}")]
    NotComparable(String),
    #[error("atoms do not sum to the unit element (defect {defect:e})")]
    NotNormalized { defect: f64 },
    #[error("duplicate outcome label {0}")]
    DuplicateLabel(f64),
    #[error("invalid atom at index {index}: {reason}")]
    InvalidAtom { index: usize, reason: String },
    #[error("function is not total on the outcome labels: {0}")]
    PartialFunction(String),
    #[error("measure escapes the kernel support mask at row {0}")]
    MaskViolation(usize),
    #[error("unknown generator `{0}` (expected tv, kl or hellinger)")]
    UnknownGenerator(String),
    #[error("monotonicity violated: image divergence infinite while input finite")]
    MonotonicityViolation,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("kernel is not deterministic (entry {value} at ({row},{col}))")]
    NotDeterministicKernel { row: usize, col: usize, value: f64 },
    #[error("kernel does not smear lhs into rhs (defect {defect:e})")]
    NotASmearing { defect: f64 },
    #[error("state is not faithful (min eigenvalue/weight {0:e})")]
    NotFaithful(f64),
    #[error("empty family of measures")]
    EmptyFamily,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
