use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported group family `{0}`")]
    UnsupportedFamily(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{what} is {value}, above the configured cap {cap}")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("subset masks belong to groups of different orders ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("subset is not closed under inverses: {element} is present but {inverse} is not")]
    AsymmetricSubset { element: usize, inverse: usize },
    #[error("the trivial group has no nontrivial irreducible character")]
    TrivialGroup,
    #[error("common eigenspace of dimension {dim} did not split; character table arithmetic is inconsistent")]
    SplittingFailure { dim: usize },
    #[error("eigenvalue iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("subset generates a proper subgroup of order {closure} (group order {order})")]
    NotGenerating { closure: usize, order: usize },
    #[error("operation needs a {expected} group")]
    WrongBackend { expected: &'static str },
    #[error("action is not transitive: orbit of point 0 has size {orbit} of {degree}")]
    Intransitive { orbit: usize, degree: usize },
    #[error("guaranteed bound violated: {0}")]
    TheoremViolation(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
