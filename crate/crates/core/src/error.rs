use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("order relation has a cycle through `{0}`")]
    CycleDetected(String),

    #[error("{0} elements given, at most {max} are supported", max = crate::MAX_ELEMENTS)]
    TooManyElements(usize),

    #[error("adding `{0}` < `{1}` would create a cycle")]
    WouldCreateCycle(String, String),

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("elements do not form a chain in the given order")]
    NotAChain,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("poset is not N-free: {0}")]
    NotNFree(String),

    #[error("balanced-pair theorem violated: {0}")]
    TheoremViolation(String),

    #[error("hidden sequence is not a linear extension: {0}")]
    HiddenNotAnExtension(String),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::CapacityExceeded(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
