use thiserror::Error;

/// Error type shared by all modules.
///
/// The variants are grouped by how the command line maps them to exit codes:
/// domain errors (1), resource errors (2), malformed input (3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed poset: {0}")]
    MalformedPoset(String),

    #[error("quiver is not rooted: {0}")]
    NotRooted(String),

    #[error("subset is not appropriate: {0}")]
    NotAppropriate(String),

    #[error("bound quiver rejected: {0}")]
    BoundQuiver(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("base not polystable: {0}")]
    NotPolystable(String),

    #[error("generic position unreachable: {0}")]
    GenericPosition(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code used by the CLI: 1 domain, 2 resource, 3 malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 2,
            Error::MalformedPoset(_) | Error::Parse(_) | Error::Io(_) => 3,
            _ => 1,
        }
    }
}
