use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("step polynomial is reducible; factor found: {factor}")]
    Reducible { factor: String },
    #[error("irreducibility of a degree {degree} step cannot be certified here; mark the step as trusted")]
    Uncertifiable { degree: usize },
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("vector {0} is isotropic")]
    Isotropic(String),
    #[error("vector lies in the radical, the transvection would be the identity")]
    InRadical,
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("post-condition failed: {0}")]
    Verification(String),
    #[error("cannot parse {what}: {msg}")]
    Parse { what: String, msg: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(what: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse { what: what.into(), msg: msg.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
