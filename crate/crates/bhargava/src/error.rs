use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("explicit set exhausted: requested {requested} elements, only {available} available")]
    ExhaustedSet { requested: usize, available: usize },
    #[error("unsupported rendering: {0}")]
    UnsupportedRender(String),
    #[error("p-sequence did not stabilize below truncation ceiling {ceiling}")]
    NotStabilized { ceiling: usize },
    #[error("enumeration too deep: {0} exceeds the 2^24 guard")]
    TooDeep(u128),
    #[error("no simple root: {0}")]
    NoSimpleRoot(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
