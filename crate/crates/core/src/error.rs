use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("indeterminate at working precision: {0}")]
    Indeterminate(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("outside the convergence domain: {0}")]
    Convergence(String),
    #[error("not a member of the group: {0}")]
    NotMember(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("symbol not certified: {0}")]
    Uncertified(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
