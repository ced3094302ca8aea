use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("term outside the epsilon-zero fragment: {0}")]
    OutsideFragment(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("stuck: {0}")]
    Stuck(String),
    #[error("engine invariant violated: {0}")]
    Engine(String),
    #[error("transform error at node {node}: {msg}")]
    Transform { node: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
