use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("completion-infeasible: {0}")]
    CompletionInfeasible(String),
    #[error("no matching covers the required vertex set")]
    UncoverableCover,
    #[error("matching is not maximum (augmenting path between {0} and {1})")]
    NotMaximum(usize, usize),
    #[error("blossom is not augmenting: {0}")]
    NonAugmentingBlossom(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("oracle size guard exceeded: {0}")]
    Guard(String),
}
