use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("inexact division in {what}")]
    InexactDivision { what: String },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("zero scale for generator `{0}`")]
    ZeroScale(String),

    #[error("word length cap {cap} exceeded while rewriting with relation [{relation}]")]
    CapExceeded { cap: usize, relation: String },

    #[error("relation table is not contracting: {0}")]
    NonContracting(String),

    #[error("series argument has a parameter-degree-0 term; {0}(...) would not terminate")]
    SeriesDivergent(String),

    #[error("duplicate key: {0}")]
    DuplicateKey(String),

    #[error("theorem hypotheses fail: {0}")]
    HypothesisFailure(String),

    #[error("antipode: no solution at parameter order {order} for `{generator}`")]
    NoAntipode { generator: String, order: u32 },

    #[error("invalid input: {0}")]
    Input(String),
}
