use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("relation {relation}: {message}")]
    BadRelation { relation: usize, message: String },
    #[error("invalid duality: {0}")]
    BadDuality(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("algebra may be infinite-dimensional: degree {0} is still nonzero; raise max_len")]
    NotNilpotent(usize),
    #[error("relation {relation} is inhomogeneous under the new degrees ({degrees:?})")]
    Inhomogeneous { relation: usize, degrees: Vec<i64> },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("no duality declared for this algebra")]
    NoDuality,
    #[error("duality does not preserve the active grading")]
    DualityNotGraded,
    #[error("modules live over different algebras or gradings")]
    AlgebraMismatch,
    #[error("field error: {0}")]
    Field(String),
    #[error("degree map inconsistent: {0}")]
    Regrade(String),
    #[error("incompatible endpoints: {0}")]
    Incompatible(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("unknown fixture `{name}`; available: {available}")]
    UnknownFixture { name: String, available: String },
}
