use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed interval {0}")]
    MalformedInterval(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("operands belong to different algebras")]
    MixedOperands,
    #[error("invalid atom structure: {0}")]
    InvalidStructure(String),
    #[error("blocks do not partition the square: {0}")]
    NotAPartition(String),
    #[error("block set not closed under converse: converse of {0} is not a block")]
    NotConverseClosed(String),
    #[error("composition {0};{1} is not a union of blocks")]
    CompositionNotBlockUnion(String, String),
    #[error("identity is not a union of blocks")]
    IdentityNotBlockUnion,
    #[error("carrier not closed: {0}")]
    NotClosed(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("variable '{0}' has no binding")]
    MissingBinding(String),
    #[error("{0} valuations exceed the search bound of {1}")]
    SearchBound(u128, u128),
    #[error("formulas share variables: {0}")]
    SharedVariables(String),
    #[error("element is not in the chain: {0}")]
    NotInChain(String),
    #[error("pair is not in the claimed product: {0}")]
    NotInProduct(String),
    #[error("no diversity atoms to export")]
    NoDiversityAtoms,
    #[error("index set {0} is infinite; a finite window is required")]
    InfiniteIndexSet(String),
    #[error("unknown point '{0}'")]
    UnknownPoint(String),
    #[error("a relativized export needs a zero point")]
    ZeroRequired,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
