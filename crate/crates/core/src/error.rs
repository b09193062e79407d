use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("table entry {value} at ({row}, {col}) is not an element index")]
    NotClosed { row: usize, col: usize, value: i64 },
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("table is not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the table cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("group order {order} exceeds the lattice cap {cap}")]
    LatticeCapExceeded { order: usize, cap: usize },
    #[error("more than {cap} subgroups")]
    SubgroupCountCapExceeded { cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("residual not witnessed for formation {0}")]
    ResidualNotWitnessed(String),
    #[error("unknown tag: {0}")]
    UnknownTag(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
