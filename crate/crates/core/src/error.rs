use thiserror::Error;

use crate::sln::IndexPair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular (kernel dimension {kernel_dimension})")]
    Singular { kernel_dimension: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("({n}, {m}) are not coprime")]
    NotCoprime { n: usize, m: usize },

    #[error("support is not closed under the bracket: ({}, {}) and ({}, {}) present but ({}, {}) missing", .a.i, .a.j, .b.i, .b.j, .a.i, .b.j)]
    NotClosed { a: IndexPair, b: IndexPair },

    #[error("pair ({}, {}) is outside the algebra", .0.i, .0.j)]
    OutsideSupport(IndexPair),

    #[error("graph is not a tree: {0}")]
    NotATree(String),

    #[error("graph is not a forest")]
    NotAForest,

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("graph has {edges} edges, above the brute-force bound of {bound}")]
    TooLarge { edges: usize, bound: usize },

    #[error("edge {0:?} has no orientation")]
    MissingOrientation((usize, usize)),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("non-integral eigenvalue {0}")]
    NonIntegral(String),

    #[error("limit diverges: pair {0} -> {1} has positive weight")]
    Divergent(usize, usize),

    #[error("not a seaweed support")]
    NotSeaweed,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
