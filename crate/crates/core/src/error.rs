use thiserror::Error;

/// Errors raised by the polytope toolkit.
///
/// Mathematical rejections that are expected outcomes (a candidate inequality
/// that is not a facet, an indecomposable point) are returned as values, not
/// errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("elements belong to incompatible groups ({left:?} vs {right:?})")]
    IncompatibleGroups { left: Vec<u32>, right: Vec<u32> },

    #[error("infeasible enumeration: {what} has size {size}, bound is {bound}")]
    InfeasibleEnumeration {
        what: &'static str,
        size: u128,
        bound: u128,
    },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("malformed G-presentation: {0}")]
    MalformedPresentation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid symmetry action: {0}")]
    InvalidAction(String),

    #[error("point is not in the lattice: {0}")]
    NotInLattice(String),

    #[error("facet data missing: {0}")]
    MissingFacets(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("Z3 step rejected in case {case}: {detail}")]
    Z3StepRejected { case: &'static str, detail: String },

    #[error("no interior lattice point found for k <= {k_max}")]
    Inconclusive { k_max: u32 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("no witness available: {0}")]
    NoWitness(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
