use alloc::string::String;

/// Errors raised by graph materialization and every downstream operation.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid vertex key {0:?}")]
    InvalidKey(String),
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),
    #[error("vertex {key:?} has degree {degree}, above the bound {bound}")]
    DegreeOverflow { key: String, degree: usize, bound: usize },
    #[error("window exceeds the vertex budget of {cap}")]
    BudgetExceeded { cap: usize },
    #[error("result reaches the window horizon")]
    HorizonEscape,
    #[error("operands belong to different windows")]
    WindowMismatch,
    #[error("radius {radius} is too large for a window of radius {horizon}")]
    RadiusTooLarge { radius: u32, horizon: u32 },
    #[error("removal sets are not nested")]
    NotNested,
    #[error("thread depth {depth} cannot resolve a boundary needing radius {needed}")]
    Unresolvable { depth: u32, needed: u32 },
    #[error("set is not in the bounded-boundary algebra within this window")]
    NotInAlgebra,
    #[error("thread depth {depth} is below the required {needed}")]
    DepthInsufficient { depth: u32, needed: u32 },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("permutation {index} is not a graph automorphism")]
    NotAutomorphism { index: usize },
    #[error("quotients are defined over different domains")]
    DomainMismatch,
    #[error("operation requires a Cayley graph")]
    NotCayley,
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("partition is not invariant under {0:?}")]
    NotEquivariant(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// Budget-class errors (resource caps), as opposed to precondition failures.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::DegreeOverflow { .. })
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
