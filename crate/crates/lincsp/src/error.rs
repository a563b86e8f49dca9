use crate::csp::Var;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain size must be at least 2, got {0}")]
    DomainTooSmall(u32),

    #[error("constraint {index} has {len} literals, expected arity {k}")]
    ArityMismatch { index: usize, len: usize, k: usize },

    #[error("variable x{var} occurs more than once in one constraint")]
    RepeatedVariable { var: Var },

    #[error("variable identifiers must be positive")]
    ZeroVariable,

    #[error("literal value {value} outside domain 0..{d}")]
    ValueOutOfDomain { value: u32, d: u32 },

    #[error("duplicate constraint: {0}")]
    DuplicateConstraint(String),

    #[error("ell must satisfy 2 <= ell <= k, got ell={ell}, k={k}")]
    EllOutOfRange { ell: usize, k: usize },

    #[error("assignment does not define variable x{0}")]
    MissingVariable(Var),

    #[error("not {ell}-disjoint: constraints {first} and {second} share at least {ell} variables")]
    NotDisjoint {
        ell: usize,
        first: usize,
        second: usize,
    },

    #[error("{count} frequent variables exceed the allowed bound {bound}")]
    TooManyFrequent { count: usize, bound: f64 },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("requested {requested} edges but only {available} are available")]
    NotEnoughEdges { requested: u64, available: u64 },

    #[error("all {trials} trials failed to produce a verified unsatisfiable instance")]
    TrialsExhausted {
        trials: u64,
        verdicts: Vec<crate::generator::TrialVerdict>,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("DIMACS interchange requires domain size 2, got {0}")]
    UnsupportedDomain(u32),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
