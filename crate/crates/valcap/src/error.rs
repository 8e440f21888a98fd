use thiserror::Error;

/// Crate-wide error type. Variants that map to CLI exit codes:
/// invalid input -> 2, resource limits -> 4 (see `Error::exit_code`).
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("p^e = {p}^{e} exceeds the enumeration budget {budget} (set VALCAP_BUDGET to raise it)")]
    ModulusTooLarge { p: u64, e: u32, budget: u64 },

    #[error("valuation of zero is undefined")]
    ValuationOfZero,

    #[error("division by zero")]
    DivisionByZero,

    #[error("empty residue set")]
    EmptySet,

    #[error("degenerate transform (zero determinant and not a constant map)")]
    DegenerateTransform,

    #[error("transform has no positive fixed point")]
    NoPositiveFixedPoint,

    #[error("transform has two positive fixed points; selection is ambiguous")]
    AmbiguousFixedPoint,

    #[error("unsupported nesting: {0}")]
    UnsupportedNesting(String),

    #[error("invalid stratum capacity: {0}")]
    InvalidStratumCapacity(String),

    #[error("invalid stratification: {0}")]
    InvalidStratification(String),

    #[error("closure structure unresolved for p={p}, d={d}, ell={ell}: {detail}")]
    ClosureUnresolved { p: u64, d: u32, ell: u32, detail: String },

    #[error("capacity engine diverged: {0}")]
    EngineDiverged(String),

    #[error("formula not applicable: {0}")]
    FormulaNotApplicable(String),

    #[error("candidate set exhausted: need more than {needed} elements, have {got}")]
    SetExhausted { needed: usize, got: usize },

    #[error("truncation too small: need at least {needed} elements, found {got}; try a bound of roughly {suggest_bound}")]
    TooFewElements { needed: usize, got: usize, suggest_bound: u128 },

    #[error("slope window too short: need at least {min} indices, got {got}")]
    WindowTooShort { min: usize, got: usize },

    #[error("stream deadlock (internal error): {0}")]
    StreamStalled(String),
}

impl Error {
    /// Process exit code for CLI reporting. 2 = usage/validation error,
    /// 4 = resource limit, anything else surfaces as 1 via the binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPrime(_) | Error::InvalidParams(_) => 2,
            Error::ModulusTooLarge { .. }
            | Error::TooFewElements { .. }
            | Error::SetExhausted { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
