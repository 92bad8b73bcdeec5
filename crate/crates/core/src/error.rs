use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. CLI exit codes derive from [`Error::exit_code`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("minimal polynomial {0} is reducible over Q")]
    ReducibleMinPoly(String),
    #[error("root interval contains {roots} real roots of the minimal polynomial (need exactly one)")]
    EmptyOrAmbiguousRootInterval { roots: usize },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("embedding image not in the ambient field: {0}")]
    ImageNotInE(String),
    #[error("rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("lattice determinant mismatch: Gram route {gram}, closed form {closed_form}")]
    ClosedFormMismatch { gram: String, closed_form: String },
    #[error("lattice rank {rank} exceeds the enumeration cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },
    #[error("no lattice point satisfying the predicate within radius {radius}")]
    NotFoundWithinRadius { radius: String },
    #[error("could not certify a nonvanishing polynomial for system {system} (precision cap)")]
    CannotWitnessNonvanishing { system: usize },
    #[error("the lattice lies inside the zero set of system {system}")]
    LatticeInsideZeroSet { system: usize },
    #[error("grid exhausted at precision cap {cap} bits")]
    GridExhaustedAtPrecisionCap { cap: u32 },
    #[error("bound violation in {what}: value {value} exceeds bound {bound}")]
    BoundViolation { what: String, value: String, bound: String },
    #[error("sublattice {index} is not proper (index 1)")]
    NoProperSublattice { index: usize },
    #[error("theta_{form} vanishes: forms are not independent over K1")]
    ZeroTheta { form: usize },
    #[error("linear independence condition fails: {0}")]
    IndependenceFailure(String),
    #[error("search exhausted up to {cap} without a solution")]
    SearchExhausted { cap: String },
    #[error("residual for multiplier {multiplier} straddles epsilon at the precision cap; perturb epsilon")]
    BoundaryIndeterminate { multiplier: String },
    #[error("oracle cap {cap} exceeded")]
    CapExceeded { cap: String },
    #[error("D' is not an integer")]
    NonIntegerDPrime,
    #[error("computed degree {degree} of {what} exceeds ell = {ell}")]
    DegreeExceedsEll { what: String, degree: usize, ell: usize },
    #[error("precision cap of {bits} bits reached")]
    PrecisionCap { bits: u32 },
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            IndependenceFailure(_) | ZeroTheta { .. } => 3,
            GridExhaustedAtPrecisionCap { .. }
            | SearchExhausted { .. }
            | BoundaryIndeterminate { .. }
            | CapExceeded { .. }
            | PrecisionCap { .. }
            | CannotWitnessNonvanishing { .. }
            | NotFoundWithinRadius { .. } => 4,
            BoundViolation { .. } | NonIntegerDPrime => 5,
            _ => 2,
        }
    }
}
