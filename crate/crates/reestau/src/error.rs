use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("generator {gen} has order {order} below its weight {weight}")]
    OrderBelowWeight { gen: String, order: String, weight: u32 },
    #[error("order of the element exceeds the requested weight")]
    OrderAboveWeight,
    #[error("no distinguished variable declared in the ring")]
    NoDistinguishedVar,
    #[error("{0} is not additive of degree p^{1}")]
    NotAdditive(String, u32),
    #[error("frobenius roots require positive characteristic")]
    CharZeroFrobenius,
    #[error("search space too large: {0} points")]
    SearchSpaceTooLarge(u128),
    #[error("{0} is not a common multiple of the generator weights")]
    NotCommonMultiple(u32),
    #[error("generator {0} is not monic in the distinguished variable")]
    NotMonic(String),
    #[error("ideal is not flagged as closed under differential operators")]
    NotDiffClosed,
    #[error("degree {0} exceeds the supported bound for universal invariants")]
    DegreeTooLarge(u32),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("algebra file, line {line}: {msg}")]
    AlgFile { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
