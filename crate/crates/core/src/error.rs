use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different rings")]
    RingMismatch,

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("element is not a unit")]
    NotAUnit,

    #[error("zero has no valuation")]
    ZeroElement,

    #[error("operation requires a ring of characteristic p")]
    NotCharacteristicP,

    #[error("ghost components are not faithful over a ring of characteristic p")]
    CharacteristicP,

    #[error("ghost vector is not integral at index {index}")]
    Integrality { index: usize },

    #[error("(p, n) = ({p}, {n}) exceeds the configured budget (n <= {cap})")]
    BudgetExceeded { p: u64, n: usize, cap: usize },

    #[error("extension degree f = {f} exceeds the configured budget (f <= {cap})")]
    DegreeBudgetExceeded { f: u32, cap: u32 },

    #[error("series known only up to t^{have}, t^{needed} required")]
    InsufficientOrder { needed: i64, have: i64 },

    #[error("Teichmüller iteration did not stabilise within {steps} steps")]
    TeichmullerUnstable { steps: u32 },

    #[error("length {0} is out of range")]
    LengthOutOfRange(usize),

    #[error("pairing routes disagree: {0}")]
    RouteDisagreement(String),

    #[error("value is not {0}-torsion")]
    Torsion(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
