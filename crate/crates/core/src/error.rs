use thiserror::Error;

/// Errors produced by state, circuit and pipeline operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mode label {0} appears more than once in register")]
    DuplicateMode(String),
    #[error("registers do not match: {0}")]
    RegisterMismatch(String),
    #[error("mode {0} not present in register")]
    UnknownMode(String),
    #[error("mode sets overlap on {0}; registers must be disjoint to compose")]
    OverlappingModes(String),
    #[error("occupation tuple has {got} entries, register has {want} modes")]
    OccupationLength { got: usize, want: usize },
    #[error("total photon number {total} exceeds truncation bound {bound}")]
    TruncationExceeded { total: u32, bound: u32 },
    #[error("state norm {norm} outside tolerance of 1")]
    NotNormalized { norm: f64 },
    #[error("cannot normalize a state with zero norm")]
    ZeroState,
    #[error("kept mode set is empty")]
    EmptyKeptSet,
    #[error("cannot build a circuit: {0}")]
    BadCircuit(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("attack is incompatible with the protocol space: {0}")]
    AttackMismatch(String),
    #[error("detector/interpretation configuration invalid: {0}")]
    BadMeasurement(String),
    #[error("scenario invalid: {0}")]
    BadScenario(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
