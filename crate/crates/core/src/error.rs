use thiserror::Error;

/// Errors raised by the simulator, gate algebra, chain model, compiler and QEC layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisIndexOutOfRange { index: usize, num_qubits: usize },
    #[error("gate of dimension {dim} does not match {targets} target(s)")]
    DimensionMismatch { dim: usize, targets: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("qubit {qubit} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate `{0}` is not unitary")]
    NonUnitary(String),
    #[error("matrix dimension {0} is not a supported gate size")]
    UnsupportedDimension(usize),
    #[error("requested outcome has zero probability")]
    ZeroProbability,
    #[error("state sizes differ ({0} vs {1} qubits)")]
    SizeMismatch(usize, usize),
    #[error("state is not normalized (norm² = {0})")]
    Unnormalized(f64),
    #[error("amplitude length {0} is not a power of two")]
    BadAmplitudeLength(usize),
    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),
    #[error("switch s{index} out of range (chain has {count} switches)")]
    SwitchOutOfRange { index: usize, count: usize },
    #[error("data qubit d{index} out of range (chain has {count} data qubits)")]
    DataOutOfRange { index: usize, count: usize },
    #[error("qubit {0} is entangled with the rest of the register")]
    Entangled(String),
    #[error("coupling constant must be positive, got {0}")]
    InvalidCoupling(f64),
    #[error("control and target are both d{0}")]
    ControlIsTarget(usize),
    #[error("program contains a measurement and has no unitary semantics")]
    MeasurementInProgram,
    #[error("switch s{switch} did not return to |0> (P0 = {p0})")]
    SwitchNotDecoupled { switch: usize, p0: f64 },
    #[error("no single-qubit dressing turns the JPS gate into a CNS gate")]
    DressingNotFound,
    #[error("qubit {0} lies outside the logical block")]
    OutsideBlock(String),
    #[error("logical block at d{index} does not fit a chain of {num_data} data qubits")]
    BlockOutOfRange { index: usize, num_data: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("syndrome extraction is not deterministic: {0}")]
    NondeterministicSyndrome(String),
    #[error("syndromes of {0} and {1} coincide")]
    SyndromeCollision(String, String),
    #[error("syndrome outcomes must be + or -, got {0}")]
    InvalidSyndrome(String),
    #[error("no Pauli recovery word restores the encoded state: {0}")]
    NoRecoveryWord(String),
    #[error("trial count must be at least 1")]
    NoTrials,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
