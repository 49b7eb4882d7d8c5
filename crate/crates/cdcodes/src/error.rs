use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("matrix shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("unsupported ambient dimension {v} (supported: {min}..={max})")]
    UnsupportedAmbient { v: usize, min: usize, max: usize },

    #[error("expected a subspace of dimension {expected}, got {actual}")]
    WrongDimension { expected: usize, actual: usize },

    #[error("point lies in the distinguished hyperplane")]
    PointInHyperplane,

    #[error("invalid plane encoding {input:?}: {reason}")]
    PlaneEncoding { input: String, reason: String },

    #[error("configuration index {index} out of range 1..=38")]
    ConfigurationIndex { index: usize },

    #[error("configuration failed validation: {reason}")]
    ConfigurationInvalid { reason: String },

    #[error("invalid bound query (q={q}, v={v}, d={d}; k={k}): {reason}")]
    BoundQuery {
        q: u64,
        v: u64,
        d: u64,
        k: u64,
        reason: String,
    },

    #[error("no base value available for A_{q}({v},{d};{k})")]
    MissingBaseValue { q: u64, v: u64, d: u64, k: u64 },

    #[error("partial spread formula requires v = 1 (mod k), got v={v}, k={k}")]
    PartialSpreadPrecondition { v: u64, k: u64 },

    #[error("arithmetic overflow while evaluating a bound")]
    BoundOverflow,

    #[error("generator does not permute the domain: {reason}")]
    NotAPermutation { reason: String },

    #[error("generator matrix is singular")]
    SingularGenerator,

    #[error("rank-metric code violates its declared distance: pair at distance {found}, declared {declared}")]
    RankDistanceViolation { found: usize, declared: usize },

    #[error("codewords must pairwise satisfy the distance precondition: pair at distance {found}, required {required}")]
    SubspaceDistanceViolation { found: usize, required: usize },

    #[error("mixed codeword dimensions: expected {expected}, found {actual}")]
    MixedDimensions { expected: usize, actual: usize },

    #[error("expected a base code of {expected} words, got {actual}")]
    WrongBaseCode { expected: usize, actual: usize },

    #[error("precondition violated: {reason}")]
    Precondition { reason: String },

    #[error("model has {vars} variables, exceeding the internal solver limit of {limit}; export the model instead")]
    ModelTooLarge { vars: usize, limit: usize },

    #[error("unknown variable {name:?} in model")]
    UnknownVariable { name: String },

    #[error("model is infeasible")]
    Infeasible,

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
