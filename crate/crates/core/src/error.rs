use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Clifford model mismatch: {0}")]
    ModelMismatch(String),
    #[error("not a blade multiple: {0}")]
    NotABlade(String),
    #[error("covering map mismatch: expected {expected}, found {found}")]
    CoveringMismatch { expected: String, found: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate frame: |det| = {det:e} <= {tol:e}")]
    DegenerateFrame { det: f64, tol: f64 },
    #[error("loop does not close: {0}")]
    NotClosed(String),
    #[error("undersampled loop: phase step {step:.4} >= pi/2 between samples {index} and {next} after {levels} refinement levels")]
    Undersampled {
        index: usize,
        next: usize,
        step: f64,
        levels: u32,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ambient mismatch: G(2,{0}) vs G(2,{1})")]
    AmbientMismatch(usize, usize),
    #[error("unsupported dimension n = {0}; only n = 2 and n = 3 are handled")]
    UnsupportedDimension(i64),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}
