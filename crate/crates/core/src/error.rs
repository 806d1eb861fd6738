use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a bijection of an initial segment: {0:?}")]
    NotABijection(Vec<usize>),
    #[error("cycles are not disjoint or leave the degree")]
    InvalidCycles,
    #[error("at least two colors are required, got {0}")]
    TooFewColors(usize),
    #[error("color count mismatch: {0} vs {1}")]
    ColorMismatch(usize, usize),
    #[error("shift bound {bound} is below beta = {beta}")]
    ShiftBound { beta: usize, bound: usize },
    #[error("colors must differ, got {0} twice")]
    SameColor(usize),
    #[error("colors {0} and {1} are not adjacent on the polygon, so they share no vertex")]
    NotAdjacent(usize, usize),
    #[error("color {0} is out of range for n = {1}")]
    ColorOutOfRange(usize, usize),
    #[error("label {label} is invalid: {reason}")]
    InvalidLabel { label: usize, reason: &'static str },
    #[error("objects do not match: left source is {left}, right target is {right}")]
    ObjectMismatch { left: usize, right: usize },
    #[error("alpha = {alpha} must be at least beta = {beta}")]
    AlphaBelowBeta { alpha: usize, beta: usize },
    #[error("expected an endomorphism, got an ({alpha}, {beta})-board")]
    NotEndomorphism { alpha: usize, beta: usize },
    #[error("tensor has {tensor} axes but the board has {board} colors")]
    DimsMismatch { tensor: usize, board: usize },
    #[error("invalid tensor: {0}")]
    InvalidTensor(String),
    #[error("board carries labels; expected a (0,0)-board")]
    LabeledBoard,
    #[error("symbol tensor is not even")]
    NotEven,
    #[error("symbol tensor has an entry with {0} odd axes; the chain sign rule needs 0 or 2")]
    UnsupportedGrading(usize),
    #[error("truncation {truncation} is below the required {required}")]
    TruncationTooSmall { truncation: usize, required: usize },
    #[error("operation requires n = {expected}, got n = {got}")]
    WrongColorCount { expected: usize, got: usize },
    #[error("invalid Thoma parameters: {0}")]
    InvalidThomaParams(String),
    #[error("symbol is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("invalid chip: {0}")]
    InvalidChip(String),
}

pub type Result<T> = std::result::Result<T, Error>;
