use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element or measure does not belong to the expected group descriptor")]
    DescriptorMismatch,
    #[error("actions are over different groups")]
    GroupMismatch,
    #[error("letter {letter} out of range for free group of rank {rank}")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("support size {size} exceeds cap {cap}")]
    SupportCapExceeded { size: usize, cap: usize },
    #[error("configuration space of {atoms} atoms exceeds cap {cap}")]
    SizeCapExceeded { atoms: usize, cap: usize },
    #[error("objects live on spaces of different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("block {block} out of range ({blocks} blocks)")]
    BlockOutOfRange { block: usize, blocks: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("cocycle equation violated at g={g}, h={h}, atom {atom}")]
    CocycleEquationViolated { g: String, h: String, atom: usize },
    #[error("generator {generator} does not permute orbit blocks (atom {atom})")]
    OrbitNotPermuted { generator: usize, atom: usize },
    #[error("action is not ergodic")]
    NotErgodic,
    #[error("set is not a union of invariant blocks")]
    NotInvariant,
    #[error("exponent p must be at least 1, got {0}")]
    BadExponent(f64),
    #[error("power iteration did not converge in {0} iterations")]
    IterationCapExceeded(usize),
    #[error("product dimension {dim} exceeds cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
