use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("register of {requested} qubits outside supported range 1..={cap}")]
    Size { requested: u32, cap: u32 },

    #[error("index {index} out of range for table of {len} items")]
    Index { index: usize, len: usize },

    #[error("table is empty")]
    EmptyTable,

    /// Tables must hold pairwise distinct items.
    #[error("duplicate value {value} at line {line}; table items must be distinct")]
    Duplicate { value: String, line: usize },

    #[error("value at position {position} is not comparable (NaN?)")]
    Incomparable { position: usize },

    #[error("line {line}: cannot parse {text:?} as a number")]
    Parse { line: usize, text: String },

    #[error("{0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for bad input, 3 for a broken
    /// invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }
}
