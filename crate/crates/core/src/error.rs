use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid uniformity: {0}")]
    InvalidUniformity(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid vertex pair ({0}, {1})")]
    InvalidPair(usize, usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{what}: search budget of {limit} nodes exhausted")]
    BudgetExceeded { what: String, limit: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("divisibility conditions fail for (n, k) = ({n}, {k})")]
    Divisibility { n: usize, k: usize },
    #[error("no construction available for (n, k) = ({n}, {k}): {reason}")]
    DesignUnavailable { n: usize, k: usize, reason: String },
    #[error("packing search gave up with {conflicts} conflicting edges")]
    PackingFailed { conflicts: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

/// Node counter for exhaustive searches. Exhaustion is an error, never a silent cutoff.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
    what: &'static str,
}

impl Budget {
    pub fn new(what: &'static str, limit: u64) -> Self {
        Budget { limit, used: 0, what }
    }

    pub fn unlimited(what: &'static str) -> Self {
        Budget::new(what, u64::MAX)
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { what: self.what.to_string(), limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }
}
