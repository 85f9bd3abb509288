use thiserror::Error;

/// Errors raised by graph construction, exhaustive routines and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),

    #[error("configuration model failed after {attempts} attempts ({reason})")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("graph is not regular")]
    NotRegular,

    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("exhaustive routine needs n <= {cap}, graph has {n} vertices")]
    CapExceeded { n: usize, cap: usize },

    #[error("value array has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    #[error("function is not {m}-Lipschitz across edge {u}-{v}")]
    NotLipschitz { m: u32, u: usize, v: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("no ground state found: {0}")]
    NoGroundState(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Explicit node budget for exhaustive searches. Exceeding it is an error.
#[derive(Debug, Clone)]
pub struct NodeBudget {
    limit: u64,
    used: u64,
}

impl NodeBudget {
    pub const DEFAULT: u64 = 50_000_000;

    pub fn new(limit: u64) -> Self {
        NodeBudget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        NodeBudget::new(u64::MAX)
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
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
}

impl Default for NodeBudget {
    fn default() -> Self {
        NodeBudget::new(Self::DEFAULT)
    }
}
