use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph must have at least two vertices")]
    TooFewVertices,

    #[error("duplicate edge {{{0}, {1}}}: graphs must be simple")]
    DuplicateEdge(usize, usize),

    #[error("self-loop at vertex {0}: graphs must be simple")]
    SelfLoop(usize),

    #[error("graph is disconnected: vertex {0} is unreachable from v_out")]
    Disconnected(usize),

    #[error("v_in and v_out coincide (vertex {0})")]
    InOutCoincide(usize),

    #[error("removing v_out disconnects the graph: vertex {0} cannot be reached by a proper walk")]
    OutRemovalDisconnects(usize),

    #[error("weight at vertex {vertex} is {value}; weights must be strictly positive and finite")]
    NonpositiveWeight { vertex: usize, value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),

    #[error("{count} eigenvalues below the null threshold; expected exactly one (is the graph connected?)")]
    ZeroEigenvalueAmbiguous { count: usize },

    #[error("occupation system is singular")]
    SingularSystem,

    #[error("walk exceeded the step cap of {0} steps")]
    StepLimitExceeded(u64),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("invalid occupation target: {0}")]
    InvalidTarget(String),

    #[error("line search failed to find a descent step at iteration {iter} (cost {cost:e})")]
    NoDescent { iter: usize, cost: f64 },

    #[error("correlation undefined: {0} has zero variance")]
    ZeroVariance(&'static str),

    #[error("no proper walk fits within a cap of {cap} steps (shortest needs {needed})")]
    CapTooSmall { cap: usize, needed: usize },

    #[error("target is not in the solvable set ({stage}): {reason}")]
    NotInPsi { stage: String, reason: String },

    #[error("root bracketing failed: residuals {lo:e} and {hi:e} at the bracket endpoints")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("alpha = {alpha} must lie strictly between 0 and r(v) = {target}")]
    AlphaOutOfRange { alpha: f64, target: f64 },

    #[error("vertices {0} and {1} are not twins")]
    NotTwins(usize, usize),

    #[error("graph is irreducible: no pendant or twin reduction applies and it is neither a path nor complete")]
    Irreducible,

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("round-trip check failed: forward map differs from target by {0:e}")]
    RoundTrip(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// True for rejections that say the target or graph lies outside the
    /// solvable territory rather than that the input was malformed.
    pub fn is_structural(&self) -> bool {
        matches!(self, Error::NotInPsi { .. } | Error::Irreducible)
    }
}
