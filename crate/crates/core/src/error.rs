use thiserror::Error;

/// Error type shared by every module in this crate.
///
/// `Usage` marks precondition violations on operation inputs; the remaining
/// variants are the named domain failures of the individual calculi.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    /// A continued-fraction tail evaluated to zero, so the next division is
    /// undefined. Only reachable through the relaxed last-entry-1 form.
    #[error("degenerate expansion: tail evaluates to zero")]
    DegenerateExpansion,

    /// Edge rounding needs both dividing sets to meet the annulus in the same
    /// number of points, i.e. equal slope denominators.
    #[error("imbalanced annulus: slopes {0} and {1} have different denominators")]
    ImbalancedAnnulus(String, String),

    #[error("not a reduced cycle: entry {0} is < 2")]
    NotReducedCycle(i64),

    #[error("not a blowdown candidate: entry at position {0} is {1}, expected 1")]
    NotBlowdownCandidate(usize, i64),

    /// Blowdown on a chain of length < 3 would leave the cyclic-chain calculus.
    #[error("irreducible: chain of length {0} admits no blowdown")]
    Irreducible(usize),

    #[error("unsupported move: {0}")]
    UnsupportedMove(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("cannot reach framing by stabilization: component {component} has tb {tb} < framing {framing} + 1")]
    CannotReachFraming {
        component: usize,
        tb: i64,
        framing: i64,
    },

    #[error("d3 undefined for this presentation: linking matrix is singular")]
    D3Undefined,

    #[error("malformed front: odd cusp total {0}")]
    MalformedFront(usize),

    #[error("slope arithmetic overflow")]
    Overflow,

    /// A verified internal postcondition failed. Indicates a bug, never a
    /// property of the input.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
