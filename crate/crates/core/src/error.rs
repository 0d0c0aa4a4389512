use thiserror::Error;

use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A ball coefficient straddles zero at the current working precision.
    #[error("undecidable zero test at {prec} bits")]
    UndecidableZero { prec: u32 },

    /// A truncated parameter series vanishes modulo t^K but terms of order >= K were dropped.
    #[error("coefficient vanishes modulo t^{order} but higher-order terms are unknown")]
    TruncatedZero { order: usize },

    #[error("incompatible coefficient domains: {0}")]
    IncompatibleDomains(String),

    #[error("exponent denominator {found} exceeds the cap {cap}")]
    DenominatorCap { found: u64, cap: u64 },

    #[error("expansion depth cap of {0} terms exceeded")]
    DepthCap(usize),

    #[error("polynomial is not mini-regular in x (multiplicity {multiplicity})")]
    NotMiniRegular { multiplicity: usize },

    #[error("no shear among {0} candidates makes the polynomial mini-regular")]
    ShearExhausted(usize),

    #[error("division by a value that may vanish")]
    NonInvertible,

    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("edge index {index} out of range 1..={edges}")]
    EdgeIndex { index: usize, edges: usize },

    #[error("expansion is too shallow: known to order {known}, need {needed}")]
    InsufficientDepth { known: Rat, needed: Rat },

    #[error("candidate list exhausted")]
    CandidatesExhausted,

    #[error("singular point: {0}")]
    Singular(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures that more working precision may resolve.
    pub fn wants_precision(&self) -> bool {
        matches!(self, Error::UndecidableZero { .. })
    }
}
