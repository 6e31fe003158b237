use thiserror::Error;

use crate::behavioural::QuotientFailure;
use crate::coalgebra::{KindTag, State, ValidationError, ValueError};
use crate::enumerate::EnumerationError;
use crate::logic::{Modality, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("functor kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: KindTag, found: KindTag },
    #[error("modality {modality} is not interpretable over {kind} coalgebras")]
    SignatureMismatch { modality: Modality, kind: KindTag },
    #[error("base of {size} states exceeds the exhaustive-subset bound {limit} (set COALSIM_MAX_BASE to raise it)")]
    BaseTooLarge { size: usize, limit: usize },
    #[error("carrier of {size} states exceeds the oracle bound {limit}")]
    CarrierTooLarge { size: usize, limit: usize },
    #[error("map is undefined on state {0}")]
    PartialMap(State),
    #[error("relation does not fit the carriers: {0}")]
    CarrierMismatch(String),
    #[error("signature is not declared separating")]
    NotSeparating,
    #[error("infinite multiset weight at state {0}; coupling search needs finite weights")]
    InfiniteWeight(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    NotWellDefined(Box<QuotientFailure>),
    #[error("internal cross-check failed: {0}")]
    InternalCheck(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<ValueError> for Error {
    fn from(e: ValueError) -> Self {
        match e {
            ValueError::PartialMap(s) => Error::PartialMap(s),
            ValueError::KindMismatch { left, right } => Error::KindMismatch {
                expected: left,
                found: right,
            },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
