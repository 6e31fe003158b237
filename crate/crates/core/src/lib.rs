//! Coalgebraic modal logic over finite coalgebras: predicate liftings,
//! Λ-simulations and Λ-bisimulations, terminal-sequence equivalence,
//! quotient witnesses and coupling-based `T`-bisimulations, together with
//! seeded generators and brute-force oracles that exercise them.

pub mod behavioural;
pub mod coalgebra;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod harness;
pub mod io;
pub mod liftings;
pub mod logic;
pub mod num;
pub mod relation;
pub mod signature;
pub mod simulation;

pub use coalgebra::{Coalgebra, FunctorKind, FunctorValue, KindTag, State, StateSet};
pub use error::{Error, Result};
pub use liftings::LambdaSignature;
pub use logic::{Formula, Modality};
pub use relation::Relation;
pub use signature::SignatureSpec;
