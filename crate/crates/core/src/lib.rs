//! Exact computations over `F_p` for base loci of linear systems of threefolds
//! in `P^5` and the plane configurations that control their existence.

pub mod builders;
pub mod cf;
pub mod character;
pub mod error;
pub mod implicit;
pub mod invariants;
pub mod kernel;
pub mod pipeline;
pub mod points;
pub mod verifier;

pub use error::{Error, Result};
