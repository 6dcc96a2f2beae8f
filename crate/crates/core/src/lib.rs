//! Exact computation for unary pure inductive logic: languages, state
//! descriptions and P-spectra, permutation actions, evaluable probability
//! functions, bounded principle checkers, and the representation of
//! spectrum-symmetric product functions by finitary building blocks.

pub mod decompose;
pub mod error;
pub mod lang;
pub mod limits;
pub mod linalg;
pub mod perms;
pub mod principles;
pub mod prob;
pub mod rational;
pub mod spectra;

pub use error::{Error, Result};
pub use lang::{Atom, QfSentence, StateDescription};
pub use limits::Limits;
pub use rational::Rational;
