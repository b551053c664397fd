//! Finite forcing combinatorics.
//!
//! Posets with a maximum, their Boolean completions, the standard poset
//! constructions, permutation groups acting on posets, names and a decidable
//! forcing relation, and threshold versions of the countable chain
//! condition variants together with exhaustive audits.

pub mod chain;
pub mod completion;
pub mod constructions;
pub mod error;
pub mod limits;
pub mod names;
pub mod poset;
pub mod symmetry;

pub use error::{Error, Result};
pub use poset::{Check, FinitePoset, SubsetReport, Witness};
