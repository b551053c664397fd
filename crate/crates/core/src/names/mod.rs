//! Names over finite posets, their evaluation along generic filters and the
//! forcing relation.
//!
//! In a finite poset every dense set contains every minimal element, so the
//! generic filters are exactly the upward closures of minimal elements.

mod forcing;
mod hfset;
mod pname;
mod pool;
mod spectrum;
mod symmetric;

pub use forcing::{atomic_formulas, forces, forces_recursive, Forcer, Formula};
pub use hfset::HfSet;
pub use pname::{generic_filters, GenericFilter, PName};
pub use pool::name_pool;
pub use spectrum::{bukovsky_spectrum, forces_total_function, Spectrum};
pub use symmetric::{is_hereditarily_symmetric, is_symmetric, sym_group, verify_symmetry_lemma, LemmaViolation};
