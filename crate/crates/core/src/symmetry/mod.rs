//! Permutation groups acting on posets, support ideals and the notions of
//! large subgroup and stable subset they induce.

mod group;
mod ideal;
mod mixing;
mod structure;
mod wreath;

pub use group::{automorphism_group, is_automorphism, Perm, PermGroup};
pub use ideal::SupportIdeal;
pub use mixing::{find_mixing_automorphism, is_weakly_homogeneous, AddSpace, ConditionSpace, Mixing};
pub use structure::{NormalityReport, NormalityViolation, Sections, StableSubsets, SymmetryStructure};
pub use wreath::{decompose, wreath, Wreath};
