//! Threshold versions of the chain conditions, absolute and relative to a
//! symmetry structure, with the refinement constructions and exhaustive
//! audits over corpora of small posets.
//!
//! `CC1(n)`: every maximal antichain has size at most `n`.
//! `CC2(n)`: every antichain has size at most `n`.
//! `CC3(n)`: every predense set contains a predense subset of size at most `n`.
//! `CCE(n)`: every antichain extends to a maximal antichain of size at most `n`.

mod abs;
mod audit;
mod corpus;
mod masks;
mod refine;
mod rel;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use abs::cc_abs;
pub use audit::{implication_audit, AuditReport, AuditRow, Implication};
pub use corpus::{canonical_key, posets_with_top, random_poset, Corpus};
pub use refine::{
    extend_to_maximal, greedy_max_antichain, rank_minimal_members, shrink_predense, tree_refinement, Shrink,
};
pub use rel::{cc_rel, stable_family};
pub use search::{counterexample_search, named_predicate, Found, Predicate, SearchReport, SearchWitness, PREDICATES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CCVariant {
    #[serde(rename = "cc1")]
    CC1,
    #[serde(rename = "cc2")]
    CC2,
    #[serde(rename = "cc3")]
    CC3,
    #[serde(rename = "cce")]
    CCE,
}

impl CCVariant {
    pub const ALL: [CCVariant; 4] = [CCVariant::CC1, CCVariant::CC2, CCVariant::CC3, CCVariant::CCE];

    pub fn name(self) -> &'static str {
        match self {
            CCVariant::CC1 => "cc1",
            CCVariant::CC2 => "cc2",
            CCVariant::CC3 => "cc3",
            CCVariant::CCE => "cce",
        }
    }
}

impl fmt::Display for CCVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CCVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cc1" => Ok(CCVariant::CC1),
            "cc2" => Ok(CCVariant::CC2),
            "cc3" => Ok(CCVariant::CC3),
            "cce" => Ok(CCVariant::CCE),
            _ => Err(format!("unknown variant `{s}` (expected cc1, cc2, cc3 or cce)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Absolute,
    Relative,
}

/// What the exhaustive pass saw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Sets quantified over by the outer quantifier.
    pub examined: u64,
    /// Worst value met: largest antichain size (CC1, CC2), largest minimum
    /// refinement (CC3), largest minimum maximal extension (CCE).
    pub extremal: usize,
    /// For a CC3 witness, a least predense subset of it; for a CCE witness,
    /// a least maximal antichain extending it.
    pub refinement: Option<Vec<usize>>,
    /// Candidate subsets checked while computing `refinement` for CC3.
    pub refinement_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CCReport {
    pub variant: CCVariant,
    pub threshold: usize,
    pub scope: Scope,
    pub holds: bool,
    /// A set falsifying the property.
    ///
    /// CC1, CC2: the lexicographically least antichain of largest size.
    /// CC3: the largest failing predense set, least lexicographically among
    /// equals. CCE: the smallest failing antichain, then least lexicographically.
    pub witness: Option<Vec<usize>>,
    pub certificate: Certificate,
}
