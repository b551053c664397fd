//! Size caps for constructions and exhaustive searches.
//!
//! `CHAINCOND_MAX_ELEMENTS` overrides the element cap for constructed posets,
//! `CHAINCOND_MAX_EXHAUSTIVE` the cap on posets handed to subset-exhaustive
//! predicates. Both are read once per process.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest poset any constructor or parser will materialize.
    pub max_elements: usize,
    /// Largest poset on which predicates quantify over all subsets.
    pub max_exhaustive: usize,
    /// Largest permutation group enumerated in full.
    pub max_group_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: 4096,
            max_exhaustive: 24,
            max_group_order: 1 << 18,
        }
    }
}

fn env_usize(key: &str) -> Option<usize> {
    std::env::var(key).ok()?.trim().parse().ok()
}

pub fn limits() -> &'static Limits {
    static LIMITS: OnceLock<Limits> = OnceLock::new();
    LIMITS.get_or_init(|| {
        let mut l = Limits::default();
        if let Some(n) = env_usize("CHAINCOND_MAX_ELEMENTS") {
            l.max_elements = n;
        }
        if let Some(n) = env_usize("CHAINCOND_MAX_EXHAUSTIVE") {
            l.max_exhaustive = n.min(63);
        }
        l
    })
}

pub(crate) fn check_elements(actual: usize) -> Result<()> {
    let limit = limits().max_elements;
    if actual > limit {
        return Err(Error::SizeCapExceeded {
            what: "poset",
            limit,
            actual,
        });
    }
    Ok(())
}

pub(crate) fn check_exhaustive(actual: usize) -> Result<()> {
    let limit = limits().max_exhaustive;
    if actual > limit {
        return Err(Error::SizeCapExceeded {
            what: "exhaustive subset search",
            limit,
            actual,
        });
    }
    Ok(())
}
