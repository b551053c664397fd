use serde::Serialize;

use crate::constructions::combinations;
use crate::error::{Error, Result};

/// An ideal of support sets over `0..base`, given by generators.
///
/// By default membership means "contained in some generator", i.e. the
/// downward closure of the family. A "size at most k" family is not closed
/// under unions on a finite base; closing it would leave the full powerset.
/// [`SupportIdeal::union_closed`] switches to "contained in a finite union of
/// generators".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportIdeal {
    base: usize,
    generators: Vec<Vec<usize>>,
    union_closed: bool,
}

impl SupportIdeal {
    pub fn from_family(base: usize, family: Vec<Vec<usize>>) -> Result<Self> {
        let mut generators = Vec::with_capacity(family.len());
        for mut g in family {
            g.sort_unstable();
            g.dedup();
            if let Some(&x) = g.iter().find(|&&x| x >= base) {
                return Err(Error::UnknownPoint(x));
            }
            generators.push(g);
        }
        if generators.is_empty() {
            generators.push(Vec::new());
        }
        generators.sort();
        generators.dedup();
        Ok(SupportIdeal {
            base,
            generators,
            union_closed: false,
        })
    }

    /// All subsets of size at most `k`.
    pub fn bounded(base: usize, k: usize) -> Self {
        let k = k.min(base);
        let generators = combinations(base, k);
        SupportIdeal {
            base,
            generators,
            union_closed: false,
        }
    }

    pub fn principal(base: usize, set: Vec<usize>) -> Result<Self> {
        Self::from_family(base, vec![set])
    }

    /// `{∅}`.
    pub fn trivial(base: usize) -> Self {
        SupportIdeal {
            base,
            generators: vec![Vec::new()],
            union_closed: false,
        }
    }

    /// The full powerset.
    pub fn full(base: usize) -> Self {
        SupportIdeal {
            base,
            generators: vec![(0..base).collect()],
            union_closed: false,
        }
    }

    pub fn union_closed(mut self) -> Self {
        self.union_closed = true;
        self
    }

    pub fn is_union_closed_mode(&self) -> bool {
        self.union_closed
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    fn covered(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.generators.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn contains(&self, a: &[usize]) -> bool {
        if self.union_closed {
            let cov = self.covered();
            a.iter().all(|x| cov.binary_search(x).is_ok())
        } else {
            self.generators.iter().any(|g| a.iter().all(|x| g.binary_search(x).is_ok()))
        }
    }

    /// Inclusion-maximal members; every member is below one of them.
    pub fn maximal_members(&self) -> Vec<Vec<usize>> {
        if self.union_closed {
            return vec![self.covered()];
        }
        let subset = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|x| b.binary_search(x).is_ok());
        self.generators
            .iter()
            .filter(|g| !self.generators.iter().any(|h| h != *g && subset(g, h)))
            .cloned()
            .collect()
    }

    /// Whether the member set happens to be closed under pairwise unions.
    pub fn is_union_closed(&self) -> bool {
        let max = self.maximal_members();
        max.iter().all(|a| {
            max.iter().all(|b| {
                let mut u = a.clone();
                u.extend_from_slice(b);
                u.sort_unstable();
                u.dedup();
                self.contains(&u)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_membership() {
        let i = SupportIdeal::bounded(3, 1);
        assert!(i.contains(&[]));
        assert!(i.contains(&[2]));
        assert!(!i.contains(&[0, 1]));
        assert!(!i.is_union_closed());
        assert!(i.clone().union_closed().contains(&[0, 1, 2]));
    }

    #[test]
    fn trivial_and_full() {
        assert!(!SupportIdeal::trivial(2).contains(&[0]));
        assert!(SupportIdeal::full(2).contains(&[0, 1]));
        assert!(SupportIdeal::trivial(2).is_union_closed());
    }

    #[test]
    fn maximal_members_drop_dominated_generators() {
        let i = SupportIdeal::from_family(4, vec![vec![0], vec![0, 1], vec![3]]).unwrap();
        assert_eq!(i.maximal_members(), vec![vec![0, 1], vec![3]]);
        assert_eq!(SupportIdeal::from_family(2, vec![vec![5]]), Err(Error::UnknownPoint(5)));
    }
}
