use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::symmetry::Perm;

use super::hfset::HfSet;

/// A name: a finite set of `(condition, name)` pairs, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PName {
    entries: Vec<(usize, PName)>,
    rank: usize,
}

/// The upward closure of a minimal element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericFilter {
    pub minimal: usize,
    members: FixedBitSet,
}

impl GenericFilter {
    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(p)
    }

    pub fn members(&self) -> Vec<usize> {
        self.members.ones().collect()
    }
}

/// One filter per minimal element, in canonical order.
pub fn generic_filters(p: &FinitePoset) -> Vec<GenericFilter> {
    p.minimal_elements()
        .into_iter()
        .map(|m| GenericFilter {
            minimal: m,
            members: p.up_set(m).clone(),
        })
        .collect()
}

impl PName {
    pub fn new(mut entries: Vec<(usize, PName)>) -> Self {
        entries.sort();
        entries.dedup();
        let rank = entries.iter().map(|(_, n)| n.rank + 1).max().unwrap_or(0);
        PName { entries, rank }
    }

    pub fn empty() -> Self {
        PName::default()
    }

    pub fn entries(&self) -> &[(usize, PName)] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fails if a condition anywhere in the name is outside `p`.
    pub fn validate(&self, p: &FinitePoset) -> Result<()> {
        for (c, n) in &self.entries {
            if *c >= p.len() {
                return Err(Error::UnknownElement(*c));
            }
            n.validate(p)?;
        }
        Ok(())
    }

    /// Distinct sub-names reachable through entries, this name included.
    pub fn subnames(&self) -> Vec<&PName> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            for (_, n) in &out[i].entries {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
            i += 1;
        }
        out
    }

    /// `x̌ = {(1, y̌) : y ∈ x}`.
    pub fn check(p: &FinitePoset, x: &HfSet) -> PName {
        PName::new(x.members().iter().map(|y| (p.top(), PName::check(p, y))).collect())
    }

    /// `{(1, ẋ_i)}`.
    pub fn bullet(p: &FinitePoset, names: &[PName]) -> PName {
        PName::new(names.iter().map(|n| (p.top(), n.clone())).collect())
    }

    /// The name of the Kuratowski pair `(ǔ, w̌)`.
    pub fn pair(p: &FinitePoset, u: &HfSet, w: &HfSet) -> PName {
        PName::check(p, &HfSet::kuratowski(u.clone(), w.clone()))
    }

    /// `{(p, (ǔ, w̌)) : (p, u, w) ∈ graph}`.
    pub fn function(poset: &FinitePoset, graph: &[(usize, HfSet, HfSet)]) -> PName {
        PName::new(graph.iter().map(|(c, u, w)| (*c, PName::pair(poset, u, w))).collect())
    }

    /// `πẋ = {(πp, πẏ)}`.
    pub fn act(&self, pi: &Perm) -> PName {
        PName {
            entries: {
                let mut e: Vec<(usize, PName)> = self.entries.iter().map(|(c, n)| (pi.apply(*c), n.act(pi))).collect();
                e.sort();
                e.dedup();
                e
            },
            rank: self.rank,
        }
    }

    /// `ẋ^G = {ẏ^G : (p, ẏ) ∈ ẋ, p ∈ G}`.
    pub fn evaluate(&self, g: &GenericFilter) -> HfSet {
        HfSet::new(
            self.entries
                .iter()
                .filter(|(c, _)| g.contains(*c))
                .map(|(_, n)| n.evaluate(g))
                .collect(),
        )
    }
}

impl fmt::Display for PName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (c, n)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({c},{n})")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tree_poset;
    use crate::symmetry::automorphism_group;

    fn c2() -> FinitePoset {
        tree_poset(2, 2).unwrap()
    }

    #[test]
    fn check_names() {
        let p = c2();
        assert!(PName::check(&p, &HfSet::empty()).is_empty());
        let one = PName::check(&p, &HfSet::ordinal(1));
        assert_eq!(one.entries(), &[(0, PName::empty())]);
        assert_eq!(one.rank(), 1);
        for g in generic_filters(&p) {
            for n in 0..4 {
                assert_eq!(PName::check(&p, &HfSet::ordinal(n)).evaluate(&g), HfSet::ordinal(n));
            }
        }
    }

    #[test]
    fn bullet_names() {
        let p = c2();
        assert!(PName::bullet(&p, &[]).is_empty());
        let x = PName::new(vec![(1, PName::empty())]);
        assert_eq!(PName::bullet(&p, &[x.clone()]).entries(), &[(0, x)]);
    }

    #[test]
    fn filters() {
        let p = c2();
        let fs = generic_filters(&p);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].members(), vec![0, 1]);
        assert_eq!(fs[1].members(), vec![0, 2]);
        assert_eq!(generic_filters(&FinitePoset::singleton("1")).len(), 1);
        assert_eq!(generic_filters(&tree_poset(2, 3).unwrap()).len(), 4);
    }

    #[test]
    fn evaluation_and_action() {
        let p = c2();
        let x = PName::new(vec![(1, PName::empty())]);
        let fs = generic_filters(&p);
        assert_eq!(x.evaluate(&fs[0]), HfSet::ordinal(1));
        assert_eq!(x.evaluate(&fs[1]), HfSet::empty());
        let swap = automorphism_group(&p).unwrap().elements()[1].clone();
        assert_eq!(x.act(&swap), PName::new(vec![(2, PName::empty())]));
        let chk = PName::check(&p, &HfSet::ordinal(3));
        assert_eq!(chk.act(&swap), chk);
    }
}
