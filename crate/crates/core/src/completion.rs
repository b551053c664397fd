//! Regular-open completion of a finite poset.
//!
//! A finite separative poset densely embeds into the powerset of its minimal
//! elements, and that powerset is its regular-open algebra. Algebra elements
//! are therefore atom sets, stored as bitmasks.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Element of a [`BoolAlgebra`]: a set of atoms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AtomSet(pub u64);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: AtomSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn atoms(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms()).finish()
    }
}

/// The regular-open algebra of a finite poset with its dense embedding.
#[derive(Debug, Clone)]
pub struct BoolAlgebra {
    quotient: FinitePoset,
    projection: Vec<usize>,
    atoms: Vec<usize>,
    embed: Vec<AtomSet>,
}

pub const MAX_ATOMS: usize = 63;

impl BoolAlgebra {
    /// Completion of `p`; the separative quotient is taken first.
    pub fn regular_open_completion(p: &FinitePoset) -> Result<Self> {
        let (quotient, projection) = p.separative_quotient();
        let atoms = quotient.minimal_elements();
        if atoms.len() > MAX_ATOMS {
            return Err(Error::SizeCapExceeded {
                what: "completion atoms",
                limit: MAX_ATOMS,
                actual: atoms.len(),
            });
        }
        let class_embed: Vec<AtomSet> = quotient
            .elements()
            .map(|c| {
                let bits = atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| quotient.le(a, c))
                    .fold(0u64, |acc, (i, _)| acc | 1 << i);
                AtomSet(bits)
            })
            .collect();
        let embed = projection.iter().map(|&c| class_embed[c]).collect();
        Ok(BoolAlgebra {
            quotient,
            projection,
            atoms,
            embed,
        })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Number of algebra elements, `2^atoms`.
    pub fn size(&self) -> u128 {
        1u128 << self.atoms.len()
    }

    /// Identifiers of the atoms (canonical class representatives).
    pub fn atom_ids(&self) -> Vec<&str> {
        self.atoms.iter().map(|&a| self.quotient.id(a)).collect()
    }

    pub fn separative_quotient(&self) -> &FinitePoset {
        &self.quotient
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn zero(&self) -> AtomSet {
        AtomSet::EMPTY
    }

    pub fn one(&self) -> AtomSet {
        AtomSet(if self.atoms.is_empty() { 0 } else { u64::MAX >> (64 - self.atoms.len()) })
    }

    /// `{ m atom : m <= p }`.
    pub fn embed(&self, p: usize) -> AtomSet {
        self.embed[p]
    }

    pub fn contains(&self, x: AtomSet) -> bool {
        x.is_subset(self.one())
    }

    fn own(&self, x: AtomSet) -> Result<AtomSet> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::ForeignElement)
        }
    }

    /// Join; `join(∅) = 0`.
    pub fn join(&self, xs: &[AtomSet]) -> Result<AtomSet> {
        xs.iter().try_fold(AtomSet::EMPTY, |acc, &x| Ok(AtomSet(acc.0 | self.own(x)?.0)))
    }

    /// Meet; `meet(∅) = 1`.
    pub fn meet(&self, xs: &[AtomSet]) -> Result<AtomSet> {
        xs.iter().try_fold(self.one(), |acc, &x| Ok(AtomSet(acc.0 & self.own(x)?.0)))
    }

    pub fn complement(&self, x: AtomSet) -> Result<AtomSet> {
        Ok(AtomSet(!self.own(x)?.0 & self.one().0))
    }

    /// Supremum of an arbitrary family; in a finite algebra this is the join.
    pub fn sup(&self, xs: &[AtomSet]) -> Result<AtomSet> {
        self.join(xs)
    }

    pub fn le(&self, x: AtomSet, y: AtomSet) -> bool {
        x.is_subset(y)
    }

    /// All algebra elements in increasing bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = AtomSet> {
        (0..=self.one().0).map(AtomSet)
    }

    /// Nonzero elements of `A^⊥`: those disjoint from every member of `a`.
    pub fn perp(&self, a: &[AtomSet]) -> Result<Vec<AtomSet>> {
        let used = self.join(a)?;
        Ok(self
            .elements()
            .filter(|x| !x.is_zero() && x.is_disjoint(used))
            .collect())
    }

    /// The algebra without `0`, as a forcing poset. Element 0 is `1`; the rest
    /// follow by decreasing size, then increasing bitmask.
    pub fn forcing_poset(&self) -> Result<(FinitePoset, Vec<AtomSet>)> {
        let mut xs: Vec<AtomSet> = self.elements().filter(|x| !x.is_zero()).collect();
        crate::limits::check_elements(xs.len())?;
        xs.sort_by(|a, b| b.count().cmp(&a.count()).then(a.0.cmp(&b.0)));
        let names = self.atom_ids();
        let ids = xs
            .iter()
            .map(|x| {
                let parts: Vec<&str> = x.atoms().map(|i| names[i]).collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect();
        let poset = FinitePoset::from_le(ids, xs.len(), |a, b| xs[a].is_subset(xs[b]))?;
        Ok((poset, xs))
    }

    /// `A ∪ {sup A^⊥}` when `sup A^⊥ ≠ 0`, otherwise `A`.
    ///
    /// `a` must be an antichain of nonzero elements. The result is checked to
    /// be a maximal antichain of the nonzero part of the algebra.
    pub fn cba_maximal_extension(&self, a: &[AtomSet]) -> Result<Vec<AtomSet>> {
        let mut out: Vec<AtomSet> = Vec::with_capacity(a.len() + 1);
        for &x in a {
            if self.own(x)?.is_zero() {
                return Err(Error::ForeignElement);
            }
            if !out.contains(&x) {
                out.push(x);
            }
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if !out[i].is_disjoint(out[j]) {
                    return Err(Error::NotAntichain(i, j));
                }
            }
        }
        let rest = self.sup(&self.perp(&out)?)?;
        if !rest.is_zero() {
            out.push(rest);
        }
        out.sort();
        self.verify_maximal(&out)?;
        Ok(out)
    }

    fn verify_maximal(&self, a: &[AtomSet]) -> Result<()> {
        if self.atoms.len() <= 10 {
            let (poset, xs) = self.forcing_poset()?;
            let idx: Vec<usize> = a
                .iter()
                .map(|x| xs.iter().position(|y| y == x).expect("nonzero element"))
                .collect();
            let report = poset.classify_subset(&idx)?;
            if !report.maximal_antichain.holds {
                return Err(Error::RefinementInvalid { witness: idx });
            }
        } else if self.join(a)? != self.one() {
            return Err(Error::RefinementInvalid { witness: Vec::new() });
        }
        Ok(())
    }
}
