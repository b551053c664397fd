use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::poset::FinitePoset;
use crate::symmetry::Perm;

use super::pname::{generic_filters, GenericFilter, PName};

/// Quantifier-free formulas over names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(PName, PName),
    Mem(PName, PName),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn eq(x: PName, y: PName) -> Self {
        Formula::Eq(x, y)
    }

    pub fn mem(x: PName, y: PName) -> Self {
        Formula::Mem(x, y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Mem(..))
    }

    /// `φ(πẋ)`.
    pub fn act(&self, pi: &Perm) -> Formula {
        match self {
            Formula::Eq(x, y) => Formula::Eq(x.act(pi), y.act(pi)),
            Formula::Mem(x, y) => Formula::Mem(x.act(pi), y.act(pi)),
            Formula::Not(a) => Formula::not(a.act(pi)),
            Formula::And(a, b) => Formula::and(a.act(pi), b.act(pi)),
            Formula::Or(a, b) => Formula::or(a.act(pi), b.act(pi)),
        }
    }

    /// Truth in the extension by `g`.
    pub fn holds_in(&self, g: &GenericFilter) -> bool {
        match self {
            Formula::Eq(x, y) => x.evaluate(g) == y.evaluate(g),
            Formula::Mem(x, y) => y.evaluate(g).contains(&x.evaluate(g)),
            Formula::Not(a) => !a.holds_in(g),
            Formula::And(a, b) => a.holds_in(g) && b.holds_in(g),
            Formula::Or(a, b) => a.holds_in(g) || b.holds_in(g),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Mem(x, y) => write!(f, "{x} ∈ {y}"),
            Formula::Not(a) => write!(f, "¬({a})"),
            Formula::And(a, b) => write!(f, "({a}) ∧ ({b})"),
            Formula::Or(a, b) => write!(f, "({a}) ∨ ({b})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All `x ∈ y` and `x = y` over a pool.
pub fn atomic_formulas(names: &[PName]) -> Vec<Formula> {
    let mut out = Vec::with_capacity(2 * names.len() * names.len());
    for x in names {
        for y in names {
            out.push(Formula::mem(x.clone(), y.clone()));
            out.push(Formula::eq(x.clone(), y.clone()));
        }
    }
    out
}

/// `p ⊩ φ` read semantically: `φ` holds in the extension by every generic
/// filter containing `p`.
pub fn forces(poset: &FinitePoset, p: usize, phi: &Formula) -> bool {
    generic_filters(poset)
        .iter()
        .filter(|g| g.contains(p))
        .all(|g| phi.holds_in(g))
}

/// The forcing relation by recursion on names, with the usual
/// dense-below clauses. Results are memoized per instance.
pub struct Forcer<'a> {
    poset: &'a FinitePoset,
    atoms: HashMap<(bool, usize, PName, PName), bool>,
}

impl<'a> Forcer<'a> {
    pub fn new(poset: &'a FinitePoset) -> Self {
        Forcer {
            poset,
            atoms: HashMap::new(),
        }
    }

    /// `{r : r ≤ p}` meets `set` below every one of its members.
    fn dense_below(&self, p: usize, set: &FixedBitSet) -> bool {
        self.poset
            .down_set(p)
            .ones()
            .all(|r| !self.poset.down_set(r).is_disjoint(set))
    }

    fn below_where(&mut self, p: usize, mut pred: impl FnMut(&mut Self, usize) -> bool) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.poset.len());
        let below: Vec<usize> = self.poset.down_set(p).ones().collect();
        for q in below {
            if pred(self, q) {
                set.insert(q);
            }
        }
        set
    }

    /// `p ⊩ x ∈ y`: densely below `p` some `(s, z) ∈ y` has `q ≤ s` and `q ⊩ x = z`.
    pub fn mem(&mut self, p: usize, x: &PName, y: &PName) -> bool {
        let key = (true, p, x.clone(), y.clone());
        if let Some(&v) = self.atoms.get(&key) {
            return v;
        }
        let set = self.below_where(p, |f, q| {
            y.entries()
                .iter()
                .any(|(s, z)| f.poset.le(q, *s) && f.eq(q, x, z))
        });
        let v = self.dense_below(p, &set);
        self.atoms.insert(key, v);
        v
    }

    /// `p ⊩ x = y`: for each `(s, z)` in either name, densely below `p`
    /// every `q ≤ s` forces `z` into the other name.
    pub fn eq(&mut self, p: usize, x: &PName, y: &PName) -> bool {
        let key = (false, p, x.clone(), y.clone());
        if let Some(&v) = self.atoms.get(&key) {
            return v;
        }
        let mut v = true;
        'sides: for (a, b) in [(x, y), (y, x)] {
            for (s, z) in a.entries() {
                let set = self.below_where(p, |f, q| !f.poset.le(q, *s) || f.mem(q, z, b));
                if !self.dense_below(p, &set) {
                    v = false;
                    break 'sides;
                }
            }
        }
        self.atoms.insert(key, v);
        v
    }

    pub fn forces(&mut self, p: usize, phi: &Formula) -> bool {
        match phi {
            Formula::Eq(x, y) => self.eq(p, x, y),
            Formula::Mem(x, y) => self.mem(p, x, y),
            Formula::Not(a) => {
                let below: Vec<usize> = self.poset.down_set(p).ones().collect();
                below.into_iter().all(|q| !self.forces(q, a))
            }
            Formula::And(a, b) => self.forces(p, a) && self.forces(p, b),
            Formula::Or(a, b) => {
                let set = self.below_where(p, |f, q| f.forces(q, a) || f.forces(q, b));
                self.dense_below(p, &set)
            }
        }
    }
}

/// One-shot recursive forcing.
pub fn forces_recursive(poset: &FinitePoset, p: usize, phi: &Formula) -> bool {
    Forcer::new(poset).forces(p, phi)
}
