//! Finite forcing posets and the basic combinatorial predicates on them.
//!
//! A [`FinitePoset`] is a partial order with a maximum `1`. Lower elements are
//! stronger conditions. Elements are addressed by their position in the
//! canonical order, which is also used for every deterministic tie-break.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits;

/// A finite partial order with a designated maximum.
#[derive(Clone)]
pub struct FinitePoset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    // down[p] = { q : q <= p }, up[p] = { q : p <= q }
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    top: usize,
    compat: OnceLock<Vec<FixedBitSet>>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.down == other.down && self.top == other.top
    }
}

impl Eq for FinitePoset {}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<(&str, &str)> = self
            .covers()
            .into_iter()
            .map(|(a, b)| (self.id(a), self.id(b)))
            .collect();
        f.debug_struct("FinitePoset")
            .field("elements", &self.ids)
            .field("top", &self.id(self.top))
            .field("covers", &covers)
            .finish()
    }
}

/// Witness attached to a failing flag of a [`SubsetReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Element(usize),
    Pair(usize, usize),
}

/// One evaluated property together with its falsifying witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Check {
    fn pass() -> Self {
        Check {
            holds: true,
            witness: None,
        }
    }

    fn fail(w: Witness) -> Self {
        Check {
            holds: false,
            witness: Some(w),
        }
    }
}

/// Classification of a subset against the forcing vocabulary.
///
/// Witnesses: a compatible pair of distinct members for `antichain`; an
/// element incompatible with every member for `predense`; an element with no
/// member below it for `dense`; a pair `(a, r)` with `a` a member, `r <= a`
/// and `r` not a member for `open`. `maximal_antichain` reuses whichever of
/// the antichain or predense witnesses applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubsetReport {
    pub antichain: Check,
    pub maximal_antichain: Check,
    pub predense: Check,
    pub dense: Check,
    pub open: Check,
}

fn bitset(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n)
}

impl FinitePoset {
    /// Builds a poset from a relation, taking the reflexive-transitive
    /// closure and merging preorder-equivalent elements into their
    /// canonical-least representative.
    ///
    /// `pairs` are read as `(a, b)` meaning `a <= b`. When `top` is given it
    /// must end up above every element; otherwise the unique maximum is used.
    pub fn build<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)], top: Option<&str>) -> Result<Self> {
        let n = elements.len();
        limits::check_elements(n)?;
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicateElement(e.as_ref().to_string()));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::DanglingElement(s.to_string()));
        // up[i] = { j : i <= j }
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut b = bitset(n);
                b.insert(i);
                b
            })
            .collect();
        for (a, b) in pairs {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            up[a].insert(b);
        }
        if let Some(t) = top {
            lookup(t)?;
        }
        // Warshall closure over rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let mut rep = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if rep[i] != usize::MAX {
                continue;
            }
            rep[i] = reps.len();
            for j in (i + 1)..n {
                if up[i].contains(j) && up[j].contains(i) {
                    rep[j] = reps.len();
                }
            }
            reps.push(i);
        }
        let m = reps.len();
        let ids: Vec<String> = reps.iter().map(|&i| elements[i].as_ref().to_string()).collect();
        let le = |a: usize, b: usize| up[reps[a]].contains(reps[b]);
        let poset = Self::from_le(ids, m, le)?;
        if let Some(t) = top {
            let t = rep[index[t]];
            if t != poset.top {
                return Err(Error::NoMaximum);
            }
        }
        Ok(poset)
    }

    /// Builds a poset from an order that is already a partial order.
    pub(crate) fn from_le(ids: Vec<String>, n: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        limits::check_elements(n)?;
        debug_assert_eq!(ids.len(), n);
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| bitset(n)).collect();
        let mut up: Vec<FixedBitSet> = (0..n).map(|_| bitset(n)).collect();
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        let top = (0..n).find(|&t| down[t].count_ones(..) == n).ok_or(Error::NoMaximum)?;
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateElement(id.clone()));
            }
        }
        debug_assert!((0..n).all(|a| (0..n).all(|b| a == b || !(up[a].contains(b) && up[b].contains(a)))));
        Ok(FinitePoset {
            ids,
            index,
            down,
            up,
            top,
            compat: OnceLock::new(),
        })
    }

    pub fn singleton(id: &str) -> Self {
        Self::from_le(vec![id.to_string()], 1, |_, _| true).expect("singleton")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Always false: every poset contains its maximum.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, p: usize) -> &str {
        &self.ids[p]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// `p <= q`, i.e. `p` is at least as strong as `q`.
    pub fn le(&self, p: usize, q: usize) -> bool {
        self.up[p].contains(q)
    }

    pub fn lt(&self, p: usize, q: usize) -> bool {
        p != q && self.le(p, q)
    }

    /// `{ q : q <= p }`.
    pub fn down_set(&self, p: usize) -> &FixedBitSet {
        &self.down[p]
    }

    /// `{ q : p <= q }`.
    pub fn up_set(&self, p: usize) -> &FixedBitSet {
        &self.up[p]
    }

    fn compat_rows(&self) -> &[FixedBitSet] {
        self.compat.get_or_init(|| {
            let n = self.len();
            (0..n)
                .map(|p| {
                    let mut row = bitset(n);
                    for q in 0..n {
                        if !self.down[p].is_disjoint(&self.down[q]) {
                            row.insert(q);
                        }
                    }
                    row
                })
                .collect()
        })
    }

    /// Elements compatible with `p`.
    pub fn compatible_with(&self, p: usize) -> &FixedBitSet {
        &self.compat_rows()[p]
    }

    pub(crate) fn compat(&self, p: usize, q: usize) -> bool {
        self.compat_rows()[p].contains(q)
    }

    pub(crate) fn check(&self, p: usize) -> Result<usize> {
        if p < self.len() {
            Ok(p)
        } else {
            Err(Error::UnknownElement(p))
        }
    }

    /// Validates, sorts and deduplicates a subset.
    pub fn normalize(&self, a: &[usize]) -> Result<Vec<usize>> {
        let mut v = a.iter().map(|&p| self.check(p)).collect::<Result<Vec<_>>>()?;
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    pub fn subset_of_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        let v = ids
            .iter()
            .map(|s| self.index_of(s.as_ref()).ok_or_else(|| Error::DanglingElement(s.as_ref().to_string())))
            .collect::<Result<Vec<_>>>()?;
        self.normalize(&v)
    }

    /// True iff `p` and `q` have a common extension.
    pub fn compatible(&self, p: usize, q: usize) -> Result<bool> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.compat(p, q))
    }

    /// `A^⊥`: the elements incompatible with every member of `a`.
    pub fn perp(&self, a: &[usize]) -> Result<Vec<usize>> {
        let a = self.normalize(a)?;
        Ok(self.elements().filter(|&p| a.iter().all(|&q| !self.compat(p, q))).collect())
    }

    /// `{ q : q <= p for some p in a }`.
    pub fn downward_closure(&self, a: &[usize]) -> Result<Vec<usize>> {
        let a = self.normalize(a)?;
        let mut acc = bitset(self.len());
        for &p in &a {
            acc.union_with(&self.down[p]);
        }
        Ok(acc.ones().collect())
    }

    pub(crate) fn mask(&self, a: &[usize]) -> FixedBitSet {
        let mut m = bitset(self.len());
        for &p in a {
            m.insert(p);
        }
        m
    }

    pub fn classify_subset(&self, a: &[usize]) -> Result<SubsetReport> {
        let a = self.normalize(a)?;
        let member = self.mask(&a);

        let mut antichain = Check::pass();
        'outer: for (i, &p) in a.iter().enumerate() {
            for &q in &a[i + 1..] {
                if self.compat(p, q) {
                    antichain = Check::fail(Witness::Pair(p, q));
                    break 'outer;
                }
            }
        }

        let predense = match self.compat_rows().iter().position(|row| row.is_disjoint(&member)) {
            Some(p) => Check::fail(Witness::Element(p)),
            None => Check::pass(),
        };

        let dense = match self.down.iter().position(|d| d.is_disjoint(&member)) {
            Some(p) => Check::fail(Witness::Element(p)),
            None => Check::pass(),
        };

        let mut open = Check::pass();
        'open: for &p in &a {
            for r in self.down[p].ones() {
                if !member.contains(r) {
                    open = Check::fail(Witness::Pair(p, r));
                    break 'open;
                }
            }
        }

        let maximal_antichain = if !antichain.holds {
            antichain
        } else {
            predense
        };

        Ok(SubsetReport {
            antichain,
            maximal_antichain,
            predense,
            dense,
            open,
        })
    }

    pub fn is_antichain(&self, a: &[usize]) -> bool {
        a.iter().enumerate().all(|(i, &p)| a[i + 1..].iter().all(|&q| p == q || !self.compat(p, q)))
    }

    pub fn is_predense(&self, a: &[usize]) -> bool {
        let member = self.mask(a);
        self.compat_rows().iter().all(|row| !row.is_disjoint(&member))
    }

    pub fn is_maximal_antichain(&self, a: &[usize]) -> bool {
        self.is_antichain(a) && self.is_predense(a)
    }

    /// Minimal elements (the strongest conditions), in canonical order.
    pub fn minimal_elements(&self) -> Vec<usize> {
        self.elements().filter(|&p| self.down[p].count_ones(..) == 1).collect()
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up[a].ones() {
                if a == b {
                    continue;
                }
                let between = self.up[a].ones().any(|c| c != a && c != b && self.lt(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// `p ≼ q` iff every `r <= p` is compatible with `q`.
    pub fn separative_le(&self, p: usize, q: usize) -> bool {
        self.down[p].ones().all(|r| self.compat(r, q))
    }

    /// Quotient by `≼`-equivalence. The projection sends each element to the
    /// index of its class, represented by its canonical-least member.
    pub fn separative_quotient(&self) -> (FinitePoset, Vec<usize>) {
        let n = self.len();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for p in 0..n {
            if class[p] != usize::MAX {
                continue;
            }
            class[p] = reps.len();
            for q in (p + 1)..n {
                if class[q] == usize::MAX && self.separative_le(p, q) && self.separative_le(q, p) {
                    class[q] = reps.len();
                }
            }
            reps.push(p);
        }
        let ids = reps.iter().map(|&p| self.ids[p].clone()).collect();
        let quotient = FinitePoset::from_le(ids, reps.len(), |a, b| self.separative_le(reps[a], reps[b]))
            .expect("quotient of a poset with maximum has a maximum");
        (quotient, class)
    }

    /// True iff `p ≰ q` always yields some `r <= p` incompatible with `q`.
    pub fn is_separative(&self) -> bool {
        self.elements()
            .all(|p| self.elements().all(|q| self.le(p, q) || !self.separative_le(p, q)))
    }

    /// Returns a compatible but incomparable pair if `self` is not a forcing tree.
    pub fn forcing_tree_violation(&self) -> Option<(usize, usize)> {
        for p in self.elements() {
            for q in (p + 1)..self.len() {
                if self.compat(p, q) && !self.le(p, q) && !self.le(q, p) {
                    return Some((p, q));
                }
            }
        }
        None
    }

    pub fn is_forcing_tree(&self) -> bool {
        self.forcing_tree_violation().is_none()
    }

    /// Rank in the reversed order: 0 at the maximum, `1 + max` over strictly
    /// larger elements otherwise.
    pub fn corank(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        // q > p implies up(q) is a proper subset of up(p)
        order.sort_by_key(|&p| self.up[p].count_ones(..));
        let mut rank = vec![0usize; n];
        for &p in &order {
            rank[p] = self.up[p]
                .ones()
                .filter(|&q| q != p)
                .map(|q| rank[q] + 1)
                .max()
                .unwrap_or(0);
        }
        rank
    }

    /// The poset obtained by reindexing elements by `perm` (new position of old `p` is `perm[p]`).
    pub fn permuted(&self, perm: &[usize]) -> FinitePoset {
        let n = self.len();
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let ids = inv.iter().map(|&old| self.ids[old].clone()).collect();
        FinitePoset::from_le(ids, n, |a, b| self.le(inv[a], inv[b])).expect("relabelling keeps the maximum")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> FinitePoset {
        FinitePoset::build(&["1", "a", "b", "c"], &[("a", "1"), ("b", "1"), ("c", "1")], Some("1")).unwrap()
    }

    // ε, <0>, <1>
    fn c2() -> FinitePoset {
        FinitePoset::build(&["e", "0", "1"], &[("0", "e"), ("1", "e")], Some("e")).unwrap()
    }

    #[test]
    fn build_a3() {
        let p = a3();
        assert_eq!(p.len(), 4);
        assert_eq!(p.top(), 0);
        assert!(p.le(1, 0) && !p.le(1, 2));
    }

    #[test]
    fn build_merges_equivalent_elements() {
        let p = FinitePoset::build(&["1", "a", "b"], &[("a", "b"), ("b", "a"), ("a", "1")], Some("1")).unwrap();
        assert_eq!(p.ids(), &["1".to_string(), "a".to_string()]);
        assert!(p.le(1, 0));
    }

    #[test]
    fn build_errors() {
        let none: [(&str, &str); 0] = [];
        assert_eq!(FinitePoset::build(&["a", "b"], &none, None), Err(Error::NoMaximum));
        assert_eq!(
            FinitePoset::build(&["1", "a"], &[("a", "z")], Some("1")),
            Err(Error::DanglingElement("z".into()))
        );
        assert_eq!(FinitePoset::build(&["1", "a"], &none, Some("1")), Err(Error::NoMaximum));
        assert_eq!(FinitePoset::build(&["1", "1"], &none, None), Err(Error::DuplicateElement("1".into())));
    }

    #[test]
    fn build_takes_transitive_closure() {
        let p = FinitePoset::build(&["1", "a", "b"], &[("b", "a"), ("a", "1")], None).unwrap();
        assert!(p.le(2, 0));
        assert_eq!(p.top(), 0);
    }

    #[test]
    fn compatibility() {
        let p = a3();
        assert!(!p.compatible(1, 2).unwrap());
        assert!(p.compatible(1, 1).unwrap());
        assert!(p.compatible(0, 3).unwrap());
        assert!(c2().compatible(0, 1).unwrap());
        assert_eq!(p.compatible(0, 9), Err(Error::UnknownElement(9)));
    }

    #[test]
    fn perp_examples() {
        assert_eq!(a3().perp(&[1, 2]).unwrap(), vec![3]);
        assert_eq!(a3().perp(&[]).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(c2().perp(&[1]).unwrap(), vec![2]);
    }

    #[test]
    fn classify_examples() {
        let c = c2();
        let r = c.classify_subset(&[0]).unwrap();
        assert!(r.antichain.holds && r.maximal_antichain.holds && r.predense.holds);
        assert_eq!(r.dense.witness, Some(Witness::Element(1)));
        assert_eq!(r.open.witness, Some(Witness::Pair(0, 1)));

        let r = c.classify_subset(&[1, 2]).unwrap();
        assert!(r.antichain.holds && r.maximal_antichain.holds && r.predense.holds && r.dense.holds && r.open.holds);

        let r = a3().classify_subset(&[0, 1, 2, 3]).unwrap();
        assert!(r.predense.holds && r.dense.holds && !r.antichain.holds);
        let s = FinitePoset::singleton("1");
        assert!(s.classify_subset(&[0]).unwrap().antichain.holds);
    }

    #[test]
    fn classify_not_predense_witness() {
        let r = a3().classify_subset(&[1, 2]).unwrap();
        assert_eq!(r.predense.witness, Some(Witness::Element(3)));
        assert_eq!(r.maximal_antichain.witness, Some(Witness::Element(3)));
    }

    #[test]
    fn downward_closure_examples() {
        assert_eq!(c2().downward_closure(&[0]).unwrap(), vec![0, 1, 2]);
        assert_eq!(c2().downward_closure(&[1]).unwrap(), vec![1]);
        assert_eq!(a3().downward_closure(&[1, 2]).unwrap(), vec![1, 2]);
    }

    #[test]
    fn separative_quotient_examples() {
        let chain = FinitePoset::build(&["1", "p"], &[("p", "1")], None).unwrap();
        let (q, proj) = chain.separative_quotient();
        assert_eq!(q.len(), 1);
        assert_eq!(proj, vec![0, 0]);

        let (q, proj) = a3().separative_quotient();
        assert_eq!(q, a3());
        assert_eq!(proj, vec![0, 1, 2, 3]);

        let (q, _) = FinitePoset::singleton("1").separative_quotient();
        assert_eq!(q.len(), 1);
        assert!(!chain.is_separative());
        assert!(a3().is_separative());
    }

    #[test]
    fn corank_examples() {
        assert_eq!(c2().corank(), vec![0, 1, 1]);
        assert_eq!(FinitePoset::singleton("1").corank(), vec![0]);
        assert_eq!(a3().corank(), vec![0, 1, 1, 1]);
    }

    #[test]
    fn forcing_tree_detection() {
        assert!(c2().is_forcing_tree());
        // diamond: 1 > a, b > z
        let d = FinitePoset::build(
            &["1", "a", "b", "z"],
            &[("a", "1"), ("b", "1"), ("z", "a"), ("z", "b")],
            None,
        )
        .unwrap();
        assert_eq!(d.forcing_tree_violation(), Some((1, 2)));
    }
}
