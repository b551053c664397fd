use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::limits;
use crate::poset::FinitePoset;

/// A bijection of `0..degree`, stored as its image list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::InvalidPermutation(format!("image {x} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Transposition of `a` and `b` on `0..n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `π A π⁻¹` applied to `h`.
    pub fn conjugate(&self, h: &Perm) -> Perm {
        self.compose(h).compose(&self.inverse())
    }

    /// Pointwise image `π"A`, sorted.
    pub fn image_of(&self, a: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = a.iter().map(|&x| self.0[x]).collect();
        out.sort_unstable();
        out
    }

    pub fn fixes_pointwise(&self, a: &[usize]) -> bool {
        a.iter().all(|&x| self.0[x] == x)
    }

    pub fn fixes_setwise(&self, a: &[usize]) -> bool {
        let mut sorted = a.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.image_of(&sorted) == sorted
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite permutation group with its elements enumerated in lexicographic
/// order of image lists. That order is the canonical search order.
#[derive(Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .finish()
    }
}

fn closure(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = s.compose(&g);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(Error::SizeCapExceeded {
                        what: "permutation group",
                        limit: cap,
                        actual: seen.len() + 1,
                    });
                }
                seen.insert(h.clone());
                frontier.push(h);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

impl PermGroup {
    /// Closure of `generators` on `0..degree`.
    pub fn generate(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "degree {} in a group of degree {degree}",
                    g.degree()
                )));
            }
        }
        let elements = closure(degree, &generators, limits().max_group_order)?;
        let mut generators: Vec<Perm> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        generators.sort();
        generators.dedup();
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Perm::identity(degree)],
        }
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        if n < 2 {
            return Ok(PermGroup::trivial(n));
        }
        let cycle = Perm((1..n).chain([0]).collect());
        PermGroup::generate(n, vec![Perm::transposition(n, 0, 1), cycle])
    }

    /// Builds a group from a list already known to be closed under
    /// composition; a small generating set is extracted.
    pub fn from_closed(degree: usize, mut elements: Vec<Perm>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        debug_assert!(elements.first().is_some_and(Perm::is_identity));
        let mut generators = Vec::new();
        let mut reached: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
        for g in &elements {
            if reached.len() == elements.len() {
                break;
            }
            if !reached.contains(g) {
                generators.push(g.clone());
                reached = closure(degree, &generators, usize::MAX)
                    .expect("uncapped")
                    .into_iter()
                    .collect();
            }
        }
        PermGroup {
            degree,
            generators,
            elements,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// All elements in canonical (lexicographic) order; the identity is first.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }

    fn check_points(&self, a: &[usize]) -> Result<()> {
        match a.iter().find(|&&x| x >= self.degree) {
            Some(&x) => Err(Error::UnknownPoint(x)),
            None => Ok(()),
        }
    }

    /// Subgroup of elements satisfying `keep`; `keep` must define a subgroup.
    pub(crate) fn filter(&self, keep: impl Fn(&Perm) -> bool) -> PermGroup {
        let elements = self.elements.iter().filter(|g| keep(g)).cloned().collect();
        PermGroup::from_closed(self.degree, elements)
    }

    /// Orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Result<Vec<usize>> {
        self.check_points(&[x])?;
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for g in &self.generators {
                let z = g.apply(y);
                if !std::mem::replace(&mut seen[z], true) {
                    stack.push(z);
                }
            }
        }
        Ok((0..self.degree).filter(|&i| seen[i]).collect())
    }

    /// Orbit partition, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !done[x] {
                let o = self.orbit(x).expect("point in range");
                for &y in &o {
                    done[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Pointwise stabilizer `fix(A)`.
    pub fn fix_subgroup(&self, a: &[usize]) -> Result<PermGroup> {
        self.check_points(a)?;
        Ok(self.filter(|g| g.fixes_pointwise(a)))
    }

    /// Setwise stabilizer of `A`.
    pub fn set_stabilizer(&self, a: &[usize]) -> Result<PermGroup> {
        self.check_points(a)?;
        Ok(self.filter(|g| g.fixes_setwise(a)))
    }

    /// `G ≥ G_{b0} ≥ G_{b0,b1} ≥ ...`, one group per prefix of `base`
    /// (the first entry is `G` itself).
    pub fn stabilizer_chain(&self, base: &[usize]) -> Result<Vec<PermGroup>> {
        self.check_points(base)?;
        let mut chain = vec![self.clone()];
        for i in 0..base.len() {
            let next = chain[i].filter(|g| g.apply(base[i]) == base[i]);
            chain.push(next);
        }
        Ok(chain)
    }

    /// Whether `X` is invariant under every element; checking generators suffices.
    pub fn is_stable(&self, x: &[usize]) -> Result<bool> {
        self.check_points(x)?;
        Ok(self.generators.iter().all(|g| g.fixes_setwise(x)))
    }

    /// `π H π⁻¹`.
    pub fn conjugate_by(&self, pi: &Perm) -> PermGroup {
        let elements = self.elements.iter().map(|h| pi.conjugate(h)).collect();
        PermGroup::from_closed(self.degree, elements)
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.elements == other.elements
    }
}

/// Whether `g` restricted to the poset's elements is an order automorphism.
pub fn is_automorphism(p: &FinitePoset, g: &Perm) -> bool {
    let n = p.len();
    if g.degree() < n || (0..n).any(|x| g.apply(x) >= n) {
        return false;
    }
    (0..n).all(|a| (0..n).all(|b| p.le(a, b) == p.le(g.apply(a), g.apply(b))))
}

/// The full order-automorphism group, by backtracking over partial maps
/// that respect `≤` in both directions.
pub fn automorphism_group(p: &FinitePoset) -> Result<PermGroup> {
    let n = p.len();
    let cap = limits().max_group_order;
    let sig: Vec<(usize, usize)> = p
        .elements()
        .map(|x| (p.down_set(x).count_ones(..), p.up_set(x).count_ones(..)))
        .collect();
    let mut found = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn rec(
        p: &FinitePoset,
        sig: &[(usize, usize)],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
        found: &mut Vec<Perm>,
        cap: usize,
    ) -> Result<()> {
        let n = map.len();
        if i == n {
            if found.len() >= cap {
                return Err(Error::SizeCapExceeded {
                    what: "automorphism group",
                    limit: cap,
                    actual: found.len() + 1,
                });
            }
            found.push(Perm(map.to_vec()));
            return Ok(());
        }
        for y in 0..n {
            if used[y] || sig[y] != sig[i] {
                continue;
            }
            let ok = (0..i).all(|j| p.le(i, j) == p.le(y, map[j]) && p.le(j, i) == p.le(map[j], y));
            if ok {
                map[i] = y;
                used[y] = true;
                rec(p, sig, i + 1, map, used, found, cap)?;
                used[y] = false;
            }
        }
        Ok(())
    }

    rec(p, &sig, 0, &mut map, &mut used, &mut found, cap)?;
    Ok(PermGroup::from_closed(n, found))
}
