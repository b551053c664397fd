use std::collections::HashMap;

use serde::Serialize;

use crate::constructions::{add_conditions, add_poset, Lottery};
use crate::error::{Error, Result};
use crate::poset::FinitePoset;

use super::group::{is_automorphism, Perm, PermGroup};
use super::ideal::SupportIdeal;
use super::wreath::wreath;

/// An `X × Y` block of carrier points starting at `offset`, used to read off
/// the base part `π*` of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sections {
    pub offset: usize,
    pub base: usize,
    pub fiber: usize,
}

/// A group acting on a poset together with a support ideal.
///
/// The group lives on a carrier whose first `poset.len()` points are the
/// poset's elements; further points (columns of a Cohen-style forcing, for
/// instance) may follow. Each support point names a block of carrier points,
/// and `fix(A)` is the pointwise stabilizer of the blocks of `A`.
#[derive(Debug, Clone)]
pub struct SymmetryStructure {
    poset: FinitePoset,
    group: PermGroup,
    blocks: Vec<Vec<usize>>,
    ideal: SupportIdeal,
    sections: Option<Sections>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalityViolation {
    pub support: Vec<usize>,
    pub perm: Perm,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalityReport {
    pub holds: bool,
    pub checked: usize,
    pub violations: Vec<NormalityViolation>,
}

/// Subsets stable under a group, as unions of its orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSubsets {
    orbits: Vec<Vec<usize>>,
}

impl StableSubsets {
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// `2^(number of orbits)`.
    pub fn count(&self) -> u128 {
        1u128 << self.orbits.len()
    }

    /// Every union of orbits, in increasing order of the orbit bitmask.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..1u64 << self.orbits.len()).map(move |mask| self.union(mask))
    }

    pub fn union(&self, mask: u64) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .orbits
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, o)| o.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

impl SymmetryStructure {
    pub fn new(
        poset: FinitePoset,
        group: PermGroup,
        blocks: Vec<Vec<usize>>,
        ideal: SupportIdeal,
        sections: Option<Sections>,
    ) -> Result<Self> {
        let n = poset.len();
        let d = group.degree();
        if d < n {
            return Err(Error::InvalidStructure(format!("group degree {d} is below the poset size {n}")));
        }
        for g in group.generators() {
            if !is_automorphism(&poset, g) {
                return Err(Error::NotAnAutomorphism);
            }
        }
        if let Some(&x) = blocks.iter().flatten().find(|&&x| x >= d) {
            return Err(Error::UnknownPoint(x));
        }
        if ideal.base() != blocks.len() {
            return Err(Error::InvalidStructure(format!(
                "ideal over {} points but {} support blocks",
                ideal.base(),
                blocks.len()
            )));
        }
        if let Some(s) = sections {
            if s.fiber == 0 || s.offset + s.base * s.fiber > d {
                return Err(Error::InvalidStructure("section layout outside the carrier".into()));
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Ok(SymmetryStructure {
            poset,
            group,
            blocks,
            ideal,
            sections,
        })
    }

    /// Group acting on the elements themselves, with each element its own support point.
    pub fn on_elements(poset: FinitePoset, group: PermGroup, ideal: SupportIdeal) -> Result<Self> {
        let blocks = poset.elements().map(|p| vec![p]).collect();
        Self::new(poset, group, blocks, ideal, None)
    }

    /// Lottery sum with `groups[i]` acting inside summand `i` (over that
    /// summand's own element indices); supports are summand indices.
    pub fn lottery(l: &Lottery, groups: &[PermGroup], ideal: SupportIdeal) -> Result<Self> {
        if groups.len() != l.blocks.len() {
            return Err(Error::InvalidStructure(format!(
                "{} summand groups for {} summands",
                groups.len(),
                l.blocks.len()
            )));
        }
        let n = l.poset.len();
        let mut pos: Vec<HashMap<usize, usize>> = vec![HashMap::new(); groups.len()];
        for (e, o) in l.origin.iter().enumerate() {
            if let Some(t) = o {
                pos[t.summand].insert(t.element, e);
            }
        }
        let mut gens = Vec::new();
        for (i, g) in groups.iter().enumerate() {
            for s in g.generators() {
                let mut images: Vec<usize> = (0..n).collect();
                for (&x, &e) in &pos[i] {
                    if x >= s.degree() {
                        return Err(Error::UnknownPoint(x));
                    }
                    images[e] = *pos[i]
                        .get(&s.apply(x))
                        .ok_or(Error::InvalidStructure(format!("summand {i} group moves its dropped maximum")))?;
                }
                gens.push(Perm::new(images)?);
            }
        }
        let group = PermGroup::generate(n, gens)?;
        Self::new(l.poset.clone(), group, l.blocks.clone(), ideal, None)
    }

    /// `add_poset(sites, lambda, bound)` with `site_group ≀ Sym(lambda)` acting
    /// on columns `(m, α)`. Supports are columns, indexed `m·lambda + α`.
    pub fn add(sites: usize, lambda: usize, bound: usize, site_group: &PermGroup, ideal: SupportIdeal) -> Result<Self> {
        if site_group.degree() != sites {
            return Err(Error::InvalidStructure("site group degree differs from the site count".into()));
        }
        let poset = add_poset(sites, lambda, bound)?;
        let conds = add_conditions(sites, lambda, bound);
        let index: HashMap<_, usize> = conds.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let n = poset.len();
        let w = wreath(site_group, &PermGroup::symmetric(lambda)?)?;
        let mut gens = Vec::new();
        for s in w.group().generators() {
            let mut images = Vec::with_capacity(n + sites * lambda);
            for c in &conds {
                let moved = c.map_columns(|m, a| w.coords(s.apply(w.point(m, a))));
                images.push(index[&moved]);
            }
            images.extend((0..sites * lambda).map(|j| n + s.apply(j)));
            gens.push(Perm::new(images)?);
        }
        let group = PermGroup::generate(n + sites * lambda, gens)?;
        let blocks = (0..sites * lambda).map(|j| vec![n + j]).collect();
        let sections = Sections {
            offset: n,
            base: sites,
            fiber: lambda,
        };
        Self::new(poset, group, blocks, ideal, Some(sections))
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn ideal(&self) -> &SupportIdeal {
        &self.ideal
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn sections(&self) -> Option<Sections> {
        self.sections
    }

    /// Same structure with a different ideal.
    pub fn with_ideal(&self, ideal: SupportIdeal) -> Result<Self> {
        Self::new(self.poset.clone(), self.group.clone(), self.blocks.clone(), ideal, self.sections)
    }

    /// `π*`, identity on a one-point base when no section layout is present.
    pub fn base_part(&self, pi: &Perm) -> Perm {
        match self.sections {
            None => Perm::identity(1),
            Some(s) => {
                let images = (0..s.base)
                    .map(|x| (pi.apply(s.offset + x * s.fiber) - s.offset) / s.fiber)
                    .collect();
                Perm::new(images).expect("group preserves sections")
            }
        }
    }

    fn support_points(&self, a: &[usize]) -> Result<Vec<usize>> {
        let mut pts = Vec::new();
        for &s in a {
            pts.extend_from_slice(self.blocks.get(s).ok_or(Error::UnknownPoint(s))?);
        }
        pts.sort_unstable();
        pts.dedup();
        Ok(pts)
    }

    /// `fix(A)`.
    pub fn fix(&self, a: &[usize]) -> Result<PermGroup> {
        let pts = self.support_points(a)?;
        self.group.fix_subgroup(&pts)
    }

    fn fix_elements(&self, a: &[usize]) -> Result<Vec<Perm>> {
        let pts = self.support_points(a)?;
        Ok(self.group.elements().iter().filter(|g| g.fixes_pointwise(&pts)).cloned().collect())
    }

    /// `π"A` if `π` permutes the support blocks.
    pub fn support_image(&self, pi: &Perm, a: &[usize]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(a.len());
        for &s in a {
            let img = pi.image_of(self.blocks.get(s)?);
            out.push(self.blocks.iter().position(|b| *b == img)?);
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    /// A maximal ideal member `A` with `fix(A) ⊆ H`, if any.
    pub fn large_support(&self, h: &PermGroup) -> Result<Option<Vec<usize>>> {
        if !h.is_subgroup_of(&self.group) {
            return Err(Error::NotASubgroup);
        }
        for m in self.ideal.maximal_members() {
            if self.fix_elements(&m)?.iter().all(|g| h.contains(g)) {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    pub fn is_large(&self, h: &PermGroup) -> Result<bool> {
        Ok(self.large_support(h)?.is_some())
    }

    /// Checks, for every group element `π` and ideal generator `A`, that
    /// `π` permutes the blocks, `π"A` is in the ideal and
    /// `π·fix(A)·π⁻¹ = fix(π"A)`.
    pub fn normality_audit(&self) -> NormalityReport {
        let mut violations = Vec::new();
        let mut checked = 0;
        for a in self.ideal.generators() {
            let fa = self.fix_elements(a).expect("ideal over the support points");
            for pi in self.group.elements() {
                checked += 1;
                let Some(img) = self.support_image(pi, a) else {
                    violations.push(NormalityViolation {
                        support: a.clone(),
                        perm: pi.clone(),
                        reason: "does not permute support blocks",
                    });
                    continue;
                };
                if !self.ideal.contains(&img) {
                    violations.push(NormalityViolation {
                        support: a.clone(),
                        perm: pi.clone(),
                        reason: "image of support leaves the ideal",
                    });
                    continue;
                }
                let mut conj: Vec<Perm> = fa.iter().map(|h| pi.conjugate(h)).collect();
                conj.sort_unstable();
                if conj != self.fix_elements(&img).expect("image is a support") {
                    violations.push(NormalityViolation {
                        support: a.clone(),
                        perm: pi.clone(),
                        reason: "conjugate of fix(A) differs from fix of the image",
                    });
                }
            }
        }
        NormalityReport {
            holds: violations.is_empty(),
            checked,
            violations,
        }
    }

    /// Orbits of `fix(A)` on the poset's elements.
    pub fn element_orbits(&self, h: &PermGroup) -> Vec<Vec<usize>> {
        let n = self.poset.len();
        h.orbits().into_iter().filter(|o| o[0] < n).collect()
    }

    /// Subsets of the poset stable under `fix(A)`.
    pub fn stable_subsets(&self, a: &[usize]) -> Result<StableSubsets> {
        if !self.ideal.contains(a) {
            return Err(Error::InvalidStructure(format!("support {a:?} is not in the ideal")));
        }
        let orbits = self.element_orbits(&self.fix(a)?);
        if orbits.len() > 63 {
            return Err(Error::SizeCapExceeded {
                what: "stable subset enumeration",
                limit: 63,
                actual: orbits.len(),
            });
        }
        Ok(StableSubsets { orbits })
    }
}
