use serde::Serialize;

use crate::constructions::{add_conditions, AddCondition};
use crate::error::{Error, Result};
use crate::poset::{Check, FinitePoset, Witness};

use super::group::{is_automorphism, Perm, PermGroup};
use super::structure::SymmetryStructure;
use super::wreath::{wreath, Wreath};

/// Conditions acted on by a permutation group.
pub trait ConditionSpace {
    type Cond: Clone + PartialEq;

    fn group(&self) -> &PermGroup;
    fn act(&self, g: &Perm, c: &Self::Cond) -> Self::Cond;
    fn compatible(&self, a: &Self::Cond, b: &Self::Cond) -> bool;
    /// Whether `π* = id`.
    fn base_is_identity(&self, g: &Perm) -> bool;
}

impl ConditionSpace for SymmetryStructure {
    type Cond = usize;

    fn group(&self) -> &PermGroup {
        SymmetryStructure::group(self)
    }

    fn act(&self, g: &Perm, c: &usize) -> usize {
        g.apply(*c)
    }

    fn compatible(&self, a: &usize, b: &usize) -> bool {
        self.poset().compatible_with(*a).contains(*b)
    }

    fn base_is_identity(&self, g: &Perm) -> bool {
        self.base_part(g).is_identity()
    }
}

/// Conditions `sites × λ × λ ⇀ 2` of size at most `bound`, acted on by
/// `G ≀ Sym(λ)` through the columns, without materializing the poset.
///
/// Compatibility is taken in the ambient forcing of all finite partial
/// functions: `p ∪ q` is a function. Inside the bounded poset the union may
/// also have to respect the size bound.
#[derive(Debug, Clone)]
pub struct AddSpace {
    sites: usize,
    lambda: usize,
    bound: usize,
    wreath: Wreath,
}

impl AddSpace {
    pub fn new(sites: usize, lambda: usize, bound: usize, site_group: &PermGroup) -> Result<Self> {
        if site_group.degree() != sites {
            return Err(Error::InvalidStructure("site group degree differs from the site count".into()));
        }
        let wreath = wreath(site_group, &PermGroup::symmetric(lambda)?)?;
        Ok(AddSpace {
            sites,
            lambda,
            bound,
            wreath,
        })
    }

    pub fn wreath(&self) -> &Wreath {
        &self.wreath
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn conditions(&self) -> Vec<AddCondition> {
        add_conditions(self.sites, self.lambda, self.bound)
    }

    pub fn contains(&self, c: &AddCondition) -> bool {
        c.len() <= self.bound
            && c.cells().iter().all(|&((m, a, b), _)| m < self.sites && a < self.lambda && b < self.lambda)
    }
}

impl ConditionSpace for AddSpace {
    type Cond = AddCondition;

    fn group(&self) -> &PermGroup {
        self.wreath.group()
    }

    fn act(&self, g: &Perm, c: &AddCondition) -> AddCondition {
        c.map_columns(|m, a| self.wreath.coords(g.apply(self.wreath.point(m, a))))
    }

    fn compatible(&self, a: &AddCondition, b: &AddCondition) -> bool {
        a.union_is_function(b)
    }

    fn base_is_identity(&self, g: &Perm) -> bool {
        self.wreath.base_part(g).is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Mixing {
    /// The first group element in canonical order with `πp ∥ q`.
    Found { perm: Perm, examined: usize },
    /// Every admissible element was tried.
    Failure { examined: usize, group_order: usize },
}

impl Mixing {
    pub fn perm(&self) -> Option<&Perm> {
        match self {
            Mixing::Found { perm, .. } => Some(perm),
            Mixing::Failure { .. } => None,
        }
    }
}

/// Searches the group in canonical order for `π` with `πp ∥ q`, optionally
/// only among elements with `π* = id`.
pub fn find_mixing_automorphism<S: ConditionSpace>(
    space: &S,
    p: &S::Cond,
    q: &S::Cond,
    require_base_identity: bool,
) -> Mixing {
    let mut examined = 0;
    for g in space.group().elements() {
        if require_base_identity && !space.base_is_identity(g) {
            continue;
        }
        examined += 1;
        if space.compatible(&space.act(g, p), q) {
            return Mixing::Found {
                perm: g.clone(),
                examined,
            };
        }
    }
    Mixing::Failure {
        examined,
        group_order: space.group().order(),
    }
}

/// `∀p,q ∈ P∖{1} ∃π ∈ G: πp ∥ q`; a failing pair is reported as witness.
pub fn is_weakly_homogeneous(p: &FinitePoset, g: &PermGroup) -> Result<Check> {
    if g.generators().iter().any(|s| !is_automorphism(p, s)) || g.degree() < p.len() {
        return Err(Error::NotAnAutomorphism);
    }
    for a in p.elements().filter(|&a| a != p.top()) {
        for b in p.elements().filter(|&b| b != p.top()) {
            if !g.elements().iter().any(|pi| p.compatible_with(pi.apply(a)).contains(b)) {
                return Ok(Check {
                    holds: false,
                    witness: Some(Witness::Pair(a, b)),
                });
            }
        }
    }
    Ok(Check {
        holds: true,
        witness: None,
    })
}
