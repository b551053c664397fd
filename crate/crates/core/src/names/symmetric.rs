use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::poset::FinitePoset;
use crate::symmetry::{Perm, PermGroup, SymmetryStructure};

use super::forcing::{Formula, Forcer};
use super::pname::PName;

/// `sym(ẋ) = {π : πẋ = ẋ}`.
pub fn sym_group(s: &SymmetryStructure, x: &PName) -> Result<PermGroup> {
    x.validate(s.poset())?;
    Ok(stabilizer(s.group(), x))
}

fn stabilizer(g: &PermGroup, x: &PName) -> PermGroup {
    let elements = g.elements().iter().filter(|pi| x.act(pi) == *x).cloned().collect();
    PermGroup::from_closed(g.degree(), elements)
}

/// Whether `sym(ẋ)` is large.
pub fn is_symmetric(s: &SymmetryStructure, x: &PName) -> Result<bool> {
    s.is_large(&sym_group(s, x)?)
}

/// Symmetric, and every name occurring in it is hereditarily symmetric.
pub fn is_hereditarily_symmetric(s: &SymmetryStructure, x: &PName) -> Result<bool> {
    x.validate(s.poset())?;
    let mut memo: HashMap<PName, bool> = HashMap::new();
    hs(s, x, &mut memo)
}

fn hs(s: &SymmetryStructure, x: &PName, memo: &mut HashMap<PName, bool>) -> Result<bool> {
    if let Some(&v) = memo.get(x) {
        return Ok(v);
    }
    let mut v = s.is_large(&stabilizer(s.group(), x))?;
    if v {
        for (_, y) in x.entries() {
            if !hs(s, y, memo)? {
                v = false;
                break;
            }
        }
    }
    memo.insert(x.clone(), v);
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub condition: usize,
    pub perm: Perm,
    pub formula: Formula,
    pub forced: bool,
    pub forced_after_action: bool,
}

/// Checks `p ⊩ φ ⟺ πp ⊩ πφ` for every condition, group element and
/// formula; the group must act by automorphisms of the poset.
pub fn verify_symmetry_lemma(poset: &FinitePoset, g: &PermGroup, formulas: &[Formula]) -> Vec<LemmaViolation> {
    let mut forcer = Forcer::new(poset);
    let mut out = Vec::new();
    for phi in formulas {
        for pi in g.elements() {
            if pi.is_identity() {
                continue;
            }
            let moved = phi.act(pi);
            for p in poset.elements() {
                let a = forcer.forces(p, phi);
                let b = forcer.forces(pi.apply(p), &moved);
                if a != b {
                    out.push(LemmaViolation {
                        condition: p,
                        perm: pi.clone(),
                        formula: phi.clone(),
                        forced: a,
                        forced_after_action: b,
                    });
                }
            }
        }
    }
    out
}
