use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::symmetry::SymmetryStructure;

use super::abs::{cc3_witness_order, largest};
use super::masks::{shortlex_cmp, to_mask, to_vec, Masks};
use super::{CCReport, CCVariant, Certificate, Scope};

const MAX_FAMILY: usize = 1 << 22;

/// Every subset of the poset stable under `fix(A)` for some ideal member
/// `A`, as bitmasks in shortlex order. It suffices to take the maximal ideal
/// members, whose stabilizers are the smallest.
pub fn stable_family(s: &SymmetryStructure) -> Result<Vec<Vec<usize>>> {
    Ok(family_masks(s)?.into_iter().map(to_vec).collect())
}

fn family_masks(s: &SymmetryStructure) -> Result<Vec<u64>> {
    if s.poset().len() > 64 {
        return Err(Error::SizeCapExceeded {
            what: "bitmask subset representation",
            limit: 64,
            actual: s.poset().len(),
        });
    }
    let mut seen: HashSet<u64> = HashSet::new();
    for a in s.ideal().maximal_members() {
        let stable = s.stable_subsets(&a)?;
        if seen.len() as u128 + stable.count() > MAX_FAMILY as u128 {
            return Err(Error::SizeCapExceeded {
                what: "stable subset family",
                limit: MAX_FAMILY,
                actual: seen.len() + stable.count().min(usize::MAX as u128) as usize,
            });
        }
        let orbit_masks: Vec<u64> = stable.orbits().iter().map(|o| to_mask(o.iter().copied())).collect();
        for sel in 0..1u64 << orbit_masks.len() {
            let m = orbit_masks
                .iter()
                .enumerate()
                .filter(|(i, _)| sel >> i & 1 == 1)
                .fold(0, |acc, (_, &o)| acc | o);
            seen.insert(m);
        }
    }
    let mut fam: Vec<u64> = seen.into_iter().collect();
    fam.sort_by(|&a, &b| shortlex_cmp(a, b));
    Ok(fam)
}

/// Unions of orbits of the whole group.
fn is_trivial(orbits: &[u64], m: u64) -> bool {
    orbits.iter().all(|&o| m & o == 0 || m & o == o)
}

/// `variant(n)` with every quantifier restricted to stable sets. With
/// `include_trivial` false, unions of orbits of the whole group are left out
/// of the outer quantifier; the inner one (refinements, extensions) still
/// ranges over all stable sets.
pub fn cc_rel(s: &SymmetryStructure, variant: CCVariant, n: usize, include_trivial: bool) -> Result<CCReport> {
    if n == 0 {
        return Err(Error::InvalidThreshold);
    }
    let m = Masks::new(s.poset())?;
    let fam = family_masks(s)?;
    let g_orbits: Vec<u64> = s
        .element_orbits(s.group())
        .into_iter()
        .map(|o| to_mask(o))
        .collect();
    let outer = |x: u64| include_trivial || !is_trivial(&g_orbits, x);
    let (witness, certificate) = match variant {
        CCVariant::CC1 => largest(fam.iter().copied().filter(|&x| outer(x) && m.maximal(x)).collect(), n),
        CCVariant::CC2 => largest(fam.iter().copied().filter(|&x| outer(x) && m.antichain(x)).collect(), n),
        CCVariant::CC3 => rel_cc3(&m, &fam, n, outer),
        CCVariant::CCE => rel_cce(&m, &fam, n, outer),
    };
    Ok(CCReport {
        variant,
        threshold: n,
        scope: Scope::Relative,
        holds: witness.is_none(),
        witness: witness.map(to_vec),
        certificate,
    })
}

fn rel_cc3(m: &Masks, fam: &[u64], n: usize, outer: impl Fn(u64) -> bool) -> (Option<u64>, Certificate) {
    let predense: Vec<u64> = fam.iter().copied().filter(|&x| m.predense(x)).collect();
    let mut examined = 0u64;
    let mut extremal = 0;
    let mut witness: Option<u64> = None;
    for &d in predense.iter().filter(|&&d| outer(d)) {
        examined += 1;
        // `predense` is shortlex sorted, so the first subset found is least
        let best = predense.iter().find(|&&x| x & !d == 0).expect("d refines itself");
        let size = best.count_ones() as usize;
        extremal = extremal.max(size);
        if size > n && witness.is_none_or(|w| cc3_witness_order(d, w) == Ordering::Less) {
            witness = Some(d);
        }
    }
    let mut cert = Certificate {
        examined,
        extremal,
        refinement: None,
        refinement_examined: 0,
    };
    if let Some(w) = witness {
        for &x in fam.iter().filter(|&&x| x & !w == 0) {
            cert.refinement_examined += 1;
            if m.predense(x) {
                cert.refinement = Some(to_vec(x));
                break;
            }
        }
    }
    (witness, cert)
}

fn rel_cce(m: &Masks, fam: &[u64], n: usize, outer: impl Fn(u64) -> bool) -> (Option<u64>, Certificate) {
    let maximal: Vec<u64> = fam.iter().copied().filter(|&x| m.maximal(x)).collect();
    let mut examined = 0u64;
    let mut extremal = 0;
    let mut witness: Option<(u64, Option<u64>)> = None;
    for &a in fam.iter().filter(|&&a| outer(a) && m.antichain(a)) {
        examined += 1;
        let ext = maximal.iter().copied().find(|&x| a & !x == 0);
        let size = ext.map_or(usize::MAX, |e| e.count_ones() as usize);
        extremal = extremal.max(size.min(m.n + 1));
        if size > n && witness.is_none_or(|(w, _)| shortlex_cmp(a, w) == Ordering::Less) {
            witness = Some((a, ext));
        }
    }
    let cert = Certificate {
        examined,
        extremal,
        refinement: witness.and_then(|(_, e)| e).map(to_vec),
        refinement_examined: 0,
    };
    (witness.map(|(w, _)| w), cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::cc_abs;
    use crate::constructions::{flat_poset, lottery, tree_poset};
    use crate::symmetry::{automorphism_group, PermGroup, SupportIdeal};

    #[test]
    fn five_v_lottery_separation() {
        let v = flat_poset("q", &["c", "d"]).unwrap();
        let parts = vec![v.clone(); 5];
        let l = lottery(&parts, false).unwrap();
        let g = automorphism_group(&v).unwrap();
        let s = SymmetryStructure::lottery(&l, &vec![g; 5], SupportIdeal::bounded(5, 1)).unwrap();
        let r = cc_rel(&s, CCVariant::CC3, 4, true).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some((1..16).collect()));
        let qs: Vec<usize> = (0..5).map(|i| l.poset.index_of(&format!("{i}:q")).unwrap()).collect();
        assert_eq!(r.certificate.refinement, Some(qs.clone()));
        // all c/d pairs: a stable subset must keep both members of each pair
        let r = cc_rel(&s, CCVariant::CC3, 9, true).unwrap();
        let cds: Vec<usize> = (0..16).filter(|x| !qs.contains(x) && *x != 0).collect();
        assert_eq!(r.witness, Some(cds.clone()));
        assert_eq!(r.certificate.refinement, Some(cds));
        assert!(cc_rel(&s, CCVariant::CC3, 10, true).unwrap().holds);
    }

    #[test]
    fn full_ideal_matches_absolute() {
        let c3 = tree_poset(2, 3).unwrap();
        let g = automorphism_group(&c3).unwrap();
        let s = SymmetryStructure::on_elements(c3.clone(), g, SupportIdeal::full(7)).unwrap();
        let t = SymmetryStructure::on_elements(c3.clone(), PermGroup::trivial(7), SupportIdeal::trivial(7)).unwrap();
        for v in CCVariant::ALL {
            for n in 1..=5 {
                let a = cc_abs(&c3, v, n).unwrap();
                for st in [&s, &t] {
                    let r = cc_rel(st, v, n, true).unwrap();
                    assert_eq!((r.holds, &r.witness), (a.holds, &a.witness), "{v} {n}");
                }
            }
        }
    }
}
