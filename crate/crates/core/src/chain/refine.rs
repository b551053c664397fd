use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Output of [`shrink_predense`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shrink {
    /// Maximal antichain chosen inside the downward closure of `D`.
    pub antichain: Vec<usize>,
    /// `{p_q : q ∈ antichain}`, each `p_q` the least member of `D` above `q`.
    pub refinement: Vec<usize>,
}

fn check_predense(p: &FinitePoset, d: &[usize]) -> Result<()> {
    let mask = p.mask(d);
    match p.elements().find(|&x| p.compatible_with(x).is_disjoint(&mask)) {
        Some(x) => Err(Error::NotPredense(x)),
        None => Ok(()),
    }
}

/// Greedy antichain over `candidates` in canonical order, seeded with `start`.
fn greedy(p: &FinitePoset, start: Vec<usize>, candidates: &[usize]) -> Vec<usize> {
    let mut chosen = start;
    for &x in candidates {
        if chosen.iter().all(|&y| !p.compat(x, y)) {
            chosen.push(x);
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    chosen
}

/// Shrinks a predense set to a predense subset no larger than a maximal
/// antichain below it.
pub fn shrink_predense(p: &FinitePoset, d: &[usize]) -> Result<Shrink> {
    let d = p.normalize(d)?;
    check_predense(p, &d)?;
    let below = p.downward_closure(&d)?;
    let antichain = greedy(p, Vec::new(), &below);
    let mut refinement: Vec<usize> = antichain
        .iter()
        .map(|&q| *d.iter().find(|&&x| p.le(q, x)).expect("q lies below some member"))
        .collect();
    refinement.sort_unstable();
    refinement.dedup();
    Ok(Shrink { antichain, refinement })
}

/// A maximal antichain inside a dense open set.
pub fn greedy_max_antichain(p: &FinitePoset, d: &[usize]) -> Result<Vec<usize>> {
    let d = p.normalize(d)?;
    let r = p.classify_subset(&d)?;
    if !r.dense.holds || !r.open.holds {
        return Err(Error::NotDenseOpen);
    }
    Ok(greedy(p, Vec::new(), &d))
}

/// Extends an antichain greedily over `A^⊥` in canonical order.
pub fn extend_to_maximal(p: &FinitePoset, a: &[usize]) -> Result<Vec<usize>> {
    let a = p.normalize(a)?;
    for (i, &x) in a.iter().enumerate() {
        if let Some(&y) = a[i + 1..].iter().find(|&&y| p.compat(x, y)) {
            return Err(Error::NotAntichain(x, y));
        }
    }
    let perp = p.perp(&a)?;
    Ok(greedy(p, a, &perp))
}

/// The `≤`-maximal members of a predense set in a forcing tree, checked to
/// form a maximal antichain.
pub fn tree_refinement(p: &FinitePoset, d: &[usize]) -> Result<Vec<usize>> {
    if let Some((x, y)) = p.forcing_tree_violation() {
        return Err(Error::NotForcingTree(x, y));
    }
    let d = p.normalize(d)?;
    check_predense(p, &d)?;
    let out: Vec<usize> = d
        .iter()
        .copied()
        .filter(|&x| !d.iter().any(|&y| p.lt(x, y)))
        .collect();
    if !p.is_maximal_antichain(&out) {
        return Err(Error::RefinementInvalid { witness: out });
    }
    Ok(out)
}

/// Members of `D` of least corank.
pub fn rank_minimal_members(p: &FinitePoset, d: &[usize]) -> Result<Vec<usize>> {
    let d = p.normalize(d)?;
    let r = p.corank();
    let Some(min) = d.iter().map(|&x| r[x]).min() else {
        return Ok(Vec::new());
    };
    Ok(d.into_iter().filter(|&x| r[x] == min).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flat_poset, tree_poset};

    fn ids(p: &FinitePoset, s: &[&str]) -> Vec<usize> {
        p.subset_of_ids(s).unwrap()
    }

    #[test]
    fn shrink_examples() {
        let a3 = flat_poset("1", &["a", "b", "c"]).unwrap();
        let d = ids(&a3, &["a", "b", "c"]);
        assert_eq!(shrink_predense(&a3, &d).unwrap().refinement, d);
        assert_eq!(shrink_predense(&a3, &[0]).unwrap().refinement, vec![0]);
        let c2 = tree_poset(2, 2).unwrap();
        assert_eq!(shrink_predense(&c2, &[0, 1, 2]).unwrap().refinement, vec![0]);
        assert_eq!(shrink_predense(&c2, &[1]), Err(Error::NotPredense(2)));
    }

    #[test]
    fn greedy_examples() {
        let c3 = tree_poset(2, 3).unwrap();
        let leaves = ids(&c3, &["<00>", "<01>", "<10>", "<11>"]);
        assert_eq!(greedy_max_antichain(&c3, &leaves).unwrap(), leaves);
        let all: Vec<usize> = c3.elements().collect();
        assert_eq!(greedy_max_antichain(&c3, &all).unwrap(), vec![0]);
        let a3 = flat_poset("1", &["a", "b", "c"]).unwrap();
        assert_eq!(greedy_max_antichain(&a3, &[1, 2, 3]).unwrap(), vec![1, 2, 3]);
        assert_eq!(greedy_max_antichain(&c3, &[1]), Err(Error::NotDenseOpen));
    }

    #[test]
    fn extend_examples() {
        let a3 = flat_poset("1", &["a", "b", "c"]).unwrap();
        assert_eq!(extend_to_maximal(&a3, &[1]).unwrap(), vec![1, 2, 3]);
        let c3 = tree_poset(2, 3).unwrap();
        assert_eq!(
            extend_to_maximal(&c3, &ids(&c3, &["<00>"])).unwrap(),
            ids(&c3, &["<1>", "<00>", "<01>"])
        );
        assert_eq!(extend_to_maximal(&c3, &[1, 2]).unwrap(), vec![1, 2]);
        assert_eq!(extend_to_maximal(&c3, &[1, 3]), Err(Error::NotAntichain(1, 3)));
    }

    #[test]
    fn tree_refinement_examples() {
        let c3 = tree_poset(2, 3).unwrap();
        let d = ids(&c3, &["<0>", "<10>", "<11>"]);
        assert_eq!(tree_refinement(&c3, &d).unwrap(), d);
        assert_eq!(tree_refinement(&c3, &[0]).unwrap(), vec![0]);
        let d = ids(&c3, &["<0>", "<00>", "<1>"]);
        assert_eq!(tree_refinement(&c3, &d).unwrap(), ids(&c3, &["<0>", "<1>"]));
        let diamond = FinitePoset::build(&["1", "a", "b", "z"], &[("a", "1"), ("b", "1"), ("z", "a"), ("z", "b")], Some("1")).unwrap();
        assert!(matches!(tree_refinement(&diamond, &[0]), Err(Error::NotForcingTree(..))));
    }

    #[test]
    fn literal_rank_minimal_reading_fails_on_c3() {
        let c3 = tree_poset(2, 3).unwrap();
        let d = ids(&c3, &["<0>", "<10>", "<11>"]);
        let r = rank_minimal_members(&c3, &d).unwrap();
        assert_eq!(r, ids(&c3, &["<0>"]));
        assert!(!c3.is_predense(&r));
    }
}
