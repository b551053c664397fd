use chaincond::chain::{posets_with_top, random_poset};
use chaincond::FinitePoset;
use proptest::prelude::*;

fn subset(p: &FinitePoset, mask: u64) -> Vec<usize> {
    p.elements().filter(|&x| mask >> x & 1 == 1).collect()
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

fn arb_poset() -> impl Strategy<Value = FinitePoset> {
    any::<u64>().prop_map(|seed| random_poset(seed, 8))
}

proptest! {
    #[test]
    fn orthogonality_laws(p in arb_poset(), mask in any::<u64>()) {
        let a = subset(&p, mask);
        let perp = p.perp(&a).unwrap();
        prop_assert!(p.is_predense(&union(&a, &perp)));
        prop_assert_eq!(p.is_predense(&a), perp.is_empty());
        let r = p.classify_subset(&a).unwrap();
        prop_assert_eq!(r.antichain.holds && r.predense.holds, r.maximal_antichain.holds);
        prop_assert_eq!(r.maximal_antichain.holds, p.is_maximal_antichain(&a));
        prop_assert_eq!(r.antichain.holds, p.is_antichain(&a));
    }

    #[test]
    fn perp_is_antitone(p in arb_poset(), m1 in any::<u64>(), m2 in any::<u64>()) {
        let a = subset(&p, m1 & m2);
        let b = subset(&p, m1);
        let pa = p.perp(&a).unwrap();
        let pb = p.perp(&b).unwrap();
        prop_assert!(pb.iter().all(|x| pa.contains(x)));
        let ppa = p.perp(&pa).unwrap();
        prop_assert!(a.iter().all(|x| ppa.contains(x)));
    }

    #[test]
    fn dense_implies_predense(p in arb_poset(), mask in any::<u64>()) {
        let a = subset(&p, mask);
        let r = p.classify_subset(&a).unwrap();
        if r.dense.holds {
            prop_assert!(r.predense.holds);
        }
        let closure = p.downward_closure(&a).unwrap();
        prop_assert!(p.classify_subset(&closure).unwrap().open.holds);
    }

    #[test]
    fn witnesses_check_out(p in arb_poset(), mask in any::<u64>()) {
        use chaincond::Witness;
        let a = subset(&p, mask);
        let r = p.classify_subset(&a).unwrap();
        if let Some(Witness::Pair(x, y)) = r.antichain.witness {
            prop_assert!(a.contains(&x) && a.contains(&y) && p.compatible(x, y).unwrap());
        }
        if let Some(Witness::Element(x)) = r.predense.witness {
            prop_assert!(a.iter().all(|&y| !p.compatible(x, y).unwrap()));
        }
        if let Some(Witness::Element(x)) = r.dense.witness {
            prop_assert!(a.iter().all(|&y| !p.le(y, x)));
        }
        if let Some(Witness::Pair(x, y)) = r.open.witness {
            prop_assert!(a.contains(&x) && !a.contains(&y) && p.le(y, x));
        }
    }

    #[test]
    fn corank_strictly_increases_downward(p in arb_poset()) {
        let r = p.corank();
        prop_assert_eq!(r[p.top()], 0);
        for x in p.elements() {
            for y in p.elements() {
                if p.lt(x, y) {
                    prop_assert!(r[x] > r[y]);
                }
            }
        }
    }

    #[test]
    fn separative_quotient_is_separative(p in arb_poset()) {
        let (q, proj) = p.separative_quotient();
        prop_assert!(q.is_separative());
        prop_assert_eq!(proj.len(), p.len());
        for x in p.elements() {
            for y in p.elements() {
                prop_assert_eq!(p.compatible(x, y).unwrap(), q.compatible(proj[x], proj[y]).unwrap());
                if p.le(x, y) {
                    prop_assert!(q.le(proj[x], proj[y]));
                }
            }
        }
        if p.is_separative() {
            prop_assert_eq!(q.len(), p.len());
        }
    }

    #[test]
    fn permuted_is_isomorphic(p in arb_poset(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = p.elements().collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let q = p.permuted(&perm);
        for x in p.elements() {
            for y in p.elements() {
                prop_assert_eq!(p.le(x, y), q.le(perm[x], perm[y]));
            }
        }
        prop_assert_eq!(chaincond::chain::canonical_key(&p), chaincond::chain::canonical_key(&q));
    }
}

#[test]
fn orthogonality_laws_exhaustive_small() {
    for p in posets_with_top(5).unwrap() {
        for mask in 0..1u64 << p.len() {
            let a = subset(&p, mask);
            let perp = p.perp(&a).unwrap();
            assert!(p.is_predense(&union(&a, &perp)));
            assert_eq!(p.is_predense(&a), perp.is_empty());
        }
    }
}

#[test]
fn build_rejects_bad_input() {
    use chaincond::Error;
    assert_eq!(FinitePoset::build(&["1", "a", "b"], &[("a", "1")], Some("1")), Err(Error::NoMaximum));
    assert_eq!(
        FinitePoset::build(&["1", "a"], &[("a", "x")], Some("1")),
        Err(Error::DanglingElement("x".into()))
    );
    assert_eq!(FinitePoset::build(&["1", "1"], &[], Some("1")), Err(Error::DuplicateElement("1".into())));
    // a cycle collapses to one element
    let p = FinitePoset::build(&["1", "a", "b"], &[("a", "1"), ("b", "1"), ("a", "b"), ("b", "a")], Some("1")).unwrap();
    assert_eq!(p.len(), 2);
}
