use chaincond::chain::{posets_with_top, random_poset};
use chaincond::constructions::{flat_poset, lottery};
use chaincond::symmetry::{
    automorphism_group, decompose, is_automorphism, wreath, Perm, PermGroup, SupportIdeal, SymmetryStructure,
};
use proptest::prelude::*;

fn permutations(n: usize) -> Vec<Perm> {
    PermGroup::symmetric(n).unwrap().elements().to_vec()
}

/// Subgroups of `S_n` by brute force: nonempty subsets closed under composition.
fn subgroups(n: usize) -> Vec<PermGroup> {
    let all = permutations(n);
    let mut out = Vec::new();
    for mask in 1u64..1 << all.len() {
        let set: Vec<&Perm> = (0..all.len()).filter(|&i| mask >> i & 1 == 1).map(|i| &all[i]).collect();
        if set.iter().all(|a| set.iter().all(|b| set.contains(&&a.compose(b)))) {
            out.push(PermGroup::from_closed(n, set.into_iter().cloned().collect()));
        }
    }
    out
}

#[test]
fn subgroup_counts() {
    // S1: 1, S2: 2, S3: 6
    assert_eq!(subgroups(1).len(), 1);
    assert_eq!(subgroups(2).len(), 2);
    assert_eq!(subgroups(3).len(), 6);
}

#[test]
fn wreath_order_and_semidirect_law() {
    for x in 1..=3 {
        for y in 1..=2 {
            for g in subgroups(x) {
                for h in subgroups(y) {
                    let w = wreath(&g, &h).unwrap();
                    let expected = g.order() * h.order().pow(x as u32);
                    assert_eq!(w.group().order(), expected);
                    let els = w.group().elements();
                    for pi in els {
                        let (base, secs) = decompose(x, y, pi).unwrap();
                        assert!(g.contains(&base) && secs.iter().all(|s| h.contains(s)));
                        assert_eq!(&w.reconstruct(&base, &secs).unwrap(), pi);
                        assert_eq!(w.base_part(&pi.inverse()), base.inverse());
                    }
                    for pi in els.iter().take(12) {
                        for sigma in els.iter().take(12) {
                            let ps = pi.compose(sigma);
                            assert_eq!(w.base_part(&ps), w.base_part(pi).compose(&w.base_part(sigma)));
                            for a in 0..x {
                                let s = w.section(pi, w.base_part(sigma).apply(a)).compose(&w.section(sigma, a));
                                assert_eq!(w.section(&ps, a), s);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn automorphism_counts_match_brute_force() {
    for p in posets_with_top(6).unwrap() {
        let count = permutations(p.len()).iter().filter(|g| is_automorphism(&p, g)).count();
        let g = automorphism_group(&p).unwrap();
        assert_eq!(g.order(), count, "{p:?}");
        assert!(g.elements().iter().all(|e| is_automorphism(&p, e)));
    }
}

fn vee_lottery(k: usize, bound: usize) -> SymmetryStructure {
    let v = flat_poset("q", &["c", "d"]).unwrap();
    let l = lottery(&vec![v.clone(); k], false).unwrap();
    let g = automorphism_group(&v).unwrap();
    SymmetryStructure::lottery(&l, &vec![g; k], SupportIdeal::bounded(k, bound)).unwrap()
}

fn union_of_orbits(orbits: &[Vec<usize>], x: &[usize]) -> bool {
    orbits.iter().all(|o| o.iter().all(|e| x.contains(e)) || o.iter().all(|e| !x.contains(e)))
}

proptest! {
    #[test]
    fn fix_of_union_is_intersection(a in any::<u8>(), b in any::<u8>()) {
        let s = vee_lottery(4, 4);
        let a: Vec<usize> = (0..4).filter(|i| a >> i & 1 == 1).collect();
        let b: Vec<usize> = (0..4).filter(|i| b >> i & 1 == 1).collect();
        let mut ab = a.clone();
        ab.extend(&b);
        ab.sort_unstable();
        ab.dedup();
        let (fa, fb, fab) = (s.fix(&a).unwrap(), s.fix(&b).unwrap(), s.fix(&ab).unwrap());
        let meet: Vec<Perm> = fa.elements().iter().filter(|g| fb.contains(g)).cloned().collect();
        prop_assert_eq!(fab.elements(), meet.as_slice());
        // orbits of fix(A) refine the orbits of G
        let g_orbits = s.element_orbits(s.group());
        for o in s.element_orbits(&fa) {
            prop_assert!(g_orbits.iter().any(|go| o.iter().all(|e| go.contains(e))));
        }
    }

    #[test]
    fn stable_iff_union_of_orbits(seed in any::<u64>(), mask in any::<u64>()) {
        let p = random_poset(seed, 7);
        let g = automorphism_group(&p).unwrap();
        let x: Vec<usize> = p.elements().filter(|&e| mask >> e & 1 == 1).collect();
        prop_assert_eq!(g.is_stable(&x).unwrap(), union_of_orbits(&g.orbits(), &x));
        prop_assert_eq!(
            g.is_stable(&x).unwrap(),
            g.elements().iter().all(|h| h.image_of(&x) == x)
        );
    }

    #[test]
    fn conjugation_of_fix(seed in any::<u64>(), mask in any::<u64>()) {
        let p = random_poset(seed, 7);
        let g = automorphism_group(&p).unwrap();
        let n = p.len();
        let s = SymmetryStructure::on_elements(p, g.clone(), SupportIdeal::full(n)).unwrap();
        let a: Vec<usize> = (0..n).filter(|&e| mask >> e & 1 == 1).collect();
        let fa = s.fix(&a).unwrap();
        for pi in g.elements().iter().take(8) {
            let image = pi.image_of(&a);
            prop_assert!(fa.conjugate_by(pi).same_elements(&s.fix(&image).unwrap()));
        }
    }
}

#[test]
fn normality_holds_for_built_structures() {
    for (k, bound) in [(2, 1), (3, 1), (3, 2), (4, 1)] {
        let s = vee_lottery(k, bound);
        let r = s.normality_audit();
        assert!(r.holds, "{k} {bound}: {:?}", r.violations.first());
    }
    for lambda in 1..=3 {
        let s = SymmetryStructure::add(1, lambda, 1, &PermGroup::trivial(1), SupportIdeal::bounded(lambda, 1)).unwrap();
        assert!(s.normality_audit().holds);
    }
}
