use chaincond::chain::{posets_with_top, random_poset};
use chaincond::names::{
    atomic_formulas, forces, forces_recursive, generic_filters, name_pool, sym_group, verify_symmetry_lemma, Forcer,
    Formula, HfSet, PName,
};
use chaincond::symmetry::{automorphism_group, SupportIdeal, SymmetryStructure};
use chaincond::FinitePoset;
use proptest::prelude::*;

fn formulas(p: &FinitePoset, seed: u64) -> Vec<Formula> {
    let pool = name_pool(p, 2, 10, seed);
    let atoms = atomic_formulas(&pool);
    let mut out = atoms.clone();
    for (i, a) in atoms.iter().enumerate().take(20) {
        out.push(Formula::not(a.clone()));
        let b = &atoms[(i * 7 + 3) % atoms.len()];
        out.push(Formula::and(a.clone(), Formula::not(b.clone())));
        out.push(Formula::or(a.clone(), b.clone()));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn semantic_and_recursive_agree(seed in any::<u64>()) {
        let p = random_poset(seed, 5);
        let mut forcer = Forcer::new(&p);
        for phi in formulas(&p, seed) {
            for c in p.elements() {
                prop_assert_eq!(forces(&p, c, &phi), forcer.forces(c, &phi), "{} at {}", phi, p.id(c));
            }
        }
    }

    #[test]
    fn monotone_and_consistent(seed in any::<u64>()) {
        let p = random_poset(seed, 5);
        for phi in formulas(&p, seed ^ 0x5eed) {
            let neg = Formula::not(phi.clone());
            for c in p.elements() {
                let f = forces(&p, c, &phi);
                prop_assert!(!(f && forces(&p, c, &neg)));
                if f {
                    prop_assert!(p.down_set(c).ones().all(|q| forces(&p, q, &phi)));
                }
                let no_q_forces_neg = p.down_set(c).ones().all(|q| !forces(&p, q, &neg));
                prop_assert_eq!(f, no_q_forces_neg);
            }
        }
    }

    #[test]
    fn action_commutes_with_evaluation(seed in any::<u64>()) {
        let p = random_poset(seed, 6);
        let g = automorphism_group(&p).unwrap();
        let filters = generic_filters(&p);
        let pool = name_pool(&p, 2, 16, seed);
        for pi in g.elements() {
            for x in &pool {
                let moved = x.act(pi);
                for gf in &filters {
                    let image = pi.image_of(&gf.members());
                    let target = filters.iter().find(|h| h.members() == image).expect("image of a generic");
                    prop_assert_eq!(moved.evaluate(target), x.evaluate(gf));
                }
            }
        }
    }

    #[test]
    fn sym_group_conjugates(seed in any::<u64>()) {
        let p = random_poset(seed, 6);
        let g = automorphism_group(&p).unwrap();
        let n = p.len();
        let s = SymmetryStructure::on_elements(p.clone(), g.clone(), SupportIdeal::trivial(n)).unwrap();
        for x in name_pool(&p, 2, 12, seed) {
            let sx = sym_group(&s, &x).unwrap();
            for pi in g.elements() {
                prop_assert!(sym_group(&s, &x.act(pi)).unwrap().same_elements(&sx.conjugate_by(pi)));
            }
        }
    }
}

#[test]
fn check_names_evaluate_to_themselves() {
    for p in posets_with_top(4).unwrap() {
        let sets = [
            HfSet::ordinal(0),
            HfSet::ordinal(2),
            HfSet::ordinal(3),
            HfSet::kuratowski(HfSet::ordinal(1), HfSet::ordinal(2)),
        ];
        for x in &sets {
            let c = PName::check(&p, x);
            for gf in generic_filters(&p) {
                assert_eq!(&c.evaluate(&gf), x);
            }
        }
    }
}

#[test]
fn symmetry_lemma_small_corpus() {
    for (i, p) in posets_with_top(4).unwrap().into_iter().enumerate() {
        let g = automorphism_group(&p).unwrap();
        let pool = name_pool(&p, 2, 14, i as u64);
        let phis = atomic_formulas(&pool);
        let v = verify_symmetry_lemma(&p, &g, &phis);
        assert!(v.is_empty(), "{:?}", v.first());
        let mut rec = Forcer::new(&p);
        for phi in &phis {
            for c in p.elements() {
                assert_eq!(rec.forces(c, phi), forces_recursive(&p, c, phi));
            }
        }
    }
}
