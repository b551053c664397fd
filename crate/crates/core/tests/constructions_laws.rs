use chaincond::chain::{posets_with_top, random_poset};
use chaincond::constructions::{
    add_condition_count, add_conditions, add_poset, chain, col_poset, flat_poset, lottery, pair_forcing,
    product_drop_top, sequences, tree_iteration, tree_poset,
};
use chaincond::FinitePoset;
use proptest::prelude::*;

fn subsets(p: &FinitePoset) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..1u64 << p.len()).map(move |m| p.elements().filter(|&x| m >> x & 1 == 1).collect())
}

fn maximal_antichains(p: &FinitePoset) -> Vec<Vec<usize>> {
    subsets(p).filter(|a| p.is_maximal_antichain(a)).collect()
}

proptest! {
    #[test]
    fn lottery_compatibility(seeds in proptest::collection::vec(any::<u64>(), 1..4)) {
        let parts: Vec<FinitePoset> = seeds.iter().map(|&s| random_poset(s, 4)).collect();
        let l = lottery(&parts, false).unwrap();
        let p = &l.poset;
        for x in 1..p.len() {
            for y in 1..p.len() {
                let (a, b) = (l.origin[x].unwrap(), l.origin[y].unwrap());
                let expected = a.summand == b.summand && parts[a.summand].compatible(a.element, b.element).unwrap();
                prop_assert_eq!(p.compatible(x, y).unwrap(), expected);
            }
        }
        if p.len() <= 12 {
            for a in maximal_antichains(p) {
                if a != vec![p.top()] {
                    prop_assert!(l.blocks.iter().all(|b| b.iter().any(|x| a.contains(x))));
                }
            }
        }
    }

    #[test]
    fn product_slices_are_antichains(sq in any::<u64>(), sc in any::<u64>()) {
        let q = random_poset(sq, 3);
        let c = random_poset(sc, 4);
        prop_assume!(c.len() > 1);
        let p = product_drop_top(&q, &c).unwrap();
        prop_assert_eq!(p.len(), 1 + q.len() * (c.len() - 1));
        let cs: Vec<usize> = c.elements().filter(|&x| x != c.top()).collect();
        // element 1 + i * |cs| + j is (q_i, cs[j])
        let decode = |x: usize| ((x - 1) / cs.len(), cs[(x - 1) % cs.len()]);
        prop_assume!(p.len() <= 14);
        for a in subsets(&p).filter(|a| p.is_antichain(a)) {
            for qi in q.elements() {
                let slice: Vec<usize> = a.iter().filter(|&&x| x != 0 && decode(x).0 == qi).map(|&x| decode(x).1).collect();
                prop_assert!(c.is_antichain(&slice));
            }
        }
    }
}

#[test]
fn lottery_maximal_antichains_meet_every_summand() {
    let v = flat_poset("q", &["c", "d"]).unwrap();
    for parts in [vec![v.clone(), v.clone()], vec![v.clone(), chain(2).unwrap(), v]] {
        let l = lottery(&parts, false).unwrap();
        for a in maximal_antichains(&l.poset) {
            assert!(a == vec![0] || l.blocks.iter().all(|b| b.iter().any(|x| a.contains(x))));
        }
    }
}

fn parse_pair(id: &str) -> (Vec<usize>, Vec<usize>) {
    // "({0:1,1:0};<01>)"
    let inner = &id[1..id.len() - 1];
    let (f, t) = inner.split_once(';').unwrap();
    let f = f[1..f.len() - 1]
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| kv.split_once(':').unwrap().1.parse().unwrap())
        .collect();
    let t = t[1..t.len() - 1].chars().map(|ch| ch.to_digit(10).unwrap() as usize).collect();
    (f, t)
}

#[test]
fn pair_forcing_compatibility() {
    for (k, values, h) in [(1, 2, 2), (2, 2, 3), (2, 3, 3), (3, 2, 3)] {
        let tree = sequences(2, h);
        let p = pair_forcing(k, values, &tree).unwrap();
        let decoded: Vec<(Vec<usize>, Vec<usize>)> = p.ids().iter().map(|s| parse_pair(s)).collect();
        for x in p.elements() {
            for y in p.elements() {
                let ((f, t), (g, s)) = (&decoded[x], &decoded[y]);
                let function = f.iter().zip(g).all(|(a, b)| a == b);
                let comparable = t.starts_with(s) || s.starts_with(t);
                assert_eq!(p.compatible(x, y).unwrap(), function && comparable, "{} {}", p.id(x), p.id(y));
            }
        }
    }
}

#[test]
fn product_slices_exhaustive() {
    let vee = flat_poset("1", &["a", "b"]).unwrap();
    for q in posets_with_top(3).unwrap() {
        for c in [vee.clone(), chain(3).unwrap(), tree_poset(2, 2).unwrap()] {
            let p = product_drop_top(&q, &c).unwrap();
            let cs: Vec<usize> = c.elements().filter(|&x| x != c.top()).collect();
            for a in subsets(&p).filter(|a| p.is_antichain(a)) {
                for qi in q.elements() {
                    let slice: Vec<usize> = a
                        .iter()
                        .filter(|&&x| x != 0 && (x - 1) / cs.len() == qi)
                        .map(|&x| cs[(x - 1) % cs.len()])
                        .collect();
                    assert!(c.is_antichain(&slice));
                }
            }
        }
    }
}

#[test]
fn tree_iteration_fibers_are_products() {
    let b = flat_poset("1", &["a", "b"]).unwrap();
    for (arity, height) in [(1, 3), (2, 2), (2, 3)] {
        let it = tree_iteration(arity, height, &b).unwrap();
        let p = &it.poset;
        for x in p.elements() {
            for y in p.elements() {
                if p.le(x, y) {
                    assert!(it.tree.le(it.project_stem(x), it.project_stem(y)));
                }
            }
        }
        for t in it.tree.elements() {
            let fiber = it.fiber(t);
            let depth = it.sequences[t].len();
            assert_eq!(fiber.len(), b.len().pow(depth as u32));
            for &x in &fiber {
                for &y in &fiber {
                    let product = (0..depth).all(|i| b.le(it.coordinates(x)[i], it.coordinates(y)[i]));
                    assert_eq!(p.le(x, y), product);
                }
            }
        }
    }
}

#[test]
fn add_poset_compatibility() {
    for (lambda, bound) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
        let p = add_poset(1, lambda, bound).unwrap();
        let conds = add_conditions(1, lambda, bound);
        assert_eq!(conds.len(), add_condition_count(1, lambda, bound));
        assert_eq!(p.len(), conds.len());
        for x in p.elements() {
            assert_eq!(p.id(x), conds[x].id());
            for y in p.elements() {
                let u = conds[x].union(&conds[y]);
                assert_eq!(conds[x].union_is_function(&conds[y]), u.is_some());
                // a common extension must also respect the size bound
                let expected = u.is_some_and(|u| u.len() <= bound);
                assert_eq!(p.compatible(x, y).unwrap(), expected);
            }
        }
    }
    // with no effective bound compatibility is exactly "the union is a function"
    let p = add_poset(1, 1, 2).unwrap();
    let conds = add_conditions(1, 1, 2);
    for x in p.elements() {
        for y in p.elements() {
            assert_eq!(p.compatible(x, y).unwrap(), conds[x].union_is_function(&conds[y]));
        }
    }
}

#[test]
fn col_poset_counts_partial_functions() {
    for (k, v) in [(1, 1), (2, 2), (3, 2), (2, 3)] {
        let p = col_poset(k, v).unwrap();
        assert_eq!(p.len(), (v + 1).pow(k as u32));
        // maximal antichains of total functions
        let total: Vec<usize> = p.elements().filter(|&x| p.down_set(x).count_ones(..) == 1).collect();
        assert_eq!(total.len(), v.pow(k as u32));
        assert!(p.is_maximal_antichain(&total));
    }
}
