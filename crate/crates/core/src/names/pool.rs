use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poset::FinitePoset;

use super::hfset::HfSet;
use super::pname::PName;

/// A deterministic pool of names of rank at most `max_rank`.
///
/// Every name of rank at most 1 is included when there are no more than
/// `cap` of them. The remaining room is filled with seeded random names of
/// rank 2 up to `max_rank`, each with one to three entries, at least one of
/// them of the top level below. Check names of small ordinals are always
/// present. The result is sorted by rank, then canonically.
pub fn name_pool(poset: &FinitePoset, max_rank: usize, cap: usize, seed: u64) -> Vec<PName> {
    let n = poset.len();
    let mut pool: Vec<PName> = vec![PName::empty()];
    if max_rank >= 1 && n < 20 && (1usize << n) <= cap {
        for mask in 1u32..1 << n {
            let entries = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i, PName::empty()))
                .collect();
            pool.push(PName::new(entries));
        }
    }
    for k in 0..=max_rank.min(3) {
        let c = PName::check(poset, &HfSet::ordinal(k));
        if c.rank() <= max_rank && !pool.contains(&c) {
            pool.push(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while pool.len() < cap && attempts < cap * 20 && max_rank >= 1 {
        attempts += 1;
        let rank = rng.gen_range(1..=max_rank);
        let lower: Vec<&PName> = pool.iter().filter(|x| x.rank() < rank).collect();
        let top: Vec<&PName> = lower.iter().copied().filter(|x| x.rank() + 1 == rank).collect();
        if top.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=3);
        let mut entries = vec![(rng.gen_range(0..n), top[rng.gen_range(0..top.len())].clone())];
        for _ in 1..k {
            entries.push((rng.gen_range(0..n), lower[rng.gen_range(0..lower.len())].clone()));
        }
        let name = PName::new(entries);
        if !pool.contains(&name) {
            pool.push(name);
        }
    }
    pool.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.cmp(b)));
    pool
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tree_poset;

    #[test]
    fn pool_is_deterministic_and_bounded() {
        let c2 = tree_poset(2, 2).unwrap();
        let a = name_pool(&c2, 2, 40, 7);
        assert_eq!(a, name_pool(&c2, 2, 40, 7));
        assert!(a.len() <= 40);
        assert!(a.iter().all(|x| x.rank() <= 2));
        assert_eq!(a.iter().filter(|x| x.rank() <= 1).count(), 8);
        assert!(a.iter().any(|x| x.rank() == 2));
    }
}
