use std::cmp::Reverse;
use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::tree_poset;
use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Largest size for the isomorphism-free enumeration.
pub const MAX_ENUMERATED: usize = 9;

/// A family of posets to audit.
#[derive(Debug, Clone)]
pub enum Corpus {
    /// Every poset with a maximum up to isomorphism, sizes `1..=max_size`.
    Exhaustive { max_size: usize },
    /// The forcing trees among those.
    Trees { max_size: usize },
    /// `tree_poset(2, h)` for `h = 1..=max_height`.
    BinaryTrees { max_height: usize },
    /// Seeded random posets; poset `i` uses seed `seed + i`.
    Random { count: usize, max_size: usize, seed: u64 },
    Explicit(Vec<FinitePoset>),
}

impl Corpus {
    pub fn posets(&self) -> Result<Vec<FinitePoset>> {
        match self {
            Corpus::Exhaustive { max_size } => posets_with_top(*max_size),
            Corpus::Trees { max_size } => {
                Ok(posets_with_top(*max_size)?.into_iter().filter(FinitePoset::is_forcing_tree).collect())
            }
            Corpus::BinaryTrees { max_height } => (1..=*max_height).map(|h| tree_poset(2, h)).collect(),
            Corpus::Random { count, max_size, seed } => Ok((0..*count)
                .map(|i| random_poset(seed.wrapping_add(i as u64), *max_size))
                .collect()),
            Corpus::Explicit(ps) => Ok(ps.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Corpus::Exhaustive { max_size } => format!("all posets with a maximum, up to {max_size} elements"),
            Corpus::Trees { max_size } => format!("forcing trees up to {max_size} elements"),
            Corpus::BinaryTrees { max_height } => format!("binary trees of height up to {max_height}"),
            Corpus::Random { count, max_size, seed } => {
                format!("{count} random posets up to {max_size} elements, seed {seed}")
            }
            Corpus::Explicit(ps) => format!("{} given posets", ps.len()),
        }
    }
}

fn refined_signature(p: &FinitePoset) -> Vec<(Reverse<usize>, usize, Vec<usize>, Vec<usize>)> {
    let base: Vec<(usize, usize)> = p
        .elements()
        .map(|x| (p.down_set(x).count_ones(..), p.up_set(x).count_ones(..)))
        .collect();
    let code = |x: usize| base[x].0 * 1000 + base[x].1;
    p.elements()
        .map(|x| {
            let mut down: Vec<usize> = p.down_set(x).ones().map(code).collect();
            let mut up: Vec<usize> = p.up_set(x).ones().map(code).collect();
            down.sort_unstable();
            up.sort_unstable();
            (Reverse(base[x].0), base[x].1, down, up)
        })
        .collect()
}

/// Canonical order of the elements: lexicographically least `≤`-matrix among
/// the orderings that sort elements by a refined degree signature.
fn canonical_order(p: &FinitePoset) -> Vec<usize> {
    let n = p.len();
    let sig = refined_signature(p);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sig[a].cmp(&sig[b]));
    let mut classes: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && sig[order[j]] == sig[order[i]] {
            j += 1;
        }
        classes.push((i, j));
        i = j;
    }
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn rows(p: &FinitePoset, order: &[usize]) -> Vec<u64> {
        order
            .iter()
            .map(|&a| order.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | (p.le(a, b) as u64) << j))
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        p: &FinitePoset,
        order: &[usize],
        classes: &[(usize, usize)],
        pos: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<(Vec<u64>, Vec<usize>)>,
    ) {
        if pos == order.len() {
            let key = rows(p, cur);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                *best = Some((key, cur.clone()));
            }
            return;
        }
        let &(lo, hi) = classes.iter().find(|(lo, hi)| (*lo..*hi).contains(&pos)).expect("class");
        for &x in &order[lo..hi] {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(p, order, classes, pos + 1, cur, used, best);
                cur.pop();
                used[x] = false;
            }
        }
    }

    rec(p, &order, &classes, 0, &mut cur, &mut used, &mut best);
    best.expect("at least one ordering").1
}

/// Isomorphism invariant: the rows of the canonically ordered `≤`-matrix.
pub fn canonical_key(p: &FinitePoset) -> Vec<u64> {
    let order = canonical_order(p);
    order
        .iter()
        .map(|&a| order.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | (p.le(a, b) as u64) << j))
        .collect()
}

fn canonical_form(p: &FinitePoset) -> (Vec<u64>, FinitePoset) {
    let order = canonical_order(p);
    let n = p.len();
    let ids = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("p{i}") }).collect();
    let q = FinitePoset::from_le(ids, n, |a, b| p.le(order[a], order[b])).expect("top stays the maximum");
    (canonical_key(&q), q)
}

/// Every poset with a maximum on `1..=max_size` elements, one per
/// isomorphism class, by size and then canonical key.
///
/// Each poset of size `k + 1` arises from one of size `k` by adding a new
/// minimal element below a nonempty up-set.
pub fn posets_with_top(max_size: usize) -> Result<Vec<FinitePoset>> {
    if max_size > MAX_ENUMERATED {
        return Err(Error::SizeCapExceeded {
            what: "isomorphism-free poset enumeration",
            limit: MAX_ENUMERATED,
            actual: max_size,
        });
    }
    let mut out = Vec::new();
    if max_size == 0 {
        return Ok(out);
    }
    let mut level = vec![FinitePoset::singleton("1")];
    out.extend(level.iter().cloned());
    for _ in 1..max_size {
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut next: Vec<(Vec<u64>, FinitePoset)> = Vec::new();
        for q in &level {
            let k = q.len();
            for mask in 1u64..1 << k {
                if mask & 1 << q.top() == 0 {
                    continue;
                }
                let upward = (0..k).all(|u| mask >> u & 1 == 0 || q.up_set(u).ones().all(|v| mask >> v & 1 == 1));
                if !upward {
                    continue;
                }
                let ids: Vec<String> = (0..=k).map(|i| format!("t{i}")).collect();
                let ext = FinitePoset::from_le(ids, k + 1, |a, b| match (a == k, b == k) {
                    (false, false) => q.le(a, b),
                    (true, false) => mask >> b & 1 == 1,
                    (true, true) => true,
                    (false, true) => false,
                })?;
                let (key, canon) = canonical_form(&ext);
                if seen.insert(key.clone()) {
                    next.push((key, canon));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, p)| p).collect();
        out.extend(level.iter().cloned());
    }
    Ok(out)
}

/// A random poset with a maximum and `1..=max_size` elements. Below the top,
/// element `j` is put under element `i < j` with a per-poset random density,
/// then the transitive closure is taken.
pub fn random_poset(seed: u64, max_size: usize) -> FinitePoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_size.max(1));
    let density: f64 = rng.gen_range(0.15..0.85);
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
        row[0] = true;
    }
    for i in 1..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                le[j][i] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    let ids = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("r{i}") }).collect();
    FinitePoset::from_le(ids, n, |a, b| le[a][b]).expect("index 0 is the maximum")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::flat_poset;

    #[test]
    fn counts_match_unlabeled_poset_numbers() {
        // posets with a maximum on n + 1 elements correspond to posets on n
        // elements: 1, 1, 2, 5, 16, 63, 318
        let ps = posets_with_top(7).unwrap();
        let mut counts = vec![0; 8];
        for p in &ps {
            counts[p.len()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn canonical_key_is_invariant() {
        let a = FinitePoset::build(&["1", "x", "y", "z"], &[("x", "1"), ("y", "1"), ("z", "x")], Some("1")).unwrap();
        let b = FinitePoset::build(&["1", "z", "y", "x"], &[("x", "1"), ("y", "1"), ("z", "y")], Some("1")).unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert_ne!(canonical_key(&a), canonical_key(&flat_poset("1", &["a", "b", "c"]).unwrap()));
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(random_poset(5, 9), random_poset(5, 9));
        for s in 0..50 {
            let p = random_poset(s, 9);
            assert!((1..=9).contains(&p.len()));
            assert_eq!(p.top(), 0);
        }
    }

    #[test]
    fn tree_corpora() {
        let trees = Corpus::Trees { max_size: 5 }.posets().unwrap();
        // rooted trees on 1..=5 nodes: 1, 1, 2, 4, 9
        assert_eq!(trees.len(), 17);
        assert_eq!(Corpus::BinaryTrees { max_height: 3 }.posets().unwrap().len(), 3);
    }
}
