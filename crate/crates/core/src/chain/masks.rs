//! Subsets of posets with at most 64 elements as `u64` bitmasks.

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

pub(crate) struct Masks {
    pub n: usize,
    /// `compat[p]`: elements compatible with `p` (including `p`).
    pub compat: Vec<u64>,
}

impl Masks {
    pub fn new(p: &FinitePoset) -> Result<Self> {
        let n = p.len();
        if n > 64 {
            return Err(Error::SizeCapExceeded {
                what: "bitmask subset representation",
                limit: 64,
                actual: n,
            });
        }
        let compat = p.elements().map(|x| to_mask(p.compatible_with(x).ones())).collect();
        Ok(Masks { n, compat })
    }

    pub fn predense(&self, d: u64) -> bool {
        self.compat.iter().all(|&c| c & d != 0)
    }

    pub fn antichain(&self, a: u64) -> bool {
        ones(a).all(|x| self.compat[x] & a == 1 << x)
    }

    pub fn maximal(&self, a: u64) -> bool {
        self.antichain(a) && self.predense(a)
    }

    /// Elements incompatible with `x`.
    pub fn perp_of(&self, x: usize) -> u64 {
        !self.compat[x] & self.all()
    }

    pub fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Every maximal antichain (a maximal clique of the incompatibility
    /// graph), by Bron–Kerbosch with pivoting.
    pub fn maximal_antichains(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.bron_kerbosch(0, self.all(), 0, &mut out);
        out
    }

    fn bron_kerbosch(&self, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = ones(p | x).max_by_key(|&u| (p & self.perp_of(u)).count_ones()).expect("nonempty");
        for v in ones(p & !self.perp_of(pivot)) {
            let nv = self.perp_of(v);
            self.bron_kerbosch(r | 1 << v, p & nv, x & nv, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }

    /// Calls `f` on every antichain, the empty one included.
    pub fn for_each_antichain(&self, mut f: impl FnMut(u64)) {
        fn rec(m: &Masks, cur: u64, cand: u64, f: &mut impl FnMut(u64)) {
            f(cur);
            for v in ones(cand) {
                let rest = cand & m.perp_of(v) & !((2u64 << v).wrapping_sub(1));
                rec(m, cur | 1 << v, rest, f);
            }
        }
        rec(self, 0, self.all(), &mut f);
    }
}

pub(crate) fn to_mask(it: impl IntoIterator<Item = usize>) -> u64 {
    it.into_iter().fold(0, |acc, x| acc | 1 << x)
}

pub(crate) fn ones(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) fn to_vec(m: u64) -> Vec<usize> {
    ones(m).collect()
}

/// Lexicographic comparison of the sorted member lists.
pub(crate) fn lex_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    to_vec(a).cmp(&to_vec(b))
}

/// Size, then lexicographic.
pub(crate) fn shortlex_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| lex_cmp(a, b))
}

/// Subsets of `m` in shortlex order.
pub(crate) fn subsets_shortlex(m: u64) -> impl Iterator<Item = u64> {
    let elems = to_vec(m);
    let k = elems.len();
    (0..=k).flat_map(move |size| {
        let elems = elems.clone();
        crate::constructions::combinations(k, size)
            .into_iter()
            .map(move |c| c.iter().fold(0u64, |acc, &i| acc | 1 << elems[i]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flat_poset, tree_poset};

    #[test]
    fn maximal_antichains_of_c3() {
        let c3 = tree_poset(2, 3).unwrap();
        let m = Masks::new(&c3).unwrap();
        let mut got: Vec<Vec<usize>> = m.maximal_antichains().into_iter().map(to_vec).collect();
        got.sort();
        assert_eq!(
            got,
            vec![vec![0], vec![1, 2], vec![1, 5, 6], vec![2, 3, 4], vec![3, 4, 5, 6]]
        );
    }

    #[test]
    fn antichain_count_of_a3() {
        let a3 = flat_poset("1", &["a", "b", "c"]).unwrap();
        let m = Masks::new(&a3).unwrap();
        let mut count = 0;
        m.for_each_antichain(|a| {
            assert!(m.antichain(a));
            count += 1;
        });
        // empty, {1}, and the 7 nonempty subsets of the atoms
        assert_eq!(count, 9);
    }

    #[test]
    fn shortlex_subsets() {
        let got: Vec<Vec<usize>> = subsets_shortlex(0b1011).map(to_vec).collect();
        assert_eq!(
            got,
            vec![vec![], vec![0], vec![1], vec![3], vec![0, 1], vec![0, 3], vec![1, 3], vec![0, 1, 3]]
        );
    }
}
