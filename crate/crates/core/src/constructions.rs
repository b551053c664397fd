//! Poset constructors: lottery sums, collapses, trees, the pair forcing, the
//! product with a headless factor, finite Cohen-style forcings and the tree
//! iteration.
//!
//! Every constructor lists the maximum first and names elements with stable
//! tag-path strings.

use crate::error::{Error, Result};
use crate::limits;
use crate::poset::FinitePoset;

fn check_size(n: usize) -> Result<()> {
    limits::check_elements(n)
}

/// Top with `atoms` pairwise incompatible elements below it.
pub fn flat_poset(top: &str, atoms: &[&str]) -> Result<FinitePoset> {
    let mut ids = vec![top.to_string()];
    ids.extend(atoms.iter().map(|s| s.to_string()));
    let n = ids.len();
    FinitePoset::from_le(ids, n, |a, b| a == b || b == 0)
}

/// `n`-element chain `1 > c1 > ... > c(n-1)`.
pub fn chain(n: usize) -> Result<FinitePoset> {
    assert!(n >= 1);
    let ids = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("c{i}") }).collect();
    FinitePoset::from_le(ids, n, |a, b| a >= b)
}

/// Origin of an element of a lottery sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tagged {
    pub summand: usize,
    pub element: usize,
}

/// A lottery sum together with its summand layout.
#[derive(Debug, Clone)]
pub struct Lottery {
    pub poset: FinitePoset,
    /// Element indices of each summand, in order.
    pub blocks: Vec<Vec<usize>>,
    /// `None` for the fresh maximum.
    pub origin: Vec<Option<Tagged>>,
}

/// Lottery sum of `parts` under a fresh maximum. With `headless`, each part's
/// own maximum is dropped first.
pub fn lottery(parts: &[FinitePoset], headless: bool) -> Result<Lottery> {
    let mut origin = vec![None];
    let mut ids = vec!["1".to_string()];
    let mut blocks = Vec::with_capacity(parts.len());
    for (i, part) in parts.iter().enumerate() {
        let mut block = Vec::new();
        for p in part.elements() {
            if headless && p == part.top() {
                continue;
            }
            block.push(origin.len());
            origin.push(Some(Tagged { summand: i, element: p }));
            ids.push(format!("{i}:{}", part.id(p)));
        }
        blocks.push(block);
    }
    let n = ids.len();
    check_size(n)?;
    let poset = FinitePoset::from_le(ids, n, |a, b| match (origin[a], origin[b]) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x.summand == y.summand && parts[x.summand].le(x.element, y.element),
    })?;
    Ok(Lottery { poset, blocks, origin })
}

pub fn lottery_sum(parts: &[FinitePoset]) -> Result<FinitePoset> {
    lottery(parts, false).map(|l| l.poset)
}

fn seq_id(s: &[usize], arity: usize) -> String {
    let sep = if arity <= 10 { "" } else { "," };
    let body: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("<{}>", body.join(sep))
}

/// All sequences over `0..arity` of length `< height`, shortlex order.
pub fn sequences(arity: usize, height: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    if height == 0 {
        return out;
    }
    out.push(Vec::new());
    let mut level = vec![Vec::new()];
    for _ in 1..height {
        let mut next = Vec::new();
        for s in &level {
            for x in 0..arity {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn extends(longer: &[usize], shorter: &[usize]) -> bool {
    longer.len() >= shorter.len() && &longer[..shorter.len()] == shorter
}

/// `X^{<height}` for `|X| = arity`, ordered by reverse extension.
pub fn tree_poset(arity: usize, height: usize) -> Result<FinitePoset> {
    assert!(height >= 1, "tree height must be at least 1");
    let seqs = sequences(arity, height);
    check_size(seqs.len())?;
    let ids = seqs.iter().map(|s| seq_id(s, arity)).collect();
    FinitePoset::from_le(ids, seqs.len(), |a, b| extends(&seqs[a], &seqs[b]))
}

/// Poset on an explicit tree of sequences (closed under initial segments).
pub fn tree_from_sequences(tree: &[Vec<usize>]) -> Result<FinitePoset> {
    let tree = validate_tree(tree)?;
    let arity = tree.iter().flatten().max().map_or(1, |m| m + 1);
    let ids = tree.iter().map(|s| seq_id(s, arity)).collect();
    FinitePoset::from_le(ids, tree.len(), |a, b| extends(&tree[a], &tree[b]))
}

fn validate_tree(tree: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let mut t: Vec<Vec<usize>> = tree.to_vec();
    t.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let before = t.len();
    t.dedup();
    if t.len() != before {
        return Err(Error::MalformedTree("duplicate sequence".into()));
    }
    if t.first().is_none_or(|s| !s.is_empty()) {
        return Err(Error::MalformedTree("missing the empty sequence".into()));
    }
    for s in &t {
        if !s.is_empty() && t.binary_search_by(|u| {
            let p = &s[..s.len() - 1];
            u.len().cmp(&p.len()).then_with(|| u.as_slice().cmp(p))
        })
        .is_err()
        {
            return Err(Error::MalformedTree(format!("{s:?} has no parent")));
        }
    }
    Ok(t)
}

fn fn_id(f: &[Option<usize>]) -> String {
    let body: Vec<String> = f
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| format!("{i}:{v}")))
        .collect();
    format!("{{{}}}", body.join(","))
}

/// All partial functions `0..k -> 0..values`, by domain size then lexicographically.
fn partial_functions(k: usize, values: usize) -> Vec<Vec<Option<usize>>> {
    let mut all: Vec<Vec<Option<usize>>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(all.len() * (values + 1));
        for f in &all {
            for v in std::iter::once(None).chain((0..values).map(Some)) {
                let mut g = f.clone();
                g.push(v);
                next.push(g);
            }
        }
        all = next;
    }
    all.sort_by(|a, b| {
        let da = a.iter().filter(|v| v.is_some()).count();
        let db = b.iter().filter(|v| v.is_some()).count();
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    all
}

fn fn_extends(f: &[Option<usize>], g: &[Option<usize>]) -> bool {
    f.iter().zip(g).all(|(a, b)| b.is_none() || a == b)
}

/// Partial functions from `0..k` to a set of size `values`, ordered by `⊇`.
pub fn col_poset(k: usize, values: usize) -> Result<FinitePoset> {
    let size = (values + 1).checked_pow(k as u32).unwrap_or(usize::MAX);
    check_size(size)?;
    let fs = partial_functions(k, values);
    let ids = fs.iter().map(|f| fn_id(f)).collect();
    FinitePoset::from_le(ids, fs.len(), |a, b| fn_extends(&fs[a], &fs[b]))
}

/// Pairs `(f, t)` with `t` in `tree`, `|t| <= k` and `f` a function on
/// `{0, ..., |t|-1}` into `0..values`; `(f,t) <= (f',t')` iff `f' ⊆ f` and
/// `t` extends `t'`.
pub fn pair_forcing(k: usize, values: usize, tree: &[Vec<usize>]) -> Result<FinitePoset> {
    let tree = validate_tree(tree)?;
    let arity = tree.iter().flatten().max().map_or(1, |m| m + 1);
    let mut elems: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut count = 0usize;
    for t in tree.iter().filter(|t| t.len() <= k) {
        count = count.saturating_add(values.saturating_pow(t.len() as u32));
    }
    check_size(count)?;
    for (ti, t) in tree.iter().enumerate().filter(|(_, t)| t.len() <= k) {
        let mut fs: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..t.len() {
            fs = fs
                .into_iter()
                .flat_map(|f| {
                    (0..values).map(move |v| {
                        let mut g = f.clone();
                        g.push(v);
                        g
                    })
                })
                .collect();
        }
        for f in fs {
            elems.push((f, ti));
        }
    }
    let ids = elems
        .iter()
        .map(|(f, ti)| {
            let f: Vec<Option<usize>> = f.iter().map(|&v| Some(v)).collect();
            format!("({};{})", fn_id(&f), seq_id(&tree[*ti], arity))
        })
        .collect();
    FinitePoset::from_le(ids, elems.len(), |a, b| {
        let (fa, ta) = &elems[a];
        let (fb, tb) = &elems[b];
        extends(fa, fb) && extends(&tree[*ta], &tree[*tb])
    })
}

/// `{⟨q,c⟩ : q ∈ Q, c ∈ C ∖ {1_C}}` with the coordinatewise order, under a fresh maximum.
pub fn product_drop_top(q: &FinitePoset, c: &FinitePoset) -> Result<FinitePoset> {
    let cs: Vec<usize> = c.elements().filter(|&x| x != c.top()).collect();
    if cs.is_empty() {
        return Err(Error::EmptyFactor);
    }
    let n = 1 + q.len() * cs.len();
    check_size(n)?;
    let mut pairs = vec![None];
    let mut ids = vec!["1".to_string()];
    for a in q.elements() {
        for &b in &cs {
            pairs.push(Some((a, b)));
            ids.push(format!("({},{})", q.id(a), c.id(b)));
        }
    }
    FinitePoset::from_le(ids, n, |x, y| match (pairs[x], pairs[y]) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some((qa, ca)), Some((qb, cb))) => q.le(qa, qb) && c.le(ca, cb),
    })
}

/// A cell `(site, column, row)` of a Cohen-style condition.
pub type Cell = (usize, usize, usize);

/// Finite partial function from cells to `{0, 1}`, kept sorted by cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AddCondition {
    cells: Vec<(Cell, bool)>,
}

impl AddCondition {
    pub fn new(mut cells: Vec<(Cell, bool)>) -> Option<Self> {
        cells.sort();
        cells.dedup();
        if cells.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(AddCondition { cells })
    }

    pub fn empty() -> Self {
        AddCondition { cells: Vec::new() }
    }

    pub fn cells(&self) -> &[(Cell, bool)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, cell: Cell) -> Option<bool> {
        self.cells
            .binary_search_by(|(c, _)| c.cmp(&cell))
            .ok()
            .map(|i| self.cells[i].1)
    }

    /// `self ⊇ other`.
    pub fn extends(&self, other: &AddCondition) -> bool {
        other.cells.iter().all(|&(c, v)| self.get(c) == Some(v))
    }

    pub fn union_is_function(&self, other: &AddCondition) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.cells.len() && j < other.cells.len() {
            let (a, b) = (self.cells[i], other.cells[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a.1 != b.1 {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        true
    }

    pub fn union(&self, other: &AddCondition) -> Option<AddCondition> {
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        AddCondition::new(cells)
    }

    /// Columns `(site, column)` touched by the condition.
    pub fn columns(&self) -> Vec<(usize, usize)> {
        let mut c: Vec<(usize, usize)> = self.cells.iter().map(|&((m, a, _), _)| (m, a)).collect();
        c.dedup();
        c
    }

    /// Moves every cell `(m, α, β)` to `(m', α', β)` where `(m', α') = f(m, α)`.
    pub fn map_columns(&self, f: impl Fn(usize, usize) -> (usize, usize)) -> AddCondition {
        let mut cells: Vec<(Cell, bool)> = self
            .cells
            .iter()
            .map(|&((m, a, b), v)| {
                let (m2, a2) = f(m, a);
                ((m2, a2, b), v)
            })
            .collect();
        cells.sort();
        AddCondition { cells }
    }

    pub fn id(&self) -> String {
        let body: Vec<String> = self
            .cells
            .iter()
            .map(|&((m, a, b), v)| format!("{m}.{a}.{b}:{}", v as u8))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Number of conditions of `add_poset(sites, lambda, bound)`.
pub fn add_condition_count(sites: usize, lambda: usize, bound: usize) -> usize {
    let cells = sites * lambda * lambda;
    (0..=bound.min(cells))
        .map(|i| binom(cells, i).saturating_mul(1usize << i.min(63)))
        .fold(0usize, |a, b| a.saturating_add(b))
}

/// All partial functions `sites × lambda × lambda ⇀ 2` with at most `bound`
/// cells, by size, then cell set, then values.
pub fn add_conditions(sites: usize, lambda: usize, bound: usize) -> Vec<AddCondition> {
    let cells: Vec<Cell> = (0..sites)
        .flat_map(|m| (0..lambda).flat_map(move |a| (0..lambda).map(move |b| (m, a, b))))
        .collect();
    let mut out = Vec::new();
    for size in 0..=bound.min(cells.len()) {
        for combo in combinations(cells.len(), size) {
            for bits in 0..(1u64 << size) {
                let c = combo
                    .iter()
                    .enumerate()
                    .map(|(j, &ci)| (cells[ci], bits >> (size - 1 - j) & 1 == 1))
                    .collect();
                out.push(AddCondition { cells: c });
            }
        }
    }
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Conditions `p : sites × lambda × lambda ⇀ 2` with `|p| <= bound`, ordered by `⊇`.
pub fn add_poset(sites: usize, lambda: usize, bound: usize) -> Result<FinitePoset> {
    check_size(add_condition_count(sites, lambda, bound))?;
    let conds = add_conditions(sites, lambda, bound);
    let ids = conds.iter().map(|c| c.id()).collect();
    FinitePoset::from_le(ids, conds.len(), |a, b| conds[a].extends(&conds[b]))
}

/// Tree iteration with its projections.
#[derive(Debug, Clone)]
pub struct TreeIteration {
    pub poset: FinitePoset,
    /// `X^{<k}` as a poset; `stem` indexes into it.
    pub tree: FinitePoset,
    pub sequences: Vec<Vec<usize>>,
    stem: Vec<usize>,
    coords: Vec<Vec<usize>>,
}

impl TreeIteration {
    /// `π1`: the tree coordinate of an element, as an index into `tree`.
    pub fn project_stem(&self, e: usize) -> usize {
        self.stem[e]
    }

    /// `π_{i,x}`: coordinate `i` of `e`, defined when the stem has `t(i) = x`.
    pub fn project_slot(&self, e: usize, i: usize, x: usize) -> Option<usize> {
        let t = &self.sequences[self.stem[e]];
        (t.get(i) == Some(&x)).then(|| self.coords[e][i])
    }

    /// Elements whose stem is the tree element `t`.
    pub fn fiber(&self, t: usize) -> Vec<usize> {
        self.poset.elements().filter(|&e| self.stem[e] == t).collect()
    }

    pub fn coordinates(&self, e: usize) -> &[usize] {
        &self.coords[e]
    }
}

/// Pairs `(t, b⃗)` with `t ∈ X^{<k}` and `b_i` in the slot poset for `(i, t(i))`.
pub fn tree_iteration_with<'a>(
    arity: usize,
    height: usize,
    slot: impl Fn(usize, usize) -> &'a FinitePoset,
) -> Result<TreeIteration> {
    assert!(height >= 1, "tree height must be at least 1");
    let sequences = sequences(arity, height);
    let tree = tree_poset(arity, height)?;
    let mut size = 0usize;
    for t in &sequences {
        let mut s = 1usize;
        for (i, &x) in t.iter().enumerate() {
            s = s.saturating_mul(slot(i, x).len());
        }
        size = size.saturating_add(s);
    }
    check_size(size)?;
    let mut stem = Vec::with_capacity(size);
    let mut coords: Vec<Vec<usize>> = Vec::with_capacity(size);
    for (ti, t) in sequences.iter().enumerate() {
        let mut vs: Vec<Vec<usize>> = vec![Vec::new()];
        for (i, &x) in t.iter().enumerate() {
            let b = slot(i, x);
            vs = vs
                .into_iter()
                .flat_map(|v| {
                    b.elements().map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        for v in vs {
            stem.push(ti);
            coords.push(v);
        }
    }
    let ids = (0..size)
        .map(|e| {
            let t = &sequences[stem[e]];
            let bs: Vec<&str> = coords[e]
                .iter()
                .enumerate()
                .map(|(i, &b)| slot(i, t[i]).id(b))
                .collect();
            format!("({};{})", seq_id(t, arity), bs.join(","))
        })
        .collect();
    let poset = FinitePoset::from_le(ids, size, |a, b| {
        let (ta, tb) = (&sequences[stem[a]], &sequences[stem[b]]);
        extends(ta, tb)
            && (0..tb.len()).all(|i| slot(i, ta[i]).le(coords[a][i], coords[b][i]))
    })?;
    Ok(TreeIteration {
        poset,
        tree,
        sequences,
        stem,
        coords,
    })
}

/// Tree iteration with the same slot poset `b` everywhere.
pub fn tree_iteration(arity: usize, height: usize, b: &FinitePoset) -> Result<TreeIteration> {
    tree_iteration_with(arity, height, |_, _| b)
}
