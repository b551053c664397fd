use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::check_exhaustive;
use crate::poset::FinitePoset;

use super::corpus::Corpus;
use super::masks::{shortlex_cmp, to_mask, to_vec, Masks};
use super::refine::{extend_to_maximal, rank_minimal_members, shrink_predense, tree_refinement};
use super::{cc_abs, CCVariant};

/// What a predicate found on one poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Found {
    /// The offending subset, when the predicate is about one.
    pub subset: Option<Vec<usize>>,
    pub threshold: Option<usize>,
    /// A derived subset (rank-minimal members, a refinement, ...).
    pub image: Option<Vec<usize>>,
    pub note: String,
}

/// A property of finite posets whose instances are counterexamples.
pub trait Predicate: Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// The least instance in `p` (shortlex subset, then threshold), if any.
    fn find(&self, p: &FinitePoset) -> Result<Option<Found>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    RankMinimalNotPredense,
    RankMinimalDenseNotPredense,
    Cc1NotCc2,
    ImplicationViolation,
    CollapseViolation,
    NoMaximalAntichain,
    TreeRefinementInvalid,
    Never,
}

const KINDS: [(Kind, &str, &str); 8] = [
    (
        Kind::RankMinimalNotPredense,
        "rank-minimal-not-predense",
        "a predense set whose members of least corank are not predense",
    ),
    (
        Kind::RankMinimalDenseNotPredense,
        "rank-minimal-dense-not-predense",
        "a dense set whose members of least corank are not predense",
    ),
    (Kind::Cc1NotCc2, "cc1-not-cc2", "a threshold n with CC1(n) and not CC2(n)"),
    (
        Kind::ImplicationViolation,
        "cc-implication-violation",
        "a threshold n with CC3(n) and not CC2(n), or CC2(n) and not CC1(n)",
    ),
    (
        Kind::CollapseViolation,
        "collapse-violation",
        "a threshold where the four variants disagree, or a refinement construction that does not verify",
    ),
    (Kind::NoMaximalAntichain, "no-maximal-antichain", "a poset without a maximal antichain"),
    (
        Kind::TreeRefinementInvalid,
        "tree-refinement-invalid",
        "a forcing tree and predense set whose maximal members are not a maximal antichain",
    ),
    (Kind::Never, "never", "false everywhere"),
];

/// Names accepted by [`named_predicate`].
pub const PREDICATES: [&str; 8] = [
    KINDS[0].1, KINDS[1].1, KINDS[2].1, KINDS[3].1, KINDS[4].1, KINDS[5].1, KINDS[6].1, KINDS[7].1,
];

struct Named(usize);

pub fn named_predicate(name: &str) -> Option<Box<dyn Predicate>> {
    KINDS
        .iter()
        .position(|k| k.1 == name)
        .map(|i| Box::new(Named(i)) as Box<dyn Predicate>)
}

/// Subsets of `p` in shortlex order.
fn shortlex_masks(p: &FinitePoset) -> Result<Vec<u64>> {
    check_exhaustive(p.len())?;
    let mut all: Vec<u64> = (0..1u64 << p.len()).collect();
    all.sort_by(|&a, &b| shortlex_cmp(a, b));
    Ok(all)
}

fn found(subset: Option<Vec<usize>>, threshold: Option<usize>, image: Option<Vec<usize>>, note: String) -> Found {
    Found {
        subset,
        threshold,
        image,
        note,
    }
}

fn rank_minimal(p: &FinitePoset, dense: bool) -> Result<Option<Found>> {
    let m = Masks::new(p)?;
    for d in shortlex_masks(p)? {
        let ok = if dense {
            p.elements().all(|x| p.down_set(x).ones().any(|y| d >> y & 1 == 1))
        } else {
            m.predense(d)
        };
        if !ok {
            continue;
        }
        let r = rank_minimal_members(p, &to_vec(d))?;
        if !m.predense(to_mask(r.iter().copied())) {
            let incompatible = p
                .elements()
                .find(|&x| r.iter().all(|&y| !p.compat(x, y)))
                .expect("not predense");
            let note = format!("element {} is incompatible with every rank-minimal member", p.id(incompatible));
            return Ok(Some(found(Some(to_vec(d)), None, Some(r), note)));
        }
    }
    Ok(None)
}

fn thresholds(p: &FinitePoset, test: impl Fn([bool; 4]) -> Option<String>) -> Result<Option<Found>> {
    for n in 1..=p.len() {
        let mut v = [false; 4];
        for (i, variant) in CCVariant::ALL.into_iter().enumerate() {
            v[i] = cc_abs(p, variant, n)?.holds;
        }
        if let Some(note) = test(v) {
            return Ok(Some(found(None, Some(n), None, note)));
        }
    }
    Ok(None)
}

fn collapse(p: &FinitePoset) -> Result<Option<Found>> {
    if let Some(f) = thresholds(p, |v| {
        (v.iter().any(|&b| b) && !v.iter().all(|&b| b)).then(|| {
            format!("cc1={} cc2={} cc3={} cce={}", v[0], v[1], v[2], v[3])
        })
    })? {
        return Ok(Some(f));
    }
    let m = Masks::new(p)?;
    for d in shortlex_masks(p)? {
        let dv = to_vec(d);
        if m.predense(d) {
            let s = shrink_predense(p, &dv)?;
            let mask = to_mask(s.refinement.iter().copied());
            if !m.predense(mask) || mask & !d != 0 || s.refinement.len() > s.antichain.len() || !p.is_maximal_antichain(&s.antichain) {
                return Ok(Some(found(Some(dv), None, Some(s.refinement), "shrink_predense did not verify".into())));
            }
        }
        if m.antichain(d) {
            let e = extend_to_maximal(p, &dv)?;
            if !p.is_maximal_antichain(&e) || d & !to_mask(e.iter().copied()) != 0 {
                return Ok(Some(found(Some(dv), None, Some(e), "extend_to_maximal did not verify".into())));
            }
        }
    }
    Ok(None)
}

fn tree_invalid(p: &FinitePoset) -> Result<Option<Found>> {
    if !p.is_forcing_tree() {
        return Ok(None);
    }
    let m = Masks::new(p)?;
    for d in shortlex_masks(p)? {
        if !m.predense(d) {
            continue;
        }
        match tree_refinement(p, &to_vec(d)) {
            Ok(_) => {}
            Err(Error::RefinementInvalid { witness }) => {
                return Ok(Some(found(Some(to_vec(d)), None, Some(witness), "maximal members do not verify".into())))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

impl Predicate for Named {
    fn name(&self) -> &'static str {
        KINDS[self.0].1
    }

    fn description(&self) -> &'static str {
        KINDS[self.0].2
    }

    fn find(&self, p: &FinitePoset) -> Result<Option<Found>> {
        match KINDS[self.0].0 {
            Kind::RankMinimalNotPredense => rank_minimal(p, false),
            Kind::RankMinimalDenseNotPredense => rank_minimal(p, true),
            Kind::Cc1NotCc2 => thresholds(p, |v| (v[0] && !v[1]).then(|| "CC1 holds, CC2 fails".to_string())),
            Kind::ImplicationViolation => thresholds(p, |v| {
                if v[2] && !v[1] {
                    Some("CC3 holds, CC2 fails".into())
                } else if v[1] && !v[0] {
                    Some("CC2 holds, CC1 fails".into())
                } else {
                    None
                }
            }),
            Kind::CollapseViolation => collapse(p),
            Kind::NoMaximalAntichain => {
                let m = Masks::new(p)?;
                Ok(m.maximal_antichains()
                    .is_empty()
                    .then(|| found(None, None, None, "no maximal antichain".into())))
            }
            Kind::TreeRefinementInvalid => tree_invalid(p),
            Kind::Never => Ok(None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchWitness {
    /// Position in the corpus.
    pub index: usize,
    pub poset: FinitePoset,
    pub found: Found,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub predicate: &'static str,
    pub corpus: String,
    /// Posets checked. When `exhausted` this is the whole corpus.
    pub examined: usize,
    /// Witnesses in corpus order, at most the requested number.
    pub witnesses: Vec<SearchWitness>,
    /// True when no witness exists in the corpus.
    pub exhausted: bool,
}

/// Runs `predicate` over `corpus` in parallel, keeping the first
/// `max_witnesses` witnesses in corpus order.
pub fn counterexample_search(predicate: &dyn Predicate, corpus: &Corpus, max_witnesses: usize) -> Result<SearchReport> {
    let posets = corpus.posets()?;
    let results: Vec<Result<Option<Found>>> = posets.par_iter().map(|p| predicate.find(p)).collect();
    let mut witnesses = Vec::new();
    let mut examined = 0;
    for (index, r) in results.into_iter().enumerate() {
        examined = index + 1;
        if let Some(found) = r? {
            witnesses.push(SearchWitness {
                index,
                poset: posets[index].clone(),
                found,
            });
            if witnesses.len() >= max_witnesses.max(1) {
                break;
            }
        }
    }
    Ok(SearchReport {
        predicate: predicate.name(),
        corpus: corpus.describe(),
        examined,
        exhausted: witnesses.is_empty(),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tree_poset;

    #[test]
    fn rank_minimal_witness_is_c3() {
        let pred = named_predicate("rank-minimal-not-predense").unwrap();
        let r = counterexample_search(pred.as_ref(), &Corpus::BinaryTrees { max_height: 3 }, 1).unwrap();
        assert!(!r.exhausted);
        let w = &r.witnesses[0];
        let c3 = tree_poset(2, 3).unwrap();
        assert_eq!(w.poset, c3);
        assert_eq!(w.found.subset, Some(c3.subset_of_ids(&["<0>", "<10>", "<11>"]).unwrap()));
        assert_eq!(w.found.image, Some(c3.subset_of_ids(&["<0>"]).unwrap()));
    }

    #[test]
    fn finite_collapse_exhausts() {
        for name in ["cc1-not-cc2", "cc-implication-violation", "collapse-violation"] {
            let pred = named_predicate(name).unwrap();
            let r = counterexample_search(pred.as_ref(), &Corpus::Exhaustive { max_size: 5 }, 1).unwrap();
            assert!(r.exhausted, "{name}");
            assert_eq!(r.examined, 1 + 1 + 2 + 5 + 16);
        }
    }

    #[test]
    fn never_exhausts_on_singleton() {
        let pred = named_predicate("never").unwrap();
        let r = counterexample_search(pred.as_ref(), &Corpus::Explicit(vec![FinitePoset::singleton("1")]), 1).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.examined, 1);
    }

    #[test]
    fn vacuous_predicates_exhaust() {
        for name in ["no-maximal-antichain", "tree-refinement-invalid"] {
            let pred = named_predicate(name).unwrap();
            assert!(counterexample_search(pred.as_ref(), &Corpus::Exhaustive { max_size: 5 }, 1).unwrap().exhausted);
        }
        assert!(named_predicate("bogus").is_none());
        assert_eq!(PREDICATES.len(), 8);
    }
}
