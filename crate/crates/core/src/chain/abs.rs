use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::limits::check_exhaustive;
use crate::poset::FinitePoset;

use super::masks::{lex_cmp, ones, shortlex_cmp, subsets_shortlex, to_vec, Masks};
use super::{CCReport, CCVariant, Certificate, Scope};

/// Decides `variant(n)` for `p` by exhaustive quantification over subsets.
pub fn cc_abs(p: &FinitePoset, variant: CCVariant, n: usize) -> Result<CCReport> {
    if n == 0 {
        return Err(Error::InvalidThreshold);
    }
    check_exhaustive(p.len())?;
    let m = Masks::new(p)?;
    let (witness, certificate) = match variant {
        CCVariant::CC1 => largest(m.maximal_antichains(), n),
        CCVariant::CC2 => {
            let mut all = Vec::new();
            m.for_each_antichain(|a| all.push(a));
            largest(all, n)
        }
        CCVariant::CC3 => cc3(&m, n),
        CCVariant::CCE => cce(&m, n),
    };
    Ok(CCReport {
        variant,
        threshold: n,
        scope: Scope::Absolute,
        holds: witness.is_none(),
        witness: witness.map(to_vec),
        certificate,
    })
}

/// Lexicographically least set of largest size, reported if it exceeds `n`.
pub(super) fn largest(sets: Vec<u64>, n: usize) -> (Option<u64>, Certificate) {
    let examined = sets.len() as u64;
    let best = sets
        .into_iter()
        .min_by(|&a, &b| b.count_ones().cmp(&a.count_ones()).then_with(|| lex_cmp(a, b)));
    let extremal = best.map_or(0, |b| b.count_ones() as usize);
    let cert = Certificate {
        examined,
        extremal,
        refinement: None,
        refinement_examined: 0,
    };
    (best.filter(|b| b.count_ones() as usize > n), cert)
}

/// Larger first, then lexicographically least.
pub(super) fn cc3_witness_order(a: u64, b: u64) -> Ordering {
    b.count_ones().cmp(&a.count_ones()).then_with(|| lex_cmp(a, b))
}

fn cc3(m: &Masks, n: usize) -> (Option<u64>, Certificate) {
    let size = 1usize << m.n;
    // least size of a predense subset of each mask, u8::MAX if none
    let mut least = vec![u8::MAX; size];
    let mut examined = 0u64;
    let mut extremal = 0;
    let mut witness: Option<u64> = None;
    for mask in 0..size as u64 {
        let pred = m.predense(mask);
        let mut best = if pred { mask.count_ones() as u8 } else { u8::MAX };
        for x in ones(mask) {
            best = best.min(least[(mask & !(1 << x)) as usize]);
        }
        least[mask as usize] = best;
        if pred {
            examined += 1;
            extremal = extremal.max(best as usize);
            if best as usize > n && witness.is_none_or(|w| cc3_witness_order(mask, w) == Ordering::Less) {
                witness = Some(mask);
            }
        }
    }
    let mut cert = Certificate {
        examined,
        extremal,
        refinement: None,
        refinement_examined: 0,
    };
    if let Some(w) = witness {
        for s in subsets_shortlex(w) {
            cert.refinement_examined += 1;
            if m.predense(s) {
                cert.refinement = Some(to_vec(s));
                break;
            }
        }
    }
    (witness, cert)
}

fn cce(m: &Masks, n: usize) -> (Option<u64>, Certificate) {
    let maximal = m.maximal_antichains();
    // least maximal extension of every antichain
    let mut least: HashMap<u64, u64> = HashMap::new();
    for &mx in &maximal {
        let mut sub = mx;
        loop {
            least
                .entry(sub)
                .and_modify(|e| {
                    if shortlex_cmp(mx, *e) == Ordering::Less {
                        *e = mx;
                    }
                })
                .or_insert(mx);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mx;
        }
    }
    let mut examined = 0u64;
    let mut extremal = 0;
    let mut witness: Option<u64> = None;
    m.for_each_antichain(|a| {
        examined += 1;
        let ext = least[&a];
        extremal = extremal.max(ext.count_ones() as usize);
        if ext.count_ones() as usize > n && witness.is_none_or(|w| shortlex_cmp(a, w) == Ordering::Less) {
            witness = Some(a);
        }
    });
    let cert = Certificate {
        examined,
        extremal,
        refinement: witness.map(|w| to_vec(least[&w])),
        refinement_examined: 0,
    };
    (witness, cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flat_poset, tree_poset};

    #[test]
    fn a3_cc2() {
        let a3 = flat_poset("1", &["a", "b", "c"]).unwrap();
        assert!(cc_abs(&a3, CCVariant::CC2, 3).unwrap().holds);
        let r = cc_abs(&a3, CCVariant::CC2, 2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![1, 2, 3]));
    }

    #[test]
    fn singleton_holds_everywhere() {
        let one = FinitePoset::singleton("1");
        for v in CCVariant::ALL {
            assert!(cc_abs(&one, v, 1).unwrap().holds);
        }
    }

    #[test]
    fn c3_cc2() {
        let c3 = tree_poset(2, 3).unwrap();
        assert!(cc_abs(&c3, CCVariant::CC2, 4).unwrap().holds);
        let r = cc_abs(&c3, CCVariant::CC2, 3).unwrap();
        assert_eq!(r.witness, Some(vec![3, 4, 5, 6]));
    }

    #[test]
    fn c3_other_variants() {
        let c3 = tree_poset(2, 3).unwrap();
        let r = cc_abs(&c3, CCVariant::CC3, 3).unwrap();
        assert_eq!(r.witness, Some(vec![3, 4, 5, 6]));
        assert_eq!(r.certificate.refinement, Some(vec![3, 4, 5, 6]));
        let r = cc_abs(&c3, CCVariant::CC1, 2).unwrap();
        assert_eq!(r.witness, Some(vec![3, 4, 5, 6]));
        // {<00>} extends to {<00>,<01>,<1>} at best
        let r = cc_abs(&c3, CCVariant::CCE, 2).unwrap();
        assert_eq!(r.witness, Some(vec![3]));
        assert_eq!(r.certificate.refinement, Some(vec![2, 3, 4]));
        assert!(cc_abs(&c3, CCVariant::CCE, 4).unwrap().holds);
    }

    #[test]
    fn zero_threshold_rejected() {
        let one = FinitePoset::singleton("1");
        assert_eq!(cc_abs(&one, CCVariant::CC1, 0), Err(Error::InvalidThreshold));
    }
}
