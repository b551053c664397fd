use serde::Serialize;

use crate::poset::FinitePoset;

use super::hfset::HfSet;
use super::pname::{generic_filters, PName};

/// `D_u` and `E_u` for a function name at one input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    /// Conditions forcing `ḟ(ǔ) = w̌` for some `w` in the codomain.
    pub decided: Vec<usize>,
    /// Values some condition forces.
    pub values: Vec<HfSet>,
}

/// `ḟ(ǔ) = w̌` is read as `(ǔ, w̌) ∈ ḟ`, forced semantically.
pub fn bukovsky_spectrum(poset: &FinitePoset, f: &PName, u: &HfSet, codomain: &[HfSet]) -> Spectrum {
    let filters = generic_filters(poset);
    let graphs: Vec<HfSet> = filters.iter().map(|g| f.evaluate(g)).collect();
    let pairs: Vec<HfSet> = codomain.iter().map(|w| HfSet::kuratowski(u.clone(), w.clone())).collect();
    let mut decided = Vec::new();
    let mut values: Vec<HfSet> = Vec::new();
    for p in poset.elements() {
        let mut any = false;
        for (w, pair) in codomain.iter().zip(&pairs) {
            let forced = filters
                .iter()
                .zip(&graphs)
                .filter(|(g, _)| g.contains(p))
                .all(|(_, graph)| graph.contains(pair));
            if forced {
                any = true;
                if !values.contains(w) {
                    values.push(w.clone());
                }
            }
        }
        if any {
            decided.push(p);
        }
    }
    values.sort();
    Spectrum { decided, values }
}

/// Whether every generic evaluates `ḟ` to the graph of a total function
/// from `domain` into `codomain`.
pub fn forces_total_function(poset: &FinitePoset, f: &PName, domain: &[HfSet], codomain: &[HfSet]) -> bool {
    generic_filters(poset).iter().all(|g| {
        let graph = f.evaluate(g);
        let mut seen = vec![0usize; domain.len()];
        for m in graph.members() {
            let Some((a, b)) = m.as_kuratowski() else { return false };
            let Some(i) = domain.iter().position(|d| *d == a) else { return false };
            if !codomain.contains(&b) {
                return false;
            }
            seen[i] += 1;
        }
        seen.iter().all(|&c| c == 1)
    })
}
