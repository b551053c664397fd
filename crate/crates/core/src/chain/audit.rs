use serde::Serialize;

use crate::error::Result;
use crate::poset::FinitePoset;
use crate::symmetry::SymmetryStructure;

use super::{cc_abs, cc_rel, CCVariant, Scope};

/// Truth values of the four variants at one threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub scope: Scope,
    pub n: usize,
    pub cc1: bool,
    pub cc2: bool,
    pub cc3: bool,
    pub cce: bool,
}

impl AuditRow {
    pub fn get(&self, v: CCVariant) -> bool {
        match v {
            CCVariant::CC1 => self.cc1,
            CCVariant::CC2 => self.cc2,
            CCVariant::CC3 => self.cc3,
            CCVariant::CCE => self.cce,
        }
    }
}

/// `from(n) ⇒ to(n)` checked at every audited threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub scope: Scope,
    pub from: CCVariant,
    pub to: CCVariant,
    /// Whether the direction holds for every finite poset (and structure).
    pub provable: bool,
    pub holds: bool,
    /// Thresholds where `from` holds and `to` fails.
    pub violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub size: usize,
    pub rows: Vec<AuditRow>,
    pub implications: Vec<Implication>,
    /// Failures among the provable directions; zero unless something is wrong.
    pub provable_violations: usize,
}

impl AuditReport {
    pub fn implication(&self, scope: Scope, from: CCVariant, to: CCVariant) -> Option<&Implication> {
        self.implications
            .iter()
            .find(|i| i.scope == scope && i.from == from && i.to == to)
    }
}

fn provable(scope: Scope, include_trivial: bool, from: CCVariant, to: CCVariant) -> bool {
    use CCVariant::*;
    match scope {
        // every pair collapses on finite posets
        Scope::Absolute => true,
        Scope::Relative => match (from, to) {
            (CC2, CC1) | (CCE, CC1) => true,
            (CC3, CC2) | (CC3, CC1) => include_trivial,
            _ => false,
        },
    }
}

fn implications(rows: &[AuditRow], scope: Scope, include_trivial: bool) -> Vec<Implication> {
    let mut out = Vec::new();
    for from in CCVariant::ALL {
        for to in CCVariant::ALL {
            if from == to {
                continue;
            }
            let violations: Vec<usize> = rows
                .iter()
                .filter(|r| r.get(from) && !r.get(to))
                .map(|r| r.n)
                .collect();
            out.push(Implication {
                scope,
                from,
                to,
                provable: provable(scope, include_trivial, from, to),
                holds: violations.is_empty(),
                violations,
            });
        }
    }
    out
}

/// Evaluates every variant for `n = 1..=|P|`, absolutely and, when a
/// structure is given, relative to it, and checks all twelve directions.
pub fn implication_audit(p: &FinitePoset, structure: Option<(&SymmetryStructure, bool)>) -> Result<AuditReport> {
    let mut rows = Vec::new();
    for n in 1..=p.len() {
        let v = |variant| cc_abs(p, variant, n).map(|r| r.holds);
        rows.push(AuditRow {
            scope: Scope::Absolute,
            n,
            cc1: v(CCVariant::CC1)?,
            cc2: v(CCVariant::CC2)?,
            cc3: v(CCVariant::CC3)?,
            cce: v(CCVariant::CCE)?,
        });
    }
    let mut imps = implications(&rows, Scope::Absolute, true);
    if let Some((s, include_trivial)) = structure {
        let mut rel = Vec::new();
        for n in 1..=s.poset().len() {
            let v = |variant| cc_rel(s, variant, n, include_trivial).map(|r| r.holds);
            rel.push(AuditRow {
                scope: Scope::Relative,
                n,
                cc1: v(CCVariant::CC1)?,
                cc2: v(CCVariant::CC2)?,
                cc3: v(CCVariant::CC3)?,
                cce: v(CCVariant::CCE)?,
            });
        }
        imps.extend(implications(&rel, Scope::Relative, include_trivial));
        rows.extend(rel);
    }
    let provable_violations = imps.iter().filter(|i| i.provable && !i.holds).count();
    Ok(AuditReport {
        size: p.len(),
        rows,
        implications: imps,
        provable_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flat_poset, lottery, tree_poset};
    use crate::symmetry::{automorphism_group, SupportIdeal};

    #[test]
    fn a3_lattice() {
        let a3 = flat_poset("1", &["a", "b", "c"]).unwrap();
        let r = implication_audit(&a3, None).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert_eq!(r.implications.len(), 12);
        assert!(r.implications.iter().all(|i| i.holds));
        assert_eq!(r.provable_violations, 0);
        // holds exactly from n = 3 on
        assert!(r.rows.iter().all(|row| row.cc2 == (row.n >= 3)));
    }

    #[test]
    fn singleton_and_c3() {
        let r = implication_audit(&FinitePoset::singleton("1"), None).unwrap();
        assert!(r.rows[0].cc1 && r.rows[0].cc2 && r.rows[0].cc3 && r.rows[0].cce);
        let r = implication_audit(&tree_poset(2, 3).unwrap(), None).unwrap();
        assert_eq!(r.provable_violations, 0);
        assert!(r.implications.iter().all(|i| i.holds));
    }

    #[test]
    fn relative_rows_are_added() {
        let v = flat_poset("q", &["c", "d"]).unwrap();
        let l = lottery(&[v.clone(), v.clone()], false).unwrap();
        let g = automorphism_group(&v).unwrap();
        let s = SymmetryStructure::lottery(&l, &[g.clone(), g], SupportIdeal::bounded(2, 1)).unwrap();
        let r = implication_audit(&l.poset, Some((&s, true))).unwrap();
        assert_eq!(r.rows.len(), 2 * l.poset.len());
        assert_eq!(r.implications.len(), 24);
        assert_eq!(r.provable_violations, 0);
    }
}
