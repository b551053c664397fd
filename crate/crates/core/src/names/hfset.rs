use std::fmt;

use serde::{Serialize, Serializer};

/// A hereditarily finite set in canonical form: members sorted, no repeats.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HfSet(Vec<HfSet>);

impl HfSet {
    pub fn new(mut members: Vec<HfSet>) -> Self {
        members.sort();
        members.dedup();
        HfSet(members)
    }

    pub fn empty() -> Self {
        HfSet(Vec::new())
    }

    pub fn members(&self) -> &[HfSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    /// Von Neumann ordinal `n = {0, ..., n-1}`.
    pub fn ordinal(n: usize) -> Self {
        let mut members = Vec::with_capacity(n);
        for _ in 0..n {
            let next = HfSet::new(members.clone());
            members.push(next);
        }
        HfSet::new(members)
    }

    /// `n` if this set is a von Neumann ordinal.
    pub fn as_ordinal(&self) -> Option<usize> {
        let n = self.0.len();
        (*self == HfSet::ordinal(n)).then_some(n)
    }

    /// `{a, b}`.
    pub fn pair(a: HfSet, b: HfSet) -> Self {
        HfSet::new(vec![a, b])
    }

    /// Kuratowski pair `{{a}, {a, b}}`.
    pub fn kuratowski(a: HfSet, b: HfSet) -> Self {
        HfSet::pair(HfSet::new(vec![a.clone()]), HfSet::pair(a, b))
    }

    /// `(a, b)` if this set is a Kuratowski pair.
    pub fn as_kuratowski(&self) -> Option<(HfSet, HfSet)> {
        match self.0.as_slice() {
            [s] if s.len() == 1 => Some((s.0[0].clone(), s.0[0].clone())),
            [s, t] => {
                let (single, double) = if s.len() == 1 { (s, t) } else { (t, s) };
                if single.len() != 1 || double.len() != 2 || !double.contains(&single.0[0]) {
                    return None;
                }
                let a = single.0[0].clone();
                let b = double.0.iter().find(|m| **m != a)?.clone();
                Some((a, b))
            }
            _ => None,
        }
    }

    /// Set-theoretic rank: 0 for `∅`, else 1 + max rank of members.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|m| m.rank() + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_ordinal() {
            return write!(f, "{n}");
        }
        if let Some((a, b)) = self.as_kuratowski() {
            return write!(f, "({a},{b})");
        }
        write!(f, "{{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HfSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = HfSet::new(vec![HfSet::ordinal(1), HfSet::empty(), HfSet::ordinal(1)]);
        assert_eq!(a, HfSet::ordinal(2));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn kuratowski_roundtrip() {
        for (a, b) in [(0, 1), (1, 0), (2, 2), (0, 2)] {
            let p = HfSet::kuratowski(HfSet::ordinal(a), HfSet::ordinal(b));
            assert_eq!(p.as_kuratowski(), Some((HfSet::ordinal(a), HfSet::ordinal(b))));
        }
        assert_eq!(HfSet::kuratowski(HfSet::ordinal(0), HfSet::ordinal(1)).to_string(), "(0,1)");
    }

    #[test]
    fn display() {
        assert_eq!(HfSet::empty().to_string(), "0");
        assert_eq!(HfSet::new(vec![HfSet::ordinal(1)]).to_string(), "(0,0)");
        assert_eq!(HfSet::new(vec![HfSet::ordinal(2)]).to_string(), "{2}");
    }
}
