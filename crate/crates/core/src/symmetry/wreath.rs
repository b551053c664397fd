use crate::error::{Error, Result};

use super::group::{Perm, PermGroup};

/// `G ≀ H` acting on `X × Y`; the point `(x, y)` has index `x·|Y| + y`.
#[derive(Debug, Clone)]
pub struct Wreath {
    x: usize,
    y: usize,
    group: PermGroup,
}

/// Section-preserving permutations `π(x, y) = (π*(x), π_x(y))` with
/// `π* ∈ G` and every `π_x ∈ H`.
pub fn wreath(g: &PermGroup, h: &PermGroup) -> Result<Wreath> {
    let (x, y) = (g.degree(), h.degree());
    if x == 0 || y == 0 {
        return Err(Error::InvalidStructure("wreath product of an empty carrier".into()));
    }
    let mut gens = Vec::new();
    for s in g.generators() {
        let sections = vec![Perm::identity(y); x];
        gens.push(compose_parts(x, y, s, &sections));
    }
    for t in h.generators() {
        for section in 0..x {
            let mut sections = vec![Perm::identity(y); x];
            sections[section] = t.clone();
            gens.push(compose_parts(x, y, &Perm::identity(x), &sections));
        }
    }
    Ok(Wreath {
        x,
        y,
        group: PermGroup::generate(x * y, gens)?,
    })
}

fn compose_parts(x: usize, y: usize, base: &Perm, sections: &[Perm]) -> Perm {
    let images = (0..x * y)
        .map(|i| {
            let (a, b) = (i / y, i % y);
            base.apply(a) * y + sections[a].apply(b)
        })
        .collect();
    Perm::new(images).expect("section-preserving map is a bijection")
}

/// Splits a permutation of `X × Y` into `(π*, (π_x)_x)` if it preserves sections.
pub fn decompose(x: usize, y: usize, pi: &Perm) -> Option<(Perm, Vec<Perm>)> {
    if pi.degree() != x * y || y == 0 {
        return None;
    }
    let mut base = Vec::with_capacity(x);
    let mut sections = Vec::with_capacity(x);
    for a in 0..x {
        let target = pi.apply(a * y) / y;
        let mut sec = Vec::with_capacity(y);
        for b in 0..y {
            let img = pi.apply(a * y + b);
            if img / y != target {
                return None;
            }
            sec.push(img % y);
        }
        base.push(target);
        sections.push(Perm::new(sec).ok()?);
    }
    Some((Perm::new(base).ok()?, sections))
}

impl Wreath {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn base_size(&self) -> usize {
        self.x
    }

    pub fn fiber_size(&self) -> usize {
        self.y
    }

    pub fn point(&self, x: usize, y: usize) -> usize {
        x * self.y + y
    }

    pub fn coords(&self, i: usize) -> (usize, usize) {
        (i / self.y, i % self.y)
    }

    /// `π*`.
    pub fn base_part(&self, pi: &Perm) -> Perm {
        decompose(self.x, self.y, pi).expect("element of the wreath product").0
    }

    /// `π_x`.
    pub fn section(&self, pi: &Perm, x: usize) -> Perm {
        let sec = (0..self.y).map(|b| pi.apply(x * self.y + b) % self.y).collect();
        Perm::new(sec).expect("element of the wreath product")
    }

    /// Inverse of the decomposition; the result must lie in the group.
    pub fn reconstruct(&self, base: &Perm, sections: &[Perm]) -> Result<Perm> {
        if base.degree() != self.x || sections.len() != self.x || sections.iter().any(|s| s.degree() != self.y) {
            return Err(Error::InvalidPermutation("parts do not match the carrier".into()));
        }
        let pi = compose_parts(self.x, self.y, base, sections);
        if !self.group.contains(&pi) {
            return Err(Error::NotASubgroup);
        }
        Ok(pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s2_wr_s2() {
        let s2 = PermGroup::symmetric(2).unwrap();
        let w = wreath(&s2, &s2).unwrap();
        assert_eq!(w.group().order(), 8);
        for pi in w.group().elements() {
            let base = w.base_part(pi);
            let secs: Vec<Perm> = (0..2).map(|x| w.section(pi, x)).collect();
            assert_eq!(&w.reconstruct(&base, &secs).unwrap(), pi);
        }
    }

    #[test]
    fn trivial_wreath() {
        let w = wreath(&PermGroup::trivial(2), &PermGroup::trivial(3)).unwrap();
        assert!(w.group().is_trivial());
    }

    #[test]
    fn fibers_act_independently() {
        let w = wreath(&PermGroup::trivial(3), &PermGroup::symmetric(2).unwrap()).unwrap();
        assert_eq!(w.group().order(), 8);
        assert!(w.group().elements().iter().all(|p| w.base_part(p).is_identity()));
    }

    #[test]
    fn decompose_rejects_mixing_sections() {
        let p = Perm::new(vec![0, 2, 1, 3]).unwrap();
        assert!(decompose(2, 2, &p).is_none());
    }
}
