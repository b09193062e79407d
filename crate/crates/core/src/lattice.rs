//! Full subgroup lattices and the searches that need them.

use std::collections::{HashMap, VecDeque};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::{Caps, Group};
use crate::subgroup::{extend, generators, Restriction, Subgroup};

/// Every subgroup of a group, in canonical order: ascending order, then
/// lexicographic member list. All witness searches walk this order.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    gens: Vec<Vec<usize>>,
    index: HashMap<ElemSet, usize>,
}

impl SubgroupLattice {
    /// Breadth-first extension from the trivial subgroup: every subgroup
    /// `H` found is extended by one element from each right coset of `H`,
    /// deduplicating on the member bits.
    pub fn build(g: &Group, caps: &Caps) -> Result<SubgroupLattice> {
        if g.order() > caps.lattice_cap {
            return Err(Error::LatticeCapExceeded {
                order: g.order(),
                cap: caps.lattice_cap,
            });
        }
        let n = g.order();
        let triv = Subgroup::trivial(g);
        let mut found: HashMap<ElemSet, usize> = HashMap::from([(triv.members().clone(), 0)]);
        let mut subs = vec![(triv, Vec::new())];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (h, h_gens) = subs[i].clone();
            if h.order() == n {
                continue;
            }
            let h_elems = h.elements();
            let mut visited = h.members().clone();
            for x in 0..n {
                if visited.contains(x) {
                    continue;
                }
                for &e in &h_elems {
                    visited.insert(g.mul(e, x));
                }
                let j = extend(g, &h, &h_gens, x);
                if !found.contains_key(j.members()) {
                    if subs.len() >= caps.subgroup_count_cap {
                        return Err(Error::SubgroupCountCapExceeded {
                            cap: caps.subgroup_count_cap,
                        });
                    }
                    found.insert(j.members().clone(), subs.len());
                    let mut j_gens = h_gens.clone();
                    j_gens.push(x);
                    queue.push_back(subs.len());
                    subs.push((j, j_gens));
                }
            }
        }
        subs.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(SubgroupLattice::from_parts(subs))
    }

    fn from_parts(subs: Vec<(Subgroup, Vec<usize>)>) -> SubgroupLattice {
        let index = subs
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.members().clone(), i))
            .collect();
        let (subgroups, gens) = subs.into_iter().unzip();
        SubgroupLattice {
            subgroups,
            gens,
            index,
        }
    }

    /// Rebuilds a lattice from a stored list of subgroups (already closed).
    pub fn from_subgroups(g: &Group, mut subgroups: Vec<Subgroup>) -> SubgroupLattice {
        subgroups.sort();
        subgroups.dedup();
        let subs = subgroups
            .into_iter()
            .map(|s| {
                let gens = generators(g, &s);
                (s, gens)
            })
            .collect();
        SubgroupLattice::from_parts(subs)
    }

    /// Reassembles a stored lattice. Members must be in canonical order and
    /// generators must lie in their subgroup; closure is the caller's
    /// concern.
    pub fn from_stored(subgroups: Vec<Subgroup>, gens: Vec<Vec<usize>>) -> Result<SubgroupLattice> {
        if subgroups.len() != gens.len() || subgroups.is_empty() {
            return Err(Error::Malformed("lattice record is inconsistent".into()));
        }
        if subgroups.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed("lattice record is not in canonical order".into()));
        }
        for (s, gs) in subgroups.iter().zip(&gens) {
            if gs.iter().any(|&a| a >= s.members().capacity() || !s.contains(a)) {
                return Err(Error::Malformed("generator outside its subgroup".into()));
            }
        }
        Ok(SubgroupLattice::from_parts(subgroups.into_iter().zip(gens).collect()))
    }

    /// The lattice of the subgroup `k`, re-indexed into the standalone
    /// group `r` built from `k`.
    pub fn restrict(&self, k: &Subgroup, r: &Restriction) -> SubgroupLattice {
        let mut local = vec![usize::MAX; k.members().capacity()];
        for (i, &a) in r.to_parent.iter().enumerate() {
            local[a] = i;
        }
        let mut subs: Vec<(Subgroup, Vec<usize>)> = self
            .contained_in(k)
            .map(|i| {
                let gens = self.gens[i].iter().map(|&a| local[a]).collect();
                (r.inward(&self.subgroups[i]), gens)
            })
            .collect();
        subs.sort_by(|a, b| a.0.cmp(&b.0));
        SubgroupLattice::from_parts(subs)
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn gens(&self, i: usize) -> &[usize] {
        &self.gens[i]
    }

    pub fn position(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Subgroup)> {
        self.subgroups.iter().enumerate()
    }

    /// Indices of the subgroups of order `n`.
    pub fn of_order(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.subgroups.partition_point(|s| s.order() < n);
        (start..self.subgroups.len()).take_while(move |&i| self.subgroups[i].order() == n)
    }

    /// Indices of subgroups contained in `k`.
    pub fn contained_in<'a>(&'a self, k: &'a Subgroup) -> impl Iterator<Item = usize> + 'a {
        let bound = k.order();
        self.subgroups
            .iter()
            .enumerate()
            .take_while(move |(_, s)| s.order() <= bound)
            .filter(move |(_, s)| s.is_subgroup_of(k) && bound.is_multiple_of(s.order()))
            .map(|(i, _)| i)
    }

    /// Hall `π`-subgroups: all subgroups of order `|G|_π`.
    pub fn hall(&self, g: &Group, pi: &[u64]) -> Vec<usize> {
        self.of_order(g.pi_part(pi)).collect()
    }

    pub fn sylow(&self, g: &Group, p: u64) -> Vec<usize> {
        self.hall(g, &[p])
    }

    /// Hall `π`-subgroups of the subgroup `k`.
    pub fn hall_in(&self, k: &Subgroup, pi: &[u64]) -> Vec<usize> {
        let target: usize = crate::numbers::factorize(k.order() as u64)
            .iter()
            .filter(|(p, _)| pi.contains(p))
            .map(|&(p, e)| p.pow(e) as usize)
            .product();
        self.contained_in(k)
            .filter(|&i| self.subgroups[i].order() == target)
            .collect()
    }

    /// Maximal subgroups of `p` (maximal in `p`), in lattice order.
    pub fn maximal_subgroups_of(&self, p: &Subgroup) -> Vec<usize> {
        let f = crate::numbers::factorize(p.order() as u64);
        if let [(q, _)] = f.as_slice() {
            // in a p-group the maximal subgroups are those of index p
            let target = p.order() / *q as usize;
            return self
                .of_order(target)
                .filter(|&i| self.subgroups[i].is_subgroup_of(p))
                .collect();
        }
        let inside: Vec<usize> = self
            .contained_in(p)
            .filter(|&i| self.subgroups[i] != *p)
            .collect();
        inside
            .iter()
            .copied()
            .filter(|&i| {
                let m = &self.subgroups[i];
                !inside.iter().any(|&j| {
                    let other = &self.subgroups[j];
                    other.order() > m.order() && m.is_subgroup_of(other)
                })
            })
            .collect()
    }

    /// Intersection of the maximal subgroups of the whole group.
    pub fn frattini(&self, g: &Group) -> Subgroup {
        let whole = Subgroup::whole(g);
        let mut acc = ElemSet::full(g.order());
        for i in self.maximal_subgroups_of(&whole) {
            acc.intersect_with(self.subgroups[i].members());
        }
        Subgroup::from_set_unchecked(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build;
    use crate::subgroup::{conjugate, generate, is_closed};

    fn g(s: &str) -> Group {
        build(s, &Caps::default()).unwrap()
    }

    fn lattice(s: &str) -> (Group, SubgroupLattice) {
        let grp = g(s);
        let l = SubgroupLattice::build(&grp, &Caps::default()).unwrap();
        (grp, l)
    }

    /// Independent oracle: close every set of at most three elements by
    /// repeated pairwise multiplication.
    fn naive_subgroup_count(grp: &Group) -> usize {
        let n = grp.order();
        let close = |seed: &[usize]| -> Vec<bool> {
            let mut inset = vec![false; n];
            inset[0] = true;
            for &s in seed {
                inset[s] = true;
            }
            loop {
                let cur: Vec<usize> = (0..n).filter(|&a| inset[a]).collect();
                let mut grew = false;
                for &a in &cur {
                    for &b in &cur {
                        let c = grp.mul(a, b);
                        if !inset[c] {
                            inset[c] = true;
                            grew = true;
                        }
                    }
                }
                if !grew {
                    return inset;
                }
            }
        };
        let mut all = std::collections::HashSet::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    all.insert(close(&[a, b, c]));
                }
            }
        }
        all.len()
    }

    #[test]
    fn subgroup_counts_match_naive_oracle() {
        for (s, expected) in [("A(4)", 10), ("Q8", 6), ("D(8)", 10), ("S(4)", 30), ("S(3)", 6)] {
            let (grp, l) = lattice(s);
            let naive = naive_subgroup_count(&grp);
            assert_eq!(naive, expected, "oracle for {s}");
            assert_eq!(l.len(), expected, "lattice for {s}");
        }
    }

    #[test]
    fn a5_has_59_subgroups() {
        assert_eq!(lattice("A(5)").1.len(), 59);
    }

    #[test]
    fn lattice_closure_properties() {
        let (grp, l) = lattice("S(4)");
        assert_eq!(l.get(0).order(), 1);
        assert_eq!(l.get(l.len() - 1).order(), 24);
        for (_, h) in l.iter() {
            assert!(is_closed(&grp, h.members()));
            for (_, k) in l.iter() {
                assert!(l.position(h.intersection(k).members()).is_some());
            }
            for x in 0..grp.order() {
                assert!(l.position(conjugate(&grp, h, x).members()).is_some());
            }
        }
        for w in l.subgroups().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn hall_and_sylow() {
        let (s3, l) = lattice("S(3)");
        assert_eq!(l.hall(&s3, &[2]).len(), 3);
        assert_eq!(l.hall(&s3, &[2, 3]), vec![l.len() - 1]);
        let (a5, l5) = lattice("A(5)");
        let h = l5.hall(&a5, &[2, 3]);
        assert_eq!(h.len(), 5);
        assert!(l5.hall(&a5, &[3, 5]).is_empty());
    }

    #[test]
    fn maximal_subgroups() {
        let (v4, l) = lattice("C(2)xC(2)");
        let whole = Subgroup::whole(&v4);
        let m = l.maximal_subgroups_of(&whole);
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|&i| l.get(i).order() == 2));
        let (c5, l5) = lattice("C(5)");
        assert_eq!(l5.maximal_subgroups_of(&Subgroup::whole(&c5)), vec![0]);
        let (q8, lq) = lattice("Q8");
        let m = lq.maximal_subgroups_of(&Subgroup::whole(&q8));
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|&i| lq.get(i).order() == 4));
        assert_eq!(lq.frattini(&q8).order(), 2);
        let (s4, l4) = lattice("S(4)");
        let sy = l4.sylow(&s4, 2)[0];
        let p = l4.get(sy).clone();
        assert_eq!(l4.maximal_subgroups_of(&p).len(), 3);
        assert_eq!(generate(&s4, p.elements()), p);
    }

    #[test]
    fn caps_are_enforced() {
        let grp = g("C(300)");
        assert!(matches!(
            SubgroupLattice::build(&grp, &Caps::default()),
            Err(Error::LatticeCapExceeded { .. })
        ));
        let caps = Caps {
            subgroup_count_cap: 5,
            ..Caps::default()
        };
        assert!(matches!(
            SubgroupLattice::build(&g("S(4)"), &caps),
            Err(Error::SubgroupCountCapExceeded { .. })
        ));
    }
}
