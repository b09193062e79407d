//! Per-group state shared by the embedding predicates and the checker:
//! the lattice, normal subgroups, Sylow subgroups and lazily filled flags.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::formation::{
    f_hypercentre_join, hypercentre_ascent, is_f_central, is_in_class, ClassTag, Formation,
    TieBreak,
};
use crate::group::{Caps, Group};
use crate::lattice::SubgroupLattice;
use crate::quotient::QuotientMap;
use crate::subgroup::{
    class_closures, core_of, normal_subgroups_from, permutes, Restriction, Subgroup,
};

pub struct GroupContext {
    group: Group,
    caps: Caps,
    lattice: SubgroupLattice,
    closures: Vec<Subgroup>,
    normals: Vec<usize>,
    normal_flag: Vec<bool>,
    sylows: Vec<(u64, Vec<usize>)>,
    sqn: Vec<OnceLock<bool>>,
    qn: Vec<OnceLock<bool>>,
    cores: Vec<OnceLock<usize>>,
    /// `(N, formation tag)` to the preimage of `Z_F(G/N)`
    hypercentres: Mutex<HashMap<(usize, String), Result<Subgroup>>>,
    classes: Mutex<HashMap<(usize, ClassTag), bool>>,
    verdicts: Mutex<HashMap<(usize, String, String), bool>>,
}

impl std::fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupContext")
            .field("order", &self.group.order())
            .field("subgroups", &self.lattice.len())
            .finish()
    }
}

impl GroupContext {
    pub fn new(group: Group, caps: &Caps) -> Result<GroupContext> {
        let lattice = SubgroupLattice::build(&group, caps)?;
        Ok(GroupContext::with_lattice(group, lattice, caps))
    }

    pub fn with_lattice(group: Group, lattice: SubgroupLattice, caps: &Caps) -> GroupContext {
        let closures = class_closures(&group);
        let n = lattice.len();
        let mut normal_flag = vec![false; n];
        let mut normals: Vec<usize> = normal_subgroups_from(&group, &closures)
            .iter()
            .map(|s| {
                lattice
                    .position(s.members())
                    .expect("normal subgroup missing from lattice")
            })
            .collect();
        normals.sort_unstable();
        for &i in &normals {
            normal_flag[i] = true;
        }
        let sylows = group
            .primes()
            .into_iter()
            .map(|p| (p, lattice.sylow(&group, p)))
            .collect();
        GroupContext {
            group,
            caps: *caps,
            closures,
            normals,
            normal_flag,
            sylows,
            sqn: (0..n).map(|_| OnceLock::new()).collect(),
            qn: (0..n).map(|_| OnceLock::new()).collect(),
            cores: (0..n).map(|_| OnceLock::new()).collect(),
            lattice,
            hypercentres: Mutex::new(HashMap::new()),
            classes: Mutex::new(HashMap::new()),
            verdicts: Mutex::new(HashMap::new()),
        }
    }

    /// Context of the subgroup `k` as a group in its own right, reusing
    /// this lattice.
    pub fn restricted(&self, k: usize) -> (GroupContext, Restriction) {
        let ks = self.lattice.get(k);
        let r = Restriction::new(&self.group, ks);
        let lat = self.lattice.restrict(ks, &r);
        (GroupContext::with_lattice(r.group.clone(), lat, &self.caps), r)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn sub(&self, i: usize) -> &Subgroup {
        self.lattice.get(i)
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn whole(&self) -> usize {
        self.lattice.len() - 1
    }

    /// Lattice index of a subgroup of this group.
    pub fn index_of(&self, s: &Subgroup) -> usize {
        self.lattice
            .position(s.members())
            .expect("subgroup missing from lattice")
    }

    pub fn position(&self, set: &ElemSet) -> Option<usize> {
        self.lattice.position(set)
    }

    pub fn closures(&self) -> &[Subgroup] {
        &self.closures
    }

    /// Lattice indices of the normal subgroups, ascending.
    pub fn normals(&self) -> &[usize] {
        &self.normals
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal_flag[i]
    }

    pub fn sylows(&self) -> &[(u64, Vec<usize>)] {
        &self.sylows
    }

    pub fn sylows_for(&self, p: u64) -> &[usize] {
        self.sylows
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    /// Permutes with every Sylow subgroup.
    pub fn is_sqn(&self, i: usize) -> bool {
        *self.sqn[i].get_or_init(|| {
            if self.normal_flag[i] {
                return true;
            }
            let h = self.sub(i);
            self.sylows
                .iter()
                .flat_map(|(_, v)| v.iter())
                .all(|&s| permutes(&self.group, h, self.sub(s)))
        })
    }

    /// Permutes with every subgroup.
    pub fn is_qn(&self, i: usize) -> bool {
        *self.qn[i].get_or_init(|| {
            if self.normal_flag[i] {
                return true;
            }
            if !self.is_sqn(i) {
                return false;
            }
            let h = self.sub(i);
            self.lattice
                .subgroups()
                .iter()
                .all(|k| permutes(&self.group, h, k))
        })
    }

    /// Lattice index of `H_G`.
    pub fn core(&self, i: usize) -> usize {
        *self.cores[i].get_or_init(|| {
            if self.normal_flag[i] {
                i
            } else {
                self.index_of(&core_of(&self.group, self.sub(i)))
            }
        })
    }

    /// Preimage of `Z_F(G/N)` for the normal subgroup with index `n`,
    /// computed in the quotient group.
    pub fn hypercentre_mod(&self, n: usize, form: &Formation) -> Result<Subgroup> {
        let key = (n, form.tag().to_string());
        if let Some(r) = self.hypercentres.lock().unwrap().get(&key) {
            return r.clone();
        }
        let r = self.compute_hypercentre_mod(n, form);
        self.hypercentres.lock().unwrap().insert(key, r.clone());
        r
    }

    fn compute_hypercentre_mod(&self, n: usize, form: &Formation) -> Result<Subgroup> {
        let q = QuotientMap::new_unchecked(&self.group, self.sub(n));
        let t = q.target();
        let closures = class_closures(t);
        let mut central = |f: &crate::formation::ChiefFactor| is_f_central(t, f, form, &self.caps);
        let z = if form.saturated {
            hypercentre_ascent(t, &closures, &Subgroup::trivial(t), &mut central)?
        } else {
            let normals = normal_subgroups_from(t, &closures);
            f_hypercentre_join(t, &normals, TieBreak::Lexicographic, &mut central)?
        };
        Ok(q.pull_back(&z))
    }

    pub fn hypercentre(&self, form: &Formation) -> Result<Subgroup> {
        self.hypercentre_mod(0, form)
    }

    /// Membership of the subgroup `i` in a group class.
    pub fn sub_in_class(&self, i: usize, tag: &ClassTag) -> Result<bool> {
        let key = (i, tag.clone());
        if let Some(&b) = self.classes.lock().unwrap().get(&key) {
            return Ok(b);
        }
        let b = match tag {
            ClassTag::CPi(pi) => {
                // Hall subgroups of a subgroup are found in this lattice
                let k = self.sub(i);
                let halls = self.lattice.hall_in(k, pi);
                match halls.first() {
                    None => false,
                    Some(&h) => {
                        let hs = self.sub(h);
                        let mut conj: Vec<ElemSet> = k
                            .members()
                            .iter()
                            .map(|x| crate::subgroup::conjugate(&self.group, hs, x).into_members())
                            .collect();
                        conj.sort();
                        conj.dedup();
                        conj.len() == halls.len()
                    }
                }
            }
            _ => {
                let r = Restriction::new(&self.group, self.sub(i));
                is_in_class(&r.group, tag, &self.caps)?
            }
        };
        self.classes.lock().unwrap().insert(key, b);
        Ok(b)
    }

    pub(crate) fn cached_verdict(&self, key: &(usize, String, String)) -> Option<bool> {
        self.verdicts.lock().unwrap().get(key).copied()
    }

    pub(crate) fn store_verdict(&self, key: (usize, String, String), holds: bool) {
        self.verdicts.lock().unwrap().insert(key, holds);
    }

    /// Context of `G/N` with its own lattice, plus the projection.
    pub fn quotient(&self, n: usize) -> Result<(GroupContext, QuotientMap)> {
        if !self.normal_flag[n] {
            return Err(Error::NotNormal);
        }
        let q = QuotientMap::new_unchecked(&self.group, self.sub(n));
        let ctx = GroupContext::new(q.target().clone(), &self.caps)?;
        Ok((ctx, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build;
    use crate::formation::f_hypercentre;

    fn ctx(s: &str) -> GroupContext {
        GroupContext::new(build(s, &Caps::default()).unwrap(), &Caps::default()).unwrap()
    }

    #[test]
    fn sqn_subgroups_of_a4() {
        let c = ctx("A(4)");
        let orders: Vec<usize> = (0..c.len()).filter(|&i| c.is_sqn(i)).map(|i| c.sub(i).order()).collect();
        assert_eq!(orders, vec![1, 4, 12]);
    }

    #[test]
    fn qn_implies_sqn() {
        let c = ctx("S(4)");
        for i in 0..c.len() {
            if c.is_normal(i) {
                assert!(c.is_qn(i));
            }
            if c.is_qn(i) {
                assert!(c.is_sqn(i));
            }
        }
    }

    #[test]
    fn cached_hypercentre_matches_direct() {
        for s in ["S(3)", "A(4)", "S(4)", "D(12)", "SL23", "Dic(12)"] {
            let c = ctx(s);
            for f in Formation::standard_for(c.group()) {
                let direct = f_hypercentre(c.group(), &f, &Caps::default()).unwrap();
                assert_eq!(c.hypercentre(&f).unwrap(), direct, "{s} {}", f.tag());
            }
        }
    }

    #[test]
    fn restricted_context_matches_fresh_lattice() {
        let c = ctx("S(4)");
        for k in 0..c.len() {
            let (rc, r) = c.restricted(k);
            let fresh = SubgroupLattice::build(&r.group, &Caps::default()).unwrap();
            assert_eq!(rc.lattice().subgroups(), fresh.subgroups());
        }
    }

    #[test]
    fn class_cache_for_subgroups() {
        let c = ctx("S(4)");
        let a4 = (0..c.len()).find(|&i| c.sub(i).order() == 12).unwrap();
        assert!(!c.sub_in_class(a4, &ClassTag::Supersoluble).unwrap());
        assert!(c.sub_in_class(a4, &ClassTag::CPi(vec![3])).unwrap());
        assert!(c.sub_in_class(0, &ClassTag::PNilpotent(2)).unwrap());
    }
}
