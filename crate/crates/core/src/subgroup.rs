//! Subgroups as bit vectors over their parent's elements, and the
//! elementwise primitives built on them: generation, conjugation, cores,
//! closures, normalisers, products and normal-subgroup enumeration.

use std::collections::{HashSet, VecDeque};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::Group;

/// A subgroup of some parent [`Group`], canonical by its member bits.
///
/// The parent is not stored; every operation takes it explicitly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: ElemSet,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.members)
    }
}

impl Subgroup {
    pub fn trivial(g: &Group) -> Subgroup {
        Subgroup {
            members: ElemSet::from_indices(g.order(), [0]),
        }
    }

    pub fn whole(g: &Group) -> Subgroup {
        Subgroup {
            members: ElemSet::full(g.order()),
        }
    }

    /// Wraps a set after checking that it is a subgroup of `g`.
    pub fn from_set(g: &Group, members: ElemSet) -> Result<Subgroup> {
        if members.capacity() != g.order() {
            return Err(Error::NotSubgroup("width differs from group order".into()));
        }
        if !is_closed(g, &members) {
            return Err(Error::NotSubgroup(format!("{members:?} is not closed")));
        }
        Ok(Subgroup { members })
    }

    /// Callers guarantee `members` is a subgroup.
    pub(crate) fn from_set_unchecked(members: ElemSet) -> Subgroup {
        debug_assert!(members.contains(0));
        Subgroup { members }
    }

    #[inline]
    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn into_members(self) -> ElemSet {
        self.members
    }

    pub fn order(&self) -> usize {
        self.members.count()
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.iter().collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.members.intersection(&other.members),
        }
    }
}

/// True when a set contains the identity and is closed under products
/// and inverses.
pub fn is_closed(g: &Group, set: &ElemSet) -> bool {
    if !set.contains(0) {
        return false;
    }
    let elems: Vec<usize> = set.iter().collect();
    elems.iter().all(|&a| {
        set.contains(g.inv(a)) && elems.iter().all(|&b| set.contains(g.mul(a, b)))
    })
}

/// Adds `x` to the subgroup `h` (generated by `h_gens`) by coset
/// enumeration: the result is a union of right cosets `H r`, extended
/// until every `r s` for a generator `s` lies inside it.
pub fn extend(g: &Group, h: &Subgroup, h_gens: &[usize], x: usize) -> Subgroup {
    if h.contains(x) {
        return h.clone();
    }
    let h_elems = h.elements();
    let mut set = h.members.clone();
    let mut reps = vec![0usize];
    let add_coset = |set: &mut ElemSet, r: usize| {
        for &e in &h_elems {
            set.insert(g.mul(e, r));
        }
    };
    add_coset(&mut set, x);
    reps.push(x);
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i];
        for &s in h_gens.iter().chain(std::iter::once(&x)) {
            let y = g.mul(r, s);
            if !set.contains(y) {
                add_coset(&mut set, y);
                reps.push(y);
            }
        }
        i += 1;
    }
    Subgroup { members: set }
}

/// Smallest subgroup containing `seed`, together with the generators
/// actually used (the seed elements that enlarged it).
pub fn generate_with_gens(g: &Group, seed: impl IntoIterator<Item = usize>) -> (Subgroup, Vec<usize>) {
    let mut h = Subgroup::trivial(g);
    let mut gens = Vec::new();
    for x in seed {
        if !h.contains(x) {
            h = extend(g, &h, &gens, x);
            gens.push(x);
        }
    }
    (h, gens)
}

pub fn generate(g: &Group, seed: impl IntoIterator<Item = usize>) -> Subgroup {
    generate_with_gens(g, seed).0
}

/// A small generating set, greedily chosen in element order.
pub fn generators(g: &Group, h: &Subgroup) -> Vec<usize> {
    let (_, gens) = generate_with_gens(g, h.members.iter());
    gens
}

pub fn conjugate(g: &Group, h: &Subgroup, x: usize) -> Subgroup {
    let mut set = ElemSet::new(g.order());
    for a in h.members.iter() {
        set.insert(g.conj(a, x));
    }
    Subgroup { members: set }
}

pub fn is_normal(g: &Group, h: &Subgroup) -> bool {
    normalizes(g, h, &generators(g, h), (0..g.order()).collect::<Vec<_>>().as_slice())
}

/// True when each `x` in `by` maps the subgroup generated by `h_gens`
/// into `h`.
fn normalizes(g: &Group, h: &Subgroup, h_gens: &[usize], by: &[usize]) -> bool {
    by.iter()
        .all(|&x| h_gens.iter().all(|&s| h.contains(g.conj(s, x))))
}

/// True when `h` is normal in the subgroup `k` (requires `h ≤ k`).
pub fn is_normal_in(g: &Group, k: &Subgroup, h: &Subgroup) -> bool {
    normalizes(g, h, &generators(g, h), &generators(g, k))
}

pub fn normalizer(g: &Group, h: &Subgroup) -> Subgroup {
    let gens = generators(g, h);
    let set = ElemSet::from_indices(
        g.order(),
        (0..g.order()).filter(|&x| gens.iter().all(|&s| h.contains(g.conj(s, x)))),
    );
    Subgroup { members: set }
}

pub fn centralizer_of_set(g: &Group, s: &ElemSet) -> Subgroup {
    let elems: Vec<usize> = s.iter().collect();
    let set = ElemSet::from_indices(
        g.order(),
        (0..g.order()).filter(|&x| elems.iter().all(|&a| g.mul(x, a) == g.mul(a, x))),
    );
    Subgroup { members: set }
}

pub fn center(g: &Group) -> Subgroup {
    centralizer_of_set(g, &ElemSet::full(g.order()))
}

/// `H_G`: the elements whose whole conjugacy class lies in `h`.
pub fn core_of(g: &Group, h: &Subgroup) -> Subgroup {
    let mut set = h.members.clone();
    for a in h.members.iter() {
        if (0..g.order()).any(|x| !h.contains(g.conj(a, x))) {
            set.remove(a);
        }
    }
    Subgroup { members: set }
}

/// `H^G`: generated by all conjugates of a generating set of `h`.
pub fn normal_closure(g: &Group, h: &Subgroup) -> Subgroup {
    let gens = generators(g, h);
    generate(
        g,
        (0..g.order()).flat_map(|x| gens.iter().map(move |&s| (s, x))).map(|(s, x)| g.conj(s, x)),
    )
}

/// Normal closure of `h` inside the subgroup `ambient` (requires `h ≤ ambient`).
pub fn normal_closure_in(g: &Group, ambient: &Subgroup, h: &Subgroup) -> Subgroup {
    let gens = generators(g, h);
    let by = ambient.elements();
    generate(
        g,
        by.iter().flat_map(|&x| gens.iter().map(move |&s| g.conj(s, x))),
    )
}

/// True when the chain `G ⊵ H^G ⊵ (H^{H^G}) ⊵ …` reaches `h`.
pub fn is_subnormal(g: &Group, h: &Subgroup) -> bool {
    let mut cur = Subgroup::whole(g);
    loop {
        if cur == *h {
            return true;
        }
        let next = normal_closure_in(g, &cur, h);
        if next == cur {
            return false;
        }
        cur = next;
    }
}

/// The set `HK = {hk}`.
pub fn product_set(g: &Group, h: &Subgroup, k: &Subgroup) -> ElemSet {
    let k_elems = k.elements();
    let mut out = ElemSet::new(g.order());
    for a in h.members.iter() {
        if !out.contains(a) {
            for &b in &k_elems {
                out.insert(g.mul(a, b));
            }
        }
    }
    out
}

/// `HK = KH`, equivalently `HK` is a subgroup.
pub fn permutes(g: &Group, h: &Subgroup, k: &Subgroup) -> bool {
    if h.is_subgroup_of(k) || k.is_subgroup_of(h) {
        return true;
    }
    product_set(g, h, k) == product_set(g, k, h)
}

/// Product of two subgroups known to permute (for instance both normal).
pub fn join_permuting(g: &Group, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let s = product_set(g, h, k);
    debug_assert!(is_closed(g, &s));
    Subgroup { members: s }
}

/// Subgroup generated by two subgroups.
pub fn join(g: &Group, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let gens = generators(g, h);
    let mut cur = h.clone();
    let mut cur_gens = gens;
    for x in generators(g, k) {
        if !cur.contains(x) {
            cur = extend(g, &cur, &cur_gens, x);
            cur_gens.push(x);
        }
    }
    cur
}

/// Derived subgroup of `h`, generated by its commutators.
pub fn derived_subgroup(g: &Group, h: &Subgroup) -> Subgroup {
    let elems = h.elements();
    let mut comms = ElemSet::new(g.order());
    for &a in &elems {
        for &b in &elems {
            comms.insert(g.commutator(a, b));
        }
    }
    generate(g, comms.iter())
}

/// Normal closure of each conjugacy class, deduplicated.
pub fn class_closures(g: &Group) -> Vec<Subgroup> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for class in g.conjugacy_classes().into_iter().skip(1) {
        let s = generate(g, class);
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// All normal subgroups, in canonical order, computed as the join-closure
/// of the class closures (no subgroup lattice needed).
pub fn normal_subgroups(g: &Group) -> Vec<Subgroup> {
    normal_subgroups_from(g, &class_closures(g))
}

pub fn normal_subgroups_from(g: &Group, closures: &[Subgroup]) -> Vec<Subgroup> {
    let triv = Subgroup::trivial(g);
    let mut seen: HashSet<Subgroup> = HashSet::from([triv.clone()]);
    let mut out = vec![triv.clone()];
    let mut queue = VecDeque::from([triv]);
    while let Some(n) = queue.pop_front() {
        for m in closures {
            if m.is_subgroup_of(&n) {
                continue;
            }
            let j = join_permuting(g, &n, m);
            if seen.insert(j.clone()) {
                out.push(j.clone());
                queue.push_back(j);
            }
        }
    }
    out.sort();
    out
}

/// Elements whose order is a power of `p`.
pub fn p_elements(g: &Group, within: &Subgroup, p: u64) -> ElemSet {
    ElemSet::from_indices(
        g.order(),
        within
            .members
            .iter()
            .filter(|&a| crate::numbers::is_power_of(g.elem_order(a), p)),
    )
}

/// Elements whose order involves only primes in `pi`.
pub fn pi_elements(g: &Group, within: &Subgroup, pi: &[u64]) -> ElemSet {
    ElemSet::from_indices(
        g.order(),
        within
            .members
            .iter()
            .filter(|&a| crate::numbers::is_pi_number(g.elem_order(a), pi)),
    )
}

/// The prime-power factorisation of `|H|`.
pub fn order_factorization(h: &Subgroup) -> Vec<(u64, u32)> {
    crate::numbers::factorize(h.order() as u64)
}

/// True when the subgroup is nilpotent: each Sylow subgroup of `h` is
/// normal in `h`, i.e. the `p`-elements of `h` number exactly `|H|_p`.
pub fn is_nilpotent_subgroup(g: &Group, h: &Subgroup) -> bool {
    order_factorization(h)
        .iter()
        .all(|&(p, k)| p_elements(g, h, p).count() == p.pow(k) as usize)
}

/// True when `h` is a `p`-group (the trivial group counts).
pub fn is_p_group(h: &Subgroup, p: u64) -> bool {
    crate::numbers::is_power_of(h.order(), p)
}

/// True when `h` is cyclic.
pub fn is_cyclic(g: &Group, h: &Subgroup) -> bool {
    let n = h.order();
    h.members.iter().any(|a| g.elem_order(a) == n)
}

/// True when `h` is abelian.
pub fn is_abelian(g: &Group, h: &Subgroup) -> bool {
    let gens = generators(g, h);
    gens.iter()
        .all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// A subgroup materialised as a standalone group. Element `i` of the new
/// group is the `i`-th smallest parent index in the subgroup.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub group: Group,
    pub to_parent: Vec<usize>,
    from_parent: Vec<u32>,
}

impl Restriction {
    pub fn new(g: &Group, h: &Subgroup) -> Restriction {
        let to_parent = h.elements();
        let n = to_parent.len();
        let mut from_parent = vec![u32::MAX; g.order()];
        for (i, &a) in to_parent.iter().enumerate() {
            from_parent[a] = i as u32;
        }
        let mut table = vec![0u32; n * n];
        for (i, &a) in to_parent.iter().enumerate() {
            for (j, &b) in to_parent.iter().enumerate() {
                table[i * n + j] = from_parent[g.mul(a, b)];
            }
        }
        let labels = to_parent.iter().map(|&a| g.label(a)).collect();
        Restriction {
            group: Group::from_flat_unchecked(n, table, Some(labels)),
            to_parent,
            from_parent,
        }
    }

    /// Maps a parent subgroup contained in the restriction into it.
    pub fn inward(&self, h: &Subgroup) -> Subgroup {
        let set = ElemSet::from_indices(
            self.group.order(),
            h.members.iter().map(|a| {
                let i = self.from_parent[a];
                debug_assert!(i != u32::MAX, "subgroup not contained in restriction");
                i as usize
            }),
        );
        Subgroup::from_set_unchecked(set)
    }

    pub fn outward(&self, h: &Subgroup) -> Subgroup {
        let set = ElemSet::from_indices(
            self.from_parent.len(),
            h.members.iter().map(|i| self.to_parent[i]),
        );
        Subgroup::from_set_unchecked(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build;
    use crate::group::Caps;

    fn g(s: &str) -> Group {
        build(s, &Caps::default()).unwrap()
    }

    fn find(g: &Group, label: &str) -> usize {
        (0..g.order()).find(|&a| g.label(a) == label).unwrap()
    }

    fn sub(g: &Group, labels: &[&str]) -> Subgroup {
        generate(g, labels.iter().map(|l| find(g, l)))
    }

    #[test]
    fn generated_subgroups() {
        let s3 = g("S(3)");
        assert_eq!(sub(&s3, &["(1 2 3)"]).order(), 3);
        assert_eq!(generate(&s3, []).order(), 1);
        let q8 = g("Q8");
        // i = a, j = x in the dicyclic presentation
        assert_eq!(sub(&q8, &["a", "x"]).order(), 8);
    }

    #[test]
    fn normal_subgroups_of_small_groups() {
        let orders = |s: &str| -> Vec<usize> {
            normal_subgroups(&g(s)).iter().map(Subgroup::order).collect()
        };
        assert_eq!(orders("S(3)"), vec![1, 3, 6]);
        assert_eq!(orders("A(5)"), vec![1, 60]);
        assert_eq!(orders("S(4)"), vec![1, 4, 12, 24]);
        assert_eq!(orders("C(2)xC(2)").len(), 5);
    }

    #[test]
    fn cores_and_closures() {
        let s3 = g("S(3)");
        let t = sub(&s3, &["(1 2)"]);
        assert!(core_of(&s3, &t).is_trivial());
        assert_eq!(normal_closure(&s3, &t).order(), 6);
        let a3 = sub(&s3, &["(1 2 3)"]);
        assert_eq!(core_of(&s3, &a3), a3);
        assert_eq!(normal_closure(&s3, &a3), a3);

        let s4 = g("S(4)");
        let d4 = sub(&s4, &["(1 2 3 4)", "(1 3)"]);
        assert_eq!(d4.order(), 8);
        assert_eq!(core_of(&s4, &d4).order(), 4);
        let dbl = sub(&s4, &["(1 2)(3 4)"]);
        assert_eq!(normal_closure(&s4, &dbl).order(), 4);
    }

    #[test]
    fn normalizers_and_centralizers() {
        let s3 = g("S(3)");
        let a3 = sub(&s3, &["(1 2 3)"]);
        assert_eq!(normalizer(&s3, &a3).order(), 6);
        let t = sub(&s3, &["(1 2)"]);
        assert_eq!(normalizer(&s3, &t), t);
        assert_eq!(centralizer_of_set(&s3, &ElemSet::from_indices(6, [0])).order(), 6);
    }

    #[test]
    fn products_and_permutability() {
        let s3 = g("S(3)");
        let h = sub(&s3, &["(1 2)"]);
        let k = sub(&s3, &["(1 3)"]);
        assert_eq!(product_set(&s3, &h, &k).count(), 4);
        assert!(!permutes(&s3, &h, &k));
        assert!(permutes(&s3, &h, &h));
        let a3 = sub(&s3, &["(1 2 3)"]);
        assert_eq!(product_set(&s3, &h, &a3).count(), 6);
        assert!(permutes(&s3, &h, &a3));
    }

    #[test]
    fn subnormality() {
        let s3 = g("S(3)");
        assert!(!is_subnormal(&s3, &sub(&s3, &["(1 2)"])));
        assert!(is_subnormal(&s3, &sub(&s3, &["(1 2 3)"])));
        let d8 = g("D(8)");
        assert!(is_subnormal(&d8, &sub(&d8, &["s"])));
    }

    #[test]
    fn restriction_roundtrip() {
        let s4 = g("S(4)");
        let a4 = sub(&s4, &["(1 2 3)", "(2 3 4)"]);
        let r = Restriction::new(&s4, &a4);
        assert_eq!(r.group.order(), 12);
        let v4 = sub(&s4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        let inner = r.inward(&v4);
        assert!(is_normal(&r.group, &inner));
        assert_eq!(r.outward(&inner), v4);
    }

    #[test]
    fn from_set_rejects_non_subgroups() {
        let s3 = g("S(3)");
        let bad = ElemSet::from_indices(6, [0, find(&s3, "(1 2)"), find(&s3, "(1 3)")]);
        assert!(Subgroup::from_set(&s3, bad).is_err());
    }
}
