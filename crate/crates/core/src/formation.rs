//! Group classes, chief series, F-centrality of chief factors, the
//! F-hypercentre and the F-residual.
//!
//! Nothing here needs a full subgroup lattice except the `C_π` test, so
//! membership can be decided for the semidirect products built from
//! chief factors even when they are larger than the lattice cap.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::{Caps, Group};
use crate::lattice::SubgroupLattice;
use crate::numbers::{is_pi_number, is_power_of, is_prime};
use crate::quotient::QuotientMap;
use crate::subgroup::{
    class_closures, derived_subgroup, generators, join_permuting, normal_subgroups, normalizer,
    pi_elements, Restriction, Subgroup,
};

// ---------------------------------------------------------------------------
// Class predicates

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Nilpotent,
    Soluble,
    PSoluble(u64),
    PNilpotent(u64),
    Supersoluble,
    PSupersoluble(u64),
    PiClosed(Vec<u64>),
    CPi(Vec<u64>),
    SylowTowerSupersoluble,
}

impl ClassTag {
    pub fn parse(s: &str) -> Result<ClassTag> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let prime = |a: Option<&str>| -> Result<u64> {
            let p: u64 = a
                .ok_or_else(|| Error::UnknownTag(format!("{s}: missing prime")))?
                .trim()
                .parse()
                .map_err(|_| Error::UnknownTag(s.into()))?;
            if is_prime(p) {
                Ok(p)
            } else {
                Err(Error::UnknownTag(format!("{s}: {p} is not prime")))
            }
        };
        let primes = |a: Option<&str>| -> Result<Vec<u64>> {
            let mut v = a
                .ok_or_else(|| Error::UnknownTag(format!("{s}: missing prime set")))?
                .split(',')
                .map(|x| prime(Some(x)))
                .collect::<Result<Vec<_>>>()?;
            v.sort_unstable();
            v.dedup();
            Ok(v)
        };
        Ok(match name {
            "nilpotent" => ClassTag::Nilpotent,
            "soluble" => ClassTag::Soluble,
            "p_soluble" => ClassTag::PSoluble(prime(arg)?),
            "p_nilpotent" => ClassTag::PNilpotent(prime(arg)?),
            "supersoluble" => ClassTag::Supersoluble,
            "p_supersoluble" => ClassTag::PSupersoluble(prime(arg)?),
            "pi_closed" => ClassTag::PiClosed(primes(arg)?),
            "C_pi" => ClassTag::CPi(primes(arg)?),
            "sylow_tower_supersoluble" => ClassTag::SylowTowerSupersoluble,
            _ => return Err(Error::UnknownTag(s.into())),
        })
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            ClassTag::Nilpotent => write!(f, "nilpotent"),
            ClassTag::Soluble => write!(f, "soluble"),
            ClassTag::PSoluble(p) => write!(f, "p_soluble:{p}"),
            ClassTag::PNilpotent(p) => write!(f, "p_nilpotent:{p}"),
            ClassTag::Supersoluble => write!(f, "supersoluble"),
            ClassTag::PSupersoluble(p) => write!(f, "p_supersoluble:{p}"),
            ClassTag::PiClosed(pi) => write!(f, "pi_closed:{}", join(pi)),
            ClassTag::CPi(pi) => write!(f, "C_pi:{}", join(pi)),
            ClassTag::SylowTowerSupersoluble => write!(f, "sylow_tower_supersoluble"),
        }
    }
}

/// Decides membership of `g` in the class named by `tag`.
pub fn is_in_class(g: &Group, tag: &ClassTag, caps: &Caps) -> Result<bool> {
    Ok(match tag {
        ClassTag::Nilpotent => is_nilpotent(g),
        ClassTag::Soluble => is_soluble(g),
        ClassTag::PSoluble(p) => chief_factor_orders(g)
            .iter()
            .all(|&n| is_power_of(n, *p) || !(n as u64).is_multiple_of(*p)),
        ClassTag::PNilpotent(p) => is_p_nilpotent(g, *p),
        ClassTag::Supersoluble => is_supersoluble(g),
        ClassTag::PSupersoluble(p) => is_p_supersoluble(g, *p),
        ClassTag::PiClosed(pi) => normal_hall(g, pi).is_some(),
        ClassTag::CPi(pi) => {
            let lat = SubgroupLattice::build(g, caps)?;
            is_c_pi(g, &lat, pi)
        }
        ClassTag::SylowTowerSupersoluble => is_sylow_tower_supersoluble(g),
    })
}

/// Every Sylow subgroup is normal: the `p`-elements number `|G|_p` for each `p`.
pub fn is_nilpotent(g: &Group) -> bool {
    g.factorization().iter().all(|&(p, _)| {
        g.elem_orders()
            .iter()
            .filter(|&&o| is_power_of(o as usize, p))
            .count()
            == g.p_part(p)
    })
}

/// Derived series reaches the trivial subgroup.
pub fn is_soluble(g: &Group) -> bool {
    let mut cur = Subgroup::whole(g);
    loop {
        if cur.is_trivial() {
            return true;
        }
        let next = derived_subgroup(g, &cur);
        if next == cur {
            return false;
        }
        cur = next;
    }
}

/// The normal Hall `π`-subgroup, if any: it must consist of exactly the
/// `π`-elements, so those are counted and checked for closure.
pub fn normal_hall(g: &Group, pi: &[u64]) -> Option<Subgroup> {
    let set = pi_elements(g, &Subgroup::whole(g), pi);
    if set.count() != g.pi_part(pi) {
        return None;
    }
    let elems: Vec<usize> = set.iter().collect();
    let closed = elems
        .iter()
        .all(|&a| elems.iter().all(|&b| set.contains(g.mul(a, b))));
    closed.then(|| Subgroup::from_set_unchecked(set))
}

/// Normal `p`-complement exists (vacuously when `p ∤ |G|`).
pub fn is_p_nilpotent(g: &Group, p: u64) -> bool {
    let others: Vec<u64> = g.primes().into_iter().filter(|&q| q != p).collect();
    normal_hall(g, &others).is_some()
}

pub fn is_supersoluble(g: &Group) -> bool {
    chief_factor_orders(g).iter().all(|&n| is_prime(n as u64))
}

pub fn is_p_supersoluble(g: &Group, p: u64) -> bool {
    chief_factor_orders(g)
        .iter()
        .all(|&n| !(n as u64).is_multiple_of(p) || n as u64 == p)
}

/// Hall `π`-subgroups exist and are all conjugate.
pub fn is_c_pi(g: &Group, lat: &SubgroupLattice, pi: &[u64]) -> bool {
    let halls = lat.hall(g, pi);
    match halls.first() {
        None => false,
        Some(&h) => {
            let n = normalizer(g, lat.get(h));
            g.order() / n.order() == halls.len()
        }
    }
}

/// The Sylow subgroup for the largest prime is normal and the quotient by
/// it has the same property.
pub fn is_sylow_tower_supersoluble(g: &Group) -> bool {
    let Some(&(p, _)) = g.factorization().last() else {
        return true;
    };
    match normal_hall(g, &[p]) {
        None => false,
        Some(s) => is_sylow_tower_supersoluble(QuotientMap::new_unchecked(g, &s).target()),
    }
}

// ---------------------------------------------------------------------------
// Chief series

/// A chief factor `upper/lower` of its group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChiefFactor {
    pub lower: Subgroup,
    pub upper: Subgroup,
}

impl ChiefFactor {
    pub fn order(&self) -> usize {
        self.upper.order() / self.lower.order()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiefSeries {
    pub terms: Vec<Subgroup>,
}

impl ChiefSeries {
    pub fn factors(&self) -> Vec<ChiefFactor> {
        self.terms
            .windows(2)
            .map(|w| ChiefFactor {
                lower: w[0].clone(),
                upper: w[1].clone(),
            })
            .collect()
    }

    pub fn factor_orders(&self) -> Vec<usize> {
        self.terms
            .windows(2)
            .map(|w| w[1].order() / w[0].order())
            .collect()
    }
}

/// How to choose among several minimal normal subgroups above the current term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    Lexicographic,
    Seeded(u64),
}

/// Normal subgroups `M` of `g` with `n < M ≤ ceiling` and nothing normal
/// strictly between `n` and `M`, sorted lexicographically.
pub fn minimal_normal_above(
    g: &Group,
    closures: &[Subgroup],
    n: &Subgroup,
    ceiling: &Subgroup,
) -> Vec<Subgroup> {
    let mut cands: Vec<Subgroup> = Vec::new();
    for c in closures {
        if c.is_subgroup_of(n) || !c.is_subgroup_of(ceiling) {
            continue;
        }
        let m = join_permuting(g, n, c);
        if !cands.contains(&m) {
            cands.push(m);
        }
    }
    let mut minimal: Vec<Subgroup> = cands
        .iter()
        .filter(|m| {
            !cands
                .iter()
                .any(|o| o.order() < m.order() && o.is_subgroup_of(m))
        })
        .cloned()
        .collect();
    minimal.sort_by(|a, b| a.members().lex_cmp(b.members()));
    minimal
}

pub fn chief_series(g: &Group) -> ChiefSeries {
    chief_series_between(
        g,
        &Subgroup::trivial(g),
        &Subgroup::whole(g),
        TieBreak::Lexicographic,
    )
}

/// A chief series refining `floor < ceiling` (both normal in `g`).
pub fn chief_series_between(
    g: &Group,
    floor: &Subgroup,
    ceiling: &Subgroup,
    tie: TieBreak,
) -> ChiefSeries {
    chief_series_with(g, &class_closures(g), floor, ceiling, tie)
}

pub fn chief_series_with(
    g: &Group,
    closures: &[Subgroup],
    floor: &Subgroup,
    ceiling: &Subgroup,
    tie: TieBreak,
) -> ChiefSeries {
    let mut rng = match tie {
        TieBreak::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        TieBreak::Lexicographic => None,
    };
    let mut terms = vec![floor.clone()];
    let mut cur = floor.clone();
    while cur != *ceiling {
        let mut cands = minimal_normal_above(g, closures, &cur, ceiling);
        let next = match rng.as_mut() {
            Some(r) => {
                cands.shuffle(r);
                cands.swap_remove(0)
            }
            None => cands.swap_remove(0),
        };
        terms.push(next.clone());
        cur = next;
    }
    ChiefSeries { terms }
}

pub fn chief_factor_orders(g: &Group) -> Vec<usize> {
    chief_series(g).factor_orders()
}

// ---------------------------------------------------------------------------
// Semidirect products from chief factors

/// `C_G(L/K) = {x : x⁻¹ l x l⁻¹ ∈ K for all l ∈ L}`; generators of `L` suffice.
pub fn factor_centralizer(g: &Group, f: &ChiefFactor) -> Subgroup {
    let gens = generators(g, &f.upper);
    let set = ElemSet::from_indices(
        g.order(),
        (0..g.order()).filter(|&x| {
            gens.iter()
                .all(|&l| f.lower.contains(g.mul(g.conj(l, x), g.inv(l))))
        }),
    );
    Subgroup::from_set_unchecked(set)
}

/// `(L/K) ⋊ G/C_G(L/K)` with `G/C` acting by conjugation. Pairs `(a, b)`
/// have index `a + |L/K| b` and multiply as `(a1, b1)(a2, b2) = (a1 · b1(a2), b1 b2)`
/// where `b(a)` is `x a x⁻¹` for a representative `x` of `b`.
pub fn factor_semidirect(g: &Group, f: &ChiefFactor, caps: &Caps) -> Result<Group> {
    let upper = Restriction::new(g, &f.upper);
    let lower_in = upper.inward(&f.lower);
    let section = QuotientMap::new_unchecked(&upper.group, &lower_in);
    let acting = QuotientMap::new_unchecked(g, &factor_centralizer(g, f));
    let q1 = section.target();
    let q2 = acting.target();
    let (n1, n2) = (q1.order(), q2.order());
    let n = n1 * n2;
    Group::checked_order(n, caps)?;
    let mut local = vec![u32::MAX; g.order()];
    for (i, &a) in upper.to_parent.iter().enumerate() {
        local[a] = i as u32;
    }
    // act[b * n1 + a] = b(a)
    let mut act = vec![0usize; n1 * n2];
    for (b, &x) in acting.coset_reps().iter().enumerate() {
        let x_inv = g.inv(x);
        for (a, &l_local) in section.coset_reps().iter().enumerate() {
            let l = upper.to_parent[l_local];
            let img = g.mul(g.mul(x, l), x_inv);
            act[b * n1 + a] = section.proj(local[img] as usize);
        }
    }
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a1, b1) = (x % n1, x / n1);
        for y in 0..n {
            let (a2, b2) = (y % n1, y / n1);
            let a = q1.mul(a1, act[b1 * n1 + a2]);
            let b = q2.mul(b1, b2);
            table[x * n + y] = (a + n1 * b) as u32;
        }
    }
    Ok(Group::from_flat_unchecked(n, table, None))
}

// ---------------------------------------------------------------------------
// Formations

pub type MemberFn = Arc<dyn Fn(&Group) -> bool + Send + Sync>;

/// A named group class with its closure flags.
#[derive(Clone)]
pub struct Formation {
    tag: String,
    member: MemberFn,
    pub saturated: bool,
    pub s_closed: bool,
    pub contains_u: bool,
}

impl fmt::Debug for Formation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Formation")
            .field("tag", &self.tag)
            .field("saturated", &self.saturated)
            .field("s_closed", &self.s_closed)
            .field("contains_u", &self.contains_u)
            .finish()
    }
}

impl PartialEq for Formation {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}

impl Formation {
    /// Supersoluble groups, tag `U`.
    pub fn supersoluble() -> Formation {
        Formation {
            tag: "U".into(),
            member: Arc::new(is_supersoluble),
            saturated: true,
            s_closed: true,
            contains_u: true,
        }
    }

    /// `p`-supersoluble groups, tag `U_p:p`.
    pub fn p_supersoluble(p: u64) -> Formation {
        Formation {
            tag: format!("U_p:{p}"),
            member: Arc::new(move |g| is_p_supersoluble(g, p)),
            saturated: true,
            s_closed: true,
            contains_u: true,
        }
    }

    /// `p`-nilpotent groups, tag `N_p:p`.
    pub fn p_nilpotent(p: u64) -> Formation {
        Formation {
            tag: format!("N_p:{p}"),
            member: Arc::new(move |g| is_p_nilpotent(g, p)),
            saturated: true,
            s_closed: true,
            contains_u: false,
        }
    }

    /// Nilpotent groups, tag `N`.
    pub fn nilpotent() -> Formation {
        Formation {
            tag: "N".into(),
            member: Arc::new(is_nilpotent),
            saturated: true,
            s_closed: true,
            contains_u: false,
        }
    }

    /// Parses one of the built-in tags: `U`, `U_p:p`, `N_p:p`, `N`.
    pub fn parse(tag: &str) -> Result<Formation> {
        let prime = |s: &str| -> Result<u64> {
            let p: u64 = s.parse().map_err(|_| Error::UnknownTag(tag.into()))?;
            if is_prime(p) {
                Ok(p)
            } else {
                Err(Error::UnknownTag(format!("{tag}: {p} is not prime")))
            }
        };
        // `U_3` and `U_3:3` are accepted as spellings of `U_p:3`.
        fn short(body: &str) -> Option<(char, &str)> {
            let (head, rest) = body.split_at(body.find('_')? + 1);
            let kind = match head {
                "U_" => 'U',
                "N_" => 'N',
                _ => return None,
            };
            match rest.split_once(':') {
                None => Some((kind, rest)),
                Some((a, b)) if a == b => Some((kind, a)),
                _ => None,
            }
        }
        if let Some((kind, p)) = short(tag).filter(|(_, p)| p.bytes().all(|b| b.is_ascii_digit())) {
            let p = prime(p)?;
            return Ok(if kind == 'U' {
                Formation::p_supersoluble(p)
            } else {
                Formation::p_nilpotent(p)
            });
        }
        match tag.split_once(':') {
            None if tag == "U" => Ok(Formation::supersoluble()),
            None if tag == "N" => Ok(Formation::nilpotent()),
            Some(("U_p", p)) => Ok(Formation::p_supersoluble(prime(p)?)),
            Some(("N_p", p)) => Ok(Formation::p_nilpotent(prime(p)?)),
            _ => Err(Error::UnknownTag(tag.into())),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn member(&self, g: &Group) -> bool {
        (self.member)(g)
    }

    /// The built-in formations relevant to a group of the given order:
    /// `U`, then `U_p` and `N_p` for each prime divisor.
    pub fn standard_for(g: &Group) -> Vec<Formation> {
        let mut v = vec![Formation::supersoluble()];
        for p in g.primes() {
            v.push(Formation::p_supersoluble(p));
            v.push(Formation::p_nilpotent(p));
        }
        v
    }
}

/// Named formations. Registration requires a membership predicate.
#[derive(Debug, Clone, Default)]
pub struct FormationRegistry {
    entries: HashMap<String, Formation>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FormationFlags {
    pub saturated: bool,
    pub s_closed: bool,
    pub contains_u: bool,
}

impl FormationRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(
        &mut self,
        tag: &str,
        member: Option<MemberFn>,
        flags: FormationFlags,
    ) -> Result<()> {
        let member = member
            .ok_or_else(|| Error::Config(format!("formation {tag} has no membership predicate")))?;
        self.entries.insert(
            tag.to_string(),
            Formation {
                tag: tag.to_string(),
                member,
                saturated: flags.saturated,
                s_closed: flags.s_closed,
                contains_u: flags.contains_u,
            },
        );
        Ok(())
    }

    /// Registered formations first, then the built-in tags.
    pub fn resolve(&self, tag: &str) -> Result<Formation> {
        match self.entries.get(tag) {
            Some(f) => Ok(f.clone()),
            None => Formation::parse(tag),
        }
    }

    pub fn tags(&self) -> Vec<String> {
        let mut v: Vec<String> = self.entries.keys().cloned().collect();
        v.sort();
        v
    }
}

// ---------------------------------------------------------------------------
// F-centrality, hypercentre, residual

pub fn is_f_central(g: &Group, f: &ChiefFactor, form: &Formation, caps: &Caps) -> Result<bool> {
    Ok(form.member(&factor_semidirect(g, f, caps)?))
}

/// `n = 1`, or every chief factor of `g` below `n` is F-central.
pub fn is_f_hypercentral(g: &Group, n: &Subgroup, form: &Formation, caps: &Caps) -> Result<bool> {
    is_f_hypercentral_with(g, n, TieBreak::Lexicographic, &mut |f| is_f_central(g, f, form, caps))
}

pub fn is_f_hypercentral_with(
    g: &Group,
    n: &Subgroup,
    tie: TieBreak,
    central: &mut dyn FnMut(&ChiefFactor) -> Result<bool>,
) -> Result<bool> {
    if n.is_trivial() {
        return Ok(true);
    }
    let series = chief_series_between(g, &Subgroup::trivial(g), n, tie);
    for f in series.factors() {
        if !central(&f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Z_F(G)`: the product of all F-hypercentral normal subgroups.
pub fn f_hypercentre(g: &Group, form: &Formation, caps: &Caps) -> Result<Subgroup> {
    f_hypercentre_join(g, &normal_subgroups(g), TieBreak::Lexicographic, &mut |f| {
        is_f_central(g, f, form, caps)
    })
}

pub fn f_hypercentre_join(
    g: &Group,
    normals: &[Subgroup],
    tie: TieBreak,
    central: &mut dyn FnMut(&ChiefFactor) -> Result<bool>,
) -> Result<Subgroup> {
    let mut acc = Subgroup::trivial(g);
    for n in normals {
        if n.is_subgroup_of(&acc) {
            continue;
        }
        if is_f_hypercentral_with(g, n, tie, central)? {
            acc = join_permuting(g, &acc, n);
        }
    }
    Ok(acc)
}

/// `Z_F(G)` by ascent: absorb F-central minimal normal subgroups of `G/Z`
/// until none remain. Only offered for saturated formations.
pub fn f_hypercentre_greedy(g: &Group, form: &Formation, caps: &Caps) -> Result<Subgroup> {
    if !form.saturated {
        return Err(Error::Config(format!(
            "greedy hypercentre requires a saturated formation, {} is not",
            form.tag()
        )));
    }
    hypercentre_ascent(g, &class_closures(g), &Subgroup::trivial(g), &mut |f| {
        is_f_central(g, f, form, caps)
    })
}

/// Ascent starting at the normal subgroup `floor`; the result is the
/// preimage of `Z_F(G/floor)`.
pub fn hypercentre_ascent(
    g: &Group,
    closures: &[Subgroup],
    floor: &Subgroup,
    central: &mut dyn FnMut(&ChiefFactor) -> Result<bool>,
) -> Result<Subgroup> {
    let whole = Subgroup::whole(g);
    let mut z = floor.clone();
    'outer: loop {
        for m in minimal_normal_above(g, closures, &z, &whole) {
            let f = ChiefFactor {
                lower: z.clone(),
                upper: m.clone(),
            };
            if central(&f)? {
                z = m;
                continue 'outer;
            }
        }
        return Ok(z);
    }
}

/// `G^F`: intersection of the normal subgroups with quotient in F, checked
/// afterwards to have its own quotient in F.
pub fn f_residual(g: &Group, form: &Formation) -> Result<Subgroup> {
    let mut acc = ElemSet::full(g.order());
    for n in normal_subgroups(g) {
        if form.member(QuotientMap::new_unchecked(g, &n).target()) {
            acc.intersect_with(n.members());
        }
    }
    let res = Subgroup::from_set_unchecked(acc);
    if !form.member(QuotientMap::new_unchecked(g, &res).target()) {
        return Err(Error::ResidualNotWitnessed(form.tag().to_string()));
    }
    Ok(res)
}

/// Cheap U-centrality criterion: a chief factor is U-central iff it has prime order.
pub fn u_central_by_order(f: &ChiefFactor) -> bool {
    is_prime(f.order() as u64)
}

/// True when `n` is a `π`-number.
pub fn is_pi_group_order(n: usize, pi: &[u64]) -> bool {
    is_pi_number(n, pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build;
    use crate::subgroup::generate;

    fn g(s: &str) -> Group {
        build(s, &Caps::default()).unwrap()
    }

    fn find(g: &Group, label: &str) -> usize {
        (0..g.order()).find(|&a| g.label(a) == label).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn chief_series_examples() {
        assert_eq!(chief_factor_orders(&g("S(4)")), vec![4, 3, 2]);
        assert_eq!(chief_factor_orders(&g("A(5)")), vec![60]);
        let mut c6 = chief_factor_orders(&g("C(6)"));
        c6.sort();
        assert_eq!(c6, vec![2, 3]);
        let again = chief_factor_orders(&g("C(6)"));
        assert_eq!(again, chief_factor_orders(&g("C(6)")));
    }

    #[test]
    fn semidirect_examples() {
        let s3 = g("S(3)");
        let a3 = generate(&s3, [find(&s3, "(1 2 3)")]);
        let f = ChiefFactor {
            lower: Subgroup::trivial(&s3),
            upper: a3.clone(),
        };
        assert_eq!(factor_centralizer(&s3, &f), a3);
        let sd = factor_semidirect(&s3, &f, &caps()).unwrap();
        assert_eq!(sd.order(), 6);
        assert!(!sd.is_abelian());
        assert!(is_f_central(&s3, &f, &Formation::supersoluble(), &caps()).unwrap());

        let a4 = g("A(4)");
        let v4 = generate(&a4, [find(&a4, "(1 2)(3 4)"), find(&a4, "(1 3)(2 4)")]);
        let f = ChiefFactor {
            lower: Subgroup::trivial(&a4),
            upper: v4,
        };
        let sd = factor_semidirect(&a4, &f, &caps()).unwrap();
        assert_eq!(sd.order(), 12);
        assert!(normal_subgroups(&sd).iter().all(|n| n.order() != 2));
        assert!(!is_f_central(&a4, &f, &Formation::supersoluble(), &caps()).unwrap());

        // central factor: acting group trivial
        let c6 = g("C(6)");
        let f = ChiefFactor {
            lower: Subgroup::trivial(&c6),
            upper: generate(&c6, [2]),
        };
        assert_eq!(factor_semidirect(&c6, &f, &caps()).unwrap().order(), 3);
    }

    #[test]
    fn hypercentral_and_hypercentre() {
        let u = Formation::supersoluble();
        let a4 = g("A(4)");
        let v4 = generate(&a4, [find(&a4, "(1 2)(3 4)"), find(&a4, "(1 3)(2 4)")]);
        assert!(is_f_hypercentral(&a4, &Subgroup::trivial(&a4), &u, &caps()).unwrap());
        assert!(!is_f_hypercentral(&a4, &v4, &u, &caps()).unwrap());
        let s3 = g("S(3)");
        assert!(is_f_hypercentral(&s3, &Subgroup::whole(&s3), &u, &caps()).unwrap());

        assert_eq!(f_hypercentre(&s3, &u, &caps()).unwrap().order(), 6);
        assert!(f_hypercentre(&a4, &u, &caps()).unwrap().is_trivial());
        let u2 = Formation::parse("U_p:2").unwrap();
        assert!(f_hypercentre(&a4, &u2, &caps()).unwrap().is_trivial());
        assert!(f_hypercentre(&Group::trivial(), &u, &caps()).unwrap().is_trivial());
        assert_eq!(f_hypercentre_greedy(&s3, &u, &caps()).unwrap().order(), 6);
    }

    #[test]
    fn residuals() {
        let u = Formation::supersoluble();
        let s4 = g("S(4)");
        assert_eq!(f_residual(&s4, &u).unwrap().order(), 4);
        assert!(f_residual(&g("S(3)"), &u).unwrap().is_trivial());
        let a4 = g("A(4)");
        assert_eq!(f_residual(&a4, &Formation::p_nilpotent(2)).unwrap().order(), 4);
    }

    #[test]
    fn non_formation_residual_is_detected() {
        // Groups of order at most 2 are not closed under subdirect products.
        let mut reg = FormationRegistry::new();
        reg.register(
            "tiny",
            Some(Arc::new(|g: &Group| g.order() <= 2)),
            FormationFlags::default(),
        )
        .unwrap();
        let f = reg.resolve("tiny").unwrap();
        let v4 = g("C(2)xC(2)");
        assert!(matches!(f_residual(&v4, &f), Err(Error::ResidualNotWitnessed(_))));
        assert!(reg
            .register("nothing", None, FormationFlags::default())
            .is_err());
    }

    #[test]
    fn class_membership() {
        let c = caps();
        let s3 = g("S(3)");
        assert!(is_in_class(&s3, &ClassTag::PNilpotent(2), &c).unwrap());
        assert!(!is_in_class(&s3, &ClassTag::PNilpotent(3), &c).unwrap());
        assert!(!is_in_class(&g("A(4)"), &ClassTag::Supersoluble, &c).unwrap());
        assert!(is_in_class(&s3, &ClassTag::Supersoluble, &c).unwrap());
        assert!(!is_in_class(&g("A(5)"), &ClassTag::Soluble, &c).unwrap());
        assert!(is_in_class(&g("S(4)"), &ClassTag::Soluble, &c).unwrap());
        assert!(is_in_class(&g("A(4)"), &ClassTag::CPi(vec![3]), &c).unwrap());
        assert!(!is_in_class(&g("A(5)"), &ClassTag::CPi(vec![2, 5]), &c).unwrap());
        assert!(is_in_class(&g("S(4)"), &ClassTag::PSoluble(2), &c).unwrap());
        assert!(!is_in_class(&g("A(4)"), &ClassTag::SylowTowerSupersoluble, &c).unwrap());
        assert!(is_in_class(&s3, &ClassTag::SylowTowerSupersoluble, &c).unwrap());
        for n in [1usize, 2, 6, 12, 30] {
            let cyc = g(&format!("C({n})"));
            for tag in [
                "nilpotent",
                "soluble",
                "p_soluble:2",
                "p_nilpotent:3",
                "supersoluble",
                "p_supersoluble:5",
                "pi_closed:2,3",
                "C_pi:3,5",
                "sylow_tower_supersoluble",
            ] {
                let t = ClassTag::parse(tag).unwrap();
                assert!(is_in_class(&cyc, &t, &c).unwrap(), "C({n}) {tag}");
            }
        }
    }

    #[test]
    fn tags_roundtrip() {
        for t in ["nilpotent", "p_nilpotent:2", "pi_closed:2,3", "C_pi:3"] {
            assert_eq!(ClassTag::parse(t).unwrap().to_string(), t);
        }
        for t in ["U", "U_p:3", "N_p:2", "N"] {
            assert_eq!(Formation::parse(t).unwrap().tag(), t);
        }
        assert!(Formation::parse("U_p:4").is_err());
        assert_eq!(Formation::parse("U_2:2").unwrap().tag(), "U_p:2");
        assert_eq!(Formation::parse("N_5").unwrap().tag(), "N_p:5");
        assert!(Formation::parse("U_2:3").is_err());
        assert!(Formation::parse("U_").is_err());
        assert!(ClassTag::parse("bogus").is_err());
    }
}
