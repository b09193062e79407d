//! Subgroup embedding properties: quasinormality, S-quasinormality, the
//! T-witness family (weakly F_s-quasinormal and its special cases) and
//! supplements from a group class.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::bitset::ElemSet;
use crate::context::GroupContext;
use crate::error::{Error, Result};
use crate::formation::{f_hypercentre, is_in_class, ClassTag, Formation};
use crate::group::Group;
use crate::named::o_upper_p;
use crate::numbers::gcd;
use crate::quotient::QuotientMap;
use crate::subgroup::{
    conjugate, core_of, is_closed, is_normal, is_p_group, join_permuting, normalizer, permutes,
    product_set, Restriction, Subgroup,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EmbeddingKind {
    /// permutes with every subgroup
    Qn,
    /// permutes with every Sylow subgroup
    Sqn,
    /// S-quasinormal `T`, `HT` S-quasinormal, containment
    Wfsqn,
    /// normal `T`, `HT` S-quasinormal, containment
    Fsqn,
    /// quasinormal `T`, `HT` quasinormal, containment
    Fqn,
    /// normal `T`, `G = HT`, `H ∩ T ≤ H_G`
    Cn,
    /// normal `T`, `G = HT`, containment
    Fns,
    /// normal `T`, `HT` a normal Hall subgroup, containment
    Fhn,
    /// normal `T`, `HT` normal, containment
    Fnn,
    /// `HK = G` for some `K` in the class
    Supp(ClassTag),
}

impl EmbeddingKind {
    pub fn parse(s: &str) -> Result<EmbeddingKind> {
        use EmbeddingKind::*;
        Ok(match s {
            "qn" => Qn,
            "sqn" => Sqn,
            "wfsqn" => Wfsqn,
            "fsqn" => Fsqn,
            "fqn" => Fqn,
            "cn" => Cn,
            "fns" => Fns,
            "fhn" => Fhn,
            "fnn" => Fnn,
            _ => match s.strip_prefix("supp:") {
                Some(c) => Supp(ClassTag::parse(c)?),
                None => return Err(Error::UnknownTag(s.into())),
            },
        })
    }

    /// The six properties that specialise `wfsqn`.
    pub fn special_cases() -> [EmbeddingKind; 6] {
        use EmbeddingKind::*;
        [Fsqn, Fqn, Cn, Fns, Fhn, Fnn]
    }

    pub fn uses_formation(&self) -> bool {
        use EmbeddingKind::*;
        matches!(self, Wfsqn | Fsqn | Fqn | Fns | Fhn | Fnn)
    }

    fn searches_t(&self) -> bool {
        use EmbeddingKind::*;
        matches!(self, Wfsqn | Fsqn | Fqn | Cn | Fns | Fhn | Fnn)
    }
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use EmbeddingKind::*;
        match self {
            Qn => write!(f, "qn"),
            Sqn => write!(f, "sqn"),
            Wfsqn => write!(f, "wfsqn"),
            Fsqn => write!(f, "fsqn"),
            Fqn => write!(f, "fqn"),
            Cn => write!(f, "cn"),
            Fns => write!(f, "fns"),
            Fhn => write!(f, "fhn"),
            Fnn => write!(f, "fnn"),
            Supp(c) => write!(f, "supp:{c}"),
        }
    }
}

/// The subgroup found by a successful search: `T` for the T-witness
/// family, the supplement `K` for `supp:*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub subgroup: ElemSet,
    pub product: Option<ElemSet>,
    pub core: Option<ElemSet>,
    /// Preimage of `Z_F(G/H_G)` when the containment was needed.
    pub hypercentre: Option<ElemSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingVerdict {
    pub holds: bool,
    pub kind: EmbeddingKind,
    pub formation: Option<String>,
    pub witness: Option<Witness>,
    pub candidates: usize,
}

impl EmbeddingVerdict {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "holds": self.holds,
            "kind": self.kind.to_string(),
            "candidates": self.candidates,
        });
        if let Some(f) = &self.formation {
            v["formation"] = json!(f);
        }
        if let Some(w) = &self.witness {
            v["witness"] = w.to_json();
        }
        v
    }
}

impl Witness {
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "subgroup": self.subgroup.to_hex() });
        if let Some(p) = &self.product {
            v["product"] = json!(p.to_hex());
        }
        if let Some(c) = &self.core {
            v["core"] = json!(c.to_hex());
        }
        if let Some(z) = &self.hypercentre {
            v["hypercentre"] = json!(z.to_hex());
        }
        v
    }
}

/// `(H ∩ T)H_G/H_G` and `Z_F(G/H_G)` as subsets of the quotient `G/H_G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub quotient_order: usize,
    pub intersection: ElemSet,
    pub hypercentre: ElemSet,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.intersection.is_subset(&self.hypercentre)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "quotient_order": self.quotient_order,
            "intersection": self.intersection.to_hex(),
            "hypercentre": self.hypercentre.to_hex(),
        })
    }
}

/// True when `H` permutes with every subgroup.
pub fn is_quasinormal(ctx: &GroupContext, h: usize) -> bool {
    ctx.is_qn(h)
}

/// True when `H` permutes with every Sylow subgroup.
pub fn is_s_quasinormal(ctx: &GroupContext, h: usize) -> bool {
    ctx.is_sqn(h)
}

/// For a `p`-subgroup `H`: `O^p(G) ≤ N_G(H)`.
pub fn s_quasinormal_oracle_p(g: &Group, h: &Subgroup, p: u64) -> Result<bool> {
    if !is_p_group(h, p) {
        return Err(Error::NotSubgroup(format!("not a {p}-subgroup")));
    }
    s_quasinormal_oracle_with(g, h, p, &o_upper_p(g, p))
}

/// As [`s_quasinormal_oracle_p`] with `O^p(G)` supplied by the caller.
pub fn s_quasinormal_oracle_with(g: &Group, h: &Subgroup, p: u64, op: &Subgroup) -> Result<bool> {
    if !is_p_group(h, p) {
        return Err(Error::NotSubgroup(format!("not a {p}-subgroup")));
    }
    Ok(op.is_subgroup_of(&normalizer(g, h)))
}

/// Decides `kind` for the subgroup with lattice index `h`. Witnesses are
/// searched in lattice order and the first one is returned.
pub fn embedding_predicate(
    ctx: &GroupContext,
    h: usize,
    kind: &EmbeddingKind,
    form: Option<&Formation>,
) -> Result<EmbeddingVerdict> {
    let form_tag = if kind.uses_formation() {
        Some(
            form.ok_or_else(|| Error::Config(format!("{kind} needs a formation")))?
                .tag()
                .to_string(),
        )
    } else {
        None
    };
    let mut v = EmbeddingVerdict {
        holds: false,
        kind: kind.clone(),
        formation: form_tag,
        witness: None,
        candidates: 0,
    };
    match kind {
        EmbeddingKind::Qn => {
            v.holds = ctx.is_qn(h);
            v.candidates = ctx.len();
        }
        EmbeddingKind::Sqn => {
            v.holds = ctx.is_sqn(h);
            v.candidates = ctx.sylows().iter().map(|(_, s)| s.len()).sum();
        }
        EmbeddingKind::Supp(tag) => supplement_search(ctx, h, tag, &mut v)?,
        _ => t_search(ctx, h, kind, form, &mut v)?,
    }
    Ok(v)
}

/// Cached boolean form of [`embedding_predicate`].
pub fn holds(
    ctx: &GroupContext,
    h: usize,
    kind: &EmbeddingKind,
    form: Option<&Formation>,
) -> Result<bool> {
    let key = (
        h,
        kind.to_string(),
        form.map(|f| f.tag().to_string()).unwrap_or_default(),
    );
    if let Some(b) = ctx.cached_verdict(&key) {
        return Ok(b);
    }
    let b = embedding_predicate(ctx, h, kind, form)?.holds;
    ctx.store_verdict(key, b);
    Ok(b)
}

fn t_search(
    ctx: &GroupContext,
    h: usize,
    kind: &EmbeddingKind,
    form: Option<&Formation>,
    v: &mut EmbeddingVerdict,
) -> Result<()> {
    use EmbeddingKind::*;
    let g = ctx.group();
    let hs = ctx.sub(h);
    let core = ctx.core(h);
    let core_s = ctx.sub(core);
    let whole = ctx.whole();
    let mut hyper: Option<Subgroup> = None;
    let candidates: Vec<usize> = match kind {
        Wfsqn => (0..ctx.len()).filter(|&t| ctx.is_sqn(t)).collect(),
        Fqn => (0..ctx.len()).filter(|&t| ctx.is_qn(t)).collect(),
        _ => ctx.normals().to_vec(),
    };
    for t in candidates {
        v.candidates += 1;
        let ts = ctx.sub(t);
        let inter = hs.intersection(ts);
        let ht_order = hs.order() * ts.order() / inter.order();
        if matches!(kind, Cn | Fns) && ht_order != g.order() {
            continue;
        }
        let ht = if ht_order == g.order() {
            whole
        } else {
            match ctx.position(&product_set(g, hs, ts)) {
                Some(i) => i,
                None => continue,
            }
        };
        let ht_ok = match kind {
            Wfsqn | Fsqn => ctx.is_sqn(ht),
            Fqn => ctx.is_qn(ht),
            Cn | Fns => true,
            Fhn => {
                let n = ctx.sub(ht).order();
                ctx.is_normal(ht) && gcd(n as u64, (g.order() / n) as u64) == 1
            }
            Fnn => ctx.is_normal(ht),
            Qn | Sqn | Supp(_) => unreachable!(),
        };
        if !ht_ok {
            continue;
        }
        let contained = if inter.is_subgroup_of(core_s) {
            true
        } else if *kind == Cn {
            false
        } else {
            if hyper.is_none() {
                let f = form.expect("formation checked by caller");
                hyper = Some(ctx.hypercentre_mod(core, f)?);
            }
            inter.is_subgroup_of(hyper.as_ref().unwrap())
        };
        if contained {
            v.holds = true;
            v.witness = Some(Witness {
                subgroup: ts.members().clone(),
                product: Some(ctx.sub(ht).members().clone()),
                core: Some(core_s.members().clone()),
                hypercentre: hyper.map(Subgroup::into_members),
            });
            return Ok(());
        }
    }
    Ok(())
}

fn supplement_search(
    ctx: &GroupContext,
    h: usize,
    tag: &ClassTag,
    v: &mut EmbeddingVerdict,
) -> Result<()> {
    let n = ctx.group().order();
    let hs = ctx.sub(h);
    for k in 0..ctx.len() {
        let ks = ctx.sub(k);
        // |HK| = |H||K|/|H ∩ K|
        if hs.order() * ks.order() / hs.intersection(ks).order() != n {
            continue;
        }
        v.candidates += 1;
        if ctx.sub_in_class(k, tag)? {
            v.holds = true;
            v.witness = Some(Witness {
                subgroup: ks.members().clone(),
                product: None,
                core: None,
                hypercentre: None,
            });
            return Ok(());
        }
    }
    Ok(())
}

/// Builds the containment certificate of a T-witness in `G/H_G`.
pub fn certificate(ctx: &GroupContext, h: usize, w: &Witness, form: &Formation) -> Result<Certificate> {
    let g = ctx.group();
    let core = ctx.core(h);
    let q = QuotientMap::new_unchecked(g, ctx.sub(core));
    let t = Subgroup::from_set(g, w.subgroup.clone())?;
    let inter = ctx.sub(h).intersection(&t);
    let z = ctx.hypercentre_mod(core, form)?;
    Ok(Certificate {
        quotient_order: q.target().order(),
        intersection: q.push_forward(&inter).into_members(),
        hypercentre: q.push_forward(&z).into_members(),
    })
}

/// Re-checks positive verdicts using primitives that bypass the context
/// caches: direct products of sets, fresh cores and quotients, Sylow
/// subgroups as conjugates of one Sylow, and the join construction of
/// the hypercentre.
#[derive(Default)]
pub struct Replayer {
    hypercentres: HashMap<(ElemSet, String), ElemSet>,
}

impl Replayer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn replay(
        &mut self,
        ctx: &GroupContext,
        h: &Subgroup,
        v: &EmbeddingVerdict,
        form: Option<&Formation>,
    ) -> Result<bool> {
        use EmbeddingKind::*;
        if !v.holds {
            return Ok(true);
        }
        let g = ctx.group();
        if !v.kind.searches_t() && !matches!(v.kind, Supp(_)) {
            return Ok(match v.kind {
                Qn => ctx.lattice().subgroups().iter().all(|k| permutes(g, h, k)),
                Sqn => self.sylows(ctx).iter().all(|p| permutes(g, h, p)),
                _ => unreachable!(),
            });
        }
        let Some(w) = &v.witness else {
            return Ok(false);
        };
        let Ok(t) = Subgroup::from_set(g, w.subgroup.clone()) else {
            return Ok(false);
        };
        if let Supp(tag) = &v.kind {
            let full = product_set(g, h, &t).count() == g.order();
            return Ok(full && is_in_class(&Restriction::new(g, &t).group, tag, ctx.caps())?);
        }
        let t_ok = match v.kind {
            Wfsqn => self.sylows(ctx).iter().all(|p| permutes(g, &t, p)),
            Fqn => ctx.lattice().subgroups().iter().all(|k| permutes(g, &t, k)),
            _ => is_normal(g, &t),
        };
        if !t_ok {
            return Ok(false);
        }
        let prod = product_set(g, h, &t);
        if !is_closed(g, &prod) {
            return Ok(false);
        }
        let ht = Subgroup::from_set(g, prod)?;
        let ht_ok = match v.kind {
            Wfsqn | Fsqn => self.sylows(ctx).iter().all(|p| permutes(g, &ht, p)),
            Fqn => ctx.lattice().subgroups().iter().all(|k| permutes(g, &ht, k)),
            Cn | Fns => ht.order() == g.order(),
            Fhn => {
                is_normal(g, &ht)
                    && gcd(ht.order() as u64, (g.order() / ht.order()) as u64) == 1
            }
            Fnn => is_normal(g, &ht),
            _ => unreachable!(),
        };
        if !ht_ok {
            return Ok(false);
        }
        let core = core_of(g, h);
        let inter = h.intersection(&t);
        if v.kind == Cn {
            return Ok(inter.is_subgroup_of(&core));
        }
        let form = form.ok_or_else(|| Error::Config(format!("{} needs a formation", v.kind)))?;
        let q = QuotientMap::new(g, &core)?;
        let lhs = q.push_forward(&join_permuting(g, &inter, &core));
        let key = (core.members().clone(), form.tag().to_string());
        let z = match self.hypercentres.get(&key) {
            Some(z) => z.clone(),
            None => {
                let z = f_hypercentre(q.target(), form, ctx.caps())?.into_members();
                self.hypercentres.insert(key, z.clone());
                z
            }
        };
        Ok(lhs.members().is_subset(&z))
    }

    fn sylows(&self, ctx: &GroupContext) -> Vec<Subgroup> {
        let g = ctx.group();
        let mut out: Vec<Subgroup> = Vec::new();
        for (_, list) in ctx.sylows() {
            let first = ctx.sub(list[0]);
            for x in 0..g.order() {
                let c = conjugate(g, first, x);
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build;
    use crate::group::Caps;
    use crate::subgroup::generate;

    fn ctx(s: &str) -> GroupContext {
        GroupContext::new(build(s, &Caps::default()).unwrap(), &Caps::default()).unwrap()
    }

    fn idx(c: &GroupContext, labels: &[&str]) -> usize {
        let g = c.group();
        let elems = labels
            .iter()
            .map(|l| (0..g.order()).find(|&a| g.label(a) == *l).unwrap());
        c.index_of(&generate(g, elems))
    }

    #[test]
    fn quasinormality_examples() {
        let s3 = ctx("S(3)");
        let t = idx(&s3, &["(1 2)"]);
        assert!(!is_quasinormal(&s3, t));
        assert!(!is_s_quasinormal(&s3, t));
        assert!(is_s_quasinormal(&s3, idx(&s3, &["(1 2 3)"])));
        let q8 = ctx("Q8");
        assert!((0..q8.len()).all(|i| is_quasinormal(&q8, i)));
    }

    #[test]
    fn oracle_examples() {
        let a4 = build("A(4)", &Caps::default()).unwrap();
        let h = generate(&a4, [(0..12).find(|&a| a4.label(a) == "(1 2)(3 4)").unwrap()]);
        assert!(!s_quasinormal_oracle_p(&a4, &h, 2).unwrap());
        let s3 = build("S(3)", &Caps::default()).unwrap();
        let a3 = generate(&s3, [(0..6).find(|&a| s3.label(a) == "(1 2 3)").unwrap()]);
        assert!(s_quasinormal_oracle_p(&s3, &a3, 3).unwrap());
        let d8 = build("D(8)", &Caps::default()).unwrap();
        let s = generate(&d8, [(0..8).find(|&a| d8.label(a) == "s").unwrap()]);
        assert!(s_quasinormal_oracle_p(&d8, &s, 2).unwrap());
    }

    #[test]
    fn c_normal_in_s3() {
        let s3 = ctx("S(3)");
        let h = idx(&s3, &["(1 2)"]);
        let v = embedding_predicate(&s3, h, &EmbeddingKind::Cn, None).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.as_ref().unwrap().subgroup.count(), 3);
        assert!(Replayer::new().replay(&s3, s3.sub(h), &v, None).unwrap());
    }

    #[test]
    fn a4_involution_is_not_weakly_quasinormal_for_u2() {
        let a4 = ctx("A(4)");
        let h = idx(&a4, &["(1 2)(3 4)"]);
        let u2 = Formation::parse("U_p:2").unwrap();
        let v = embedding_predicate(&a4, h, &EmbeddingKind::Wfsqn, Some(&u2)).unwrap();
        assert!(!v.holds);
        assert_eq!(v.candidates, 3);
        let supp = EmbeddingKind::parse("supp:p_nilpotent:2").unwrap();
        assert!(!embedding_predicate(&a4, h, &supp, None).unwrap().holds);
    }

    #[test]
    fn supplements() {
        let s3 = ctx("S(3)");
        let h = idx(&s3, &["(1 2)"]);
        let supp = EmbeddingKind::parse("supp:p_nilpotent:2").unwrap();
        let v = embedding_predicate(&s3, h, &supp, None).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.as_ref().unwrap().subgroup.count(), 3);
        let whole = s3.whole();
        let v = embedding_predicate(&s3, whole, &supp, None).unwrap();
        assert_eq!(v.witness.unwrap().subgroup.count(), 1);
    }

    #[test]
    fn normal_subgroups_are_weakly_quasinormal_via_trivial_t() {
        let c = ctx("S(4)");
        let u = Formation::supersoluble();
        let mut rp = Replayer::new();
        for &n in c.normals() {
            let v = embedding_predicate(&c, n, &EmbeddingKind::Wfsqn, Some(&u)).unwrap();
            assert!(v.holds);
            assert_eq!(v.witness.as_ref().unwrap().subgroup.count(), 1);
            assert!(rp.replay(&c, c.sub(n), &v, Some(&u)).unwrap());
        }
    }

    #[test]
    fn witnesses_replay_and_certify() {
        for s in ["S(4)", "D(12)", "SL23", "Dic(12)", "S(3)xC(3)"] {
            let c = ctx(s);
            let mut rp = Replayer::new();
            for f in Formation::standard_for(c.group()) {
                for h in 0..c.len() {
                    for kind in [EmbeddingKind::Wfsqn, EmbeddingKind::Fns, EmbeddingKind::Fnn] {
                        let v = embedding_predicate(&c, h, &kind, Some(&f)).unwrap();
                        assert!(rp.replay(&c, c.sub(h), &v, Some(&f)).unwrap(), "{s} {h} {kind}");
                        if let Some(w) = &v.witness {
                            assert!(certificate(&c, h, w, &f).unwrap().holds());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn forged_witness_is_rejected() {
        let s3 = ctx("S(3)");
        let h = idx(&s3, &["(1 2)"]);
        let mut v = embedding_predicate(&s3, h, &EmbeddingKind::Cn, None).unwrap();
        v.witness.as_mut().unwrap().subgroup = s3.sub(idx(&s3, &["(1 3)"])).members().clone();
        assert!(!Replayer::new().replay(&s3, s3.sub(h), &v, None).unwrap());
    }

    #[test]
    fn tags() {
        for t in ["qn", "sqn", "wfsqn", "fsqn", "fqn", "cn", "fns", "fhn", "fnn", "supp:p_nilpotent:2"] {
            assert_eq!(EmbeddingKind::parse(t).unwrap().to_string(), t);
        }
        assert!(EmbeddingKind::parse("xyz").is_err());
    }
}
