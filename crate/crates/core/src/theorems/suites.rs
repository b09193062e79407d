//! Hypothesis and conclusion predicates for every suite, evaluated on one
//! session at a time.

use std::cell::{Cell, RefCell};

use serde_json::{json, Value};

use crate::embedding::{
    embedding_predicate, holds, s_quasinormal_oracle_with, EmbeddingKind, Replayer,
};
use crate::error::Result;
use crate::formation::{f_hypercentre_greedy, is_nilpotent, is_p_nilpotent, is_supersoluble, ClassTag, Formation};
use crate::named::o_upper_p;
use crate::numbers::gcd;
use crate::quotient::QuotientMap;
use crate::subgroup::{
    conjugate, is_abelian, is_cyclic, is_p_group, is_subnormal, normalizer, Restriction,
};

use super::session::Session;
use super::{Instance, TheoremId, VerifyConfig};

pub(crate) struct Outcome {
    pub hypothesis: bool,
    pub conclusion: bool,
    pub nontrivial: bool,
    pub witnesses: Value,
}

fn instance(s: &Session, params: Value, f: impl FnOnce() -> Result<Outcome>) -> Instance {
    match f() {
        Ok(o) => Instance {
            group: s.expr.clone(),
            params,
            hypothesis: o.hypothesis,
            conclusion: o.conclusion,
            nontrivial: o.nontrivial,
            skipped: None,
            witnesses: o.witnesses,
        },
        Err(e) => Instance::skipped(&s.expr, params, e.to_string()),
    }
}

/// Aggregates an inner universal quantifier: the instance hypothesis holds
/// when some tuple satisfies it, the conclusion when every such tuple
/// satisfies its conclusion.
#[derive(Default)]
struct Tally {
    tuples: usize,
    hypothesis_true: usize,
    failures: usize,
    nontrivial: bool,
    first_failure: Option<Value>,
}

impl Tally {
    fn check(
        &mut self,
        hypothesis: bool,
        nontrivial: bool,
        conclusion: impl FnOnce() -> Result<bool>,
        detail: impl FnOnce() -> Value,
    ) -> Result<()> {
        self.tuples += 1;
        if !hypothesis {
            return Ok(());
        }
        self.hypothesis_true += 1;
        self.nontrivial |= nontrivial;
        if !conclusion()? {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
        Ok(())
    }

    fn outcome(self) -> Outcome {
        Outcome {
            hypothesis: self.hypothesis_true > 0,
            conclusion: self.failures == 0,
            nontrivial: self.nontrivial,
            witnesses: json!({
                "tuples": self.tuples,
                "hypothesis_true": self.hypothesis_true,
                "failures": self.failures,
                "first_failure": self.first_failure,
            }),
        }
    }
}

pub(crate) fn run(id: TheoremId, s: &Session, cfg: &VerifyConfig) -> Vec<Instance> {
    use TheoremId::*;
    match id {
        L2_1a => per_formation(s, l2_1a),
        L2_1b => per_formation(s, l2_1b),
        L2_2_1 => vec![instance(s, json!({}), || l2_2_1(s))],
        L2_2_2 => vec![instance(s, json!({}), || l2_2_2(s))],
        L2_2_3 => vec![instance(s, json!({}), || l2_2_3(s))],
        L2_2_4 => vec![instance(s, json!({}), || l2_2_4(s))],
        L2_2_5 => vec![instance(s, json!({}), || l2_2_5(s))],
        L2_2_6 => vec![instance(s, json!({}), || l2_2_6(s))],
        L2_2_7 => vec![instance(s, json!({}), || l2_2_7(s))],
        L2_3_1 => per_formation(s, l2_3_1),
        L2_3_2 => per_formation(s, l2_3_2),
        L2_3_3 => per_formation(s, l2_3_3),
        L2_4 => l2_4(s),
        L2_5_1 => per_prime(s, l2_5_1),
        L2_5_2 => per_prime(s, l2_5_2),
        L2_6 => l2_6(s),
        L2_7 => vec![instance(s, json!({"formation": "U"}), || l2_7(s))],
        L3_1 => per_prime(s, |s, p| sylow_condition(s, p, Cond::Maximal, true, false)),
        T3_2 => per_prime(s, |s, p| relative_condition(s, p, Cond::Maximal, false)),
        L3_3 => per_prime(s, |s, p| sylow_condition(s, p, Cond::Maximal, false, true)),
        T3_4 => per_prime(s, |s, p| relative_condition(s, p, Cond::Maximal, true)),
        T3_5 => vec![instance(s, json!({}), || t3_5(s))],
        L3_6 => per_prime(s, |s, p| sylow_condition(s, p, Cond::Cyclic, true, false)),
        T3_7 => per_prime(s, |s, p| relative_condition(s, p, Cond::Cyclic, false)),
        T3_8 => vec![instance(s, json!({}), || t3_8(s))],
        S4_IMPL => {
            if s.group().order() > cfg.impl_max_order {
                Vec::new()
            } else {
                per_formation(s, s4_impl)
            }
        }
    }
}

fn per_formation(s: &Session, f: fn(&Session, &Formation) -> Result<Outcome>) -> Vec<Instance> {
    Formation::standard_for(s.group())
        .iter()
        .map(|form| instance(s, json!({ "formation": form.tag() }), || f(s, form)))
        .collect()
}

fn per_prime(s: &Session, f: impl Fn(&Session, u64) -> Result<Outcome>) -> Vec<Instance> {
    s.group()
        .primes()
        .into_iter()
        .map(|p| instance(s, json!({ "p": p }), || f(s, p)))
        .collect()
}

fn whole_in(s: &Session, tag: ClassTag) -> Result<bool> {
    s.ctx.sub_in_class(s.ctx.whole(), &tag)
}

fn coprime_to_p_minus_1(n: usize, p: u64) -> bool {
    gcd(n as u64, p - 1) == 1
}

fn nonempty_subsets(primes: &[u64]) -> Vec<Vec<u64>> {
    (1u32..(1 << primes.len()))
        .map(|mask| {
            primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Hypercentre lemmas

fn l2_1a(s: &Session, form: &Formation) -> Result<Outcome> {
    let ctx = &s.ctx;
    let z = ctx.hypercentre(form)?;
    let mut t = Tally::default();
    for &n in ctx.normals() {
        let q = s.quotient_map(n);
        let nontrivial = !z.is_trivial() && n != 0 && n != ctx.whole();
        let image = Cell::new(None);
        let zq = Cell::new(None);
        t.check(
            form.saturated,
            nontrivial,
            || {
                let im = q.push_forward(&z);
                let zf = q.push_forward(&ctx.hypercentre_mod(n, form)?);
                let ok = im.is_subgroup_of(&zf);
                image.set(Some(im.order()));
                zq.set(Some(zf.order()));
                Ok(ok)
            },
            || json!({ "N": s.describe(n), "image_order": image.get(), "hypercentre_order": zq.get() }),
        )?;
    }
    Ok(t.outcome())
}

fn l2_1b(s: &Session, form: &Formation) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let z = ctx.hypercentre(form)?;
    let mut t = Tally::default();
    for h in 0..ctx.len() {
        let hs = ctx.sub(h);
        let inter = z.intersection(hs);
        let nontrivial = !inter.is_trivial() && h != ctx.whole();
        t.check(
            form.s_closed,
            nontrivial,
            || {
                if inter.is_trivial() {
                    return Ok(true);
                }
                let r = Restriction::new(g, hs);
                // Z_F(H) = H exactly when H ∈ F
                if form.member(&r.group) {
                    return Ok(true);
                }
                let zh = f_hypercentre_greedy(&r.group, form, ctx.caps())?;
                Ok(r.inward(&inter).is_subgroup_of(&zh))
            },
            || json!({ "H": s.describe(h), "intersection_order": inter.order() }),
        )?;
    }
    Ok(t.outcome())
}

// ---------------------------------------------------------------------------
// S-quasinormal lemmas

fn sqn_indices(s: &Session) -> Vec<usize> {
    (0..s.ctx.len()).filter(|&i| s.ctx.is_sqn(i)).collect()
}

fn l2_2_1(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let mut t = Tally::default();
    for h in sqn_indices(s) {
        t.check(
            true,
            !ctx.is_normal(h),
            || Ok(is_subnormal(ctx.group(), ctx.sub(h))),
            || json!({ "H": s.describe(h) }),
        )?;
    }
    Ok(t.outcome())
}

fn l2_2_2(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let sqn = sqn_indices(s);
    let mut t = Tally::default();
    for &n in ctx.normals() {
        let q = s.quotient_map(n);
        let qctx = s.quotient_ctx(n)?;
        for &h in &sqn {
            let nontrivial = !ctx.is_normal(h) && n != 0 && n != ctx.whole();
            t.check(
                true,
                nontrivial,
                || Ok(qctx.is_sqn(qctx.index_of(&q.push_forward(ctx.sub(h))))),
                || json!({ "H": s.describe(h), "N": s.describe(n) }),
            )?;
        }
    }
    Ok(t.outcome())
}

fn l2_2_3(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let mut t = Tally::default();
    for &n in ctx.normals() {
        let q = s.quotient_map(n);
        let qctx = s.quotient_ctx(n)?;
        let ns = ctx.sub(n);
        for h in (0..ctx.len()).filter(|&h| ns.is_subgroup_of(ctx.sub(h))) {
            let nontrivial = n != 0 && !ctx.is_normal(h);
            t.check(
                true,
                nontrivial,
                || {
                    let up = qctx.is_sqn(qctx.index_of(&q.push_forward(ctx.sub(h))));
                    Ok(up == ctx.is_sqn(h))
                },
                || json!({ "H": s.describe(h), "N": s.describe(n), "in_G": ctx.is_sqn(h) }),
            )?;
        }
    }
    Ok(t.outcome())
}

fn l2_2_4(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let sqn = sqn_indices(s);
    let mut t = Tally::default();
    for k in 0..ctx.len() {
        let (kctx, r) = s.restricted(k);
        let ks = ctx.sub(k);
        for &h in &sqn {
            let inter = ctx.sub(h).intersection(ks);
            let nontrivial = !ctx.is_normal(h) && k != ctx.whole() && !inter.is_trivial();
            t.check(
                true,
                nontrivial,
                || Ok(kctx.is_sqn(kctx.index_of(&r.inward(&inter)))),
                || json!({ "H": s.describe(h), "K": s.describe(k) }),
            )?;
        }
    }
    Ok(t.outcome())
}

fn l2_2_5(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let mut t = Tally::default();
    for h in sqn_indices(s) {
        let core = ctx.core(h);
        t.check(
            true,
            core != h,
            || {
                let r = Restriction::new(g, ctx.sub(h));
                let q = QuotientMap::new(&r.group, &r.inward(ctx.sub(core)))?;
                Ok(is_nilpotent(q.target()))
            },
            || json!({ "H": s.describe(h), "core": s.describe(core) }),
        )?;
    }
    Ok(t.outcome())
}

fn l2_2_6(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let mut t = Tally::default();
    for p in g.primes() {
        let op = o_upper_p(g, p);
        for h in (0..ctx.len()).filter(|&h| is_p_group(ctx.sub(h), p)) {
            t.check(
                true,
                !ctx.is_normal(h),
                || Ok(ctx.is_sqn(h) == s_quasinormal_oracle_with(g, ctx.sub(h), p, &op)?),
                || json!({ "H": s.describe(h), "p": p, "sqn": ctx.is_sqn(h) }),
            )?;
        }
    }
    Ok(t.outcome())
}

fn l2_2_7(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let sqn = sqn_indices(s);
    let mut t = Tally::default();
    for (a, &h) in sqn.iter().enumerate() {
        for &k in &sqn[a..] {
            let nontrivial = !ctx.is_normal(h) && !ctx.is_normal(k);
            t.check(
                true,
                nontrivial,
                || Ok(ctx.is_sqn(ctx.index_of(&ctx.sub(h).intersection(ctx.sub(k))))),
                || json!({ "H": s.describe(h), "K": s.describe(k) }),
            )?;
        }
    }
    Ok(t.outcome())
}

// ---------------------------------------------------------------------------
// Weakly F_s-quasinormal lemmas

fn wfsqn_indices(s: &Session, form: &Formation) -> Result<Vec<usize>> {
    let mut v = Vec::new();
    for h in 0..s.ctx.len() {
        if holds(&s.ctx, h, &EmbeddingKind::Wfsqn, Some(form))? {
            v.push(h);
        }
    }
    Ok(v)
}

fn l2_3_1(s: &Session, form: &Formation) -> Result<Outcome> {
    let ctx = &s.ctx;
    let good = wfsqn_indices(s, form)?;
    let mut t = Tally::default();
    for &n in ctx.normals() {
        let q = s.quotient_map(n);
        let n_order = ctx.sub(n).order() as u64;
        let coprime: Vec<usize> = good
            .iter()
            .copied()
            .filter(|&h| gcd(ctx.sub(h).order() as u64, n_order) == 1)
            .collect();
        if coprime.is_empty() {
            continue;
        }
        let qctx = s.quotient_ctx(n)?;
        for h in coprime {
            let nontrivial = n != 0 && !ctx.is_normal(h);
            t.check(
                true,
                nontrivial,
                || {
                    let img = qctx.index_of(&q.push_forward(ctx.sub(h)));
                    holds(qctx, img, &EmbeddingKind::Wfsqn, Some(form))
                },
                || json!({ "H": s.describe(h), "N": s.describe(n) }),
            )?;
        }
    }
    Ok(t.outcome())
}

fn l2_3_2(s: &Session, form: &Formation) -> Result<Outcome> {
    let ctx = &s.ctx;
    let mut t = Tally::default();
    for &n in ctx.normals() {
        let q = s.quotient_map(n);
        let qctx = s.quotient_ctx(n)?;
        let ns = ctx.sub(n);
        for h in (0..ctx.len()).filter(|&h| ns.is_subgroup_of(ctx.sub(h))) {
            let nontrivial = n != 0 && !ctx.is_normal(h);
            let in_g = Cell::new(false);
            t.check(
                true,
                nontrivial,
                || {
                    in_g.set(holds(ctx, h, &EmbeddingKind::Wfsqn, Some(form))?);
                    let img = qctx.index_of(&q.push_forward(ctx.sub(h)));
                    Ok(holds(qctx, img, &EmbeddingKind::Wfsqn, Some(form))? == in_g.get())
                },
                || json!({ "H": s.describe(h), "N": s.describe(n), "in_G": in_g.get() }),
            )?;
        }
    }
    Ok(t.outcome())
}

fn l2_3_3(s: &Session, form: &Formation) -> Result<Outcome> {
    let ctx = &s.ctx;
    let good = wfsqn_indices(s, form)?;
    let mut t = Tally::default();
    for k in 0..ctx.len() {
        let ks = ctx.sub(k);
        let inside: Vec<usize> = good
            .iter()
            .copied()
            .filter(|&h| ctx.sub(h).is_subgroup_of(ks))
            .collect();
        if inside.is_empty() {
            continue;
        }
        let (kctx, r) = s.restricted(k);
        for h in inside {
            let nontrivial = k != ctx.whole() && !ctx.is_normal(h);
            t.check(
                form.s_closed,
                nontrivial,
                || {
                    let local = kctx.index_of(&r.inward(ctx.sub(h)));
                    holds(kctx, local, &EmbeddingKind::Wfsqn, Some(form))
                },
                || json!({ "H": s.describe(h), "K": s.describe(k) }),
            )?;
        }
    }
    Ok(t.outcome())
}

// ---------------------------------------------------------------------------
// Arithmetic lemmas

fn l2_4(s: &Session) -> Vec<Instance> {
    let g = s.group();
    let primes = g.primes();
    let mut out = Vec::new();
    for &p in &primes {
        let others: Vec<u64> = primes.iter().copied().filter(|&q| q != p).collect();
        for pi in nonempty_subsets(&others) {
            let params = json!({ "p": p, "pi": pi });
            out.push(instance(s, params, || l2_4_one(s, p, &pi)));
        }
    }
    out
}

fn l2_4_one(s: &Session, p: u64, pi: &[u64]) -> Result<Outcome> {
    let ctx = &s.ctx;
    let c_pi = whole_in(s, ClassTag::CPi(pi.to_vec()))?;
    let supp = EmbeddingKind::Supp(ClassTag::PiClosed(pi.to_vec()));
    let mut t = Tally::default();
    for h in (1..ctx.len()).filter(|&h| is_p_group(ctx.sub(h), p)) {
        let mut all = c_pi;
        if all {
            for m in ctx.lattice().maximal_subgroups_of(ctx.sub(h)) {
                if !holds(ctx, m, &supp, None)? {
                    all = false;
                    break;
                }
            }
        }
        let nontrivial = !ctx.is_normal(h) && ctx.sub(h).order() as u64 > p;
        t.check(
            all,
            nontrivial,
            || whole_in(s, ClassTag::PiClosed(pi.to_vec())),
            || json!({ "P": s.describe(h) }),
        )?;
    }
    Ok(t.outcome())
}

fn l2_5_1(s: &Session, p: u64) -> Result<Outcome> {
    let ctx = &s.ctx;
    let sy = ctx.sylows_for(p)[0];
    let cyclic = is_cyclic(ctx.group(), ctx.sub(sy));
    let coprime = coprime_to_p_minus_1(ctx.group().order(), p);
    let hyp = coprime && cyclic;
    let concl = whole_in(s, ClassTag::PNilpotent(p))?;
    Ok(Outcome {
        hypothesis: hyp,
        conclusion: concl,
        nontrivial: hyp && !ctx.is_normal(sy),
        witnesses: json!({ "P": s.describe(sy), "cyclic": cyclic, "coprime": coprime }),
    })
}

fn l2_5_2(s: &Session, p: u64) -> Result<Outcome> {
    let ctx = &s.ctx;
    let coprime = coprime_to_p_minus_1(ctx.group().order(), p);
    let mut t = Tally::default();
    for &n in ctx.normals() {
        let np = {
            let o = ctx.sub(n).order();
            let mut m = 1usize;
            while o.is_multiple_of(m * p as usize) {
                m *= p as usize;
            }
            m
        };
        let hyp = coprime && np <= p as usize && is_p_nilpotent(s.quotient_map(n).target(), p);
        t.check(
            hyp,
            np == p as usize,
            || whole_in(s, ClassTag::PNilpotent(p)),
            || json!({ "N": s.describe(n) }),
        )?;
    }
    Ok(t.outcome())
}

fn l2_6(s: &Session) -> Vec<Instance> {
    let g = s.group();
    let odd: Vec<u64> = g.primes().into_iter().filter(|&p| p != 2).collect();
    nonempty_subsets(&odd)
        .into_iter()
        .map(|pi| {
            let params = json!({ "pi": pi });
            instance(s, params, || {
                let ctx = &s.ctx;
                let halls = ctx.lattice().hall(g, &pi);
                let Some(&first) = halls.first() else {
                    return Ok(Outcome {
                        hypothesis: false,
                        conclusion: true,
                        nontrivial: false,
                        witnesses: json!({ "halls": 0 }),
                    });
                };
                let mut conj: Vec<_> = (0..g.order())
                    .map(|x| conjugate(g, ctx.sub(first), x).into_members())
                    .collect();
                conj.sort();
                conj.dedup();
                Ok(Outcome {
                    hypothesis: true,
                    conclusion: conj.len() == halls.len(),
                    nontrivial: halls.len() > 1,
                    witnesses: json!({ "halls": halls.len(), "class_size": conj.len() }),
                })
            })
        })
        .collect()
}

fn l2_7(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let mut t = Tally::default();
    for &n in ctx.normals() {
        let hyp = is_cyclic(g, ctx.sub(n)) && is_supersoluble(s.quotient_map(n).target());
        t.check(
            hyp,
            n != 0 && n != ctx.whole(),
            || whole_in(s, ClassTag::Supersoluble),
            || json!({ "N": s.describe(n) }),
        )?;
    }
    Ok(t.outcome())
}

// ---------------------------------------------------------------------------
// Main criteria

#[derive(Clone, Copy)]
enum Cond {
    /// every maximal subgroup of `P`
    Maximal,
    /// every cyclic subgroup of `P` of order `p`, or `4` when `P` is a
    /// non-abelian 2-group
    Cyclic,
}

fn condition_subgroups(s: &Session, sy: usize, p: u64, cond: Cond) -> Vec<usize> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let ps = ctx.sub(sy);
    match cond {
        Cond::Maximal => ctx.lattice().maximal_subgroups_of(ps),
        Cond::Cyclic => {
            let four = p == 2 && !is_abelian(g, ps);
            ctx.lattice()
                .contained_in(ps)
                .filter(|&h| {
                    let o = ctx.sub(h).order();
                    (o as u64 == p || (four && o == 4)) && is_cyclic(g, ctx.sub(h))
                })
                .collect()
        }
    }
}

/// Every listed subgroup is weakly `(U_p)_s`-quasinormal in `G` or has a
/// supplement in the class. Returns the verdict and the failing subgroups.
fn alternatives(s: &Session, subs: &[usize], p: u64, supp: &ClassTag) -> Result<(bool, Value)> {
    let ctx = &s.ctx;
    let form = Formation::p_supersoluble(p);
    let supp = EmbeddingKind::Supp(supp.clone());
    let mut failing = Vec::new();
    let mut via_wfsqn = 0usize;
    let mut via_supp = 0usize;
    for &m in subs {
        let w = holds(ctx, m, &EmbeddingKind::Wfsqn, Some(&form))?;
        let k = holds(ctx, m, &supp, None)?;
        via_wfsqn += w as usize;
        via_supp += k as usize;
        if !w && !k {
            failing.push(s.describe(m));
        }
    }
    let ok = failing.is_empty();
    Ok((
        ok,
        json!({ "checked": subs.len(), "wfsqn": via_wfsqn, "supplemented": via_supp, "failing": failing }),
    ))
}

fn sylow_condition(s: &Session, p: u64, cond: Cond, coprime_needed: bool, normalizer_needed: bool) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let sy = ctx.sylows_for(p)[0];
    let coprime = !coprime_needed || coprime_to_p_minus_1(g.order(), p);
    let norm_ok = !normalizer_needed || {
        let n = ctx.index_of(&normalizer(g, ctx.sub(sy)));
        ctx.sub_in_class(n, &ClassTag::PNilpotent(p))?
    };
    let subs = condition_subgroups(s, sy, p, cond);
    let (alt, diag) = if coprime && norm_ok {
        alternatives(s, &subs, p, &ClassTag::PNilpotent(p))?
    } else {
        (false, Value::Null)
    };
    let hyp = coprime && norm_ok && alt;
    let concl = whole_in(s, ClassTag::PNilpotent(p))?;
    let nontrivial = hyp
        && !ctx.is_normal(sy)
        && match cond {
            Cond::Maximal => ctx.sub(sy).order() as u64 > p,
            Cond::Cyclic => true,
        };
    Ok(Outcome {
        hypothesis: hyp,
        conclusion: concl,
        nontrivial,
        witnesses: json!({
            "P": s.describe(sy),
            "coprime": coprime,
            "normalizer_p_nilpotent": norm_ok,
            "subgroups": diag,
        }),
    })
}

/// Condition on a Sylow subgroup of a normal `E` with `G/E` `p`-nilpotent,
/// embeddings and supplements taken in `G`.
fn relative_condition(s: &Session, p: u64, cond: Cond, normalizer_needed: bool) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let coprime = normalizer_needed || coprime_to_p_minus_1(g.order(), p);
    let mut t = Tally::default();
    for &e in ctx.normals() {
        if !coprime || !is_p_nilpotent(s.quotient_map(e).target(), p) {
            t.check(false, false, || Ok(true), || Value::Null)?;
            continue;
        }
        let sy = ctx.lattice().hall_in(ctx.sub(e), &[p])[0];
        let norm_ok = !normalizer_needed || {
            let n = ctx.index_of(&normalizer(g, ctx.sub(sy)));
            ctx.sub_in_class(n, &ClassTag::PNilpotent(p))?
        };
        let subs = condition_subgroups(s, sy, p, cond);
        let hyp = norm_ok && alternatives(s, &subs, p, &ClassTag::PNilpotent(p))?.0;
        let nontrivial = e != ctx.whole()
            && match cond {
                Cond::Maximal => ctx.sub(sy).order() as u64 > p,
                Cond::Cyclic => !ctx.sub(sy).is_trivial(),
            };
        t.check(
            hyp,
            nontrivial,
            || whole_in(s, ClassTag::PNilpotent(p)),
            || json!({ "E": s.describe(e), "P": s.describe(sy) }),
        )?;
    }
    Ok(t.outcome())
}

fn t3_5(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let mut hyp = true;
    let mut noncyclic = false;
    let mut per_prime = Vec::new();
    for p in g.primes() {
        let sy = ctx.sylows_for(p)[0];
        if is_cyclic(g, ctx.sub(sy)) {
            continue;
        }
        noncyclic = true;
        let subs = condition_subgroups(s, sy, p, Cond::Maximal);
        let (ok, diag) = alternatives(s, &subs, p, &ClassTag::PSupersoluble(p))?;
        hyp &= ok;
        per_prime.push(json!({ "p": p, "P": s.describe(sy), "subgroups": diag }));
    }
    Ok(Outcome {
        hypothesis: hyp,
        conclusion: whole_in(s, ClassTag::Supersoluble)?,
        nontrivial: hyp && noncyclic,
        witnesses: json!({ "noncyclic_sylows": per_prime }),
    })
}

fn t3_8(s: &Session) -> Result<Outcome> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let mut t = Tally::default();
    for &e in ctx.normals() {
        if !is_supersoluble(s.quotient_map(e).target()) {
            t.check(false, false, || Ok(true), || Value::Null)?;
            continue;
        }
        let es = ctx.sub(e);
        let mut hyp = true;
        let mut noncyclic = false;
        for p in crate::numbers::factorize(es.order() as u64).into_iter().map(|(p, _)| p) {
            let sy = ctx.lattice().hall_in(es, &[p])[0];
            if is_cyclic(g, ctx.sub(sy)) {
                continue;
            }
            noncyclic = true;
            let subs = condition_subgroups(s, sy, p, Cond::Cyclic);
            if !alternatives(s, &subs, p, &ClassTag::PSupersoluble(p))?.0 {
                hyp = false;
                break;
            }
        }
        t.check(
            hyp,
            noncyclic && e != ctx.whole(),
            || whole_in(s, ClassTag::Supersoluble),
            || json!({ "E": s.describe(e) }),
        )?;
    }
    Ok(t.outcome())
}

// ---------------------------------------------------------------------------
// Special cases of the weak embedding

fn s4_impl(s: &Session, form: &Formation) -> Result<Outcome> {
    let ctx = &s.ctx;
    let mut replayer = Replayer::new();
    let mut t = Tally::default();
    let mut positives = serde_json::Map::new();
    for kind in EmbeddingKind::special_cases() {
        let mut count = 0usize;
        for h in 0..ctx.len() {
            let v = embedding_predicate(ctx, h, &kind, Some(form))?;
            count += v.holds as usize;
            let detail = RefCell::new(Value::Null);
            t.check(
                v.holds,
                !ctx.is_sqn(h),
                || {
                    let w = embedding_predicate(ctx, h, &EmbeddingKind::Wfsqn, Some(form))?;
                    let ok_special = replayer.replay(ctx, ctx.sub(h), &v, Some(form))?;
                    let ok_weak = w.holds && replayer.replay(ctx, ctx.sub(h), &w, Some(form))?;
                    *detail.borrow_mut() = json!({
                        "special_replays": ok_special,
                        "wfsqn": w.holds,
                        "wfsqn_replays": ok_weak,
                    });
                    Ok(ok_special && ok_weak)
                },
                || json!({ "H": s.describe(h), "kind": kind.to_string(), "detail": detail.take() }),
            )?;
        }
        positives.insert(kind.to_string(), json!(count));
    }
    let mut o = t.outcome();
    o.witnesses["positives"] = Value::Object(positives);
    Ok(o)
}
