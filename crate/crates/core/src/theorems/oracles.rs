//! Cross-checks between independent computations of the same quantity,
//! plus structural invariants of groups, lattices and quotients.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::s_quasinormal_oracle_with;
use crate::error::{Error, Result};
use crate::formation::{
    chief_series_between, f_hypercentre, f_hypercentre_greedy, f_hypercentre_join, f_residual,
    is_f_central, minimal_normal_above, u_central_by_order, ChiefFactor, Formation, TieBreak,
};
use crate::named::o_upper_p;
use crate::subgroup::{conjugate, is_closed, is_p_group, join_permuting, normal_subgroups_from, Subgroup};

use super::corpus::build_corpus;
use super::session::Session;
use super::VerifyConfig;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl OracleCheck {
    fn new(name: &str) -> Self {
        OracleCheck {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.mismatches.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub const SQN_ORACLE: &str = "sqn_vs_p_residual_normalizer";
pub const U_CENTRAL: &str = "u_central_vs_prime_order";
pub const GREEDY_JOIN: &str = "hypercentre_greedy_vs_join";
pub const CHIEF_TIE_BREAK: &str = "chief_series_tie_break";
pub const HYPERCENTRE_MEMBER: &str = "hypercentre_whole_iff_member";
pub const RESIDUAL: &str = "residual";
pub const STRUCTURE: &str = "structure";
pub const SYLOW: &str = "sylow";

/// Formations used by the oracles: `U`, `U_p`, `N_p`.
fn formations(s: &Session) -> Vec<Formation> {
    Formation::standard_for(s.group())
}

/// `is_s_quasinormal` against `O^p(G) ≤ N_G(H)` on every `p`-subgroup.
pub fn sqn_oracle(s: &Session) -> Result<OracleCheck> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let mut c = OracleCheck::new(SQN_ORACLE);
    for p in g.primes() {
        let op = o_upper_p(g, p);
        for h in (0..ctx.len()).filter(|&h| is_p_group(ctx.sub(h), p)) {
            let direct = ctx.is_sqn(h);
            let oracle = s_quasinormal_oracle_with(g, ctx.sub(h), p, &op)?;
            c.expect(direct == oracle, || format!("{} p={p} subgroup {h}", s.expr));
        }
    }
    Ok(c)
}

/// Every chief factor `L/K` of `G`: each normal `K` with each minimal
/// normal `L/K` above it.
pub fn all_chief_factors(s: &Session) -> Vec<ChiefFactor> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let whole = Subgroup::whole(g);
    let mut out = Vec::new();
    for &k in ctx.normals() {
        let ks = ctx.sub(k);
        for l in minimal_normal_above(g, ctx.closures(), ks, &whole) {
            out.push(ChiefFactor {
                lower: ks.clone(),
                upper: l,
            });
        }
    }
    out
}

/// U-centrality through the semidirect product against the prime-order
/// shortcut.
pub fn u_central_oracle(s: &Session) -> Result<OracleCheck> {
    let g = s.group();
    let u = Formation::supersoluble();
    let mut c = OracleCheck::new(U_CENTRAL);
    for f in all_chief_factors(s) {
        let direct = is_f_central(g, &f, &u, s.ctx.caps())?;
        c.expect(direct == u_central_by_order(&f), || {
            format!("{} factor of order {}", s.expr, f.order())
        });
    }
    Ok(c)
}

pub fn greedy_join_oracle(s: &Session) -> Result<OracleCheck> {
    let g = s.group();
    let mut c = OracleCheck::new(GREEDY_JOIN);
    for form in formations(s) {
        let join = f_hypercentre(g, &form, s.ctx.caps())?;
        let greedy = f_hypercentre_greedy(g, &form, s.ctx.caps())?;
        c.expect(join == greedy, || format!("{} {}", s.expr, form.tag()));
    }
    Ok(c)
}

/// Hypercentres and chief factor orders do not depend on which minimal
/// normal subgroup a chief series picks.
pub fn tie_break_oracle(s: &Session, seed: u64) -> Result<OracleCheck> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let caps = ctx.caps();
    let mut c = OracleCheck::new(CHIEF_TIE_BREAK);
    let triv = Subgroup::trivial(g);
    let whole = Subgroup::whole(g);
    let mut base = chief_series_between(g, &triv, &whole, TieBreak::Lexicographic).factor_orders();
    base.sort_unstable();
    for k in 0..4u64 {
        let mut o = chief_series_between(g, &triv, &whole, TieBreak::Seeded(seed + k)).factor_orders();
        o.sort_unstable();
        c.expect(o == base, || format!("{} factor orders, seed {}", s.expr, seed + k));
    }
    let normals: Vec<Subgroup> = normal_subgroups_from(g, ctx.closures());
    for form in formations(s) {
        let lex = f_hypercentre_join(g, &normals, TieBreak::Lexicographic, &mut |f| {
            is_f_central(g, f, &form, caps)
        })?;
        let seeded = f_hypercentre_join(g, &normals, TieBreak::Seeded(seed), &mut |f| {
            is_f_central(g, f, &form, caps)
        })?;
        c.expect(lex == seeded, || format!("{} {}", s.expr, form.tag()));
    }
    Ok(c)
}

pub fn hypercentre_member_oracle(s: &Session) -> Result<OracleCheck> {
    let g = s.group();
    let mut c = OracleCheck::new(HYPERCENTRE_MEMBER);
    for form in formations(s) {
        let z = s.ctx.hypercentre(&form)?;
        c.expect((z.order() == g.order()) == form.member(g), || {
            format!("{} {}", s.expr, form.tag())
        });
    }
    Ok(c)
}

/// `G/G^F ∈ F`, and `G^F ≤ N` whenever `G/N ∈ F`.
pub fn residual_oracle(s: &Session) -> Result<OracleCheck> {
    let ctx = &s.ctx;
    let mut c = OracleCheck::new(RESIDUAL);
    for form in formations(s) {
        let r = f_residual(ctx.group(), &form)?;
        let ri = ctx.index_of(&r);
        c.expect(form.member(s.quotient_map(ri).target()), || {
            format!("{} {} quotient", s.expr, form.tag())
        });
        for &n in ctx.normals() {
            if form.member(s.quotient_map(n).target()) {
                c.expect(r.is_subgroup_of(ctx.sub(n)), || {
                    format!("{} {} above {n}", s.expr, form.tag())
                });
            }
        }
    }
    Ok(c)
}

/// Group axioms on the table, closure and Lagrange for every lattice
/// member, and for every normal `N`: the projection is a homomorphism,
/// `|G/N| |N| = |G|`, pull-back of push-forward is `HN`, and subgroups of
/// `G/N` correspond to subgroups of `G` above `N`.
pub fn structure_oracle(s: &Session) -> Result<OracleCheck> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let n = g.order();
    let mut c = OracleCheck::new(STRUCTURE);
    for a in 0..n {
        c.expect(g.mul(0, a) == a && g.mul(a, 0) == a, || format!("{} identity", s.expr));
        c.expect(g.mul(a, g.inv(a)) == 0, || format!("{} inverse of {a}", s.expr));
    }
    for (i, h) in ctx.lattice().iter() {
        c.expect(is_closed(g, h.members()) && h.contains(0) && n.is_multiple_of(h.order()), || {
            format!("{} subgroup {i}", s.expr)
        });
    }
    for &k in ctx.normals() {
        let q = s.quotient_map(k);
        let t = q.target();
        let ks = ctx.sub(k);
        c.expect(t.order() * ks.order() == n, || format!("{} |G/N| for {k}", s.expr));
        let hom = (0..n).all(|a| (0..n).all(|b| q.proj(g.mul(a, b)) == t.mul(q.proj(a), q.proj(b))));
        c.expect(hom, || format!("{} projection mod {k}", s.expr));
        for (i, h) in ctx.lattice().iter() {
            let back = q.pull_back(&q.push_forward(h));
            c.expect(back == join_permuting(g, h, ks), || format!("{} HN for {i} mod {k}", s.expr));
        }
        let qctx = s.quotient_ctx(k)?;
        let above = ctx
            .lattice()
            .subgroups()
            .iter()
            .filter(|h| ks.is_subgroup_of(h))
            .count();
        c.expect(above == qctx.len(), || format!("{} correspondence mod {k}", s.expr));
    }
    Ok(c)
}

/// Sylow counts are `≡ 1 (mod p)`, divide `|G|`, and form one conjugacy
/// class.
pub fn sylow_oracle(s: &Session) -> Result<OracleCheck> {
    let ctx = &s.ctx;
    let g = ctx.group();
    let mut c = OracleCheck::new(SYLOW);
    for (p, list) in ctx.sylows() {
        let count = list.len();
        c.expect(count as u64 % p == 1 % p && g.order().is_multiple_of(count), || {
            format!("{} n_{p} = {count}", s.expr)
        });
        let first = ctx.sub(list[0]);
        c.expect(first.order() == g.p_part(*p), || format!("{} |P| for {p}", s.expr));
        let mut conj: Vec<usize> = (0..g.order())
            .map(|x| ctx.index_of(&conjugate(g, first, x)))
            .collect();
        conj.sort_unstable();
        conj.dedup();
        c.expect(conj == *list, || format!("{} Sylow {p}-subgroups not one class", s.expr));
    }
    Ok(c)
}

pub type OracleFn = fn(&Session, u64) -> Result<OracleCheck>;

pub fn all_oracles() -> Vec<(&'static str, OracleFn)> {
    vec![
        (SQN_ORACLE, |s, _| sqn_oracle(s)),
        (U_CENTRAL, |s, _| u_central_oracle(s)),
        (GREEDY_JOIN, |s, _| greedy_join_oracle(s)),
        (CHIEF_TIE_BREAK, tie_break_oracle),
        (HYPERCENTRE_MEMBER, |s, _| hypercentre_member_oracle(s)),
        (RESIDUAL, |s, _| residual_oracle(s)),
        (STRUCTURE, |s, _| structure_oracle(s)),
        (SYLOW, |s, _| sylow_oracle(s)),
    ]
}

/// Runs the named oracles over the configured corpus and merges the
/// results per oracle. A group that cannot be analysed within caps is a
/// mismatch, not a silent pass.
pub fn run_oracles(names: &[&str], cfg: &VerifyConfig) -> Result<Vec<OracleCheck>> {
    let table: Vec<(&str, OracleFn)> = all_oracles()
        .into_iter()
        .filter(|(n, _)| names.contains(n))
        .collect();
    if table.len() != names.len() {
        return Err(Error::UnknownTag(format!("oracle in {names:?}")));
    }
    let corpus = build_corpus(&cfg.corpus, &cfg.caps)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let per_group: Vec<Vec<OracleCheck>> = pool.install(|| {
        corpus
            .par_iter()
            .map(|e| match super::open_session(e, cfg) {
                Ok(s) => table
                    .iter()
                    .map(|(name, f)| {
                        f(&s, cfg.seed).unwrap_or_else(|err| OracleCheck {
                            name: name.to_string(),
                            checked: 1,
                            mismatches: vec![format!("{}: {err}", e.expr)],
                        })
                    })
                    .collect(),
                Err(err) => table
                    .iter()
                    .map(|(name, _)| OracleCheck {
                        name: name.to_string(),
                        checked: 1,
                        mismatches: vec![format!("{}: {err}", e.expr)],
                    })
                    .collect(),
            })
            .collect()
    });
    let mut merged: BTreeMap<String, OracleCheck> = BTreeMap::new();
    for checks in per_group {
        for c in checks {
            let m = merged.entry(c.name.clone()).or_insert_with(|| OracleCheck::new(&c.name));
            m.checked += c.checked;
            m.mismatches.extend(c.mismatches);
        }
    }
    Ok(names.iter().map(|n| merged.remove(*n).unwrap_or_else(|| OracleCheck::new(n))).collect())
}
