//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fingroup::context::GroupContext;
use fingroup::embedding::{embedding_predicate, EmbeddingKind, Replayer};
use fingroup::expr::build;
use fingroup::formation::{f_hypercentre, f_residual, Formation};
use fingroup::subgroup::generate;
use fingroup::theorems::corpus::{build_corpus, CorpusConfig};
use fingroup::theorems::oracles::{run_oracles, GREEDY_JOIN, SQN_ORACLE, STRUCTURE, SYLOW, U_CENTRAL};
use fingroup::theorems::{vacuity_audit, verify_caps, verify_many, Report, TheoremId, VerifyConfig};
use fingroup::{Caps, Group};

struct Line {
    id: usize,
    ok: bool,
    detail: String,
}

fn line(id: usize, ok: bool, detail: impl Into<String>) -> Line {
    Line { id, ok, detail: detail.into() }
}

fn config() -> VerifyConfig {
    VerifyConfig {
        corpus: CorpusConfig::with_max_order(100),
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..Default::default()
    }
}

fn ids(pred: impl Fn(&TheoremId) -> bool) -> Vec<TheoremId> {
    TheoremId::ALL.iter().copied().filter(pred).collect()
}

fn render(reports: &[Report]) -> Vec<String> {
    reports.iter().map(Report::to_json_string).collect()
}

// ---------------------------------------------------------------------------
// Naive helpers, independent of the lattice code.

fn closure(g: &Group, gens: &[usize]) -> Vec<usize> {
    let mut set = BTreeSet::from([0usize]);
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// All subgroups generated by at most two elements.
fn two_generated(g: &Group) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in a..n {
            out.insert(closure(g, &[a, b]));
        }
    }
    out
}

fn product(g: &Group, h: &[usize], k: &[usize]) -> BTreeSet<usize> {
    h.iter().flat_map(|&a| k.iter().map(move |&b| g.mul(a, b))).collect()
}

fn naive_normal(g: &Group, h: &[usize]) -> bool {
    let set: BTreeSet<usize> = h.iter().copied().collect();
    (0..g.order()).all(|x| h.iter().all(|&a| set.contains(&g.conj(a, x))))
}

fn element(g: &Group, label: &str) -> usize {
    (0..g.order()).find(|&a| g.label(a) == label).expect(label)
}

// ---------------------------------------------------------------------------

fn criterion_1(lemmas: &[Report], elapsed: Duration) -> Line {
    let v: usize = lemmas.iter().map(Report::violations).sum();
    let s: usize = lemmas.iter().map(Report::skipped).sum();
    let n: usize = lemmas.iter().map(|r| r.instances.len()).sum();
    let ok = v == 0 && s == 0 && n > 0 && elapsed <= Duration::from_secs(600);
    line(
        1,
        ok,
        format!(
            "{} lemma suites, {n} instances, {v} violations, {s} skips, {:.1}s",
            lemmas.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(mains: &[Report]) -> Line {
    let v: usize = mains.iter().map(Report::violations).sum();
    let mut ok = v == 0 && mains.iter().all(|r| r.skipped() == 0);
    let mut floors = Vec::new();
    for r in mains {
        if matches!(r.theorem, TheoremId::L3_1 | TheoremId::T3_5 | TheoremId::L3_6) {
            let a = vacuity_audit(r, 10);
            ok &= !a.low_signal;
            floors.push(format!("{}={}", a.theorem, a.nontrivial));
        }
    }
    line(2, ok, format!("{} theorem suites, {v} violations, nontrivial {}", mains.len(), floors.join(" ")))
}

fn criterion_3(implication: &Report, cfg: &VerifyConfig) -> Line {
    let v = implication.violations();
    let positives = implication.hypothesis_true();
    // Replay every positive special verdict and its weak verdict on the
    // groups of order at most 24, outside the suite.
    let corpus = build_corpus(&CorpusConfig::with_max_order(24), &cfg.caps).unwrap();
    let mut replayed = 0usize;
    let mut failures = Vec::new();
    for e in &corpus {
        let ctx = GroupContext::new(e.group.clone(), &cfg.caps).unwrap();
        let g = ctx.group();
        for form in Formation::standard_for(g) {
            let mut rep = Replayer::new();
            for h in 0..ctx.len() {
                for kind in EmbeddingKind::special_cases() {
                    let sv = embedding_predicate(&ctx, h, &kind, Some(&form)).unwrap();
                    if !sv.holds {
                        continue;
                    }
                    let w = embedding_predicate(&ctx, h, &EmbeddingKind::Wfsqn, Some(&form)).unwrap();
                    let ok = w.holds
                        && rep.replay(&ctx, ctx.sub(h), &sv, Some(&form)).unwrap()
                        && rep.replay(&ctx, ctx.sub(h), &w, Some(&form)).unwrap()
                        && set_level_witness_ok(&ctx, h, &w);
                    replayed += 1;
                    if !ok {
                        failures.push(format!("{} #{h} {kind} {}", e.expr, form.tag()));
                    }
                }
            }
        }
    }
    line(
        3,
        v == 0 && implication.skipped() == 0 && positives > 0 && failures.is_empty() && replayed > 0,
        format!(
            "{} instances with positives {positives}, {v} violations; {replayed} witnesses replayed, {} failed",
            implication.instances.len(),
            failures.len()
        ),
    )
}

/// `T` and `HT` permute with every Sylow subgroup, `H ∩ T` lies in the
/// recorded hypercentre preimage, which contains the core.
fn set_level_witness_ok(ctx: &GroupContext, h: usize, w: &fingroup::embedding::EmbeddingVerdict) -> bool {
    let g = ctx.group();
    let Some(wit) = &w.witness else { return false };
    let hs = ctx.sub(h).elements();
    let ts: Vec<usize> = wit.subgroup.iter().collect();
    let ht: Vec<usize> = product(g, &hs, &ts).into_iter().collect();
    let sylows: Vec<Vec<usize>> = ctx
        .sylows()
        .iter()
        .flat_map(|(_, v)| v.iter().map(|&i| ctx.sub(i).elements()))
        .collect();
    let permutes = |x: &[usize]| sylows.iter().all(|p| product(g, x, p) == product(g, p, x));
    let inter_ok = match &wit.hypercentre {
        None => hs.iter().filter(|a| wit.subgroup.contains(**a)).all(|&a| {
            ctx.sub(ctx.core(h)).contains(a)
        }),
        Some(z) => {
            let core = ctx.sub(ctx.core(h));
            hs.iter().filter(|a| wit.subgroup.contains(**a)).all(|&a| z.contains(a))
                && core.elements().iter().all(|&a| z.contains(a))
        }
    };
    permutes(&ts) && permutes(&ht) && inter_ok
}

fn criterion_4(cfg: &VerifyConfig) -> Line {
    let checks = run_oracles(&[SQN_ORACLE, U_CENTRAL, GREEDY_JOIN], cfg).unwrap();
    let ok = checks.iter().all(|c| c.mismatches.is_empty() && c.checked > 0);
    let parts: Vec<String> = checks
        .iter()
        .map(|c| format!("{} {}/{} mismatches", c.name, c.mismatches.len(), c.checked))
        .collect();
    line(4, ok, parts.join(", "))
}

fn criterion_5() -> Line {
    let caps = Caps::default();
    let mut bad = Vec::new();
    for (expr, want) in [("A(4)", 10), ("Q8", 6), ("D(8)", 10), ("S(4)", 30)] {
        let g = build(expr, &caps).unwrap();
        let ctx = GroupContext::new(g.clone(), &caps).unwrap();
        let naive = two_generated(&g);
        let engine: BTreeSet<Vec<usize>> = (0..ctx.len()).map(|i| ctx.sub(i).elements()).collect();
        if naive.len() != want || engine != naive {
            bad.push(format!("{expr}: engine {} naive {} want {want}", engine.len(), naive.len()));
        }
    }

    let a4 = build("A(4)", &caps).unwrap();
    let ctx = GroupContext::new(a4.clone(), &caps).unwrap();
    let subs = two_generated(&a4);
    let sylows: Vec<&Vec<usize>> = subs.iter().filter(|s| s.len() == 4 || s.len() == 3).collect();
    let naive_sqn: BTreeSet<usize> = subs
        .iter()
        .filter(|h| sylows.iter().all(|p| product(&a4, h, p) == product(&a4, p, h)))
        .map(Vec::len)
        .collect();
    let engine_sqn: Vec<usize> = (0..ctx.len()).filter(|&i| ctx.is_sqn(i)).map(|i| ctx.sub(i).order()).collect();
    if engine_sqn != vec![1, 4, 12] || naive_sqn != BTreeSet::from([1, 4, 12]) {
        bad.push(format!("sqn(A4) engine {engine_sqn:?} naive {naive_sqn:?}"));
    }

    let u = Formation::supersoluble();
    let u2 = Formation::p_supersoluble(2);
    let s3 = build("S(3)", &caps).unwrap();
    let s4 = build("S(4)", &caps).unwrap();
    let checks = [
        ("Z_U(S3)", f_hypercentre(&s3, &u, &caps).unwrap().order(), 6),
        ("Z_U(A4)", f_hypercentre(&a4, &u, &caps).unwrap().order(), 1),
        ("Z_U_2(A4)", f_hypercentre(&a4, &u2, &caps).unwrap().order(), 1),
    ];
    for (name, got, want) in checks {
        if got != want {
            bad.push(format!("{name} has order {got}"));
        }
    }
    let residual = f_residual(&s4, &u).unwrap();
    let v4: Vec<usize> = ["()", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"].iter().map(|l| element(&s4, l)).collect();
    let mut v4_sorted = v4.clone();
    v4_sorted.sort_unstable();
    if residual.elements() != v4_sorted {
        bad.push(format!("S4 residual has order {}", residual.order()));
    }

    let h = generate(&a4, [element(&a4, "(1 2)(3 4)")]);
    let hi = ctx.index_of(&h);
    let wf = embedding_predicate(&ctx, hi, &EmbeddingKind::Wfsqn, Some(&u2)).unwrap();
    let supp = EmbeddingKind::parse("supp:p_nilpotent:2").unwrap();
    let sp = embedding_predicate(&ctx, hi, &supp, None).unwrap();
    // Naively: the only supplement of H is A4, which has no normal
    // subgroup of order 3 and so no normal 2-complement.
    let hs = h.elements();
    let supplements: Vec<&Vec<usize>> = subs.iter().filter(|k| product(&a4, &hs, k).len() == 12).collect();
    let naive_p_nilpotent = supplements
        .iter()
        .any(|k| subs.iter().any(|n| n.len() == 3 && n.iter().all(|x| k.contains(x)) && normal_in(&a4, k, n)));
    if wf.holds || sp.holds || supplements.len() != 1 || naive_p_nilpotent {
        bad.push(format!("<(1 2)(3 4)>: wfsqn {} supp {}", wf.holds, sp.holds));
    }
    let ok = bad.is_empty();
    line(5, ok, if ok { "all fixtures match".into() } else { bad.join("; ") })
}

fn normal_in(g: &Group, k: &[usize], n: &[usize]) -> bool {
    let set: BTreeSet<usize> = n.iter().copied().collect();
    k.iter().all(|&x| n.iter().all(|&a| set.contains(&g.conj(a, x))))
}

fn criterion_6(first: &[String], cfg: &VerifyConfig) -> Line {
    let again = render(&verify_many(TheoremId::ALL, cfg).unwrap());
    let repeat_ok = again == first;
    let dir = tempfile::tempdir().unwrap();
    let cached = VerifyConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        ..cfg.clone()
    };
    let t = Instant::now();
    let cold = render(&verify_many(TheoremId::ALL, &cached).unwrap());
    let cold_time = t.elapsed();
    let t = Instant::now();
    let warm = render(&verify_many(TheoremId::ALL, &cached).unwrap());
    let warm_time = t.elapsed();
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    let ok = repeat_ok && cold == first && warm == first && entries > 0;
    line(
        6,
        ok,
        format!(
            "repeat identical {repeat_ok}, cold cache identical {}, warm cache identical {} ({entries} entries, cold {:.1}s warm {:.1}s)",
            cold == first,
            warm == first,
            cold_time.as_secs_f64(),
            warm_time.as_secs_f64()
        ),
    )
}

fn criterion_7(cfg: &VerifyConfig) -> Line {
    let checks = run_oracles(&[STRUCTURE, SYLOW], cfg).unwrap();
    let mut ok = checks.iter().all(|c| c.mismatches.is_empty() && c.checked > 0);
    let corpus = build_corpus(&cfg.corpus, &cfg.caps).unwrap();
    let mut primes = 0usize;
    let mut bad = Vec::new();
    for e in &corpus {
        let ctx = GroupContext::new(e.group.clone(), &cfg.caps).unwrap();
        let g = ctx.group();
        for (p, list) in ctx.sylows() {
            primes += 1;
            let first = ctx.sub(list[0]).elements();
            let conjugates: BTreeSet<Vec<usize>> = (0..g.order())
                .map(|x| {
                    let mut v: Vec<usize> = first.iter().map(|&a| g.conj(a, x)).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            let listed: BTreeSet<Vec<usize>> = list.iter().map(|&i| ctx.sub(i).elements()).collect();
            let right_order = list.iter().all(|&i| ctx.sub(i).order() == g.p_part(*p));
            if list.len() as u64 % p != 1 || conjugates != listed || !right_order {
                bad.push(format!("{} p={p}", e.expr));
            }
        }
        if !naive_normal(g, &ctx.sub(ctx.whole()).elements()) {
            bad.push(format!("{} whole group", e.expr));
        }
    }
    ok &= bad.is_empty();
    let parts: Vec<String> = checks
        .iter()
        .map(|c| format!("{} {}/{} mismatches", c.name, c.mismatches.len(), c.checked))
        .collect();
    line(
        7,
        ok,
        format!("{}; {primes} (group, prime) Sylow checks, {} failures", parts.join(", "), bad.len()),
    )
}

fn main() {
    let cfg = config();
    assert_eq!(cfg.caps, verify_caps());
    let mut lines = Vec::new();

    let t = Instant::now();
    let lemmas = verify_many(&ids(|t| t.as_str().starts_with("L2")), &cfg).unwrap();
    let lemma_time = t.elapsed();
    let mains = verify_many(&ids(TheoremId::is_main_suite), &cfg).unwrap();
    let implication = verify_many(&[TheoremId::S4_IMPL], &cfg).unwrap().remove(0);
    lines.push(criterion_1(&lemmas, lemma_time));
    lines.push(criterion_2(&mains));
    lines.push(criterion_3(&implication, &cfg));
    lines.push(criterion_4(&cfg));
    lines.push(criterion_5());

    // Reports of the first run in canonical suite order.
    let mut first: Vec<Report> = lemmas.into_iter().chain(mains).chain([implication]).collect();
    first.sort_by_key(|r| r.theorem);
    lines.push(criterion_6(&render(&first), &cfg));
    lines.push(criterion_7(&cfg));

    let mut all_ok = true;
    for l in &lines {
        all_ok &= l.ok;
        println!("criterion {}: {} - {}", l.id, if l.ok { "PASS" } else { "FAIL" }, l.detail);
    }
    if !all_ok {
        std::process::exit(1);
    }
}
