//! The `fgt` command line front end.
//!
//! Every command builds an [`Output`], which is rendered as JSON, CSV or
//! an aligned table. Exit codes: 0 success, 1 a checked property fails,
//! 2 usage, parse or cap errors, 3 verification violations, 4 too many
//! skipped instances.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cache::LatticeCache;
use crate::context::GroupContext;
use crate::embedding::{certificate, embedding_predicate, EmbeddingKind};
use crate::error::{Error, Result};
use crate::expr::{build, cycles_to_images, parse_cycle_list};
use crate::formation::{
    chief_series, f_hypercentre, f_residual, is_f_central, is_in_class, ClassTag, Formation,
};
use crate::group::{cycle_notation, Caps, Group};
use crate::named::{named_subgroup, NamedTag};
use crate::subgroup::{generate, generators, Subgroup};
use crate::theorems::corpus::{build_corpus, CorpusConfig};
use crate::theorems::oracles::{all_oracles, run_oracles};
use crate::theorems::{verify_caps, verify_many, vacuity_audit, TheoremId, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_VIOLATIONS: i32 = 3;
pub const EXIT_SKIPS: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fgt", version, about = "Finite group theory engine and verification harness")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, env = "FGT_FORMAT", value_enum, default_value = "table")]
    pub format: Format,
    /// Seed for randomised choices.
    #[arg(long, global = true, env = "FGT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for verification.
    #[arg(long, global = true, env = "FGT_JOBS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Lattice cache directory.
    #[arg(long, global = true, env = "FGT_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Largest group order held as a multiplication table.
    #[arg(long, global = true, env = "FGT_TABLE_CAP",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub table_cap: Option<u64>,
    /// Largest group order for which full subgroup lattices are built.
    #[arg(long, global = true, env = "FGT_LATTICE_CAP",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub lattice_cap: Option<u64>,
    /// Largest number of subgroups in one lattice.
    #[arg(long, global = true, env = "FGT_SUBGROUP_CAP",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub subgroup_cap: Option<u64>,
}

impl GlobalOpts {
    fn caps(&self, base: Caps) -> Caps {
        Caps {
            table_cap: self.table_cap.map_or(base.table_cap, |v| v as usize),
            lattice_cap: self.lattice_cap.map_or(base.lattice_cap, |v| v as usize),
            subgroup_count_cap: self.subgroup_cap.map_or(base.subgroup_count_cap, |v| v as usize),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Default,
    Empty,
}

#[derive(Debug, Args)]
pub struct CorpusOpts {
    /// Largest group order in the corpus.
    #[arg(long, env = "FGT_MAX_ORDER", default_value_t = 100)]
    pub max_order: usize,
    /// `empty` runs on no groups at all.
    #[arg(long, env = "FGT_CORPUS", value_enum, default_value = "default")]
    pub corpus: CorpusKind,
    /// Additional group expressions.
    #[arg(long = "extra", value_name = "EXPR")]
    pub extra: Vec<String>,
}

impl CorpusOpts {
    fn config(&self) -> CorpusConfig {
        let mut c = match self.corpus {
            CorpusKind::Default => CorpusConfig::with_max_order(self.max_order),
            CorpusKind::Empty => CorpusConfig::empty(),
        };
        c.extra = self.extra.clone();
        c
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, classes, named subgroups, chief series and hypercentres.
    Analyze {
        group: String,
        /// Extra formation to report on, next to U, U_p and N_p.
        #[arg(long, env = "FGT_FORMATION")]
        formation: Option<String>,
    },
    /// Lists the subgroup lattice in canonical order.
    Subgroups { group: String },
    /// Evaluates an embedding property for one subgroup.
    Check {
        group: String,
        /// Predicate: qn, sqn, wfsqn, fsqn, fqn, cn, fns, fhn, fnn, supp:<class>.
        kind: String,
        /// Generators as cycles, element labels or element indices.
        #[arg(long, conflicts_with = "index", required_unless_present = "index")]
        gens: Option<String>,
        /// Position in the canonical subgroup list.
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, env = "FGT_FORMATION", default_value = "U")]
        formation: String,
    },
    /// Runs verification suites over the corpus and writes JSON reports.
    Verify {
        /// Suite id, id prefix such as `L2.2`, or `all`.
        selector: String,
        #[command(flatten)]
        corpus: CorpusOpts,
        /// Directory for the report files.
        #[arg(long, env = "FGT_OUT", default_value = "reports")]
        out: PathBuf,
        /// Reports with a larger skipped fraction fail.
        #[arg(long, env = "FGT_SKIP_THRESHOLD", default_value_t = 0.2)]
        skip_threshold: f64,
        /// Largest order for the exhaustive implication scan.
        #[arg(long, default_value_t = 60)]
        impl_max_order: usize,
        /// Also run the cross-check oracles.
        #[arg(long)]
        oracles: bool,
    },
    /// Lists the corpus.
    Corpus {
        #[command(flatten)]
        corpus: CorpusOpts,
    },
    /// Lattice cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Builds and stores lattices for every corpus group.
    Warm {
        #[command(flatten)]
        corpus: CorpusOpts,
    },
    /// Re-derives three random entries and compares them byte for byte.
    Validate,
    /// Removes every entry.
    Purge,
}

/// Rendered result of a command.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    fn pairs(json: Value, pairs: Vec<(String, String)>) -> Output {
        Output {
            json,
            header: vec!["field".into(), "value".into()],
            rows: pairs.into_iter().map(|(a, b)| vec![a, b]).collect(),
        }
    }

    pub fn render(&self, format: Format, w: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let s = serde_json::to_string_pretty(&self.json).map_err(std::io::Error::other)?;
                writeln!(w, "{s}")
            }
            Format::Csv => {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(&self.header)?;
                for r in &self.rows {
                    c.write_record(r)?;
                }
                c.flush()
            }
            Format::Table => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for r in &self.rows {
                    for (i, c) in r.iter().enumerate() {
                        widths[i] = widths[i].max(c.chars().count());
                    }
                }
                let line = |w: &mut dyn Write, cells: &[String]| -> std::io::Result<()> {
                    let n = cells.len();
                    let mut s = String::new();
                    for (i, c) in cells.iter().enumerate() {
                        s.push_str(c);
                        if i + 1 < n {
                            s.push_str(&" ".repeat(widths[i] - c.chars().count() + 2));
                        }
                    }
                    writeln!(w, "{s}")
                };
                line(w, &self.header)?;
                let rule: Vec<String> = widths.iter().map(|&n| "-".repeat(n)).collect();
                line(w, &rule)?;
                for r in &self.rows {
                    line(w, r)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// writes its output. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((output, code)) => match output.render(cli.global.format, out) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_ERROR
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(Output, i32)> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { group, formation } => {
            Ok((analyze(group, formation.as_deref(), &g.caps(Caps::default()))?, EXIT_OK))
        }
        Command::Subgroups { group } => Ok((subgroups(group, &g.caps(Caps::default()))?, EXIT_OK)),
        Command::Check {
            group,
            kind,
            gens,
            index,
            formation,
        } => {
            let sel = match (gens, index) {
                (Some(s), _) => Selector::Gens(s.clone()),
                (None, Some(i)) => Selector::Index(*i),
                (None, None) => return Err(Error::Config("give --gens or --index".into())),
            };
            let (o, holds) = check(group, &sel, kind, formation, &g.caps(Caps::default()))?;
            Ok((o, if holds { EXIT_OK } else { EXIT_FAILS }))
        }
        Command::Verify {
            selector,
            corpus,
            out,
            skip_threshold,
            impl_max_order,
            oracles,
        } => {
            let cfg = VerifyConfig {
                corpus: corpus.config(),
                caps: g.caps(verify_caps()),
                jobs: g.jobs as usize,
                cache_dir: g.cache_dir.clone(),
                impl_max_order: *impl_max_order,
                skip_threshold: *skip_threshold,
                seed: g.seed,
            };
            verify_cmd(selector, &cfg, out, *oracles)
        }
        Command::Corpus { corpus } => Ok((corpus_cmd(&corpus.config(), &g.caps(verify_caps()))?, EXIT_OK)),
        Command::Cache { action } => {
            let dir = g.cache_dir.clone().unwrap_or_else(|| PathBuf::from(".fgt-cache"));
            cache_cmd(action, &LatticeCache::open(dir)?, g.seed, &g.caps(verify_caps()))
        }
    }
}

// ---------------------------------------------------------------------------
// Subgroup display

fn sub_json(g: &Group, h: &Subgroup) -> Value {
    let gens: Vec<String> = generators(g, h).iter().map(|&a| g.label(a)).collect();
    json!({ "order": h.order(), "gens": gens })
}

fn sub_text(g: &Group, h: &Subgroup) -> String {
    let gens: Vec<String> = generators(g, h).iter().map(|&a| g.label(a)).collect();
    if gens.is_empty() {
        "1".to_string()
    } else {
        format!("order {} <{}>", h.order(), gens.join(", "))
    }
}

fn factorization_text(g: &Group) -> String {
    if g.order() == 1 {
        return "1".into();
    }
    g.factorization()
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn join_nums<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------------------
// analyze

pub fn analyze(expr: &str, extra: Option<&str>, caps: &Caps) -> Result<Output> {
    analyze_group(expr, &build(expr, caps)?, extra, caps)
}

/// [`analyze`] for a group that is already built; `name` is only echoed.
pub fn analyze_group(name: &str, g: &Group, extra: Option<&str>, caps: &Caps) -> Result<Output> {
    let g = g.clone();
    let expr = name;
    let mut forms = Formation::standard_for(&g);
    if let Some(tag) = extra {
        let f = Formation::parse(tag)?;
        if !forms.contains(&f) {
            forms.push(f);
        }
    }
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut j = json!({ "group": expr, "order": g.order(), "factorization": factorization_text(&g) });
    pairs.push(("group".into(), expr.into()));
    pairs.push(("order".into(), g.order().to_string()));
    pairs.push(("factorization".into(), factorization_text(&g)));

    let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    j["class_sizes"] = json!(sizes);
    pairs.push(("class_sizes".into(), join_nums(&sizes)));

    let mut tags = vec![NamedTag::Center, NamedTag::Fitting];
    if g.order() <= caps.lattice_cap {
        tags.push(NamedTag::Frattini);
    }
    for p in g.primes() {
        tags.extend([NamedTag::PCore(p), NamedTag::PPrimeCore(p), NamedTag::PResidual(p)]);
    }
    let mut named = serde_json::Map::new();
    for t in tags {
        let h = named_subgroup(&g, t, caps)?;
        named.insert(t.to_string(), sub_json(&g, &h));
        pairs.push((t.to_string(), sub_text(&g, &h)));
    }
    j["named"] = Value::Object(named);

    let series = chief_series(&g);
    let factors = series.factors();
    let mut fj = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let mut central = serde_json::Map::new();
        let mut text = Vec::new();
        for form in &forms {
            let v = match is_f_central(&g, f, form, caps) {
                Ok(b) => json!(b),
                Err(e) => json!(format!("error: {e}")),
            };
            text.push(format!("{}={}", form.tag(), v.as_bool().map_or("?".into(), |b| b.to_string())));
            central.insert(form.tag().to_string(), v);
        }
        fj.push(json!({ "order": f.order(), "upper": sub_json(&g, &f.upper), "central": central }));
        pairs.push((format!("chief_factor[{i}]"), format!("order {}; {}", f.order(), text.join(" "))));
    }
    j["chief_factors"] = Value::Array(fj);
    pairs.push(("chief_factor_orders".into(), join_nums(&series.factor_orders())));

    let mut zj = serde_json::Map::new();
    let mut rj = serde_json::Map::new();
    for form in &forms {
        let z = f_hypercentre(&g, form, caps)?;
        zj.insert(form.tag().to_string(), sub_json(&g, &z));
        pairs.push((format!("Z_{}", form.tag()), sub_text(&g, &z)));
        let r = f_residual(&g, form)?;
        rj.insert(form.tag().to_string(), sub_json(&g, &r));
        pairs.push((format!("residual_{}", form.tag()), sub_text(&g, &r)));
    }
    j["hypercentres"] = Value::Object(zj);
    j["residuals"] = Value::Object(rj);

    let mut classes: Vec<ClassTag> = vec![ClassTag::Nilpotent, ClassTag::Soluble, ClassTag::Supersoluble];
    for p in g.primes() {
        classes.push(ClassTag::PNilpotent(p));
        classes.push(ClassTag::PSupersoluble(p));
    }
    classes.push(ClassTag::SylowTowerSupersoluble);
    let mut cj = serde_json::Map::new();
    for c in classes {
        let b = is_in_class(&g, &c, caps)?;
        cj.insert(c.to_string(), json!(b));
        pairs.push((format!("class {c}"), b.to_string()));
    }
    j["classes"] = Value::Object(cj);

    if g.order() <= caps.lattice_cap {
        let ctx = GroupContext::new(g.clone(), caps)?;
        j["subgroup_count"] = json!(ctx.len());
        j["normal_subgroup_count"] = json!(ctx.normals().len());
        pairs.push(("subgroups".into(), ctx.len().to_string()));
        pairs.push(("normal_subgroups".into(), ctx.normals().len().to_string()));
    }
    Ok(Output::pairs(j, pairs))
}

// ---------------------------------------------------------------------------
// subgroups

pub fn subgroups(expr: &str, caps: &Caps) -> Result<Output> {
    let g = build(expr, caps)?;
    let ctx = GroupContext::new(g, caps)?;
    let g = ctx.group();
    let mut rows = Vec::new();
    let mut list = Vec::new();
    for i in 0..ctx.len() {
        let gens: Vec<String> = ctx.lattice().gens(i).iter().map(|&a| g.label(a)).collect();
        let (normal, sqn) = (ctx.is_normal(i), ctx.is_sqn(i));
        list.push(json!({
            "index": i, "order": ctx.sub(i).order(), "gens": gens, "normal": normal, "sqn": sqn,
        }));
        rows.push(vec![
            i.to_string(),
            ctx.sub(i).order().to_string(),
            normal.to_string(),
            sqn.to_string(),
            gens.join(" "),
        ]);
    }
    Ok(Output {
        json: json!({ "group": expr, "order": g.order(), "count": ctx.len(), "subgroups": list }),
        header: ["index", "order", "normal", "sqn", "gens"].map(String::from).to_vec(),
        rows,
    })
}

// ---------------------------------------------------------------------------
// check

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Gens(String),
    Index(usize),
}

/// Finds the element named by `tok`: a label, a permutation in cycle
/// notation, or an element index.
fn resolve_element(g: &Group, tok: &str) -> Result<usize> {
    let tok = tok.trim();
    if let Some(i) = (0..g.order()).find(|&a| g.label(a) == tok) {
        return Ok(i);
    }
    if tok.starts_with('(') {
        let cycles = parse_cycle_list(tok)?;
        if cycles.len() == 1 {
            let n = cycles[0].iter().flatten().copied().max().unwrap_or(0) as usize;
            let want = cycle_notation(&cycles_to_images(n, &cycles[0])?);
            if let Some(i) = (0..g.order()).find(|&a| g.label(a) == want) {
                return Ok(i);
            }
        }
    }
    if let Ok(i) = tok.parse::<usize>() {
        if i < g.order() {
            return Ok(i);
        }
    }
    Err(Error::NotSubgroup(format!("no element matches {tok:?}")))
}

/// Splits a generator list on top-level commas. Commas inside parentheses
/// belong to a label such as a pair in a direct product.
fn split_gens(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|t| !t.is_empty()).collect()
}

pub fn resolve_selector(ctx: &GroupContext, sel: &Selector) -> Result<usize> {
    match sel {
        Selector::Index(i) if *i < ctx.len() => Ok(*i),
        Selector::Index(i) => Err(Error::NotSubgroup(format!(
            "index {i} out of range ({} subgroups)",
            ctx.len()
        ))),
        Selector::Gens(s) => {
            let g = ctx.group();
            let elems = split_gens(s)
                .into_iter()
                .map(|t| resolve_element(g, t))
                .collect::<Result<Vec<_>>>()?;
            let h = generate(g, elems);
            Ok(ctx.index_of(&h))
        }
    }
}

pub fn check(
    expr: &str,
    sel: &Selector,
    kind: &str,
    formation: &str,
    caps: &Caps,
) -> Result<(Output, bool)> {
    let kind = EmbeddingKind::parse(kind)?;
    let form = Formation::parse(formation)?;
    let g = build(expr, caps)?;
    let ctx = GroupContext::new(g, caps)?;
    let h = resolve_selector(&ctx, sel)?;
    let g = ctx.group();
    let v = embedding_predicate(&ctx, h, &kind, Some(&form))?;
    let mut j = json!({
        "group": expr,
        "subgroup": sub_json(g, ctx.sub(h)),
        "index": h,
        "verdict": v.to_json(),
    });
    let mut pairs = vec![
        ("group".to_string(), expr.to_string()),
        ("subgroup".into(), format!("#{h} {}", sub_text(g, ctx.sub(h)))),
        ("predicate".into(), kind.to_string()),
    ];
    if let Some(f) = &v.formation {
        pairs.push(("formation".into(), f.clone()));
    }
    pairs.push(("holds".into(), v.holds.to_string()));
    if let Some(w) = &v.witness {
        let t = Subgroup::from_set(g, w.subgroup.clone())?;
        let name = if matches!(kind, EmbeddingKind::Supp(_)) { "K" } else { "T" };
        pairs.push((format!("witness {name}"), sub_text(g, &t)));
        j["witness"] = sub_json(g, &t);
        if let Some(p) = &w.product {
            pairs.push(("witness HT".into(), sub_text(g, &Subgroup::from_set(g, p.clone())?)));
        }
        if let Some(c) = &w.core {
            pairs.push(("core H_G".into(), sub_text(g, &Subgroup::from_set(g, c.clone())?)));
        }
        if kind.uses_formation() {
            let c = certificate(&ctx, h, w, &form)?;
            j["certificate"] = c.to_json();
            pairs.push((
                "certificate".into(),
                format!(
                    "|G/H_G| = {}, |(H∩T)H_G/H_G| = {}, |Z_F(G/H_G)| = {}",
                    c.quotient_order,
                    c.intersection.count(),
                    c.hypercentre.count()
                ),
            ));
        }
    }
    pairs.push(("candidates".into(), v.candidates.to_string()));
    Ok((Output::pairs(j, pairs), v.holds))
}

// ---------------------------------------------------------------------------
// verify

pub fn verify_cmd(sel: &str, cfg: &VerifyConfig, out: &PathBuf, oracles: bool) -> Result<(Output, i32)> {
    let ids = TheoremId::select(sel)?;
    let reports = verify_many(&ids, cfg)?;
    fs::create_dir_all(out)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let (mut violations, mut too_many_skips) = (false, false);
    for r in &reports {
        let path = out.join(format!("{}.json", r.theorem));
        fs::write(&path, r.to_json_string() + "\n")?;
        let a = vacuity_audit(r, 10);
        let skips = r.skip_rate() > cfg.skip_threshold;
        violations |= r.violations() > 0;
        too_many_skips |= skips;
        let status = if r.violations() > 0 {
            "VIOLATION"
        } else if skips {
            "SKIPS"
        } else {
            "ok"
        };
        summary.push(json!({
            "theorem": r.theorem.to_string(),
            "report": path.display().to_string(),
            "instances": a.instances,
            "hypothesis_true": a.hypothesis_true,
            "nontrivial": a.nontrivial,
            "low_signal": a.low_signal,
            "violations": r.violations(),
            "skipped": r.skipped(),
            "status": status,
        }));
        rows.push(vec![
            r.theorem.to_string(),
            a.instances.to_string(),
            a.hypothesis_true.to_string(),
            a.nontrivial.to_string(),
            r.violations().to_string(),
            r.skipped().to_string(),
            status.to_string(),
        ]);
    }
    let mut j = json!({ "reports": summary });
    if oracles {
        let names: Vec<&str> = all_oracles().iter().map(|(n, _)| *n).collect();
        let checks = run_oracles(&names, cfg)?;
        let mut oj = Vec::new();
        for c in &checks {
            violations |= !c.mismatches.is_empty();
            oj.push(json!({ "oracle": c.name, "checked": c.checked, "mismatches": c.mismatches }));
            rows.push(vec![
                format!("oracle:{}", c.name),
                c.checked.to_string(),
                String::new(),
                String::new(),
                c.mismatches.len().to_string(),
                String::new(),
                if c.mismatches.is_empty() { "ok" } else { "VIOLATION" }.to_string(),
            ]);
        }
        j["oracles"] = Value::Array(oj);
    }
    let code = if violations {
        EXIT_VIOLATIONS
    } else if too_many_skips {
        EXIT_SKIPS
    } else {
        EXIT_OK
    };
    j["exit_code"] = json!(code);
    let header = ["theorem", "instances", "hypothesis", "nontrivial", "violations", "skipped", "status"];
    Ok((
        Output {
            json: j,
            header: header.map(String::from).to_vec(),
            rows,
        },
        code,
    ))
}

// ---------------------------------------------------------------------------
// corpus and cache

pub fn corpus_cmd(cfg: &CorpusConfig, caps: &Caps) -> Result<Output> {
    let corpus = build_corpus(cfg, caps)?;
    let mut rows = Vec::new();
    let mut list = Vec::new();
    for (i, e) in corpus.iter().enumerate() {
        list.push(json!({ "expr": e.expr, "order": e.group.order(), "abelian": e.group.is_abelian() }));
        rows.push(vec![
            i.to_string(),
            e.expr.clone(),
            e.group.order().to_string(),
            e.group.is_abelian().to_string(),
        ]);
    }
    Ok(Output {
        json: json!({ "size": corpus.len(), "groups": list }),
        header: ["#", "expr", "order", "abelian"].map(String::from).to_vec(),
        rows,
    })
}

pub fn cache_cmd(action: &CacheAction, cache: &LatticeCache, seed: u64, caps: &Caps) -> Result<(Output, i32)> {
    let dir = cache.dir().display().to_string();
    Ok(match action {
        CacheAction::Warm { corpus } => {
            let entries = build_corpus(&corpus.config(), caps)?;
            let built = cache.warm(entries.iter().map(|e| &e.group), caps)?;
            let total = cache.entries()?.len();
            (
                Output::pairs(
                    json!({ "dir": dir, "built": built, "entries": total }),
                    vec![("dir".into(), dir), ("built".into(), built.to_string()), ("entries".into(), total.to_string())],
                ),
                EXIT_OK,
            )
        }
        CacheAction::Validate => {
            let r = cache.validate(seed, caps)?;
            let mut pairs = vec![
                ("dir".to_string(), dir.clone()),
                ("entries".into(), r.entries.to_string()),
                ("checked".into(), r.checked.join(" ")),
            ];
            for m in &r.mismatches {
                pairs.push(("mismatch".into(), m.clone()));
            }
            pairs.push(("passed".into(), r.passed().to_string()));
            let j = json!({
                "dir": dir, "entries": r.entries, "checked": r.checked,
                "mismatches": r.mismatches, "passed": r.passed(),
            });
            (Output::pairs(j, pairs), if r.passed() { EXIT_OK } else { EXIT_FAILS })
        }
        CacheAction::Purge => {
            let n = cache.purge()?;
            (
                Output::pairs(
                    json!({ "dir": dir, "removed": n }),
                    vec![("dir".into(), dir), ("removed".into(), n.to_string())],
                ),
                EXIT_OK,
            )
        }
    })
}
