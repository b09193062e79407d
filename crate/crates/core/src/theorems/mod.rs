//! Verification harness: each statement is a hypothesis and a conclusion
//! evaluated over a corpus of groups.

pub mod corpus;
pub mod oracles;
pub mod session;
mod suites;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::LatticeCache;
use crate::error::{Error, Result};
use crate::group::Caps;
use corpus::{build_corpus, CorpusConfig, CorpusEntry};
pub use session::Session;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

macro_rules! theorem_ids {
    ($($v:ident => $s:literal, $shape:literal, $vac:literal;)*) => {
        #[allow(non_camel_case_types)]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum TheoremId { $($v,)* }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$v,)*];

            pub fn as_str(&self) -> &'static str {
                match self { $(TheoremId::$v => $s,)* }
            }

            pub fn info(&self) -> TheoremInfo {
                match self {
                    $(TheoremId::$v => TheoremInfo { id: *self, shape: $shape, vacuity: $vac },)*
                }
            }
        }
    };
}

theorem_ids! {
    L2_1a => "L2.1a", "(G, F), all N normal", "Z_F(G) and N both nontrivial, N proper";
    L2_1b => "L2.1b", "(G, F), all H", "Z_F(G) ∩ H nontrivial, H proper";
    L2_2_1 => "L2.2.1", "G, all S-quasinormal H", "H not normal";
    L2_2_2 => "L2.2.2", "G, S-quasinormal H and normal N", "H not normal, N nontrivial proper";
    L2_2_3 => "L2.2.3", "G, normal N ≤ H", "N nontrivial, H not normal";
    L2_2_4 => "L2.2.4", "G, S-quasinormal H and any K", "H not normal, K proper, H ∩ K nontrivial";
    L2_2_5 => "L2.2.5", "G, S-quasinormal H", "H_G < H";
    L2_2_6 => "L2.2.6", "G, every p-subgroup H", "H not normal";
    L2_2_7 => "L2.2.7", "G, pairs of S-quasinormal H, K", "H and K not normal";
    L2_3_1 => "L2.3.1", "(G, F), H and normal N of coprime order", "N nontrivial, H not normal";
    L2_3_2 => "L2.3.2", "(G, F), normal N ≤ H", "N nontrivial, H not normal";
    L2_3_3 => "L2.3.3", "(G, F), H ≤ K", "K proper, H not normal";
    L2_4 => "L2.4", "(G, p, π), every nontrivial p-subgroup P", "P not normal, |P| > p";
    L2_5_1 => "L2.5.1", "(G, p)", "Sylow p-subgroup not normal";
    L2_5_2 => "L2.5.2", "(G, p), all N normal", "|N|_p = p";
    L2_6 => "L2.6", "(G, π) with π odd", "more than one Hall π-subgroup";
    L2_7 => "L2.7", "G with F = U, all N normal", "N nontrivial proper";
    L3_1 => "L3.1", "(G, p)", "P not normal with a nontrivial maximal subgroup";
    T3_2 => "T3.2", "(G, p), normal E with G/E p-nilpotent", "E proper, P has a nontrivial maximal subgroup";
    L3_3 => "L3.3", "(G, p)", "P not normal with a nontrivial maximal subgroup";
    T3_4 => "T3.4", "(G, p), normal E with G/E p-nilpotent", "E proper, P has a nontrivial maximal subgroup";
    T3_5 => "T3.5", "G", "some Sylow subgroup is non-cyclic";
    L3_6 => "L3.6", "(G, p)", "P not normal";
    T3_7 => "T3.7", "(G, p), normal E with G/E p-nilpotent", "E proper, P nontrivial";
    T3_8 => "T3.8", "G, normal E with G/E supersoluble", "E proper with a non-cyclic Sylow subgroup";
    S4_IMPL => "S4.IMPL", "(G, F), all H and every special embedding", "H not S-quasinormal";
}

impl TheoremId {
    /// Ids matching a selector: `all`, an exact id, or a prefix ending at
    /// a component boundary (`L2.2` selects `L2.2.1` to `L2.2.7`).
    pub fn select(sel: &str) -> Result<Vec<TheoremId>> {
        if sel == "all" {
            return Ok(TheoremId::ALL.to_vec());
        }
        if let Ok(id) = sel.parse::<TheoremId>() {
            return Ok(vec![id]);
        }
        let v: Vec<TheoremId> = TheoremId::ALL
            .iter()
            .copied()
            .filter(|id| {
                id.as_str()
                    .strip_prefix(sel)
                    .is_some_and(|rest| rest.starts_with('.') || rest.starts_with(['a', 'b']))
            })
            .collect();
        if v.is_empty() {
            Err(Error::UnknownTag(format!("theorem {sel}")))
        } else {
            Ok(v)
        }
    }

    pub fn is_lemma_suite(&self) -> bool {
        use TheoremId::*;
        matches!(
            self,
            L2_1a | L2_1b | L2_2_1 | L2_2_2 | L2_2_3 | L2_2_4 | L2_2_5 | L2_2_6 | L2_2_7
                | L2_3_1 | L2_3_2 | L2_3_3 | L2_5_1 | L2_5_2 | L2_6 | L2_7
        )
    }

    pub fn is_main_suite(&self) -> bool {
        use TheoremId::*;
        matches!(self, L3_1 | T3_2 | L3_3 | T3_4 | T3_5 | L3_6 | T3_7 | T3_8)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<TheoremId> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownTag(format!("theorem {s}")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TheoremInfo {
    pub id: TheoremId,
    /// What one instance quantifies over.
    pub shape: &'static str,
    /// What makes an instance with a true hypothesis count as nontrivial.
    pub vacuity: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub corpus: CorpusConfig,
    pub caps: Caps,
    /// Worker threads; not part of the report snapshot.
    #[serde(skip)]
    pub jobs: usize,
    /// Lattice cache; not part of the report snapshot.
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    /// Largest order for the exhaustive special-embedding scan.
    pub impl_max_order: usize,
    /// Reports with a larger fraction of skipped instances fail.
    pub skip_threshold: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            corpus: CorpusConfig::default(),
            caps: verify_caps(),
            jobs: 1,
            cache_dir: None,
            impl_max_order: 60,
            skip_threshold: 0.2,
            seed: 0,
        }
    }
}

/// Caps for corpus runs. The table cap is raised so that chief factor
/// semidirect products of `A5` (order 3600) can be formed.
pub fn verify_caps() -> Caps {
    Caps {
        table_cap: 4096,
        ..Caps::default()
    }
}

impl VerifyConfig {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub group: String,
    pub params: Value,
    pub hypothesis: bool,
    pub conclusion: bool,
    pub nontrivial: bool,
    pub skipped: Option<String>,
    pub witnesses: Value,
}

impl Instance {
    pub fn skipped(group: &str, params: Value, reason: String) -> Instance {
        Instance {
            group: group.to_string(),
            params,
            hypothesis: false,
            conclusion: false,
            nontrivial: false,
            skipped: Some(reason),
            witnesses: Value::Null,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.skipped.is_none() && self.hypothesis && !self.conclusion
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "group": self.group,
            "params": self.params,
            "hypothesis": self.hypothesis,
            "conclusion": self.conclusion,
            "nontrivial": self.nontrivial,
            "witnesses": self.witnesses,
        });
        if let Some(r) = &self.skipped {
            v["skipped"] = json!(r);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub theorem: TheoremId,
    pub engine: String,
    pub config: Value,
    pub corpus_size: usize,
    pub instances: Vec<Instance>,
}

impl Report {
    pub fn violations(&self) -> usize {
        self.instances.iter().filter(|i| i.is_violation()).count()
    }

    pub fn nontrivial(&self) -> usize {
        self.instances
            .iter()
            .filter(|i| i.skipped.is_none() && i.hypothesis && i.nontrivial)
            .count()
    }

    pub fn hypothesis_true(&self) -> usize {
        self.instances
            .iter()
            .filter(|i| i.skipped.is_none() && i.hypothesis)
            .count()
    }

    pub fn skipped(&self) -> usize {
        self.instances.iter().filter(|i| i.skipped.is_some()).count()
    }

    pub fn skip_rate(&self) -> f64 {
        if self.instances.is_empty() {
            0.0
        } else {
            self.skipped() as f64 / self.instances.len() as f64
        }
    }

    pub fn skip_reasons(&self) -> Vec<(String, String)> {
        self.instances
            .iter()
            .filter_map(|i| i.skipped.as_ref().map(|r| (i.group.clone(), r.clone())))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem.as_str(),
            "engine": self.engine,
            "config": self.config,
            "corpus_size": self.corpus_size,
            "instances": self.instances.iter().map(Instance::to_json).collect::<Vec<_>>(),
            "counts": {
                "instances": self.instances.len(),
                "hypothesis_true": self.hypothesis_true(),
                "nontrivial": self.nontrivial(),
                "skipped": self.skipped(),
                "violations": self.violations(),
            },
            "violations": self.violations(),
            "nontrivial": self.nontrivial(),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VacuityAudit {
    pub theorem: String,
    pub instances: usize,
    pub hypothesis_true: usize,
    pub nontrivial: usize,
    pub floor: usize,
    pub low_signal: bool,
}

pub fn vacuity_audit(report: &Report, floor: usize) -> VacuityAudit {
    let nontrivial = report.nontrivial();
    VacuityAudit {
        theorem: report.theorem.to_string(),
        instances: report.instances.len(),
        hypothesis_true: report.hypothesis_true(),
        nontrivial,
        floor,
        low_signal: nontrivial < floor,
    }
}

/// Evaluates the given suites on one session.
pub fn verify_session(ids: &[TheoremId], s: &Session, cfg: &VerifyConfig) -> Vec<Vec<Instance>> {
    ids.iter().map(|&id| suites::run(id, s, cfg)).collect()
}

/// Session for a corpus entry, through the lattice cache when configured.
pub fn open_session(e: &CorpusEntry, cfg: &VerifyConfig) -> Result<Session> {
    match &cfg.cache_dir {
        None => Session::new(&e.expr, e.group.clone(), &cfg.caps),
        Some(dir) => {
            let (lat, _) = LatticeCache::open(dir)?.load_or_build(&e.group, &cfg.caps)?;
            Ok(Session::with_lattice(&e.expr, e.group.clone(), lat, &cfg.caps))
        }
    }
}

fn verify_entry(ids: &[TheoremId], e: &CorpusEntry, cfg: &VerifyConfig) -> Vec<Vec<Instance>> {
    match open_session(e, cfg) {
        Ok(s) => verify_session(ids, &s, cfg),
        Err(err) => ids
            .iter()
            .map(|_| vec![Instance::skipped(&e.expr, json!({}), err.to_string())])
            .collect(),
    }
}

/// Runs the suites over a prepared corpus, one session per group.
pub fn verify_corpus(ids: &[TheoremId], corpus: &[CorpusEntry], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let per_group: Vec<Vec<Vec<Instance>>> =
        pool.install(|| corpus.par_iter().map(|e| verify_entry(ids, e, cfg)).collect());
    let config = cfg.to_json();
    let mut reports: Vec<Report> = ids
        .iter()
        .map(|&id| Report {
            theorem: id,
            engine: ENGINE_VERSION.to_string(),
            config: config.clone(),
            corpus_size: corpus.len(),
            instances: Vec::new(),
        })
        .collect();
    for group in per_group {
        for (r, inst) in reports.iter_mut().zip(group) {
            r.instances.extend(inst);
        }
    }
    Ok(reports)
}

pub fn verify_many(ids: &[TheoremId], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    let corpus = build_corpus(&cfg.corpus, &cfg.caps)?;
    verify_corpus(ids, &corpus, cfg)
}

pub fn verify(id: TheoremId, cfg: &VerifyConfig) -> Result<Report> {
    Ok(verify_many(&[id], cfg)?.remove(0))
}
