//! Deterministic corpora of small groups built from the expression families.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::build;
use crate::group::{Caps, Fingerprint, Group};
use crate::numbers::{factorize, is_prime};
use crate::subgroup::normal_subgroups;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cyclic,
    Elementary,
    Abelian,
    Dihedral,
    Dicyclic,
    Symmetric,
    Alternating,
    Special,
    Products,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Cyclic,
        Family::Elementary,
        Family::Abelian,
        Family::Dihedral,
        Family::Dicyclic,
        Family::Symmetric,
        Family::Alternating,
        Family::Special,
        Family::Products,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::Elementary => "elementary",
            Family::Abelian => "abelian",
            Family::Dihedral => "dihedral",
            Family::Dicyclic => "dicyclic",
            Family::Symmetric => "symmetric",
            Family::Alternating => "alternating",
            Family::Special => "special",
            Family::Products => "products",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown corpus family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub max_order: usize,
    pub families: Vec<Family>,
    pub extra: Vec<String>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_order: 100,
            families: Family::ALL.to_vec(),
            extra: Vec::new(),
        }
    }
}

impl CorpusConfig {
    pub fn with_max_order(max_order: usize) -> Self {
        CorpusConfig {
            max_order,
            ..Default::default()
        }
    }

    /// No families and no extra groups.
    pub fn empty() -> Self {
        CorpusConfig {
            max_order: 0,
            families: Vec::new(),
            extra: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub expr: String,
    pub group: Group,
}

/// Abelian invariant-factor lists `d1 | d2 | … | dk` with `k ≥ 2`, `d1 ≥ 2`.
fn invariant_factor_lists(max: usize) -> Vec<Vec<usize>> {
    fn extend(cur: &mut Vec<usize>, prod: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        let last = *cur.last().unwrap();
        let mut d = last;
        while prod * d <= max {
            cur.push(d);
            extend(cur, prod * d, max, out);
            cur.pop();
            d += last;
        }
    }
    let mut out = Vec::new();
    for d1 in 2..=max {
        let mut cur = vec![d1];
        extend(&mut cur, d1, max, &mut out);
    }
    out
}

fn product_expr(factors: &[usize]) -> String {
    factors
        .iter()
        .map(|d| format!("C({d})"))
        .collect::<Vec<_>>()
        .join("x")
}

/// Candidate expressions with their orders, in family order.
fn candidates(cfg: &CorpusConfig) -> Vec<(String, usize)> {
    let max = cfg.max_order;
    let mut out: Vec<(String, usize)> = Vec::new();
    let mut nonabelian: Vec<(String, usize)> = Vec::new();
    let mut abelian_small: Vec<(String, usize)> = Vec::new();
    // named groups first so they win the deduplication
    let order = [
        Family::Cyclic,
        Family::Elementary,
        Family::Abelian,
        Family::Symmetric,
        Family::Alternating,
        Family::Special,
        Family::Dihedral,
        Family::Dicyclic,
    ];
    for fam in order.iter().filter(|f| cfg.families.contains(f)) {
        match fam {
            Family::Cyclic => {
                for n in 1..=max {
                    out.push((format!("C({n})"), n));
                }
            }
            Family::Elementary => {
                for p in (2..=max as u64).filter(|&p| is_prime(p)) {
                    let mut k = 2u32;
                    while (p as usize).pow(k) <= max {
                        out.push((format!("E({p},{k})"), (p as usize).pow(k)));
                        k += 1;
                    }
                }
            }
            Family::Abelian => {
                for f in invariant_factor_lists(max) {
                    let n = f.iter().product();
                    out.push((product_expr(&f), n));
                }
            }
            Family::Dihedral => {
                for n in 3..=max / 2 {
                    nonabelian.push((format!("D({})", 2 * n), 2 * n));
                }
            }
            Family::Dicyclic => {
                for n in 2..=max / 4 {
                    let name = if n == 2 { "Q8".to_string() } else { format!("Dic({})", 4 * n) };
                    nonabelian.push((name, 4 * n));
                }
            }
            Family::Symmetric => {
                for (n, o) in [(3usize, 6usize), (4, 24), (5, 120)] {
                    if o <= max {
                        nonabelian.push((format!("S({n})"), o));
                    }
                }
            }
            Family::Alternating => {
                for (n, o) in [(4usize, 12usize), (5, 60)] {
                    if o <= max {
                        nonabelian.push((format!("A({n})"), o));
                    }
                }
            }
            Family::Special => {
                for (s, o) in [("Q8", 8usize), ("SL23", 24), ("M16", 16)] {
                    if o <= max {
                        nonabelian.push((s.to_string(), o));
                    }
                }
            }
            Family::Products => unreachable!(),
        }
    }
    if cfg.families.contains(&Family::Products) {
        for n in 2..=max {
            abelian_small.push((format!("C({n})"), n));
        }
        for f in invariant_factor_lists(max) {
            abelian_small.push((product_expr(&f), f.iter().product()));
        }
        let bases = nonabelian.clone();
        let mut products = Vec::new();
        for (b, bo) in &bases {
            for (a, ao) in &abelian_small {
                if bo * ao <= max {
                    products.push((format!("{b}x{a}"), bo * ao));
                }
            }
        }
        for (i, (b1, o1)) in bases.iter().enumerate() {
            for (b2, o2) in &bases[i..] {
                if o1 * o2 <= max {
                    products.push((format!("{b1}x{b2}"), o1 * o2));
                }
            }
        }
        nonabelian.extend(products);
    }
    out.extend(nonabelian);
    out
}

#[derive(PartialEq, Eq, Hash)]
struct Key {
    fingerprint: Fingerprint,
    normal_orders: Vec<usize>,
}

/// Builds the corpus: every family member of order at most `max_order`
/// plus the extra expressions, deduplicated by an invariant fingerprint
/// (first name wins) and sorted by order, then expression.
pub fn build_corpus(cfg: &CorpusConfig, caps: &Caps) -> Result<Vec<CorpusEntry>> {
    let mut seen: HashSet<Key> = HashSet::new();
    let mut out = Vec::new();
    let mut cands = candidates(cfg);
    for e in &cfg.extra {
        let g = build(e, caps)?;
        let n = g.order();
        cands.push((e.clone(), n));
    }
    for (expr, n) in cands {
        if n > cfg.max_order && !cfg.extra.contains(&expr) {
            continue;
        }
        let group = build(&expr, caps)?;
        let mut normal_orders: Vec<usize> =
            normal_subgroups(&group).iter().map(|s| s.order()).collect();
        normal_orders.sort_unstable();
        let key = Key {
            fingerprint: group.fingerprint(),
            normal_orders,
        };
        if seen.insert(key) {
            out.push(CorpusEntry { expr, group });
        }
    }
    out.sort_by(|a, b| (a.group.order(), &a.expr).cmp(&(b.group.order(), &b.expr)));
    Ok(out)
}

/// Distinct prime divisors, for convenience in suites.
pub fn primes_of(n: usize) -> Vec<u64> {
    factorize(n as u64).into_iter().map(|(p, _)| p).collect()
}
