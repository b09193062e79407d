//! On-disk lattice cache, content-addressed by the SHA-256 of the group
//! table.
//!
//! One JSON record per group holds the table, every subgroup as a hex bit
//! vector with its generators, the normality flags and a SHA-256 over that
//! payload. A record is trusted only if the payload digest matches, the
//! table hashes to the file name, and three randomly chosen members are
//! closed under multiplication. Anything else is purged and rebuilt.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::{Caps, Group, GroupJson};
use crate::lattice::SubgroupLattice;
use crate::subgroup::{is_closed, is_normal, Subgroup};

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Record {
    version: u32,
    table_sha256: String,
    group: GroupJson,
    subgroups: Vec<String>,
    gens: Vec<Vec<usize>>,
    normal: Vec<bool>,
    payload_sha256: String,
}

#[derive(Serialize)]
struct Payload<'a> {
    version: u32,
    table_sha256: &'a str,
    subgroups: &'a [String],
    gens: &'a [Vec<usize>],
    normal: &'a [bool],
}

/// What happened on a lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheEvent {
    Hit,
    Miss,
    /// The stored record failed validation, was removed and rebuilt.
    Repaired(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub entries: usize,
    pub checked: Vec<String>,
    pub mismatches: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// SHA-256 of the order and the row-major table, little-endian `u32`s.
pub fn table_digest(g: &Group) -> String {
    let mut h = Sha256::new();
    h.update((g.order() as u64).to_le_bytes());
    for &x in g.raw_table() {
        h.update(x.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn payload_digest(r: &Record) -> String {
    let p = Payload {
        version: r.version,
        table_sha256: &r.table_sha256,
        subgroups: &r.subgroups,
        gens: &r.gens,
        normal: &r.normal,
    };
    let bytes = serde_json::to_vec(&p).expect("payload serializes");
    hex::encode(Sha256::digest(bytes))
}

fn encode(g: &Group, lat: &SubgroupLattice) -> Vec<u8> {
    let mut r = Record {
        version: CACHE_VERSION,
        table_sha256: table_digest(g),
        group: g.to_json(),
        subgroups: lat.subgroups().iter().map(|s| s.members().to_hex()).collect(),
        gens: (0..lat.len()).map(|i| lat.gens(i).to_vec()).collect(),
        normal: lat.subgroups().iter().map(|s| is_normal(g, s)).collect(),
        payload_sha256: String::new(),
    };
    r.payload_sha256 = payload_digest(&r);
    let mut bytes = serde_json::to_vec(&r).expect("record serializes");
    bytes.push(b'\n');
    bytes
}

fn seed_from_digest(d: &str) -> u64 {
    u64::from_str_radix(&d[..16], 16).unwrap_or(0)
}

#[derive(Debug, Clone)]
pub struct LatticeCache {
    dir: PathBuf,
}

impl LatticeCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<LatticeCache> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(LatticeCache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, g: &Group) -> PathBuf {
        self.dir.join(format!("{}.json", table_digest(g)))
    }

    /// Record files currently in the cache, sorted by name.
    pub fn entries(&self) -> Result<Vec<PathBuf>> {
        let mut v: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        Ok(v)
    }

    /// Decodes and validates a record for `g` (when given) from raw bytes.
    fn decode(bytes: &[u8], expect_digest: Option<&str>) -> Result<(Group, SubgroupLattice)> {
        let bad = |m: &str| Error::Malformed(format!("cache record: {m}"));
        let r: Record = serde_json::from_slice(bytes).map_err(|e| bad(&e.to_string()))?;
        if r.version != CACHE_VERSION {
            return Err(bad("version"));
        }
        if payload_digest(&r) != r.payload_sha256 {
            return Err(bad("payload digest mismatch"));
        }
        let g = Group::from_json(&r.group)?;
        let digest = table_digest(&g);
        if digest != r.table_sha256 || expect_digest.is_some_and(|d| d != digest) {
            return Err(bad("table digest mismatch"));
        }
        let n = g.order();
        let subs = r
            .subgroups
            .iter()
            .map(|h| ElemSet::from_hex(n, h).map(Subgroup::from_set_unchecked))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("subgroup encoding"))?;
        if r.normal.len() != subs.len() {
            return Err(bad("flag count"));
        }
        let mut idx: Vec<usize> = (0..subs.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed_from_digest(&digest)));
        for &i in idx.iter().take(3) {
            if !is_closed(&g, subs[i].members()) || !subs[i].contains(0) {
                return Err(bad(&format!("member {i} is not closed")));
            }
            if is_normal(&g, &subs[i]) != r.normal[i] {
                return Err(bad(&format!("normality flag of member {i}")));
            }
        }
        let lat = SubgroupLattice::from_stored(subs, r.gens).map_err(|e| bad(&e.to_string()))?;
        Ok((g, lat))
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    /// Builds and stores the lattice of `g`, replacing any record.
    pub fn store(&self, g: &Group, caps: &Caps) -> Result<SubgroupLattice> {
        let lat = SubgroupLattice::build(g, caps)?;
        self.write_atomic(&self.path_for(g), &encode(g, &lat))?;
        Ok(lat)
    }

    /// Returns the cached lattice of `g`, building it on a miss and
    /// rebuilding it when the record fails validation.
    pub fn load_or_build(&self, g: &Group, caps: &Caps) -> Result<(SubgroupLattice, CacheEvent)> {
        let path = self.path_for(g);
        match fs::read(&path) {
            Ok(bytes) => match LatticeCache::decode(&bytes, Some(&table_digest(g))) {
                Ok((_, lat)) => Ok((lat, CacheEvent::Hit)),
                Err(e) => {
                    warn!("purging corrupt cache entry {}: {e}", path.display());
                    let _ = fs::remove_file(&path);
                    Ok((self.store(g, caps)?, CacheEvent::Repaired(e.to_string())))
                }
            },
            Err(_) => Ok((self.store(g, caps)?, CacheEvent::Miss)),
        }
    }

    /// Re-derives up to three randomly chosen entries from their stored
    /// tables and byte-compares them with the files. Unreadable or
    /// mismatching entries are reported, purged and, when the table is
    /// still usable, recomputed.
    pub fn validate(&self, seed: u64, caps: &Caps) -> Result<ValidationReport> {
        let mut entries = self.entries()?;
        let mut report = ValidationReport {
            entries: entries.len(),
            ..Default::default()
        };
        entries.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for path in entries.into_iter().take(3) {
            let name = path.file_name().unwrap().to_string_lossy().to_string();
            report.checked.push(name.clone());
            let bytes = fs::read(&path)?;
            let stem = name.trim_end_matches(".json");
            let verdict = match LatticeCache::decode(&bytes, Some(stem)) {
                Ok((g, _)) => {
                    let fresh = encode(&g, &SubgroupLattice::build(&g, caps)?);
                    if fresh == bytes {
                        Ok(())
                    } else {
                        Err((format!("{name}: differs from a fresh derivation"), Some(g)))
                    }
                }
                Err(e) => {
                    let g = serde_json::from_slice::<serde_json::Value>(&bytes)
                        .ok()
                        .and_then(|v| serde_json::from_value::<GroupJson>(v.get("group")?.clone()).ok())
                        .and_then(|j| Group::from_json(&j).ok())
                        .filter(|g| table_digest(g) == stem);
                    Err((format!("{name}: {e}"), g))
                }
            };
            if let Err((msg, g)) = verdict {
                warn!("cache validation failed, purging {msg}");
                report.mismatches.push(msg);
                fs::remove_file(&path)?;
                if let Some(g) = g {
                    self.store(&g, caps)?;
                }
            }
        }
        Ok(report)
    }

    /// Stores every group not already cached; returns how many were built.
    pub fn warm<'a>(&self, groups: impl IntoIterator<Item = &'a Group>, caps: &Caps) -> Result<usize> {
        let mut built = 0;
        for g in groups {
            if let (_, CacheEvent::Miss | CacheEvent::Repaired(_)) = self.load_or_build(g, caps)? {
                built += 1;
            }
        }
        info!("cache warm: {built} lattices built in {}", self.dir.display());
        Ok(built)
    }

    /// Removes every record; returns how many were removed.
    pub fn purge(&self) -> Result<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}
