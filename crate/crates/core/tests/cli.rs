use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fgt(args: &[&str]) -> Output {
    fgt_env(args, &[])
}

fn fgt_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fgt"));
    c.args(args);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("FGT_")) {
        c.env_remove(k);
    }
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("fgt runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn check_c_normal_transposition() {
    let o = fgt(&["--format", "json", "check", "S(3)", "--gens", "(1 2)", "cn"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"]["holds"], true);
    assert_eq!(v["witness"]["order"], 3);
    let table = stdout(&fgt(&["check", "S(3)", "--gens", "(1 2)", "cn"]));
    assert!(table.contains("witness T   order 3 <(1 2 3)>"), "{table}");
}

#[test]
fn check_sqn_fails_with_exit_1() {
    let o = fgt(&["check", "S(3)", "--gens", "(1 2)", "sqn"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("holds       false"));
}

#[test]
fn check_trivial_subgroup_is_weakly_quasinormal() {
    for g in ["S(3)", "A(4)", "SL23", "Q8xC(2)"] {
        let o = fgt(&["check", g, "--index", "0", "wfsqn", "--formation", "U"]);
        assert_eq!(code(&o), 0, "{g}");
    }
}

#[test]
fn check_a4_involution() {
    let o = fgt(&["--format", "json", "check", "A(4)", "--gens", "(1 2)(3 4)", "wfsqn", "--formation", "U_p:2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"]["holds"], false);
    let o = fgt(&["check", "A(4)", "--gens", "(1 2)(3 4)", "supp:p_nilpotent:2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_and_lookup_errors_exit_2() {
    assert_eq!(code(&fgt(&["check", "S(3)", "--gens", "(1 2)", "bogus"])), 2);
    assert_eq!(code(&fgt(&["check", "S(3)", "--gens", "(1 5)", "sqn"])), 2);
    assert_eq!(code(&fgt(&["check", "S(3)", "--index", "99", "sqn"])), 2);
    assert_eq!(code(&fgt(&["check", "S(3)", "sqn"])), 2);
    assert_eq!(code(&fgt(&["analyze", "S(3"])), 2);
    assert_eq!(code(&fgt(&["analyze", "C(5000)"])), 2);
    assert_eq!(code(&fgt(&["verify", "X1.1", "--max-order", "4"])), 2);
    assert_eq!(code(&fgt(&["--format", "yaml", "analyze", "C(2)"])), 2);
    let o = fgt(&["analyze", "C(5000)"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("table cap"));
    assert_eq!(code(&fgt(&["--help"])), 0);
}

#[test]
fn analyze_s4() {
    let v = json(&fgt(&["--format", "json", "analyze", "S(4)"]));
    let orders: Vec<u64> = v["chief_factors"].as_array().unwrap().iter().map(|f| f["order"].as_u64().unwrap()).collect();
    assert_eq!(orders, vec![4, 3, 2]);
    assert_eq!(v["hypercentres"]["U"]["order"], 1);
    assert_eq!(v["residuals"]["U"]["order"], 4);
    assert_eq!(v["subgroup_count"], 30);
    assert_eq!(v["classes"]["supersoluble"], false);
}

#[test]
fn analyze_trivial_and_extra_formation() {
    let v = json(&fgt(&["--format", "json", "analyze", "C(1)"]));
    assert_eq!(v["order"], 1);
    assert_eq!(v["chief_factors"].as_array().unwrap().len(), 0);
    assert!(v["classes"].as_object().unwrap().values().all(|b| b == true));
    let v = json(&fgt(&["--format", "json", "analyze", "A(4)", "--formation", "U_2:2"]));
    assert_eq!(v["hypercentres"]["U_p:2"]["order"], 1);
}

#[test]
fn env_overrides() {
    let o = fgt_env(&["analyze", "C(3)"], &[("FGT_FORMAT", "json")]);
    assert_eq!(json(&o)["order"], 3);
    let o = fgt_env(&["analyze", "S(4)"], &[("FGT_TABLE_CAP", "10")]);
    assert_eq!(code(&o), 2);
    let o = fgt_env(&["--format", "csv", "corpus"], &[("FGT_MAX_ORDER", "6")]);
    assert_eq!(stdout(&o).lines().count(), 1 + 8);
}

#[test]
fn subgroups_listing() {
    let v = json(&fgt(&["--format", "json", "subgroups", "A(4)"]));
    assert_eq!(v["count"], 10);
    let sqn: Vec<u64> = v["subgroups"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["sqn"] == true)
        .map(|s| s["order"].as_u64().unwrap())
        .collect();
    assert_eq!(sqn, vec![1, 4, 12]);
    let csv = stdout(&fgt(&["--format", "csv", "subgroups", "Q8"]));
    assert_eq!(csv.lines().count(), 7);
}

fn report_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn verify_writes_deterministic_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let o = fgt(&["verify", "L2.2", "--max-order", "24", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let (ra, rb) = (report_files(&a), report_files(&b));
    assert_eq!(ra.len(), 7);
    assert_eq!(ra, rb);
    let r: Value = serde_json::from_slice(&ra[0].1).unwrap();
    assert_eq!(r["theorem"], "L2.2.1");
    assert_eq!(r["violations"], 0);
    assert!(r["corpus_size"].as_u64().unwrap() > 40);
    for key in ["engine", "config", "instances", "counts", "nontrivial"] {
        assert!(r.get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_empty_corpus() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fgt(&["--format", "json", "verify", "T3.5", "--corpus", "empty", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&fs::read(tmp.path().join("T3.5.json")).unwrap()).unwrap();
    assert_eq!(r["instances"].as_array().unwrap().len(), 0);
    assert_eq!(r["corpus_size"], 0);
}

#[test]
fn verify_with_oracles_and_jobs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let o = fgt(&["--jobs", "2", "--format", "json", "verify", "all", "--max-order", "12", "--oracles", "--out", out]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["reports"].as_array().unwrap().len(), 26);
    assert_eq!(v["oracles"].as_array().unwrap().len(), 8);
    let single = tempfile::tempdir().unwrap();
    fgt(&["verify", "all", "--max-order", "12", "--out", single.path().to_str().unwrap()]);
    assert_eq!(report_files(tmp.path()), report_files(single.path()));
}

#[test]
fn skip_threshold_exit_4() {
    // The lattice cap below the order of S(4) makes its instances skip.
    let tmp = tempfile::tempdir().unwrap();
    let o = fgt(&[
        "--lattice-cap", "20", "verify", "L3.1", "--corpus", "empty", "--extra", "S(4)",
        "--out", tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 4, "{}", stdout(&o));
    let r: Value = serde_json::from_slice(&fs::read(tmp.path().join("L3.1.json")).unwrap()).unwrap();
    assert!(r["instances"][0]["skipped"].is_string());
}

#[test]
fn cache_lifecycle_and_tamper_detection() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = tmp.path().join("cache");
    let c = cache.to_str().unwrap();
    let o = fgt(&["--cache-dir", c, "--format", "json", "cache", "warm", "--max-order", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["built"], 5);
    assert_eq!(json(&fgt(&["--cache-dir", c, "--format", "json", "cache", "warm", "--max-order", "4"]))["built"], 0);

    let o = fgt(&["--cache-dir", c, "--format", "json", "cache", "validate"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["checked"].as_array().unwrap().len(), 3);

    // Flip one byte in every entry so whichever three are sampled, each is caught.
    let mut files: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let pristine: Vec<Vec<u8>> = files.iter().map(|p| fs::read(p).unwrap()).collect();
    for p in &files {
        let mut bytes = fs::read(p).unwrap();
        let at = bytes.windows(15).position(|w| w == b"\"subgroups\":[\"0").unwrap();
        let i = at + 14;
        bytes[i] = if bytes[i] == b'0' { b'1' } else { b'0' };
        fs::write(p, bytes).unwrap();
    }
    let o = fgt(&["--cache-dir", c, "--format", "json", "cache", "validate"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 3);
    assert_eq!(v["passed"], false);

    // Repaired entries are byte-identical to the originals again.
    let checked: Vec<String> = v["checked"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    for (p, orig) in files.iter().zip(&pristine) {
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        if checked.contains(&name) {
            assert_eq!(&fs::read(p).unwrap(), orig, "{name}");
        }
    }

    let o = fgt(&["--cache-dir", c, "--format", "json", "cache", "purge"]);
    assert_eq!(json(&o)["removed"], 5);
    let o = fgt(&["--cache-dir", c, "--format", "json", "cache", "validate"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["entries"], 0);
}

#[test]
fn warm_cache_reports_match_cold() {
    let tmp = tempfile::tempdir().unwrap();
    let c = tmp.path().join("cache");
    let (cold, warm, none) = (tmp.path().join("cold"), tmp.path().join("warm"), tmp.path().join("none"));
    for out in [&cold, &warm] {
        let o = fgt(&["--cache-dir", c.to_str().unwrap(), "verify", "L3", "--max-order", "30", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    fgt(&["verify", "L3", "--max-order", "30", "--out", none.to_str().unwrap()]);
    assert_eq!(report_files(&cold), report_files(&warm));
    assert_eq!(report_files(&cold), report_files(&none));
    assert!(fs::read_dir(&c).unwrap().count() > 0);
}
