use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fingroup_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn group(expr: &str) -> *mut FgtGroup {
    let mut g = ptr::null_mut();
    let e = cs(expr);
    assert_eq!(unsafe { fgt_group_from_expr(e.as_ptr(), &mut g) }, FgtStatus::Ok);
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let p = fgt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let v = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { fgt_string_free(s) };
    v
}

#[test]
fn subgroup_counts() {
    for (e, n, count) in [("A(4)", 12, 10), ("Q8", 8, 6), ("D(8)", 8, 10), ("S(4)", 24, 30)] {
        let g = group(e);
        let (mut order, mut subs) = (0usize, 0usize);
        unsafe {
            assert_eq!(fgt_group_order(g, &mut order), FgtStatus::Ok);
            assert_eq!(fgt_group_subgroup_count(g, &mut subs), FgtStatus::Ok);
            fgt_group_free(g);
        }
        assert_eq!((order, subs), (n, count), "{e}");
    }
}

#[test]
fn check_through_handle() {
    let g = group("S(3)");
    let mut idx = usize::MAX;
    let gens = cs("(1 2)");
    unsafe {
        assert_eq!(fgt_group_find_subgroup(g, gens.as_ptr(), &mut idx), FgtStatus::Ok);
        let mut holds = false;
        let mut json = ptr::null_mut();
        let cn = cs("cn");
        assert_eq!(fgt_check(g, idx, cn.as_ptr(), ptr::null(), &mut holds, &mut json), FgtStatus::Ok);
        assert!(holds);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["kind"], "cn");
        let sqn = cs("sqn");
        assert_eq!(fgt_check(g, idx, sqn.as_ptr(), ptr::null(), &mut holds, ptr::null_mut()), FgtStatus::Ok);
        assert!(!holds);
        fgt_group_free(g);
    }
}

#[test]
fn wfsqn_fixture_in_a4() {
    let g = group("A(4)");
    let (gens, kind, form) = (cs("(1 2)(3 4)"), cs("wfsqn"), cs("U_p:2"));
    let mut idx = 0;
    let mut holds = true;
    unsafe {
        assert_eq!(fgt_group_find_subgroup(g, gens.as_ptr(), &mut idx), FgtStatus::Ok);
        assert_eq!(
            fgt_check(g, idx, kind.as_ptr(), form.as_ptr(), &mut holds, ptr::null_mut()),
            FgtStatus::Ok
        );
        fgt_group_free(g);
    }
    assert!(!holds);
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut g = ptr::null_mut();
    let bad = cs("S(");
    assert_eq!(unsafe { fgt_group_from_expr(bad.as_ptr(), &mut g) }, FgtStatus::Parse);
    assert!(g.is_null());
    assert!(!last_error().is_empty());

    let big = cs("C(5000)");
    assert_eq!(unsafe { fgt_group_from_expr(big.as_ptr(), &mut g) }, FgtStatus::CapExceeded);

    assert_eq!(unsafe { fgt_group_from_expr(ptr::null(), &mut g) }, FgtStatus::NullPointer);
    let mut n = 0;
    assert_eq!(unsafe { fgt_group_order(ptr::null(), &mut n) }, FgtStatus::NullPointer);

    let h = group("C(4)");
    let (kind, mut holds) = (cs("bogus"), false);
    unsafe {
        assert_eq!(fgt_check(h, 0, kind.as_ptr(), ptr::null(), &mut holds, ptr::null_mut()), FgtStatus::Parse);
        let sqn = cs("sqn");
        assert_eq!(fgt_check(h, 99, sqn.as_ptr(), ptr::null(), &mut holds, ptr::null_mut()), FgtStatus::NotFound);
        let gens = cs("(1 2)");
        assert_eq!(fgt_group_find_subgroup(h, gens.as_ptr(), &mut n), FgtStatus::NotFound);
        assert_eq!(fgt_group_order(h, &mut n), FgtStatus::Ok);
        assert!(fgt_last_error().is_null());
        fgt_group_free(h);
        fgt_group_free(ptr::null_mut());
        fgt_string_free(ptr::null_mut());
    }
}

#[test]
fn table_constructor() {
    let c3: [i64; 9] = [0, 1, 2, 1, 2, 0, 2, 0, 1];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(fgt_group_from_table(3, c3.as_ptr(), &mut g), FgtStatus::Ok);
        let mut n = 0;
        assert_eq!(fgt_group_subgroup_count(g, &mut n), FgtStatus::Ok);
        assert_eq!(n, 2);
        let mut json = ptr::null_mut();
        assert_eq!(fgt_group_analyze_json(g, &mut json), FgtStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["order"], 3);
        assert_eq!(v["classes"]["supersoluble"], true);
        fgt_group_free(g);
    }
    let not_group: [i64; 4] = [0, 1, 0, 1];
    assert_eq!(
        unsafe { fgt_group_from_table(2, not_group.as_ptr(), &mut g) },
        FgtStatus::InvalidGroup
    );
}

#[test]
fn analyze_json_reports_hypercentre() {
    let g = group("S(4)");
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(fgt_group_analyze_json(g, &mut json), FgtStatus::Ok);
        fgt_group_free(g);
    }
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["hypercentres"]["U"]["order"], 1);
    assert_eq!(v["residuals"]["U"]["order"], 4);
    let orders: Vec<u64> = v["chief_factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, vec![4, 3, 2]);
}

#[test]
fn verify_returns_reports() {
    let sel = cs("L2.2");
    let mut json = ptr::null_mut();
    let mut violations = usize::MAX;
    assert_eq!(
        unsafe { fgt_verify_json(sel.as_ptr(), 12, &mut violations, &mut json) },
        FgtStatus::Ok
    );
    assert_eq!(violations, 0);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 7);
    let bad = cs("X9");
    assert_eq!(
        unsafe { fgt_verify_json(bad.as_ptr(), 12, &mut violations, &mut json) },
        FgtStatus::Parse
    );
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(fgt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fingroup.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "fgt_group_from_expr",
        "fgt_group_from_table",
        "fgt_group_free",
        "fgt_check",
        "fgt_verify_json",
        "fgt_string_free",
        "fgt_last_error",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let dir = tempfile_dir();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"fingroup.h\"\nint main(void) { FgtGroup *g = 0; size_t n = 0;\n\
         return fgt_group_order(g, &n) == FGT_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("fingroup-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
