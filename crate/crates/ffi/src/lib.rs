//! C interface to the `fingroup` engine.
//!
//! Groups are passed around as opaque `FgtGroup` handles. Every fallible
//! call returns an `FgtStatus`; on failure the message is available from
//! `fgt_last_error` on the same thread. Strings returned by the library
//! must be released with `fgt_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fingroup::cli::{analyze_group, resolve_selector, Selector};
use fingroup::context::GroupContext;
use fingroup::embedding::{embedding_predicate, EmbeddingKind};
use fingroup::expr::build;
use fingroup::formation::Formation;
use fingroup::theorems::corpus::CorpusConfig;
use fingroup::theorems::{verify_many, TheoremId, VerifyConfig};
use fingroup::{Caps, Error, Group};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGroup = 4,
    CapExceeded = 5,
    NotFound = 6,
    Config = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque group handle.
pub struct FgtGroup {
    expr: String,
    ctx: GroupContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FgtStatus {
    match e {
        Error::Malformed(_)
        | Error::NotClosed { .. }
        | Error::NoIdentity
        | Error::NoInverse(_)
        | Error::NotLatinSquare(_)
        | Error::NotAssociative { .. } => FgtStatus::InvalidGroup,
        Error::OrderCapExceeded { .. }
        | Error::LatticeCapExceeded { .. }
        | Error::SubgroupCountCapExceeded { .. } => FgtStatus::CapExceeded,
        Error::InvalidPermutation(_) | Error::Parse(_) | Error::UnknownTag(_) => FgtStatus::Parse,
        Error::NotNormal | Error::NotSubgroup(_) => FgtStatus::NotFound,
        Error::ResidualNotWitnessed(_) | Error::Config(_) => FgtStatus::Config,
        Error::Io(_) => FgtStatus::Io,
    }
}

struct Fail(FgtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FgtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FgtStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            FgtStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(FgtStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(FgtStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn group_ref<'a>(g: *const FgtGroup) -> Result<&'a FgtGroup, Fail> {
    g.as_ref()
        .ok_or_else(|| Fail(FgtStatus::NullPointer, "group handle is null".into()))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(FgtStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn handle(expr: String, group: Group) -> Result<*mut FgtGroup, Fail> {
    let ctx = GroupContext::new(group, &Caps::default())?;
    Ok(Box::into_raw(Box::new(FgtGroup { expr, ctx })))
}

/// Builds a group from an expression such as `S(4)` or `D(8)xC(3)`.
///
/// # Safety
/// `expr` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgt_group_from_expr(expr: *const c_char, out: *mut *mut FgtGroup) -> FgtStatus {
    guard(|| {
        out_ptr(out)?;
        let s = text(expr, "expr")?;
        let g = build(s, &Caps::default())?;
        *out = handle(s.to_string(), g)?;
        Ok(())
    })
}

/// Builds a group from a row-major multiplication table of `order * order`
/// entries. Element 0 must be the identity.
///
/// # Safety
/// `table` must point to `order * order` readable values and `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgt_group_from_table(
    order: usize,
    table: *const i64,
    out: *mut *mut FgtGroup,
) -> FgtStatus {
    guard(|| {
        out_ptr(out)?;
        if table.is_null() {
            return Err(Fail(FgtStatus::NullPointer, "table is null".into()));
        }
        let n = order
            .checked_mul(order)
            .ok_or_else(|| Fail(FgtStatus::CapExceeded, "order overflows".into()))?;
        let flat = std::slice::from_raw_parts(table, n);
        let rows: Vec<Vec<i64>> = flat.chunks(order.max(1)).map(<[i64]>::to_vec).collect();
        let g = Group::from_table(&rows)?;
        *out = handle(format!("table({order})"), g)?;
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fgt_group_free(g: *mut FgtGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgt_group_order(g: *const FgtGroup, out: *mut usize) -> FgtStatus {
    guard(|| {
        out_ptr(out)?;
        *out = group_ref(g)?.ctx.group().order();
        Ok(())
    })
}

/// Number of subgroups.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgt_group_subgroup_count(g: *const FgtGroup, out: *mut usize) -> FgtStatus {
    guard(|| {
        out_ptr(out)?;
        *out = group_ref(g)?.ctx.len();
        Ok(())
    })
}

/// Lattice index of the subgroup generated by `gens` (cycles, labels or
/// element indices separated by commas).
///
/// # Safety
/// `g` must be a live handle, `gens` a nul-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgt_group_find_subgroup(
    g: *const FgtGroup,
    gens: *const c_char,
    out: *mut usize,
) -> FgtStatus {
    guard(|| {
        out_ptr(out)?;
        let g = group_ref(g)?;
        *out = resolve_selector(&g.ctx, &Selector::Gens(text(gens, "gens")?.to_string()))?;
        Ok(())
    })
}

/// Evaluates the embedding property `kind` for the subgroup at lattice
/// index `index`. `formation` may be null, meaning `U`. When `json` is
/// not null it receives the verdict as a JSON string.
///
/// # Safety
/// `g` must be a live handle, `kind` a nul-terminated string, `formation`
/// null or nul-terminated, `holds` valid and `json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn fgt_check(
    g: *const FgtGroup,
    index: usize,
    kind: *const c_char,
    formation: *const c_char,
    holds: *mut bool,
    json: *mut *mut c_char,
) -> FgtStatus {
    guard(|| {
        out_ptr(holds)?;
        let g = group_ref(g)?;
        let kind = EmbeddingKind::parse(text(kind, "kind")?)?;
        let form = if formation.is_null() {
            Formation::supersoluble()
        } else {
            Formation::parse(text(formation, "formation")?)?
        };
        let h = resolve_selector(&g.ctx, &Selector::Index(index))?;
        let v = embedding_predicate(&g.ctx, h, &kind, Some(&form))?;
        *holds = v.holds;
        if !json.is_null() {
            *json = c_string(v.to_json().to_string());
        }
        Ok(())
    })
}

/// Structural summary of the group as JSON.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgt_group_analyze_json(g: *const FgtGroup, out: *mut *mut c_char) -> FgtStatus {
    guard(|| {
        out_ptr(out)?;
        let g = group_ref(g)?;
        let o = analyze_group(&g.expr, g.ctx.group(), None, &Caps::default())?;
        *out = c_string(o.json.to_string());
        Ok(())
    })
}

/// Runs the suites named by `selector` (an id, a prefix or `all`) over the
/// corpus of groups up to `max_order` and returns the reports as a JSON
/// array. `violations` receives the total number of violations.
///
/// # Safety
/// `selector` must be nul-terminated; `out` and `violations` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fgt_verify_json(
    selector: *const c_char,
    max_order: usize,
    violations: *mut usize,
    out: *mut *mut c_char,
) -> FgtStatus {
    guard(|| {
        out_ptr(out)?;
        out_ptr(violations)?;
        let ids = TheoremId::select(text(selector, "selector")?)?;
        let cfg = VerifyConfig {
            corpus: CorpusConfig::with_max_order(max_order),
            ..Default::default()
        };
        let reports = verify_many(&ids, &cfg)?;
        *violations = reports.iter().map(|r| r.violations()).sum();
        let arr: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
        *out = c_string(serde_json::Value::Array(arr).to_string());
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fgt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fgt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn fgt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
