//! C ABI over `tdmtw`.
//!
//! Objects are opaque handles created by `*_parse`/`tdm_gen`/solver calls
//! and released with the matching `*_free`. Every fallible call returns a
//! [`TdmStatus`]; on failure `tdm_last_error` describes the most recent
//! error on the calling thread. Strings handed out by the library must be
//! released with `tdm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use tdmtw::decomp::format::{parse_decomposition, write_decomposition};
use tdmtw::decomp::{decompose_heuristic, kfree_heuristic, validate, width, Decomposition};
use tdmtw::grids::{make_cylindrical_grid, make_grid, make_parity_handle, make_parity_vortex, make_rooted_grid};
use tdmtw::ip::format::write_result;
use tdmtw::ip::{brute_force_oracle, solve_dp, SolveResult};
use tdmtw::matrix::format::parse_instance;
use tdmtw::matrix::IpInstance;
use tdmtw::sgraph::format::{parse_graph, write_graph};
use tdmtw::sgraph::{ocp_exact, RootedSignedGraph};
use tdmtw::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    Limit = 5,
    Panic = 6,
}

/// Graph families for `tdm_gen`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdmFamily {
    Grid = 0,
    RootedGrid = 1,
    Handle = 2,
    Vortex = 3,
    Cylinder = 4,
}

/// Rooted signed graph.
pub struct TdmGraph(RootedSignedGraph);

/// Integer program with two nonzeros per row.
pub struct TdmInstance(IpInstance);

/// Tree decomposition of any kind.
pub struct TdmDecomposition(Decomposition);

/// Outcome of a solver call.
pub struct TdmSolveResult(SolveResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TdmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => TdmStatus::Parse,
            Error::SizeLimit { .. } => TdmStatus::Limit,
            _ => TdmStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TdmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TdmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TdmStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(TdmStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TdmStatus::InvalidUtf8, "input is not UTF-8".into()))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TdmStatus::Invalid, "output contains NUL".into()))?;
    if out.is_null() {
        return Err(null());
    }
    out.write(c.into_raw());
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tdm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tdm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tdm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the graph text format.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_graph_parse(src: *const c_char, out: *mut *mut TdmGraph) -> TdmStatus {
    guard(|| put_box(out, TdmGraph(parse_graph(text(src)?)?)))
}

/// Generates a family member; `m` is used by cylinders only.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_gen(family: TdmFamily, k: usize, m: usize, out: *mut *mut TdmGraph) -> TdmStatus {
    guard(|| {
        let (g, _) = match family {
            TdmFamily::Grid => make_grid(k)?,
            TdmFamily::RootedGrid => make_rooted_grid(k)?,
            TdmFamily::Handle => make_parity_handle(k)?,
            TdmFamily::Vortex => make_parity_vortex(k)?,
            TdmFamily::Cylinder => make_cylindrical_grid(k, m)?,
        };
        put_box(out, TdmGraph(g))
    })
}

/// # Safety
/// `g` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tdm_graph_free(g: *mut TdmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex, edge and root counts; any output pointer may be null.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tdm_graph_counts(
    g: *const TdmGraph,
    vertices: *mut usize,
    edges: *mut usize,
    roots: *mut usize,
) -> TdmStatus {
    guard(|| {
        let g = &get(g)?.0;
        for (p, v) in [(vertices, g.vertex_count()), (edges, g.edge_count()), (roots, g.roots().len())] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Odd cycle packing number.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_graph_ocp(g: *const TdmGraph, out: *mut usize) -> TdmStatus {
    guard(|| put(out, ocp_exact(&get(g)?.0)?))
}

/// Graph in its text format.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_graph_to_string(g: *const TdmGraph, out: *mut *mut c_char) -> TdmStatus {
    guard(|| put_string(out, write_graph(&get(g)?.0)))
}

/// Parses the instance text format.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_instance_parse(src: *const c_char, out: *mut *mut TdmInstance) -> TdmStatus {
    guard(|| put_box(out, TdmInstance(parse_instance(text(src)?)?)))
}

/// # Safety
/// `i` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tdm_instance_free(i: *mut TdmInstance) {
    if !i.is_null() {
        drop(Box::from_raw(i));
    }
}

/// The instance's rooted signed graph.
///
/// # Safety
/// `i` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_instance_graph(i: *const TdmInstance, out: *mut *mut TdmGraph) -> TdmStatus {
    guard(|| put_box(out, TdmGraph(get(i)?.0.graph())))
}

/// Parses the decomposition text format.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_decomposition_parse(src: *const c_char, out: *mut *mut TdmDecomposition) -> TdmStatus {
    guard(|| put_box(out, TdmDecomposition(parse_decomposition(text(src)?)?)))
}

/// # Safety
/// `d` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tdm_decomposition_free(d: *mut TdmDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Decomposition in its text format.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_decomposition_to_string(d: *const TdmDecomposition, out: *mut *mut c_char) -> TdmStatus {
    guard(|| put_string(out, write_decomposition(&get(d)?.0)))
}

/// Heuristic TDM decomposition and its width.
///
/// # Safety
/// `g` must be a live graph handle; `out` and `out_width` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_decompose(
    g: *const TdmGraph,
    budget: usize,
    seed: u64,
    out: *mut *mut TdmDecomposition,
    out_width: *mut usize,
) -> TdmStatus {
    guard(|| {
        let h = decompose_heuristic(&get(g)?.0, budget, seed)?;
        if out_width.is_null() {
            return Err(null());
        }
        put_box(out, TdmDecomposition(h.decomposition.into()))?;
        out_width.write(h.width);
        Ok(())
    })
}

/// Checks `d` against `g`. `out_valid` receives the verdict; when
/// `out_report` is not null it receives one line per violated clause.
///
/// # Safety
/// `g` and `d` must be live handles; `out_valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_validate(
    g: *const TdmGraph,
    d: *const TdmDecomposition,
    out_valid: *mut bool,
    out_report: *mut *mut c_char,
) -> TdmStatus {
    guard(|| {
        let vs = validate(&get(d)?.0, &get(g)?.0);
        put(out_valid, vs.is_empty())?;
        if !out_report.is_null() {
            let report: String = vs.iter().map(|v| format!("{}: {v}\n", v.clause())).collect();
            put_string(out_report, report)?;
        }
        Ok(())
    })
}

/// Width of a valid decomposition.
///
/// # Safety
/// `g` and `d` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_width(g: *const TdmGraph, d: *const TdmDecomposition, out: *mut usize) -> TdmStatus {
    guard(|| put(out, width(&get(d)?.0, &get(g)?.0)?))
}

/// Dynamic-programming solve. `d` must be a K-free decomposition of the
/// instance graph, or null for a heuristic one.
///
/// # Safety
/// `i` must be a live instance handle, `d` null or live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_solve(
    i: *const TdmInstance,
    d: *const TdmDecomposition,
    out: *mut *mut TdmSolveResult,
) -> TdmStatus {
    guard(|| {
        let inst = &get(i)?.0;
        let kfree = match d.as_ref() {
            None => kfree_heuristic(&inst.graph()),
            Some(TdmDecomposition(Decomposition::KFree(k))) => k.clone(),
            Some(TdmDecomposition(other)) => {
                return Err(Failure(
                    TdmStatus::Invalid,
                    format!("solve needs a kfree decomposition, got {}", other.kind().keyword()),
                ))
            }
        };
        put_box(out, TdmSolveResult(solve_dp(inst, &kfree)?))
    })
}

/// Exhaustive solve over the box.
///
/// # Safety
/// `i` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_oracle(i: *const TdmInstance, out: *mut *mut TdmSolveResult) -> TdmStatus {
    guard(|| put_box(out, TdmSolveResult(brute_force_oracle(&get(i)?.0)?)))
}

/// # Safety
/// `r` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tdm_result_free(r: *mut TdmSolveResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// True when the result is optimal (false for infeasible).
///
/// # Safety
/// `r` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_result_is_optimal(r: *const TdmSolveResult, out: *mut bool) -> TdmStatus {
    guard(|| put(out, matches!(get(r)?.0, SolveResult::Optimal { .. })))
}

/// Objective value as a decimal string; fails on infeasible results.
///
/// # Safety
/// `r` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_result_objective(r: *const TdmSolveResult, out: *mut *mut c_char) -> TdmStatus {
    guard(|| {
        let obj = get(r)?.0.objective().ok_or_else(|| Failure(TdmStatus::Invalid, "result is infeasible".into()))?;
        put_string(out, obj.to_string())
    })
}

/// Value of variable `var` in the witness, when it fits in 64 bits.
///
/// # Safety
/// `r` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_result_value_i64(r: *const TdmSolveResult, var: usize, out: *mut i64) -> TdmStatus {
    guard(|| {
        let x = get(r)?.0.witness().ok_or_else(|| Failure(TdmStatus::Invalid, "result is infeasible".into()))?;
        let v = x.get(var).ok_or_else(|| Failure(TdmStatus::Invalid, format!("no variable {var}")))?;
        put(out, v.to_i64().ok_or_else(|| Failure(TdmStatus::Limit, format!("value {v} exceeds 64 bits")))?)
    })
}

/// Result record in its text format.
///
/// # Safety
/// `r` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tdm_result_to_string(r: *const TdmSolveResult, out: *mut *mut c_char) -> TdmStatus {
    guard(|| put_string(out, write_result(&get(r)?.0)))
}
