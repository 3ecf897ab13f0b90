//! C ABI over the ringcore pipelines: opaque handles, status codes and a
//! thread-local last-error message. Every pointer returned by this library
//! must be released through the matching `_free` function.

use ringcore::bicriteria::BicriteriaConfig;
use ringcore::composer::{
    build_coreset, build_fair_coreset, CoresetMode, CoresetResult, PipelineConfig,
};
use ringcore::dataset::{ClusteringParams, WeightedPointSet};
use ringcore::error::Error;
use ringcore::io;
use ringcore::metric::{EuclideanSpace, MetricBackend, PointId};
use ringcore::oracle::{eval_harness, HarnessConfig};
use ringcore::sampling::{BudgetForm, SamplingConfig};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::sync::Arc;

/// Status codes returned by fallible entry points; on anything but
/// `RINGCORE_STATUS_OK`, `ringcore_last_error` carries the message.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RingcoreStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidConfig = 4,
    RuntimeError = 5,
}

/// Coreset construction mode.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RingcoreMode {
    Vanilla = 0,
    AssignmentPreserving = 1,
    Fair = 2,
}

/// Budget form charged per sampled ring in assignment-preserving mode.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RingcoreBudgetForm {
    Eps5 = 0,
    Eps3WithDim = 1,
}

/// Build parameters; `alpha <= 0` selects the configured default budget.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct RingcoreParams {
    pub k: usize,
    pub z: f64,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub c0: f64,
    pub c1: f64,
    pub alpha: f64,
    pub budget_form: RingcoreBudgetForm,
    pub mode: RingcoreMode,
}

/// Opaque dataset handle.
pub struct RingcoreDataset {
    data: WeightedPointSet,
}

/// Opaque coreset handle.
pub struct RingcoreCoreset {
    result: CoresetResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let cleaned: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(cleaned).unwrap());
}

fn status_of(err: &Error) -> RingcoreStatus {
    match err {
        Error::Parse { .. } | Error::Io(_) => RingcoreStatus::ParseError,
        Error::Config(_) => RingcoreStatus::InvalidConfig,
        _ => RingcoreStatus::RuntimeError,
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn ringcore_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn ringcore_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Default parameters: k=1 median at eps=0.2, theoretical budget constants.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ringcore_params_default(out: *mut RingcoreParams) -> RingcoreStatus {
    if out.is_null() {
        set_error("out is null");
        return RingcoreStatus::NullArgument;
    }
    unsafe {
        *out = RingcoreParams {
            k: 1,
            z: 1.0,
            eps: 0.2,
            delta: 0.1,
            seed: 0,
            c0: 8.0,
            c1: 8.0,
            alpha: -1.0,
            budget_form: RingcoreBudgetForm::Eps5,
            mode: RingcoreMode::Vanilla,
        };
    }
    RingcoreStatus::Ok
}

/// Loads a Euclidean dataset from a CSV file (`x1..xd[,weight][,groups]`
/// with a header row). Returns null on failure; see `ringcore_last_error`.
///
/// # Safety
/// `path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ringcore_dataset_load_csv(path: *const c_char) -> *mut RingcoreDataset {
    if path.is_null() {
        set_error("path is null");
        return std::ptr::null_mut();
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return std::ptr::null_mut();
    };
    match load_csv(Path::new(path)) {
        Ok(data) => Box::into_raw(Box::new(RingcoreDataset { data })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

fn load_csv(path: &Path) -> Result<WeightedPointSet, Error> {
    let (space, weights, labels) = io::load_points_csv(path)?;
    let n = space.len();
    let backend = Arc::new(MetricBackend::Euclidean(space));
    let ds = WeightedPointSet::new(backend, (0..n).map(PointId).collect(), weights)?;
    match labels {
        Some(l) => ds.with_labels(l),
        None => Ok(ds),
    }
}

/// Builds a Euclidean dataset from a row-major coordinate buffer of
/// `n * dim` doubles; `weights` may be null for unit weights.
///
/// # Safety
/// `coords` must point to `n * dim` doubles; `weights`, when non-null, to
/// `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ringcore_dataset_from_points(
    dim: usize,
    coords: *const f64,
    n: usize,
    weights: *const f64,
) -> *mut RingcoreDataset {
    if coords.is_null() || dim == 0 || n == 0 {
        set_error("coords must be a non-empty buffer");
        return std::ptr::null_mut();
    }
    let coords = std::slice::from_raw_parts(coords, n * dim).to_vec();
    let weights = if weights.is_null() {
        vec![1.0; n]
    } else {
        std::slice::from_raw_parts(weights, n).to_vec()
    };
    let build = || -> Result<WeightedPointSet, Error> {
        let space = EuclideanSpace::new(dim, coords)?;
        let backend = Arc::new(MetricBackend::Euclidean(space));
        WeightedPointSet::new(backend, (0..n).map(PointId).collect(), weights)
    };
    match build() {
        Ok(data) => Box::into_raw(Box::new(RingcoreDataset { data })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Number of points in the dataset; 0 for null.
///
/// # Safety
/// `ds` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn ringcore_dataset_len(ds: *const RingcoreDataset) -> usize {
    if ds.is_null() {
        return 0;
    }
    unsafe { (*ds).data.len() }
}

/// # Safety
/// `ds` must come from a ringcore constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ringcore_dataset_free(ds: *mut RingcoreDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

fn pipeline_config(params: &RingcoreParams) -> PipelineConfig {
    PipelineConfig {
        sampling: SamplingConfig {
            c0: params.c0,
            c1: params.c1,
            budget_form: match params.budget_form {
                RingcoreBudgetForm::Eps5 => BudgetForm::Eps5,
                RingcoreBudgetForm::Eps3WithDim => BudgetForm::Eps3WithDim,
            },
            ..SamplingConfig::default()
        },
        bicriteria: BicriteriaConfig {
            alpha_override: (params.alpha > 0.0).then_some(params.alpha),
            ..BicriteriaConfig::default()
        },
    }
}

/// Builds a coreset; null on failure.
///
/// # Safety
/// `ds` and `params` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ringcore_coreset_build(
    ds: *const RingcoreDataset,
    params: *const RingcoreParams,
) -> *mut RingcoreCoreset {
    if ds.is_null() || params.is_null() {
        set_error("null argument");
        return std::ptr::null_mut();
    }
    let ds = &*ds;
    let params = &*params;
    let build = || -> Result<CoresetResult, Error> {
        let cp = ClusteringParams::new(params.k, params.z, params.eps, params.delta, params.seed)?;
        let cfg = pipeline_config(params);
        match params.mode {
            RingcoreMode::Vanilla => build_coreset(&ds.data, &cp, CoresetMode::Vanilla, &cfg),
            RingcoreMode::AssignmentPreserving => {
                build_coreset(&ds.data, &cp, CoresetMode::AssignmentPreserving, &cfg)
            }
            RingcoreMode::Fair => build_fair_coreset(&ds.data, &cp, &cfg),
        }
    };
    match build() {
        Ok(result) => Box::into_raw(Box::new(RingcoreCoreset { result })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Number of coreset points; 0 for null.
///
/// # Safety
/// `cs` must be null or a live coreset handle.
#[no_mangle]
pub unsafe extern "C" fn ringcore_coreset_size(cs: *const RingcoreCoreset) -> usize {
    if cs.is_null() {
        return 0;
    }
    unsafe { (*cs).result.size }
}

/// Reads entry `i` as (input point index, weight).
///
/// # Safety
/// `cs` must be valid; `point_out` and `weight_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ringcore_coreset_entry(
    cs: *const RingcoreCoreset,
    i: usize,
    point_out: *mut usize,
    weight_out: *mut f64,
) -> RingcoreStatus {
    if cs.is_null() || point_out.is_null() || weight_out.is_null() {
        set_error("null argument");
        return RingcoreStatus::NullArgument;
    }
    let cs = &*cs;
    if i >= cs.result.size {
        set_error("index out of range");
        return RingcoreStatus::InvalidConfig;
    }
    *point_out = cs.result.points[i].0;
    *weight_out = cs.result.weights[i];
    RingcoreStatus::Ok
}

/// Canonical JSON of the coreset; free with `ringcore_string_free`.
///
/// # Safety
/// `cs` must be a valid coreset handle.
#[no_mangle]
pub unsafe extern "C" fn ringcore_coreset_to_json(cs: *const RingcoreCoreset) -> *mut c_char {
    if cs.is_null() {
        set_error("coreset is null");
        return std::ptr::null_mut();
    }
    match io::to_canonical_json(&(*cs).result) {
        Ok(json) => CString::new(json).map_or(std::ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `cs` must come from `ringcore_coreset_build` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ringcore_coreset_free(cs: *mut RingcoreCoreset) {
    if !cs.is_null() {
        drop(Box::from_raw(cs));
    }
}

/// # Safety
/// `s` must come from a ringcore function returning `char *`.
#[no_mangle]
pub unsafe extern "C" fn ringcore_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates a coreset against its dataset over `trials` random center sets
/// and writes the maximum relative error to `max_rel_err_out`.
///
/// # Safety
/// All pointers must be valid; `constrained != 0` routes the evaluation
/// through the transport solver.
#[no_mangle]
pub unsafe extern "C" fn ringcore_eval(
    ds: *const RingcoreDataset,
    cs: *const RingcoreCoreset,
    trials: usize,
    seed: u64,
    constrained: i32,
    max_rel_err_out: *mut f64,
) -> RingcoreStatus {
    if ds.is_null() || cs.is_null() || max_rel_err_out.is_null() {
        set_error("null argument");
        return RingcoreStatus::NullArgument;
    }
    let ds = &*ds;
    let cs = &*cs;
    let run = || -> Result<f64, Error> {
        let s = cs.result.to_point_set(ds.data.backend().clone())?;
        let mut hcfg = HarnessConfig::new(trials.max(1), seed, f64::INFINITY);
        hcfg.constrained = constrained != 0;
        let report = eval_harness(&ds.data, &s, &cs.result.params, &hcfg)?;
        Ok(report.max_rel_err)
    };
    match run() {
        Ok(max_rel) => {
            *max_rel_err_out = max_rel;
            RingcoreStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}
