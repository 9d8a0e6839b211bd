//! C ABI over `qmaxfind`.
//!
//! Tables and runs are opaque heap handles owned by the caller and released
//! with `qmf_table_free` / `qmf_run_free`. Every fallible call returns a
//! [`QmfStatus`]; on failure a message is available from
//! `qmf_last_error_message` on the same thread. Panics never cross the
//! boundary and are reported as `QMF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qmaxfind::analysis::{self, BasePreset, RecurrenceParams};
use qmaxfind::harness::trial_rng;
use qmaxfind::statevector::analytic_success_probability;
use qmaxfind::{find_max, find_max_boosted, Error, MaxConfig, MaxRun, Mode, Objective, Table};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Size = 3,
    Index = 4,
    EmptyTable = 5,
    Duplicate = 6,
    Parse = 7,
    Invariant = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmfMode {
    Budgeted = 0,
    OracleTerminated = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmfObjective {
    Maximize = 0,
    Minimize = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmfBasePreset {
    Six = 0,
    Pi4 = 1,
}

/// Opaque table handle.
pub struct QmfTable {
    inner: Table<f64>,
}

/// Opaque handle to a finished run.
pub struct QmfRun {
    inner: MaxRun,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QmfRunSummary {
    pub final_index: usize,
    pub total_grover_queries: u64,
    pub total_verification_queries: u64,
    pub rounds: u64,
    pub trace_len: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QmfStatus {
    match err {
        Error::Size { .. } => QmfStatus::Size,
        Error::Index { .. } => QmfStatus::Index,
        Error::EmptyTable => QmfStatus::EmptyTable,
        Error::Duplicate { .. } => QmfStatus::Duplicate,
        Error::Incomparable { .. } | Error::Parse { .. } => QmfStatus::Parse,
        Error::Domain(_) => QmfStatus::InvalidArgument,
        Error::Invariant(_) => QmfStatus::Invariant,
        Error::Io(_) => QmfStatus::Io,
    }
}

struct Failure(QmfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QmfStatus::NullPointer, format!("{what} is NULL"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QmfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QmfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside qmaxfind".into());
            QmfStatus::Panic
        }
    }
}

unsafe fn table_ref<'a>(table: *const QmfTable) -> Result<&'a Table<f64>, Failure> {
    table.as_ref().map(|t| &t.inner).ok_or_else(|| null("table"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn boxed_table(out: *mut *mut QmfTable, table: Table<f64>) -> Result<(), Failure> {
    let handle = Box::into_raw(Box::new(QmfTable { inner: table }));
    // SAFETY: callers check `out` for NULL before building the table.
    unsafe { out.write(handle) };
    Ok(())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qmf_status_string(status: QmfStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QmfStatus::Ok => c"ok",
        QmfStatus::NullPointer => c"null pointer",
        QmfStatus::InvalidArgument => c"invalid argument",
        QmfStatus::Size => c"register size out of range",
        QmfStatus::Index => c"index out of range",
        QmfStatus::EmptyTable => c"empty table",
        QmfStatus::Duplicate => c"duplicate table value",
        QmfStatus::Parse => c"unparseable input",
        QmfStatus::Invariant => c"invariant violated",
        QmfStatus::Io => c"i/o error",
        QmfStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qmf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a table from `len` doubles. Values must be distinct and not NaN.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_table_new(
    values: *const f64,
    len: usize,
    objective: QmfObjective,
    out: *mut *mut QmfTable,
) -> QmfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if values.is_null() && len > 0 {
            return Err(null("values"));
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(values, len)
        };
        let objective = match objective {
            QmfObjective::Maximize => Objective::Maximize,
            QmfObjective::Minimize => Objective::Minimize,
        };
        boxed_table(out, Table::with_objective(slice.to_vec(), objective)?)
    })
}

/// Random permutation of `0..n` drawn from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_table_permutation(
    n: usize,
    seed: u64,
    out: *mut *mut QmfTable,
) -> QmfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        boxed_table(out, Table::permutation(n, &mut trial_rng(seed))?)
    })
}

/// Parses the line-oriented table format (one number per line, `#`
/// comments).
///
/// # Safety
/// `text` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_table_parse(text: *const c_char, out: *mut *mut QmfTable) -> QmfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(QmfStatus::Parse, format!("input is not UTF-8: {e}")))?;
        boxed_table(out, Table::parse(text)?)
    })
}

/// # Safety
/// `table` must be NULL or a handle from a `qmf_table_*` constructor that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qmf_table_free(table: *mut QmfTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of items, or 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live table handle.
#[no_mangle]
pub unsafe extern "C" fn qmf_table_len(table: *const QmfTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.len())
}

/// Classical argmax (argmin for minimizing tables).
///
/// # Safety
/// `table` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_table_best_index(table: *const QmfTable, out: *mut usize) -> QmfStatus {
    guard(|| write_out(out, table_ref(table)?.best_index()))
}

fn max_config(table: &Table<f64>, mode: QmfMode, budget: u64) -> Result<MaxConfig, Failure> {
    let mode = match mode {
        QmfMode::Budgeted => Mode::Budgeted,
        QmfMode::OracleTerminated => Mode::OracleTerminated,
    };
    let config = MaxConfig::for_table(table, mode);
    Ok(if budget == 0 {
        config
    } else {
        config.with_budget(budget)?
    })
}

fn boxed_run(out: *mut *mut QmfRun, run: MaxRun) -> Result<(), Failure> {
    let handle = Box::into_raw(Box::new(QmfRun { inner: run }));
    // SAFETY: callers check `out` for NULL first.
    unsafe { out.write(handle) };
    Ok(())
}

/// Runs maximum finding on a ChaCha8 stream seeded with `seed`. A `budget`
/// of 0 selects the default `ceil(13.6 sqrt(N))`.
///
/// # Safety
/// `table` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_find_max(
    table: *const QmfTable,
    seed: u64,
    mode: QmfMode,
    budget: u64,
    out: *mut *mut QmfRun,
) -> QmfStatus {
    guard(|| {
        let table = table_ref(table)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let config = max_config(table, mode, budget)?;
        boxed_run(out, find_max(table, &mut trial_rng(seed), &config)?)
    })
}

/// Best of `k` budgeted runs on one stream.
///
/// # Safety
/// `table` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_find_max_boosted(
    table: *const QmfTable,
    seed: u64,
    k: u32,
    budget: u64,
    out: *mut *mut QmfRun,
) -> QmfStatus {
    guard(|| {
        let table = table_ref(table)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let config = max_config(table, QmfMode::Budgeted, budget)?;
        boxed_run(out, find_max_boosted(table, &mut trial_rng(seed), &config, k)?)
    })
}

/// # Safety
/// `run` must be a live run handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_run_summary(run: *const QmfRun, out: *mut QmfRunSummary) -> QmfStatus {
    guard(|| {
        let run = &run.as_ref().ok_or_else(|| null("run"))?.inner;
        write_out(
            out,
            QmfRunSummary {
                final_index: run.final_index,
                total_grover_queries: run.total_grover_queries,
                total_verification_queries: run.total_verification_queries,
                rounds: run.rounds,
                trace_len: run.guess_trace.len(),
            },
        )
    })
}

/// Copies up to `cap` accepted guesses into `buf` and stores the full trace
/// length in `out_len`. Pass `cap = 0` to query the length only.
///
/// # Safety
/// `run` must be a live run handle; `buf` must have room for `cap` values
/// (may be NULL when `cap` is 0); `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_run_trace(
    run: *const QmfRun,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> QmfStatus {
    guard(|| {
        let trace = &run.as_ref().ok_or_else(|| null("run"))?.inner.guess_trace;
        if cap > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            let n = cap.min(trace.len());
            ptr::copy_nonoverlapping(trace.as_ptr(), buf, n);
        }
        write_out(out_len, trace.len())
    })
}

/// # Safety
/// `run` must be NULL or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn qmf_run_free(run: *mut QmfRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// `sin^2((2j+1) asin(sqrt(t/n)))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_success_probability(n: u64, t: u64, j: u64, out: *mut f64) -> QmfStatus {
    guard(|| {
        if t > n {
            return Err(Failure(QmfStatus::InvalidArgument, format!("t = {t} exceeds n = {n}")));
        }
        write_out(out, analytic_success_probability(n, t, j))
    })
}

fn params(n: u64, preset: QmfBasePreset) -> Result<RecurrenceParams, Failure> {
    let preset = match preset {
        QmfBasePreset::Six => BasePreset::Six,
        QmfBasePreset::Pi4 => BasePreset::Pi4,
    };
    Ok(RecurrenceParams::with_preset(n, preset)?)
}

/// Expected query count from the recurrence, `1 <= t < n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_expected_exact(n: u64, t: u64, preset: QmfBasePreset, out: *mut f64) -> QmfStatus {
    guard(|| write_out(out, analysis::expected_exact(&params(n, preset)?, t)?))
}

/// Expected query count from the telescoped sum.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_expected_telescoped(
    n: u64,
    t: u64,
    preset: QmfBasePreset,
    out: *mut f64,
) -> QmfStatus {
    guard(|| write_out(out, analysis::expected_telescoped(&params(n, preset)?, t)?))
}

/// Closed-form upper bound `E(N,1) + 6 sqrt(N)(1 - 1/sqrt(t))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_expected_bound(n: u64, t: u64, preset: QmfBasePreset, out: *mut f64) -> QmfStatus {
    guard(|| write_out(out, analysis::expected_bound(&params(n, preset)?, t)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_markov_tail_bound(k: f64, out: *mut f64) -> QmfStatus {
    guard(|| write_out(out, analysis::markov_tail_bound(k)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmf_boosted_success_prob(k: u32, out: *mut f64) -> QmfStatus {
    guard(|| write_out(out, analysis::boosted_success_prob(k)?))
}
