//! C ABI for driving enumerators from other languages.
//!
//! Every entry point takes and returns plain C types; enumerators travel as
//! opaque [`EnumpaceEnumerator`] pointers. Calls report an
//! [`EnumpaceStatus`], and the failure message behind any non-OK status is
//! readable through [`enumpace_last_error`] until the next failing call on
//! the same thread. The build script renders the matching header into
//! `include/enumpace.h`.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;

use enumpace::problems::horn::{HornFormula, HornSearch};
use enumpace::problems::synthetic::SyntheticSpec;
use enumpace::problems::vertex_cover::{CoverSearch, GraphInstance};
use enumpace::regularize::{cap_to_inc, QueueSamples, RegularizeOptions};
use enumpace::trace::{run_to_completion, CompletedRun};
use enumpace::{BudgetSchedule, EnumError, Solution, SteppedEnumerator};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumpaceStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was outside its documented domain.
    InvalidArgument = 2,
    /// Input text or bytes did not parse.
    ParseError = 3,
    /// The run stopped early, for example on an exhausted cost cap.
    RunError = 4,
    /// The enumerator broke its own contract: a duplicate emission, broken
    /// cost accounting, or a violated declared bound.
    ContractViolation = 5,
    /// No emission is waiting in the hand-off buffer.
    NothingPending = 6,
    /// The accessor needs a prior successful `enumpace_run_to_completion`.
    NoCompletedRun = 7,
}

/// An enumerator plus everything its runs have produced so far. Opaque to
/// C; create through the `enumpace_*_new` constructors and release with
/// [`enumpace_free`].
pub struct EnumpaceEnumerator {
    inner: SteppedEnumerator,
    k: u64,
    n: u64,
    pending: VecDeque<(Solution, u64)>,
    run: Option<CompletedRun>,
    queue_samples: Option<QueueSamples>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: EnumpaceStatus, message: impl Display) -> EnumpaceStatus {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).expect("NUL bytes were replaced");
    });
    status
}

fn fail_enum(err: EnumError) -> EnumpaceStatus {
    let status = match err {
        EnumError::DuplicateEmission(_)
        | EnumError::CostAccountingViolation(_)
        | EnumError::BoundViolation { .. }
        | EnumError::OracleContractViolation(_) => EnumpaceStatus::ContractViolation,
        EnumError::InvalidBudget | EnumError::InvalidSchedule(_) => {
            EnumpaceStatus::InvalidArgument
        }
        EnumError::BudgetExhausted { .. } | EnumError::Poisoned => EnumpaceStatus::RunError,
    };
    fail(status, err)
}

/// Message describing the most recent failure on this thread, empty until
/// one happens. The pointer stays valid until the next failing call on the
/// same thread; do not free it.
#[no_mangle]
pub extern "C" fn enumpace_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn handle_out(
    out: *mut *mut EnumpaceEnumerator,
    handle: EnumpaceEnumerator,
) -> EnumpaceStatus {
    // SAFETY: The caller passed a writable location; null was rejected
    // before construction started.
    unsafe { *out = Box::into_raw(Box::new(handle)) };
    EnumpaceStatus::Ok
}

/// # Safety
/// `text` must be a valid NUL-terminated string.
unsafe fn utf8_arg(text: *const c_char, what: &str) -> Result<String, EnumpaceStatus> {
    match CStr::from_ptr(text).to_str() {
        Ok(s) => Ok(s.to_string()),
        Err(err) => Err(fail(
            EnumpaceStatus::ParseError,
            format!("{what} is not UTF-8: {err}"),
        )),
    }
}

/// Build a vertex-cover enumerator from edge-list text (header `V E`, then
/// one `u v` line per edge) and a cover size budget. On success `*out`
/// owns a fresh enumerator.
///
/// # Safety
/// `edge_list` must be a valid NUL-terminated string and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn enumpace_vertex_cover_new(
    edge_list: *const c_char,
    k: u32,
    out: *mut *mut EnumpaceEnumerator,
) -> EnumpaceStatus {
    if edge_list.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "edge_list and out are required");
    }
    let text = match utf8_arg(edge_list, "edge list") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let graph = match GraphInstance::parse_edge_list(&text, k) {
        Ok(graph) => graph,
        Err(err) => return fail(EnumpaceStatus::ParseError, err),
    };
    let n = graph.to_bytes().len() as u64;
    handle_out(
        out,
        EnumpaceEnumerator {
            inner: SteppedEnumerator::from_process(CoverSearch::new(&graph)),
            k: k as u64,
            n,
            pending: VecDeque::new(),
            run: None,
            queue_samples: None,
        },
    )
}

/// Build a Horn-SAT enumerator from DIMACS bytes. On success `*out` owns a
/// fresh enumerator.
///
/// # Safety
/// `dimacs` must point to `len` readable bytes and `out` must be a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn enumpace_horn_new(
    dimacs: *const u8,
    len: usize,
    out: *mut *mut EnumpaceEnumerator,
) -> EnumpaceStatus {
    if dimacs.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "dimacs and out are required");
    }
    let bytes = std::slice::from_raw_parts(dimacs, len);
    let formula = match HornFormula::parse_dimacs(bytes) {
        Ok(formula) => formula,
        Err(err) => return fail(EnumpaceStatus::ParseError, err),
    };
    let n = formula.to_bytes().len() as u64;
    handle_out(
        out,
        EnumpaceEnumerator {
            inner: SteppedEnumerator::from_process(HornSearch::new(&formula)),
            k: 1,
            n,
            pending: VecDeque::new(),
            run: None,
            queue_samples: None,
        },
    )
}

/// Build a synthetic enumerator from a profile description in JSON. On
/// success `*out` owns a fresh enumerator.
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn enumpace_synthetic_new(
    spec_json: *const c_char,
    out: *mut *mut EnumpaceEnumerator,
) -> EnumpaceStatus {
    if spec_json.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "spec_json and out are required");
    }
    let text = match utf8_arg(spec_json, "spec JSON") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let spec: SyntheticSpec = match serde_json::from_str(&text) {
        Ok(spec) => spec,
        Err(err) => return fail(EnumpaceStatus::ParseError, err),
    };
    handle_out(
        out,
        EnumpaceEnumerator {
            inner: SteppedEnumerator::from_process(spec.process()),
            k: spec.k,
            n: spec.n,
            pending: VecDeque::new(),
            run: None,
            queue_samples: None,
        },
    )
}

/// Wrap a fresh enumerator so emissions are released on the thresholds
/// `scale * i^exponent` of the schedule JSON. `inner` is consumed and must
/// not be used or freed afterwards, whether or not the call succeeds; on
/// success `*out` owns the paced enumerator.
///
/// # Safety
/// `inner` must be an unconsumed handle from a constructor in this library,
/// `schedule_json` a valid NUL-terminated string, and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn enumpace_regularize(
    inner: *mut EnumpaceEnumerator,
    schedule_json: *const c_char,
    continue_on_violation: bool,
    out: *mut *mut EnumpaceEnumerator,
) -> EnumpaceStatus {
    if inner.is_null() || schedule_json.is_null() || out.is_null() {
        return fail(
            EnumpaceStatus::NullArgument,
            "inner, schedule_json, and out are required",
        );
    }
    let handle = *Box::from_raw(inner);
    let text = match utf8_arg(schedule_json, "schedule JSON") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let schedule: BudgetSchedule = match serde_json::from_str(&text) {
        Ok(schedule) => schedule,
        Err(err) => return fail(EnumpaceStatus::ParseError, err),
    };
    if handle.inner.cost_consumed() != 0 {
        return fail(
            EnumpaceStatus::InvalidArgument,
            "regularization needs a fresh enumerator, but this one already ran",
        );
    }
    let options = RegularizeOptions {
        continue_on_violation,
    };
    let (k, n) = (handle.k, handle.n);
    match cap_to_inc(handle.inner, &schedule, k, n, options) {
        Ok(paced) => handle_out(
            out,
            EnumpaceEnumerator {
                inner: paced.enumerator,
                k,
                n,
                pending: VecDeque::new(),
                run: None,
                queue_samples: Some(paced.queue_samples),
            },
        ),
        Err(err) => fail_enum(err),
    }
}

/// Run for exactly `budget` ticks unless the enumerator finishes first.
/// Emissions produced along the way queue up for
/// [`enumpace_take_solution`]. A contract breach poisons the handle.
///
/// # Safety
/// `handle` must be a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_advance(
    handle: *mut EnumpaceEnumerator,
    budget: u64,
) -> EnumpaceStatus {
    let Some(handle) = handle.as_mut() else {
        return fail(EnumpaceStatus::NullArgument, "handle is required");
    };
    if handle.inner.is_finished() {
        return EnumpaceStatus::Ok;
    }
    match handle.inner.advance(budget) {
        Ok(events) => {
            for event in events {
                if let enumpace::process::EnumeratorEvent::Emitted { solution, at_cost } = event {
                    handle.pending.push_back((solution, at_cost));
                }
            }
            EnumpaceStatus::Ok
        }
        Err(err) => fail_enum(err),
    }
}

/// Number of emissions waiting in the hand-off buffer. Null yields 0.
///
/// # Safety
/// `handle` must be null or a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_pending_count(handle: *const EnumpaceEnumerator) -> u64 {
    handle.as_ref().map_or(0, |h| h.pending.len() as u64)
}

/// Pop the oldest buffered emission. `*out_solution` receives a
/// NUL-terminated copy to release with [`enumpace_string_free`], and
/// `*out_at_cost` the cumulative tick the emission rode on.
///
/// # Safety
/// `handle` must be a live pointer from this library; `out_solution` and
/// `out_at_cost` must be writable.
#[no_mangle]
pub unsafe extern "C" fn enumpace_take_solution(
    handle: *mut EnumpaceEnumerator,
    out_solution: *mut *mut c_char,
    out_at_cost: *mut u64,
) -> EnumpaceStatus {
    if handle.is_null() || out_solution.is_null() || out_at_cost.is_null() {
        return fail(
            EnumpaceStatus::NullArgument,
            "handle, out_solution, and out_at_cost are required",
        );
    }
    let handle = &mut *handle;
    let Some((solution, at_cost)) = handle.pending.pop_front() else {
        return fail(EnumpaceStatus::NothingPending, "no buffered emission");
    };
    match CString::new(solution.bytes().to_vec()) {
        Ok(text) => {
            *out_solution = text.into_raw();
            *out_at_cost = at_cost;
            EnumpaceStatus::Ok
        }
        Err(err) => {
            // Put the emission back so a NUL byte does not silently drop it.
            handle.pending.push_front((solution, at_cost));
            fail(
                EnumpaceStatus::InvalidArgument,
                format!("solution contains a NUL byte: {err}"),
            )
        }
    }
}

/// Whether the enumerator has reported termination. Null yields false.
///
/// # Safety
/// `handle` must be null or a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_is_finished(handle: *const EnumpaceEnumerator) -> bool {
    handle.as_ref().is_some_and(|h| h.inner.is_finished())
}

/// Total ticks consumed so far. Null yields 0.
///
/// # Safety
/// `handle` must be null or a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_cost_consumed(handle: *const EnumpaceEnumerator) -> u64 {
    handle.as_ref().map_or(0, |h| h.inner.cost_consumed())
}

/// Number of emissions produced so far, taken or not. Null yields 0.
///
/// # Safety
/// `handle` must be null or a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_emitted_count(handle: *const EnumpaceEnumerator) -> u64 {
    handle.as_ref().map_or(0, |h| h.inner.emitted_count())
}

/// Drive a fresh enumerator to termination, failing once `cost_cap` ticks
/// are consumed without one. On success the solutions and the delay trace
/// become readable through the accessors below.
///
/// # Safety
/// `handle` must be a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_run_to_completion(
    handle: *mut EnumpaceEnumerator,
    cost_cap: u64,
) -> EnumpaceStatus {
    let Some(handle) = handle.as_mut() else {
        return fail(EnumpaceStatus::NullArgument, "handle is required");
    };
    if handle.inner.cost_consumed() != 0 {
        return fail(
            EnumpaceStatus::InvalidArgument,
            "the recorded trace must cover the whole run; use a fresh enumerator",
        );
    }
    match run_to_completion(&mut handle.inner, cost_cap) {
        Ok(run) => {
            handle.run = Some(run);
            EnumpaceStatus::Ok
        }
        Err(err) => fail_enum(err),
    }
}

fn completed(handle: &EnumpaceEnumerator) -> Result<&CompletedRun, EnumpaceStatus> {
    handle.run.as_ref().ok_or_else(|| {
        fail(
            EnumpaceStatus::NoCompletedRun,
            "call enumpace_run_to_completion first",
        )
    })
}

/// Number of solutions a completed run produced.
///
/// # Safety
/// `handle` must be a live pointer from this library; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enumpace_solution_count(
    handle: *const EnumpaceEnumerator,
    out: *mut u64,
) -> EnumpaceStatus {
    if handle.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "handle and out are required");
    }
    match completed(&*handle) {
        Ok(run) => {
            *out = run.solutions.len() as u64;
            EnumpaceStatus::Ok
        }
        Err(status) => status,
    }
}

/// Copy the `index`-th solution (0-based, emission order) of a completed
/// run. Release the copy with [`enumpace_string_free`].
///
/// # Safety
/// `handle` must be a live pointer from this library; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enumpace_solution(
    handle: *const EnumpaceEnumerator,
    index: u64,
    out: *mut *mut c_char,
) -> EnumpaceStatus {
    if handle.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "handle and out are required");
    }
    let run = match completed(&*handle) {
        Ok(run) => run,
        Err(status) => return status,
    };
    let Some(solution) = run.solutions.get(index as usize) else {
        return fail(
            EnumpaceStatus::InvalidArgument,
            format!("index {index} is out of range for {} solutions", run.solutions.len()),
        );
    };
    match CString::new(solution.bytes().to_vec()) {
        Ok(text) => {
            *out = text.into_raw();
            EnumpaceStatus::Ok
        }
        Err(err) => fail(
            EnumpaceStatus::InvalidArgument,
            format!("solution contains a NUL byte: {err}"),
        ),
    }
}

/// Number of delays of a completed run: one per emission, plus the trailing
/// postcomputation delay.
///
/// # Safety
/// `handle` must be a live pointer from this library; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enumpace_delay_count(
    handle: *const EnumpaceEnumerator,
    out: *mut u64,
) -> EnumpaceStatus {
    if handle.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "handle and out are required");
    }
    match completed(&*handle) {
        Ok(run) => {
            *out = run.trace.delays().len() as u64;
            EnumpaceStatus::Ok
        }
        Err(status) => status,
    }
}

/// The `index`-th delay (0-based) of a completed run.
///
/// # Safety
/// `handle` must be a live pointer from this library; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enumpace_delay(
    handle: *const EnumpaceEnumerator,
    index: u64,
    out: *mut u64,
) -> EnumpaceStatus {
    if handle.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "handle and out are required");
    }
    let run = match completed(&*handle) {
        Ok(run) => run,
        Err(status) => return status,
    };
    let Some(&delay) = run.trace.delays().get(index as usize) else {
        return fail(
            EnumpaceStatus::InvalidArgument,
            format!("index {index} is out of range for {} delays", run.trace.delays().len()),
        );
    };
    *out = delay;
    EnumpaceStatus::Ok
}

/// Total ticks of a completed run.
///
/// # Safety
/// `handle` must be a live pointer from this library; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enumpace_total_cost(
    handle: *const EnumpaceEnumerator,
    out: *mut u64,
) -> EnumpaceStatus {
    if handle.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "handle and out are required");
    }
    match completed(&*handle) {
        Ok(run) => {
            *out = run.trace.total_cost();
            EnumpaceStatus::Ok
        }
        Err(status) => status,
    }
}

/// Deepest queue a regularized enumerator has reached so far, 0 before the
/// first release. Fails on a handle that never went through
/// [`enumpace_regularize`].
///
/// # Safety
/// `handle` must be a live pointer from this library; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enumpace_max_queue(
    handle: *const EnumpaceEnumerator,
    out: *mut u64,
) -> EnumpaceStatus {
    if handle.is_null() || out.is_null() {
        return fail(EnumpaceStatus::NullArgument, "handle and out are required");
    }
    let Some(samples) = (*handle).queue_samples.as_ref() else {
        return fail(
            EnumpaceStatus::InvalidArgument,
            "queue sizes exist only on regularized enumerators",
        );
    };
    let max = samples
        .lock()
        .expect("queue sample lock poisoned")
        .iter()
        .map(|sample| sample.queue_size as u64)
        .max()
        .unwrap_or(0);
    *out = max;
    EnumpaceStatus::Ok
}

/// Release a string obtained from this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or an unreleased string from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release an enumerator handle. Null is a no-op.
///
/// # Safety
/// `handle` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn enumpace_free(handle: *mut EnumpaceEnumerator) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
