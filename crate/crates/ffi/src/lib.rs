//! C ABI over `lode_repair`.
//!
//! Levels and search results cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every fallible call
//! returns an [`LrStatus`]; on failure a message is available from
//! [`lr_last_error_message`] until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lode_repair::level::{count_tiles, hamming_distance};
use lode_repair::operators::{corrupt_level, Band, CorruptError};
use lode_repair::search::rng_from_seed;
use lode_repair::{flood_fill, repair, total_fitness, Algorithm, Level, RepairOutcome, SearchParams, TileKind};

/// A parsed level.
pub struct LrLevel(Level);

/// The outcome of one repair run.
pub struct LrSearchResult(RepairOutcome);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Param = 4,
    NotPlayable = 5,
    BandUnreachable = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrAlgorithm {
    RandomSearch = 0,
    HillClimber = 1,
    EvolutionStrategy = 2,
    MapElites = 3,
}

impl From<LrAlgorithm> for Algorithm {
    fn from(a: LrAlgorithm) -> Algorithm {
        match a {
            LrAlgorithm::RandomSearch => Algorithm::RandomSearch,
            LrAlgorithm::HillClimber => Algorithm::HillClimber,
            LrAlgorithm::EvolutionStrategy => Algorithm::EvolutionStrategy,
            LrAlgorithm::MapElites => Algorithm::MapElites,
        }
    }
}

/// Fitness of a level against a start level.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LrFitness {
    pub playability: f64,
    pub similarity: f64,
    pub total: f64,
    pub playable: bool,
    pub gold_collect: u32,
    pub gold_total: u32,
    pub tiles_explored: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrRepairParams {
    pub budget: u64,
    pub mu: u32,
    pub lambda: u32,
    pub init_count: u32,
    pub m_max: u32,
    /// Charge the ES initial population to the budget.
    pub count_initialization: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LrResultSummary {
    pub success: bool,
    pub changes: u32,
    pub best_fitness: f64,
    pub evals_used: u64,
    pub iterations: u64,
    /// Archive coverage in `[0, 1]`, or -1 when the run kept no archive.
    pub coverage: f64,
    /// Archive QD score, or -1 when the run kept no archive.
    pub qd_score: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: LrStatus, msg: impl Into<String>) -> LrStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> LrStatus) -> LrStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(LrStatus::Panic, "internal panic"))
}

unsafe fn level_ref<'a>(p: *const LrLevel) -> Result<&'a Level, LrStatus> {
    p.as_ref().map(|l| &l.0).ok_or_else(|| fail(LrStatus::NullPointer, "null level handle"))
}

fn into_handle<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(LrStatus::NullPointer, concat!("null argument `", stringify!($p), "`"));
        })+
    };
}

/// Message for the most recent failure on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a NUL-terminated level text into a new handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_level_parse(text: *const c_char, out: *mut *mut LrLevel) -> LrStatus {
    non_null!(text, out);
    guard(|| {
        let s = try_status!(CStr::from_ptr(text)
            .to_str()
            .map_err(|e| fail(LrStatus::InvalidUtf8, e.to_string())));
        let level = try_status!(Level::parse(s).map_err(|e| fail(LrStatus::Parse, e.to_string())));
        *out = into_handle(LrLevel(level));
        LrStatus::Ok
    })
}

/// Frees a level handle. NULL is ignored.
///
/// # Safety
/// `level` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lr_level_free(level: *mut LrLevel) {
    if !level.is_null() {
        drop(Box::from_raw(level));
    }
}

/// Level text, one LF-terminated line per row. Free with [`lr_string_free`].
/// Returns NULL if `level` is NULL.
///
/// # Safety
/// `level` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn lr_level_serialize(level: *const LrLevel) -> *mut c_char {
    match level.as_ref() {
        Some(l) => CString::new(l.0.serialize()).map_or(ptr::null_mut(), CString::into_raw),
        None => {
            set_error("null level handle");
            ptr::null_mut()
        }
    }
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of cells whose tiles differ.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lr_level_hamming(a: *const LrLevel, b: *const LrLevel, out: *mut u32) -> LrStatus {
    non_null!(out);
    let (a, b) = (try_status!(level_ref(a)), try_status!(level_ref(b)));
    *out = hamming_distance(a, b) as u32;
    LrStatus::Ok
}

/// Number of tiles drawn with `glyph` (one of `.bB-#GEM`).
///
/// # Safety
/// `level` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lr_level_count_tiles(level: *const LrLevel, glyph: c_char, out: *mut u32) -> LrStatus {
    non_null!(out);
    let level = try_status!(level_ref(level));
    let kind = try_status!(u8::try_from(glyph)
        .ok()
        .and_then(|g| TileKind::from_glyph(g as char))
        .ok_or_else(|| fail(LrStatus::Param, format!("unknown tile glyph {glyph}"))));
    *out = count_tiles(level, kind) as u32;
    LrStatus::Ok
}

/// Fitness of `level` relative to `start`.
///
/// # Safety
/// `level` and `start` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lr_evaluate(level: *const LrLevel, start: *const LrLevel, out: *mut LrFitness) -> LrStatus {
    non_null!(out);
    let (level, start) = (try_status!(level_ref(level)), try_status!(level_ref(start)));
    guard(|| {
        let f = total_fitness(level, start);
        let r = flood_fill(level);
        *out = LrFitness {
            playability: f.playability,
            similarity: f.similarity,
            total: f.total,
            playable: f.playable,
            gold_collect: r.gold_collect,
            gold_total: r.gold_total,
            tiles_explored: r.tiles_explored,
        };
        LrStatus::Ok
    })
}

/// Default parameters for `algo`.
#[no_mangle]
pub extern "C" fn lr_repair_params_default(algo: LrAlgorithm) -> LrRepairParams {
    let p = SearchParams::defaults_for(algo.into());
    LrRepairParams {
        budget: p.budget,
        mu: p.mu as u32,
        lambda: p.lambda as u32,
        init_count: p.init_count as u32,
        m_max: p.mutation.m_max,
        count_initialization: p.count_initialization,
    }
}

/// Runs one single-threaded repair of `start`.
///
/// `params` may be NULL for the algorithm's defaults.
///
/// # Safety
/// `start` must be a live handle, `params` NULL or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lr_repair(
    start: *const LrLevel,
    algo: LrAlgorithm,
    params: *const LrRepairParams,
    seed: u64,
    out: *mut *mut LrSearchResult,
) -> LrStatus {
    non_null!(out);
    let start = try_status!(level_ref(start));
    let algo = Algorithm::from(algo);
    let mut p = SearchParams::defaults_for(algo);
    if let Some(given) = params.as_ref() {
        p.budget = given.budget;
        p.mu = given.mu as usize;
        p.lambda = given.lambda as usize;
        p.init_count = given.init_count as usize;
        p.mutation.m_max = given.m_max;
        p.count_initialization = given.count_initialization;
    }
    guard(|| match repair(start, algo, &p, seed) {
        Ok(outcome) => {
            *out = into_handle(LrSearchResult(outcome));
            LrStatus::Ok
        }
        Err(e) => fail(LrStatus::Param, e.to_string()),
    })
}

/// Headline numbers of a repair run.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lr_result_summary(result: *const LrSearchResult, out: *mut LrResultSummary) -> LrStatus {
    non_null!(result, out);
    let o = &(*result).0;
    let r = &o.result;
    *out = LrResultSummary {
        success: r.success,
        changes: r.changes,
        best_fitness: r.best_fitness,
        evals_used: r.evals_used,
        iterations: r.iterations,
        coverage: o.archive.as_ref().map_or(-1.0, |a| a.coverage()),
        qd_score: o.archive.as_ref().map_or(-1.0, |a| a.qd_score()),
    };
    LrStatus::Ok
}

/// Copies the best level of a run into a new handle.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lr_result_best(result: *const LrSearchResult, out: *mut *mut LrLevel) -> LrStatus {
    non_null!(result, out);
    *out = into_handle(LrLevel((*result).0.result.best.clone()));
    LrStatus::Ok
}

/// Frees a result handle. NULL is ignored.
///
/// # Safety
/// `result` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lr_result_free(result: *mut LrSearchResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Breaks a playable level so that between `lo`% and `hi`% of its gold is reachable.
///
/// # Safety
/// `playable` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lr_corrupt(
    playable: *const LrLevel,
    lo: u32,
    hi: u32,
    seed: u64,
    max_attempts: u32,
    out: *mut *mut LrLevel,
) -> LrStatus {
    non_null!(out);
    let playable = try_status!(level_ref(playable));
    let band = try_status!(Band::new(lo, hi).map_err(|e| fail(LrStatus::Param, e.to_string())));
    guard(|| {
        let mut rng = rng_from_seed(seed);
        match corrupt_level(playable, band, &mut rng, max_attempts) {
            Ok(level) => {
                *out = into_handle(LrLevel(level));
                LrStatus::Ok
            }
            Err(e @ CorruptError::NotPlayable) => fail(LrStatus::NotPlayable, e.to_string()),
            Err(e @ CorruptError::BandUnreachable { .. }) => fail(LrStatus::BandUnreachable, e.to_string()),
            Err(e @ CorruptError::Level(_)) => fail(LrStatus::Parse, e.to_string()),
        }
    })
}
