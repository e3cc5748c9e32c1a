//! C interface. Every entry point returns an [`IfStatus`]; on failure the
//! message is kept per thread and can be read with
//! [`if_last_error_message`]. Panics never cross the boundary.
//!
//! Ownership: handles and strings returned through out-pointers belong to
//! the caller and are released with [`if_model_free`] / [`if_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ising_forge::ed::{assemble, lowest_k_values};
use ising_forge::kitaev::{self, KitaevParams};
use ising_forge::model_io::{self, ModelFile};
use ising_forge::transmute::{effective_qubit_model, transmute_qubit_model, TransmutePath};
use ising_forge::{potts, rydberg, selftest, Error};

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Schema = 3,
    Numeric = 4,
    Panic = 5,
}

/// Path selector for [`if_transmute`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfPath {
    FourState = 0,
    ThreeState = 1,
}

/// Opaque model handle: either a qubit model or a clock-variable Ising model.
pub struct IfModel {
    inner: ModelFile,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IfSpinCouplings {
    pub j_pm: f64,
    pub j_pp: f64,
    pub phase: f64,
    pub ratio: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IfPottsCouplings {
    pub j_eff: f64,
    pub delta: f64,
    pub nnn_flip: f64,
    pub triple_term: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn status_of(e: &Error) -> IfStatus {
    match e {
        Error::Schema { .. } | Error::MissingParameter(_) => IfStatus::Schema,
        Error::NoConvergence { .. } | Error::Gapless(_) | Error::NotProjective(_) | Error::NotHermitian(_) => IfStatus::Numeric,
        _ => IfStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (IfStatus, String)>) -> IfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            IfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg =
                payload.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| payload.downcast_ref::<String>().cloned()).unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            IfStatus::Panic
        }
    }
}

fn lib<T>(r: ising_forge::Result<T>) -> Result<T, (IfStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (IfStatus, String) {
    (IfStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a valid value of `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (IfStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` must be null or point to writable storage for a `T`.
unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), (IfStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

fn boxed(m: ModelFile) -> *mut IfModel {
    Box::into_raw(Box::new(IfModel { inner: m }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn if_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn if_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Parse a model file (qubit or Ising) from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_model_from_json(json: *const c_char, out: *mut *mut IfModel) -> IfStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (IfStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let m = lib(model_io::from_str(text))?;
        write(out, boxed(m), "out")
    })
}

/// Serialize a model to JSON; release the string with [`if_string_free`].
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_model_to_json(model: *const IfModel, out: *mut *mut c_char) -> IfStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let s = CString::new(model_io::to_string(&m.inner)).map_err(|e| (IfStatus::InvalidArgument, e.to_string()))?;
        write(out, s.into_raw(), "out")
    })
}

/// 2 for a qubit model, otherwise the clock dimension (3 or 4); 0 for null.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn if_model_site_dim(model: *const IfModel) -> c_int {
    match model.as_ref().map(|m| &m.inner) {
        Some(ModelFile::Qubit(_)) => 2,
        Some(ModelFile::Ising(m)) => m.site_dim as c_int,
        None => 0,
    }
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn if_model_free(model: *mut IfModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn if_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Transmute a qubit model. `lambda` is stored when finite; pass NAN to
/// leave the field strength unset.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_transmute(model: *const IfModel, path: IfPath, phi: f64, lambda: f64, out: *mut *mut IfModel) -> IfStatus {
    guard(|| {
        let ModelFile::Qubit(q) = &deref(model, "model")?.inner else {
            return Err((IfStatus::InvalidArgument, "transmute needs a qubit model".into()));
        };
        let path = match path {
            IfPath::FourState => TransmutePath::FourState,
            IfPath::ThreeState => TransmutePath::ThreeState,
        };
        let mut ising = lib(transmute_qubit_model(q, phi, path))?;
        if lambda.is_finite() {
            ising = ising.with_lambda(lambda);
            lib(ising.validate())?;
        }
        write(out, boxed(ModelFile::Ising(ising)), "out")
    })
}

/// Leading-order qubit model of an Ising model.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_effective_model(model: *const IfModel, out: *mut *mut IfModel) -> IfStatus {
    guard(|| {
        let ModelFile::Ising(m) = &deref(model, "model")?.inner else {
            return Err((IfStatus::InvalidArgument, "projection needs an Ising model".into()));
        };
        write(out, boxed(ModelFile::Qubit(lib(effective_qubit_model(m))?)), "out")
    })
}

/// Lowest `k` eigenvalues, ascending, into `levels[0..k]`.
///
/// # Safety
/// `model` must be a live handle; `levels` must be valid for `k` doubles.
#[no_mangle]
pub unsafe extern "C" fn if_model_lowest_levels(model: *const IfModel, k: usize, levels: *mut f64) -> IfStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if levels.is_null() {
            return Err(null("levels"));
        }
        let op = match &m.inner {
            ModelFile::Qubit(q) => lib(assemble(q))?,
            ModelFile::Ising(i) => lib(assemble(i))?,
        };
        let spec = lib(lowest_k_values(&op, k))?;
        ptr::copy_nonoverlapping(spec.eigenvalues.as_ptr(), levels, k.min(spec.eigenvalues.len()));
        Ok(())
    })
}

/// Many-body gap of the solvable Kitaev line on a `grid_n^2` mesh.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_kitaev_gap(jx: f64, jy: f64, jz: f64, lambda: f64, grid_n: usize, out: *mut f64) -> IfStatus {
    guard(|| {
        let p = lib(KitaevParams::new(jx, jy, jz, lambda))?;
        write(out, lib(kitaev::gap(&p, grid_n))?, "out")
    })
}

/// Chern number of the lower bands; `Numeric` when the spectrum is gapless.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_kitaev_chern(jx: f64, jy: f64, jz: f64, lambda: f64, grid_n: usize, out: *mut c_int) -> IfStatus {
    guard(|| {
        let p = lib(KitaevParams::new(jx, jy, jz, lambda))?;
        write(out, lib(kitaev::chern_number(&p, grid_n))? as c_int, "out")
    })
}

/// Spin couplings from C6 coefficients (GHz um^6) at separation `r_um`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_rydberg_couplings(c6_nn: f64, c6_tt: f64, c6_nt: f64, r_um: f64, out: *mut IfSpinCouplings) -> IfStatus {
    guard(|| {
        let pe = lib(rydberg::PairEnergies::from_c6(rydberg::C6Triple { c6_nn, c6_tt, c6_nt, r_um }))?;
        let k = rydberg::couplings(&pe);
        write(out, IfSpinCouplings { j_pm: k.j_pm, j_pp: k.j_pp, phase: k.phase, ratio: k.ratio() }, "out")
    })
}

/// Second-order couplings of the three-state Potts chain.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_potts_effective(j: f64, lambda: f64, out: *mut IfPottsCouplings) -> IfStatus {
    guard(|| {
        let r = lib(potts::effective_xxz(j, lambda))?;
        write(out, IfPottsCouplings { j_eff: r.j_eff, delta: r.delta, nnn_flip: r.nnn_flip, triple_term: r.triple_term }, "out")
    })
}

/// Number of acceptance criteria.
#[no_mangle]
pub extern "C" fn if_selftest_count() -> usize {
    selftest::CRITERIA
}

/// Run criterion `id` (1-based); `passed` receives 1 or 0.
///
/// # Safety
/// `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn if_selftest_run(id: usize, passed: *mut c_int) -> IfStatus {
    guard(|| {
        if !(1..=selftest::CRITERIA).contains(&id) {
            return Err((IfStatus::InvalidArgument, format!("criterion id {id} outside 1..={}", selftest::CRITERIA)));
        }
        let r = selftest::run_criterion(id);
        if !r.passed {
            set_error(&r.verdict());
        }
        write(passed, c_int::from(r.passed), "passed")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let mut buf = [0 as c_char; 256];
        unsafe { if_last_error_message(buf.as_mut_ptr(), buf.len()) };
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn null_out_pointer_is_reported() {
        let st = unsafe { if_kitaev_gap(1.0, 1.0, 1.0, 1.0, 11, ptr::null_mut()) };
        assert_eq!(st, IfStatus::NullPointer);
        assert!(last_error().contains("out"));
    }

    #[test]
    fn error_message_truncates() {
        let mut out = 0.0;
        let st = unsafe { if_kitaev_gap(1.0, 1.0, 1.0, 1.0, 1, &mut out) };
        assert_eq!(st, IfStatus::InvalidArgument);
        let mut small = [0 as c_char; 4];
        let full = unsafe { if_last_error_message(small.as_mut_ptr(), small.len()) };
        assert!(full > 3);
        assert_eq!(unsafe { CStr::from_ptr(small.as_ptr()) }.to_bytes().len(), 3);
    }

    #[test]
    fn success_clears_the_message() {
        let mut out = IfPottsCouplings::default();
        assert_eq!(unsafe { if_potts_effective(1.0, 0.0, &mut out) }, IfStatus::InvalidArgument);
        assert_eq!(unsafe { if_potts_effective(1.0, 10.0, &mut out) }, IfStatus::Ok);
        assert!(last_error().is_empty());
        assert!((out.j_eff - (1.0 - 1.0 / 60.0)).abs() < 1e-15);
    }

    #[test]
    fn version_string() {
        let v = unsafe { CStr::from_ptr(if_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
