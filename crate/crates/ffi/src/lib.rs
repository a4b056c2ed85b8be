//! C ABI over `adt-core`.
//!
//! Objects cross the boundary as opaque heap handles returned through out-pointers and
//! released with the matching `adt_*_free`. Every fallible call
//! returns an [`AdtStatus`]; the message of the last failure on the calling thread is
//! available from [`adt_last_error`]. Panics are caught and reported as
//! [`AdtStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use adt_core::algebra::{parse_operator, OperatorSum};
use adt_core::cobs_state::{pure_state, two_spin_state, StateSpec};
use adt_core::models::build_qsm_bond;
use adt_core::oracle::{exact_diagonalize, lehmann_greens};
use adt_core::sdeom::{assemble, GreensFunction, Kind, PoleClass};
use adt_core::Error;
use nalgebra::DVector;
use num_complex::Complex64;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Dimension = 3,
    Shape = 4,
    Validation = 5,
    MissingData = 6,
    Resource = 7,
    Singular = 8,
    PoleProximity = 9,
    Parse = 10,
    OutOfRange = 11,
    Panic = 12,
}

/// Green's function flavour: commutator (`Plus`) or anticommutator (`Minus`) residue sum.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdtKind {
    Plus = 0,
    Minus = 1,
}

impl From<AdtKind> for Kind {
    fn from(k: AdtKind) -> Self {
        match k {
            AdtKind::Plus => Kind::Plus,
            AdtKind::Minus => Kind::Minus,
        }
    }
}

/// Sparse Pauli-word operator.
pub struct AdtOperator {
    inner: OperatorSum,
}

/// State given by its expectation table, optionally with a wavefunction.
pub struct AdtState {
    inner: StateSpec,
}

/// Pole/residue representation of a two-time correlator.
pub struct AdtGreens {
    inner: GreensFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> AdtStatus {
    match e {
        Error::Dimension { .. } => AdtStatus::Dimension,
        Error::Shape(_) => AdtStatus::Shape,
        Error::Validation(_) => AdtStatus::Validation,
        Error::MissingData { .. } => AdtStatus::MissingData,
        Error::Resource { .. } => AdtStatus::Resource,
        Error::Singular(_) => AdtStatus::Singular,
        Error::PoleProximity { .. } => AdtStatus::PoleProximity,
        Error::Parse(_) => AdtStatus::Parse,
    }
}

/// Runs `f`, records failures and converts panics.
fn guard<F: FnOnce() -> Result<(), (AdtStatus, String)>>(f: F) -> AdtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            AdtStatus::Ok
        }
        Ok(Err((s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            AdtStatus::Panic
        }
    }
}

fn core(e: Error) -> (AdtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (AdtStatus, String) {
    (AdtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (AdtStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (AdtStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (AdtStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (AdtStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread; empty after a success.
///
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn adt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn adt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an operator expression such as `"0.5*sz:0 + X:1"` on `n_sites` sites.
///
/// # Safety
/// `src` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adt_operator_parse(
    src: *const c_char,
    n_sites: usize,
    out: *mut *mut AdtOperator,
) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let src = read_str(src, "src")?;
        let op = parse_operator(src, n_sites).map_err(core)?;
        *out = boxed(AdtOperator { inner: op });
        Ok(())
    })
}

/// # Safety
/// `op` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adt_operator_free(op: *mut AdtOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// # Safety
/// `op` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn adt_operator_n_terms(op: *const AdtOperator, out: *mut usize) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = borrow(op, "op")?.inner.len();
        Ok(())
    })
}

/// Text form of the operator; free with [`adt_string_free`].
///
/// # Safety
/// `op` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn adt_operator_to_string(op: *const AdtOperator, out: *mut *mut c_char) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let s = borrow(op, "op")?.inner.to_string();
        *out = CString::new(s).map_err(|e| (AdtStatus::Validation, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// `[a, b]` as a new handle.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adt_operator_commutator(
    a: *const AdtOperator,
    b: *const AdtOperator,
    out: *mut *mut AdtOperator,
) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let c = borrow(a, "a")?.inner.commutator(&borrow(b, "b")?.inner).map_err(core)?;
        *out = boxed(AdtOperator { inner: c });
        Ok(())
    })
}

/// Two-spin bond `J^z s^z_a s^z_b + h^z Σ s^z + h^x Σ s^x`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adt_model_qsm_bond(jz: f64, hz: f64, hx: f64, out: *mut *mut AdtOperator) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(AdtOperator {
            inner: build_qsm_bond(jz, hz, hx).map_err(core)?,
        });
        Ok(())
    })
}

/// `sin θ |↑↓> + cos θ |↓↑>` with its full expectation table.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adt_state_two_spin(theta: f64, out: *mut *mut AdtState) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if !theta.is_finite() {
            return Err((AdtStatus::Validation, "theta is not finite".into()));
        }
        *out = boxed(AdtState {
            inner: two_spin_state(theta),
        });
        Ok(())
    })
}

/// Pure state from `len` complex amplitudes; site 0 is the most significant index bit.
///
/// # Safety
/// `re` and `im` must each point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adt_state_from_amplitudes(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut AdtState,
) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if re.is_null() || im.is_null() {
            return Err(null("amplitudes"));
        }
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let psi = nalgebra_vector(re, im);
        *out = boxed(AdtState {
            inner: pure_state(&psi).map_err(core)?,
        });
        Ok(())
    })
}

fn nalgebra_vector(re: &[f64], im: &[f64]) -> DVector<Complex64> {
    DVector::from_iterator(re.len(), re.iter().zip(im).map(|(a, b)| Complex64::new(*a, *b)))
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adt_state_free(s: *mut AdtState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `<op>` in the state.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adt_state_expect(
    s: *const AdtState,
    op: *const AdtOperator,
    out_re: *mut f64,
    out_im: *mut f64,
) -> AdtStatus {
    guard(|| {
        let re = out_ptr(out_re, "out_re")?;
        let im = out_ptr(out_im, "out_im")?;
        let v = borrow(s, "state")?.inner.expect(&borrow(op, "op")?.inner).map_err(core)?;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// `G_kind[o_i; o_f]` from the equations of motion on the Krylov closure of `o_i`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adt_greens_sdeom(
    o_i: *const AdtOperator,
    o_f: *const AdtOperator,
    h: *const AdtOperator,
    s: *const AdtState,
    kind: AdtKind,
    out: *mut *mut AdtGreens,
) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let sys = assemble(
            &borrow(o_i, "o_i")?.inner,
            &borrow(o_f, "o_f")?.inner,
            &borrow(h, "h")?.inner,
            &borrow(s, "state")?.inner,
            kind.into(),
        )
        .map_err(core)?;
        *out = boxed(AdtGreens { inner: sys.greens() });
        Ok(())
    })
}

/// `G_kind[o_i; o_f]` from the exact eigenbasis sum; the state needs a wavefunction that
/// is an eigenvector of `h`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adt_greens_lehmann(
    o_i: *const AdtOperator,
    o_f: *const AdtOperator,
    h: *const AdtOperator,
    s: *const AdtState,
    kind: AdtKind,
    out: *mut *mut AdtGreens,
) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let state = &borrow(s, "state")?.inner;
        let psi = state
            .psi()
            .ok_or_else(|| (AdtStatus::Validation, "state has no wavefunction".to_string()))?;
        let spec = exact_diagonalize(&borrow(h, "h")?.inner).map_err(core)?;
        let g = lehmann_greens(&spec, psi, &borrow(o_i, "o_i")?.inner, &borrow(o_f, "o_f")?.inner, kind.into())
            .map_err(core)?;
        *out = boxed(AdtGreens { inner: g });
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adt_greens_free(g: *mut AdtGreens) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn adt_greens_n_poles(g: *const AdtGreens, out: *mut usize) -> AdtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = borrow(g, "greens")?.inner.poles.len();
        Ok(())
    })
}

/// Pole `index` in ascending position order; `is_static` is 1 for a zero-frequency pole.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adt_greens_pole(
    g: *const AdtGreens,
    index: usize,
    position: *mut f64,
    residue_re: *mut f64,
    residue_im: *mut f64,
    is_static: *mut c_int,
) -> AdtStatus {
    guard(|| {
        let position = out_ptr(position, "position")?;
        let residue_re = out_ptr(residue_re, "residue_re")?;
        let residue_im = out_ptr(residue_im, "residue_im")?;
        let is_static = out_ptr(is_static, "is_static")?;
        let poles = &borrow(g, "greens")?.inner.poles;
        let p = poles.get(index).ok_or_else(|| {
            (
                AdtStatus::OutOfRange,
                format!("pole index {index} out of range ({} poles)", poles.len()),
            )
        })?;
        *position = p.position;
        *residue_re = p.residue.re;
        *residue_im = p.residue.im;
        *is_static = c_int::from(p.class == PoleClass::Static);
        Ok(())
    })
}

/// `G(ω) = Σ r / (ω − p)`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adt_greens_evaluate(
    g: *const AdtGreens,
    omega_re: f64,
    omega_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> AdtStatus {
    guard(|| {
        let re = out_ptr(out_re, "out_re")?;
        let im = out_ptr(out_im, "out_im")?;
        let v = borrow(g, "greens")?
            .inner
            .evaluate(Complex64::new(omega_re, omega_im))
            .map_err(core)?;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}
