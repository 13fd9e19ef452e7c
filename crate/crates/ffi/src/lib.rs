//! C ABI for the steerclone library.
//!
//! Every fallible function returns an [`ScStatus`]; on failure a message is
//! kept per thread and can be read with [`sc_last_error_message`]. Objects
//! are handed out as opaque pointers and must be released with the matching
//! `*_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use steerclone::cloning::VCoefficients;
use steerclone::metrics::{self, SphereQuadrature};
use steerclone::perfect::perfect_check;
use steerclone::qmat::CMatrix;
use steerclone::quantum::{parse_state, zero_discord_check, DensityMatrix};
use steerclone::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    InvalidState = 4,
    NotBellDiagonal = 5,
    Parse = 6,
    Io = 7,
    Internal = 8,
    Panic = 9,
}

/// Cloner amplitudes (v0, v1, v2, v3), normalized.
pub struct ScCoefficients(VCoefficients);

/// Validated bipartite density matrix.
pub struct ScDensityMatrix(DensityMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ScSteeringPair {
    pub t_ab: [f64; 3],
    pub t_ac: [f64; 3],
    pub s_ab: f64,
    pub s_ac: f64,
    pub steerable_ab: bool,
    pub steerable_ac: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ScPerfectResult {
    pub is_zero_discord: bool,
    pub pass: bool,
    pub max_commutator: f64,
    /// NaN when the state is not zero-discord.
    pub max_deviation_b: f64,
    /// NaN when the state is not zero-discord.
    pub max_deviation_c: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ScStatus {
    match e {
        Error::DimensionMismatch(_) => ScStatus::DimensionMismatch,
        Error::NotHermitian(_) | Error::NotPsd(_) | Error::InvalidState(_) => ScStatus::InvalidState,
        Error::NotBellDiagonal { .. } => ScStatus::NotBellDiagonal,
        Error::Parse(_) | Error::Json(_) => ScStatus::Parse,
        Error::Io(_) => ScStatus::Io,
        Error::InvalidMeasurement(_)
        | Error::NotOrthonormal(_)
        | Error::InvalidCoefficients(_)
        | Error::Unsupported(_) => ScStatus::InvalidArgument,
        Error::InvariantViolation(_) => ScStatus::Internal,
    }
}

fn fail(status: ScStatus, msg: impl Into<String>) -> ScStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ScStatus>) -> ScStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ScStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(ScStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: steerclone::Result<T>) -> Result<T, ScStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, ScStatus> {
    p.as_ref().ok_or_else(|| fail(ScStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, ScStatus> {
    p.as_mut().ok_or_else(|| fail(ScStatus::NullPointer, format!("{what} is null")))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, ScStatus> {
    if p.is_null() {
        return Err(fail(ScStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ScStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn quadrature(p: *const c_char) -> Result<SphereQuadrature, ScStatus> {
    if p.is_null() {
        return Ok(SphereQuadrature::default_grid());
    }
    lib(SphereQuadrature::parse(str_arg(p, "quadrature")?))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds normalized coefficients from real parts `re[4]` and optional
/// imaginary parts `im[4]` (may be NULL). The input norm is written to
/// `norm_out` when it is not NULL.
///
/// # Safety
/// `re` must point to 4 doubles, `im` to 4 doubles or be NULL, and `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_coefficients_new(
    re: *const f64,
    im: *const f64,
    norm_out: *mut f64,
    out: *mut *mut ScCoefficients,
) -> ScStatus {
    guard(|| {
        let slot = self::out(out, "out")?;
        let re = deref(re.cast::<[f64; 4]>(), "re")?;
        let im = if im.is_null() { [0.0; 4] } else { *im.cast::<[f64; 4]>() };
        let amps = std::array::from_fn(|k| Complex64::new(re[k], im[k]));
        let (v, norm) = lib(VCoefficients::normalized(amps))?;
        if let Some(n) = norm_out.as_mut() {
            *n = norm;
        }
        *slot = Box::into_raw(Box::new(ScCoefficients(v)));
        Ok(())
    })
}

/// Parses "v0,v1,v2,v3" (complex entries as "re:im") into normalized
/// coefficients.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_coefficients_parse(
    text: *const c_char,
    norm_out: *mut f64,
    out: *mut *mut ScCoefficients,
) -> ScStatus {
    guard(|| {
        let slot = self::out(out, "out")?;
        let (v, norm) = lib(VCoefficients::parse(str_arg(text, "text")?))?;
        if let Some(n) = norm_out.as_mut() {
            *n = norm;
        }
        *slot = Box::into_raw(Box::new(ScCoefficients(v)));
        Ok(())
    })
}

/// Writes the stored amplitudes into `re[4]` and `im[4]`.
///
/// # Safety
/// `v` must come from this library; `re` and `im` must hold 4 doubles each.
#[no_mangle]
pub unsafe extern "C" fn sc_coefficients_get(v: *const ScCoefficients, re: *mut f64, im: *mut f64) -> ScStatus {
    guard(|| {
        let v = deref(v, "v")?;
        let re = out(re.cast::<[f64; 4]>(), "re")?;
        let im = out(im.cast::<[f64; 4]>(), "im")?;
        for (k, z) in v.0.amplitudes().iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `v` must come from this library and not be used afterwards. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sc_coefficients_free(v: *mut ScCoefficients) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// F_B = (1 + 2v0²)/3 and F_C = (1 + 2|v0'|²)/3.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_closed_form_fidelities(v: *const ScCoefficients, f_b: *mut f64, f_c: *mut f64) -> ScStatus {
    guard(|| {
        let v = deref(v, "v")?;
        let (b, c) = metrics::closed_form_fidelities(&v.0);
        *out(f_b, "f_b")? = b;
        *out(f_c, "f_c")? = c;
        Ok(())
    })
}

/// Direction-averaged fidelities by quadrature. `quadrature` is a scheme
/// string such as "grid:64x128" or "mc:100000:7"; NULL selects the default
/// grid. `std_err` (nullable) receives the two Monte Carlo standard errors.
///
/// # Safety
/// `v`, `f_b` and `f_c` must be valid; `quadrature` NULL or NUL-terminated;
/// `std_err` NULL or pointing to 2 doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_averaged_fidelities(
    v: *const ScCoefficients,
    quadrature: *const c_char,
    f_b: *mut f64,
    f_c: *mut f64,
    std_err: *mut f64,
) -> ScStatus {
    guard(|| {
        let v = deref(v, "v")?;
        let q = self::quadrature(quadrature)?;
        let f = lib(metrics::averaged_fidelities(&v.0, &q))?;
        *out(f_b, "f_b")? = f.f_b.value;
        *out(f_c, "f_c")? = f.f_c.value;
        if let Some(se) = std_err.cast::<[f64; 2]>().as_mut() {
            *se = [f.f_b.std_err, f.f_c.std_err];
        }
        Ok(())
    })
}

/// Correlation diagonals and steering measures of both clone pairs.
///
/// # Safety
/// `v` and `result` must be valid; `quadrature` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sc_steering_pair(
    v: *const ScCoefficients,
    quadrature: *const c_char,
    result: *mut ScSteeringPair,
) -> ScStatus {
    guard(|| {
        let v = deref(v, "v")?;
        let q = self::quadrature(quadrature)?;
        let p = lib(metrics::steering_pair(&v.0, &q))?;
        *out(result, "result")? = ScSteeringPair {
            t_ab: p.t_ab.t,
            t_ac: p.t_ac.t,
            s_ab: p.s_ab,
            s_ac: p.s_ac,
            steerable_ab: p.steerable_ab,
            steerable_ac: p.steerable_ac,
        };
        Ok(())
    })
}

/// Mean |T x| over the sphere for a diagonal correlation matrix.
///
/// # Safety
/// `t` must point to 3 doubles and `s` be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_steering_measure(t: *const f64, quadrature: *const c_char, s: *mut f64) -> ScStatus {
    guard(|| {
        let t = deref(t.cast::<[f64; 3]>(), "t")?;
        let q = self::quadrature(quadrature)?;
        *out(s, "s")? = metrics::steering_s(&metrics::CorrelationDiagonal::new(*t), &q);
        Ok(())
    })
}

/// (1−a) + (1−b) + √((1−a)(1−b)), the left side of both trade-off bounds.
#[no_mangle]
pub extern "C" fn sc_tradeoff_lhs(a: f64, b: f64) -> f64 {
    metrics::nocloning_lhs(a, b)
}

/// Density matrix on C^dA ⊗ C^dB from row-major real and imaginary parts of
/// length (dA·dB)². `im` may be NULL for a real matrix.
///
/// # Safety
/// `re` (and `im` if not NULL) must hold (dA·dB)² doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_state_new(
    d_a: usize,
    d_b: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut ScDensityMatrix,
) -> ScStatus {
    guard(|| {
        let slot = self::out(out, "out")?;
        if re.is_null() {
            return Err(fail(ScStatus::NullPointer, "re is null"));
        }
        let n = d_a
            .checked_mul(d_b)
            .filter(|&n| n > 0 && n <= 64)
            .ok_or_else(|| fail(ScStatus::InvalidArgument, format!("unsupported dims ({d_a}, {d_b})")))?;
        let re = std::slice::from_raw_parts(re, n * n);
        let im = if im.is_null() { None } else { Some(std::slice::from_raw_parts(im, n * n)) };
        let data = (0..n * n)
            .map(|i| Complex64::new(re[i], im.map_or(0.0, |m| m[i])))
            .collect();
        let m = lib(CMatrix::from_vec(data))?;
        *slot = Box::into_raw(Box::new(ScDensityMatrix(lib(DensityMatrix::new(m, vec![d_a, d_b]))?)));
        Ok(())
    })
}

/// Parses the JSON state format {"dims": [dA, dB], "matrix": [[re, im], ...]}.
///
/// # Safety
/// `json` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sc_state_from_json(json: *const c_char, out: *mut *mut ScDensityMatrix) -> ScStatus {
    guard(|| {
        let slot = self::out(out, "out")?;
        let rho = lib(parse_state(str_arg(json, "json")?))?;
        *slot = Box::into_raw(Box::new(ScDensityMatrix(rho)));
        Ok(())
    })
}

/// Writes the subsystem dimensions.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_state_dims(state: *const ScDensityMatrix, d_a: *mut usize, d_b: *mut usize) -> ScStatus {
    guard(|| {
        let (a, b) = lib(deref(state, "state")?.0.bipartite_dims())?;
        *out(d_a, "d_a")? = a;
        *out(d_b, "d_b")? = b;
        Ok(())
    })
}

/// # Safety
/// `state` must come from this library and not be used afterwards. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sc_state_free(state: *mut ScDensityMatrix) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Commutator test on ρ_B and the η operators. `seed` drives the random
/// combination used to find the common eigenbasis.
///
/// # Safety
/// `state`, `is_zero_discord` and `max_commutator` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_zero_discord_check(
    state: *const ScDensityMatrix,
    tol: f64,
    seed: u64,
    is_zero_discord: *mut bool,
    max_commutator: *mut f64,
) -> ScStatus {
    guard(|| {
        let rho = deref(state, "state")?;
        if tol.is_nan() || tol <= 0.0 {
            return Err(fail(ScStatus::InvalidArgument, format!("tol must be positive, got {tol}")));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let cert = lib(zero_discord_check(&rho.0, tol, &mut rng))?;
        *out(is_zero_discord, "is_zero_discord")? = cert.is_zero_discord;
        *out(max_commutator, "max_commutator")? = cert.max_commutator;
        Ok(())
    })
}

/// Full perfect-cloning check: certificate, constructive copier and
/// verification on 50 seeded measurements.
///
/// # Safety
/// `state` and `result` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_perfect_check(
    state: *const ScDensityMatrix,
    tol: f64,
    seed: u64,
    result: *mut ScPerfectResult,
) -> ScStatus {
    guard(|| {
        let rho = deref(state, "state")?;
        if tol.is_nan() || tol <= 0.0 {
            return Err(fail(ScStatus::InvalidArgument, format!("tol must be positive, got {tol}")));
        }
        let o = lib(perfect_check(&rho.0, tol, seed))?;
        let (db, dc) = o
            .clone_report
            .as_ref()
            .map_or((f64::NAN, f64::NAN), |r| (r.max_deviation_b, r.max_deviation_c));
        *out(result, "result")? = ScPerfectResult {
            is_zero_discord: o.certificate.is_zero_discord,
            pass: o.pass(),
            max_commutator: o.certificate.max_commutator,
            max_deviation_b: db,
            max_deviation_c: dc,
        };
        Ok(())
    })
}
