//! C ABI for `qudit-wigner`.
//!
//! Conventions:
//!
//! - Every fallible function returns a [`QwStatus`]; results come back through
//!   out-pointers, which are written only on `QW_OK`.
//! - Complex matrices are passed as interleaved `(re, im)` doubles, row-major,
//!   so an `N×N` matrix is `2·N·N` doubles.
//! - Handles ([`QwWigner`], [`QwKernel`]) are opaque and owned by the caller
//!   once returned; release them with the matching `*_free`. Freeing null is
//!   a no-op.
//! - After a failure, [`qw_last_error_message`] describes it. The message is
//!   per thread and survives until the next failing call on that thread.
//! - Panics never cross the boundary; they surface as `QW_ERR_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;
use qudit_wigner::entanglement::{EntanglementRoute, TwoQutritScenario};
use qudit_wigner::field::{Lattice, PrimeDim};
use qudit_wigner::linalg::{ComplexMatrix, HamiltonianSpec};
use qudit_wigner::path_integral::{path_sum_kernel, PathConfig, PathSumMethod};
use qudit_wigner::presets::HamiltonianPreset;
use qudit_wigner::propagator::{apply_kernel, kernel_fourier_form, WignerKernel};
use qudit_wigner::pseudo_classical::{classify_commensurability, Commensurability, LinearHamiltonian};
use qudit_wigner::states::{product_density, StatePreset};
use qudit_wigner::weyl::{hermitian_symbol, infer_qudits, wigner_function, WignerFunction};
use qudit_wigner::Error;

/// Result codes. `QW_OK` is zero; everything else is a failure.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwStatus {
    QW_OK = 0,
    QW_ERR_NULL_POINTER = 1,
    QW_ERR_UNSUPPORTED_DIMENSION = 2,
    QW_ERR_INVALID_ARGUMENT = 3,
    QW_ERR_SHAPE = 4,
    QW_ERR_NOT_HERMITIAN = 5,
    QW_ERR_NOT_UNITARY = 6,
    QW_ERR_NOT_A_STATE = 7,
    QW_ERR_NOT_REAL = 8,
    QW_ERR_BUDGET_EXCEEDED = 9,
    QW_ERR_BUFFER_TOO_SMALL = 10,
    QW_ERR_INTERNAL = 11,
}

/// Routes for [`qw_linear_entropy`].
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwRoute {
    QW_ROUTE_EXACT = 0,
    QW_ROUTE_KERNEL = 1,
    QW_ROUTE_PATH_INTEGRAL = 2,
    QW_ROUTE_CLOSED_FORM = 3,
}

/// Classes reported by [`qw_classify_commensurability`].
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwCommensurability {
    QW_STRICT = 0,
    QW_WEAK_ODD = 1,
    QW_INCOMMENSURATE = 2,
}

/// Opaque Wigner function.
pub struct QwWigner(WignerFunction);

/// Opaque Wigner propagator.
pub struct QwKernel(WignerKernel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnsupportedDimension(_) | Error::DimensionTooLarge { .. } => QwStatus::QW_ERR_UNSUPPORTED_DIMENSION,
            Error::LengthMismatch { .. }
            | Error::ShapeMismatch { .. }
            | Error::NotSquare(..)
            | Error::InvalidDims(_) => QwStatus::QW_ERR_SHAPE,
            Error::NotHermitian(_) => QwStatus::QW_ERR_NOT_HERMITIAN,
            Error::NotUnitary(_) => QwStatus::QW_ERR_NOT_UNITARY,
            Error::NotPositive(_) | Error::NotNormalized(_) => QwStatus::QW_ERR_NOT_A_STATE,
            Error::NotReal(_) => QwStatus::QW_ERR_NOT_REAL,
            Error::BudgetExceeded { .. } => QwStatus::QW_ERR_BUDGET_EXCEEDED,
            Error::EndpointMismatch(_) | Error::InvalidArgument(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => {
                QwStatus::QW_ERR_INVALID_ARGUMENT
            }
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: QwStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

/// Runs `f`, records any failure and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QwStatus::QW_OK,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            QwStatus::QW_ERR_INTERNAL
        }
    }
}

fn nonnull<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        fail(QwStatus::QW_ERR_NULL_POINTER, format!("{name} is null"))
    } else {
        Ok(())
    }
}

fn prime(d: u32) -> Result<PrimeDim, Failure> {
    Ok(PrimeDim::new(i64::from(d))?)
}

/// # Safety
/// `p` must be null or valid for `len` reads.
unsafe fn doubles<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    nonnull(p, name)?;
    Ok(slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must be null or a nul-terminated string.
unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    nonnull(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(QwStatus::QW_ERR_INVALID_ARGUMENT, format!("{name} is not UTF-8")))
}

/// Square matrix from `2·side²` interleaved doubles.
///
/// # Safety
/// `p` must be null or valid for `2·side²` reads.
unsafe fn matrix(p: *const f64, side: usize, name: &str) -> Result<ComplexMatrix, Failure> {
    let raw = doubles(p, 2 * side * side, name)?;
    let data = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    Ok(ComplexMatrix::from_vec(side, side, data)?)
}

fn hilbert_side(dim: PrimeDim, n_qudits: usize) -> Result<usize, Failure> {
    Ok(Lattice::new(dim, n_qudits)?.hilbert_dim())
}

/// # Safety
/// `out` must be null or valid for `len` writes.
unsafe fn copy_out(src: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    nonnull(out, "out")?;
    if len < src.len() {
        return fail(
            QwStatus::QW_ERR_BUFFER_TOO_SMALL,
            format!("buffer holds {len} values, {} needed", src.len()),
        );
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Library version, static and nul-terminated.
#[no_mangle]
pub extern "C" fn qw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (truncated,
/// always nul-terminated when `len > 0`). Returns the full message length
/// excluding the terminator, or 0 if there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qw_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Wigner function of a density matrix on `n_qudits` qudits of dimension `d`.
/// `rho` holds `2·d^{2n}` doubles.
///
/// # Safety
/// `rho` must be valid for the stated length; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_wigner_from_density(
    d: u32,
    n_qudits: usize,
    rho: *const f64,
    out: *mut *mut QwWigner,
) -> QwStatus {
    guard(|| {
        nonnull(out, "out")?;
        let dim = prime(d)?;
        let side = hilbert_side(dim, n_qudits)?;
        let w = wigner_function(&matrix(rho, side, "rho")?, dim, n_qudits)?;
        *out = Box::into_raw(Box::new(QwWigner(w)));
        Ok(())
    })
}

/// Wigner function of a product state, e.g. `"p0,x2"` or `"mixed"`.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_wigner_from_state(d: u32, spec: *const c_char, out: *mut *mut QwWigner) -> QwStatus {
    guard(|| {
        nonnull(out, "out")?;
        let dim = prime(d)?;
        let presets = text(spec, "spec")?
            .split(',')
            .map(str::parse::<StatePreset>)
            .collect::<Result<Vec<_>, _>>()?;
        let w = wigner_function(&product_density(dim, &presets)?, dim, presets.len())?;
        *out = Box::into_raw(Box::new(QwWigner(w)));
        Ok(())
    })
}

/// Number of lattice points, `d^{2n}`; 0 for null.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_wigner_len(w: *const QwWigner) -> usize {
    w.as_ref().map_or(0, |w| w.0.values.len())
}

/// Copies the values, row-major in `(m1, n1, m2, n2, …)`.
///
/// # Safety
/// `w` must be a live handle; `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qw_wigner_values(w: *const QwWigner, out: *mut f64, len: usize) -> QwStatus {
    guard(|| {
        nonnull(w, "w")?;
        copy_out(&(*w).0.values, out, len)
    })
}

/// Sum of the absolute values of the negative entries.
///
/// # Safety
/// `w` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_wigner_negativity(w: *const QwWigner, out: *mut f64) -> QwStatus {
    guard(|| {
        nonnull(w, "w")?;
        nonnull(out, "out")?;
        *out = (*w).0.negativity();
        Ok(())
    })
}

/// # Safety
/// `w` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qw_wigner_free(w: *mut QwWigner) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Wigner propagator of a unitary (`2·d^{2n}` doubles).
///
/// # Safety
/// `u` must be valid for the stated length; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_from_unitary(
    d: u32,
    n_qudits: usize,
    u: *const f64,
    out: *mut *mut QwKernel,
) -> QwStatus {
    guard(|| {
        nonnull(out, "out")?;
        let dim = prime(d)?;
        let side = hilbert_side(dim, n_qudits)?;
        let g = kernel_fourier_form(&matrix(u, side, "u")?, dim, n_qudits)?;
        *out = Box::into_raw(Box::new(QwKernel(g)));
        Ok(())
    })
}

/// Wigner propagator of `e^{−iχt H}` for a Hermitian `H` (`2·d^{2n}` doubles).
///
/// # Safety
/// `h` must be valid for the stated length; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_from_hamiltonian(
    d: u32,
    n_qudits: usize,
    h: *const f64,
    chi_t: f64,
    out: *mut *mut QwKernel,
) -> QwStatus {
    guard(|| {
        nonnull(out, "out")?;
        let dim = prime(d)?;
        let side = hilbert_side(dim, n_qudits)?;
        let u = HamiltonianSpec::new(matrix(h, side, "h")?, 1.0)?.evolution(chi_t)?;
        *out = Box::into_raw(Box::new(QwKernel(kernel_fourier_form(&u, dim, n_qudits)?)));
        Ok(())
    })
}

/// Wigner propagator of a named Hamiltonian (`diag012`, `xx`, `xplusp`).
///
/// # Safety
/// `preset` must be a nul-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_from_preset(
    d: u32,
    preset: *const c_char,
    chi_t: f64,
    out: *mut *mut QwKernel,
) -> QwStatus {
    guard(|| {
        nonnull(out, "out")?;
        let dim = prime(d)?;
        let p: HamiltonianPreset = text(preset, "preset")?.parse()?;
        let u = HamiltonianSpec::new(p.matrix(dim), 1.0)?.evolution(chi_t)?;
        *out = Box::into_raw(Box::new(QwKernel(kernel_fourier_form(&u, dim, p.n_qudits())?)));
        Ok(())
    })
}

/// Propagator from `steps` composed short-time kernels of a named Hamiltonian.
///
/// # Safety
/// `preset` must be a nul-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_path_integral_kernel(
    d: u32,
    preset: *const c_char,
    chi_t: f64,
    steps: usize,
    out: *mut *mut QwKernel,
) -> QwStatus {
    guard(|| {
        nonnull(out, "out")?;
        let dim = prime(d)?;
        let p: HamiltonianPreset = text(preset, "preset")?.parse()?;
        let h = p.matrix(dim);
        let n = infer_qudits(h.rows(), dim)?;
        let lat = Lattice::new(dim, n)?;
        let h_w = hermitian_symbol(&h, dim, n)?;
        let g = path_sum_kernel(&h_w, &PathConfig::new(steps, chi_t)?, &lat, PathSumMethod::Composed)?;
        *out = Box::into_raw(Box::new(QwKernel(g)));
        Ok(())
    })
}

/// Lattice size `L = d^{2n}`; the kernel has `L²` entries. 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_size(g: *const QwKernel) -> usize {
    g.as_ref().map_or(0, |g| g.0.size())
}

/// Copies the entries, `entries[final·L + initial]`.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_entries(g: *const QwKernel, out: *mut f64, len: usize) -> QwStatus {
    guard(|| {
        nonnull(g, "g")?;
        copy_out(&(*g).0.entries, out, len)
    })
}

/// `W′ = G W` as a new handle.
///
/// # Safety
/// `g` and `w` must be live handles; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_apply(g: *const QwKernel, w: *const QwWigner, out: *mut *mut QwWigner) -> QwStatus {
    guard(|| {
        nonnull(g, "g")?;
        nonnull(w, "w")?;
        nonnull(out, "out")?;
        let evolved = apply_kernel(&(*g).0, &(*w).0)?;
        *out = Box::into_raw(Box::new(QwWigner(evolved)));
        Ok(())
    })
}

/// Largest `|Σ_μ′ G(μ′, μ) − 1|` over columns.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_max_column_sum_error(g: *const QwKernel, out: *mut f64) -> QwStatus {
    guard(|| {
        nonnull(g, "g")?;
        nonnull(out, "out")?;
        *out = (*g).0.max_column_sum_error();
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qw_kernel_free(g: *mut QwKernel) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Linear entropy of one qutrit of `e^{−iχt x̂⊗x̂}|p,0⟩|p,0⟩`. `steps` is
/// used only by the path-integral route.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qw_linear_entropy(chi_t: f64, route: QwRoute, steps: usize, out: *mut f64) -> QwStatus {
    guard(|| {
        nonnull(out, "out")?;
        let route = match route {
            QwRoute::QW_ROUTE_EXACT => EntanglementRoute::Exact,
            QwRoute::QW_ROUTE_KERNEL => EntanglementRoute::Kernel,
            QwRoute::QW_ROUTE_PATH_INTEGRAL => {
                if steps == 0 {
                    return fail(QwStatus::QW_ERR_INVALID_ARGUMENT, "steps must be at least 1");
                }
                EntanglementRoute::PathIntegral { steps }
            }
            QwRoute::QW_ROUTE_CLOSED_FORM => EntanglementRoute::ClosedForm,
        };
        *out = TwoQutritScenario::new()?.record(chi_t, route)?.linear_entropy;
        Ok(())
    })
}

/// Classifies `H = Σ_q (a_q x̂_q + b_q p̂_q)` at step `tau`. When the class is
/// `QW_STRICT` and `shifts` is non-null, writes `(Δm_q, Δn_q)` pairs into it
/// (`2·n_qudits` values).
///
/// # Safety
/// `a` and `b` must be valid for `n_qudits` reads, `class_out` for one write,
/// `shifts` null or valid for `2·n_qudits` writes.
#[no_mangle]
pub unsafe extern "C" fn qw_classify_commensurability(
    d: u32,
    a: *const f64,
    b: *const f64,
    n_qudits: usize,
    tau: f64,
    class_out: *mut QwCommensurability,
    shifts: *mut i64,
) -> QwStatus {
    guard(|| {
        nonnull(class_out, "class_out")?;
        if n_qudits == 0 {
            return fail(QwStatus::QW_ERR_INVALID_ARGUMENT, "n_qudits must be at least 1");
        }
        let dim = prime(d)?;
        let a = doubles(a, n_qudits, "a")?;
        let b = doubles(b, n_qudits, "b")?;
        let h = LinearHamiltonian::new(a.iter().copied().zip(b.iter().copied()).collect(), 0.0)?;
        let report = classify_commensurability(&h, tau, dim)?;
        *class_out = match report.class {
            Commensurability::Strict => QwCommensurability::QW_STRICT,
            Commensurability::WeakOdd => QwCommensurability::QW_WEAK_ODD,
            Commensurability::Incommensurate => QwCommensurability::QW_INCOMMENSURATE,
        };
        if let (Some(s), false) = (&report.predicted_shift, shifts.is_null()) {
            for (q, shift) in s.iter().enumerate() {
                *shifts.add(2 * q) = shift.dm;
                *shifts.add(2 * q + 1) = shift.dn;
            }
        }
        Ok(())
    })
}

/// `1` if `d` is a supported odd prime, else `0`.
#[no_mangle]
pub extern "C" fn qw_is_supported_dimension(d: u32) -> c_int {
    c_int::from(PrimeDim::new(i64::from(d)).is_ok())
}
