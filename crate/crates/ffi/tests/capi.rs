//! The C ABI exercised through its exported symbols, plus a C program built
//! against the generated header and the static library.

use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use qudit_wigner_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { qw_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn wigner_values(w: *const QwWigner) -> Vec<f64> {
    let len = unsafe { qw_wigner_len(w) };
    let mut v = vec![0.0; len];
    assert_eq!(unsafe { qw_wigner_values(w, v.as_mut_ptr(), len) }, QwStatus::QW_OK);
    v
}

#[test]
fn momentum_state_and_evolution() {
    let spec = CString::new("p0").unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { qw_wigner_from_state(3, spec.as_ptr(), &mut w) },
        QwStatus::QW_OK
    );
    let v = wigner_values(w);
    assert_eq!(v.len(), 9);
    assert!((v[0] - 1.0 / 3.0).abs() < 1e-12 && v[1].abs() < 1e-12);

    let preset = CString::new("diag012").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { qw_kernel_from_preset(3, preset.as_ptr(), std::f64::consts::PI, &mut g) },
        QwStatus::QW_OK
    );
    assert_eq!(unsafe { qw_kernel_size(g) }, 9);
    let mut evolved = ptr::null_mut();
    assert_eq!(unsafe { qw_kernel_apply(g, w, &mut evolved) }, QwStatus::QW_OK);
    let ninths = [-1.0, 2.0, 2.0, 3.0, 0.0, 0.0, -1.0, 2.0, 2.0];
    for (got, want) in wigner_values(evolved).iter().zip(ninths) {
        assert!((got - want / 9.0).abs() < 1e-10);
    }
    let mut neg = 0.0;
    assert_eq!(unsafe { qw_wigner_negativity(evolved, &mut neg) }, QwStatus::QW_OK);
    assert!((neg - 2.0 / 9.0).abs() < 1e-10);
    unsafe {
        qw_wigner_free(evolved);
        qw_wigner_free(w);
        qw_kernel_free(g);
    }
}

#[test]
fn density_matrix_and_hamiltonian_inputs() {
    // |x,1⟩⟨x,1| on a qutrit
    let mut rho = [0.0; 18];
    rho[2 * 4] = 1.0;
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { qw_wigner_from_density(3, 1, rho.as_ptr(), &mut w) },
        QwStatus::QW_OK
    );
    let v = wigner_values(w);
    for (i, x) in v.iter().enumerate() {
        let want = if i / 3 == 1 { 1.0 / 3.0 } else { 0.0 };
        assert!((x - want).abs() < 1e-12);
    }

    // H = x̂: the kernel from the matrix equals the preset kernel
    let mut h = [0.0; 18];
    h[2 * 4] = 1.0;
    h[2 * 8] = 2.0;
    let (mut g1, mut g2) = (ptr::null_mut(), ptr::null_mut());
    let preset = CString::new("diag012").unwrap();
    assert_eq!(
        unsafe { qw_kernel_from_hamiltonian(3, 1, h.as_ptr(), 0.8, &mut g1) },
        QwStatus::QW_OK
    );
    assert_eq!(
        unsafe { qw_kernel_from_preset(3, preset.as_ptr(), 0.8, &mut g2) },
        QwStatus::QW_OK
    );
    let mut e1 = vec![0.0; 81];
    let mut e2 = vec![0.0; 81];
    assert_eq!(unsafe { qw_kernel_entries(g1, e1.as_mut_ptr(), 81) }, QwStatus::QW_OK);
    assert_eq!(unsafe { qw_kernel_entries(g2, e2.as_mut_ptr(), 81) }, QwStatus::QW_OK);
    assert!(e1.iter().zip(&e2).all(|(a, b)| (a - b).abs() < 1e-14));
    let mut col = 1.0;
    assert_eq!(unsafe { qw_kernel_max_column_sum_error(g1, &mut col) }, QwStatus::QW_OK);
    assert!(col < 1e-10);

    // a unitary round trip: U = e^{-0.8 i x̂} is diagonal
    let mut u = [0.0; 18];
    for k in 0..3 {
        let phase = -0.8 * k as f64;
        u[2 * (4 * k)] = phase.cos();
        u[2 * (4 * k) + 1] = phase.sin();
    }
    let mut g3 = ptr::null_mut();
    assert_eq!(
        unsafe { qw_kernel_from_unitary(3, 1, u.as_ptr(), &mut g3) },
        QwStatus::QW_OK
    );
    let mut e3 = vec![0.0; 81];
    assert_eq!(unsafe { qw_kernel_entries(g3, e3.as_mut_ptr(), 81) }, QwStatus::QW_OK);
    assert!(e1.iter().zip(&e3).all(|(a, b)| (a - b).abs() < 1e-12));
    unsafe {
        qw_wigner_free(w);
        qw_kernel_free(g1);
        qw_kernel_free(g2);
        qw_kernel_free(g3);
    }
}

#[test]
fn path_integral_matches_exact() {
    let preset = CString::new("diag012").unwrap();
    let (mut exact, mut path) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(
        unsafe { qw_kernel_from_preset(5, preset.as_ptr(), 2.0, &mut exact) },
        QwStatus::QW_OK
    );
    assert_eq!(
        unsafe { qw_path_integral_kernel(5, preset.as_ptr(), 2.0, 3, &mut path) },
        QwStatus::QW_OK
    );
    let l = unsafe { qw_kernel_size(exact) };
    let (mut a, mut b) = (vec![0.0; l * l], vec![0.0; l * l]);
    unsafe {
        qw_kernel_entries(exact, a.as_mut_ptr(), a.len());
        qw_kernel_entries(path, b.as_mut_ptr(), b.len());
        qw_kernel_free(exact);
        qw_kernel_free(path);
    }
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10));
}

#[test]
fn entropy_routes_agree() {
    let routes = [
        QwRoute::QW_ROUTE_EXACT,
        QwRoute::QW_ROUTE_KERNEL,
        QwRoute::QW_ROUTE_PATH_INTEGRAL,
        QwRoute::QW_ROUTE_CLOSED_FORM,
    ];
    for r in routes {
        let mut s = 0.0;
        assert_eq!(
            unsafe { qw_linear_entropy(std::f64::consts::PI / 2.0, r, 2, &mut s) },
            QwStatus::QW_OK
        );
        assert!((s - 0.593).abs() < 1e-3, "{r:?}: {s}");
    }
    let mut s = 0.0;
    assert_eq!(
        unsafe { qw_linear_entropy(1.0, QwRoute::QW_ROUTE_PATH_INTEGRAL, 0, &mut s) },
        QwStatus::QW_ERR_INVALID_ARGUMENT
    );
}

#[test]
fn commensurability_shift() {
    let (a, b) = ([1.0], [0.0]);
    let mut class = QwCommensurability::QW_INCOMMENSURATE;
    let mut shifts = [99i64; 2];
    let tau = 2.0 * std::f64::consts::PI / 3.0;
    let status =
        unsafe { qw_classify_commensurability(3, a.as_ptr(), b.as_ptr(), 1, tau, &mut class, shifts.as_mut_ptr()) };
    assert_eq!(status, QwStatus::QW_OK);
    assert_eq!(class, QwCommensurability::QW_STRICT);
    assert_eq!(shifts, [0, -1]);

    let half = [0.5];
    let status =
        unsafe { qw_classify_commensurability(3, half.as_ptr(), b.as_ptr(), 1, tau, &mut class, ptr::null_mut()) };
    assert_eq!(status, QwStatus::QW_OK);
    assert_eq!(class, QwCommensurability::QW_WEAK_ODD);
}

#[test]
fn errors_are_reported() {
    let spec = CString::new("p0").unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { qw_wigner_from_state(4, spec.as_ptr(), &mut w) },
        QwStatus::QW_ERR_UNSUPPORTED_DIMENSION
    );
    assert!(w.is_null());
    assert!(last_error().contains("unsupported dimension 4"));

    assert_eq!(
        unsafe { qw_wigner_from_state(3, ptr::null(), &mut w) },
        QwStatus::QW_ERR_NULL_POINTER
    );
    assert_eq!(
        unsafe { qw_wigner_from_state(3, spec.as_ptr(), ptr::null_mut()) },
        QwStatus::QW_ERR_NULL_POINTER
    );

    let bad = CString::new("q1").unwrap();
    assert_eq!(
        unsafe { qw_wigner_from_state(3, bad.as_ptr(), &mut w) },
        QwStatus::QW_ERR_INVALID_ARGUMENT
    );

    // not Hermitian
    let mut h = [0.0; 18];
    h[2] = 1.0;
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { qw_kernel_from_hamiltonian(3, 1, h.as_ptr(), 1.0, &mut g) },
        QwStatus::QW_ERR_NOT_HERMITIAN
    );
    // not unitary
    assert_eq!(
        unsafe { qw_kernel_from_unitary(3, 1, h.as_ptr(), &mut g) },
        QwStatus::QW_ERR_NOT_UNITARY
    );
    // trace 2
    let mut rho = [0.0; 18];
    rho[0] = 1.0;
    rho[8] = 1.0;
    assert_eq!(
        unsafe { qw_wigner_from_density(3, 1, rho.as_ptr(), &mut w) },
        QwStatus::QW_ERR_NOT_A_STATE
    );

    assert_eq!(
        unsafe { qw_wigner_from_state(3, spec.as_ptr(), &mut w) },
        QwStatus::QW_OK
    );
    let mut small = [0.0; 4];
    assert_eq!(
        unsafe { qw_wigner_values(w, small.as_mut_ptr(), 4) },
        QwStatus::QW_ERR_BUFFER_TOO_SMALL
    );
    assert!(last_error().contains("9 needed"));
    unsafe {
        qw_wigner_free(w);
        qw_wigner_free(ptr::null_mut());
        qw_kernel_free(ptr::null_mut());
    }
    assert_eq!(unsafe { qw_wigner_len(ptr::null()) }, 0);
    assert_eq!(qw_is_supported_dimension(7), 1);
    assert_eq!(qw_is_supported_dimension(9), 0);
}

#[test]
fn error_message_truncates() {
    let spec = CString::new("p0").unwrap();
    let mut w = ptr::null_mut();
    unsafe { qw_wigner_from_state(15, spec.as_ptr(), &mut w) };
    let mut buf = [1 as c_char; 8];
    let n = unsafe { qw_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 7);
    assert_eq!(buf[7], 0);
    assert_eq!(unsafe { qw_last_error_message(ptr::null_mut(), 0) }, n);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qw_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// The static library built alongside this test binary, if any.
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libqudit_wigner_ffi.a");
    lib.exists().then_some(lib)
}

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "qudit_wigner.h"

int main(void) {
    QwWigner *w = NULL;
    QwKernel *g = NULL;
    QwWigner *out = NULL;
    double v[9];
    double neg = 0.0;
    if (qw_wigner_from_state(3, "p0", &w) != QW_OK) return 10;
    if (qw_kernel_from_preset(3, "diag012", 3.14159265358979323846, &g) != QW_OK) return 11;
    if (qw_kernel_apply(g, w, &out) != QW_OK) return 12;
    if (qw_wigner_values(out, v, 9) != QW_OK) return 13;
    if (fabs(v[0] + 1.0 / 9.0) > 1e-10 || fabs(v[3] - 1.0 / 3.0) > 1e-10) return 14;
    if (qw_wigner_negativity(out, &neg) != QW_OK || fabs(neg - 2.0 / 9.0) > 1e-10) return 15;
    if (qw_wigner_from_state(4, "p0", &w) != QW_ERR_UNSUPPORTED_DIMENSION) return 16;
    char msg[128];
    if (qw_last_error_message(msg, sizeof msg) == 0) return 17;
    qw_wigner_free(out);
    qw_wigner_free(w);
    qw_kernel_free(g);
    printf("ok %s\n", qw_version());
    return 0;
}
"#;

fn compile_and_run(dir: &Path, lib: &Path) {
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .status()
        .unwrap();
    assert!(status.success(), "C program failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

#[test]
fn header_compiles_and_links_from_c() {
    if !have_cc() {
        eprintln!("no C compiler; header check skipped");
        return;
    }
    let header = crate_dir().join("include/qudit_wigner.h");
    assert!(header.exists());
    let dir = std::env::temp_dir().join(format!("qudit-wigner-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // the header alone must be valid C and C++
    for (lang, std_flag) in [("c", "-std=c99"), ("c++", "-std=c++11")] {
        let status = Command::new("cc")
            .args(["-x", lang, std_flag, "-fsyntax-only", "-Wall", "-Werror"])
            .arg(&header)
            .status()
            .unwrap();
        assert!(status.success(), "header is not valid {lang}");
    }
    match static_lib() {
        Some(lib) => compile_and_run(&dir, &lib),
        None => eprintln!("static library not found next to the test binary; link check skipped"),
    }
    std::fs::remove_dir_all(dir).unwrap();
}
