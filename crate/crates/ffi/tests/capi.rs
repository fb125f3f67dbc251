use std::ffi::CString;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use taylorvar_ffi::*;

const P: u64 = 2_147_483_647;

fn last_error() -> String {
    let mut buf = vec![0u8; 256];
    let len = unsafe { tv_last_error(buf.as_mut_ptr() as *mut _, buf.len()) };
    buf.truncate(len.min(255));
    String::from_utf8(buf).unwrap()
}

#[test]
fn series_and_matrix_handles() {
    let text = CString::new("1 + 2*x1 + 3*x1^2 + 5*x1^3 + 7*x1^4").unwrap();
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { tv_series_parse(P, 1, 4, text.as_ptr(), &mut series) }, TvStatus::Ok);
    let mut c = 0u64;
    assert_eq!(unsafe { tv_series_coeff(series, [3u32].as_ptr(), 1, &mut c) }, TvStatus::Ok);
    assert_eq!(c, 5);

    let mut pm = ptr::null_mut();
    assert_eq!(unsafe { tv_pade_matrix_new(series, 1, 2, &mut pm) }, TvStatus::Ok);
    let (mut rows, mut cols) = (0usize, 0usize);
    assert_eq!(unsafe { tv_pade_matrix_shape(pm, &mut rows, &mut cols) }, TvStatus::Ok);
    assert_eq!((rows, cols), (3, 3));
    // first row is c4 c3 c2
    let mut row = Vec::new();
    for col in 0..3 {
        let mut v = 0u64;
        assert_eq!(unsafe { tv_pade_matrix_get(pm, 0, col, &mut v) }, TvStatus::Ok);
        row.push(v);
    }
    assert_eq!(row, vec![7, 5, 3]);
    let mut v = 0u64;
    assert_eq!(unsafe { tv_pade_matrix_get(pm, 3, 0, &mut v) }, TvStatus::OutOfRange);
    assert!(last_error().contains("outside 3x3"));
    let mut rank = 0usize;
    assert_eq!(unsafe { tv_pade_matrix_rank(pm, &mut rank) }, TvStatus::Ok);
    assert!(rank <= 3);

    unsafe {
        tv_pade_matrix_free(pm);
        tv_series_free(series);
        tv_series_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    let text = CString::new("1 + x1").unwrap();
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { tv_series_parse(15, 1, 2, text.as_ptr(), &mut series) }, TvStatus::InvalidPrime);
    assert!(last_error().contains("15"));
    let bad = CString::new("1 + y7").unwrap();
    assert_eq!(unsafe { tv_series_parse(P, 1, 2, bad.as_ptr(), &mut series) }, TvStatus::Parse);
    assert_eq!(unsafe { tv_series_parse(P, 1, 2, ptr::null(), &mut series) }, TvStatus::NullPointer);
    let mut h = TvHessian::default();
    assert_eq!(unsafe { tv_hessian_rank(P, 1, 3, 2, 1, 2, 4, &mut h) }, TvStatus::NotSquare);
    assert_eq!(unsafe { tv_hessian_rank(P, 1, 3, 3, 2, 2, 3, &mut h) }, TvStatus::SamplesExhausted);
    let mut size = 0usize;
    assert_eq!(unsafe { tv_pade_matrix_rank(ptr::null(), &mut size) }, TvStatus::NullPointer);
}

#[test]
fn dimensions() {
    let mut dim = TvDimension::default();
    assert_eq!(unsafe { tv_taylor_dimension(P, 1, 3, 3, 2, 2, 3, &mut dim) }, TvStatus::Ok);
    assert_eq!(
        dim,
        TvDimension { expected: 18, actual: 17, ambient: 19, parameters: 18, defect: 1, fiber: 1 }
    );
    let mut jac = 0u64;
    assert_eq!(unsafe { tv_jacobian_dimension(P, 1, 3, 3, 2, 2, 3, &mut jac) }, TvStatus::Ok);
    assert_eq!(jac, 17);
}

#[test]
fn froberg_and_census() {
    let mut f = TvFroberg::default();
    assert_eq!(unsafe { tv_froberg(4, 2, 2, &mut f) }, TvStatus::Ok);
    assert_eq!(f, TvFroberg { alpha: 7, beta: 6, w: 6, defective_predicted: true });
    let mut d0 = 0u32;
    assert_eq!(unsafe { tv_compute_d0(3, &mut d0) }, TvStatus::Ok);
    assert_eq!(d0, 17);

    let mut census = ptr::null_mut();
    assert_eq!(unsafe { tv_census_new(3, &mut census) }, TvStatus::Ok);
    let mut count = 0usize;
    assert_eq!(unsafe { tv_census_info(census, &mut count, &mut d0) }, TvStatus::Ok);
    assert_eq!((count, d0), (4, 17));
    let (mut d, mut e) = (0u32, 0u32);
    assert_eq!(unsafe { tv_census_pair(census, 3, &mut d, &mut e) }, TvStatus::Ok);
    assert_eq!((d, e), (8, 5));
    assert_eq!(unsafe { tv_census_pair(census, 4, &mut d, &mut e) }, TvStatus::OutOfRange);
    unsafe { tv_census_free(census) };
}

#[test]
fn hessian() {
    let mut h = TvHessian::default();
    assert_eq!(unsafe { tv_hessian_rank(P, 1, 3, 2, 1, 1, 2, &mut h) }, TvStatus::Ok);
    assert_eq!(h, TvHessian { vars: 5, rank: 4, corank: 1 });
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "taylorvar.h"

int main(void) {
    TvFroberg f;
    if (tv_froberg(3, 2, 2, &f) != TV_STATUS_OK) return 1;
    TvSeries *s = NULL;
    if (tv_series_parse(2147483647u, 2, 2, "1 + x1 + x2", &s) != TV_STATUS_OK) return 2;
    TvPadeMatrix *m = NULL;
    if (tv_pade_matrix_new(s, 1, 1, &m) != TV_STATUS_OK) return 3;
    size_t rows = 0, cols = 0;
    tv_pade_matrix_shape(m, &rows, &cols);
    printf("%lld %lld %zu %zu\n", (long long)f.alpha, (long long)f.beta, rows, cols);
    tv_pade_matrix_free(m);
    tv_series_free(s);
    return 0;
}
"#;

#[test]
fn header_compiles_as_c() {
    let header = header_dir().join("taylorvar.h");
    assert!(header.exists(), "build script writes the header");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["tv_series_parse", "tv_pade_matrix_new", "tv_taylor_dimension", "tv_census_pair", "tv_hessian_rank", "tv_last_error"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("capi_smoke.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_dir())
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler found, syntax check skipped");
        return;
    };
    assert!(status.success());

    // link against the static library when cargo has produced it next to the test binary
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libtaylorvar_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built, link check skipped");
        return;
    }
    let exe = dir.join("capi_smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let output = Command::new(&exe).output().unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "2 1 3 3\n");
}
