use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include "bsc_exponents.h"

int main(void) {
    double v;
    BscRates rates;
    BscBoundCurve *curve = NULL;
    BscBoundRow row;
    BscCode *code = NULL;
    uint64_t words[2] = {3u, 12u};
    uint64_t counts[5];
    if (bsc_h2(0.1, &v) != BSC_STATUS_OK) return 1;
    if (bsc_critical_rates(0.01, &rates) != BSC_STATUS_OK) return 1;
    if (bsc_mu(0.3, 0.5, 0.1, BSC_MU_METHOD_HALF, &v) != BSC_STATUS_OK) return 1;
    if (bsc_bound_curve_new(0.01, 16, &curve) == BSC_STATUS_OK) {
        if (bsc_bound_curve_row(curve, bsc_bound_curve_len(curve) - 1, &row) == BSC_STATUS_OK
            && row.region == BSC_REGION_SPHERE_PACKING) {
            v = row.e_up;
        }
        bsc_bound_curve_free(curve);
    }
    if (bsc_code_new(4, words, 2, &code) == BSC_STATUS_OK) {
        bsc_code_spectrum(code, counts, 5);
        bsc_code_free(code);
    }
    return bsc_last_error_message() == NULL && bsc_version() != NULL ? 0 : 1;
}
"#;

fn check(compiler: &str, lang: &str, std: &str) {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = probe_dir();
    let src = dir.join(format!("probe.{}", if lang == "c" { "c" } else { "cpp" }));
    std::fs::write(&src, PROGRAM).unwrap();
    let out = match Command::new(compiler)
        .args([
            "-fsyntax-only",
            "-Wall",
            "-Wextra",
            "-Werror",
            "-pedantic",
            std,
            "-x",
            lang,
        ])
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .output()
    {
        Ok(o) => o,
        Err(e) => {
            eprintln!("skipping {compiler}: {e}");
            return;
        }
    };
    assert!(
        out.status.success(),
        "{compiler}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn probe_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("header-probe");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn header_compiles_as_c() {
    check("cc", "c", "-std=c99");
}

#[test]
fn header_compiles_as_cpp() {
    check("c++", "c++", "-std=c++11");
}
