//! Compiles tests/c/smoke.c against the static library and runs it.
//! Skipped when no C compiler or static archive is available.

use std::path::{Path, PathBuf};
use std::process::Command;

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libradmax_ffi.a");
    lib.is_file().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_lib() else {
        eprintln!("skipped: libradmax_ffi.a not found next to the test binary");
        return;
    };
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status();
    let Ok(status) = status else {
        eprintln!("skipped: C compiler `{cc}` unavailable");
        return;
    };
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().expect("run smoke binary");
    assert!(out.status.success(), "smoke exited with {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("radmax-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
