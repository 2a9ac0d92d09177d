use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use itsec_ffi::*;

const GAP4: &str = r#"{"channel": {"messages": ["m1", "m2", "m3", "m4"],
    "cryptograms": ["c1", "c2", "c3", "c4"],
    "matrix": [["3/8", "1/8", "3/8", "1/8"],
               ["1/8", "3/8", "1/8", "3/8"],
               ["1/4", "1/4", "1/4", "1/4"],
               ["1/4", "1/4", "1/4", "1/4"]]}}"#;

fn cstring(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    itsec_string_free(p);
    s
}

fn last_error() -> String {
    let p = itsec_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn load(json: &str) -> *mut ItsecChannel {
    let text = cstring(json);
    let mut ch = ptr::null_mut();
    let status = unsafe { itsec_channel_from_json(text.as_ptr(), &mut ch) };
    assert_eq!(status, ItsecStatus::Ok, "{}", last_error());
    ch
}

#[test]
fn analyze_through_a_handle() {
    let ch = load(GAP4);
    unsafe {
        assert_eq!(itsec_channel_messages(ch), 4);
        assert_eq!(itsec_channel_cryptograms(ch), 4);
        let mut out = ptr::null_mut();
        assert_eq!(itsec_eps_ind(ch, &mut out), ItsecStatus::Ok);
        assert_eq!(take(out), "1/4");

        assert_eq!(itsec_analyze(ch, 4, 10, &mut out), ItsecStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["eps_ps_cs_sup"], "1/4");

        assert_eq!(itsec_analyze(ch, 4, 3, &mut out), ItsecStatus::CapExceeded);
        assert!(last_error().contains("cap"));

        assert_eq!(itsec_synthesize(ch, &mut out), ItsecStatus::Ok);
        let sys = take(out);
        itsec_channel_free(ch);

        // The synthesized cipher loads back as the same channel.
        let again = load(&sys);
        assert_eq!(itsec_eps_ind(again, &mut out), ItsecStatus::Ok);
        assert_eq!(take(out), "1/4");
        itsec_channel_free(again);
    }
}

#[test]
fn validation_errors_carry_messages() {
    let bad =
        cstring(r#"{"channel": {"messages": ["a"], "cryptograms": ["x"], "matrix": [["1/2"]]}}"#);
    let mut ch = ptr::null_mut();
    let status = unsafe { itsec_channel_from_json(bad.as_ptr(), &mut ch) };
    assert_eq!(status, ItsecStatus::Validation);
    assert!(ch.is_null());
    assert!(last_error().contains("column `a`"), "{}", last_error());

    let non_ds = load(
        r#"{"channel": {"messages": ["a", "b"], "cryptograms": ["x", "y"], "matrix": [[1, 1], [0, 0]]}}"#,
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { itsec_synthesize(non_ds, &mut out) },
        ItsecStatus::Validation
    );
    assert!(last_error().contains("row `x` sums to 2"));
    unsafe { itsec_channel_free(non_ds) };
}

#[test]
fn null_and_utf8_handling() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            itsec_channel_from_json(ptr::null(), &mut ptr::null_mut()),
            ItsecStatus::NullPointer
        );
        assert_eq!(
            itsec_eps_ind(ptr::null(), &mut out),
            ItsecStatus::NullPointer
        );
        assert_eq!(itsec_channel_messages(ptr::null()), 0);
        itsec_channel_free(ptr::null_mut());
        itsec_string_free(ptr::null_mut());

        let bytes = [0xffu8, 0];
        let mut ch = ptr::null_mut();
        assert_eq!(
            itsec_channel_from_json(bytes.as_ptr() as *const c_char, &mut ch),
            ItsecStatus::InvalidUtf8
        );
    }
}

#[test]
fn gap_and_lemma() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            itsec_gap_report(100, ptr::null(), 4, 10, &mut out),
            ItsecStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["eps_ind"], "1/50");
        assert_eq!(v["eps_ps_sm_uniform"], "1/2");

        let delta = cstring("1/3");
        assert_eq!(
            itsec_gap_report(4, delta.as_ptr(), 4, 10, &mut out),
            ItsecStatus::Validation
        );

        let (h, z) = (cstring("1/2"), cstring("0"));
        assert_eq!(
            itsec_lemma_check(h.as_ptr(), z.as_ptr(), z.as_ptr(), h.as_ptr(), &mut out),
            ItsecStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(
            (v["lhs"].as_str(), v["rhs"].as_str()),
            (Some("1/2"), Some("1/4"))
        );
    }
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/abi-<hash>
    std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/itsec.h"))
            .unwrap();
    for name in [
        "itsec_channel_from_json",
        "itsec_channel_free",
        "itsec_channel_messages",
        "itsec_channel_cryptograms",
        "itsec_eps_ind",
        "itsec_analyze",
        "itsec_synthesize",
        "itsec_gap_report",
        "itsec_lemma_check",
        "itsec_string_free",
        "itsec_last_error_message",
        "typedef struct ItsecChannel ItsecChannel",
        "ITSEC_STATUS_CAP_EXCEEDED = 3",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libitsec_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = tempfile_path("itsec_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("run cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"cryptosystem\""));
    assert!(stdout.contains("error: invalid gap parameters"));
    let _ = std::fs::remove_file(exe);
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}-{}", std::process::id()))
}
