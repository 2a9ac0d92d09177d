//! C ABI over the analyzer.
//!
//! Channels are passed around as opaque `ItsecChannel` handles. Every
//! fallible call returns an [`ItsecStatus`]; on failure a message is kept
//! per thread and can be read with [`itsec_last_error_message`]. Strings
//! handed out by this library must be released with [`itsec_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use itsec::cryptosystem::induced_channel;
use itsec::gap::{gap_report, GapParams};
use itsec::io::{cryptosystem_to_json, parse_input, Input};
use itsec::notions::{analyze, eps_ind, lemma1_check, BinaryJoint, SsCaps};
use itsec::rational::{format_rational, parse_rational};
use itsec::synthesis::synthesize;
use itsec::{ChannelMatrix, Error};

/// Status codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItsecStatus {
    Ok = 0,
    /// An internal consistency check failed; this is a bug.
    PropertyViolation = 1,
    /// Malformed input or failed validation.
    Validation = 2,
    /// An enumeration cap was exceeded.
    CapExceeded = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// Opaque channel handle.
pub struct ItsecChannel {
    inner: ChannelMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ItsecStatus {
    match e.exit_code() {
        1 => ItsecStatus::PropertyViolation,
        3 => ItsecStatus::CapExceeded,
        _ => ItsecStatus::Validation,
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Utf8(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ItsecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ItsecStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is NULL"));
            ItsecStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_error(format!("{what} is not valid UTF-8"));
            ItsecStatus::InvalidUtf8
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ItsecStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn channel_ref<'a>(p: *const ItsecChannel) -> Result<&'a ChannelMatrix, Failure> {
    p.as_ref().map(|c| &c.inner).ok_or(Failure::Null("channel"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output pointer"));
    }
    *out = CString::new(s).expect("JSON has no NUL").into_raw();
    Ok(())
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize")
}

/// Parse a channel or cryptosystem JSON document. A cryptosystem is
/// replaced by its induced channel.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itsec_channel_from_json(
    json: *const c_char,
    out: *mut *mut ItsecChannel,
) -> ItsecStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("output pointer"));
        }
        let text = read_str(json, "json")?;
        let inner = match parse_input(text)? {
            Input::Channel(ch) => ch,
            Input::Cryptosystem(sys) => induced_channel(&sys)?,
        };
        *out = Box::into_raw(Box::new(ItsecChannel { inner }));
        Ok(())
    })
}

/// # Safety
/// `channel` must come from [`itsec_channel_from_json`] and not be freed
/// twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn itsec_channel_free(channel: *mut ItsecChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Number of messages, or 0 for NULL.
///
/// # Safety
/// `channel` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn itsec_channel_messages(channel: *const ItsecChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.messages().len())
}

/// Number of cryptograms, or 0 for NULL.
///
/// # Safety
/// `channel` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn itsec_channel_cryptograms(channel: *const ItsecChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.cryptograms().len())
}

/// The IND value as a `"p/q"` string.
///
/// # Safety
/// `channel` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itsec_eps_ind(
    channel: *const ItsecChannel,
    out: *mut *mut c_char,
) -> ItsecStatus {
    guard(|| {
        let ch = channel_ref(channel)?;
        write_string(out, format_rational(&eps_ind(ch).0))
    })
}

/// Full notion report as JSON.
///
/// # Safety
/// `channel` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itsec_analyze(
    channel: *const ItsecChannel,
    grid: u32,
    ss_cap: usize,
    out: *mut *mut c_char,
) -> ItsecStatus {
    guard(|| {
        let ch = channel_ref(channel)?;
        if grid == 0 || ss_cap < 2 {
            return Err(Error::Parse("grid must be >= 1 and ss_cap >= 2".into()).into());
        }
        let report = analyze(ch, grid, SsCaps::uniform(ss_cap))?;
        write_string(out, pretty(&report))
    })
}

/// A cipher realizing a doubly stochastic channel, as a cryptosystem document.
///
/// # Safety
/// `channel` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itsec_synthesize(
    channel: *const ItsecChannel,
    out: *mut *mut c_char,
) -> ItsecStatus {
    guard(|| {
        let ch = channel_ref(channel)?;
        write_string(out, cryptosystem_to_json(&synthesize(ch)?))
    })
}

/// Report for the separating example. `delta` may be NULL for `1/n`.
///
/// # Safety
/// `delta` must be NULL or a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itsec_gap_report(
    n: usize,
    delta: *const c_char,
    grid: u32,
    ss_cap: usize,
    out: *mut *mut c_char,
) -> ItsecStatus {
    guard(|| {
        let delta = if delta.is_null() {
            if n == 0 {
                return Err(Error::InvalidGapParams("n must be positive".into()).into());
            }
            itsec::rational::ratio(1, n as i64)
        } else {
            parse_rational(read_str(delta, "delta")?)?
        };
        if grid == 0 || ss_cap < 2 {
            return Err(Error::Parse("grid must be >= 1 and ss_cap >= 2".into()).into());
        }
        let report = gap_report(&GapParams::new(n, delta)?, grid, SsCaps::uniform(ss_cap))?;
        write_string(out, pretty(&report))
    })
}

/// Both sides of the binary dependence identity for the joint `(a, b; c, d)`.
///
/// # Safety
/// All four inputs must be NUL-terminated strings; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itsec_lemma_check(
    a: *const c_char,
    b: *const c_char,
    c: *const c_char,
    d: *const c_char,
    out: *mut *mut c_char,
) -> ItsecStatus {
    guard(|| {
        let j = BinaryJoint::new(
            parse_rational(read_str(a, "a")?)?,
            parse_rational(read_str(b, "b")?)?,
            parse_rational(read_str(c, "c")?)?,
            parse_rational(read_str(d, "d")?)?,
        )?;
        write_string(out, pretty(&lemma1_check(&j)))
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn itsec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn itsec_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
