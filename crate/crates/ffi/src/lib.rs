//! C ABI over the `hilbx` session-key cipher.
//!
//! Every function returns a [`HilbxStatus`]. On failure a message is kept
//! per thread and can be read with [`hilbx_last_error_message`]. Strings and
//! byte buffers handed out by this library must be released with
//! [`hilbx_string_free`] and [`hilbx_bytes_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hilbx::cipher::{self, SessionKey};
use hilbx::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HilbxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Format = 3,
    Integrity = 4,
    Domain = 5,
    Panic = 6,
}

/// Opaque session key.
pub struct HilbxSessionKey(SessionKey);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> HilbxStatus {
    match e {
        Error::Format { .. } => HilbxStatus::Format,
        Error::Integrity(_) | Error::Padding(_) => HilbxStatus::Integrity,
        Error::InvalidKey(_) | Error::InvalidInput(_) | Error::Dimension(_) => {
            HilbxStatus::InvalidArgument
        }
        _ => HilbxStatus::Domain,
    }
}

type FfiResult = Result<(), (HilbxStatus, String)>;

fn guard(f: impl FnOnce() -> FfiResult) -> HilbxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HilbxStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HilbxStatus::Panic
        }
    }
}

fn lift<T>(r: hilbx::Result<T>) -> Result<T, (HilbxStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (HilbxStatus, String) {
    (HilbxStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (HilbxStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HilbxStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn key_arg<'a>(p: *const HilbxSessionKey) -> Result<&'a SessionKey, (HilbxStatus, String)> {
    p.as_ref().map(|k| &k.0).ok_or_else(|| null("key"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("hilbx text formats contain no NUL")
        .into_raw()
}

/// Last error message on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn hilbx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Generates a session key with block size `m`. `n = 0` picks the default
/// order. A null `seed` draws from OS entropy.
///
/// # Safety
/// `seed` is null or points to a `uint64_t`; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilbx_key_generate(
    m: usize,
    n: usize,
    seed: *const u64,
    out: *mut *mut HilbxSessionKey,
) -> HilbxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut rng = match seed.as_ref() {
            Some(&s) => ChaCha20Rng::seed_from_u64(s),
            None => ChaCha20Rng::from_entropy(),
        };
        let key = lift(cipher::keygen(m, (n != 0).then_some(n), &mut rng))?;
        *out = Box::into_raw(Box::new(HilbxSessionKey(key)));
        Ok(())
    })
}

/// Parses a key file.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilbx_key_from_text(
    text: *const c_char,
    out: *mut *mut HilbxSessionKey,
) -> HilbxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let key = lift(cipher::parse_key(text_arg(text, "text")?))?;
        *out = Box::into_raw(Box::new(HilbxSessionKey(key)));
        Ok(())
    })
}

/// Serializes a key file. Free the result with [`hilbx_string_free`].
///
/// # Safety
/// `key` comes from this library; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilbx_key_to_text(
    key: *const HilbxSessionKey,
    out: *mut *mut c_char,
) -> HilbxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(cipher::write_key(key_arg(key)?));
        Ok(())
    })
}

/// Block size `m` of the key, or 0 for null.
///
/// # Safety
/// `key` is null or comes from this library.
#[no_mangle]
pub unsafe extern "C" fn hilbx_key_block_size(key: *const HilbxSessionKey) -> usize {
    key.as_ref().map_or(0, |k| k.0.m())
}

/// # Safety
/// `key` is null or comes from this library and was not already freed.
#[no_mangle]
pub unsafe extern "C" fn hilbx_key_free(key: *mut HilbxSessionKey) {
    if !key.is_null() {
        drop(Box::from_raw(key));
    }
}

/// CBC-encrypts `len` bytes into ciphertext-file text.
///
/// # Safety
/// `data` points to `len` readable bytes (may be null when `len` is 0);
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilbx_encrypt(
    key: *const HilbxSessionKey,
    data: *const u8,
    len: usize,
    out: *mut *mut c_char,
) -> HilbxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let key = key_arg(key)?;
        let data = match (data.is_null(), len) {
            (_, 0) => &[][..],
            (true, _) => return Err(null("data")),
            (false, _) => std::slice::from_raw_parts(data, len),
        };
        let msg = lift(cipher::cbc_encrypt(key, data))?;
        *out = into_c_string(cipher::write_ciphertext(&msg));
        Ok(())
    })
}

/// Decrypts ciphertext-file text. Free the result with [`hilbx_bytes_free`]
/// passing the same length.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` and `out_len` are valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hilbx_decrypt(
    key: *const HilbxSessionKey,
    text: *const c_char,
    out: *mut *mut u8,
    out_len: *mut usize,
) -> HilbxStatus {
    guard(|| {
        if out.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let key = key_arg(key)?;
        let msg = lift(cipher::parse_ciphertext(text_arg(text, "text")?))?;
        let plain = lift(cipher::cbc_decrypt(key, &msg))?.into_boxed_slice();
        *out_len = plain.len();
        *out = Box::into_raw(plain) as *mut u8;
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hilbx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `p`/`len` are null/any or exactly a buffer returned by [`hilbx_decrypt`].
#[no_mangle]
pub unsafe extern "C" fn hilbx_bytes_free(p: *mut u8, len: usize) {
    if !p.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(p, len)));
    }
}
