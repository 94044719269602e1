//! Text file formats for session keys and ciphertexts. LF line endings, every
//! line terminated.
//!
//! ```text
//! HILBXKEY1          HILBXCT1
//! n=7                m=3 t=2
//! m=3                <n tokens "num/den" separated by spaces>
//! K=<hex>            <n tokens ...>
//! IV=<hex>
//! ```

use super::block::CipherBlock;
use super::chain::CiphertextMessage;
use super::key::SessionKey;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const KEY_MAGIC: &str = "HILBXKEY1";
pub const CIPHERTEXT_MAGIC: &str = "HILBXCT1";

/// Splits LF-terminated text into lines, rejecting a missing final LF and CR.
pub(crate) fn lines<'a>(text: &'a str, what: &'static str) -> Result<Vec<&'a str>> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::format(what, "missing final newline"))?;
    if body.contains('\r') {
        return Err(Error::format(what, "carriage return in input"));
    }
    Ok(body.split('\n').collect())
}

pub(crate) fn field<'a>(line: &'a str, name: &str, what: &'static str) -> Result<&'a str> {
    line.strip_prefix(name)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::format(what, format!("expected `{name}=` but found {line:?}")))
}

pub(crate) fn parse_usize(s: &str, name: &str, what: &'static str) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::format(
            what,
            format!("{name} is not a decimal integer: {s:?}"),
        ));
    }
    s.parse()
        .map_err(|_| Error::format(what, format!("{name} out of range: {s}")))
}

fn parse_hex(s: &str, name: &str) -> Result<Vec<u8>> {
    if s.bytes().any(|b| b.is_ascii_uppercase()) {
        return Err(Error::format(
            "key file",
            format!("{name} must be lowercase hex"),
        ));
    }
    hex::decode(s).map_err(|e| Error::format("key file", format!("{name}: {e}")))
}

pub fn write_key(key: &SessionKey) -> String {
    format!(
        "{KEY_MAGIC}\nn={}\nm={}\nK={}\nIV={}\n",
        key.n(),
        key.m(),
        hex::encode(key.pad()),
        hex::encode(key.iv())
    )
}

pub fn parse_key(text: &str) -> Result<SessionKey> {
    const WHAT: &str = "key file";
    let lines = lines(text, WHAT)?;
    let [magic, n, m, pad, iv] = lines.as_slice() else {
        return Err(Error::format(
            WHAT,
            format!("expected 5 lines, found {}", lines.len()),
        ));
    };
    if *magic != KEY_MAGIC {
        return Err(Error::format(WHAT, format!("bad header {magic:?}")));
    }
    let n = parse_usize(field(n, "n", WHAT)?, "n", WHAT)?;
    let m = parse_usize(field(m, "m", WHAT)?, "m", WHAT)?;
    let pad = parse_hex(field(pad, "K", WHAT)?, "K")?;
    let iv = parse_hex(field(iv, "IV", WHAT)?, "IV")?;
    SessionKey::new(n, m, pad, iv)
}

pub fn write_ciphertext(msg: &CiphertextMessage) -> String {
    let mut out = format!(
        "{CIPHERTEXT_MAGIC}\nm={} t={}\n",
        msg.m(),
        msg.blocks().len()
    );
    for block in msg.blocks() {
        for (k, entry) in block.entries().iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(&entry.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn parse_ciphertext(text: &str) -> Result<CiphertextMessage> {
    const WHAT: &str = "ciphertext file";
    let lines = lines(text, WHAT)?;
    if lines.len() < 2 {
        return Err(Error::format(WHAT, "missing header"));
    }
    if lines[0] != CIPHERTEXT_MAGIC {
        return Err(Error::format(WHAT, format!("bad header {:?}", lines[0])));
    }
    let (m, t) = lines[1]
        .split_once(' ')
        .ok_or_else(|| Error::format(WHAT, format!("bad parameter line {:?}", lines[1])))?;
    let m = parse_usize(field(m, "m", WHAT)?, "m", WHAT)?;
    let t = parse_usize(field(t, "t", WHAT)?, "t", WHAT)?;
    let body = &lines[2..];
    if body.len() != t {
        return Err(Error::format(
            WHAT,
            format!("t={t} but {} block lines", body.len()),
        ));
    }
    let blocks = body
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let entries = line
                .split(' ')
                .map(|tok| parse_canonical(tok, i))
                .collect::<Result<Vec<_>>>()?;
            CipherBlock::new(entries)
        })
        .collect::<Result<Vec<_>>>()?;
    CiphertextMessage::new(m, blocks)
}

/// Only the exact canonical spelling is accepted, so parse-then-write is the identity.
fn parse_canonical(tok: &str, line: usize) -> Result<Rational> {
    let bad = || {
        Error::format(
            "ciphertext file",
            format!("block {line}: bad entry {tok:?}"),
        )
    };
    if !tok.contains('/') {
        return Err(bad());
    }
    let r: Rational = tok.parse().map_err(|_| bad())?;
    if r.to_string() != tok {
        return Err(bad());
    }
    Ok(r)
}
