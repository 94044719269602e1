//! Toy public-key envelope for session parameters.
//!
//! Textbook RSA: no padding, tiny moduli, deterministic encryption. It exists
//! to move a [`SessionKey`] from sender to receiver in a demo and is not
//! secure in any sense.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::cipher::{self, SessionKey};
use crate::error::{Error, Result};

/// The envelope carries every session field, including the order `n`.
pub type SessionBlob = SessionKey;

pub const ENVELOPE_MAGIC: &str = "HILBXENV1";
pub const PUBLIC_MAGIC: &str = "HILBXPUB1";
pub const PRIVATE_MAGIC: &str = "HILBXPRIV1";

pub const MIN_BITS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyPublicKey {
    pub modulus: BigUint,
    pub e: BigUint,
}

#[derive(Clone, PartialEq, Eq)]
pub struct ToyKeypair {
    public: ToyPublicKey,
    d: BigUint,
}

impl std::fmt::Debug for ToyKeypair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToyKeypair")
            .field("public", &self.public)
            .finish_non_exhaustive()
    }
}

impl ToyKeypair {
    /// Builds a keypair from two distinct primes. `d` is the inverse of `e`
    /// modulo `(p-1)(q-1)`, which also inverts it modulo `lcm(p-1, q-1)`.
    pub fn from_primes(p: &BigUint, q: &BigUint, e: &BigUint) -> Result<Self> {
        let mut rng = rand::rngs::OsRng;
        if p == q || !is_probable_prime(p, 24, &mut rng) || !is_probable_prime(q, 24, &mut rng) {
            return Err(Error::InvalidKey("p and q must be distinct primes".into()));
        }
        let one = BigUint::one();
        let phi = (p - &one) * (q - &one);
        let d = mod_inverse(e, &phi)
            .ok_or_else(|| Error::InvalidKey("e is not coprime with lambda(N)".into()))?;
        Ok(ToyKeypair {
            public: ToyPublicKey {
                modulus: p * q,
                e: e.clone(),
            },
            d,
        })
    }

    pub fn from_parts(modulus: BigUint, e: BigUint, d: BigUint) -> Self {
        ToyKeypair {
            public: ToyPublicKey { modulus, e },
            d,
        }
    }

    pub fn public(&self) -> &ToyPublicKey {
        &self.public
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }
}

pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let (a, m) = (BigInt::from(a.clone()), BigInt::from(m.clone()));
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    ext.x.mod_floor(&m).to_biguint()
}

const SMALL_PRIMES: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Trial division by small primes, then Miller-Rabin with fixed small bases
/// plus `rounds` random bases.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().expect("n > 2 so n-1 > 0");
    let d = &n1 >> s;

    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            return false;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                return false;
            }
        }
        true
    };

    let fixed = SMALL_PRIMES[..12].iter().map(|&a| BigUint::from(a));
    let random: Vec<BigUint> = (0..rounds)
        .map(|_| rng.gen_biguint_range(&two, &n1))
        .collect();
    !fixed.chain(random).any(|a| witness(&a))
}

fn random_prime<R: RngCore + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    loop {
        let mut c = rng.gen_biguint(bits);
        c.set_bit(bits - 1, true);
        c.set_bit(0, true);
        if is_probable_prime(&c, 24, rng) {
            return c;
        }
    }
}

/// Keypair with a modulus of roughly `bit_size` bits.
pub fn toy_keygen<R: RngCore + ?Sized>(bit_size: u64, rng: &mut R) -> Result<ToyKeypair> {
    if bit_size < MIN_BITS {
        return Err(Error::InvalidKey(format!(
            "toy modulus needs at least {MIN_BITS} bits, asked for {bit_size}"
        )));
    }
    let half = bit_size / 2;
    loop {
        let p = random_prime(half, rng);
        let q = random_prime(bit_size - half, rng);
        if p == q {
            continue;
        }
        let one = BigUint::one();
        let lambda = (&p - &one).lcm(&(&q - &one));
        let mut e = BigUint::from(65_537u32);
        if e >= lambda || !e.gcd(&lambda).is_one() {
            let three = BigUint::from(3u32);
            if lambda <= three {
                continue;
            }
            e = loop {
                let c = rng.gen_biguint_range(&three, &lambda) | BigUint::one();
                if c < lambda && c.gcd(&lambda).is_one() {
                    break c;
                }
            };
        }
        return ToyKeypair::from_primes(&p, &q, &e);
    }
}

pub fn encrypt_chunk(public: &ToyPublicKey, chunk: &BigUint) -> Result<BigUint> {
    if chunk >= &public.modulus {
        return Err(Error::InvalidInput("chunk is not below the modulus".into()));
    }
    Ok(chunk.modpow(&public.e, &public.modulus))
}

pub fn decrypt_chunk(keys: &ToyKeypair, chunk: &BigUint) -> Result<BigUint> {
    if chunk >= &keys.public.modulus {
        return Err(Error::InvalidInput("chunk is not below the modulus".into()));
    }
    Ok(chunk.modpow(&keys.d, &keys.public.modulus))
}

/// Bytes per chunk: the largest `k` with `2^(8k) <= N`, so chunks stay below N.
fn chunk_width(modulus: &BigUint) -> Result<usize> {
    let k = ((modulus.bits().saturating_sub(1)) / 8) as usize;
    if k == 0 {
        return Err(Error::InvalidKey("modulus must exceed 255".into()));
    }
    Ok(k)
}

/// `u32 n | u32 m | pad | iv`, all big-endian.
fn serialize_blob(blob: &SessionBlob) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + blob.n());
    out.extend_from_slice(&(blob.n() as u32).to_be_bytes());
    out.extend_from_slice(&(blob.m() as u32).to_be_bytes());
    out.extend_from_slice(blob.pad());
    out.extend_from_slice(blob.iv());
    out
}

fn deserialize_blob(bytes: &[u8]) -> Result<SessionBlob> {
    let bad = |why: &str| Error::format("session blob", why.to_string());
    if bytes.len() < 8 {
        return Err(bad("shorter than its header"));
    }
    let n = u32::from_be_bytes(bytes[0..4].try_into().expect("4 bytes")) as usize;
    let m = u32::from_be_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    let body = &bytes[8..];
    if m >= n || body.len() != n {
        return Err(bad("field lengths do not match n and m"));
    }
    let (pad, iv) = body.split_at(n - m);
    SessionKey::new(n, m, pad.to_vec(), iv.to_vec())
}

/// Length-prefixed serialization, zero-filled to whole chunks, each chunk
/// raised to `e` modulo `N`.
pub fn wrap_session(public: &ToyPublicKey, blob: &SessionBlob) -> Result<Vec<BigUint>> {
    let k = chunk_width(&public.modulus)?;
    let payload = serialize_blob(blob);
    let mut stream = (payload.len() as u32).to_be_bytes().to_vec();
    stream.extend_from_slice(&payload);
    let whole = stream.len().div_ceil(k) * k;
    stream.resize(whole, 0);
    stream
        .chunks(k)
        .map(|c| encrypt_chunk(public, &BigUint::from_bytes_be(c)))
        .collect()
}

pub fn unwrap_session(keys: &ToyKeypair, wrapped: &[BigUint]) -> Result<SessionBlob> {
    let k = chunk_width(&keys.public.modulus)?;
    let limit = BigUint::one() << (8 * k);
    let mut stream = Vec::with_capacity(wrapped.len() * k);
    for c in wrapped {
        let plain = decrypt_chunk(keys, c)?;
        if plain >= limit {
            return Err(Error::format("session blob", "chunk exceeds its width"));
        }
        let bytes = plain.to_bytes_be();
        let bytes: &[u8] = if plain.is_zero() { &[] } else { &bytes };
        stream.extend(std::iter::repeat_n(0, k - bytes.len()));
        stream.extend_from_slice(bytes);
    }
    if stream.len() < 4 {
        return Err(Error::format("session blob", "missing length prefix"));
    }
    let len = u32::from_be_bytes(stream[..4].try_into().expect("4 bytes")) as usize;
    let rest = &stream[4..];
    if len > rest.len() || rest.len() - len >= k || rest[len..].iter().any(|&b| b != 0) {
        return Err(Error::format(
            "session blob",
            "length prefix does not match chunks",
        ));
    }
    deserialize_blob(&rest[..len])
}

pub fn write_envelope(chunks: &[BigUint]) -> String {
    let mut out = format!("{ENVELOPE_MAGIC}\n");
    for c in chunks {
        out.push_str(&c.to_str_radix(10));
        out.push('\n');
    }
    out
}

fn parse_decimal(s: &str, what: &'static str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::format(what, format!("not a decimal integer: {s:?}")));
    }
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| Error::format(what, s.to_string()))
}

pub fn parse_envelope(text: &str) -> Result<Vec<BigUint>> {
    const WHAT: &str = "envelope file";
    let lines = cipher::lines(text, WHAT)?;
    if lines[0] != ENVELOPE_MAGIC {
        return Err(Error::format(WHAT, format!("bad header {:?}", lines[0])));
    }
    lines[1..].iter().map(|l| parse_decimal(l, WHAT)).collect()
}

pub fn write_public(public: &ToyPublicKey) -> String {
    format!("{PUBLIC_MAGIC}\nN={}\ne={}\n", public.modulus, public.e)
}

pub fn write_private(keys: &ToyKeypair) -> String {
    format!(
        "{PRIVATE_MAGIC}\nN={}\ne={}\nd={}\n",
        keys.public.modulus, keys.public.e, keys.d
    )
}

pub fn parse_public(text: &str) -> Result<ToyPublicKey> {
    const WHAT: &str = "public key file";
    let lines = cipher::lines(text, WHAT)?;
    let [magic, n, e] = lines.as_slice() else {
        return Err(Error::format(WHAT, "expected 3 lines"));
    };
    if *magic != PUBLIC_MAGIC {
        return Err(Error::format(WHAT, format!("bad header {magic:?}")));
    }
    Ok(ToyPublicKey {
        modulus: parse_decimal(cipher::field(n, "N", WHAT)?, WHAT)?,
        e: parse_decimal(cipher::field(e, "e", WHAT)?, WHAT)?,
    })
}

pub fn parse_private(text: &str) -> Result<ToyKeypair> {
    const WHAT: &str = "private key file";
    let lines = cipher::lines(text, WHAT)?;
    let [magic, n, e, d] = lines.as_slice() else {
        return Err(Error::format(WHAT, "expected 4 lines"));
    };
    if *magic != PRIVATE_MAGIC {
        return Err(Error::format(WHAT, format!("bad header {magic:?}")));
    }
    Ok(ToyKeypair::from_parts(
        parse_decimal(cipher::field(n, "N", WHAT)?, WHAT)?,
        parse_decimal(cipher::field(e, "e", WHAT)?, WHAT)?,
        parse_decimal(cipher::field(d, "d", WHAT)?, WHAT)?,
    ))
}
