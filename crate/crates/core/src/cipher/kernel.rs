//! Per-order tables and limb kernels behind [`super::HilbertBlockCipher`].
//!
//! Row `i` of `H_n` is stored as integer weights `L_i / (i+j-1)` over
//! `L_i = lcm(i, ..., i+n-1)`, as little-endian `u32` limbs, together with
//! the prime factorization of `L_i`. Reducing `num / L_i` then only needs
//! trial division by those primes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};

use crate::rational::Rational;
use crate::specialmat::hilbert_inverse_int;

/// Largest prime below `2^32`; modulus for decryption candidates.
pub(crate) const PRIME: u64 = 4_294_967_291;

pub(crate) struct Row {
    den: Vec<u32>,
    factors: Vec<(u32, u32)>,
    weights: Vec<Vec<u32>>,
}

pub(crate) struct Tables {
    pub(crate) rows: Vec<Row>,
    /// First `m` rows of `H_n^{-1}`, row-major.
    pub(crate) inv: Vec<BigInt>,
    /// The same rows reduced mod [`PRIME`].
    pub(crate) inv_mod: Vec<u64>,
}

fn primes_upto(limit: usize) -> Vec<u32> {
    let mut sieve = vec![true; limit + 1];
    let mut out = Vec::new();
    for p in 2..=limit {
        if sieve[p] {
            out.push(p as u32);
            for q in (p * p..=limit).step_by(p) {
                sieve[q] = false;
            }
        }
    }
    out
}

/// `lcm(lo..=hi)` as prime powers: `p^e` is the largest power of `p` with a
/// multiple inside the range.
fn lcm_factors(lo: u64, hi: u64, primes: &[u32]) -> Vec<(u32, u32)> {
    primes
        .iter()
        .take_while(|&&p| p as u64 <= hi)
        .filter_map(|&p| {
            let mut e = 0;
            let mut q = p as u64;
            while q <= hi && hi / q >= lo.div_ceil(q) {
                e += 1;
                q *= p as u64;
            }
            (e > 0).then_some((p, e))
        })
        .collect()
}

fn digits(x: &BigUint) -> Vec<u32> {
    x.to_u32_digits()
}

/// `acc += w * v`; `acc` has room for the carry.
fn mul_add(acc: &mut [u32], w: &[u32], v: u32) {
    let mut carry = 0u64;
    for (a, &x) in acc.iter_mut().zip(w) {
        let t = *a as u64 + x as u64 * v as u64 + carry;
        *a = t as u32;
        carry = t >> 32;
    }
    for a in &mut acc[w.len()..] {
        if carry == 0 {
            break;
        }
        let t = *a as u64 + carry;
        *a = t as u32;
        carry = t >> 32;
    }
    debug_assert_eq!(carry, 0);
}

fn rem_small(x: &[u32], p: u32) -> u32 {
    x.iter()
        .rev()
        .fold(0u64, |r, &limb| ((r << 32) | limb as u64) % p as u64) as u32
}

fn div_small(x: &mut [u32], p: u32) {
    let mut r = 0u64;
    for limb in x.iter_mut().rev() {
        let cur = (r << 32) | *limb as u64;
        *limb = (cur / p as u64) as u32;
        r = cur % p as u64;
    }
    debug_assert_eq!(r, 0);
}

/// Magnitude of `x` mod [`PRIME`], with the sign applied.
pub(crate) fn big_mod(x: &BigInt) -> u64 {
    let r = x
        .magnitude()
        .iter_u32_digits()
        .rev()
        .fold(0u64, |r, limb| ((r << 32) | limb as u64) % PRIME);
    match x.sign() {
        Sign::Minus if r != 0 => PRIME - r,
        _ => r,
    }
}

pub(crate) fn mul_mod(a: u64, b: u64) -> u64 {
    a * b % PRIME
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Inverts every entry mod [`PRIME`] with one exponentiation. `None` if any
/// entry is `0`.
pub(crate) fn batch_inverse(xs: &[u64]) -> Option<Vec<u64>> {
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = 1u64;
    for &x in xs {
        if x == 0 {
            return None;
        }
        prefix.push(acc);
        acc = mul_mod(acc, x);
    }
    let mut inv = pow_mod(acc, PRIME - 2);
    let mut out = vec![0; xs.len()];
    for k in (0..xs.len()).rev() {
        out[k] = mul_mod(inv, prefix[k]);
        inv = mul_mod(inv, xs[k]);
    }
    Some(out)
}

impl Tables {
    fn build(n: usize, m: usize) -> Tables {
        let primes = primes_upto(2 * n);
        let rows = (1..=n as u64)
            .map(|i| {
                let factors = lcm_factors(i, i + n as u64 - 1, &primes);
                let l: BigUint = factors
                    .iter()
                    .map(|&(p, e)| BigUint::from(p).pow(e))
                    .product();
                let weights = (i..i + n as u64)
                    .map(|d| {
                        let mut w = digits(&l);
                        div_small(&mut w, d as u32);
                        w
                    })
                    .collect();
                Row {
                    den: digits(&l),
                    factors,
                    weights,
                }
            })
            .collect();
        let mut inv = hilbert_inverse_int(n);
        inv.truncate(m * n);
        let inv_mod = inv.iter().map(big_mod).collect();
        Tables { rows, inv, inv_mod }
    }

    /// `(H_n y)_i` for a column of bytes, reduced.
    pub(crate) fn row_product(&self, i: usize, y: &[u8]) -> Rational {
        let row = &self.rows[i];
        let mut acc = vec![0u32; row.den.len() + 2];
        for (w, &v) in row.weights.iter().zip(y) {
            if v != 0 {
                mul_add(&mut acc, w, v as u32);
            }
        }
        if acc.iter().all(|&a| a == 0) {
            return Rational::zero();
        }
        let mut den = row.den.clone();
        for &(p, e) in &row.factors {
            for _ in 0..e {
                if rem_small(&acc, p) != 0 {
                    break;
                }
                div_small(&mut acc, p);
                div_small(&mut den, p);
            }
        }
        Rational::from_reduced(
            BigInt::from_biguint(Sign::Plus, BigUint::new(acc)),
            BigInt::from_biguint(Sign::Plus, BigUint::new(den)),
        )
    }
}

const CACHE_LIMIT: usize = 16;

type Cache = Mutex<HashMap<(usize, usize), Arc<Tables>>>;

/// Shared tables for `(n, m)`, built on first use.
pub(crate) fn tables(n: usize, m: usize) -> Arc<Tables> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("table cache").get(&(n, m)) {
        return Arc::clone(t);
    }
    let built = Arc::new(Tables::build(n, m));
    let mut guard = cache.lock().expect("table cache");
    if guard.len() >= CACHE_LIMIT {
        guard.clear();
    }
    Arc::clone(guard.entry((n, m)).or_insert(built))
}
