//! Block chaining over rational cipher columns.
//!
//! A cipher block is a vector of rationals, so it cannot be XORed into the
//! next plaintext block directly. [`chain_bytes`] folds its canonical text
//! form down to `m` bytes; both sides compute it from the ciphertext alone.

use super::block::{CipherBlock, HilbertBlockCipher};
use super::key::{SessionKey, MAX_BLOCK_SIZE};
use crate::error::{Error, IntegrityError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiphertextMessage {
    version: u32,
    m: usize,
    blocks: Vec<CipherBlock>,
}

impl CiphertextMessage {
    pub fn new(m: usize, blocks: Vec<CipherBlock>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidInput("ciphertext has no blocks".into()));
        };
        let n = first.len();
        if let Some(k) = blocks.iter().position(|b| b.len() != n) {
            return Err(Error::Dimension(format!(
                "block {} has {} entries, block 0 has {n}",
                k,
                blocks[k].len()
            )));
        }
        if m == 0 || m >= n {
            return Err(Error::Dimension(format!(
                "block size m={m} incompatible with {n}-entry blocks"
            )));
        }
        Ok(CiphertextMessage {
            version: FORMAT_VERSION,
            m,
            blocks,
        })
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[CipherBlock] {
        &self.blocks
    }

    /// Entries per block. Equals the secret order `n`; the format cannot hide it.
    pub fn block_len(&self) -> usize {
        self.blocks[0].len()
    }

    /// Keeps the first `t` blocks.
    pub fn truncated(&self, t: usize) -> Result<Self> {
        CiphertextMessage::new(self.m, self.blocks[..t.min(self.blocks.len())].to_vec())
    }
}

/// Folds `"<num>/<den>;<num>/<den>;..."` into `m` bytes with
/// `b[k mod m] = 31 * b[k mod m] + s_k (mod 256)`.
pub fn chain_bytes(cblock: &CipherBlock, m: usize) -> Vec<u8> {
    assert!(m >= 1, "chain width must be positive");
    let mut out = vec![0u8; m];
    let mut k = 0usize;
    let mut feed = |bytes: &[u8]| {
        for &s in bytes {
            let slot = &mut out[k % m];
            *slot = slot.wrapping_mul(31).wrapping_add(s);
            k += 1;
        }
    };
    for (idx, entry) in cblock.entries().iter().enumerate() {
        if idx > 0 {
            feed(b";");
        }
        feed(entry.to_string().as_bytes());
    }
    out
}

/// Appends `p` copies of the byte `p`, `p = m - len mod m` (so `1..=m`), and
/// splits into `m`-byte blocks.
pub fn pad_message(data: &[u8], m: usize) -> Result<Vec<Vec<u8>>> {
    check_block_size(m)?;
    let p = m - data.len() % m;
    let mut padded = Vec::with_capacity(data.len() + p);
    padded.extend_from_slice(data);
    padded.resize(data.len() + p, p as u8);
    Ok(padded.chunks(m).map(<[u8]>::to_vec).collect())
}

pub fn unpad_message(mut data: Vec<u8>, m: usize) -> Result<Vec<u8>> {
    check_block_size(m)?;
    if data.is_empty() || !data.len().is_multiple_of(m) {
        return Err(Error::Padding(format!(
            "length {} is not a positive multiple of {m}",
            data.len()
        )));
    }
    let p = *data.last().expect("nonempty") as usize;
    if p == 0 || p > m {
        return Err(Error::Padding(format!("final byte {p} outside 1..={m}")));
    }
    if data[data.len() - p..].iter().any(|&b| b as usize != p) {
        return Err(Error::Padding(format!(
            "trailing {p} bytes are not all {p}"
        )));
    }
    data.truncate(data.len() - p);
    Ok(data)
}

fn check_block_size(m: usize) -> Result<()> {
    if m == 0 || m > MAX_BLOCK_SIZE {
        return Err(Error::InvalidInput(format!(
            "block size m={m} outside 1..={MAX_BLOCK_SIZE}"
        )));
    }
    Ok(())
}

fn xor_into(dst: &mut [u8], src: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub fn cbc_encrypt(key: &SessionKey, data: &[u8]) -> Result<CiphertextMessage> {
    let cipher = HilbertBlockCipher::new(key);
    let mut chain = key.iv().to_vec();
    let mut blocks = Vec::new();
    for mut block in pad_message(data, key.m())? {
        xor_into(&mut block, &chain);
        let c = cipher.encrypt(&block)?;
        chain = chain_bytes(&c, key.m());
        blocks.push(c);
    }
    CiphertextMessage::new(key.m(), blocks)
}

/// CBC decryption without the final padding check.
pub fn cbc_decrypt_raw(key: &SessionKey, msg: &CiphertextMessage) -> Result<Vec<u8>> {
    check_message(key, msg)?;
    let cipher = HilbertBlockCipher::new(key);
    let mut chain = key.iv().to_vec();
    let mut out = Vec::with_capacity(msg.blocks().len() * key.m());
    for c in msg.blocks() {
        let mut p = cipher.decrypt(c)?;
        xor_into(&mut p, &chain);
        chain = chain_bytes(c, key.m());
        out.extend_from_slice(&p);
    }
    Ok(out)
}

pub fn cbc_decrypt(key: &SessionKey, msg: &CiphertextMessage) -> Result<Vec<u8>> {
    let raw = cbc_decrypt_raw(key, msg)?;
    unpad_message(raw, key.m())
}

/// Each block encrypted independently (no chaining). Equal plaintext blocks
/// give equal cipher blocks; kept for comparison with [`cbc_encrypt`].
pub fn ecb_encrypt(key: &SessionKey, data: &[u8]) -> Result<CiphertextMessage> {
    let cipher = HilbertBlockCipher::new(key);
    let blocks = pad_message(data, key.m())?
        .iter()
        .map(|b| cipher.encrypt(b))
        .collect::<Result<Vec<_>>>()?;
    CiphertextMessage::new(key.m(), blocks)
}

pub fn ecb_decrypt(key: &SessionKey, msg: &CiphertextMessage) -> Result<Vec<u8>> {
    check_message(key, msg)?;
    let cipher = HilbertBlockCipher::new(key);
    let mut out = Vec::new();
    for c in msg.blocks() {
        out.extend(cipher.decrypt(c)?);
    }
    unpad_message(out, key.m())
}

fn check_message(key: &SessionKey, msg: &CiphertextMessage) -> Result<()> {
    if msg.m() != key.m() {
        return Err(IntegrityError::BlockSize {
            expected: key.m(),
            found: msg.m(),
        }
        .into());
    }
    if msg.block_len() != key.n() {
        return Err(IntegrityError::BlockLength {
            expected: key.n(),
            found: msg.block_len(),
        }
        .into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::key::keygen;
    use crate::rational::Rational;
    use proptest::prelude::*;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn key(m: usize, n: usize, seed: u64) -> SessionKey {
        keygen(m, Some(n), &mut ChaCha20Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn chain_fold_worked_example() {
        let c = CipherBlock::new(vec![Rational::integer(3)]).unwrap();
        assert_eq!(chain_bytes(&c, 1), vec![85]);
    }

    #[test]
    fn chain_uses_semicolon_separator() {
        // "1/2;-1/1" folded into 8 slots is the bytes themselves
        let c =
            CipherBlock::new(vec![Rational::new(1, 2).unwrap(), Rational::integer(-1)]).unwrap();
        assert_eq!(chain_bytes(&c, 8), b"1/2;-1/1".to_vec());
        assert_eq!(chain_bytes(&c, 9), [b"1/2;-1/1".as_slice(), &[0]].concat());
    }

    #[test]
    fn padding_shapes() {
        let blocks = pad_message(&[9; 5], 3).unwrap();
        assert_eq!(blocks, vec![vec![9, 9, 9], vec![9, 9, 1]]);
        let blocks = pad_message(&[9; 3], 3).unwrap();
        assert_eq!(blocks, vec![vec![9, 9, 9], vec![3, 3, 3]]);
        assert_eq!(pad_message(&[], 4).unwrap(), vec![vec![4; 4]]);
        assert!(pad_message(&[], 0).is_err());
    }

    #[test]
    fn malformed_padding_rejected() {
        assert!(matches!(
            unpad_message(vec![1, 2, 0], 3),
            Err(Error::Padding(_))
        ));
        assert!(matches!(
            unpad_message(vec![1, 2, 4], 3),
            Err(Error::Padding(_))
        ));
        assert!(matches!(
            unpad_message(vec![1, 3, 2], 3),
            Err(Error::Padding(_))
        ));
        assert!(matches!(
            unpad_message(vec![1, 2], 3),
            Err(Error::Padding(_))
        ));
        assert_eq!(unpad_message(vec![1, 2, 2, 2], 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn identical_blocks_diverge_under_cbc() {
        let k = key(3, 7, 1);
        let msg = cbc_encrypt(&k, &[5, 6, 7, 5, 6, 7]).unwrap();
        assert_ne!(msg.blocks()[0], msg.blocks()[1]);
        let ecb = ecb_encrypt(&k, &[5, 6, 7, 5, 6, 7]).unwrap();
        assert_eq!(ecb.blocks()[0], ecb.blocks()[1]);
        assert_eq!(ecb_decrypt(&k, &ecb).unwrap(), vec![5, 6, 7, 5, 6, 7]);
    }

    #[test]
    fn iv_change_changes_first_block() {
        let k = key(3, 7, 2);
        let mut iv = k.iv().to_vec();
        iv[1] ^= 1;
        let k2 = k.with_iv(iv).unwrap();
        let a = cbc_encrypt(&k, b"abcdef").unwrap();
        let b = cbc_encrypt(&k2, b"abcdef").unwrap();
        assert_ne!(a.blocks()[0], b.blocks()[0]);
    }

    #[test]
    fn corruption_is_local() {
        let k = key(3, 7, 3);
        let data = b"abcdefgh"; // 3 blocks after padding
        let msg = cbc_encrypt(&k, data).unwrap();
        assert_eq!(msg.blocks().len(), 3);
        let mut blocks = msg.blocks().to_vec();
        // swap C_1 for another valid column so decryption still succeeds
        let cipher = HilbertBlockCipher::new(&k);
        blocks[0] = cipher.encrypt(&[1, 1, 1]).unwrap();
        let tampered = CiphertextMessage::new(3, blocks).unwrap();
        let raw = cbc_decrypt_raw(&k, &tampered).unwrap();
        let clean = cbc_decrypt_raw(&k, &msg).unwrap();
        assert_ne!(raw[0..3], clean[0..3]);
        assert_ne!(raw[3..6], clean[3..6]);
        assert_eq!(raw[6..9], clean[6..9]);
    }

    #[test]
    fn corrupted_entry_raises_integrity() {
        let k = key(3, 7, 4);
        let msg = cbc_encrypt(&k, b"abcdefgh").unwrap();
        let mut blocks = msg.blocks().to_vec();
        let mut e = blocks[0].entries().to_vec();
        e[0] = &e[0] + &Rational::one();
        blocks[0] = CipherBlock::new(e).unwrap();
        let err = cbc_decrypt(&k, &CiphertextMessage::new(3, blocks).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
    }

    #[test]
    fn truncated_message_decrypts_prefix() {
        let k = key(4, 11, 5);
        let data: Vec<u8> = (0..21).collect();
        let msg = cbc_encrypt(&k, &data).unwrap();
        let short = msg.truncated(3).unwrap();
        let raw = cbc_decrypt_raw(&k, &short).unwrap();
        assert_eq!(raw, data[..12]);
        assert!(matches!(cbc_decrypt(&k, &short), Err(Error::Padding(_))));
    }

    #[test]
    fn mismatched_key_is_integrity_error() {
        let k = key(3, 7, 6);
        let other = key(3, 11, 6);
        let msg = cbc_encrypt(&k, b"hello").unwrap();
        assert_eq!(
            cbc_decrypt(&other, &msg),
            Err(Error::Integrity(IntegrityError::BlockLength {
                expected: 11,
                found: 7
            }))
        );
        let wrong_m = key(2, 7, 6);
        assert!(matches!(
            cbc_decrypt(&wrong_m, &msg),
            Err(Error::Integrity(IntegrityError::BlockSize { .. }))
        ));
    }

    #[test]
    fn message_invariants() {
        assert!(CiphertextMessage::new(3, vec![]).is_err());
        let a = CipherBlock::new(vec![Rational::one(); 5]).unwrap();
        let b = CipherBlock::new(vec![Rational::one(); 4]).unwrap();
        assert!(CiphertextMessage::new(3, vec![a.clone(), b]).is_err());
        assert!(CiphertextMessage::new(5, vec![a]).is_err());
    }

    #[test]
    fn random_messages_roundtrip_multi_params() {
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for &(n, m) in &[(7usize, 3usize), (29, 16), (3, 1)] {
            let k = keygen(m, Some(n), &mut rng).unwrap();
            for len in [0usize, 1, m - 1, m, m + 1, 5 * m, 257] {
                let mut data = vec![0u8; len];
                rng.fill_bytes(&mut data);
                let msg = cbc_encrypt(&k, &data).unwrap();
                assert!(msg.blocks().iter().all(|b| b.len() == n));
                assert_eq!(cbc_decrypt(&k, &msg).unwrap(), data);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn pad_unpad_roundtrip(data in proptest::collection::vec(any::<u8>(), 0..200), m in 1usize..=255) {
            let blocks = pad_message(&data, m).unwrap();
            prop_assert!(blocks.iter().all(|b| b.len() == m));
            let flat: Vec<u8> = blocks.concat();
            prop_assert_eq!(unpad_message(flat, m).unwrap(), data);
        }

        #[test]
        fn cbc_roundtrip(data in proptest::collection::vec(any::<u8>(), 0..600), seed in any::<u64>()) {
            let k = key(16, 29, seed);
            let msg = cbc_encrypt(&k, &data).unwrap();
            prop_assert_eq!(cbc_decrypt(&k, &msg).unwrap(), data);
        }
    }
}
