//! The single-block primitive: `C = H_n [P; K]` and its exact inverse.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use std::sync::Arc;

use super::kernel::{self, Tables};
use super::key::SessionKey;
use crate::error::{Error, IntegrityError, Result};
use crate::exactmat::Matrix;
use crate::rational::Rational;

/// One `n x 1` cipher column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CipherBlock(Vec<Rational>);

impl CipherBlock {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty cipher block".into()));
        }
        Ok(CipherBlock(entries))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_column(&self) -> Matrix {
        Matrix::column(self.0.clone()).expect("nonempty")
    }
}

/// The `n x 1` column `[block; pad]` with byte values as integers.
pub fn encode_block(bytes: &[u8], pad: &[u8], m: usize, n: usize) -> Result<Matrix> {
    if bytes.len() != m || pad.len() + m != n {
        return Err(Error::Dimension(format!(
            "block of {} bytes and pad of {} bytes do not form m={m}, n={n}",
            bytes.len(),
            pad.len()
        )));
    }
    Matrix::column(
        bytes
            .iter()
            .chain(pad)
            .map(|&b| Rational::integer(b as i64))
            .collect(),
    )
}

/// Block operations under one key, backed by tables shared per `(n, m)`.
///
/// Decryption first solves for the `m` bytes modulo a 32-bit prime, then
/// confirms the candidate exactly by re-encrypting it with the key's pad.
/// Blocks that fail the check go through exact rational elimination, which
/// also produces the integrity error.
pub struct HilbertBlockCipher {
    key: SessionKey,
    tables: Arc<Tables>,
}

impl HilbertBlockCipher {
    pub fn new(key: &SessionKey) -> Self {
        HilbertBlockCipher {
            key: key.clone(),
            tables: kernel::tables(key.n(), key.m()),
        }
    }

    pub fn key(&self) -> &SessionKey {
        &self.key
    }

    pub fn encrypt(&self, block: &[u8]) -> Result<CipherBlock> {
        let m = self.key.m();
        if block.len() != m {
            return Err(Error::Dimension(format!(
                "plaintext block has {} bytes, expected {m}",
                block.len()
            )));
        }
        Ok(self.encrypt_column(&[block, self.key.pad()].concat()))
    }

    fn encrypt_column(&self, column: &[u8]) -> CipherBlock {
        CipherBlock(
            (0..self.key.n())
                .map(|i| self.tables.row_product(i, column))
                .collect(),
        )
    }

    /// First `m` entries of `H_n^{-1} c`, each required to be a byte.
    pub fn decrypt(&self, cblock: &CipherBlock) -> Result<Vec<u8>> {
        let n = self.key.n();
        if cblock.len() != n {
            return Err(IntegrityError::BlockLength {
                expected: n,
                found: cblock.len(),
            }
            .into());
        }
        match self.candidate(cblock) {
            Some(bytes) => Ok(bytes),
            None => self.decrypt_exact(cblock),
        }
    }

    fn candidate(&self, cblock: &CipherBlock) -> Option<Vec<u8>> {
        let n = self.key.n();
        let dens: Vec<u64> = cblock
            .entries()
            .iter()
            .map(|c| kernel::big_mod(c.denom()))
            .collect();
        let dens = kernel::batch_inverse(&dens)?;
        let c: Vec<u64> = cblock
            .entries()
            .iter()
            .zip(&dens)
            .map(|(e, d)| kernel::mul_mod(kernel::big_mod(e.numer()), *d))
            .collect();
        let mut column = Vec::with_capacity(n);
        for row in self.tables.inv_mod.chunks(n) {
            let v = row.iter().zip(&c).fold(0, |acc, (a, b)| {
                (acc + kernel::mul_mod(*a, *b)) % kernel::PRIME
            });
            column.push(u8::try_from(v).ok()?);
        }
        column.extend_from_slice(self.key.pad());
        let rebuilt = self.encrypt_column(&column);
        (rebuilt == *cblock).then(|| column[..self.key.m()].to_vec())
    }

    fn decrypt_exact(&self, cblock: &CipherBlock) -> Result<Vec<u8>> {
        let n = self.key.n();
        let common = cblock
            .entries()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = cblock
            .entries()
            .iter()
            .map(|c| c.numer() * (&common / c.denom()))
            .collect();

        let mut out = Vec::with_capacity(self.key.m());
        for (index, row) in self.tables.inv.chunks(n).enumerate() {
            let s: BigInt = row.iter().zip(&scaled).map(|(a, b)| a * b).sum();
            let (q, r) = s.div_rem(&common);
            if !r.is_zero() {
                let value = Rational::new(s, common.clone()).expect("positive denominator");
                return Err(IntegrityError::NonInteger { index, value }.into());
            }
            match q.to_u8() {
                Some(b) => out.push(b),
                None => {
                    return Err(IntegrityError::OutOfRange {
                        index,
                        value: Rational::integer(q),
                    }
                    .into())
                }
            }
        }
        Ok(out)
    }
}

pub fn encrypt_block(key: &SessionKey, block: &[u8]) -> Result<CipherBlock> {
    HilbertBlockCipher::new(key).encrypt(block)
}

pub fn decrypt_block(key: &SessionKey, cblock: &CipherBlock) -> Result<Vec<u8>> {
    HilbertBlockCipher::new(key).decrypt(cblock)
}
