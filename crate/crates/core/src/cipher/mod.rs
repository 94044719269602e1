//! Hilbert-matrix block cipher with CBC chaining.
//!
//! A plaintext block of `m` bytes is extended with the secret pad to an
//! `n x 1` column and multiplied by the Hilbert matrix `H_n`; decryption
//! multiplies by the integer inverse and keeps the first `m` entries.
//!
//! This is a teaching construction. The block map is linear, the block length
//! of the ciphertext reveals `n`, and anyone who knows `n` recovers
//! plaintext without the pad. Do not use it to protect data.

mod block;
mod chain;
mod format;
mod kernel;
mod key;

pub use block::{decrypt_block, encode_block, encrypt_block, CipherBlock, HilbertBlockCipher};
pub use chain::{
    cbc_decrypt, cbc_decrypt_raw, cbc_encrypt, chain_bytes, ecb_decrypt, ecb_encrypt, pad_message,
    unpad_message, CiphertextMessage, FORMAT_VERSION,
};
pub(crate) use format::{field, lines};
pub use format::{
    parse_ciphertext, parse_key, write_ciphertext, write_key, CIPHERTEXT_MAGIC, KEY_MAGIC,
};
pub use key::{is_prime, keygen, next_prime, SessionKey, MAX_BLOCK_SIZE};
