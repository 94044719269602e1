//! Exact-arithmetic toolkit around a Hilbert-matrix block cipher.
//!
//! * [`rational`] and [`exactmat`]: canonical big rationals and dense exact
//!   matrices with elimination-based determinant and inverse.
//! * [`specialmat`]: Hilbert, Cauchy, Vandermonde and combinatorial matrices
//!   with closed-form determinants and inverses.
//! * [`cipher`]: the block cipher `C = H_n [P; K]` in CBC mode, with text
//!   formats for keys and ciphertexts.
//! * [`classical`]: Playfair, Hill, and the Hill known-plaintext attack.
//! * [`envelope`]: textbook RSA wrapping of session keys.
//! * [`stability`]: float vs exact inversion of `H_n`.
//!
//! None of the ciphers here are secure. They are linear, or textbook, or both.
//!
//! ```
//! use hilbx::cipher::{cbc_decrypt, cbc_encrypt, keygen};
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1);
//! let key = keygen(16, None, &mut rng).unwrap();
//! let msg = cbc_encrypt(&key, b"attack at dawn").unwrap();
//! assert_eq!(cbc_decrypt(&key, &msg).unwrap(), b"attack at dawn");
//! ```

pub mod cipher;
pub mod classical;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod exactmat;
pub mod rational;
pub mod specialmat;
pub mod stability;

pub use error::{Error, IntegrityError, Result};
pub use exactmat::Matrix;
pub use rational::Rational;
