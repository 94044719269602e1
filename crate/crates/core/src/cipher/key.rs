use rand::RngCore;

use crate::error::{Error, Result};

/// Largest block size; padding stores the pad length in a single byte.
pub const MAX_BLOCK_SIZE: usize = 255;

/// Secret material for one session.
///
/// `n` (the Hilbert order) and `pad` are secret, `m` is public. `iv` seeds the
/// chain and is kept secret as well.
#[derive(Clone, PartialEq, Eq)]
pub struct SessionKey {
    n: usize,
    m: usize,
    pad: Vec<u8>,
    iv: Vec<u8>,
}

impl SessionKey {
    /// Checks `n > m >= 1`, `m <= 255`, `|pad| = n - m`, `|iv| = m`.
    /// Primality of `n` is only enforced by [`keygen`].
    pub fn new(n: usize, m: usize, pad: Vec<u8>, iv: Vec<u8>) -> Result<Self> {
        if m == 0 || m > MAX_BLOCK_SIZE {
            return Err(Error::InvalidKey(format!(
                "block size m={m} outside 1..={MAX_BLOCK_SIZE}"
            )));
        }
        if n <= m {
            return Err(Error::InvalidKey(format!("order n={n} must exceed m={m}")));
        }
        if pad.len() != n - m {
            return Err(Error::InvalidKey(format!(
                "pad has {} bytes, expected n-m={}",
                pad.len(),
                n - m
            )));
        }
        if iv.len() != m {
            return Err(Error::InvalidKey(format!(
                "iv has {} bytes, expected m={m}",
                iv.len()
            )));
        }
        Ok(SessionKey { n, m, pad, iv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pad(&self) -> &[u8] {
        &self.pad
    }

    pub fn iv(&self) -> &[u8] {
        &self.iv
    }

    pub fn with_iv(&self, iv: Vec<u8>) -> Result<Self> {
        SessionKey::new(self.n, self.m, self.pad.clone(), iv)
    }
}

impl std::fmt::Debug for SessionKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SessionKey")
            .field("m", &self.m)
            .finish_non_exhaustive()
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn next_prime(from: usize) -> usize {
    (from..)
        .find(|&k| is_prime(k))
        .expect("primes are unbounded")
}

/// New session key. Without an explicit order, `n` is the smallest prime
/// `>= 2m + 1`, which keeps the secret pad at least as long as a block.
pub fn keygen<R: RngCore + ?Sized>(
    m: usize,
    n_request: Option<usize>,
    rng: &mut R,
) -> Result<SessionKey> {
    if m == 0 || m > MAX_BLOCK_SIZE {
        return Err(Error::InvalidKey(format!(
            "block size m={m} outside 1..={MAX_BLOCK_SIZE}"
        )));
    }
    let n = match n_request {
        Some(n) if !is_prime(n) => {
            return Err(Error::InvalidKey(format!(
                "requested order n={n} is not prime"
            )))
        }
        Some(n) if n <= m => {
            return Err(Error::InvalidKey(format!("order n={n} must exceed m={m}")))
        }
        Some(n) => n,
        None => next_prime(2 * m + 1),
    };
    let mut pad = vec![0u8; n - m];
    let mut iv = vec![0u8; m];
    rng.fill_bytes(&mut pad);
    rng.fill_bytes(&mut iv);
    SessionKey::new(n, m, pad, iv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(7)
    }

    #[test]
    fn default_order_is_next_prime_above_twice_m() {
        let k = keygen(3, None, &mut rng()).unwrap();
        assert_eq!((k.n(), k.pad().len(), k.iv().len()), (7, 4, 3));
        let k = keygen(1, None, &mut rng()).unwrap();
        assert_eq!((k.n(), k.pad().len()), (3, 2));
        assert_eq!(keygen(16, None, &mut rng()).unwrap().n(), 37);
        assert_eq!(keygen(64, None, &mut rng()).unwrap().n(), 131);
    }

    #[test]
    fn explicit_order_checked() {
        assert!(matches!(
            keygen(3, Some(6), &mut rng()),
            Err(Error::InvalidKey(_))
        ));
        assert!(matches!(
            keygen(3, Some(3), &mut rng()),
            Err(Error::InvalidKey(_))
        ));
        assert!(matches!(
            keygen(3, Some(2), &mut rng()),
            Err(Error::InvalidKey(_))
        ));
        assert_eq!(keygen(16, Some(29), &mut rng()).unwrap().n(), 29);
    }

    #[test]
    fn block_size_bounds() {
        assert!(keygen(0, None, &mut rng()).is_err());
        assert!(keygen(256, None, &mut rng()).is_err());
        assert!(keygen(255, None, &mut rng()).is_ok());
    }

    #[test]
    fn constructor_checks_lengths() {
        assert!(SessionKey::new(5, 3, vec![0; 2], vec![0; 3]).is_ok());
        assert!(SessionKey::new(5, 3, vec![0; 1], vec![0; 3]).is_err());
        assert!(SessionKey::new(5, 3, vec![0; 2], vec![0; 2]).is_err());
        assert!(SessionKey::new(3, 3, vec![], vec![0; 3]).is_err());
    }

    #[test]
    fn primes() {
        let small: Vec<usize> = (0..30).filter(|&k| is_prime(k)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(next_prime(33), 37);
    }

    #[test]
    fn debug_hides_secrets() {
        let k = SessionKey::new(5, 3, vec![9, 9], vec![1, 2, 3]).unwrap();
        let s = format!("{k:?}");
        assert!(!s.contains("pad") && !s.contains("iv") && !s.contains("n:"));
    }
}
