//! Classical matrix ciphers for comparison: Playfair and Hill, the Hill
//! known-plaintext attack, and an equal-block detector.

mod hill;
mod playfair;

pub use hill::{
    hill_decrypt, hill_encrypt, hill_kpa_attack, inv_mod, letter_values, parse_pairs, write_pairs,
    HillKey,
};
pub use playfair::{
    format_digrams, playfair_decrypt, playfair_encrypt, playfair_prepare, Digram, PlayfairKey,
};

/// Every index pair `(i, j)`, `i < j`, whose blocks are exactly equal.
pub fn ecb_repeat_detector<T: PartialEq>(blocks: &[T]) -> Vec<(usize, usize)> {
    let mut hits = Vec::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if blocks[i] == blocks[j] {
                hits.push((i, j));
            }
        }
    }
    hits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{cbc_encrypt, ecb_encrypt, SessionKey};

    #[test]
    fn detector_basics() {
        assert!(ecb_repeat_detector::<u8>(&[]).is_empty());
        assert_eq!(
            ecb_repeat_detector(&["ab", "cd", "ab", "ab"]),
            vec![(0, 2), (0, 3), (2, 3)]
        );
    }

    #[test]
    fn detector_on_hilbert_modes() {
        let key = SessionKey::new(7, 3, vec![1, 2, 3, 4], vec![9, 8, 7]).unwrap();
        let data = b"abcabcabc";
        let ecb = ecb_encrypt(&key, data).unwrap();
        assert_eq!(ecb_repeat_detector(ecb.blocks()).len(), 3);
        let cbc = cbc_encrypt(&key, data).unwrap();
        assert!(ecb_repeat_detector(cbc.blocks()).is_empty());
    }
}
