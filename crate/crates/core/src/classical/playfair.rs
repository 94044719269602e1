//! Playfair digram substitution over a keyed 5x5 grid (I and J share a cell).

use crate::error::{Error, Result};

pub type Digram = [u8; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayfairKey {
    grid: [u8; 25],
    // (row, col) by letter index a=0..z=25; 'j' maps to the cell of 'i'
    pos: [(usize, usize); 26],
}

fn fold_j(c: u8) -> u8 {
    if c == b'j' {
        b'i'
    } else {
        c
    }
}

impl PlayfairKey {
    /// Keyword letters (deduplicated, J as I) first, then the rest of the
    /// alphabet in order. Non-letters in the keyword are ignored.
    pub fn new(keyword: &str) -> Self {
        let mut grid = [0u8; 25];
        let mut used = [false; 26];
        let mut k = 0;
        let letters = keyword
            .bytes()
            .filter(u8::is_ascii_alphabetic)
            .map(|c| fold_j(c.to_ascii_lowercase()))
            .chain((b'a'..=b'z').filter(|&c| c != b'j'));
        for c in letters {
            let idx = (c - b'a') as usize;
            if !used[idx] {
                used[idx] = true;
                grid[k] = c;
                k += 1;
            }
        }
        debug_assert_eq!(k, 25);
        let mut pos = [(0, 0); 26];
        for (cell, &c) in grid.iter().enumerate() {
            pos[(c - b'a') as usize] = (cell / 5, cell % 5);
        }
        pos[(b'j' - b'a') as usize] = pos[(b'i' - b'a') as usize];
        PlayfairKey { grid, pos }
    }

    pub fn grid(&self) -> &[u8; 25] {
        &self.grid
    }

    fn at(&self, row: usize, col: usize) -> u8 {
        self.grid[(row % 5) * 5 + col % 5]
    }

    fn locate(&self, c: u8) -> (usize, usize) {
        self.pos[(c - b'a') as usize]
    }

    /// `shift` is 1 to encrypt and 4 (one step back, mod 5) to decrypt.
    fn substitute(&self, [a, b]: Digram, shift: usize) -> Digram {
        let (ra, ca) = self.locate(a);
        let (rb, cb) = self.locate(b);
        if ra == rb {
            [self.at(ra, ca + shift), self.at(rb, cb + shift)]
        } else if ca == cb {
            [self.at(ra + shift, ca), self.at(rb + shift, cb)]
        } else {
            [self.at(ra, cb), self.at(rb, ca)]
        }
    }
}

fn letters(text: &str) -> Result<Vec<u8>> {
    text.bytes()
        .map(|c| {
            if c.is_ascii_alphabetic() {
                Ok(fold_j(c.to_ascii_lowercase()))
            } else {
                Err(Error::InvalidInput(format!(
                    "playfair input must be letters only, found {:?}",
                    c as char
                )))
            }
        })
        .collect()
}

/// Splits text into digrams. A repeated letter within a pair is split with
/// `x` (or `q` when the letter is itself `x`) and the scan resumes at the
/// second copy; an odd final letter gets the same filler.
pub fn playfair_prepare(text: &str) -> Result<Vec<Digram>> {
    let s = letters(text)?;
    let filler = |c: u8| if c == b'x' { b'q' } else { b'x' };
    let mut out = Vec::with_capacity(s.len() / 2 + 1);
    let mut i = 0;
    while i < s.len() {
        let a = s[i];
        match s.get(i + 1) {
            Some(&b) if b != a => {
                out.push([a, b]);
                i += 2;
            }
            _ => {
                out.push([a, filler(a)]);
                i += 1;
            }
        }
    }
    Ok(out)
}

pub fn format_digrams(digrams: &[Digram]) -> String {
    digrams
        .iter()
        .map(|d| String::from_utf8_lossy(d).into_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join(digrams: impl IntoIterator<Item = Digram>) -> String {
    digrams
        .into_iter()
        .flat_map(|d| d.map(char::from))
        .collect()
}

pub fn playfair_encrypt(key: &PlayfairKey, text: &str) -> Result<String> {
    Ok(join(
        playfair_prepare(text)?
            .into_iter()
            .map(|d| key.substitute(d, 1)),
    ))
}

pub fn playfair_decrypt(key: &PlayfairKey, cipher: &str) -> Result<String> {
    let s = letters(cipher)?;
    if s.len() % 2 != 0 {
        return Err(Error::InvalidInput(
            "playfair ciphertext has odd length".into(),
        ));
    }
    Ok(join(s.chunks(2).map(|p| key.substitute([p[0], p[1]], 4))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn monarchy_grid() {
        let k = PlayfairKey::new("monarchy");
        assert_eq!(&k.grid()[..], b"monarchybdefgiklpqstuvwxz");
    }

    #[test]
    fn keyword_j_and_case_fold() {
        let k = PlayfairKey::new("JaM J");
        assert_eq!(&k.grid()[..4], b"iamb");
    }

    #[test]
    fn prepare_rules() {
        assert_eq!(
            format_digrams(&playfair_prepare("balloon").unwrap()),
            "ba lx lo on"
        );
        assert_eq!(format_digrams(&playfair_prepare("ab").unwrap()), "ab");
        assert_eq!(format_digrams(&playfair_prepare("aa").unwrap()), "ax ax");
        assert_eq!(format_digrams(&playfair_prepare("xx").unwrap()), "xq xq");
        assert_eq!(format_digrams(&playfair_prepare("Jig").unwrap()), "ix ig");
        assert!(playfair_prepare("").unwrap().is_empty());
        assert!(playfair_prepare("a b").is_err());
    }

    #[test]
    fn substitution_rules() {
        let k = PlayfairKey::new("monarchy");
        assert_eq!(playfair_encrypt(&k, "ar").unwrap(), "rm");
        assert_eq!(playfair_encrypt(&k, "mu").unwrap(), "cm");
        // rectangle: h (1,1), s (3,3) -> (1,3)=b, (3,1)=p
        assert_eq!(playfair_encrypt(&k, "hs").unwrap(), "bp");
        assert_eq!(playfair_decrypt(&k, "rmcmbp").unwrap(), "armuhs");
        assert!(playfair_decrypt(&k, "abc").is_err());
    }

    proptest! {
        #[test]
        fn decrypt_inverts_encrypt(text in "[a-z]{0,60}", keyword in "[a-z]{0,12}") {
            let k = PlayfairKey::new(&keyword);
            let prepared: String = join(playfair_prepare(&text).unwrap());
            let c = playfair_encrypt(&k, &text).unwrap();
            prop_assert_eq!(playfair_decrypt(&k, &c).unwrap(), prepared);
        }
    }

    #[test]
    fn encryption_is_bijective_on_digrams() {
        let k = PlayfairKey::new("playfair example");
        let cells: Vec<u8> = k.grid().to_vec();
        let mut seen = std::collections::HashSet::new();
        for &a in &cells {
            for &b in &cells {
                if a != b {
                    assert!(seen.insert(k.substitute([a, b], 1)));
                }
            }
        }
        assert_eq!(seen.len(), 25 * 24);
    }
}
