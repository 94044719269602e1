//! Hill cipher over Z/26 and its known-plaintext key recovery.

use std::fmt;

use crate::error::{Error, Result};

pub const MODULUS: i64 = 26;

fn rem(v: i64) -> i64 {
    v.rem_euclid(MODULUS)
}

/// Square matrix over Z/26, row-major.
#[derive(Clone, PartialEq, Eq)]
struct ModMatrix {
    size: usize,
    a: Vec<i64>,
}

impl ModMatrix {
    fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.size + j]
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> ModMatrix {
        let size = self.size - 1;
        let a = (0..self.size)
            .filter(|&i| i != skip_r)
            .flat_map(|i| {
                (0..self.size)
                    .filter(move |&j| j != skip_c)
                    .map(move |j| self.get(i, j))
            })
            .collect();
        ModMatrix { size, a }
    }

    /// Laplace expansion mod 26; key sizes are tiny.
    fn det(&self) -> i64 {
        match self.size {
            0 => 1,
            1 => rem(self.a[0]),
            _ => (0..self.size).fold(0, |acc, j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                rem(acc + sign * self.get(0, j) * self.minor(0, j).det())
            }),
        }
    }

    /// Adjugate times the inverse of the determinant, if it is a unit.
    fn inverse(&self) -> Option<ModMatrix> {
        let d_inv = inv_mod(self.det())?;
        let n = self.size;
        let mut a = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let cof = if n == 1 { 1 } else { self.minor(i, j).det() };
                // adj[j][i] = cofactor(i, j)
                a[j * n + i] = rem(sign * cof * d_inv);
            }
        }
        Some(ModMatrix { size: n, a })
    }

    fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        let n = self.size;
        let a = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                rem((0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
            })
            .collect();
        ModMatrix { size: n, a }
    }

    fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.size)
            .map(|i| rem((0..self.size).map(|k| self.get(i, k) * v[k]).sum()))
            .collect()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn inv_mod(v: i64) -> Option<i64> {
    let v = rem(v);
    (1..MODULUS).find(|&k| rem(v * k) == 1)
}

/// An invertible key matrix with its precomputed inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct HillKey {
    mat: ModMatrix,
    inv: ModMatrix,
}

impl HillKey {
    /// Entries are reduced mod 26; rejects keys with `gcd(det, 26) != 1`.
    pub fn new(size: usize, entries: &[i64]) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::Dimension(format!(
                "hill key of size {size} needs {} entries, got {}",
                size * size,
                entries.len()
            )));
        }
        let mat = ModMatrix {
            size,
            a: entries.iter().map(|&v| rem(v)).collect(),
        };
        let det = mat.det();
        if gcd(det, MODULUS) != 1 {
            return Err(Error::Degenerate(format!(
                "hill key determinant {det} is not invertible mod 26"
            )));
        }
        let inv = mat.inverse().expect("unit determinant");
        Ok(HillKey { mat, inv })
    }

    pub fn size(&self) -> usize {
        self.mat.size
    }

    pub fn entries(&self) -> &[i64] {
        &self.mat.a
    }

    pub fn inverse_entries(&self) -> &[i64] {
        &self.inv.a
    }
}

impl fmt::Display for HillKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        let rows: Vec<String> = self
            .mat
            .a
            .chunks(n)
            .map(|r| {
                let cells: Vec<String> = r.iter().map(i64::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl fmt::Debug for HillKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HillKey{self}")
    }
}

/// Lowercase letter values a=0..z=25; other characters are dropped.
pub fn letter_values(text: &str) -> Vec<i64> {
    text.bytes()
        .filter(u8::is_ascii_alphabetic)
        .map(|c| (c.to_ascii_lowercase() - b'a') as i64)
        .collect()
}

fn to_letters(v: &[i64]) -> String {
    v.iter().map(|&x| (b'a' + x as u8) as char).collect()
}

fn transform(m: &ModMatrix, values: &[i64]) -> String {
    let out: Vec<i64> = values.chunks(m.size).flat_map(|c| m.apply(c)).collect();
    to_letters(&out)
}

/// `C = K P mod 26` per column; the text is padded with `x` to a whole block.
pub fn hill_encrypt(key: &HillKey, text: &str) -> String {
    let mut v = letter_values(text);
    while !v.len().is_multiple_of(key.size()) {
        v.push((b'x' - b'a') as i64);
    }
    transform(&key.mat, &v)
}

pub fn hill_decrypt(key: &HillKey, cipher: &str) -> Result<String> {
    let v = letter_values(cipher);
    if !v.len().is_multiple_of(key.size()) {
        return Err(Error::InvalidInput(format!(
            "hill ciphertext length {} is not a multiple of {}",
            v.len(),
            key.size()
        )));
    }
    Ok(transform(&key.inv, &v))
}

/// Upper bound on column subsets tried when looking for an invertible `P`.
const MAX_SUBSETS: usize = 100_000;

/// Recovers `K = C P^{-1} mod 26` from aligned plaintext/ciphertext.
///
/// Every pair contributes `len/m` columns. The first `m`-subset of columns
/// (in index order) whose plaintext matrix is invertible mod 26 is used, and
/// the recovered key must reproduce every supplied column.
pub fn hill_kpa_attack(m: usize, pairs: &[(String, String)]) -> Result<HillKey> {
    if m == 0 {
        return Err(Error::InvalidInput("block size must be positive".into()));
    }
    let mut pcols: Vec<Vec<i64>> = Vec::new();
    let mut ccols: Vec<Vec<i64>> = Vec::new();
    for (k, (p, c)) in pairs.iter().enumerate() {
        let (p, c) = (letter_values(p), letter_values(c));
        if p.len() != c.len() || p.len() % m != 0 {
            return Err(Error::InvalidInput(format!(
                "pair {k}: lengths {} and {} must be equal multiples of {m}",
                p.len(),
                c.len()
            )));
        }
        pcols.extend(p.chunks(m).map(<[i64]>::to_vec));
        ccols.extend(c.chunks(m).map(<[i64]>::to_vec));
    }
    if pcols.len() < m {
        return Err(Error::AttackInconclusive(format!(
            "{} columns known, need at least {m}",
            pcols.len()
        )));
    }

    let stack = |cols: &[Vec<i64>], pick: &[usize]| ModMatrix {
        size: m,
        a: (0..m)
            .flat_map(|r| pick.iter().map(move |&c| cols[c][r]))
            .collect(),
    };

    let mut tried = 0;
    let mut pick: Vec<usize> = (0..m).collect();
    loop {
        if let Some(p_inv) = stack(&pcols, &pick).inverse() {
            let k = stack(&ccols, &pick).mul(&p_inv);
            let reproduces = pcols.iter().zip(&ccols).all(|(p, c)| k.apply(p) == *c);
            if !reproduces {
                return Err(Error::AttackInconclusive(
                    "pairs are not consistent with a single key".into(),
                ));
            }
            return HillKey::new(m, &k.a).map_err(|_| {
                Error::AttackInconclusive("recovered matrix is not an invertible key".into())
            });
        }
        tried += 1;
        if tried >= MAX_SUBSETS || !next_combination(&mut pick, pcols.len()) {
            return Err(Error::AttackInconclusive(
                "no invertible plaintext matrix among the known columns; supply more text".into(),
            ));
        }
    }
}

/// Advances `pick` to the next increasing index subset of `0..n`.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub const PAIRS_FILE_WHAT: &str = "attack pairs file";

/// `P=<letters> C=<letters>` per line.
pub fn write_pairs(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(p, c)| format!("P={p} C={c}\n"))
        .collect()
}

pub fn parse_pairs(text: &str, m: usize) -> Result<Vec<(String, String)>> {
    let lines = crate::cipher::lines(text, PAIRS_FILE_WHAT)?;
    lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let bad = |why: &str| Error::format(PAIRS_FILE_WHAT, format!("line {}: {why}", i + 1));
            let (p, c) = line
                .split_once(' ')
                .ok_or_else(|| bad("expected `P=... C=...`"))?;
            let p = crate::cipher::field(p, "P", PAIRS_FILE_WHAT)?;
            let c = crate::cipher::field(c, "C", PAIRS_FILE_WHAT)?;
            let ok = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase());
            if !ok(p) || !ok(c) {
                return Err(bad("letters must be nonempty lowercase a-z"));
            }
            if p.len() != c.len() || m == 0 || p.len() % m != 0 {
                return Err(bad("lengths must be equal multiples of m"));
            }
            Ok((p.to_string(), c.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn key33() -> HillKey {
        HillKey::new(2, &[3, 3, 2, 5]).unwrap()
    }

    #[test]
    fn worked_example_encrypts() {
        assert_eq!(hill_encrypt(&key33(), "help"), "hiat");
        assert_eq!(hill_decrypt(&key33(), "hiat").unwrap(), "help");
    }

    #[test]
    fn worked_example_inverse() {
        assert_eq!(key33().inverse_entries(), &[15, 17, 20, 9]);
        assert_eq!(key33().mat.mul(&key33().inv).a, vec![1, 0, 0, 1]);
    }

    #[test]
    fn identity_key_is_transparent() {
        let id = HillKey::new(2, &[1, 0, 0, 1]).unwrap();
        assert_eq!(hill_encrypt(&id, "attack"), "attack");
    }

    #[test]
    fn strips_and_pads() {
        assert_eq!(hill_encrypt(&key33(), "He l!p"), "hiat");
        let c = hill_encrypt(&key33(), "abc");
        assert_eq!(hill_decrypt(&key33(), &c).unwrap(), "abcx");
        assert!(hill_decrypt(&key33(), "abc").is_err());
    }

    #[test]
    fn non_invertible_key_rejected_at_construction() {
        assert!(matches!(
            HillKey::new(2, &[2, 0, 0, 1]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            HillKey::new(2, &[13, 0, 0, 1]),
            Err(Error::Degenerate(_))
        ));
        assert!(HillKey::new(2, &[1, 2, 3]).is_err());
    }

    #[test]
    fn attack_worked_example() {
        let k = hill_kpa_attack(2, &[("help".into(), "hiat".into())]).unwrap();
        assert_eq!(k, key33());
        let id = HillKey::new(2, &[1, 0, 0, 1]).unwrap();
        let pairs = vec![("help".to_string(), hill_encrypt(&id, "help"))];
        assert_eq!(hill_kpa_attack(2, &pairs).unwrap(), id);
    }

    #[test]
    fn attack_needs_invertible_plaintext() {
        // "aa" "bb" columns: [[0,1],[0,1]] is singular
        let c = hill_encrypt(&key33(), "aabb");
        assert!(matches!(
            hill_kpa_attack(2, &[("aabb".into(), c)]),
            Err(Error::AttackInconclusive(_))
        ));
        assert!(matches!(
            hill_kpa_attack(2, &[("ab".into(), "cd".into())]),
            Err(Error::AttackInconclusive(_))
        ));
    }

    #[test]
    fn attack_skips_singular_prefix() {
        let text = "aabbhelp";
        let c = hill_encrypt(&key33(), text);
        assert_eq!(hill_kpa_attack(2, &[(text.into(), c)]).unwrap(), key33());
    }

    #[test]
    fn attack_detects_inconsistent_pairs() {
        let pairs = vec![
            ("help".to_string(), "hiat".to_string()),
            ("zz".to_string(), "aa".to_string()),
        ];
        assert!(matches!(
            hill_kpa_attack(2, &pairs),
            Err(Error::AttackInconclusive(_))
        ));
    }

    #[test]
    fn pairs_file_roundtrip() {
        let pairs = vec![("help".to_string(), "hiat".to_string())];
        let text = write_pairs(&pairs);
        assert_eq!(text, "P=help C=hiat\n");
        assert_eq!(parse_pairs(&text, 2).unwrap(), pairs);
        assert!(parse_pairs("P=help C=hia\n", 2).is_err());
        assert!(parse_pairs("P=Help C=hiat\n", 2).is_err());
        assert!(parse_pairs("C=help P=hiat\n", 2).is_err());
        assert!(parse_pairs("P=abc C=def\n", 2).is_err());
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut pick = vec![0, 1];
        let mut all = vec![pick.clone()];
        while next_combination(&mut pick, 4) {
            all.push(pick.clone());
        }
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    proptest! {
        #[test]
        fn hill_roundtrip(entries in proptest::collection::vec(0i64..26, 9), text in "[a-z]{0,40}") {
            if let Ok(k) = HillKey::new(3, &entries) {
                let c = hill_encrypt(&k, &text);
                let p = hill_decrypt(&k, &c).unwrap();
                prop_assert!(p.starts_with(&text));
                prop_assert_eq!(k.mat.mul(&k.inv).a, vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
            }
        }
    }
}
