use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn hilbx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbx"))
        .args(args)
        .output()
        .expect("spawn hilbx")
}

fn ok(args: &[&str]) -> String {
    let out = hilbx(args);
    assert!(
        out.status.success(),
        "hilbx {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Domain failures (exit 1) must produce exactly one diagnostic line.
fn fails(args: &[&str], code: i32) -> String {
    let out = hilbx(args);
    assert_eq!(out.status.code(), Some(code), "hilbx {args:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    if code == 1 {
        assert_eq!(
            err.lines().count(),
            1,
            "one-line diagnostic expected: {err:?}"
        );
    }
    err
}

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

struct Work(TempDir);

impl Work {
    fn new() -> Self {
        Work(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_str().unwrap().to_string()
    }

    fn write(&self, name: &str, bytes: &[u8]) -> String {
        let p = self.path(name);
        fs::write(&p, bytes).unwrap();
        p
    }
}

fn read(p: impl AsRef<Path>) -> Vec<u8> {
    fs::read(p).unwrap()
}

#[test]
fn keygen_encrypt_decrypt_roundtrip() {
    let w = Work::new();
    let data: Vec<u8> = (0..=255u8).cycle().take(1000).collect();
    let input = w.write("a.bin", &data);
    let key = w.path("k.key");
    let ct = w.path("a.ct");
    let back = w.path("a.out");
    let printed = ok(&["keygen", "--m", "16", "--out", &key]);
    assert!(printed.is_empty());
    assert!(ok(&["encrypt", "--key", &key, "--in", &input, "--out", &ct]).is_empty());
    assert!(ok(&["decrypt", "--key", &key, "--in", &ct, "--out", &back]).is_empty());
    assert_eq!(read(&back), data);
    assert!(String::from_utf8(read(&ct))
        .unwrap()
        .starts_with("HILBXCT1\nm=16 t=63\n"));
}

#[test]
fn keygen_with_explicit_order_and_seed() {
    let w = Work::new();
    let (a, b) = (w.path("a.key"), w.path("b.key"));
    ok(&[
        "keygen", "--m", "3", "--n", "11", "--seed", "5", "--out", &a,
    ]);
    ok(&[
        "keygen", "--m", "3", "--n", "11", "--seed", "5", "--out", &b,
    ]);
    assert_eq!(read(&a), read(&b));
    assert!(String::from_utf8(read(&a))
        .unwrap()
        .starts_with("HILBXKEY1\nn=11\nm=3\n"));
    let err = fails(&["keygen", "--m", "3", "--n", "12", "--out", &a], 1);
    assert!(err.contains("not prime"), "{err}");
}

#[test]
fn golden_ciphertext_decrypts() {
    let w = Work::new();
    let out = w.path("plain.out");
    ok(&[
        "decrypt",
        "--key",
        &golden("session.key"),
        "--in",
        &golden("plain.ct"),
        "--out",
        &out,
    ]);
    assert_eq!(read(&out), read(golden("plain.txt")));
}

#[test]
fn wrong_key_is_integrity_failure() {
    let w = Work::new();
    let other = w.path("other.key");
    ok(&[
        "keygen", "--m", "16", "--n", "41", "--seed", "8", "--out", &other,
    ]);
    let out = w.path("x");
    let err = fails(
        &[
            "decrypt",
            "--key",
            &other,
            "--in",
            &golden("plain.ct"),
            "--out",
            &out,
        ],
        1,
    );
    assert!(err.starts_with("error: integrity check failed"), "{err}");
    assert!(!Path::new(&out).exists());

    let narrow = w.path("narrow.key");
    ok(&["keygen", "--m", "8", "--seed", "8", "--out", &narrow]);
    let err = fails(
        &[
            "decrypt",
            "--key",
            &narrow,
            "--in",
            &golden("plain.ct"),
            "--out",
            &out,
        ],
        1,
    );
    assert!(err.contains("integrity"), "{err}");
}

#[test]
fn same_order_key_only_garbles_first_block() {
    // Decryption depends on n alone; a foreign pad and IV only disturb the
    // first block through the chain seed.
    let w = Work::new();
    let other = w.path("other.key");
    ok(&["keygen", "--m", "16", "--seed", "8", "--out", &other]);
    let out = w.path("x");
    ok(&[
        "decrypt",
        "--key",
        &other,
        "--in",
        &golden("plain.ct"),
        "--out",
        &out,
    ]);
    let (got, want) = (read(&out), read(golden("plain.txt")));
    assert_eq!(got.len(), want.len());
    assert_ne!(got[..16], want[..16]);
    assert_eq!(got[16..], want[16..]);
}

#[test]
fn malformed_files_are_reported() {
    let w = Work::new();
    let bad_key = w.write("bad.key", b"HILBXKEY1\nn=7\n");
    let input = w.write("in", b"hi");
    let out = w.path("out");
    let err = fails(
        &["encrypt", "--key", &bad_key, "--in", &input, "--out", &out],
        1,
    );
    assert!(err.contains("malformed key file"), "{err}");

    let bad_ct = w.write("bad.ct", b"HILBXCT1\nm=16 t=1\n1/2 x\n");
    let err = fails(
        &[
            "decrypt",
            "--key",
            &golden("session.key"),
            "--in",
            &bad_ct,
            "--out",
            &out,
        ],
        1,
    );
    assert!(err.contains("malformed ciphertext file"), "{err}");

    let err = fails(
        &[
            "encrypt",
            "--key",
            &w.path("missing.key"),
            "--in",
            &input,
            "--out",
            &out,
        ],
        1,
    );
    assert!(err.contains("cannot read key file"), "{err}");
}

#[test]
fn matrix_queries() {
    assert_eq!(
        ok(&["matrix", "inv", "--family", "hilbert", "--n", "2"]),
        "[[4,-6],[-6,12]]\n"
    );
    assert_eq!(
        ok(&["matrix", "det", "--family", "hilbert", "--n", "4"]),
        "1/6048000\n"
    );
    assert_eq!(
        ok(&["matrix", "build", "--family", "vandermonde", "--x", "2,1/2"]),
        "[[2,1/2],[4,1/4]]\n"
    );
    assert_eq!(
        ok(&["matrix", "det", "--family", "cauchy", "--x", "1,2", "--y", "0,1", "--n", "2"]),
        "1/12\n"
    );
    assert_eq!(
        ok(&["matrix", "inv", "--family", "comb", "--n", "2", "--x", "1", "--y", "1"]),
        "[[2/3,-1/3],[-1/3,2/3]]\n"
    );
    let err = fails(
        &[
            "matrix", "det", "--family", "cauchy", "--x", "1,-1", "--y", "1,2",
        ],
        1,
    );
    assert!(err.contains("x_i + y_j = 0"), "{err}");
    fails(
        &[
            "matrix", "det", "--family", "cauchy", "--x", "1,2", "--y", "0,1", "--n", "3",
        ],
        2,
    );
    fails(
        &[
            "matrix", "det", "--family", "comb", "--n", "2", "--x", "1,2", "--y", "1",
        ],
        2,
    );
    fails(&["matrix", "det", "--family", "circulant", "--n", "2"], 2);
}

#[test]
fn hill_attack_from_golden_pairs() {
    assert_eq!(
        ok(&[
            "attack",
            "hill",
            "--m",
            "2",
            "--pairs",
            &golden("hill.pairs")
        ]),
        "[[3,3],[2,5]]\n"
    );
    let w = Work::new();
    let singular = w.write("s.pairs", b"P=aaaa C=aaaa\n");
    let err = fails(&["attack", "hill", "--m", "2", "--pairs", &singular], 1);
    assert!(err.contains("inconclusive"), "{err}");
    let broken = w.write("b.pairs", b"P=help\n");
    fails(&["attack", "hill", "--m", "2", "--pairs", &broken], 1);
}

#[test]
fn stability_outputs() {
    let csv = ok(&["stability", "--max-n", "13", "--csv"]);
    assert!(csv.starts_with("n,max_abs_err,residual\n1,"));
    assert_eq!(csv.lines().count(), 14);
    let table = ok(&["stability", "--max-n", "5"]);
    assert_eq!(table.lines().count(), 7);
    assert!(table.lines().next().unwrap().contains("max_abs_err"));
    fails(&["stability", "--max-n", "0"], 1);
}

#[test]
fn envelope_roundtrip() {
    let w = Work::new();
    let (public, private) = (w.path("r.pub"), w.path("r.priv"));
    let key = w.path("s.key");
    let env = w.path("s.env");
    let back = w.path("back.key");
    ok(&["keygen", "--m", "16", "--out", &key]);
    ok(&[
        "envelope", "keygen", "--bits", "96", "--pub", &public, "--priv", &private,
    ]);
    assert!(ok(&["envelope", "wrap", "--pub", &public, "--key", &key, "--out", &env]).is_empty());
    assert!(
        ok(&["envelope", "unwrap", "--priv", &private, "--in", &env, "--out", &back]).is_empty()
    );
    assert_eq!(read(&key), read(&back));

    ok(&[
        "envelope",
        "unwrap",
        "--priv",
        &golden("toy.priv"),
        "--in",
        &golden("session.env"),
        "--out",
        &back,
    ]);
    assert_eq!(read(&back), read(golden("session.key")));

    let err = fails(
        &[
            "envelope", "keygen", "--bits", "8", "--pub", &public, "--priv", &private,
        ],
        1,
    );
    assert!(err.contains("bits"), "{err}");
}

#[test]
fn ecb_vs_cbc_demo() {
    let out = ok(&[
        "demo",
        "ecb-vs-cbc",
        "--key",
        &golden("session.key"),
        "--block",
        "00112233445566778899aabbccddeeff",
    ]);
    assert_eq!(
        out,
        "single-block: 28 repeated pairs among 9 blocks\ncbc: 0 repeated pairs among 9 blocks\n"
    );
    fails(
        &[
            "demo",
            "ecb-vs-cbc",
            "--key",
            &golden("session.key"),
            "--block",
            "0011",
        ],
        2,
    );
    fails(
        &[
            "demo",
            "ecb-vs-cbc",
            "--key",
            &golden("session.key"),
            "--block",
            "zz",
        ],
        2,
    );
}

#[test]
fn secrets_never_reach_stdout() {
    let w = Work::new();
    let key_text = String::from_utf8(read(golden("session.key"))).unwrap();
    let secrets: Vec<&str> = key_text
        .lines()
        .skip(1)
        .map(|l| l.split_once('=').unwrap().1)
        .collect();
    let ct = w.path("c");
    let input = w.write("p", b"secret plaintext");
    let outs = [
        hilbx(&[
            "encrypt",
            "--key",
            &golden("session.key"),
            "--in",
            &input,
            "--out",
            &ct,
        ]),
        hilbx(&[
            "decrypt",
            "--key",
            &golden("session.key"),
            "--in",
            &ct,
            "--out",
            &w.path("d"),
        ]),
        hilbx(&[
            "decrypt",
            "--key",
            &golden("session.key"),
            "--in",
            &golden("plain.ct"),
            "--out",
            &w.path("e"),
        ]),
    ];
    for out in outs {
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        let err = String::from_utf8(out.stderr).unwrap();
        for s in secrets.iter().filter(|s| s.len() > 2) {
            assert!(!err.contains(s));
        }
    }
}

#[test]
fn usage_errors() {
    fails(&["encrypt", "--key", "k"], 2);
    fails(&["frobnicate"], 2);
    fails(&["stability", "--max-n", "3", "--verbose"], 2);
    fails(&["keygen", "--m", "x", "--out", "k"], 2);
    let out = hilbx(&["--version"]);
    assert!(out.status.success());
}
