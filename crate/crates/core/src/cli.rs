//! `hilbx` command-line front end.
//!
//! Exit status: 0 on success, 1 on domain, format, integrity or I/O errors,
//! 2 on usage errors. Diagnostics go to the error stream as one line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cipher::{self, SessionKey};
use crate::classical::{ecb_repeat_detector, hill_kpa_attack, parse_pairs};
use crate::envelope;
use crate::error::Error;
use crate::rational::Rational;
use crate::specialmat::{self, SpecialSpec};
use crate::stability;

#[derive(Parser, Debug)]
#[command(
    name = "hilbx",
    version,
    about = "Hilbert-matrix CBC cipher and exact special-matrix toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a session key file.
    Keygen {
        #[arg(long)]
        m: usize,
        /// Explicit prime order; defaults to the smallest prime >= 2m+1.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// CBC-encrypt a file.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a special matrix or evaluate its closed-form determinant/inverse.
    Matrix {
        op: MatrixOp,
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated rationals (`a` or `a/b`).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
    /// Known-plaintext attacks.
    Attack {
        #[command(subcommand)]
        kind: AttackKind,
    },
    /// Float vs exact inversion error table for H_1..H_max.
    Stability {
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Toy public-key envelope for session keys.
    Envelope {
        #[command(subcommand)]
        op: EnvelopeOp,
    },
    /// Demonstrations.
    Demo {
        #[command(subcommand)]
        kind: DemoKind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MatrixOp {
    Det,
    Inv,
    Build,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Hilbert,
    Cauchy,
    Vandermonde,
    Comb,
}

#[derive(Subcommand, Debug)]
enum AttackKind {
    /// Recover a Hill key from `P=... C=...` pairs.
    Hill {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        pairs: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum EnvelopeOp {
    Keygen {
        #[arg(long, default_value_t = 512)]
        bits: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "priv")]
        private: PathBuf,
    },
    Wrap {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    Unwrap {
        #[arg(long = "priv")]
        private: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum DemoKind {
    /// Encrypt eight copies of one block in single-block and CBC mode and
    /// report repeated cipher blocks.
    EcbVsCbc {
        #[arg(long)]
        key: PathBuf,
        /// One plaintext block as hex (exactly m bytes).
        #[arg(long)]
        block: String,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path, what: &str) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Io(format!("cannot read {what} `{}`: {e}", path.display())))
}

fn read_text(path: &Path, what: &str) -> CliResult<String> {
    String::from_utf8(read(path, what)?)
        .map_err(|_| Failure::Io(format!("{what} `{}` is not UTF-8", path.display())))
}

fn write(path: &Path, what: &str, bytes: impl AsRef<[u8]>) -> CliResult<()> {
    fs::write(path, bytes)
        .map_err(|e| Failure::Io(format!("cannot write {what} `{}`: {e}", path.display())))
}

fn load_key(path: &Path) -> CliResult<SessionKey> {
    Ok(cipher::parse_key(&read_text(path, "key file")?)?)
}

fn rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn parse_csv(s: &str) -> CliResult<Vec<Rational>> {
    s.split(',')
        .map(|t| {
            t.parse::<Rational>()
                .map_err(|_| Failure::Usage(format!("invalid rational `{t}`")))
        })
        .collect()
}

fn scalar(s: &Option<String>, name: &str) -> CliResult<Rational> {
    let v = parse_csv(
        s.as_deref()
            .ok_or_else(|| Failure::Usage(format!("--{name} is required")))?,
    )?;
    match v.as_slice() {
        [x] => Ok(x.clone()),
        _ => Err(Failure::Usage(format!(
            "--{name} takes a single value for comb"
        ))),
    }
}

fn spec_from_args(
    family: FamilyArg,
    n: Option<usize>,
    x: &Option<String>,
    y: &Option<String>,
) -> CliResult<SpecialSpec> {
    let need_n = || n.ok_or_else(|| Failure::Usage("--n is required for this family".into()));
    let need = |v: &Option<String>, name: &str| -> CliResult<Vec<Rational>> {
        parse_csv(
            v.as_deref()
                .ok_or_else(|| Failure::Usage(format!("--{name} is required")))?,
        )
    };
    let spec = match family {
        FamilyArg::Hilbert => SpecialSpec::Hilbert { n: need_n()? },
        FamilyArg::Cauchy => SpecialSpec::Cauchy {
            x: need(x, "x")?,
            y: need(y, "y")?,
        },
        FamilyArg::Vandermonde => SpecialSpec::Vandermonde { x: need(x, "x")? },
        FamilyArg::Comb => SpecialSpec::Combinatorial {
            n: need_n()?,
            x: scalar(x, "x")?,
            y: scalar(y, "y")?,
        },
    };
    if let (Some(n), FamilyArg::Cauchy | FamilyArg::Vandermonde) = (n, family) {
        if n != spec.order() {
            return Err(Failure::Usage(format!(
                "--n {n} disagrees with {} parameters",
                spec.order()
            )));
        }
    }
    Ok(spec)
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let emit = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write output: {e}")))
    };
    match cli.command {
        Command::Keygen {
            m,
            n,
            seed,
            out: path,
        } => {
            let key = cipher::keygen(m, n, &mut rng(seed))?;
            write(&path, "key file", cipher::write_key(&key))
        }
        Command::Encrypt {
            key,
            input,
            out: path,
        } => {
            let key = load_key(&key)?;
            let data = read(&input, "input")?;
            let msg = cipher::cbc_encrypt(&key, &data)?;
            write(&path, "ciphertext", cipher::write_ciphertext(&msg))
        }
        Command::Decrypt {
            key,
            input,
            out: path,
        } => {
            let key = load_key(&key)?;
            let msg = cipher::parse_ciphertext(&read_text(&input, "ciphertext")?)?;
            let data = cipher::cbc_decrypt(&key, &msg)?;
            write(&path, "output", data)
        }
        Command::Matrix {
            op,
            family,
            n,
            x,
            y,
        } => {
            let spec = spec_from_args(family, n, &x, &y)?;
            let text = match op {
                MatrixOp::Build => specialmat::build(&spec)?.to_string(),
                MatrixOp::Det => specialmat::closed_det(&spec)?.to_compact_string(),
                MatrixOp::Inv => specialmat::closed_inv(&spec)?.to_string(),
            };
            emit(out, &format!("{text}\n"))
        }
        Command::Attack {
            kind: AttackKind::Hill { m, pairs },
        } => {
            if m == 0 {
                return Err(Failure::Usage("--m must be positive".into()));
            }
            let pairs = parse_pairs(&read_text(&pairs, "pairs file")?, m)?;
            let key = hill_kpa_attack(m, &pairs)?;
            emit(out, &format!("{key}\n"))
        }
        Command::Stability { max_n, csv } => {
            let report = stability::stability_report(max_n)?;
            emit(
                out,
                &if csv {
                    report.to_csv()
                } else {
                    report.to_table()
                },
            )
        }
        Command::Envelope { op } => match op {
            EnvelopeOp::Keygen {
                bits,
                seed,
                public,
                private,
            } => {
                let keys = envelope::toy_keygen(bits, &mut rng(seed))?;
                write(&public, "public key", envelope::write_public(keys.public()))?;
                write(&private, "private key", envelope::write_private(&keys))
            }
            EnvelopeOp::Wrap {
                public,
                key,
                out: path,
            } => {
                let public = envelope::parse_public(&read_text(&public, "public key")?)?;
                let key = load_key(&key)?;
                let chunks = envelope::wrap_session(&public, &key)?;
                write(&path, "envelope", envelope::write_envelope(&chunks))
            }
            EnvelopeOp::Unwrap {
                private,
                input,
                out: path,
            } => {
                let keys = envelope::parse_private(&read_text(&private, "private key")?)?;
                let chunks = envelope::parse_envelope(&read_text(&input, "envelope")?)?;
                let key = envelope::unwrap_session(&keys, &chunks)?;
                write(&path, "key file", cipher::write_key(&key))
            }
        },
        Command::Demo {
            kind: DemoKind::EcbVsCbc { key, block },
        } => {
            let key = load_key(&key)?;
            let block = hex::decode(&block)
                .map_err(|e| Failure::Usage(format!("--block is not hex: {e}")))?;
            if block.len() != key.m() {
                return Err(Failure::Usage(format!(
                    "--block has {} bytes, key block size is {}",
                    block.len(),
                    key.m()
                )));
            }
            let data = block.repeat(8);
            let ecb = cipher::ecb_encrypt(&key, &data)?;
            let cbc = cipher::cbc_encrypt(&key, &data)?;
            let report = format!(
                "single-block: {} repeated pairs among {} blocks\ncbc: {} repeated pairs among {} blocks\n",
                ecb_repeat_detector(ecb.blocks()).len(),
                ecb.blocks().len(),
                ecb_repeat_detector(cbc.blocks()).len(),
                cbc.blocks().len()
            );
            emit(out, &report)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                2
            } else {
                let _ = out.write_all(rendered.as_bytes());
                0
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
