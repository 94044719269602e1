//! Hilbert, Cauchy, Vandermonde and combinatorial matrices with their
//! closed-form determinants and inverses.
//!
//! All formulas use 1-based indices `i, j` as written in the math; storage is
//! 0-based. Conventions:
//!
//! * Hilbert: `a_ij = 1/(i+j-1)`.
//! * Cauchy: `a_ij = 1/(x_i + y_j)`; Hilbert is `x_i = i, y_j = j-1`.
//! * Vandermonde: `a_ij = x_j^i` with `i = 1..n` (not `0..n-1`), so
//!   `det = prod x_j * prod_{i<j} (x_j - x_i)`.
//! * Combinatorial: `a_ij = y + delta_ij * x`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmat::Matrix;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialSpec {
    Hilbert { n: usize },
    Cauchy { x: Vec<Rational>, y: Vec<Rational> },
    Vandermonde { x: Vec<Rational> },
    Combinatorial { n: usize, x: Rational, y: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Hilbert,
    Cauchy,
    Vandermonde,
    Combinatorial,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hilbert => "hilbert",
            Family::Cauchy => "cauchy",
            Family::Vandermonde => "vandermonde",
            Family::Combinatorial => "comb",
        })
    }
}

impl SpecialSpec {
    pub fn family(&self) -> Family {
        match self {
            SpecialSpec::Hilbert { .. } => Family::Hilbert,
            SpecialSpec::Cauchy { .. } => Family::Cauchy,
            SpecialSpec::Vandermonde { .. } => Family::Vandermonde,
            SpecialSpec::Combinatorial { .. } => Family::Combinatorial,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            SpecialSpec::Hilbert { n } | SpecialSpec::Combinatorial { n, .. } => *n,
            SpecialSpec::Cauchy { x, .. } | SpecialSpec::Vandermonde { x } => x.len(),
        }
    }

    /// Shape checks shared by every operation, plus the Cauchy pole check.
    fn validate_entries(&self) -> Result<()> {
        if self.order() == 0 {
            return Err(Error::Degenerate(format!(
                "{} matrix of order 0",
                self.family()
            )));
        }
        if let SpecialSpec::Cauchy { x, y } = self {
            if x.len() != y.len() {
                return Err(Error::Dimension(format!(
                    "cauchy parameters have lengths {} and {}",
                    x.len(),
                    y.len()
                )));
            }
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    if (xi + yj).is_zero() {
                        return Err(Error::CauchyPole { i: i + 1, j: j + 1 });
                    }
                }
            }
        }
        Ok(())
    }

    /// Parameter conditions under which the closed-form inverse exists.
    fn validate_invertible(&self) -> Result<()> {
        self.validate_entries()?;
        match self {
            SpecialSpec::Hilbert { .. } => Ok(()),
            SpecialSpec::Cauchy { x, y } => {
                require_distinct(x, "cauchy x")?;
                require_distinct(y, "cauchy y")
            }
            SpecialSpec::Vandermonde { x } => {
                require_distinct(x, "vandermonde x")?;
                if let Some(k) = x.iter().position(Rational::is_zero) {
                    return Err(Error::Degenerate(format!(
                        "vandermonde x_{} is zero",
                        k + 1
                    )));
                }
                Ok(())
            }
            SpecialSpec::Combinatorial { n, x, y } => {
                if x.is_zero() {
                    return Err(Error::Degenerate("combinatorial x is zero".into()));
                }
                if (x + &(y * &Rational::integer(*n as i64))).is_zero() {
                    return Err(Error::Degenerate("combinatorial x + n*y is zero".into()));
                }
                Ok(())
            }
        }
    }
}

fn require_distinct(v: &[Rational], what: &str) -> Result<()> {
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return Err(Error::Degenerate(format!(
                    "{what} entries {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn int(v: usize) -> Rational {
    Rational::integer(v as i64)
}

fn delta(i: usize, j: usize) -> bool {
    i == j
}

pub fn hilbert(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        Rational::new(1, (i + j + 1) as i64).expect("positive denominator")
    })
}

/// Explicit matrix for `spec`.
pub fn build(spec: &SpecialSpec) -> Result<Matrix> {
    spec.validate_entries()?;
    let n = spec.order();
    let m = match spec {
        SpecialSpec::Hilbert { n } => hilbert(*n),
        SpecialSpec::Cauchy { x, y } => {
            Matrix::from_fn(n, n, |i, j| (&x[i] + &y[j]).recip().expect("pole checked"))
        }
        SpecialSpec::Vandermonde { x } => Matrix::from_fn(n, n, |i, j| x[j].pow(i as u32 + 1)),
        SpecialSpec::Combinatorial { x, y, .. } => {
            Matrix::from_fn(n, n, |i, j| if delta(i, j) { y + x } else { y.clone() })
        }
    };
    Ok(m)
}

/// Closed-form determinant.
pub fn closed_det(spec: &SpecialSpec) -> Result<Rational> {
    spec.validate_entries()?;
    let det = match spec {
        SpecialSpec::Hilbert { n } => hilbert_det(*n),
        SpecialSpec::Cauchy { x, y } => {
            let n = x.len();
            let mut num = Rational::one();
            for i in 0..n {
                for j in i + 1..n {
                    num = num * (&x[j] - &x[i]) * (&y[j] - &y[i]);
                }
            }
            let mut den = Rational::one();
            for xi in x {
                for yj in y {
                    den = den * (xi + yj);
                }
            }
            num.checked_div(&den)?
        }
        SpecialSpec::Vandermonde { x } => {
            let n = x.len();
            let mut det: Rational = x.iter().fold(Rational::one(), |acc, v| acc * v);
            for i in 0..n {
                for j in i + 1..n {
                    det = det * (&x[j] - &x[i]);
                }
            }
            det
        }
        SpecialSpec::Combinatorial { n, x, y } => x.pow(*n as u32 - 1) * (x + &(y * &int(*n))),
    };
    Ok(det)
}

/// `prod_{i<j} (i-j)^2 / prod_{i,j} (i+j-1)`.
fn hilbert_det(n: usize) -> Rational {
    let mut num = BigInt::one();
    for i in 1..=n {
        for j in i + 1..=n {
            let d = BigInt::from(j - i);
            num *= &d * &d;
        }
    }
    let mut den = BigInt::one();
    for i in 1..=n {
        for j in 1..=n {
            den *= BigInt::from(i + j - 1);
        }
    }
    Rational::new(num, den).expect("positive denominator")
}

/// Closed-form inverse.
pub fn closed_inv(spec: &SpecialSpec) -> Result<Matrix> {
    spec.validate_invertible()?;
    let n = spec.order();
    let m = match spec {
        SpecialSpec::Hilbert { n } => {
            let ints = hilbert_inverse_int(*n);
            Matrix::new(*n, *n, ints.into_iter().map(Rational::integer).collect())?
        }
        SpecialSpec::Cauchy { x, y } => cauchy_inv(x, y),
        SpecialSpec::Vandermonde { x } => vandermonde_inv(x),
        SpecialSpec::Combinatorial { n, x, y } => {
            let s = x + &(y * &int(*n));
            let den = x * &s;
            let off = (-y).checked_div(&den)?;
            let diag = (&s - y).checked_div(&den)?;
            Matrix::from_fn(*n, *n, |i, j| {
                if delta(i, j) {
                    diag.clone()
                } else {
                    off.clone()
                }
            })
        }
    };
    debug_assert_eq!(m.rows(), n);
    Ok(m)
}

/// Entries of the inverse Hilbert matrix, row-major, as integers.
///
/// Evaluates
/// `b_ij = A_i A_j / ((i+j-1) B_i B_j)` with `A_i = prod_{k=0}^{n-1} (i+k)`
/// and `B_i = prod_{k != i} (i-k)`. Both products are advanced across `i` by
/// one multiplication and one exact division each:
/// `A_{i+1} = A_i (i+n) / i` and `B_{i+1} = B_i i / (i-n)`.
pub fn hilbert_inverse_int(n: usize) -> Vec<BigInt> {
    assert!(n >= 1, "hilbert order must be positive");
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    // A_1 = n!, B_1 = (-1)^(n-1) (n-1)!
    let mut ai: BigInt = (1..=n).map(BigInt::from).product();
    let mut bi: BigInt = (2..=n).map(|k| BigInt::from(1i64 - k as i64)).product();
    for i in 1..=n {
        a.push(ai.clone());
        b.push(bi.clone());
        if i < n {
            ai = ai * BigInt::from(i + n) / BigInt::from(i);
            bi = bi * BigInt::from(i) / BigInt::from(i as i64 - n as i64);
        }
    }

    let mut out = vec![BigInt::zero(); n * n];
    for i in 1..=n {
        for j in i..=n {
            let num = &a[i - 1] * &a[j - 1];
            let den = BigInt::from(i + j - 1) * &b[i - 1] * &b[j - 1];
            let (q, r) = num.div_rem(&den);
            assert!(
                r.is_zero(),
                "hilbert inverse entry ({i},{j}) is not integral"
            );
            out[(j - 1) * n + (i - 1)] = q.clone();
            out[(i - 1) * n + (j - 1)] = q;
        }
    }
    out
}

/// `b_ij = prod_k (x_j + y_k)(x_k + y_i)
///        / ((x_j + y_i) prod_{k!=j} (x_j - x_k) prod_{k!=i} (y_i - y_k))`
fn cauchy_inv(x: &[Rational], y: &[Rational]) -> Matrix {
    let n = x.len();
    let px: Vec<Rational> = (0..n)
        .map(|j| y.iter().fold(Rational::one(), |acc, yk| acc * (&x[j] + yk)))
        .collect();
    let py: Vec<Rational> = (0..n)
        .map(|i| x.iter().fold(Rational::one(), |acc, xk| acc * (xk + &y[i])))
        .collect();
    let dx: Vec<Rational> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&k| k != j)
                .fold(Rational::one(), |acc, k| acc * (&x[j] - &x[k]))
        })
        .collect();
    let dy: Vec<Rational> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| k != i)
                .fold(Rational::one(), |acc, k| acc * (&y[i] - &y[k]))
        })
        .collect();
    Matrix::from_fn(n, n, |i, j| {
        let num = &px[j] * &py[i];
        let den = (&x[j] + &y[i]) * &dx[j] * &dy[i];
        num.checked_div(&den).expect("validated nondegenerate")
    })
}

/// Row `i` of the inverse holds the coefficients of
/// `prod_{k != i} (x_k - t)`, lowest power first, divided by
/// `x_i prod_{k != i} (x_k - x_i)`.
fn vandermonde_inv(x: &[Rational]) -> Matrix {
    let n = x.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut coeffs = vec![Rational::one()];
        let mut den = x[i].clone();
        for (k, xk) in x.iter().enumerate() {
            if k == i {
                continue;
            }
            // multiply by (x_k - t)
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (p, c) in coeffs.iter().enumerate() {
                next[p] += &(c * xk);
                next[p + 1] = &next[p + 1] - c;
            }
            coeffs = next;
            den = den * (xk - &x[i]);
        }
        let inv_den = den.recip().expect("validated nondegenerate");
        rows.push(coeffs.iter().map(|c| c * &inv_den).collect());
    }
    Matrix::from_rows(rows).expect("square by construction")
}
