//! Binary64 inversion of the Hilbert matrix compared against the exact
//! integer inverse.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::specialmat::hilbert_inverse_int;

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityRow {
    pub n: usize,
    /// Largest `|float_inv - exact_inv|` entry, measured exactly.
    pub max_abs_err: f64,
    /// Largest `|H * float_inv - I|` entry, evaluated in binary64.
    pub residual: f64,
    /// Elimination hit an all-zero pivot column; both measures are infinite.
    pub breakdown: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
}

/// Gauss-Jordan with partial pivoting in binary64 on the rounded `H_n`.
/// Ties between equal-magnitude pivots go to the first row.
pub fn float_invert_hilbert(n: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidInput("order must be positive".into()));
    }
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).collect())
        .collect();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for col in 0..n {
        let mut p = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[p][col].abs() {
                p = r;
            }
        }
        if a[p][col] == 0.0 {
            return Err(Error::Singular {
                det: Rational::zero(),
            });
        }
        a.swap(col, p);
        inv.swap(col, p);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    Ok(inv)
}

pub fn stability_row(n: usize) -> StabilityRow {
    let float_inv = match float_invert_hilbert(n) {
        Ok(m) => m,
        Err(_) => {
            return StabilityRow {
                n,
                max_abs_err: f64::INFINITY,
                residual: f64::INFINITY,
                breakdown: true,
            }
        }
    };
    let exact = hilbert_inverse_int(n);
    let mut max_abs_err = 0.0f64;
    for (&f, e) in float_inv.iter().flatten().zip(&exact) {
        let err = match Rational::from_f64(f) {
            Some(f) => (f - Rational::integer(e.clone())).abs().to_f64(),
            None => f64::INFINITY,
        };
        max_abs_err = max_abs_err.max(err);
    }
    let mut residual = 0.0f64;
    for i in 0..n {
        let mut row = vec![0.0f64; n];
        for (k, inv_row) in float_inv.iter().enumerate() {
            let h = 1.0 / (i + k + 1) as f64;
            for (acc, v) in row.iter_mut().zip(inv_row) {
                *acc += h * v;
            }
        }
        for (j, s) in row.into_iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((s - target).abs());
        }
    }
    StabilityRow {
        n,
        max_abs_err,
        residual,
        breakdown: false,
    }
}

pub fn stability_report(n_max: usize) -> Result<StabilityReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be positive".into()));
    }
    Ok(StabilityReport {
        rows: (1..=n_max).map(stability_row).collect(),
    })
}

impl StabilityReport {
    pub fn row(&self, n: usize) -> Option<&StabilityRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// `max_abs_err(b) / max_abs_err(a)`.
    pub fn growth(&self, a: usize, b: usize) -> Option<f64> {
        Some(self.row(b)?.max_abs_err / self.row(a)?.max_abs_err)
    }

    /// Steps `n -> n+1` where the error did not shrink.
    pub fn nondecreasing_steps(&self) -> usize {
        self.rows
            .windows(2)
            .filter(|w| w[1].max_abs_err >= w[0].max_abs_err)
            .count()
    }

    pub fn summary(&self) -> String {
        let first = self.rows.iter().find(|r| r.max_abs_err > 0.0);
        let last = self.rows.last().expect("nonempty report");
        let mut s = format!(
            "error grew on {} of {} steps",
            self.nondecreasing_steps(),
            self.rows.len().saturating_sub(1)
        );
        if let Some(first) = first.filter(|f| f.n < last.n) {
            let _ = write!(
                s,
                "; max_abs_err(n={})/max_abs_err(n={}) = {:.3e}",
                last.n,
                first.n,
                last.max_abs_err / first.max_abs_err
            );
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{:>4}  {:>14}  {:>14}\n", "n", "max_abs_err", "residual");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4}  {:>14.6e}  {:>14.6e}{}",
                r.n,
                r.max_abs_err,
                r.residual,
                if r.breakdown { "  breakdown" } else { "" }
            );
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,max_abs_err,residual\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{:e},{:e}", r.n, r.max_abs_err, r.residual);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one() {
        assert_eq!(float_invert_hilbert(1).unwrap(), vec![vec![1.0]]);
        let r = stability_report(1).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].max_abs_err, 0.0);
    }

    #[test]
    fn order_three_is_accurate() {
        let inv = float_invert_hilbert(3).unwrap();
        let exact = [
            [9.0, -36.0, 30.0],
            [-36.0, 192.0, -180.0],
            [30.0, -180.0, 180.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((inv[i][j] - exact[i][j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn order_thirteen_loses_everything() {
        assert!(stability_row(13).max_abs_err >= 1.0);
    }

    #[test]
    fn small_orders_stay_accurate() {
        let r = stability_report(4).unwrap();
        assert!(r.rows.iter().all(|row| row.max_abs_err < 1e-8));
    }

    #[test]
    fn csv_header() {
        let csv = stability_report(2).unwrap().to_csv();
        assert!(csv.starts_with("n,max_abs_err,residual\n1,0e0,0e0\n2,"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(stability_report(0).is_err());
        assert!(float_invert_hilbert(0).is_err());
    }
}
