//! Direct solvers for the two linear systems in the model: a tiny dense
//! system (stack equilibrium) and a tridiagonal one (finite-difference beam).

use crate::error::{Error, Result};

/// Solves `a * x = b` by Gaussian elimination with partial pivoting.
///
/// Returns [`Error::SingularSystem`] when a pivot is exactly zero or the
/// system is numerically rank deficient relative to its largest entry.
pub fn solve_dense<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Result<[f64; N]> {
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::SingularSystem);
    }
    let tiny = scale * f64::EPSILON * N as f64;

    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot_row][col].abs() <= tiny {
            return Err(Error::SingularSystem);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);

        for row in col + 1..N {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            a[row][col] = 0.0;
            let pivot = a[col];
            for (dst, src) in a[row].iter_mut().zip(pivot).skip(col + 1) {
                *dst -= factor * src;
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Thomas algorithm for a tridiagonal system.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (`lower[0]` is ignored),
/// `upper[i]` multiplies `x[i+1]` (`upper[n-1]` is ignored).
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(
        lower.len() == n && upper.len() == n && rhs.len() == n,
        "tridiagonal bands must share one length"
    );
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];

    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(Error::SingularSystem);
    }
    c[0] = upper[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - lower[i] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::SingularSystem);
        }
        c[i] = if i + 1 < n { upper[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }

    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}
