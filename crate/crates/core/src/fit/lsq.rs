//! Dense linear least squares by Householder QR.

use crate::error::{Error, Result};
use crate::numerics::{lit, Scalar};

/// Minimizes `‖A w − y‖₂` for a tall `A` given as rows.
///
/// Columns are scaled to unit norm before factorizing, so a design whose
/// columns differ by many orders of magnitude (powers of dBm, squares of
/// mW) is only as ill-conditioned as its column directions. Rank deficiency
/// is reported instead of returning an arbitrary minimizer.
pub(crate) fn solve<T: Scalar>(rows: &[Vec<T>], y: &[T]) -> Result<Vec<T>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if n == 0 || m < n {
        return Err(Error::InsufficientData(format!("{m} equations for {n} unknowns")));
    }
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut b: Vec<T> = y.to_vec();

    let mut scale = vec![T::one(); n];
    for (j, s) in scale.iter_mut().enumerate() {
        let norm = a.iter().map(|r| r[j] * r[j]).fold(T::zero(), |acc, v| acc + v).sqrt();
        if norm > T::zero() {
            *s = norm;
            for r in a.iter_mut() {
                r[j] = r[j] / norm;
            }
        }
    }

    let mut diag = vec![T::zero(); n];
    for k in 0..n {
        let norm = (k..m)
            .map(|i| a[i][k] * a[i][k])
            .fold(T::zero(), |acc, v| acc + v)
            .sqrt();
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        diag[k] = alpha;
        if norm == T::zero() {
            continue;
        }
        // v = x − alpha e_1, stored in place of column k
        a[k][k] = a[k][k] - alpha;
        let vtv = (k..m).map(|i| a[i][k] * a[i][k]).fold(T::zero(), |acc, v| acc + v);
        for j in k + 1..n {
            let dot = (k..m).map(|i| a[i][k] * a[i][j]).fold(T::zero(), |acc, v| acc + v);
            let f = lit::<T>(2.0) * dot / vtv;
            for i in k..m {
                let v = a[i][k];
                a[i][j] = a[i][j] - f * v;
            }
        }
        let dot = (k..m).map(|i| a[i][k] * b[i]).fold(T::zero(), |acc, v| acc + v);
        let f = lit::<T>(2.0) * dot / vtv;
        for i in k..m {
            b[i] = b[i] - f * a[i][k];
        }
    }

    let biggest = diag.iter().fold(T::zero(), |acc, d| acc.max(d.abs()));
    let tol = lit::<T>(m.max(n) as f64) * T::epsilon() * biggest;
    if let Some(k) = diag.iter().position(|d| d.abs() <= tol) {
        return Err(Error::IllConditioned(format!(
            "design matrix is rank deficient (column {k})"
        )));
    }

    let mut w = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s = s - a[k][j] * w[j];
        }
        w[k] = s / diag[k];
    }
    for (wj, s) in w.iter_mut().zip(&scale) {
        *wj = *wj / *s;
    }
    Ok(w)
}
