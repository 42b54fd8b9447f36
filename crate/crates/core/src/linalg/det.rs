//! Fredholm and perturbation determinants.
//!
//! det(I + K) is computed by pivoted Gaussian elimination; the Plemelj
//! route re-expresses it through traces of powers and must agree wherever
//! its trace-norm convergence condition holds. The two routes stay
//! independent so each can certify the other.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bargmann::{build_perturbation, resolvent_diagonal, GribovParams, TruncationSpec};
use crate::error::{Error, Result};
use crate::linalg::banded::Banded;
use crate::sum::KahanComplexSum;

type C = Complex64;

/// In-place LU with partial pivoting; returns the determinant.
pub(crate) fn lu_determinant(mut a: DMatrix<C>) -> C {
    let n = a.nrows();
    let mut det = C::new(1.0, 0.0);
    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_mag = a[(k, k)].norm();
        for i in k + 1..n {
            let mag = a[(i, k)].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag == 0.0 {
            return C::new(0.0, 0.0);
        }
        if pivot_row != k {
            a.swap_rows(pivot_row, k);
            det = -det;
        }
        let pivot = a[(k, k)];
        det *= pivot;
        for i in k + 1..n {
            let mult = a[(i, k)] / pivot;
            a[(i, k)] = mult;
            for j in k + 1..n {
                let upd = mult * a[(k, j)];
                a[(i, j)] -= upd;
            }
        }
    }
    det
}

/// Solve A x = b reusing a fresh pivoted LU; dense path for eigenpair
/// residuals on general matrices.
pub(crate) fn lu_solve(a: &DMatrix<C>, b: &[C]) -> Option<Vec<C>> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let tiny = (f64::EPSILON * scale).max(f64::MIN_POSITIVE.sqrt());
    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_mag = m[(k, k)].norm();
        for i in k + 1..n {
            let mag = m[(i, k)].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_row != k {
            m.swap_rows(pivot_row, k);
            x.swap(pivot_row, k);
        }
        if m[(k, k)].norm() == 0.0 {
            m[(k, k)] = C::new(tiny, 0.0);
        }
        let pivot = m[(k, k)];
        for i in k + 1..n {
            let mult = m[(i, k)] / pivot;
            for j in k + 1..n {
                let upd = mult * m[(k, j)];
                m[(i, j)] -= upd;
            }
            let upd = mult * x[k];
            x[i] -= upd;
        }
    }
    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in k + 1..n {
            acc -= m[(k, j)] * x[j];
        }
        x[k] = acc / m[(k, k)];
        if !x[k].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Fredholm determinant det(I + K) by pivoted elimination. A zero result is
/// a valid value: it signals that I + K is not invertible.
pub fn fredholm_det(k: &DMatrix<C>) -> C {
    assert_eq!(k.nrows(), k.ncols());
    let n = k.nrows();
    let a = k + DMatrix::<C>::identity(n, n);
    lu_determinant(a)
}

/// Plemelj expansion det(I + K) = exp(sum_{m>=1} (-1)^{m+1} Tr(K^m)/m).
///
/// The expansion of log det(I + K) = Tr log(I + K) carries the sign
/// (-1)^{m+1}; this is the convention that reproduces `fredholm_det` on
/// diagonal matrices and is the one implemented here. Requires trace norm
/// below one, the classical convergence condition of the series.
pub fn plemelj_det(k: &DMatrix<C>, terms: usize) -> Result<C> {
    let report = crate::linalg::schatten_norm(k, 1.0)?;
    if report.value >= 1.0 {
        return Err(Error::DomainError(format!(
            "Plemelj series requires trace norm < 1, got {:.6}",
            report.value
        )));
    }
    let n = k.nrows();
    let mut power = DMatrix::<C>::identity(n, n);
    let mut acc = KahanComplexSum::new();
    for m in 1..=terms {
        power = &power * k;
        let tr: C = (0..n).map(|i| power[(i, i)]).sum();
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        acc.add(tr * (sign / m as f64));
    }
    Ok(acc.value().exp())
}

/// Perturbation determinant D(sigma) = det(I + H_{mu,lambda} (lambda'' G - sigma)^{-1})
/// on the truncation. Vanishes exactly at eigenvalues of the truncated H.
pub fn perturbation_determinant(
    params: &GribovParams,
    sigma: C,
    spec: &TruncationSpec,
) -> Result<C> {
    let resolvent = resolvent_diagonal(params, sigma, spec)?;
    let h = build_perturbation(params, spec)?;
    let b = Banded::from_tridiagonal(&h).scale_columns(&resolvent);
    Ok(fredholm_det(&b.to_dense()))
}
