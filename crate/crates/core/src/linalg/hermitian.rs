//! Hermitian eigenvalues: Householder tridiagonalization followed by
//! implicit-shift QL on the resulting real symmetric tridiagonal matrix.
//! The QL routine is also used directly by the Sturm-Liouville module,
//! whose finite-difference matrices are real symmetric tridiagonal from
//! the start.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

/// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
/// `off[i]` couples `diag[i]` and `diag[i+1]`. Implicit QL with Wilkinson
/// shifts (the classic imtql1/tqli iteration), relative deflation test.
pub fn sym_tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(off.len() + 1 == n || (n == 0 && off.is_empty()));
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let eps = f64::EPSILON;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NoConvergence(format!(
                    "QL exceeded 50 sweeps for eigenvalue {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction of a Hermitian matrix to real symmetric
/// tridiagonal form (phases absorbed into the basis), returning
/// (diag, off). The input is consumed as workspace.
fn tridiagonalize_hermitian(mut a: DMatrix<C>) -> (Vec<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut off = vec![0.0f64; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += a[(i, k)].norm_sqr();
        }
        let norm = norm2.sqrt();
        off[k] = norm;
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0.norm() == 0.0 {
            C::new(-norm, 0.0)
        } else {
            -(x0 / x0.norm()) * norm
        };
        let mut v: Vec<C> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // Rank-2 Hermitian update of the trailing block:
        // u = beta * A v, w = u - (beta <v, u>/2) v, A <- A - v w^H - w v^H.
        let m = n - (k + 1);
        let mut u = vec![C::new(0.0, 0.0); m];
        for (ui, i) in (k + 1..n).enumerate() {
            let mut acc = C::new(0.0, 0.0);
            for (vj, j) in (k + 1..n).enumerate() {
                acc += a[(i, j)] * v[vj];
            }
            u[ui] = acc * beta;
        }
        let vhu: C = v.iter().zip(u.iter()).map(|(vi, ui)| vi.conj() * ui).sum();
        let scale = vhu * (beta / 2.0);
        let w: Vec<C> = u
            .iter()
            .zip(v.iter())
            .map(|(ui, vi)| ui - scale * vi)
            .collect();
        for (wi, i) in (k + 1..n).enumerate() {
            for (wj, j) in (k + 1..n).enumerate() {
                let upd = v[wi] * w[wj].conj() + w[wi] * v[wj].conj();
                a[(i, j)] -= upd;
            }
        }
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1, n - 2)].norm();
    }
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    (diag, off)
}

/// Eigenvalues of a complex Hermitian matrix, ascending. The Hermitian
/// property is trusted, not checked; only the lower triangle actually
/// drives the Householder vectors.
pub fn hermitian_eigenvalues(a: &DMatrix<C>) -> Result<Vec<f64>> {
    assert_eq!(a.nrows(), a.ncols());
    let (d, e) = tridiagonalize_hermitian(a.clone());
    sym_tridiag_eigenvalues(&d, &e)
}
