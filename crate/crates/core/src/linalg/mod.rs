//! Dense and banded complex linear algebra: spectra of complex symmetric
//! tridiagonal truncations, singular values and Schatten norms, traces of
//! powers and Fredholm/perturbation determinants.

pub mod banded;
mod det;
mod hermitian;
pub(crate) mod qr;
mod tridiag;

pub use banded::Banded;
pub use det::{fredholm_det, perturbation_determinant, plemelj_det};
pub use hermitian::{hermitian_eigenvalues, sym_tridiag_eigenvalues};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bargmann::TridiagonalOperator;
use crate::error::{Error, Result};
use crate::sum::KahanSum;

type C = Complex64;

/// Deterministic total order on complex values: by real part, then
/// imaginary part, using the IEEE total order on each component.
pub fn complex_cmp(a: &C, b: &C) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sorted eigenvalues of a truncation together with per-eigenpair
/// backward-error bounds.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues sorted by (real part, imaginary part).
    pub values: Vec<C>,
    /// residuals[k] = ||M v - sigma_k v||_2 for the normalized inverse
    /// iteration vector v of eigenpair k.
    pub residuals: Vec<f64>,
    pub dim: usize,
    /// The tolerance the residuals were certified against, as
    /// residual <= tol * ||M||.
    pub tol: f64,
}

impl Spectrum {
    /// Number of eigenvalues strictly inside the disk |z| < radius.
    pub fn count_inside(&self, radius: f64) -> usize {
        self.values.iter().filter(|z| z.norm() < radius).count()
    }
}

/// Eigenvalues of a complex symmetric tridiagonal operator.
///
/// Implicitly shifted QR on the (already Hessenberg) matrix with updates
/// confined to the active window, then a Newton polish of every eigenvalue
/// on the characteristic polynomial, then one inverse-iteration step per
/// eigenvalue for the residual certificate.
pub fn eigenvalues(op: &TridiagonalOperator, tol: f64) -> Result<Spectrum> {
    if tol <= 0.0 {
        return Err(Error::DomainError(format!(
            "solver tolerance must be positive, got {tol}"
        )));
    }
    let raw = qr::hessenberg_eigenvalues(op.to_dense())?;
    let mut values: Vec<C> = raw
        .into_iter()
        .map(|e| tridiag::polish_eigenvalue(op, e))
        .collect();
    values.sort_by(complex_cmp);
    let scale = op.norm_inf().max(f64::MIN_POSITIVE);
    let residuals: Vec<f64> = values
        .iter()
        .map(|&s| tridiag::inverse_iteration_residual(op, s))
        .collect();
    for (k, &r) in residuals.iter().enumerate() {
        let certified = r.is_finite() && r <= tol * scale;
        if !certified {
            return Err(Error::NoConvergence(format!(
                "eigenpair {k} residual {r:.3e} exceeds {:.3e}",
                tol * scale
            )));
        }
    }
    Ok(Spectrum {
        values,
        residuals,
        dim: op.dim(),
        tol,
    })
}

/// Eigenvalues of a general dense complex matrix, with the same residual
/// certificate (dense inverse iteration).
pub fn eigenvalues_dense(a: &DMatrix<C>, tol: f64) -> Result<Spectrum> {
    if tol <= 0.0 {
        return Err(Error::DomainError(format!(
            "solver tolerance must be positive, got {tol}"
        )));
    }
    let n = a.nrows();
    let mut values = qr::dense_eigenvalues(a)?;
    values.sort_by(complex_cmp);
    let scale = a
        .row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let b = vec![C::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let id = DMatrix::<C>::identity(n, n);
    let mut residuals = Vec::with_capacity(n);
    for &s in &values {
        let shifted = a - &id * s;
        let r = match det::lu_solve(&shifted, &b) {
            Some(mut v) => {
                let peak = v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
                if peak == 0.0 || !peak.is_finite() {
                    f64::INFINITY
                } else {
                    for z in v.iter_mut() {
                        *z /= peak;
                    }
                    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    let v: Vec<C> = v.iter().map(|z| z / norm).collect();
                    let mut acc = 0.0;
                    for i in 0..n {
                        let mut row = C::new(0.0, 0.0);
                        for j in 0..n {
                            row += a[(i, j)] * v[j];
                        }
                        acc += (row - s * v[i]).norm_sqr();
                    }
                    acc.sqrt()
                }
            }
            None => f64::INFINITY,
        };
        residuals.push(r);
    }
    for (k, &r) in residuals.iter().enumerate() {
        let certified = r.is_finite() && r <= tol * scale;
        if !certified {
            return Err(Error::NoConvergence(format!(
                "eigenpair {k} residual {r:.3e} exceeds {:.3e}",
                tol * scale
            )));
        }
    }
    Ok(Spectrum {
        values,
        residuals,
        dim: n,
        tol,
    })
}

/// Real nonsymmetric tridiagonal matrix similar to a Gribov-structured
/// complex symmetric one (real diagonal, purely imaginary off-diagonal).
#[derive(Debug, Clone)]
pub struct RealTridiagonal {
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl RealTridiagonal {
    pub fn to_complex_dense(&self) -> DMatrix<C> {
        let n = self.diag.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(self.diag[i], 0.0);
        }
        for i in 0..n - 1 {
            m[(i, i + 1)] = C::new(self.upper[i], 0.0);
            m[(i + 1, i)] = C::new(self.lower[i], 0.0);
        }
        m
    }
}

/// Conjugation by diag(i^n) turns the purely imaginary off-diagonals into
/// real entries of opposite signs; the spectrum is untouched. Rejects input
/// whose structure deviates beyond 1e-13 of the entry scale.
pub fn similarity_to_real(op: &TridiagonalOperator) -> Result<RealTridiagonal> {
    let scale = op.norm_inf().max(f64::MIN_POSITIVE);
    for (k, d) in op.diag().iter().enumerate() {
        if d.im.abs() > 1e-13 * scale {
            return Err(Error::StructureMismatch(format!(
                "diagonal entry {k} has imaginary part {:.3e}",
                d.im
            )));
        }
    }
    for (k, b) in op.off().iter().enumerate() {
        if b.re.abs() > 1e-13 * scale {
            return Err(Error::StructureMismatch(format!(
                "off-diagonal entry {k} has real part {:.3e}",
                b.re
            )));
        }
    }
    let diag = op.diag().iter().map(|d| d.re).collect();
    let upper: Vec<f64> = op.off().iter().map(|b| b.im).collect();
    let lower: Vec<f64> = upper.iter().map(|w| -w).collect();
    Ok(RealTridiagonal { diag, upper, lower })
}

/// Singular values in nonincreasing order, via the Hermitian eigenvalues of
/// the Gram matrix on the smaller side.
pub fn singular_values(a: &DMatrix<C>) -> Result<Vec<f64>> {
    let gram = if a.nrows() >= a.ncols() {
        a.adjoint() * a
    } else {
        a * a.adjoint()
    };
    let mut eigs = hermitian_eigenvalues(&gram)?;
    for x in eigs.iter_mut() {
        *x = x.max(0.0).sqrt();
    }
    eigs.sort_by(|p, q| q.total_cmp(p));
    Ok(eigs)
}

/// Schatten norm report. For p >= 1 the value is (sum s_n^p)^{1/p}; for
/// 0 < p < 1 that expression is no longer a norm, and the raw sum
/// sum s_n^p is reported instead, which is the Carleman-class diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct SchattenReport {
    pub order_p: f64,
    pub value: f64,
    pub singular_count: usize,
}

pub fn schatten_norm(a: &DMatrix<C>, p: f64) -> Result<SchattenReport> {
    let admissible = p > 0.0;
    if !admissible {
        return Err(Error::DomainError(format!(
            "Schatten order must be positive, got {p}"
        )));
    }
    let sv = singular_values(a)?;
    let mut acc = KahanSum::new();
    for s in &sv {
        acc.add(s.powf(p));
    }
    let sum = acc.value();
    let value = if p >= 1.0 { sum.powf(1.0 / p) } else { sum };
    Ok(SchattenReport {
        order_p: p,
        value,
        singular_count: sv.len(),
    })
}

/// Trace of the j-th power of a banded matrix, via banded multiplication.
/// Exact for banded input up to rounding; the bandwidth of the powers grows
/// by the input bandwidth per factor.
pub fn trace_of_power(a: &Banded, j: usize) -> Result<C> {
    if !(1..=8).contains(&j) {
        return Err(Error::DomainError(format!(
            "trace_of_power supports 1 <= j <= 8, got {j}"
        )));
    }
    let mut power = a.clone();
    for _ in 1..j {
        power = power.mul(a);
    }
    Ok(power.trace())
}

/// Traces of all powers A^1 .. A^jmax in one pass, sharing the partial
/// products; the workhorse of the contour integrand.
pub fn traces_of_powers(a: &Banded, jmax: usize) -> Result<Vec<C>> {
    if !(1..=8).contains(&jmax) {
        return Err(Error::DomainError(format!(
            "traces_of_powers supports 1 <= jmax <= 8, got {jmax}"
        )));
    }
    let mut out = Vec::with_capacity(jmax);
    let mut power = a.clone();
    out.push(power.trace());
    for _ in 1..jmax {
        power = power.mul(a);
        out.push(power.trace());
    }
    Ok(out)
}

/// Nearest-neighbor pairing of the leading part of two sorted spectra;
/// pairs values[k] of `a` with the closest value of `b`, consuming each
/// match at most once. Used for cross-truncation stability checks.
pub fn match_spectra(a: &Spectrum, b: &Spectrum, count: usize) -> Vec<(C, C)> {
    let count = count.min(a.values.len()).min(b.values.len());
    let mut used = vec![false; b.values.len()];
    let mut pairs = Vec::with_capacity(count);
    for &va in a.values.iter().take(count) {
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (i, &vb) in b.values.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (va - vb).norm();
            if d < best_d {
                best_d = d;
                best = Some(i);
            }
        }
        if let Some(i) = best {
            used[i] = true;
            pairs.push((va, b.values[i]));
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bargmann::{build_full_operator, GribovParams, TruncationSpec};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn two_by_two_gribov_closed_form() {
        // H_{1,1} at N=2: eigenvalues (3 +- sqrt(1 - 8))/2 = 1.5 +- i sqrt(7)/2.
        let op =
            TridiagonalOperator::new(vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(0.0, SQRT2)]).unwrap();
        let spec = eigenvalues(&op, 1e-10).unwrap();
        let half7 = 7f64.sqrt() / 2.0;
        assert!((spec.values[0] - c(1.5, -half7)).norm() < 1e-14);
        assert!((spec.values[1] - c(1.5, half7)).norm() < 1e-14);
        assert!(spec.residuals.iter().all(|&r| r < 1e-12));
    }

    #[test]
    fn diagonal_matrix_eigenvalues_are_exact() {
        let op = TridiagonalOperator::new(
            vec![c(1.0, 0.0), c(2.0, 0.0), c(9.0, 0.0), c(28.0, 0.0)],
            vec![c(0.0, 0.0); 3],
        )
        .unwrap();
        let spec = eigenvalues(&op, 1e-12).unwrap();
        let expect = [1.0, 2.0, 9.0, 28.0];
        for (v, e) in spec.values.iter().zip(expect) {
            assert_eq!(*v, c(e, 0.0));
        }
    }

    #[test]
    fn truncation_stability_of_low_eigenvalues() {
        let params = GribovParams::new(1.0, 1.0, 0.1).unwrap();
        let s200 = eigenvalues(
            &build_full_operator(&params, &TruncationSpec::standard(200).unwrap()).unwrap(),
            1e-9,
        )
        .unwrap();
        let s300 = eigenvalues(
            &build_full_operator(&params, &TruncationSpec::standard(300).unwrap()).unwrap(),
            1e-9,
        )
        .unwrap();
        for (a, b) in match_spectra(&s200, &s300, 50) {
            assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn similarity_preserves_spectrum() {
        let params = GribovParams::new(1.0, 1.0, 0.4).unwrap();
        let op = build_full_operator(&params, &TruncationSpec::standard(40).unwrap()).unwrap();
        let real = similarity_to_real(&op).unwrap();
        assert!((real.upper[0] - 0.4 * SQRT2).abs() < 1e-15);
        assert!((real.lower[0] + 0.4 * SQRT2).abs() < 1e-15);
        let direct = eigenvalues(&op, 1e-9).unwrap();
        let via_real = eigenvalues_dense(&real.to_complex_dense(), 1e-9).unwrap();
        for (a, b) in direct.values.iter().zip(via_real.values.iter()) {
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn similarity_requires_gribov_structure() {
        let op =
            TridiagonalOperator::new(vec![c(1.0, 0.5), c(2.0, 0.0)], vec![c(0.0, 1.0)]).unwrap();
        assert!(matches!(
            similarity_to_real(&op),
            Err(Error::StructureMismatch(_))
        ));
    }

    #[test]
    fn similarity_of_diagonal_case_is_identity() {
        let params = GribovParams::new(1.0, 1.0, 0.0).unwrap();
        let op = build_full_operator(&params, &TruncationSpec::standard(6).unwrap()).unwrap();
        let real = similarity_to_real(&op).unwrap();
        assert!(real.upper.iter().all(|&w| w == 0.0));
        for (i, d) in real.diag.iter().enumerate() {
            assert_eq!(*d, op.diag()[i].re);
        }
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(1.0 / 7.0, 0.0),
            c(1.0 / 22.0, 0.0),
        ]));
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-14);
        assert!((sv[1] - 1.0 / 7.0).abs() < 1e-14);
        assert!((sv[2] - 1.0 / 22.0).abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_zero_matrix() {
        let a = DMatrix::<C>::zeros(4, 4);
        assert!(singular_values(&a).unwrap().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn singular_values_antidiagonal() {
        // [[0, i sqrt2], [i sqrt2, 0]]: K*K = 2I, singular values (sqrt2, sqrt2).
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, SQRT2), c(0.0, SQRT2), c(0.0, 0.0)],
        );
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - SQRT2).abs() < 1e-14);
        assert!((sv[1] - SQRT2).abs() < 1e-14);
    }

    #[test]
    fn schatten_norms() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(1.0 / 7.0, 0.0),
        ]));
        let p1 = schatten_norm(&a, 1.0).unwrap();
        assert!((p1.value - (2.0 + 1.0 / 7.0)).abs() < 1e-14);

        let b = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, SQRT2), c(0.0, SQRT2), c(0.0, 0.0)],
        );
        let p2 = schatten_norm(&b, 2.0).unwrap();
        assert!((p2.value - 2.0).abs() < 1e-14);

        let id = DMatrix::<C>::identity(9, 9);
        assert!((schatten_norm(&id, 1.0).unwrap().value - 9.0).abs() < 1e-13);

        assert!(schatten_norm(&id, 0.0).is_err());
    }

    #[test]
    fn schatten_monotone_in_p() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let a = DMatrix::from_fn(6, 6, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let v1 = schatten_norm(&a, 1.0).unwrap().value;
            let v2 = schatten_norm(&a, 2.0).unwrap().value;
            assert!(v1 >= v2 - 1e-12);
        }
    }

    #[test]
    fn trace_of_power_examples() {
        let mut d = Banded::zeros(3, 0);
        d.set(0, 0, c(1.0, 0.0));
        d.set(1, 1, c(2.0, 0.0));
        d.set(2, 2, c(3.0, 0.0));
        assert_eq!(trace_of_power(&d, 1).unwrap(), c(6.0, 0.0));

        let mut a = Banded::zeros(2, 1);
        a.set(0, 1, c(0.0, 1.0));
        a.set(1, 0, c(0.0, 1.0));
        assert!((trace_of_power(&a, 2).unwrap() - c(-2.0, 0.0)).norm() < 1e-15);

        assert!(trace_of_power(&a, 0).is_err());
        assert!(trace_of_power(&a, 9).is_err());
    }

    #[test]
    fn first_trace_of_resolvent_product_is_explicit_sum() {
        // Tr(H_{mu,lambda} R0) = sum mu n / (lambda'' lambda_n - sigma):
        // the off-diagonals never touch the j = 1 trace.
        use crate::bargmann::{build_perturbation, eigenvalue_g, resolvent_diagonal};
        let params = GribovParams::new(2.0, 0.7, 0.3).unwrap();
        let trunc = TruncationSpec::standard(30).unwrap();
        let sigma = c(40.0, 11.0);
        let resolvent = resolvent_diagonal(&params, sigma, &trunc).unwrap();
        let hr = Banded::from_tridiagonal(&build_perturbation(&params, &trunc).unwrap())
            .scale_columns(&resolvent);
        let tr = trace_of_power(&hr, 1).unwrap();
        let mut expect = c(0.0, 0.0);
        for n in 1..=30u64 {
            expect += c(0.7 * n as f64, 0.0) / (c(2.0 * eigenvalue_g(n) as f64, 0.0) - sigma);
        }
        assert!((tr - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn trace_of_square_matches_dense_double_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let n = 100;
        let mut a = Banded::zeros(n, 2);
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                a.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
        let fast = trace_of_power(&a, 2).unwrap();
        let dense = a.to_dense();
        let mut slow = c(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                slow += dense[(i, k)] * dense[(k, i)];
            }
        }
        assert!((fast - slow).norm() < 1e-12 * slow.norm().max(1.0));
    }

    #[test]
    fn lidskii_matrix_trace_vs_spectral_trace() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for n in [10usize, 30, 50] {
            let diag: Vec<C> = (0..n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let off: Vec<C> = (0..n - 1)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let op = TridiagonalOperator::new(diag.clone(), off).unwrap();
            let spec = eigenvalues(&op, 1e-8).unwrap();
            let tr: C = diag.iter().sum();
            let sp: C = spec.values.iter().sum();
            assert!((tr - sp).norm() < 1e-9 * n as f64, "n={n}: {tr} vs {sp}");
        }
    }

    #[test]
    fn fredholm_det_matches_eigenvalue_product() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for n in [5usize, 12, 20] {
            let diag: Vec<C> = (0..n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let off: Vec<C> = (0..n - 1)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let op = TridiagonalOperator::new(diag, off).unwrap();
            let spec = eigenvalues(&op, 1e-8).unwrap();
            let det = fredholm_det(&op.to_dense());
            let mut prod = c(1.0, 0.0);
            for v in &spec.values {
                prod *= c(1.0, 0.0) + v;
            }
            assert!(
                (det - prod).norm() < 1e-8 * det.norm().max(1e-3),
                "n={n}: {det} vs {prod}"
            );
        }
    }

    #[test]
    fn perturbation_determinant_vanishes_at_eigenvalue() {
        let params = GribovParams::new(1.0, 1.0, 0.1).unwrap();
        let trunc = TruncationSpec::standard(50).unwrap();
        let op = build_full_operator(&params, &trunc).unwrap();
        let spec = eigenvalues(&op, 1e-9).unwrap();
        let sigma = spec.values[6];
        let at_eig = perturbation_determinant(&params, sigma, &trunc)
            .unwrap()
            .norm();
        let away = perturbation_determinant(&params, sigma + c(1.0, 0.0), &trunc)
            .unwrap()
            .norm();
        assert!(at_eig < 1e-6 * away, "at={at_eig:e} away={away:e}");
    }
}
