//! Finite truncations of the Gribov operators in the Bargmann basis.
//!
//! The orthonormal basis e_n(z) = z^n / sqrt(n!) diagonalizes G = a*^3 a^3
//! with eigenvalues lambda_n = n(n-1)(n-2), while the perturbation
//! H_{mu,lambda} = mu a*a + i lambda a*(a + a*)a is a complex symmetric
//! tridiagonal matrix with entries
//!
//! ```text
//!     h_{n,n}   = mu * n
//!     h_{n,n+1} = h_{n+1,n} = i * lambda * n * sqrt(n+1),   n = 1, 2, ...
//! ```
//!
//! Everything here is an exact finite-dimensional section of those matrices:
//! no approximation beyond truncation itself happens in this module.
//! Spectral and trace work indexes the basis from n = 1 (the e_0 row and
//! column of the full operator vanish identically); the index-0 state is
//! retained only by the ladder-operator builders so the commutator
//! [a, a*] = I can be checked on the raw operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalue of G = a*^3 a^3 on the basis state e_n: lambda_n = n(n-1)(n-2).
///
/// Exact integer arithmetic; zero for n in {0, 1, 2}. Overflows u64 only for
/// n beyond ~2.6e6, far above any truncation used here.
pub fn eigenvalue_g(n: u64) -> u64 {
    if n < 3 {
        return 0;
    }
    n.checked_mul(n - 1)
        .and_then(|p| p.checked_mul(n - 2))
        .expect("eigenvalue_g overflows u64; truncation index out of supported range")
}

/// The three real couplings of H = lambda'' G + H_{mu,lambda}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GribovParams {
    /// lambda'' — the magic coupling of the Pomeron, weight of G.
    pub lambda_pp: f64,
    /// mu — the Pomeron intercept, weight of a*a.
    pub mu: f64,
    /// lambda — the triple coupling of the Pomeron, weight of i a*(a+a*)a.
    pub lambda: f64,
}

impl GribovParams {
    pub fn new(lambda_pp: f64, mu: f64, lambda: f64) -> Result<Self> {
        if !(lambda_pp.is_finite() && mu.is_finite() && lambda.is_finite()) {
            return Err(Error::DomainError(
                "Gribov couplings must all be finite".into(),
            ));
        }
        Ok(Self {
            lambda_pp,
            mu,
            lambda,
        })
    }

    /// Trace-formula and contour operations need a strictly positive
    /// unperturbed part; lambda'' = 0 is allowed only for builders of the
    /// perturbation alone.
    pub fn require_positive_lambda_pp(&self) -> Result<()> {
        if self.lambda_pp > 0.0 {
            Ok(())
        } else {
            Err(Error::DomainError(format!(
                "operation requires lambda'' > 0, got {}",
                self.lambda_pp
            )))
        }
    }
}

/// Which basis states a truncation retains: indices
/// `start_index ..= start_index + dim - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    /// Number of retained basis states, at least 2.
    pub dim: usize,
    /// Lowest retained basis index; 0 or 1. Trace work uses 1.
    pub start_index: usize,
}

impl TruncationSpec {
    pub fn new(dim: usize, start_index: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DomainError(format!(
                "truncation dimension must be at least 2, got {dim}"
            )));
        }
        if start_index > 1 {
            return Err(Error::DomainError(format!(
                "start index must be 0 or 1, got {start_index}"
            )));
        }
        Ok(Self { dim, start_index })
    }

    /// Standard truncation for spectral/trace work: basis states 1..=dim.
    pub fn standard(dim: usize) -> Result<Self> {
        Self::new(dim, 1)
    }

    /// Basis index of matrix row/column `row` (0-based).
    pub fn basis_index(&self, row: usize) -> usize {
        self.start_index + row
    }

    fn require_start_one(&self, op: &str) -> Result<()> {
        if self.start_index == 1 {
            Ok(())
        } else {
            Err(Error::DomainError(format!(
                "{op} requires start_index = 1: the e_0 row and column vanish identically \
                 and only distort the index bookkeeping"
            )))
        }
    }
}

/// A complex symmetric tridiagonal matrix, stored as its diagonal and the
/// single off-diagonal sequence (entry k couples basis states k and k+1).
/// Symmetry M = M^T is structural, the matrix is generally not Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    dim: usize,
    diag: Vec<Complex64>,
    off: Vec<Complex64>,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<Complex64>, off: Vec<Complex64>) -> Result<Self> {
        if diag.len() < 2 || off.len() + 1 != diag.len() {
            return Err(Error::DomainError(format!(
                "tridiagonal shape mismatch: {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(off.iter()).any(|z| !z.is_finite()) {
            return Err(Error::DomainError(
                "tridiagonal entries must be finite".into(),
            ));
        }
        Ok(Self {
            dim: diag.len(),
            diag,
            off,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn off(&self) -> &[Complex64] {
        &self.off
    }

    /// Dense expansion; symmetry is exact because both triangles are filled
    /// from the same stored entry.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for i in 0..n - 1 {
            m[(i, i + 1)] = self.off[i];
            m[(i + 1, i)] = self.off[i];
        }
        m
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < self.dim {
                acc += self.off[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// Max row-sum norm, cheap and adequate for residual scaling.
    pub fn norm_inf(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.dim {
            let mut s = self.diag[i].norm();
            if i > 0 {
                s += self.off[i - 1].norm();
            }
            if i + 1 < self.dim {
                s += self.off[i].norm();
            }
            best = best.max(s);
        }
        best
    }
}

/// Matrix of the perturbation H_{mu,lambda} on the truncation.
///
/// The builder insists on start_index = 1; the e_0 row/column is
/// identically zero and retaining it shifts every basis label by one.
pub fn build_perturbation(
    params: &GribovParams,
    spec: &TruncationSpec,
) -> Result<TridiagonalOperator> {
    spec.require_start_one("build_perturbation")?;
    let n = spec.dim;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    for row in 0..n {
        let b = spec.basis_index(row) as f64;
        diag.push(Complex64::new(params.mu * b, 0.0));
        if row + 1 < n {
            off.push(Complex64::new(0.0, params.lambda * b * (b + 1.0).sqrt()));
        }
    }
    TridiagonalOperator::new(diag, off)
}

/// Matrix of the full operator H = lambda'' G + H_{mu,lambda} on the
/// truncation: diagonal lambda'' n(n-1)(n-2) + mu n, off-diagonal as in the
/// perturbation. The G eigenvalues are formed in integer arithmetic and
/// converted to floating point only here.
pub fn build_full_operator(
    params: &GribovParams,
    spec: &TruncationSpec,
) -> Result<TridiagonalOperator> {
    spec.require_start_one("build_full_operator")?;
    let mut op = build_perturbation(params, spec)?;
    for row in 0..op.dim {
        let lam = eigenvalue_g(spec.basis_index(row) as u64) as f64;
        op.diag[row] += Complex64::new(params.lambda_pp * lam, 0.0);
    }
    Ok(op)
}

/// Which ladder operator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Annihilation,
    Creation,
}

/// Dense matrix of a or a* on the truncation with start_index = 0
/// (a e_n = sqrt(n) e_{n-1}, a* its transpose in the orthonormal basis).
pub fn build_ladder(spec: &TruncationSpec, which: Ladder) -> Result<DMatrix<Complex64>> {
    if spec.start_index != 0 {
        return Err(Error::DomainError(
            "ladder builders use start_index = 0 so the vacuum state is present".into(),
        ));
    }
    let n = spec.dim;
    let mut m = DMatrix::zeros(n, n);
    for k in 1..n {
        let s = Complex64::new((k as f64).sqrt(), 0.0);
        match which {
            Ladder::Annihilation => m[(k - 1, k)] = s,
            Ladder::Creation => m[(k, k - 1)] = s,
        }
    }
    Ok(m)
}

/// Diagonal resolvent (lambda'' G - sigma)^{-1} restricted to the truncation.
#[derive(Debug, Clone)]
pub struct DiagonalResolvent {
    dim: usize,
    values: Vec<Complex64>,
    sigma: Complex64,
}

impl DiagonalResolvent {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sigma(&self) -> Complex64 {
        self.sigma
    }
}

/// Relative pole-collision threshold: 1e-12 * (1 + |sigma|), so large-radius
/// contours are not rejected by an absolute criterion.
pub fn pole_collision_threshold(sigma: Complex64) -> f64 {
    1e-12 * (1.0 + sigma.norm())
}

/// Entrywise resolvent of the diagonal part, values[k] = 1/(lambda'' lambda_n - sigma)
/// for the k-th retained basis index n.
pub fn resolvent_diagonal(
    params: &GribovParams,
    sigma: Complex64,
    spec: &TruncationSpec,
) -> Result<DiagonalResolvent> {
    let threshold = pole_collision_threshold(sigma);
    let mut values = Vec::with_capacity(spec.dim);
    for row in 0..spec.dim {
        let n = spec.basis_index(row);
        let pole = Complex64::new(params.lambda_pp * eigenvalue_g(n as u64) as f64, 0.0);
        let denom = pole - sigma;
        if denom.norm() < threshold {
            return Err(Error::PoleCollision {
                index: n,
                sigma,
                distance: denom.norm(),
                threshold,
            });
        }
        values.push(Complex64::new(1.0, 0.0) / denom);
    }
    Ok(DiagonalResolvent {
        dim: spec.dim,
        values,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_g() {
        assert_eq!(eigenvalue_g(3), 6);
        assert_eq!(eigenvalue_g(0), 0);
        assert_eq!(eigenvalue_g(1), 0);
        assert_eq!(eigenvalue_g(2), 0);
        assert_eq!(eigenvalue_g(5), 60);
    }

    #[test]
    fn gap_identity_is_exact() {
        // lambda_{n+1} - lambda_n = 3n(n-1), a polynomial identity in integers.
        for n in 1..=200u64 {
            assert_eq!(eigenvalue_g(n + 1) - eigenvalue_g(n), 3 * n * (n - 1));
        }
    }

    #[test]
    fn perturbation_two_by_two() {
        let p = GribovParams::new(0.0, 1.0, 1.0).unwrap();
        let spec = TruncationSpec::standard(2).unwrap();
        let h = build_perturbation(&p, &spec).unwrap();
        assert_eq!(h.diag(), &[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!((h.off()[0] - c(0.0, SQRT2)).norm() < 1e-15);
    }

    #[test]
    fn perturbation_vanishes_with_couplings() {
        let p = GribovParams::new(0.0, 0.0, 0.0).unwrap();
        let spec = TruncationSpec::standard(5).unwrap();
        let h = build_perturbation(&p, &spec).unwrap();
        assert!(h.diag().iter().all(|z| z.norm() == 0.0));
        assert!(h.off().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn perturbation_three_by_three() {
        let p = GribovParams::new(0.0, 2.0, 0.5).unwrap();
        let spec = TruncationSpec::standard(3).unwrap();
        let h = build_perturbation(&p, &spec).unwrap();
        assert_eq!(h.diag(), &[c(2.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)]);
        assert!((h.off()[0] - c(0.0, 0.5 * SQRT2)).norm() < 1e-15);
        assert!((h.off()[1] - c(0.0, 3f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn builders_reject_vacuum_start() {
        let p = GribovParams::new(1.0, 1.0, 1.0).unwrap();
        let spec = TruncationSpec::new(4, 0).unwrap();
        assert!(matches!(
            build_perturbation(&p, &spec),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            build_full_operator(&p, &spec),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn full_operator_diagonal_case() {
        let p = GribovParams::new(1.0, 1.0, 0.0).unwrap();
        let spec = TruncationSpec::standard(4).unwrap();
        let h = build_full_operator(&p, &spec).unwrap();
        assert_eq!(
            h.diag(),
            &[c(1.0, 0.0), c(2.0, 0.0), c(9.0, 0.0), c(28.0, 0.0)]
        );
        assert!(h.off().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn full_operator_pure_g() {
        let p = GribovParams::new(1.0, 0.0, 0.0).unwrap();
        let spec = TruncationSpec::standard(5).unwrap();
        let h = build_full_operator(&p, &spec).unwrap();
        assert_eq!(
            h.diag(),
            &[
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(6.0, 0.0),
                c(24.0, 0.0),
                c(60.0, 0.0)
            ]
        );
    }

    #[test]
    fn full_operator_mixed() {
        let p = GribovParams::new(2.0, 1.0, 0.1).unwrap();
        let spec = TruncationSpec::standard(3).unwrap();
        let h = build_full_operator(&p, &spec).unwrap();
        assert_eq!(h.diag(), &[c(1.0, 0.0), c(2.0, 0.0), c(15.0, 0.0)]);
        assert!((h.off()[0] - c(0.0, 0.1 * SQRT2)).norm() < 1e-16);
        assert!((h.off()[1] - c(0.0, 0.2 * 3f64.sqrt())).norm() < 1e-16);
    }

    #[test]
    fn ladder_matrices() {
        let spec = TruncationSpec::new(3, 0).unwrap();
        let a = build_ladder(&spec, Ladder::Annihilation).unwrap();
        assert_eq!(a[(0, 1)], c(1.0, 0.0));
        assert!((a[(1, 2)] - c(SQRT2, 0.0)).norm() < 1e-15);
        assert_eq!(a.iter().filter(|z| z.norm() > 0.0).count(), 2);

        let astar = build_ladder(&spec, Ladder::Creation).unwrap();
        assert_eq!(astar, a.transpose());
    }

    #[test]
    fn commutator_is_identity_up_to_truncation_edge() {
        let n = 8;
        let spec = TruncationSpec::new(n, 0).unwrap();
        let a = build_ladder(&spec, Ladder::Annihilation).unwrap();
        let astar = build_ladder(&spec, Ladder::Creation).unwrap();
        let comm = &a * &astar - &astar * &a;
        // [a, a*] = I on the leading (n-1)x(n-1) block; the last diagonal
        // entry is corrupted by the truncation edge.
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - c(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn ladder_assembly_matches_perturbation_interior() {
        // mu a*a + i lambda (a* a^2 + a*^2 a) assembled from ladders agrees
        // with the direct tridiagonal builder away from the truncation edge.
        let (mu, lambda) = (0.7, 0.3);
        let p = GribovParams::new(0.0, mu, lambda).unwrap();
        for n0 in [8usize, 13] {
            let ladder_spec = TruncationSpec::new(n0, 0).unwrap();
            let a = build_ladder(&ladder_spec, Ladder::Annihilation).unwrap();
            let astar = build_ladder(&ladder_spec, Ladder::Creation).unwrap();
            let ilambda = c(0.0, lambda);
            let assembled =
                &astar * &a * c(mu, 0.0) + (&astar * &a * &a + &astar * &astar * &a) * ilambda;

            let direct = build_perturbation(&p, &TruncationSpec::standard(n0 - 1).unwrap())
                .unwrap()
                .to_dense();

            // Basis indices 1..=n0-3 are interior; assembled[(i, j)] holds
            // basis index i, direct[(i, j)] holds basis index i+1.
            for bi in 1..=n0 - 3 {
                for bj in 1..=n0 - 3 {
                    let diff = (assembled[(bi, bj)] - direct[(bi - 1, bj - 1)]).norm();
                    assert!(diff < 1e-13, "mismatch at basis ({bi}, {bj}): {diff:e}");
                }
            }
        }
    }

    #[test]
    fn dense_expansion_is_exactly_symmetric() {
        let p = GribovParams::new(1.5, 0.9, 0.4).unwrap();
        let spec = TruncationSpec::standard(12).unwrap();
        let m = build_full_operator(&p, &spec).unwrap().to_dense();
        let mt = m.transpose();
        assert!(m.iter().zip(mt.iter()).all(|(x, y)| (x - y).norm() == 0.0));
    }

    #[test]
    fn real_params_give_real_diag_imaginary_off() {
        let p = GribovParams::new(0.0, 1.3, -0.8).unwrap();
        let spec = TruncationSpec::standard(9).unwrap();
        let h = build_perturbation(&p, &spec).unwrap();
        assert!(h.diag().iter().all(|z| z.im == 0.0));
        assert!(h.off().iter().all(|z| z.re == 0.0));
    }

    #[test]
    fn resolvent_diagonal_values() {
        let p = GribovParams::new(1.0, 0.0, 0.0).unwrap();
        let spec = TruncationSpec::standard(3).unwrap();
        let r = resolvent_diagonal(&p, c(-1.0, 0.0), &spec).unwrap();
        let expect = [1.0, 1.0, 1.0 / 7.0];
        for (v, e) in r.values().iter().zip(expect) {
            assert!((v - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn resolvent_between_eigenvalues() {
        // sigma = 15 is the midpoint radius between lambda_3 = 6 and lambda_4 = 24.
        let p = GribovParams::new(1.0, 0.0, 0.0).unwrap();
        let spec = TruncationSpec::standard(4).unwrap();
        let r = resolvent_diagonal(&p, c(15.0, 0.0), &spec).unwrap();
        let expect = [-1.0 / 15.0, -1.0 / 15.0, -1.0 / 9.0, 1.0 / 9.0];
        for (v, e) in r.values().iter().zip(expect) {
            assert!((v - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn resolvent_rejects_pole() {
        let p = GribovParams::new(1.0, 0.0, 0.0).unwrap();
        let spec = TruncationSpec::standard(4).unwrap();
        assert!(matches!(
            resolvent_diagonal(&p, c(6.0, 0.0), &spec),
            Err(Error::PoleCollision { index: 3, .. })
        ));
    }

    #[test]
    fn resolvent_identity_to_working_precision() {
        let p = GribovParams::new(2.0, 0.0, 0.0).unwrap();
        let spec = TruncationSpec::standard(40).unwrap();
        let sigma = c(100.0, 35.0);
        let r = resolvent_diagonal(&p, sigma, &spec).unwrap();
        for (row, v) in r.values().iter().enumerate() {
            let pole = c(2.0 * eigenvalue_g(spec.basis_index(row) as u64) as f64, 0.0);
            assert!(((pole - sigma) * v - c(1.0, 0.0)).norm() < 1e-14);
        }
    }
}
