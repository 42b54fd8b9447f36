//! Banded complex matrices for trace-of-power work.
//!
//! Products of the tridiagonal perturbation with diagonal resolvents stay
//! banded (bandwidth grows by one per factor), so traces of the j-th power
//! cost O(N j^2) instead of O(N^3) per contour node.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bargmann::{DiagonalResolvent, TridiagonalOperator};
use crate::sum::KahanComplexSum;

/// Square banded matrix: entry (i, j) is stored iff |i - j| <= half_bw.
#[derive(Debug, Clone)]
pub struct Banded {
    dim: usize,
    half_bw: usize,
    // Row-major diagonals: data[i * width + (j - i + half_bw)].
    data: Vec<Complex64>,
}

impl Banded {
    pub fn zeros(dim: usize, half_bw: usize) -> Self {
        let half_bw = half_bw.min(dim.saturating_sub(1));
        Self {
            dim,
            half_bw,
            data: vec![Complex64::new(0.0, 0.0); dim * (2 * half_bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bw
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (lo, hi) = (i.saturating_sub(self.half_bw), i + self.half_bw);
        if j < lo || j > hi || j >= self.dim {
            Complex64::new(0.0, 0.0)
        } else {
            self.data[i * (2 * self.half_bw + 1) + (j + self.half_bw - i)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        debug_assert!(
            j + self.half_bw >= i && j <= i + self.half_bw,
            "entry ({i}, {j}) outside bandwidth {}",
            self.half_bw
        );
        self.data[i * (2 * self.half_bw + 1) + (j + self.half_bw - i)] = value;
    }

    pub fn from_tridiagonal(op: &TridiagonalOperator) -> Self {
        let mut b = Self::zeros(op.dim(), 1);
        for i in 0..op.dim() {
            b.set(i, i, op.diag()[i]);
        }
        for i in 0..op.dim() - 1 {
            b.set(i, i + 1, op.off()[i]);
            b.set(i + 1, i, op.off()[i]);
        }
        b
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let n = m.nrows();
        let mut half_bw = 0;
        for ((i, j), value) in m.iter().enumerate().map(|(idx, v)| ((idx % n, idx / n), v)) {
            if value.norm() != 0.0 {
                half_bw = half_bw.max(i.abs_diff(j));
            }
        }
        let mut b = Self::zeros(n, half_bw);
        for i in 0..n {
            let lo = i.saturating_sub(half_bw);
            let hi = (i + half_bw).min(n - 1);
            for j in lo..=hi {
                b.set(i, j, m[(i, j)]);
            }
        }
        b
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            let lo = i.saturating_sub(self.half_bw);
            let hi = (i + self.half_bw).min(self.dim - 1);
            for j in lo..=hi {
                m[(i, j)] = self.get(i, j);
            }
        }
        m
    }

    /// Rescale column j by values[j]; this is exactly multiplication on the
    /// right by the diagonal resolvent.
    pub fn scale_columns(&self, resolvent: &DiagonalResolvent) -> Self {
        assert_eq!(self.dim, resolvent.dim());
        let mut out = self.clone();
        let vals = resolvent.values();
        for i in 0..self.dim {
            let lo = i.saturating_sub(self.half_bw);
            let hi = (i + self.half_bw).min(self.dim - 1);
            for (j, &v) in vals.iter().enumerate().take(hi + 1).skip(lo) {
                out.set(i, j, self.get(i, j) * v);
            }
        }
        out
    }

    /// Banded product; the result bandwidth is the sum of the operands'.
    pub fn mul(&self, other: &Banded) -> Banded {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let hw = (self.half_bw + other.half_bw).min(n.saturating_sub(1));
        let mut out = Banded::zeros(n, hw);
        for i in 0..n {
            let jlo = i.saturating_sub(hw);
            let jhi = (i + hw).min(n - 1);
            for j in jlo..=jhi {
                // contributing k must satisfy |i-k| <= self.half_bw and |k-j| <= other.half_bw
                let klo = i
                    .saturating_sub(self.half_bw)
                    .max(j.saturating_sub(other.half_bw));
                let khi = (i + self.half_bw).min(j + other.half_bw).min(n - 1);
                let mut acc = Complex64::new(0.0, 0.0);
                for k in klo..=khi {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        let mut acc = KahanComplexSum::new();
        for i in 0..self.dim {
            acc.add(self.get(i, i));
        }
        acc.value()
    }
}
