use alloc::vec;
use alloc::vec::Vec;

use super::symmetric_eigenvalues;
use crate::math;

/// Dense row-major real matrix for the small least-squares problems in fitting.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * x[c]).sum())
            .collect()
    }

    /// `A^T y`
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c) * y[r]).sum())
            .collect()
    }

    /// `A^T A`
    pub fn gram(&self) -> RealMatrix {
        RealMatrix::from_fn(self.cols, self.cols, |i, j| {
            (0..self.rows).map(|r| self.get(r, i) * self.get(r, j)).sum()
        })
    }

    /// Keeps only the listed columns, in order.
    pub fn select_columns(&self, columns: &[usize]) -> RealMatrix {
        RealMatrix::from_fn(self.rows, columns.len(), |r, c| self.get(r, columns[c]))
    }

    /// 2-norm condition number from the spectrum of `A^T A`.
    /// Infinite when the columns are linearly dependent.
    pub fn condition_number(&self) -> f64 {
        if self.cols == 0 {
            return 1.0;
        }
        let g = self.gram();
        let eig = symmetric_eigenvalues(self.cols, g.data);
        let max = eig[eig.len() - 1];
        let min = eig[0];
        if max <= 0.0 {
            return f64::INFINITY;
        }
        if min <= max * 1e-32 {
            return f64::INFINITY;
        }
        math::sqrt(max / min)
    }

    /// Minimum-norm-residual solution of `A x = b` by Householder QR.
    ///
    /// Columns whose pivot falls below `1e-13` of the largest column norm are
    /// treated as dependent and their coefficient set to zero.
    pub fn lstsq(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.rows);
        let (m, n) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut rhs = b.to_vec();
        let k = m.min(n);
        let col_scale = (0..n)
            .map(|c| math::sqrt((0..m).map(|r| a[r * n + c] * a[r * n + c]).sum::<f64>()))
            .fold(0.0, f64::max);
        let mut diag = vec![0.0; k];
        for j in 0..k {
            let norm = math::sqrt((j..m).map(|r| a[r * n + j] * a[r * n + j]).sum::<f64>());
            if norm == 0.0 {
                diag[j] = 0.0;
                continue;
            }
            let alpha = if a[j * n + j] > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = (j..m).map(|r| a[r * n + j]).collect();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            if vnorm2 == 0.0 {
                diag[j] = alpha;
                continue;
            }
            for c in j..n {
                let dot: f64 = (j..m).map(|r| v[r - j] * a[r * n + c]).sum();
                let f = 2.0 * dot / vnorm2;
                for r in j..m {
                    a[r * n + c] -= f * v[r - j];
                }
            }
            let dot: f64 = (j..m).map(|r| v[r - j] * rhs[r]).sum();
            let f = 2.0 * dot / vnorm2;
            for r in j..m {
                rhs[r] -= f * v[r - j];
            }
            diag[j] = a[j * n + j];
        }
        let mut x = vec![0.0; n];
        for j in (0..k).rev() {
            if math::abs(diag[j]) <= 1e-13 * col_scale {
                x[j] = 0.0;
                continue;
            }
            let s: f64 = (j + 1..n).map(|c| a[j * n + c] * x[c]).sum();
            x[j] = (rhs[j] - s) / a[j * n + j];
        }
        x
    }
}
