use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMatrix;
use crate::math;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Compressed sparse row matrix with sorted column indices and no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(n);
        let mut vals = Vec::with_capacity(n);
        row_ptr.push(0);
        for (i, &v) in diag.iter().enumerate() {
            if v != ZERO {
                cols.push(i);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            nrows: n,
            ncols: n,
            row_ptr,
            cols,
            vals,
        }
    }

    /// Builds a matrix from `(row, col, value)` entries. Duplicates are summed
    /// and exact zeros dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(entries.len());
        let mut rows = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        let mut out_cols = Vec::with_capacity(cols.len());
        let mut out_vals = Vec::with_capacity(vals.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != ZERO {
                row_ptr[r + 1] += 1;
                out_cols.push(c);
                out_vals.push(v);
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            cols: out_cols,
            vals: out_vals,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&col) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => ZERO,
        }
    }

    /// Stored entries of one row as `(col, value)`.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    /// All stored entries as `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    /// Diagonal entries (square matrices only).
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(r, c, _)| r == c)
    }

    /// `y = A x`
    pub fn mul_vec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yr = acc;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn matmul(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let mut acc = vec![ZERO; other.ncols];
        let mut mark = vec![usize::MAX; other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..self.nrows {
            touched.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if mark[c] != r {
                        mark[c] = r;
                        acc[c] = ZERO;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != ZERO {
                    cols.push(c);
                    vals.push(acc[c]);
                }
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            row_ptr,
            cols,
            vals,
        }
    }

    /// `self + alpha * other`
    pub fn add_scaled(&self, other: &CsrMatrix, alpha: Complex64) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let entries = self
            .iter()
            .chain(other.iter().map(|(r, c, v)| (r, c, alpha * v)));
        CsrMatrix::from_triplets(self.nrows, self.ncols, entries)
    }

    pub fn scaled(&self, alpha: Complex64) -> CsrMatrix {
        CsrMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.iter().map(|(r, c, v)| (r, c, alpha * v)),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CsrMatrix {
        CsrMatrix::from_triplets(
            self.ncols,
            self.nrows,
            self.iter().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| math::cabs(*v)).fold(0.0, f64::max)
    }

    /// Infinity norm (largest absolute row sum); bounds the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|r| self.row(r).map(|(_, v)| math::cabs(v)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|` over all elements.
    pub fn hermiticity_residual(&self) -> f64 {
        self.add_scaled(&self.adjoint(), Complex64::new(-1.0, 0.0))
            .max_abs()
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    /// `A M` for dense `M`.
    pub fn mul_dense(&self, m: &CMatrix) -> CMatrix {
        assert_eq!(self.ncols, m.nrows());
        let mut out = CMatrix::zeros(self.nrows, m.ncols());
        for r in 0..self.nrows {
            let out_row = out.row_mut(r);
            for (k, a) in self.row(r) {
                for (o, b) in out_row.iter_mut().zip(m.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `M A` for dense `M`.
    pub fn dense_mul(&self, m: &CMatrix) -> CMatrix {
        assert_eq!(m.ncols(), self.nrows);
        let mut out = CMatrix::zeros(m.nrows(), self.ncols);
        for i in 0..m.nrows() {
            let m_row = m.row(i);
            let out_row = out.row_mut(i);
            for (k, &mk) in m_row.iter().enumerate() {
                if mk == ZERO {
                    continue;
                }
                for (c, a) in self.row(k) {
                    out_row[c] += mk * a;
                }
            }
        }
        out
    }
}
