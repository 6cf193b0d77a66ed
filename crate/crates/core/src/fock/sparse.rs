//! Row-compressed kernels used internally to apply the (very sparse) ladder
//! polynomials without dense `O(n³)` products. Storage of public operators
//! stays dense; these are built from them on demand. Accumulation order is
//! fixed, so results do not depend on anything but the inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct SparseOp {
    n: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOp {
    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let n = m.nrows();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter_map(|j| {
                        let v = m[(i, j)];
                        (v != Complex64::new(0.0, 0.0)).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        Self { n, rows }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, Complex64)]) -> Self {
        let mut by_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
        for &(i, j, v) in entries {
            by_row[i].push((j, v));
        }
        Self::collect_rows(n, |i, acc, touched| {
            for &(j, v) in &by_row[i] {
                acc[j] += v;
                touched.push(j);
            }
        })
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| vec![(i, Complex64::new(1.0, 0.0))]).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = vec![Vec::new(); self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                rows[j].push((i, v.conj()));
            }
        }
        Self { n: self.n, rows }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&(j, v)| (j, v * c)).collect())
                .collect(),
        }
    }

    // Builds each output row in a scratch buffer; entries come out in column order.
    fn collect_rows<F>(n: usize, mut fill: F) -> Self
    where
        F: FnMut(usize, &mut [Complex64], &mut Vec<usize>),
    {
        let zero = Complex64::new(0.0, 0.0);
        let mut scratch = vec![zero; n];
        let mut touched = Vec::new();
        let rows = (0..n)
            .map(|i| {
                fill(i, &mut scratch, &mut touched);
                touched.sort_unstable();
                touched.dedup();
                let row = touched
                    .iter()
                    .filter(|&&j| scratch[j] != zero)
                    .map(|&j| (j, scratch[j]))
                    .collect();
                for &j in &touched {
                    scratch[j] = zero;
                }
                touched.clear();
                row
            })
            .collect();
        Self { n, rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::collect_rows(self.n, |i, acc, touched| {
            for op in [self, other] {
                for &(j, v) in &op.rows[i] {
                    acc[j] += v;
                    touched.push(j);
                }
            }
        })
    }

    /// `self · other`
    pub fn mul(&self, other: &Self) -> Self {
        Self::collect_rows(self.n, |i, acc, touched| {
            for &(k, a) in &self.rows[i] {
                for &(j, b) in &other.rows[k] {
                    acc[j] += a * b;
                    touched.push(j);
                }
            }
        })
    }

    pub fn mul_vec(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(
            self.n,
            self.rows
                .iter()
                .map(|row| row.iter().map(|&(j, a)| a * v[j]).sum::<Complex64>()),
        )
    }

    /// `self · m`
    pub fn left_mul(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.n, m.ncols());
        for c in 0..m.ncols() {
            let col = m.column(c);
            for (i, row) in self.rows.iter().enumerate() {
                out[(i, c)] = row.iter().map(|&(k, a)| a * col[k]).sum();
            }
        }
        out
    }

    /// `m · self`
    pub fn right_mul(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(m.nrows(), self.n);
        for (k, row) in self.rows.iter().enumerate() {
            let src = m.column(k);
            for &(j, s) in row {
                let mut dst = out.column_mut(j);
                dst.axpy(s, &src, Complex64::new(1.0, 0.0));
            }
        }
        out
    }

    /// `Tr(m · self)`
    pub fn trace_with(&self, m: &DMatrix<Complex64>) -> Complex64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(k, row)| row.iter().map(|&(i, v)| m[(i, k)] * v).sum::<Complex64>())
            .sum()
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm of a
    /// Hermitian operator.
    pub fn inf_norm(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
