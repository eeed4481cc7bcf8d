//! Dense row-major matrices over f64.
//!
//! Everything downstream (graph operators, recurrent cells, the correlation
//! loss) is built on this type. 64-bit floats throughout: the whitening step
//! of the correlation loss is too ill-conditioned for f32.

use crate::error::{CgmError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CgmError::Dimension(format!(
                "data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Standard product `self * b`.
    pub fn matmul(&self, b: &Matrix) -> Result<Matrix> {
        if self.cols != b.rows {
            return Err(CgmError::Dimension(format!(
                "matmul: lhs is {}x{}, rhs is {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = vec![0.0; self.rows * b.cols];
        for i in 0..self.rows {
            let arow = &self.data[i * self.cols..(i + 1) * self.cols];
            let orow = &mut out[i * b.cols..(i + 1) * b.cols];
            for (k, &aik) in arow.iter().enumerate() {
                let brow = &b.data[k * b.cols..(k + 1) * b.cols];
                for (o, &bkj) in orow.iter_mut().zip(brow) {
                    *o += aik * bkj;
                }
            }
        }
        Ok(Matrix { rows: self.rows, cols: b.cols, data: out })
    }

    /// `self * bᵀ` without materializing the transpose.
    pub fn matmul_nt(&self, b: &Matrix) -> Result<Matrix> {
        if self.cols != b.cols {
            return Err(CgmError::Dimension(format!(
                "matmul_nt: lhs is {}x{}, rhs is {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = vec![0.0; self.rows * b.rows];
        for i in 0..self.rows {
            let arow = &self.data[i * self.cols..(i + 1) * self.cols];
            for j in 0..b.rows {
                let brow = &b.data[j * b.cols..(j + 1) * b.cols];
                out[i * b.rows + j] = arow.iter().zip(brow).map(|(x, y)| x * y).sum();
            }
        }
        Ok(Matrix { rows: self.rows, cols: b.rows, data: out })
    }

    /// `selfᵀ * b` without materializing the transpose.
    pub fn matmul_tn(&self, b: &Matrix) -> Result<Matrix> {
        if self.rows != b.rows {
            return Err(CgmError::Dimension(format!(
                "matmul_tn: lhs is {}x{}, rhs is {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = vec![0.0; self.cols * b.cols];
        for k in 0..self.rows {
            let arow = &self.data[k * self.cols..(k + 1) * self.cols];
            let brow = &b.data[k * b.cols..(k + 1) * b.cols];
            for (i, &aki) in arow.iter().enumerate() {
                let orow = &mut out[i * b.cols..(i + 1) * b.cols];
                for (o, &bkj) in orow.iter_mut().zip(brow) {
                    *o += aki * bkj;
                }
            }
        }
        Ok(Matrix { rows: self.cols, cols: b.cols, data: out })
    }

    pub fn add(&self, b: &Matrix) -> Result<Matrix> {
        self.zip_with(b, "add", |x, y| x + y)
    }

    pub fn sub(&self, b: &Matrix) -> Result<Matrix> {
        self.zip_with(b, "sub", |x, y| x - y)
    }

    pub fn hadamard(&self, b: &Matrix) -> Result<Matrix> {
        self.zip_with(b, "hadamard", |x, y| x * y)
    }

    fn zip_with(&self, b: &Matrix, name: &str, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != b.shape() {
            return Err(CgmError::Dimension(format!(
                "{}: lhs is {}x{}, rhs is {}x{}",
                name, self.rows, self.cols, b.rows, b.cols
            )));
        }
        let data = self.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Matrix {
        self.map(|x| x * c)
    }

    /// In-place `self += c * b`. Shapes must already agree.
    pub fn axpy(&mut self, c: f64, b: &Matrix) {
        debug_assert_eq!(self.shape(), b.shape());
        for (x, &y) in self.data.iter_mut().zip(&b.data) {
            *x += c * y;
        }
    }

    pub fn trace(&self) -> f64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.data[i * self.cols + i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Horizontal concatenation; all parts must share the row count.
    pub fn concat_cols(parts: &[&Matrix]) -> Result<Matrix> {
        if parts.is_empty() {
            return Err(CgmError::Dimension("concat_cols: no parts".into()));
        }
        let rows = parts[0].rows;
        for p in parts {
            if p.rows != rows {
                return Err(CgmError::Dimension(format!(
                    "concat_cols: row counts differ ({} vs {})",
                    rows, p.rows
                )));
            }
        }
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            let mut off = 0;
            for p in parts {
                out.row_mut(i)[off..off + p.cols].copy_from_slice(p.row(i));
                off += p.cols;
            }
        }
        Ok(out)
    }

    /// Vertical concatenation; all parts must share the column count.
    pub fn concat_rows(parts: &[&Matrix]) -> Result<Matrix> {
        if parts.is_empty() {
            return Err(CgmError::Dimension("concat_rows: no parts".into()));
        }
        let cols = parts[0].cols;
        let mut data = Vec::new();
        for p in parts {
            if p.cols != cols {
                return Err(CgmError::Dimension(format!(
                    "concat_rows: column counts differ ({} vs {})",
                    cols, p.cols
                )));
            }
            data.extend_from_slice(&p.data);
        }
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        Ok(Matrix { rows, cols, data })
    }

    /// New matrix made of the given rows in order (rows may repeat).
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(indices.len(), self.cols);
        for (k, &i) in indices.iter().enumerate() {
            out.row_mut(k).copy_from_slice(self.row(i));
        }
        out
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
