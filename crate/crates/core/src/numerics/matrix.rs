use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest matrix accepted by the dense inverse routine.
pub const MAX_DENSE_INVERSE: usize = 12;

/// Relative pivot threshold below which a matrix is treated as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-13;

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {bad}")));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.iter_rows().map(|r| super::dot(r, x)).collect()
    }

    /// `selfᵀ * y`.
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &c) in self.iter_rows().zip(y) {
            super::axpy(&mut out, c, r);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Max-absolute-row-sum norm.
    pub fn inf_norm(&self) -> f64 {
        self.iter_rows()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Numerical rank from the singular values, relative tolerance `rel_tol`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let sv = self.to_nalgebra().svd(false, false).singular_values;
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * top).count()
    }

    /// Smallest singular value.
    pub fn min_singular_value(&self) -> f64 {
        let sv = self.to_nalgebra().svd(false, false).singular_values;
        sv.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Minimum-norm least-squares solution of `self * x = b`.
    pub fn least_squares(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let svd = self.to_nalgebra().svd(true, true);
        let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let rhs = DVector::from_column_slice(b);
        let x = svd
            .solve(&rhs, 1e-12 * top.max(f64::MIN_POSITIVE))
            .map_err(|e| Error::NonFinite(e.to_string()))?;
        Ok(x.iter().cloned().collect())
    }

    /// Inverse by Gauss-Jordan elimination with full pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        if self.cols != n {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if n > MAX_DENSE_INVERSE {
            return Err(Error::TooLarge(n));
        }
        let threshold = SINGULAR_THRESHOLD * self.max_abs();
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(n).data;
        // col_perm[k] = original column that ended up in position k
        let mut col_perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (mut pr, mut pc, mut best) = (k, k, -1.0);
            for i in k..n {
                for j in k..n {
                    let v = a[i * n + j].abs();
                    if v > best {
                        best = v;
                        pr = i;
                        pc = j;
                    }
                }
            }
            if best <= threshold || best == 0.0 {
                return Err(Error::Singular { pivot: best, threshold });
            }
            if pr != k {
                for j in 0..n {
                    a.swap(pr * n + j, k * n + j);
                    inv.swap(pr * n + j, k * n + j);
                }
            }
            if pc != k {
                for i in 0..n {
                    a.swap(i * n + pc, i * n + k);
                }
                col_perm.swap(pc, k);
            }
            let piv = a[k * n + k];
            for j in 0..n {
                a[k * n + j] /= piv;
                inv[k * n + j] /= piv;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a[i * n + k];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] -= factor * a[k * n + j];
                    inv[i * n + j] -= factor * inv[k * n + j];
                }
            }
        }
        // A·Q has inverse `inv`, so A⁻¹ = Q·inv: row k of inv belongs to row col_perm[k].
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            let target = col_perm[k];
            out[target * n..(target + 1) * n].copy_from_slice(&inv[k * n..(k + 1) * n]);
        }
        Matrix::new(n, n, out)
    }
}

/// Max-absolute-row-sum norm of `m⁻¹`.
pub fn exact_inf_norm_inverse(m: &Matrix) -> Result<f64> {
    Ok(m.inverse()?.inf_norm())
}

/// Orthonormal basis of the Euclidean complement of `f`, i.e. of `ker f`.
///
/// Built from the Householder reflector mapping `f` onto the first axis: its
/// remaining `n − 1` columns are orthonormal and orthogonal to `f`.
pub fn null_space_basis(f: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = f.len();
    let sigma = super::norm2(f);
    if sigma == 0.0 {
        return Err(Error::ZeroFunctional);
    }
    let mut u = f.to_vec();
    let sign = if f[0] >= 0.0 { 1.0 } else { -1.0 };
    u[0] += sign * sigma;
    let uu = super::dot(&u, &u);
    Ok((1..n)
        .map(|k| {
            let scale = 2.0 * u[k] / uu;
            (0..n)
                .map(|i| {
                    let delta = if i == k { 1.0 } else { 0.0 };
                    delta - scale * u[i]
                })
                .collect()
        })
        .collect())
}

/// Column-per-node Vandermonde matrix: entry `(r, c)` is `nodes[c]^r`.
pub fn vandermonde(nodes: &[f64]) -> Matrix {
    let n = nodes.len();
    let mut data = vec![0.0; n * n];
    for (c, &x) in nodes.iter().enumerate() {
        let mut power = 1.0;
        for r in 0..n {
            data[r * n + c] = power;
            power *= x;
        }
    }
    Matrix { rows: n, cols: n, data }
}
