//! Small dense linear algebra kernel: row-major `f64` matrices, a cyclic
//! Jacobi eigensolver for symmetric matrices, and Cholesky-based solvers
//! with iterative refinement.
//!
//! The dimension-reduction and classifier modules only ever factor symmetric
//! matrices (covariance, Gram, moment), so this is all that is needed. The
//! routines are deterministic: identical input bytes give identical output
//! bytes, which keeps serialized models reproducible.

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat {
            rows: r,
            cols: c,
            data,
        }
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

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * out.cols..(i + 1) * out.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `selfᵀ * v` without materializing the transpose.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len(), "tr_mul_vec shape mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let vi = v[i];
            if vi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Keep only the first `k` columns.
    pub fn truncate_cols(&self, k: usize) -> Mat {
        assert!(k <= self.cols);
        let mut out = Mat::zeros(self.rows, k);
        for i in 0..self.rows {
            out.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues in descending order and the matching eigenvectors
/// as matrix columns. Each eigenvector is sign-fixed so that its
/// largest-magnitude component is positive, which makes serialized bases
/// reproducible. Fails only if the sweep limit is exhausted, which does not
/// happen for finite symmetric input.
pub fn symmetric_eigen(m: &Mat) -> Result<(Vec<f64>, Mat)> {
    assert_eq!(m.rows(), m.cols(), "symmetric_eigen needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    let scale = a.frob_norm();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let target = scale * 1e-14;

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if (2.0 * off).sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::EPSILON * (a[(p, p)].abs() + a[(q, q)].abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                // Smaller-angle root of t^2 + 2 t theta - 1 = 0.
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip - s * (aiq + tau * aip);
                        a[(q, i)] = aiq + s * (aip - tau * aiq);
                        a[(p, i)] = a[(i, p)];
                        a[(i, q)] = a[(q, i)];
                    }
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip - s * (viq + tau * vip);
                    v[(i, q)] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::numerical(format!(
            "jacobi eigen decomposition did not converge in {MAX_JACOBI_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut best = 0usize;
        for i in 1..n {
            if v[(i, src)].abs() > v[(best, src)].abs() {
                best = i;
            }
        }
        let flip = if v[(best, src)] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[(i, dst)] = flip * v[(i, src)];
        }
    }
    Ok((values, vectors))
}

/// Lower Cholesky factor of a symmetric positive-definite matrix, or `None`
/// if a pivot drops below the positivity tolerance.
pub fn cholesky(m: &Mat) -> Option<Mat> {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut l = Mat::zeros(n, n);
    let tol = 1e-14 * m.frob_norm().max(f64::MIN_POSITIVE);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= tol {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / dj;
        }
    }
    Some(l)
}

fn cholesky_solve_into(l: &Mat, rhs: &Mat) -> Mat {
    let n = l.rows();
    let k = rhs.cols();
    let mut x = rhs.clone();
    // Forward substitution L y = b.
    for j in 0..n {
        for c in 0..k {
            let mut s = x[(j, c)];
            for i in 0..j {
                s -= l[(j, i)] * x[(i, c)];
            }
            x[(j, c)] = s / l[(j, j)];
        }
    }
    // Back substitution Lᵀ x = y.
    for j in (0..n).rev() {
        for c in 0..k {
            let mut s = x[(j, c)];
            for i in (j + 1)..n {
                s -= l[(i, j)] * x[(i, c)];
            }
            x[(j, c)] = s / l[(j, j)];
        }
    }
    x
}

/// Solve `m x = rhs` for symmetric positive-definite `m` via Cholesky with
/// a few steps of iterative refinement. Refinement pushes the residual to
/// machine level even when `m` is badly conditioned.
pub fn solve_spd(m: &Mat, rhs: &Mat) -> Option<Mat> {
    let l = cholesky(m)?;
    let mut x = cholesky_solve_into(&l, rhs);
    for _ in 0..3 {
        let mut resid = rhs.clone();
        let mx = m.matmul(&x);
        for (r, v) in resid.data.iter_mut().zip(mx.data.iter()) {
            *r -= v;
        }
        if resid.frob_norm() <= 1e-16 * rhs.frob_norm() {
            break;
        }
        let dx = cholesky_solve_into(&l, &resid);
        for (xi, di) in x.data.iter_mut().zip(dx.data.iter()) {
            *xi += di;
        }
    }
    Some(x)
}

/// Minimum-norm solution of `m x = rhs` for symmetric positive-semidefinite
/// `m`, via eigen decomposition. Eigenvalues below `1e-12 * lambda_max` are
/// treated as exact zeros (rank cutoff).
pub fn solve_sym_pseudo(m: &Mat, rhs: &Mat) -> Result<Mat> {
    let (values, vectors) = symmetric_eigen(m)?;
    let lmax = values.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = 1e-12 * lmax;
    // x = V diag(1/λ_i on kept) Vᵀ rhs
    let vt_rhs = vectors.transpose().matmul(rhs);
    let mut scaled = vt_rhs;
    for (i, &lam) in values.iter().enumerate() {
        let inv = if lam > cutoff { 1.0 / lam } else { 0.0 };
        for c in 0..scaled.cols() {
            scaled[(i, c)] *= inv;
        }
    }
    Ok(vectors.matmul(&scaled))
}
