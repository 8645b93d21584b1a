//! Linear dimension reduction of feature vectors.
//!
//! Principal component analysis on the covariance matrix `C = 1/N Σ (v−μ)(v−μ)ᵀ`
//! is the primary method: the eigenvectors belonging to the L′ greatest
//! eigenvalues form the projection basis, which minimizes the reconstruction
//! error among all rank-L′ linear maps. An SVD variant decomposes the raw
//! (uncentered) N×L data matrix instead; the two are closely related but not
//! identical unless the data is mean-free.
//!
//! When N < L, the spectrum is computed through the N×N Gram matrix of the
//! centered data and mapped back, which is mathematically identical and
//! avoids an L×L eigenproblem.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMethod {
    Pca,
    Svd,
}

impl ReductionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReductionMethod::Pca => "pca",
            ReductionMethod::Svd => "svd",
        }
    }
}

impl std::str::FromStr for ReductionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pca" => Ok(ReductionMethod::Pca),
            "svd" => Ok(ReductionMethod::Svd),
            other => Err(Error::config(format!(
                "unknown reduction method '{other}' (expected pca|svd)"
            ))),
        }
    }
}

/// Fitted projection: mean vector, orthonormal basis of the top L′
/// directions (columns), and the full retained eigenvalue spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionModel {
    method: ReductionMethod,
    mean: Vec<f64>,
    basis: Mat,
    eigenvalues: Vec<f64>,
    l: usize,
    l_prime: usize,
}

/// Eigenvalues this far below the largest one count as zero rank.
const RANK_CUTOFF: f64 = 1e-12;

impl ProjectionModel {
    pub fn from_parts(
        method: ReductionMethod,
        mean: Vec<f64>,
        basis: Mat,
        eigenvalues: Vec<f64>,
        l: usize,
        l_prime: usize,
    ) -> Result<Self> {
        let model = ProjectionModel {
            method,
            mean,
            basis,
            eigenvalues,
            l,
            l_prime,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn method(&self) -> ReductionMethod {
        self.method
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn input_dim(&self) -> usize {
        self.l
    }

    pub fn output_dim(&self) -> usize {
        self.l_prime
    }

    /// Check orthonormality of the basis, ordering and non-negativity of
    /// the spectrum, and dimension consistency.
    pub fn validate(&self) -> Result<()> {
        if self.l_prime < 1 || self.l_prime > self.l {
            return Err(Error::config(format!(
                "projection width {} out of range for dimension {}",
                self.l_prime, self.l
            )));
        }
        if self.basis.rows() != self.l || self.basis.cols() != self.l_prime {
            return Err(Error::input(format!(
                "basis is {}x{}, expected {}x{}",
                self.basis.rows(),
                self.basis.cols(),
                self.l,
                self.l_prime
            )));
        }
        if self.mean.len() != self.l {
            return Err(Error::input("mean vector dimension mismatch".to_string()));
        }
        if !self.basis.is_finite() || !self.mean.iter().all(|x| x.is_finite()) {
            return Err(Error::numerical("non-finite projection model".to_string()));
        }
        for j in 0..self.l_prime {
            for k in j..self.l_prime {
                let d = linalg::dot(&self.basis.col(j), &self.basis.col(k));
                let want = if j == k { 1.0 } else { 0.0 };
                if (d - want).abs() > 1e-9 {
                    return Err(Error::numerical(format!(
                        "basis columns {j},{k} not orthonormal (dot {d:.3e})"
                    )));
                }
            }
        }
        let mut prev = f64::INFINITY;
        for &ev in &self.eigenvalues {
            if ev > prev || ev < 0.0 || !ev.is_finite() {
                return Err(Error::numerical(
                    "eigenvalues must be finite, non-negative and descending".to_string(),
                ));
            }
            prev = ev;
        }
        Ok(())
    }

    /// Map a vector into the reduced space: `basisᵀ (v − mean)`. The SVD
    /// variant stores a zero mean, so the same formula applies.
    pub fn project(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.l {
            return Err(Error::input(format!(
                "cannot project a vector of dimension {} with an L={} model",
                v.len(),
                self.l
            )));
        }
        let centered: Vec<f64> = v.iter().zip(&self.mean).map(|(x, m)| x - m).collect();
        Ok(self.basis.tr_mul_vec(&centered))
    }

    /// Map back into the original space: `mean + basis · r`.
    pub fn reconstruct(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.l_prime {
            return Err(Error::input(
                "reduced vector dimension mismatch".to_string(),
            ));
        }
        let mut v = self.basis.mul_vec(r);
        for (x, m) in v.iter_mut().zip(&self.mean) {
            *x += m;
        }
        Ok(v)
    }

    /// Same model restricted to its first `l_prime` basis columns.
    pub fn truncated(&self, l_prime: usize) -> Result<ProjectionModel> {
        if l_prime < 1 || l_prime > self.l_prime {
            return Err(Error::config(format!(
                "cannot truncate a width-{} model to {}",
                self.l_prime, l_prime
            )));
        }
        Ok(ProjectionModel {
            method: self.method,
            mean: self.mean.clone(),
            basis: self.basis.truncate_cols(l_prime),
            eigenvalues: self.eigenvalues.clone(),
            l: self.l,
            l_prime,
        })
    }

    /// Reconstruction error in percent when keeping `l_prime` directions:
    /// the discarded share of the eigenvalue mass.
    pub fn reconstruction_error_percent(&self, l_prime: usize) -> Result<f64> {
        let total: f64 = self.eigenvalues.iter().sum();
        if total <= 0.0 {
            return Err(Error::numerical(
                "zero total variance: reconstruction error undefined".to_string(),
            ));
        }
        let kept: f64 = self.eigenvalues.iter().take(l_prime).sum();
        Ok(100.0 * (1.0 - kept / total))
    }

    /// Reconstruction-error curve over a list of widths.
    pub fn error_curve(&self, l_primes: &[usize]) -> Result<Vec<(usize, f64)>> {
        l_primes
            .iter()
            .map(|&lp| Ok((lp, self.reconstruction_error_percent(lp)?)))
            .collect()
    }
}

fn check_rows(rows: &[Vec<f64>], l_prime: usize) -> Result<usize> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::input("need at least 2 vectors to fit a projection"));
    }
    let l = rows[0].len();
    if l == 0 {
        return Err(Error::input("cannot fit a projection on empty vectors"));
    }
    if rows.iter().any(|r| r.len() != l) {
        return Err(Error::input("vectors have inconsistent dimensions"));
    }
    if l_prime < 1 || l_prime > l.min(n) {
        return Err(Error::config(format!(
            "l_prime {l_prime} out of range: must be within 1..={} for {n} vectors of dimension {l}",
            l.min(n)
        )));
    }
    Ok(l)
}

fn column_means(rows: &[Vec<f64>], l: usize) -> Vec<f64> {
    let n = rows.len() as f64;
    let mut mean = vec![0.0; l];
    for row in rows {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    mean
}

/// Fit principal components: keep the `l_prime` eigenvectors of the
/// covariance matrix belonging to its greatest eigenvalues. The retained
/// spectrum always covers the full rank, so reconstruction-error curves
/// can be computed for any width afterwards.
pub fn fit_pca(rows: &[Vec<f64>], l_prime: usize) -> Result<ProjectionModel> {
    fit_pca_inner(rows, l_prime, false)
}

/// Like [`fit_pca`] but clamps the requested width to what the data rank
/// supports, instead of failing. Used by evaluation sweeps.
pub fn fit_pca_capped(rows: &[Vec<f64>], cap: usize) -> Result<ProjectionModel> {
    let n = rows.len();
    let l = rows.first().map_or(0, Vec::len);
    fit_pca_inner(rows, cap.min(l.min(n)).max(1), true)
}

fn fit_pca_inner(rows: &[Vec<f64>], l_prime: usize, clamp: bool) -> Result<ProjectionModel> {
    let l = check_rows(rows, l_prime)?;
    let mean = column_means(rows, l);
    let centered: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();
    let (eigenvalues, basis, width) = spectrum_of(&centered, l, l_prime, clamp)?;
    let model =
        ProjectionModel::from_parts(ReductionMethod::Pca, mean, basis, eigenvalues, l, width)?;
    verify_residuals(&model, &centered)?;
    Ok(model)
}

/// Fit the SVD variant on the raw data matrix: the projection basis is the
/// top right-singular vectors, the eigenvalue slots hold squared singular
/// values divided by N, and the stored mean is zero.
pub fn fit_svd(rows: &[Vec<f64>], l_prime: usize) -> Result<ProjectionModel> {
    fit_svd_inner(rows, l_prime, false, false)
}

/// SVD with optional centering; centered SVD spans the same subspace as
/// PCA and exists for equivalence checks.
pub fn fit_svd_opts(rows: &[Vec<f64>], l_prime: usize, center: bool) -> Result<ProjectionModel> {
    fit_svd_inner(rows, l_prime, center, false)
}

/// Rank-clamping counterpart of [`fit_pca_capped`].
pub fn fit_svd_capped(rows: &[Vec<f64>], cap: usize) -> Result<ProjectionModel> {
    let n = rows.len();
    let l = rows.first().map_or(0, Vec::len);
    fit_svd_inner(rows, cap.min(l.min(n)).max(1), false, true)
}

fn fit_svd_inner(
    rows: &[Vec<f64>],
    l_prime: usize,
    center: bool,
    clamp: bool,
) -> Result<ProjectionModel> {
    let l = check_rows(rows, l_prime)?;
    let mean = if center {
        column_means(rows, l)
    } else {
        vec![0.0; l]
    };
    let shifted: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();
    let (eigenvalues, basis, width) = spectrum_of(&shifted, l, l_prime, clamp)?;
    let model =
        ProjectionModel::from_parts(ReductionMethod::Svd, mean, basis, eigenvalues, l, width)?;
    verify_residuals(&model, &shifted)?;
    Ok(model)
}

/// Descending spectrum of `1/N ZᵀZ` plus the first `l_prime` eigenvectors,
/// choosing the L×L or the N×N (Gram) route by size. The Gram route cannot
/// produce basis directions beyond the data rank; `clamp` narrows the
/// width in that case instead of failing.
fn spectrum_of(
    z: &[Vec<f64>],
    l: usize,
    l_prime: usize,
    clamp: bool,
) -> Result<(Vec<f64>, Mat, usize)> {
    let n = z.len();
    let nf = n as f64;
    if l <= n {
        let zmat = Mat::from_rows(z);
        let mut cov = zmat.transpose().matmul(&zmat);
        for v in 0..l {
            for w in 0..l {
                cov[(v, w)] /= nf;
            }
        }
        let (mut values, vectors) = linalg::symmetric_eigen(&cov)?;
        clamp_spectrum(&mut values);
        Ok((values, vectors.truncate_cols(l_prime), l_prime))
    } else {
        let mut gram = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let d = linalg::dot(&z[i], &z[j]) / nf;
                gram[(i, j)] = d;
                gram[(j, i)] = d;
            }
        }
        let (mut values, vectors) = linalg::symmetric_eigen(&gram)?;
        clamp_spectrum(&mut values);
        let lmax = values.first().copied().unwrap_or(0.0);
        let positive = values.iter().filter(|&&v| v > RANK_CUTOFF * lmax).count();
        let width = if l_prime > positive {
            if !clamp || positive == 0 {
                return Err(Error::numerical(format!(
                    "requested width {l_prime} exceeds the data rank {positive}"
                )));
            }
            positive
        } else {
            l_prime
        };
        // Map Gram eigenvectors u back to input space: b = Zᵀu / sqrt(Nλ).
        let mut basis = Mat::zeros(l, width);
        for j in 0..width {
            let u = vectors.col(j);
            let mut b = vec![0.0; l];
            for (i, row) in z.iter().enumerate() {
                let ui = u[i];
                if ui == 0.0 {
                    continue;
                }
                for (bk, &xk) in b.iter_mut().zip(row) {
                    *bk += ui * xk;
                }
            }
            let scale = 1.0 / (nf * values[j]).sqrt();
            let mut best = 0usize;
            for (i, &x) in b.iter().enumerate() {
                if x.abs() > b[best].abs() {
                    best = i;
                }
            }
            let sign = if b[best] < 0.0 { -1.0 } else { 1.0 };
            for (i, &x) in b.iter().enumerate() {
                basis[(i, j)] = sign * scale * x;
            }
        }
        Ok((values, basis, width))
    }
}

fn clamp_spectrum(values: &mut [f64]) {
    let lmax = values.first().copied().unwrap_or(0.0).max(0.0);
    for v in values.iter_mut() {
        if *v < RANK_CUTOFF * lmax {
            *v = v.max(0.0);
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
}

/// Verify `C b = λ b` for every kept eigenpair without forming C:
/// `C b = 1/N Zᵀ(Z b)`.
fn verify_residuals(model: &ProjectionModel, z: &[Vec<f64>]) -> Result<()> {
    let lmax = model.eigenvalues.first().copied().unwrap_or(0.0);
    if lmax == 0.0 {
        return Ok(());
    }
    let nf = z.len() as f64;
    for j in 0..model.output_dim() {
        let b = model.basis.col(j);
        let mut cb = vec![0.0; b.len()];
        for row in z {
            let zb = linalg::dot(row, &b);
            if zb == 0.0 {
                continue;
            }
            for (c, &x) in cb.iter_mut().zip(row) {
                *c += zb * x;
            }
        }
        let lambda = model.eigenvalues[j];
        let mut resid = 0.0;
        for (c, bj) in cb.iter().zip(&b) {
            let r = c / nf - lambda * bj;
            resid += r * r;
        }
        if resid.sqrt() > 1e-6 * lmax {
            return Err(Error::numerical(format!(
                "defective eigenpair {j}: residual {:.3e} exceeds 1e-6 of the leading eigenvalue",
                resid.sqrt()
            )));
        }
    }
    Ok(())
}

/// Mean squared reconstruction residual over the data as a share of total
/// variance, in percent; must agree with the spectral ratio.
pub fn empirical_reconstruction_error(
    model: &ProjectionModel,
    rows: &[Vec<f64>],
    l_prime: usize,
) -> Result<f64> {
    if l_prime > model.output_dim() {
        return Err(Error::config(format!(
            "model keeps {} directions, cannot evaluate width {l_prime}",
            model.output_dim()
        )));
    }
    let total: f64 = model.eigenvalues.iter().sum();
    if total <= 0.0 {
        return Err(Error::numerical("zero total variance".to_string()));
    }
    let n = rows.len() as f64;
    let mut residual = 0.0;
    for row in rows {
        let centered: Vec<f64> = row.iter().zip(model.mean()).map(|(x, m)| x - m).collect();
        let mut rec = vec![0.0; centered.len()];
        for j in 0..l_prime {
            let b = model.basis.col(j);
            let c = linalg::dot(&centered, &b);
            for (r, &bj) in rec.iter_mut().zip(&b) {
                *r += c * bj;
            }
        }
        for (x, r) in centered.iter().zip(&rec) {
            residual += (x - r) * (x - r);
        }
    }
    Ok(100.0 * (residual / n) / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn cross_fixture() -> Vec<Vec<f64>> {
        vec![
            vec![2.0, 0.0, 0.0],
            vec![-2.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, -1.0, 0.0],
        ]
    }

    #[test]
    fn pca_on_hand_computed_covariance() {
        // Covariance of (±2,0,0),(0,±1,0) is diag(2, 0.5, 0).
        let model = fit_pca(&cross_fixture(), 1).unwrap();
        assert_eq!(model.eigenvalues().len(), 3);
        assert_close(model.eigenvalues()[0], 2.0, 1e-12);
        assert_close(model.eigenvalues()[1], 0.5, 1e-12);
        assert_close(model.eigenvalues()[2], 0.0, 1e-12);
        // The kept direction is the x axis, sign-fixed positive.
        assert_close(model.basis()[(0, 0)], 1.0, 1e-12);
        assert_close(model.basis()[(1, 0)], 0.0, 1e-12);
    }

    #[test]
    fn full_width_reconstruction_error_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<Vec<f64>> = (0..8)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let model = fit_pca(&rows, 3).unwrap();
        assert_close(model.reconstruction_error_percent(3).unwrap(), 0.0, 1e-9);
        assert_close(
            empirical_reconstruction_error(&model, &rows, 3).unwrap(),
            0.0,
            1e-9,
        );
    }

    #[test]
    fn error_curve_matches_ratio_formula() {
        // Spectrum (4,1,0): keeping one direction discards 1/5 = 20%.
        let rows = vec![
            vec![2.0 * 2.0f64.sqrt(), 0.0, 0.0],
            vec![-2.0 * 2.0f64.sqrt(), 0.0, 0.0],
            vec![0.0, 2.0f64.sqrt(), 0.0],
            vec![0.0, -(2.0f64.sqrt()), 0.0],
        ];
        let model = fit_pca(&rows, 3).unwrap();
        assert_close(model.eigenvalues()[0], 4.0, 1e-12);
        assert_close(model.eigenvalues()[1], 1.0, 1e-12);
        assert_close(model.reconstruction_error_percent(1).unwrap(), 20.0, 1e-9);
        assert_close(model.reconstruction_error_percent(3).unwrap(), 0.0, 1e-9);
        let curve = model.error_curve(&[1, 2, 3]).unwrap();
        assert!(curve.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
    }

    #[test]
    fn projection_of_mean_is_zero_and_basis_columns_are_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let model = fit_pca(&rows, 2).unwrap();
        let z = model.project(model.mean()).unwrap();
        assert!(z.iter().all(|x| x.abs() < 1e-12));
        // mean + basis column j projects to the unit coordinate j.
        for j in 0..2 {
            let v: Vec<f64> = model
                .mean()
                .iter()
                .enumerate()
                .map(|(i, m)| m + model.basis()[(i, j)])
                .collect();
            let z = model.project(&v).unwrap();
            for (k, &c) in z.iter().enumerate() {
                assert_close(c, if k == j { 1.0 } else { 0.0 }, 1e-10);
            }
        }
    }

    #[test]
    fn residual_norm_shrinks_with_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let model = fit_pca(&rows, 5).unwrap();
        let v: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut prev = f64::INFINITY;
        for lp in 1..=5 {
            let t = model.truncated(lp).unwrap();
            let rec = t.reconstruct(&t.project(&v).unwrap()).unwrap();
            let err: f64 = v
                .iter()
                .zip(&rec)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(err <= prev + 1e-12, "width {lp}: {err} > {prev}");
            prev = err;
        }
    }

    #[test]
    fn projection_is_non_expansive() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rows: Vec<Vec<f64>> = (0..9)
            .map(|_| (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let model = fit_pca(&rows, 3).unwrap();
        for _ in 0..50 {
            let v: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let centered_norm: f64 = v
                .iter()
                .zip(model.mean())
                .map(|(x, m)| (x - m) * (x - m))
                .sum::<f64>()
                .sqrt();
            let p = model.project(&v).unwrap();
            assert!(linalg::norm(&p) <= centered_norm + 1e-12);
        }
    }

    #[test]
    fn gram_route_agrees_with_covariance_route() {
        // N < L exercises the Gram path; compare against covariance on the
        // same data padded with extra rows to force the direct path.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let gram_model = fit_pca(&rows, 3).unwrap();

        // Direct covariance eigen decomposition on the same centered data.
        let l = 8;
        let mean = column_means(&rows, l);
        let centered: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().zip(&mean).map(|(x, m)| x - m).collect())
            .collect();
        let zmat = Mat::from_rows(&centered);
        let mut cov = zmat.transpose().matmul(&zmat);
        for i in 0..l {
            for j in 0..l {
                cov[(i, j)] /= rows.len() as f64;
            }
        }
        let (vals, vecs) = linalg::symmetric_eigen(&cov).unwrap();
        for j in 0..3 {
            assert_close(gram_model.eigenvalues()[j], vals[j], 1e-10);
            for i in 0..l {
                assert_close(gram_model.basis()[(i, j)], vecs[(i, j)], 1e-8);
            }
        }
    }

    #[test]
    fn gram_route_rejects_width_beyond_rank() {
        // Three points in a plane: centered rank 2.
        let rows = vec![
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0, 0.0],
        ];
        let err = fit_pca(&rows, 3).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)), "{err}");
        let model = fit_pca_capped(&rows, 3).unwrap();
        assert_eq!(model.output_dim(), 2);
    }

    #[test]
    fn svd_of_repeated_row_is_that_direction() {
        let r = [3.0, 0.0, 4.0];
        let rows: Vec<Vec<f64>> = (0..4).map(|_| r.to_vec()).collect();
        let model = fit_svd(&rows, 1).unwrap();
        // First right singular vector ∝ r, normalized and sign-fixed.
        assert_close(model.basis()[(0, 0)], 0.6, 1e-12);
        assert_close(model.basis()[(1, 0)], 0.0, 1e-12);
        assert_close(model.basis()[(2, 0)], 0.8, 1e-12);
        assert!(model.mean().iter().all(|&m| m == 0.0));
        // Eigenvalue slot holds σ²/N = |r|² = 25.
        assert_close(model.eigenvalues()[0], 25.0, 1e-10);
    }

    #[test]
    fn pca_and_svd_agree_on_mean_free_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut rows: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mean = column_means(&rows, 6);
        for row in &mut rows {
            for (x, m) in row.iter_mut().zip(&mean) {
                *x -= m;
            }
        }
        let pca = fit_pca(&rows, 3).unwrap();
        let svd = fit_svd(&rows, 3).unwrap();
        let p1 = pca.basis().matmul(&pca.basis().transpose());
        let p2 = svd.basis().matmul(&svd.basis().transpose());
        for i in 0..6 {
            for j in 0..6 {
                assert_close(p1[(i, j)], p2[(i, j)], 1e-8);
            }
        }
    }

    #[test]
    fn pca_and_svd_differ_on_shifted_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|_| {
                (0..6)
                    .map(|k| rng.gen_range(-1.0..1.0) + (k as f64) * 2.0 + 5.0)
                    .collect()
            })
            .collect();
        let pca = fit_pca(&rows, 2).unwrap();
        let svd = fit_svd(&rows, 2).unwrap();
        let p1 = pca.basis().matmul(&pca.basis().transpose());
        let p2 = svd.basis().matmul(&svd.basis().transpose());
        let mut diff: f64 = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                diff = diff.max((p1[(i, j)] - p2[(i, j)]).abs());
            }
        }
        assert!(diff > 1e-3, "projectors unexpectedly close: {diff}");
        // Centered SVD removes the difference.
        let csvd = fit_svd_opts(&rows, 2, true).unwrap();
        let p3 = csvd.basis().matmul(&csvd.basis().transpose());
        for i in 0..6 {
            for j in 0..6 {
                assert_close(p1[(i, j)], p3[(i, j)], 1e-8);
            }
        }
    }

    #[test]
    fn spectral_error_matches_empirical_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rows: Vec<Vec<f64>> = (0..15)
            .map(|_| (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let model = fit_pca(&rows, 7).unwrap();
        for lp in 1..=7 {
            let spectral = model.reconstruction_error_percent(lp).unwrap();
            let empirical = empirical_reconstruction_error(&model, &rows, lp).unwrap();
            assert!(
                (spectral - empirical).abs() <= 1e-6 * spectral.max(empirical).max(1e-9),
                "width {lp}: spectral {spectral} vs empirical {empirical}"
            );
        }
    }

    #[test]
    fn degenerate_data_reports_zero_variance() {
        let rows = vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]];
        let model = fit_pca(&rows, 1).unwrap();
        let err = model.reconstruction_error_percent(1).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn bad_widths_are_config_errors() {
        let rows = cross_fixture();
        assert_eq!(fit_pca(&rows, 0).unwrap_err().exit_code(), 2);
        assert_eq!(fit_pca(&rows, 4).unwrap_err().exit_code(), 2);
        let model = fit_pca(&rows, 2).unwrap();
        assert!(model.truncated(3).is_err());
        assert!(model.project(&[1.0]).is_err());
    }

    #[test]
    fn too_few_vectors_is_input_error() {
        assert_eq!(fit_pca(&[vec![1.0, 2.0]], 1).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn from_parts_rejects_skewed_bases() {
        let skewed = Mat::from_rows(&[vec![1.0, 0.3], vec![0.0, 1.0]]);
        let err = ProjectionModel::from_parts(
            ReductionMethod::Pca,
            vec![0.0, 0.0],
            skewed,
            vec![1.0, 0.5],
            2,
            2,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Numerical(_)), "{err}");

        let err = ProjectionModel::from_parts(
            ReductionMethod::Pca,
            vec![0.0, 0.0],
            Mat::identity(2),
            vec![0.5, 1.0], // ascending spectrum
            2,
            2,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Numerical(_)), "{err}");
    }

    #[test]
    fn svd_capped_clamps_to_rank() {
        // Two distinct rows in R⁵: uncentered rank 2, Gram route (N < L).
        let rows = vec![
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0, 0.0],
        ];
        let model = fit_svd_capped(&rows, 5).unwrap();
        assert_eq!(model.output_dim(), 2);
        assert_eq!(model.method(), ReductionMethod::Svd);
    }
}
