//! Independent oracles for the acceptance suite.
//!
//! Everything here deliberately avoids the library's numerical code paths:
//! eigenpairs come from the characteristic polynomial (Faddeev–LeVerrier
//! coefficients, interlacing bisection for the all-real roots) plus inverse
//! power iteration, and least-squares solutions from a full-pivot
//! Gauss–Jordan inverse of the normal matrix. Plain `Vec<Vec<f64>>`
//! throughout.

#![allow(dead_code)]

pub type Rows = Vec<Vec<f64>>;

pub fn mat_zeros(r: usize, c: usize) -> Rows {
    vec![vec![0.0; c]; r]
}

pub fn mat_identity(n: usize) -> Rows {
    let mut m = mat_zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat_mul(a: &Rows, b: &Rows) -> Rows {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = mat_zeros(n, m);
    for i in 0..n {
        for p in 0..k {
            let aip = a[i][p];
            if aip == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aip * b[p][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Rows, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

pub fn transpose(a: &Rows) -> Rows {
    let (n, m) = (a.len(), a[0].len());
    let mut out = mat_zeros(m, n);
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn trace(a: &Rows) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// Monic characteristic polynomial coefficients `[1, c1, …, cn]` of a
/// square matrix, by the Faddeev–LeVerrier recurrence.
pub fn char_poly(a: &Rows) -> Vec<f64> {
    let n = a.len();
    let mut coeffs = vec![1.0];
    let mut m = a.clone();
    for k in 1..=n {
        let ck = -trace(&m) / k as f64;
        coeffs.push(ck);
        if k == n {
            break;
        }
        for i in 0..n {
            m[i][i] += ck;
        }
        m = mat_mul(a, &m);
    }
    coeffs
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    let degree = coeffs.len() - 1;
    coeffs[..degree]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (degree - i) as f64)
        .collect()
}

/// All roots of a monic polynomial whose roots are known to be real,
/// ascending. Roots of the derivative bracket the roots of the
/// polynomial, so bisection between consecutive critical points finds
/// each one; a Newton polish finishes the job.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    if degree == 1 {
        return vec![-coeffs[1] / coeffs[0]];
    }
    let inner = {
        let mut d = poly_derivative(coeffs);
        let lead = d[0];
        for c in &mut d {
            *c /= lead;
        }
        real_roots(&d)
    };
    let bound = 1.0 + coeffs.iter().skip(1).fold(0.0f64, |m, c| m.max(c.abs()));
    let mut edges = Vec::with_capacity(inner.len() + 2);
    edges.push(-bound);
    edges.extend(&inner);
    edges.push(bound);

    let mut roots = Vec::with_capacity(degree);
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    for w in edges.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (poly_eval(coeffs, lo), poly_eval(coeffs, hi));
        if flo == 0.0 {
            push_root(&mut roots, lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            // No sign change: either no root here or a multiple root at
            // the critical point itself.
            if fhi.abs() <= 1e-9 * scale.max(1.0) {
                push_root(&mut roots, hi);
            }
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if poly_eval(coeffs, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut root = 0.5 * (lo + hi);
        let dcoeffs = poly_derivative(coeffs);
        for _ in 0..3 {
            let d = poly_eval(&dcoeffs, root);
            if d.abs() > 1e-300 {
                root -= poly_eval(coeffs, root) / d;
            }
        }
        push_root(&mut roots, root);
    }
    roots
}

fn push_root(roots: &mut Vec<f64>, r: f64) {
    if roots.last().is_none_or(|&last| (r - last).abs() > 1e-12) {
        roots.push(r);
    }
}

/// Solve `a x = b` by LU with partial pivoting; `None` when singular.
pub fn lu_solve(a: &Rows, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        x.swap(col, pivot);
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for k in (col + 1)..n {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

/// One eigenvector of a symmetric matrix for a known eigenvalue, by
/// shifted inverse iteration; sign-fixed so the largest-magnitude
/// component is positive.
pub fn inverse_iteration(a: &Rows, lambda: f64) -> Vec<f64> {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1.0);
    let mut shift = lambda + 1e-9 * scale;
    let mut x = vec![1.0; n];
    for attempt in 0..6 {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[i][i] -= shift;
        }
        let mut ok = true;
        for _ in 0..6 {
            match lu_solve(&shifted, &x) {
                Some(y) => {
                    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                    x = y.into_iter().map(|v| v / norm).collect();
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            break;
        }
        shift = lambda + 10f64.powi(attempt + 1) * 1e-9 * scale;
        x = vec![1.0; n];
    }
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if x[best] < 0.0 {
        for v in &mut x {
            *v = -*v;
        }
    }
    x
}

/// Full eigen decomposition of a symmetric matrix through the
/// characteristic polynomial and inverse iteration. Values descending,
/// vectors as rows of the returned matrix.
pub fn sym_eigen_oracle(a: &Rows) -> (Vec<f64>, Rows) {
    let coeffs = char_poly(a);
    let mut values = real_roots(&coeffs);
    assert_eq!(
        values.len(),
        a.len(),
        "oracle expected {} real eigenvalues, isolated {}",
        a.len(),
        values.len()
    );
    values.reverse();
    let vectors = values.iter().map(|&l| inverse_iteration(a, l)).collect();
    (values, vectors)
}

/// Full-pivot Gauss–Jordan inverse; reports the smallest pivot seen so the
/// caller can reject ill-conditioned instances.
pub fn gauss_jordan_invert(a: &Rows) -> Option<(Rows, f64)> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = mat_identity(n);
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    for step in 0..n {
        let mut pivot = (step, step);
        let mut best = 0.0;
        for i in step..n {
            for j in step..n {
                if m[i][j].abs() > best {
                    best = m[i][j].abs();
                    pivot = (i, j);
                }
            }
        }
        if best < 1e-300 {
            return None;
        }
        min_pivot = min_pivot.min(best);
        m.swap(step, pivot.0);
        inv.swap(step, pivot.0);
        for row in m.iter_mut() {
            row.swap(step, pivot.1);
        }
        col_perm.swap(step, pivot.1);

        let p = m[step][step];
        for j in 0..n {
            m[step][j] /= p;
            inv[step][j] /= p;
        }
        for i in 0..n {
            if i == step {
                continue;
            }
            let f = m[i][step];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                m[i][j] -= f * m[step][j];
                inv[i][j] -= f * inv[step][j];
            }
        }
    }
    // Undo the column permutation: rows of the inverse are permuted by it.
    let mut out = mat_zeros(n, n);
    for i in 0..n {
        out[col_perm[i]] = inv[i].clone();
    }
    Some((out, min_pivot))
}

/// Least-squares coefficients `(XᵀX)⁻¹ Xᵀ Y` for a full-column-rank
/// design; also returns the smallest Gauss–Jordan pivot as a condition
/// guard.
pub fn ls_oracle(design: &Rows, targets: &Rows) -> Option<(Rows, f64)> {
    let xt = transpose(design);
    let xtx = mat_mul(&xt, design);
    let (inv, min_pivot) = gauss_jordan_invert(&xtx)?;
    Some((mat_mul(&inv, &mat_mul(&xt, targets)), min_pivot))
}

/// Greedy longest-cluster-first counted length, reimplemented for split
/// replay. Clusters must be sorted longest first by the caller.
pub fn oracle_counted_len(form: &str, clusters: &[&str]) -> usize {
    let mut rest = form;
    let mut count = 0;
    'outer: while !rest.is_empty() {
        for c in clusters {
            if rest.starts_with(c) {
                rest = &rest[c.len()..];
                count += 1;
                continue 'outer;
            }
        }
        let ch = rest.chars().next().unwrap();
        rest = &rest[ch.len_utf8()..];
        count += 1;
    }
    count
}

pub fn oracle_is_valid(form: &str, clusters: &[&str], vowels: &str, min_len: usize) -> bool {
    oracle_counted_len(form, clusters) >= min_len && form.chars().any(|c| vowels.contains(c))
}
