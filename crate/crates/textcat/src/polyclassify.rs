//! Polynomial least-squares classifier.
//!
//! Reduced vectors are expanded by a polynomial function x(v) — linear, or
//! quadratic with all distinct monomials — and a coefficient matrix A is
//! fitted by minimizing the mean-square error between Aᵀx(v) and one-hot
//! class targets. The k-th output of d(v) = Aᵀx(v) then estimates the
//! a-posteriori probability p(k|v); forced recognition simply takes the
//! maximum. Fitting solves the normal equations with an optional ridge on
//! the non-constant rows, falling back to a rank-revealing pseudo-inverse
//! when the plain system is singular.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOrder {
    Linear,
    Quadratic,
}

impl PolyOrder {
    pub fn as_u8(&self) -> u8 {
        match self {
            PolyOrder::Linear => 1,
            PolyOrder::Quadratic => 2,
        }
    }
}

impl std::str::FromStr for PolyOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "linear" => Ok(PolyOrder::Linear),
            "2" | "quadratic" => Ok(PolyOrder::Quadratic),
            other => Err(Error::config(format!(
                "unsupported polynomial order '{other}' (expected 1|2)"
            ))),
        }
    }
}

/// Expansion dimension X: 1 + L′ for the linear case, plus the
/// L′(L′+1)/2 distinct quadratic monomials for order two.
pub fn expansion_dim(l_prime: usize, order: PolyOrder) -> usize {
    match order {
        PolyOrder::Linear => 1 + l_prime,
        PolyOrder::Quadratic => 1 + l_prime + l_prime * (l_prime + 1) / 2,
    }
}

/// Polynomial expansion x(v): constant 1, the components, and for order
/// two every product v_j·v_k with j ≤ k in (j,k) order.
pub fn expand(v: &[f64], order: PolyOrder) -> Vec<f64> {
    let mut x = Vec::with_capacity(expansion_dim(v.len(), order));
    x.push(1.0);
    x.extend_from_slice(v);
    if order == PolyOrder::Quadratic {
        for j in 0..v.len() {
            for k in j..v.len() {
                x.push(v[j] * v[k]);
            }
        }
    }
    x
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub order: PolyOrder,
    /// Ridge added to the non-constant diagonal of the moment matrix.
    /// `None` selects `1e-8·trace/X`; `Some(0.0)` requests a plain
    /// least-squares fit with pseudo-inverse fallback.
    pub ridge: Option<f64>,
    pub allow_pseudo_inverse: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            order: PolyOrder::Linear,
            ridge: None,
            allow_pseudo_inverse: true,
        }
    }
}

/// Fitted classifier: coefficient matrix A of shape X×K over class names.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    order: PolyOrder,
    a: Mat,
    x_dim: usize,
    l_prime: usize,
    class_names: Vec<String>,
}

impl ClassifierModel {
    pub fn from_parts(
        order: PolyOrder,
        a: Mat,
        l_prime: usize,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let x_dim = expansion_dim(l_prime, order);
        if a.rows() != x_dim || a.cols() != class_names.len() {
            return Err(Error::input(format!(
                "coefficient matrix is {}x{}, expected {x_dim}x{}",
                a.rows(),
                a.cols(),
                class_names.len()
            )));
        }
        if !a.is_finite() {
            return Err(Error::numerical(
                "non-finite classifier coefficients".to_string(),
            ));
        }
        if class_names.is_empty() {
            return Err(Error::input(
                "classifier needs at least one class".to_string(),
            ));
        }
        Ok(ClassifierModel {
            order,
            a,
            x_dim,
            l_prime,
            class_names,
        })
    }

    pub fn order(&self) -> PolyOrder {
        self.order
    }

    pub fn coefficients(&self) -> &Mat {
        &self.a
    }

    pub fn expansion_len(&self) -> usize {
        self.x_dim
    }

    pub fn input_dim(&self) -> usize {
        self.l_prime
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// Score vector d(v) = Aᵀ x(v). Components estimate a-posteriori
    /// probabilities and may fall outside the unit interval; they are
    /// not clipped.
    pub fn predict(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.l_prime {
            return Err(Error::input(format!(
                "cannot score a vector of dimension {} with an L'={} classifier",
                v.len(),
                self.l_prime
            )));
        }
        let x = expand(v, self.order);
        Ok(self.a.tr_mul_vec(&x))
    }
}

/// Forced recognition: the index of the maximum score, lowest index on
/// ties. Every input receives exactly one class; there is no rejection.
pub fn decide(scores: &[f64]) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::input("cannot decide on an empty score vector"));
    }
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Fit the coefficient matrix by least squares on one-hot targets:
/// minimize Σᵢ ‖Aᵀx(vᵢ) − yᵢ‖² (+ ridge). Every class must appear among
/// the samples.
pub fn fit(
    samples: &[(Vec<f64>, usize)],
    class_names: &[String],
    opts: &FitOptions,
) -> Result<ClassifierModel> {
    if samples.is_empty() {
        return Err(Error::input("cannot fit a classifier without samples"));
    }
    let k = class_names.len();
    if k == 0 {
        return Err(Error::input("cannot fit a classifier without classes"));
    }
    let l_prime = samples[0].0.len();
    if samples.iter().any(|(v, _)| v.len() != l_prime) {
        return Err(Error::input("samples have inconsistent dimensions"));
    }
    let mut class_counts = vec![0usize; k];
    for &(_, label) in samples {
        if label >= k {
            return Err(Error::input(format!(
                "sample label {label} out of range for {k} classes"
            )));
        }
        class_counts[label] += 1;
    }
    if let Some(missing) = class_counts.iter().position(|&c| c == 0) {
        return Err(Error::input(format!(
            "class '{}' absent from the training samples",
            class_names[missing]
        )));
    }
    if opts.order == PolyOrder::Quadratic {
        let n_min = class_counts.iter().min().copied().unwrap_or(0);
        if l_prime >= 100 || n_min <= 1000 {
            log::warn!(
                "quadratic classifier with L'={l_prime} and smallest class of {n_min} samples \
                 risks overfitting; quadratic terms pay off for L' < 100 and over 1000 samples per class"
            );
        }
    }

    let x_dim = expansion_dim(l_prime, opts.order);
    let mut moment = Mat::zeros(x_dim, x_dim);
    let mut rhs = Mat::zeros(x_dim, k);
    for (v, label) in samples {
        let x = expand(v, opts.order);
        for i in 0..x_dim {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in i..x_dim {
                moment[(i, j)] += xi * x[j];
            }
            rhs[(i, *label)] += xi;
        }
    }
    for i in 0..x_dim {
        for j in (i + 1)..x_dim {
            moment[(j, i)] = moment[(i, j)];
        }
    }

    let trace: f64 = (0..x_dim).map(|i| moment[(i, i)]).sum();
    let ridge = opts.ridge.unwrap_or(1e-8 * trace / x_dim as f64);
    if ridge < 0.0 {
        return Err(Error::config("ridge must be non-negative"));
    }
    // The constant row stays unregularized so that scores keep summing to
    // one over the classes.
    let mut system = moment.clone();
    for i in 1..x_dim {
        system[(i, i)] += ridge;
    }

    let a = match linalg::solve_spd(&system, &rhs) {
        Some(a) => a,
        None if ridge == 0.0 && opts.allow_pseudo_inverse => {
            linalg::solve_sym_pseudo(&system, &rhs)?
        }
        None => {
            return Err(Error::numerical(
                "singular normal equations; raise the ridge or allow the pseudo-inverse fallback"
                    .to_string(),
            ));
        }
    };

    // Residual gate on the normal equations.
    let lhs = system.matmul(&a);
    let mut resid = 0.0;
    for i in 0..x_dim {
        for j in 0..k {
            let r = lhs[(i, j)] - rhs[(i, j)];
            resid += r * r;
        }
    }
    let rhs_norm = rhs.frob_norm();
    if rhs_norm > 0.0 && resid.sqrt() > 1e-8 * rhs_norm {
        return Err(Error::numerical(format!(
            "normal-equation residual {:.3e} exceeds 1e-8 of the target norm",
            resid.sqrt()
        )));
    }

    ClassifierModel::from_parts(opts.order, a, l_prime, class_names.to_vec())
}
