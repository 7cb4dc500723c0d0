//! Orthogonal polynomials on a finite weighted mesh.
//!
//! A [`WeightedMesh`] is a strictly decreasing set of reals `λ_0 > … > λ_d`
//! with nonnegative weights summing to one, which defines the scalar
//! product `⟨f, g⟩ = Σ w_i f(λ_i) g(λ_i)`. [`OrthoSequence`] holds the
//! orthogonal sequence `r_0, r_1, …` on the support of the weights, where
//! `deg r_i = i` and each `r_i` is scaled so that `‖r_i‖² = r_i(λ_0)`.
//!
//! Polynomials are stored by their values on the support together with
//! the three-term recurrence
//!
//! ```text
//! x r_i = b_{i-1} r_{i-1} + a_i r_i + c_{i+1} r_{i+1}
//! ```
//!
//! which also evaluates them anywhere else, including at a matrix.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Weights at or below this are outside the support.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

const NORMALIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrthoError {
    #[error("mesh points must be strictly decreasing (index {0})")]
    NotDecreasing(usize),
    #[error("negative weight {value:e} at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weights sum to {0}, expected 1")]
    Unnormalized(f64),
    #[error("the weight of the largest mesh point must be positive")]
    ZeroTopWeight,
    #[error("mesh has {points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },
    #[error("mesh has empty support")]
    DegenerateMesh,
    #[error("closed form needs full support; weight at index {0} is zero")]
    ZeroWeight(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMesh {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedMesh {
    /// Validates and builds a mesh. Round-off negatives down to `-1e-12`
    /// are clamped to zero.
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<WeightedMesh, OrthoError> {
        if points.len() != weights.len() {
            return Err(OrthoError::LengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        if points.is_empty() {
            return Err(OrthoError::DegenerateMesh);
        }
        if let Some(i) = (1..points.len())
            .find(|&i| points[i].partial_cmp(&points[i - 1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(OrthoError::NotDecreasing(i));
        }
        let mut weights = weights;
        for (index, w) in weights.iter_mut().enumerate() {
            if *w < -1e-12 || w.is_nan() {
                return Err(OrthoError::NegativeWeight { index, value: *w });
            }
            *w = w.max(0.0);
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(OrthoError::Unnormalized(sum));
        }
        if weights[0] <= SUPPORT_THRESHOLD {
            return Err(OrthoError::ZeroTopWeight);
        }
        Ok(WeightedMesh { points, weights })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of points with weight above [`SUPPORT_THRESHOLD`].
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.weights[i] > SUPPORT_THRESHOLD)
            .collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.support().len() == self.len()
    }

    /// The mesh restricted to its support.
    pub fn restricted(&self) -> WeightedMesh {
        let support = self.support();
        WeightedMesh {
            points: support.iter().map(|&i| self.points[i]).collect(),
            weights: support.iter().map(|&i| self.weights[i]).collect(),
        }
    }
}

/// `Σ w_i f_i g_i` for value vectors on the mesh points.
pub fn inner_product(mesh: &WeightedMesh, f: &[f64], g: &[f64]) -> f64 {
    mesh.weights
        .iter()
        .zip(f)
        .zip(g)
        .map(|((w, x), y)| w * x * y)
        .sum()
}

/// `Σ w_i f(λ_i) g(λ_i)` for functions evaluable at the mesh points.
pub fn inner_product_fn(
    mesh: &WeightedMesh,
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
) -> f64 {
    mesh.points
        .iter()
        .zip(&mesh.weights)
        .map(|(&x, w)| w * f(x) * g(x))
        .sum()
}

/// `π_i = Π_{j≠i} |λ_i - λ_j|`.
pub fn pi_constants(points: &[f64]) -> Vec<f64> {
    (0..points.len())
        .map(|i| {
            (0..points.len())
                .filter(|&j| j != i)
                .map(|j| (points[i] - points[j]).abs())
                .product()
        })
        .collect()
}

/// Value at `λ_0` of the top-degree orthogonal polynomial, in closed form:
///
/// ```text
/// r_d(λ_0) = (1/w_0) · ( Σ_i w_0 π_0² / (w_i π_i²) )⁻¹
/// ```
pub fn top_value_closed_form(mesh: &WeightedMesh) -> Result<f64, OrthoError> {
    if let Some(i) = (0..mesh.len()).find(|&i| mesh.weights[i] <= SUPPORT_THRESHOLD) {
        return Err(OrthoError::ZeroWeight(i));
    }
    let pi = pi_constants(&mesh.points);
    let w0 = mesh.weights[0];
    let sum: f64 = (0..mesh.len())
        .map(|i| w0 * pi[0] * pi[0] / (mesh.weights[i] * pi[i] * pi[i]))
        .sum();
    Ok(1.0 / (w0 * sum))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoSequence {
    points: Vec<f64>,
    weights: Vec<f64>,
    /// `values[i][k] = r_i(points[k])`.
    values: Vec<Vec<f64>>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

fn weighted_dot(w: &[f64], f: &[f64], g: &[f64]) -> f64 {
    w.iter().zip(f).zip(g).map(|((w, x), y)| w * x * y).sum()
}

impl OrthoSequence {
    /// Gram–Schmidt on `1, x r_0, x r_1, …` over the support of `mesh`, with
    /// one re-orthogonalization pass per step.
    pub fn new(mesh: &WeightedMesh) -> Result<OrthoSequence, OrthoError> {
        let restricted = mesh.restricted();
        let points = restricted.points;
        let weights = restricted.weights;
        let len = points.len();
        if len == 0 {
            return Err(OrthoError::DegenerateMesh);
        }
        let mut values: Vec<Vec<f64>> = vec![vec![1.0; len]];
        for _ in 1..len {
            let prev = values.last().unwrap();
            let mut v: Vec<f64> = points.iter().zip(prev).map(|(x, r)| x * r).collect();
            for _pass in 0..2 {
                for r in &values {
                    let coef = weighted_dot(&weights, &v, r) / weighted_dot(&weights, r, r);
                    for (vk, rk) in v.iter_mut().zip(r) {
                        *vk -= coef * rk;
                    }
                }
            }
            let scale = v[0] / weighted_dot(&weights, &v, &v);
            values.push(v.into_iter().map(|x| x * scale).collect());
        }

        let norms: Vec<f64> = values
            .iter()
            .map(|r| weighted_dot(&weights, r, r))
            .collect();
        let x_times =
            |r: &[f64]| -> Vec<f64> { points.iter().zip(r).map(|(x, y)| x * y).collect() };
        let mut a = vec![0.0; len];
        let mut b = vec![0.0; len];
        let mut c = vec![0.0; len];
        for i in 0..len {
            let xr = x_times(&values[i]);
            a[i] = weighted_dot(&weights, &xr, &values[i]) / norms[i];
            if i + 1 < len {
                let cross = weighted_dot(&weights, &xr, &values[i + 1]);
                b[i] = cross / norms[i];
                c[i + 1] = cross / norms[i + 1];
            }
        }
        Ok(OrthoSequence {
            points,
            weights,
            values,
            a,
            b,
            c,
        })
    }

    /// Number of polynomials, equal to the support size.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Degree of the last polynomial.
    pub fn degree(&self) -> usize {
        self.len() - 1
    }

    /// Support points the sequence lives on.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `r_i` on the support points.
    pub fn values(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// `r_i(λ_0)`.
    pub fn top_value(&self, i: usize) -> f64 {
        self.values[i][0]
    }

    pub fn top_values(&self) -> Vec<f64> {
        self.values.iter().map(|r| r[0]).collect()
    }

    /// `s_i(λ_0)` for all `i`, where `s_i = r_0 + … + r_i`.
    pub fn sum_top_values(&self) -> Vec<f64> {
        self.top_values()
            .into_iter()
            .scan(0.0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `b_i`, the coefficient of `r_i` in `x r_{i+1}`; `b_d = 0`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `c_i`, the coefficient of `r_i` in `x r_{i-1}`; `c_0 = 0`.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        weighted_dot(&self.weights, f, g)
    }

    /// Runs the recurrence, handing each `r_0, …, r_top` to `visit`.
    fn run_recurrence<T, F>(&self, top: usize, one: T, x: &T, mut visit: F)
    where
        T: Clone
            + std::ops::Sub<Output = T>
            + std::ops::Mul<f64, Output = T>
            + for<'a> std::ops::Mul<&'a T, Output = T>,
        F: FnMut(usize, &T),
    {
        assert!(top < self.len(), "degree {top} beyond sequence length");
        let mut prev: Option<T> = None;
        let mut cur = one.clone();
        visit(0, &cur);
        for i in 0..top {
            let shifted = x.clone() * &cur - cur.clone() * self.a[i];
            let shifted = match &prev {
                Some(p) => shifted - p.clone() * self.b[i - 1],
                None => shifted,
            };
            let next = shifted * (1.0 / self.c[i + 1]);
            prev = Some(std::mem::replace(&mut cur, next));
            visit(i + 1, &cur);
        }
    }

    /// `r_i(x)` at an arbitrary real `x`.
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        let mut out = 0.0;
        self.run_recurrence(i, Scalar(1.0), &Scalar(x), |k, r| {
            if k == i {
                out = r.0
            }
        });
        out
    }

    /// `s_i(x) = r_0(x) + … + r_i(x)`.
    pub fn sum_eval(&self, i: usize, x: f64) -> f64 {
        let mut out = 0.0;
        self.run_recurrence(i, Scalar(1.0), &Scalar(x), |_, r| out += r.0);
        out
    }

    /// `r_i(M)` for a square matrix `M`.
    pub fn eval_matrix(&self, i: usize, m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = m.nrows();
        let mut out = DMatrix::zeros(n, n);
        self.run_recurrence(i, Mat(DMatrix::identity(n, n)), &Mat(m.clone()), |k, r| {
            if k == i {
                out = r.0.clone();
            }
        });
        out
    }

    /// `s_i(M)` for a square matrix `M`.
    pub fn sum_eval_matrix(&self, i: usize, m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = m.nrows();
        let mut out = DMatrix::zeros(n, n);
        self.run_recurrence(i, Mat(DMatrix::identity(n, n)), &Mat(m.clone()), |_, r| {
            out += &r.0
        });
        out
    }

    /// Monomial coefficients of `r_i`, constant term first.
    pub fn coefficients(&self, i: usize) -> Vec<f64> {
        let mut out = Vec::new();
        self.run_recurrence(i, Poly(vec![1.0]), &Poly(vec![0.0, 1.0]), |k, r| {
            if k == i {
                out = r.0.clone();
            }
        });
        out.resize(i + 1, 0.0);
        out
    }

    /// `max_{i≠j} |⟨r_i, r_j⟩|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in 0..i {
                worst = worst.max(self.inner(&self.values[i], &self.values[j]).abs());
            }
        }
        worst
    }

    /// `max_i |‖r_i‖² - r_i(λ_0)|`.
    pub fn normalization_residual(&self) -> f64 {
        self.values
            .iter()
            .map(|r| (self.inner(r, r) - r[0]).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone)]
struct Scalar(f64);

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar(self.0 - o.0)
    }
}

impl std::ops::Mul<f64> for Scalar {
    type Output = Scalar;
    fn mul(self, k: f64) -> Scalar {
        Scalar(self.0 * k)
    }
}

impl std::ops::Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar(self.0 * o.0)
    }
}

#[derive(Clone)]
struct Mat(DMatrix<f64>);

impl std::ops::Sub for Mat {
    type Output = Mat;
    fn sub(self, o: Mat) -> Mat {
        Mat(self.0 - o.0)
    }
}

impl std::ops::Mul<f64> for Mat {
    type Output = Mat;
    fn mul(self, k: f64) -> Mat {
        Mat(self.0 * k)
    }
}

impl std::ops::Mul<&Mat> for Mat {
    type Output = Mat;
    fn mul(self, o: &Mat) -> Mat {
        Mat(self.0 * &o.0)
    }
}

/// Dense coefficient vector, constant term first.
#[derive(Clone)]
struct Poly(Vec<f64>);

impl std::ops::Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        let len = self.0.len().max(o.0.len());
        Poly(
            (0..len)
                .map(|k| self.0.get(k).unwrap_or(&0.0) - o.0.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl std::ops::Mul<f64> for Poly {
    type Output = Poly;
    fn mul(self, k: f64) -> Poly {
        Poly(self.0.into_iter().map(|x| x * k).collect())
    }
}

impl std::ops::Mul<&Poly> for Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in o.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly(out)
    }
}

/// Defects of the three-term recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceResiduals {
    /// `max_i |a_i + b_i + c_i - λ_0|`
    pub row_sums: f64,
    /// `max_{i,k} |x r_i - (b_{i-1} r_{i-1} + a_i r_i + c_{i+1} r_{i+1})|` on the support.
    pub pointwise: f64,
}

pub fn recurrence_check(seq: &OrthoSequence, lambda0: f64) -> RecurrenceResiduals {
    let len = seq.len();
    let mut row_sums: f64 = 0.0;
    let mut pointwise: f64 = 0.0;
    for i in 0..len {
        row_sums = row_sums.max((seq.a[i] + seq.b[i] + seq.c[i] - lambda0).abs());
        for (k, &x) in seq.points.iter().enumerate() {
            let mut rhs = seq.a[i] * seq.values[i][k];
            if i > 0 {
                rhs += seq.b[i - 1] * seq.values[i - 1][k];
            }
            if i + 1 < len {
                rhs += seq.c[i + 1] * seq.values[i + 1][k];
            }
            pointwise = pointwise.max((x * seq.values[i][k] - rhs).abs());
        }
    }
    RecurrenceResiduals {
        row_sums,
        pointwise,
    }
}

/// Sum polynomials `s_i = r_0 + … + r_i` checked against
/// `1 = s_0(λ_0) < … < s_d(λ_0) = 1/w_0` and `s_d(λ_k) = 0` for `k ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumValues {
    /// `s_i(λ_0)`.
    pub at_top: Vec<f64>,
    /// `s_d` on every support point.
    pub last_on_mesh: Vec<f64>,
    pub strictly_increasing: bool,
    /// `|s_d(λ_0) - 1/w_0|`.
    pub top_defect: f64,
    /// `max_{k≠0} |s_d(λ_k)|`.
    pub off_top: f64,
}

pub fn sum_polynomials(seq: &OrthoSequence) -> SumValues {
    let at_top = seq.sum_top_values();
    let points = seq.points.len();
    let last_on_mesh: Vec<f64> = (0..points)
        .map(|k| seq.values.iter().map(|r| r[k]).sum())
        .collect();
    SumValues {
        strictly_increasing: at_top.windows(2).all(|w| w[0] < w[1]),
        top_defect: (at_top.last().unwrap() - 1.0 / seq.weights[0]).abs(),
        off_top: last_on_mesh[1..]
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max),
        at_top,
        last_on_mesh,
    }
}
