//! Adjacency spectra: distinct eigenvalues, principal idempotents, local
//! multiplicities and the Perron weight vector.

pub mod solver;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{Graph, GraphError};

pub use solver::{default_solvers, Householder, Jacobi, RawEigen, SymmetricEigensolver};

/// Default relative tolerance for merging raw eigenvalues into one distinct
/// eigenvalue; the absolute threshold is this times `max(1, λ_0)`.
pub const DEFAULT_GROUPING_TOL: f64 = 1e-8;

/// A local multiplicity at or below this value is treated as zero.
pub const LOCAL_SUPPORT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("eigensolver `{solver}` did not converge within {iterations} iterations")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
    },
    #[error("Perron vector is not sign-definite: entry {value:e} at vertex {vertex}")]
    SignFailure { vertex: usize, value: f64 },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("unknown eigensolver `{0}`")]
    UnknownSolver(String),
    #[error("grouping tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Distinct eigenvalues `λ_0 > … > λ_d` with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub distinct: Vec<f64>,
    pub mult: Vec<usize>,
}

impl Spectrum {
    /// Number of distinct eigenvalues minus one.
    pub fn d(&self) -> usize {
        self.distinct.len() - 1
    }

    pub fn order(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.distinct[0]
    }

    /// Index of the eigenvalue 0, if it occurs.
    pub fn zero_index(&self) -> Option<usize> {
        self.distinct.iter().position(|&l| l == 0.0)
    }

    /// `m(0)`, zero when 0 is not an eigenvalue.
    pub fn zero_multiplicity(&self) -> usize {
        self.zero_index().map_or(0, |i| self.mult[i])
    }

    /// `max_i |λ_i + λ_{d-i}|` and whether `m_i = m_{d-i}` for all `i`.
    pub fn symmetry_defect(&self) -> (f64, bool) {
        let d = self.d();
        let mut worst: f64 = 0.0;
        let mut mults = true;
        for i in 0..=d {
            worst = worst.max((self.distinct[i] + self.distinct[d - i]).abs());
            mults &= self.mult[i] == self.mult[d - i];
        }
        (worst, mults)
    }
}

/// Orthogonal projectors `E_0, …, E_d` onto the eigenspaces.
#[derive(Debug, Clone)]
pub struct Idempotents {
    pub projectors: Vec<DMatrix<f64>>,
}

/// Max-norm defects of the projector algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorResiduals {
    /// `max_{i,j} |E_i E_j - δ_ij E_i|`
    pub products: f64,
    /// `|Σ E_i - I|`
    pub completeness: f64,
    /// `|Σ λ_i E_i - A|`
    pub reconstruction: f64,
    /// `max_i |tr E_i - m_i|`
    pub traces: f64,
}

impl Idempotents {
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn order(&self) -> usize {
        self.projectors.first().map_or(0, |e| e.nrows())
    }

    pub fn residuals(&self, spectrum: &Spectrum, a: &DMatrix<f64>) -> ProjectorResiduals {
        let n = self.order();
        let mut products: f64 = 0.0;
        for (i, ei) in self.projectors.iter().enumerate() {
            for (j, ej) in self.projectors.iter().enumerate() {
                let prod = ei * ej;
                let defect = if i == j { prod - ei } else { prod };
                products = products.max(defect.amax());
            }
        }
        let mut sum = DMatrix::zeros(n, n);
        let mut weighted = DMatrix::zeros(n, n);
        let mut traces: f64 = 0.0;
        for (i, e) in self.projectors.iter().enumerate() {
            sum += e;
            weighted += e * spectrum.distinct[i];
            traces = traces.max((e.trace() - spectrum.mult[i] as f64).abs());
        }
        ProjectorResiduals {
            products,
            completeness: (sum - DMatrix::identity(n, n)).amax(),
            reconstruction: (weighted - a).amax(),
            traces,
        }
    }
}

/// Everything produced by one symmetric eigendecomposition.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub spectrum: Spectrum,
    pub idempotents: Idempotents,
    /// Orthonormal basis of each eigenspace, one column per dimension.
    pub bases: Vec<DMatrix<f64>>,
    /// `max |A V - V Λ|` reported by the solver output.
    pub solver_residual: f64,
}

impl Eigendecomposition {
    /// A unit eigenvector for `λ_0`.
    pub fn top_eigenvector(&self) -> DVector<f64> {
        self.bases[0].column(0).into_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOptions {
    /// Relative eigenvalue grouping tolerance.
    pub grouping_tol: f64,
    /// Name of a registered [`SymmetricEigensolver`].
    pub solver: String,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            grouping_tol: DEFAULT_GROUPING_TOL,
            solver: "jacobi".to_string(),
        }
    }
}

/// Decomposes the adjacency matrix of a connected graph and groups the raw
/// eigenvalues into distinct ones.
///
/// Eigenvalues closer than `grouping_tol · max(1, λ_max)` are merged and
/// replaced by their mean; a group within that distance of zero is set to
/// exactly zero.
pub fn eigendecompose(
    g: &Graph,
    opts: &SpectralOptions,
) -> Result<Eigendecomposition, SpectraError> {
    g.check_connected()?;
    if opts.grouping_tol.is_nan() || opts.grouping_tol <= 0.0 {
        return Err(SpectraError::BadTolerance(opts.grouping_tol));
    }
    let solvers = default_solvers();
    let solver = solvers
        .get(&opts.solver)
        .ok_or_else(|| SpectraError::UnknownSolver(opts.solver.clone()))?;
    let a = g.adjacency_matrix();
    let raw = solver.decompose(&a)?;
    let solver_residual = raw.residual(&a);
    Ok(group_eigenpairs(&raw, opts.grouping_tol, solver_residual))
}

fn group_eigenpairs(raw: &RawEigen, tol: f64, solver_residual: f64) -> Eigendecomposition {
    let n = raw.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| raw.values[y].total_cmp(&raw.values[x]));
    let threshold = tol * raw.values[order[0]].max(1.0);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match groups.last_mut() {
            Some(group) if raw.values[*group.last().unwrap()] - raw.values[k] < threshold => {
                group.push(k)
            }
            _ => groups.push(vec![k]),
        }
    }

    let mut distinct = Vec::with_capacity(groups.len());
    let mut mult = Vec::with_capacity(groups.len());
    let mut bases = Vec::with_capacity(groups.len());
    let mut projectors = Vec::with_capacity(groups.len());
    for group in &groups {
        let mean = group.iter().map(|&k| raw.values[k]).sum::<f64>() / group.len() as f64;
        distinct.push(if mean.abs() < threshold { 0.0 } else { mean });
        mult.push(group.len());
        let basis = raw.vectors.select_columns(group.iter());
        projectors.push(&basis * basis.transpose());
        bases.push(basis);
    }
    Eigendecomposition {
        spectrum: Spectrum { distinct, mult },
        idempotents: Idempotents { projectors },
        bases,
        solver_residual,
    }
}

/// Multiplicities `m_u(λ_i) = (E_i)_{uu}` as seen from one vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSpectrum {
    pub vertex: usize,
    pub mult: Vec<f64>,
}

impl LocalSpectrum {
    /// Indices `i` with `m_u(λ_i)` above [`LOCAL_SUPPORT_THRESHOLD`].
    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len())
            .filter(|&i| self.mult[i] > LOCAL_SUPPORT_THRESHOLD)
            .collect()
    }

    /// `d_u`: number of local eigenvalues minus one.
    pub fn d_u(&self) -> usize {
        self.support().len().saturating_sub(1)
    }
}

pub fn local_spectrum(idem: &Idempotents, u: usize) -> LocalSpectrum {
    LocalSpectrum {
        vertex: u,
        mult: idem.projectors.iter().map(|e| e[(u, u)]).collect(),
    }
}

pub fn local_spectra(idem: &Idempotents) -> Vec<LocalSpectrum> {
    (0..idem.order()).map(|u| local_spectrum(idem, u)).collect()
}

/// Largest discrepancies between closed-walk counts and spectral moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkResiduals {
    /// `max_ℓ |tr A^ℓ - Σ m_i λ_i^ℓ|`
    pub global: f64,
    /// `max_{ℓ,u} |(A^ℓ)_{uu} - Σ m_u(λ_i) λ_i^ℓ|`
    pub local: f64,
}

/// Compares `(A^ℓ)_{uu}` and `tr A^ℓ` with their spectral expansions for
/// `ℓ = 0..=max_len`. `None` uses `2d`.
pub fn walk_moment_check(
    g: &Graph,
    spectrum: &Spectrum,
    locals: &[LocalSpectrum],
    max_len: Option<usize>,
) -> WalkResiduals {
    let a = g.adjacency_matrix();
    let n = g.order();
    let max_len = max_len.unwrap_or(2 * spectrum.d());
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut out = WalkResiduals {
        global: 0.0,
        local: 0.0,
    };
    for len in 0..=max_len {
        if len > 0 {
            power = &power * &a;
        }
        let moments: Vec<f64> = spectrum
            .distinct
            .iter()
            .map(|&l| l.powi(len as i32))
            .collect();
        let global: f64 = spectrum
            .mult
            .iter()
            .zip(&moments)
            .map(|(&m, x)| m as f64 * x)
            .sum();
        out.global = out.global.max((power.trace() - global).abs());
        for loc in locals {
            let expansion: f64 = loc.mult.iter().zip(&moments).map(|(m, x)| m * x).sum();
            out.local = out
                .local
                .max((power[(loc.vertex, loc.vertex)] - expansion).abs());
        }
    }
    out
}

/// The positive `λ_0`-eigenvector `α` scaled to `‖α‖² = n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronWeights {
    pub alpha: Vec<f64>,
}

impl PerronWeights {
    /// `‖ρ_U‖² = Σ_{u∈U} α_u²`.
    pub fn norm_sq<I: IntoIterator<Item = usize>>(&self, vertices: I) -> f64 {
        vertices.into_iter().map(|u| self.alpha[u].powi(2)).sum()
    }

    pub fn get(&self, u: usize) -> f64 {
        self.alpha[u]
    }

    /// `max_u |(A α)_u - λ_0 α_u|`.
    pub fn eigen_residual(&self, g: &Graph, lambda0: f64) -> f64 {
        (0..g.order())
            .map(|u| {
                let s: f64 = g.neighbors(u).iter().map(|&v| self.alpha[v]).sum();
                (s - lambda0 * self.alpha[u]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Normalizes a `λ_0`-eigenvector into Perron weights.
///
/// Fails with [`SpectraError::SignFailure`] when the vector has entries of
/// both signs (or a zero entry), which for a connected graph means the top
/// eigenvalue group was mis-assembled.
pub fn perron_weights(
    g: &Graph,
    spectrum: &Spectrum,
    eigvec: &DVector<f64>,
) -> Result<PerronWeights, SpectraError> {
    let n = g.order();
    debug_assert_eq!(spectrum.order(), n);
    let sign = if eigvec.sum() < 0.0 { -1.0 } else { 1.0 };
    let scale = sign * (n as f64).sqrt() / eigvec.norm();
    let alpha: Vec<f64> = eigvec.iter().map(|x| x * scale).collect();
    // a genuine Perron entry is bounded well away from zero at these sizes
    let floor = 1e-8;
    if let Some((vertex, &value)) = alpha.iter().enumerate().find(|(_, &x)| x <= floor) {
        return Err(SpectraError::SignFailure { vertex, value });
    }
    Ok(PerronWeights { alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{bipartition, generate, subdivide};
    use approx::assert_abs_diff_eq;

    fn decompose(g: &Graph) -> Eigendecomposition {
        eigendecompose(g, &SpectralOptions::default()).unwrap()
    }

    #[test]
    fn k2_spectrum() {
        let e = decompose(&generate("path", &[2]).unwrap());
        assert_eq!(e.spectrum.mult, vec![1, 1]);
        assert_abs_diff_eq!(e.spectrum.distinct[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.spectrum.distinct[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn c6_matches_circulant_eigenvalues() {
        let e = decompose(&generate("cycle", &[6]).unwrap());
        // circulant oracle: 2 cos(2πk/6), k = 0..5
        let mut oracle: Vec<f64> = (0..6)
            .map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / 6.0).cos())
            .collect();
        oracle.sort_by(|a, b| b.total_cmp(a));
        oracle.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(e.spectrum.distinct.len(), oracle.len());
        for (x, y) in e.spectrum.distinct.iter().zip(&oracle) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
        }
        assert_eq!(e.spectrum.mult, vec![1, 2, 2, 1]);
    }

    #[test]
    fn subdivided_petersen_spectrum() {
        let e = decompose(&subdivide(&generate("petersen", &[]).unwrap()));
        let s6 = 6f64.sqrt();
        let expected = [s6, 2.0, 1.0, 0.0, -1.0, -2.0, -s6];
        assert_eq!(e.spectrum.mult, vec![1, 5, 4, 5, 4, 5, 1]);
        for (x, y) in e.spectrum.distinct.iter().zip(expected) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-8);
        }
        assert_eq!(e.spectrum.zero_multiplicity(), 5);
        // μ² = λ + 3 for the nonzero μ, against the Petersen spectrum {3, 1^5, (-2)^4}
        let petersen = [(3.0, 1), (1.0, 5), (-2.0, 4)];
        for (&mu, &m) in e.spectrum.distinct.iter().zip(&e.spectrum.mult) {
            if mu > 0.0 {
                let (_, pm) = petersen
                    .iter()
                    .find(|(l, _)| (l + 3.0 - mu * mu).abs() < 1e-9)
                    .expect("matches a Petersen eigenvalue");
                assert_eq!(m, *pm);
            }
        }
    }

    #[test]
    fn projector_algebra() {
        for g in [
            subdivide(&generate("petersen", &[]).unwrap()),
            generate("hypercube", &[4]).unwrap(),
            generate("complete_bipartite", &[2, 5]).unwrap(),
        ] {
            let e = decompose(&g);
            let r = e.idempotents.residuals(&e.spectrum, &g.adjacency_matrix());
            assert!(r.products < 1e-8, "{r:?}");
            assert!(r.completeness < 1e-8, "{r:?}");
            assert!(r.reconstruction < 1e-8, "{r:?}");
            assert!(r.traces < 1e-6, "{r:?}");
            assert!(e.solver_residual < 1e-10 * g.order() as f64);
        }
    }

    #[test]
    fn path_local_multiplicities() {
        let e = decompose(&generate("path", &[3]).unwrap());
        let leaf = local_spectrum(&e.idempotents, 0);
        for (x, y) in leaf.mult.iter().zip([0.25, 0.5, 0.25]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
        }
        assert_eq!(leaf.d_u(), 2);
        let center = local_spectrum(&e.idempotents, 1);
        for (x, y) in center.mult.iter().zip([0.5, 0.0, 0.5]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
        }
        assert_eq!(center.d_u(), 1);
        assert_eq!(center.support(), vec![0, 2]);
    }

    #[test]
    fn local_multiplicities_sum() {
        let g = subdivide(&generate("complete", &[4]).unwrap());
        let e = decompose(&g);
        let locals = local_spectra(&e.idempotents);
        for loc in &locals {
            assert_abs_diff_eq!(loc.mult.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(loc.mult[0] > 0.0);
        }
        for i in 0..=e.spectrum.d() {
            let total: f64 = locals.iter().map(|l| l.mult[i]).sum();
            assert_abs_diff_eq!(total, e.spectrum.mult[i] as f64, epsilon = 1e-10);
        }
    }

    #[test]
    fn walk_moments() {
        let k2 = generate("path", &[2]).unwrap();
        let e = decompose(&k2);
        let locals = local_spectra(&e.idempotents);
        // (A²)_{00} = 1 = ½·1 + ½·1
        assert!(walk_moment_check(&k2, &e.spectrum, &locals, Some(2)).local < 1e-14);

        let c6 = generate("cycle", &[6]).unwrap();
        let e = decompose(&c6);
        let trace2: f64 = e
            .spectrum
            .distinct
            .iter()
            .zip(&e.spectrum.mult)
            .map(|(l, &m)| m as f64 * l * l)
            .sum();
        assert_abs_diff_eq!(trace2, 12.0, epsilon = 1e-12);

        for g in [
            subdivide(&generate("petersen", &[]).unwrap()),
            generate("hypercube", &[3]).unwrap(),
            generate("path", &[5]).unwrap(),
        ] {
            let e = decompose(&g);
            let locals = local_spectra(&e.idempotents);
            let r = walk_moment_check(&g, &e.spectrum, &locals, None);
            assert!(r.global < 1e-8 && r.local < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn perron_regular_is_all_ones() {
        let g = generate("hypercube", &[3]).unwrap();
        let e = decompose(&g);
        let p = perron_weights(&g, &e.spectrum, &e.top_eigenvector()).unwrap();
        for &x in &p.alpha {
            assert_abs_diff_eq!(x, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn perron_semiregular_two_valued() {
        let p3 = generate("path", &[3]).unwrap();
        let e = decompose(&p3);
        let p = perron_weights(&p3, &e.spectrum, &e.top_eigenvector()).unwrap();
        assert_abs_diff_eq!(p.get(0), 3f64.sqrt() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.get(1), 1.5f64.sqrt(), epsilon = 1e-12);
        assert!(p.eigen_residual(&p3, e.spectrum.spectral_radius()) < 1e-12);

        let s = subdivide(&generate("petersen", &[]).unwrap());
        let e = decompose(&s);
        let p = perron_weights(&s, &e.spectrum, &e.top_eigenvector()).unwrap();
        let b = bipartition(&s).unwrap();
        // (δ1, δ2) = (2, 3): α1² = 5/6 = 25/30, α2² = 5/4 = 25/20
        for &u in &b.side1 {
            assert_abs_diff_eq!(p.get(u), (25.0f64 / 30.0).sqrt(), epsilon = 1e-12);
        }
        for &v in &b.side2 {
            assert_abs_diff_eq!(p.get(v), (25.0f64 / 20.0).sqrt(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(p.norm_sq(0..25), 25.0, epsilon = 1e-10);
        assert!(p.eigen_residual(&s, 6f64.sqrt()) < 1e-12);
    }

    #[test]
    fn perron_rejects_mixed_sign_vector() {
        let g = generate("path", &[2]).unwrap();
        let e = decompose(&g);
        let bad = DVector::from_vec(vec![1.0, -1.0]);
        assert!(matches!(
            perron_weights(&g, &e.spectrum, &bad),
            Err(SpectraError::SignFailure { .. })
        ));
    }

    #[test]
    fn errors() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            eigendecompose(&g, &SpectralOptions::default()),
            Err(SpectraError::Graph(GraphError::Disconnected { .. }))
        ));
        let k2 = generate("path", &[2]).unwrap();
        let opts = SpectralOptions {
            solver: "lanczos".into(),
            ..Default::default()
        };
        assert!(matches!(
            eigendecompose(&k2, &opts),
            Err(SpectraError::UnknownSolver(_))
        ));
        let opts = SpectralOptions {
            grouping_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            eigendecompose(&k2, &opts),
            Err(SpectraError::BadTolerance(_))
        ));
    }

    #[test]
    fn householder_strategy_groups_identically() {
        let g = subdivide(&generate("petersen", &[]).unwrap());
        let jac = decompose(&g);
        let hh = eigendecompose(
            &g,
            &SpectralOptions {
                solver: "householder".into(),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(jac.spectrum.mult, hh.spectrum.mult);
        for (x, y) in jac.spectrum.distinct.iter().zip(&hh.spectrum.distinct) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-10);
        }
    }
}
