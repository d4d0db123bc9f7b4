//! Positive-semidefiniteness reports for Hermitian Gram matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative eigenvalue tolerance for the PSD verdict.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Outcome of a positive-semidefiniteness test.
///
/// `verdict` requires `min_eigenvalue >= -tolerance * max(1, spectral_norm)`
/// and a Hermiticity defect within the same bound; the eigenvalues are those
/// of the Hermitian part `(G + G*)/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub size: usize,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub spectral_norm: f64,
    pub tolerance: f64,
    pub verdict: bool,
}

impl GramReport {
    /// Builds the report for an explicit matrix.
    pub fn from_matrix(g: &DMatrix<Complex64>) -> Self {
        Self::with_tolerance(g, PSD_TOLERANCE)
    }

    /// Builds the report with a caller-chosen relative tolerance.
    pub fn with_tolerance(g: &DMatrix<Complex64>, tolerance: f64) -> Self {
        let n = g.nrows();
        assert_eq!(n, g.ncols(), "Gram matrix must be square");
        if n == 0 {
            return GramReport {
                size: 0,
                hermiticity_defect: 0.0,
                min_eigenvalue: 0.0,
                max_eigenvalue: 0.0,
                spectral_norm: 0.0,
                tolerance,
                verdict: true,
            };
        }
        let hermiticity_defect = hermiticity_defect(g);
        let eig = hermitian_eigenvalues(g);
        let min_eigenvalue = eig[0];
        let max_eigenvalue = eig[n - 1];
        let spectral_norm = min_eigenvalue.abs().max(max_eigenvalue.abs());
        let bound = tolerance * spectral_norm.max(1.0);
        let verdict = min_eigenvalue >= -bound && hermiticity_defect <= bound;
        GramReport { size: n, hermiticity_defect, min_eigenvalue, max_eigenvalue, spectral_norm, tolerance, verdict }
    }

    /// Builds `G_{jk} = entry(j, k)` for `j, k < n` and reports on it.
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(n: usize, entry: F) -> Self {
        Self::from_matrix(&DMatrix::from_fn(n, n, entry))
    }
}

/// `max_{jk} |G_{jk} − conj(G_{kj})|`.
pub fn hermiticity_defect(g: &DMatrix<Complex64>) -> f64 {
    let n = g.nrows();
    let mut d = 0.0f64;
    for j in 0..n {
        for k in j..n {
            d = d.max((g[(j, k)] - g[(k, j)].conj()).norm());
        }
    }
    d
}

/// Hermitian part `(G + G*)/2`.
pub fn hermitian_part(g: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigen-decomposition of the Hermitian part, eigenvalues sorted ascending
/// with matching eigenvector columns.
pub fn hermitian_eigen(g: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let h = hermitian_part(g);
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Sorted eigenvalues of the Hermitian part.
pub fn hermitian_eigenvalues(g: &DMatrix<Complex64>) -> Vec<f64> {
    let h = hermitian_part(g);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `‖H v − μ v‖` for an eigenpair of the Hermitian part.
pub fn eigen_residual(g: &DMatrix<Complex64>, mu: f64, v: &DVector<Complex64>) -> f64 {
    let h = hermitian_part(g);
    (&h * v - v * Complex64::new(mu, 0.0)).norm()
}
