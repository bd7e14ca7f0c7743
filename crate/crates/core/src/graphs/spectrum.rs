use super::{ForceGraph, GraphError};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

const CHECK_TOL: f64 = 1e-8;

/// Laplacian eigenpairs, eigenvalues ascending; column `k` of `eigenvectors`
/// belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct LaplacianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl LaplacianSpectrum {
    /// Eigenvalues below `tol`; equals the number of connected components.
    pub fn zero_modes(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < tol).count()
    }

    /// Algebraic connectivity (second-smallest eigenvalue).
    pub fn fiedler_value(&self) -> Option<f64> {
        self.eigenvalues.get(1).copied()
    }
}

/// Dense symmetric eigen-decomposition of `L = D - A`, with the
/// orthonormality and residual of every pair verified to 1e-8 (scaled by the
/// spectral radius for large graphs).
pub fn laplacian_spectrum(g: &ForceGraph) -> Result<LaplacianSpectrum, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::InvalidParameter(
            "empty graph has no spectrum".into(),
        ));
    }
    let l = g.laplacian();
    let eig = SymmetricEigen::try_new(l.clone(), f64::EPSILON, 0)
        .ok_or_else(|| GraphError::Eigen("symmetric eigen-solver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let scale = eigenvalues.last().copied().unwrap_or(0.0).abs().max(1.0);
    let gram = eigenvectors.transpose() * &eigenvectors;
    let ortho = (gram - DMatrix::<f64>::identity(n, n)).amax();
    if ortho > CHECK_TOL {
        return Err(GraphError::Eigen(format!(
            "eigenvectors not orthonormal (max dev {ortho:e})"
        )));
    }
    for k in 0..n {
        let v: DVector<f64> = eigenvectors.column(k).into();
        let resid = (&l * &v - eigenvalues[k] * &v).amax();
        if resid > CHECK_TOL * scale {
            return Err(GraphError::Eigen(format!(
                "residual {resid:e} for eigenpair {k}"
            )));
        }
    }
    Ok(LaplacianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}
