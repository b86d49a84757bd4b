use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::GridState;
use crate::error::{Error, Result};

pub const MAX_COUNT: usize = 32;
const NEGATIVE_SLACK: f64 = -1e-8;

/// Leading eigenpairs of the discretized kernel (values × Δx).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm in the discrete sense, Σ|v_i|² = 1.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

pub fn eigendecompose_kernel(grid: &GridState, count: usize) -> Result<KernelSpectrum> {
    if count == 0 || count > MAX_COUNT {
        return Err(Error::InvalidArgument(format!(
            "count must be in 1..={MAX_COUNT}, got {count}"
        )));
    }
    let n = grid.n_points();
    if count > n {
        return Err(Error::InvalidArgument(format!(
            "count {count} exceeds grid size {n}"
        )));
    }
    let h = grid.spacing();
    let values = grid.values();
    // Hermitian part; the decomposition only reads one triangle
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        (values[[i, j]] + values[[j, i]].conj()) * (0.5 * h)
    });
    let eig = matrix
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::Decomposition("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = &order[..count];

    let eigenvalues: Vec<f64> = top.iter().map(|&k| eig.eigenvalues[k]).collect();
    if let Some(bad) = eigenvalues
        .iter()
        .find(|&&v| v < NEGATIVE_SLACK || !v.is_finite())
    {
        return Err(Error::Decomposition(format!(
            "leading eigenvalue {bad} is negative"
        )));
    }
    let eigenvectors = top
        .iter()
        .map(|&k| {
            let col = eig.eigenvectors.column(k);
            let norm = col.norm();
            col.iter().map(|v| v / norm).collect()
        })
        .collect();
    Ok(KernelSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// |⟨v|w⟩|² for unit vectors.
pub fn overlap(v: &[Complex64], w: &[Complex64]) -> f64 {
    v.iter()
        .zip(w)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .norm_sqr()
}
