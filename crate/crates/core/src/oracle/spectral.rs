use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{to_dense, OperatorSum};
use crate::error::{Error, Result};
use crate::models::DEFAULT_SITE_CAP;

/// Absolute energy tolerance for grouping degenerate levels.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Full spectrum of a Hermitian Hamiltonian, ascending.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub n_sites: usize,
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: DMatrix<Complex64>,
    /// Index groups of levels within [`DEGENERACY_TOL`] of their neighbours.
    pub groups: Vec<Vec<usize>>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> DVector<Complex64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `H ψ = E ψ` residual norm with `E = <ψ|H|ψ>`.
    pub fn eigen_residual(&self, h: &DMatrix<Complex64>, psi: &DVector<Complex64>) -> (f64, f64) {
        let hpsi = h * psi;
        let e = psi.dotc(&hpsi).re;
        let r = (hpsi - psi * Complex64::new(e, 0.0)).norm();
        (e, r)
    }

    /// `‖H − V Λ V†‖_max`.
    pub fn reconstruction_error(&self, h: &DMatrix<Complex64>) -> f64 {
        let lam = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|e| Complex64::new(*e, 0.0)),
        ));
        let rec = &self.eigenvectors * lam * self.eigenvectors.adjoint();
        (h - rec).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Differences `ε_m − ε_n` over all level pairs.
    pub fn bohr_frequencies(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim() * self.dim());
        for a in &self.eigenvalues {
            for b in &self.eigenvalues {
                out.push(a - b);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

pub fn exact_diagonalize(h: &OperatorSum) -> Result<SpectralData> {
    exact_diagonalize_capped(h, DEFAULT_SITE_CAP)
}

pub fn exact_diagonalize_capped(h: &OperatorSum, site_cap: usize) -> Result<SpectralData> {
    let n = h.n_sites();
    if n > site_cap {
        return Err(Error::Resource {
            what: "exact diagonalization (site-flavors)".into(),
            limit: site_cap,
            residual: None,
        });
    }
    if !h.is_hermitian() {
        return Err(Error::Validation("Hamiltonian has complex coefficients (not Hermitian)".into()));
    }
    let m = to_dense(h)?;
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let dim = eigenvalues.len();
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, e) in eigenvalues.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (e - eigenvalues[*g.last().unwrap()]).abs() < DEGENERACY_TOL => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    Ok(SpectralData {
        n_sites: n,
        eigenvalues,
        eigenvectors,
        groups,
    })
}
