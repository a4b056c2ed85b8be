use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::spectral::SpectralData;
use crate::algebra::{to_dense, OperatorSum};
use crate::error::{check_sites, Error, Result};
use crate::sdeom::greens::{GreensFunction, Kind};

/// Largest `‖Hψ − Eψ‖` accepted for a state to count as stationary.
pub const EIGENSTATE_TOL: f64 = 1e-8;

fn hamiltonian_from_spectrum(spec: &SpectralData) -> DMatrix<Complex64> {
    let v = &spec.eigenvectors;
    let lam = DMatrix::from_diagonal(&DVector::from_iterator(
        spec.dim(),
        spec.eigenvalues.iter().map(|e| Complex64::new(*e, 0.0)),
    ));
    v * lam * v.adjoint()
}

fn check_state(spec: &SpectralData, psi: &DVector<Complex64>) -> Result<f64> {
    if psi.len() != spec.dim() {
        return Err(Error::Shape(format!(
            "state length {} does not match spectrum dimension {}",
            psi.len(),
            spec.dim()
        )));
    }
    if (psi.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Validation(format!("state norm {} is not 1", psi.norm())));
    }
    let h = hamiltonian_from_spectrum(spec);
    let (e, r) = spec.eigen_residual(&h, psi);
    if r > EIGENSTATE_TOL {
        return Err(Error::Validation(format!(
            "state is not an eigenvector of H (residual {r:e})"
        )));
    }
    Ok(e)
}

/// Exact pole expansion of `G_kind[O_i; O_f]` in an eigenstate (or a vector inside one
/// degenerate level).
///
/// Forward residues `<ψ|δA|m><m|δB|ψ>` sit at `ε_m − ε`; backward residues
/// `∓<ψ|δB|m><m|δA|ψ>` sit at `ε − ε_m`. Zero-frequency terms are kept and tagged static.
pub fn lehmann_greens(
    spec: &SpectralData,
    psi: &DVector<Complex64>,
    o_i: &OperatorSum,
    o_f: &OperatorSum,
    kind: Kind,
) -> Result<GreensFunction> {
    check_sites(spec.n_sites, o_i.n_sites())?;
    check_sites(spec.n_sites, o_f.n_sites())?;
    let e = check_state(spec, psi)?;
    let dim = spec.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let a = to_dense(o_i)?;
    let b = to_dense(o_f)?;
    let ea = psi.dotc(&(&a * psi));
    let eb = psi.dotc(&(&b * psi));
    let da = a - &id * ea;
    let db = b - &id * eb;
    let v = &spec.eigenvectors;
    // Rows of V† δA ψ etc.: <m|δA|ψ>, <m|δB|ψ>, <ψ|δA|m>, <ψ|δB|m>.
    let vda = v.adjoint() * (&da * psi);
    let vdb = v.adjoint() * (&db * psi);
    let ada = v.adjoint() * (da.adjoint() * psi);
    let adb = v.adjoint() * (db.adjoint() * psi);
    let sign = kind.backward_sign();
    let mut raw = Vec::with_capacity(2 * dim);
    for m in 0..dim {
        let em = spec.eigenvalues[m];
        let psi_a_m = ada[m].conj();
        let psi_b_m = adb[m].conj();
        raw.push((em - e, psi_a_m * vdb[m]));
        raw.push((e - em, psi_b_m * vda[m] * sign));
    }
    Ok(GreensFunction::from_raw(kind, raw))
}

/// `<ψ(t)|O|ψ(t)>` with `ψ(t) = e^{−iHt} ψ`.
pub fn time_evolve_expectation(
    spec: &SpectralData,
    psi: &DVector<Complex64>,
    o: &OperatorSum,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    check_sites(spec.n_sites, o.n_sites())?;
    if psi.len() != spec.dim() {
        return Err(Error::Shape(format!(
            "state length {} does not match spectrum dimension {}",
            psi.len(),
            spec.dim()
        )));
    }
    let v = &spec.eigenvectors;
    let coeffs = v.adjoint() * psi;
    // O in the eigenbasis.
    let om = v.adjoint() * to_dense(o)? * v;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let ct = DVector::from_iterator(
            spec.dim(),
            coeffs
                .iter()
                .zip(&spec.eigenvalues)
                .map(|(c, e)| c * Complex64::new(0.0, -e * t).exp()),
        );
        out.push(ct.dotc(&(&om * &ct)));
    }
    Ok(out)
}
