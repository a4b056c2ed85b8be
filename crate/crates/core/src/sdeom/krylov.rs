use num_complex::Complex64;

use crate::algebra::OperatorSum;
use crate::error::{check_sites, Error, Result};

/// Relative norm below which a new Krylov direction counts as dependent.
pub const KRYLOV_TOL: f64 = 1e-12;

/// Largest allowed `‖[u, H] − P[u, H]‖` over the basis after closure.
pub const CLOSURE_TOL: f64 = 1e-10;

const MAX_REORTH_PASSES: usize = 6;

/// `[O, H]`; `i dO/dt = [O, H]`.
pub fn adjoint_action(o: &OperatorSum, h: &OperatorSum) -> Result<OperatorSum> {
    check_sites(o.n_sites(), h.n_sites())?;
    if !h.is_hermitian() {
        return Err(Error::Validation(
            "Hamiltonian has complex coefficients (not Hermitian)".into(),
        ));
    }
    o.commutator(h)
}

/// Orthonormal basis of the operator subspace generated from `o0` by repeated `[·, H]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovBasis {
    pub vectors: Vec<OperatorSum>,
    /// Largest out-of-span component of `[u, H]` over the basis.
    pub closure_residual: f64,
}

impl KrylovBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coefficients `<u_k, op>` of `op` in the basis.
    pub fn coefficients(&self, op: &OperatorSum) -> Result<Vec<Complex64>> {
        self.vectors.iter().map(|u| u.inner(op)).collect()
    }

    /// `op − Σ_k <u_k, op> u_k`.
    pub fn residual(&self, op: &OperatorSum) -> Result<OperatorSum> {
        let mut r = op.clone();
        for u in &self.vectors {
            let c = u.inner(&r)?;
            r = r.axpy(-c, u)?;
        }
        Ok(r)
    }
}

fn project_out(r: &mut OperatorSum, basis: &[OperatorSum]) -> Result<()> {
    for u in basis {
        let c = u.inner(r)?;
        if c.norm() > 0.0 {
            *r = r.axpy(-c, u)?;
        }
    }
    Ok(())
}

/// Modified Gram-Schmidt, repeated while a pass still removes more than half the norm.
fn orthogonalize(w: &OperatorSum, basis: &[OperatorSum]) -> Result<OperatorSum> {
    let mut r = w.clone();
    let mut prev = r.norm();
    for _ in 0..MAX_REORTH_PASSES {
        project_out(&mut r, basis)?;
        let now = r.norm();
        if now > 0.5 * prev || now == 0.0 {
            break;
        }
        prev = now;
    }
    Ok(r)
}

/// Arnoldi closure of `o0` under `[·, H]` with at most `cap` basis elements.
pub fn krylov_closure(o0: &OperatorSum, h: &OperatorSum, cap: usize) -> Result<KrylovBasis> {
    if cap == 0 {
        return Err(Error::Validation("Krylov cap must be at least 1".into()));
    }
    check_sites(o0.n_sites(), h.n_sites())?;
    let n0 = o0.norm();
    if n0 == 0.0 {
        return Err(Error::Validation("initial operator is zero".into()));
    }
    let mut vectors = vec![o0.scale_real(1.0 / n0)];
    let mut k = 0;
    loop {
        let w = adjoint_action(&vectors[k], h)?;
        let scale = w.norm().max(1.0);
        let r = orthogonalize(&w, &vectors)?;
        let rn = r.norm();
        if rn < KRYLOV_TOL * scale {
            break;
        }
        if vectors.len() >= cap {
            return Err(Error::Resource {
                what: "Krylov closure dimension".into(),
                limit: cap,
                residual: Some(rn),
            });
        }
        // A short residual is mostly rounding; one more pass after scaling restores orthogonality.
        let mut q = r.scale_real(1.0 / rn);
        project_out(&mut q, &vectors)?;
        let qn = q.norm();
        vectors.push(q.scale_real(1.0 / qn));
        k += 1;
    }
    let mut basis = KrylovBasis {
        vectors,
        closure_residual: 0.0,
    };
    let mut worst: f64 = 0.0;
    for u in &basis.vectors {
        let r = basis.residual(&adjoint_action(u, h)?)?;
        worst = worst.max(r.norm());
    }
    basis.closure_residual = worst;
    if worst > CLOSURE_TOL * h.norm().max(1.0) {
        return Err(Error::Validation(format!(
            "Krylov basis is not closed under [., H] (residual {worst:e})"
        )));
    }
    Ok(basis)
}
