use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::greens::{GreensFunction, Kind, POLE_TOL};
use super::krylov::{adjoint_action, krylov_closure, KrylovBasis};
use crate::algebra::{OperatorSum, PauliWord};
use crate::cobs_state::StateSpec;
use crate::error::{check_sites, Error, Result};

/// Which operator's hierarchy spans the subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Closure of the initial operator: `(ω − L) G[u_k; O_f] = Δ_k`.
    Initial,
    /// Closure of the final operator: `(ω + L_f) G[O_i; u_k] = Δ_k`.
    Final,
}

/// Assembly limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssembleOptions {
    /// Largest Krylov dimension; `None` means `min(4^N, 1024)`.
    pub cap: Option<usize>,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self { cap: None }
    }
}

fn default_cap(n_sites: usize) -> usize {
    if n_sites >= 5 {
        1024
    } else {
        1usize << (2 * n_sites)
    }
}

/// Linear equations of motion for `G[O_i; O_f]` on a closed operator subspace.
#[derive(Debug, Clone)]
pub struct SdeomSystem {
    pub kind: Kind,
    pub side: Side,
    pub basis: KrylovBasis,
    /// `L[α][γ] = <u_γ, [u_α, H]>` (negated for [`Side::Final`]).
    pub l: DMatrix<Complex64>,
    /// Commutator inhomogeneity, used by `G₊`.
    pub delta_plus: DVector<Complex64>,
    /// Subtracted anticommutator inhomogeneity, used by `G₋`.
    pub delta_minus: DVector<Complex64>,
    /// Coefficients of the spanned operator in the basis (`O_i` or `O_f`).
    pub projection: DVector<Complex64>,
    /// Bracket operators behind `delta_plus`, one per basis element.
    pub brackets_plus: Vec<OperatorSum>,
    /// Anticommutator operators behind `delta_minus`, one per basis element.
    pub brackets_minus: Vec<OperatorSum>,
    pub initial_operator: OperatorSum,
    pub final_operator: OperatorSum,
    pub hamiltonian: OperatorSum,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

fn collect_missing(state: &StateSpec, ops: &[&OperatorSum]) -> Result<()> {
    let mut missing: Vec<PauliWord> = ops.iter().flat_map(|o| state.missing_words(o)).collect();
    missing.sort();
    missing.dedup();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingData {
            words: missing.iter().map(|w| w.to_string()).collect(),
        })
    }
}

fn liouvillian(basis: &KrylovBasis, h: &OperatorSum) -> Result<DMatrix<Complex64>> {
    let d = basis.dim();
    let mut l = DMatrix::zeros(d, d);
    for (a, u) in basis.vectors.iter().enumerate() {
        let adu = adjoint_action(u, h)?;
        for (g, v) in basis.vectors.iter().enumerate() {
            l[(a, g)] = v.inner(&adu)?;
        }
    }
    Ok(l)
}

fn hermitian_eigen(l: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let sym = (l + l.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(l.nrows(), l.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Builds the system on the closure of `O_i`; both inhomogeneities are assembled.
pub fn assemble(
    o_i: &OperatorSum,
    o_f: &OperatorSum,
    h: &OperatorSum,
    state: &StateSpec,
    kind: Kind,
) -> Result<SdeomSystem> {
    assemble_with(o_i, o_f, h, state, kind, Side::Initial, AssembleOptions::default())
}

/// Builds the system on the closure of `O_f` (the final-operator hierarchy).
pub fn assemble_conjugate(
    o_i: &OperatorSum,
    o_f: &OperatorSum,
    h: &OperatorSum,
    state: &StateSpec,
    kind: Kind,
) -> Result<SdeomSystem> {
    assemble_with(o_i, o_f, h, state, kind, Side::Final, AssembleOptions::default())
}

pub fn assemble_with(
    o_i: &OperatorSum,
    o_f: &OperatorSum,
    h: &OperatorSum,
    state: &StateSpec,
    kind: Kind,
    side: Side,
    opts: AssembleOptions,
) -> Result<SdeomSystem> {
    let n = h.n_sites();
    check_sites(n, o_i.n_sites())?;
    check_sites(n, o_f.n_sites())?;
    check_sites(n, state.n_sites())?;
    let cap = opts.cap.unwrap_or_else(|| default_cap(n));
    let spanned = match side {
        Side::Initial => o_i,
        Side::Final => o_f,
    };
    let basis = krylov_closure(spanned, h, cap)?;
    let mut l = liouvillian(&basis, h)?;
    if side == Side::Final {
        l = -l;
    }

    let mut brackets_plus = Vec::with_capacity(basis.dim());
    let mut brackets_minus = Vec::with_capacity(basis.dim());
    for u in &basis.vectors {
        let (p, m) = match side {
            Side::Initial => (u.commutator(o_f)?, u.anticommutator(o_f)?),
            Side::Final => (o_i.commutator(u)?, o_i.anticommutator(u)?),
        };
        brackets_plus.push(p);
        brackets_minus.push(m);
    }
    let mut needed: Vec<&OperatorSum> = brackets_plus.iter().chain(brackets_minus.iter()).collect();
    needed.extend(basis.vectors.iter());
    needed.push(o_i);
    needed.push(o_f);
    collect_missing(state, &needed)?;

    let d = basis.dim();
    let mean_i = state.expect(o_i)?;
    let mean_f = state.expect(o_f)?;
    let mut delta_plus = DVector::zeros(d);
    let mut delta_minus = DVector::zeros(d);
    for k in 0..d {
        let mu = state.expect(&basis.vectors[k])?;
        delta_plus[k] = state.expect(&brackets_plus[k])?;
        let sub = match side {
            Side::Initial => 2.0 * mu * mean_f,
            Side::Final => 2.0 * mean_i * mu,
        };
        delta_minus[k] = state.expect(&brackets_minus[k])? - sub;
    }
    let projection = DVector::from_vec(basis.coefficients(spanned)?);
    let (eigenvalues, eigenvectors) = hermitian_eigen(&l);
    Ok(SdeomSystem {
        kind,
        side,
        basis,
        l,
        delta_plus,
        delta_minus,
        projection,
        brackets_plus,
        brackets_minus,
        initial_operator: o_i.clone(),
        final_operator: o_f.clone(),
        hamiltonian: h.clone(),
        eigenvalues,
        eigenvectors,
    })
}

/// Linear-solve samples alongside the pole form.
#[derive(Debug, Clone)]
pub struct FrequencySolution {
    pub greens: GreensFunction,
    /// `(ω, G(ω))` from direct solves of `(ω − L) x = Δ`.
    pub samples: Vec<(Complex64, Complex64)>,
    /// Largest gap between the linear-solve and pole routes over the grid.
    pub route_gap: f64,
}

impl SdeomSystem {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn with_kind(&self, kind: Kind) -> Self {
        let mut s = self.clone();
        s.kind = kind;
        s
    }

    pub fn delta(&self) -> &DVector<Complex64> {
        match self.kind {
            Kind::Plus => &self.delta_plus,
            Kind::Minus => &self.delta_minus,
        }
    }

    /// Real eigenvalues of the Hermitian `L`, ascending.
    pub fn l_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn l_eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Largest anti-Hermitian part of `L`, a numerical health check.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.l - self.l.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Residue of the `k`-th eigenvector: `(pᵀ v_k)(v_k† Δ)`.
    fn residues(&self) -> Vec<(f64, Complex64)> {
        let delta = self.delta();
        (0..self.dim())
            .map(|k| {
                let v = self.eigenvectors.column(k);
                let left: Complex64 = self.projection.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                let right = v.dotc(delta);
                (self.eigenvalues[k], left * right)
            })
            .collect()
    }

    /// Pole/residue form from the eigendecomposition of `L`.
    pub fn greens(&self) -> GreensFunction {
        GreensFunction::from_raw(self.kind, self.residues())
    }

    /// `pᵀ (ω − L)^{-1} Δ` by a dense solve.
    pub fn solve_at(&self, omega: Complex64) -> Result<Complex64> {
        for &lam in &self.eigenvalues {
            let d = (omega - lam).norm();
            if d < POLE_TOL {
                return Err(Error::PoleProximity {
                    omega: format!("{omega}"),
                    pole: lam,
                    distance: d,
                });
            }
        }
        let d = self.dim();
        let m = DMatrix::<Complex64>::identity(d, d) * omega - &self.l;
        let x = m
            .lu()
            .solve(self.delta())
            .ok_or_else(|| Error::Singular(format!("(ω − L) is singular at ω = {omega}")))?;
        Ok(self.projection.iter().zip(x.iter()).map(|(a, b)| a * b).sum())
    }
}

/// Solves on every grid point by both routes.
pub fn solve_frequency(sys: &SdeomSystem, omega_grid: &[Complex64]) -> Result<FrequencySolution> {
    let greens = sys.greens();
    let mut samples = Vec::with_capacity(omega_grid.len());
    let mut route_gap: f64 = 0.0;
    for &w in omega_grid {
        let g = sys.solve_at(w)?;
        let p = greens.evaluate(w)?;
        route_gap = route_gap.max((g - p).norm());
        samples.push((w, g));
    }
    Ok(FrequencySolution {
        greens,
        samples,
        route_gap,
    })
}
