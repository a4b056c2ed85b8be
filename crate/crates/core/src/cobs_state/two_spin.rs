//! The two-spin state family `sinθ|↑↓> + cosθ|↓↑>` and the grade-2 composite operators of a pair.

use nalgebra::DVector;
use num_complex::Complex64;

use super::basis::enumerate_cobs;
use super::cumulant::connected_expectation;
use super::state::{expectations_from_state, StateSpec};
use crate::algebra::{spin, Axis, OperatorSum};
use crate::error::{Error, Result};

/// `sinθ|↑↓> + cosθ|↓↑>` with the full 16-word expectation table.
///
/// Site `a` = 0 carries `<s^z_a> = −cos(2θ)/2`, so `θ = π/2` is `|↑↓>` with `<s^z_a> = +1/2`.
pub fn two_spin_state(theta: f64) -> StateSpec {
    let mut psi = DVector::zeros(4);
    psi[0b01] = Complex64::new(theta.sin(), 0.0);
    psi[0b10] = Complex64::new(theta.cos(), 0.0);
    expectations_from_state(&psi, &enumerate_cobs(2, 2).expect("two sites"))
        .expect("unit vector by construction")
}

/// `(|↑↓> + |↓↑>)/√2`.
pub fn triplet_state() -> StateSpec {
    two_spin_state(std::f64::consts::FRAC_PI_4)
}

/// `(|↑↓> − |↓↑>)/√2`, up to a global phase.
pub fn singlet_state() -> StateSpec {
    two_spin_state(-std::f64::consts::FRAC_PI_4)
}

/// Total, staggered, bond and diagonal operators of a site pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Grade2Pair {
    pub a: usize,
    pub b: usize,
    /// `S^α = s^α_a + s^α_b`.
    pub s: [OperatorSum; 3],
    /// `η^α = s^α_a − s^α_b`.
    pub eta: [OperatorSum; 3],
    /// `B_A^γ = 2 Σ ε_{αβγ} s^α_a s^β_b`.
    pub b_a: [OperatorSum; 3],
    /// `B_S^γ = 2 Σ ε_{αβγ}² (s^α_a s^β_b + s^β_a s^α_b)`.
    pub b_s: [OperatorSum; 3],
    /// `D^α = 2 s^α_a s^α_b`.
    pub d: [OperatorSum; 3],
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

impl Grade2Pair {
    pub fn new(n_sites: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::Validation(format!("pair sites must differ, got {a} twice")));
        }
        let sa = |k: usize| spin(n_sites, a, Axis::ALL[k]);
        let sb = |k: usize| spin(n_sites, b, Axis::ALL[k]);
        let mut prod = vec![vec![OperatorSum::zero(n_sites); 3]; 3];
        for (i, row) in prod.iter_mut().enumerate() {
            for (j, p) in row.iter_mut().enumerate() {
                *p = sa(i)?.mul(&sb(j)?)?;
            }
        }
        let build = |f: &dyn Fn(usize) -> Result<OperatorSum>| -> Result<[OperatorSum; 3]> {
            Ok([f(0)?, f(1)?, f(2)?])
        };
        let s = build(&|k| sa(k)?.add(&sb(k)?))?;
        let eta = build(&|k| sa(k)?.sub(&sb(k)?))?;
        let b_a = build(&|g| {
            let mut acc = OperatorSum::zero(n_sites);
            for i in 0..3 {
                for j in 0..3 {
                    let e = levi_civita(i, j, g);
                    if e != 0.0 {
                        acc = acc.axpy(Complex64::new(2.0 * e, 0.0), &prod[i][j])?;
                    }
                }
            }
            Ok(acc)
        })?;
        let b_s = build(&|g| {
            let mut acc = OperatorSum::zero(n_sites);
            for i in 0..3 {
                for j in 0..3 {
                    let e = levi_civita(i, j, g);
                    if e != 0.0 {
                        let sym = prod[i][j].add(&prod[j][i])?;
                        acc = acc.axpy(Complex64::new(2.0 * e * e, 0.0), &sym)?;
                    }
                }
            }
            Ok(acc)
        })?;
        let d = build(&|k| Ok(prod[k][k].scale_real(2.0)))?;
        Ok(Self { a, b, s, eta, b_a, b_s, d })
    }

    /// The fifteen non-identity operators with labels, in the order S, η, B_S, B_A, D.
    pub fn labelled(&self) -> Vec<(String, &OperatorSum)> {
        let mut out = Vec::with_capacity(15);
        for (name, fam) in [
            ("S", &self.s),
            ("eta", &self.eta),
            ("B_S", &self.b_s),
            ("B_A", &self.b_a),
            ("D", &self.d),
        ] {
            for (k, op) in fam.iter().enumerate() {
                out.push((format!("{name}^{}", Axis::ALL[k].name()), op));
            }
        }
        out
    }

    /// Connected averages of all fifteen operators under `s`.
    pub fn cumulants(&self, s: &StateSpec) -> Result<Vec<(String, f64)>> {
        self.labelled()
            .into_iter()
            .map(|(name, op)| Ok((name, connected_expectation(s, op)?.re)))
            .collect()
    }
}
