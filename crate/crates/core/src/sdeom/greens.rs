use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Poles closer than this are merged; frequencies closer than this to a pole are rejected.
pub const POLE_TOL: f64 = 1e-9;

/// Residues smaller than this are dropped from pole lists.
pub const RESIDUE_TOL: f64 = 1e-13;

/// Which two-time function is represented.
///
/// `Plus` is `iG₊(t) = θ(t)<δA(t)δB> + θ(−t)<δB δA(t)>`; its equal-time jump and residue
/// sum are `<[A, B]>`. `Minus` uses the opposite sign in the backward branch; its residue
/// sum is `<{A, B}> − 2<A><B>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Plus,
    Minus,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Plus => "plus",
            Kind::Minus => "minus",
        }
    }

    /// Sign of the backward-branch residue.
    pub fn backward_sign(self) -> f64 {
        match self {
            Kind::Plus => -1.0,
            Kind::Minus => 1.0,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Zero-frequency contributions are kept but tagged `Static`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoleClass {
    Dynamical,
    Static,
}

impl PoleClass {
    pub fn name(self) -> &'static str {
        match self {
            PoleClass::Dynamical => "dynamical",
            PoleClass::Static => "static",
        }
    }

    pub fn of(position: f64) -> Self {
        if position.abs() < POLE_TOL {
            PoleClass::Static
        } else {
            PoleClass::Dynamical
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub position: f64,
    pub residue: Complex64,
    pub class: PoleClass,
}

/// `G(ω) = Σ_p r_p / (ω − p)`, poles sorted by position.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensFunction {
    pub kind: Kind,
    pub poles: Vec<Pole>,
}

impl GreensFunction {
    /// Sorts, merges poles within [`POLE_TOL`] and drops residues below [`RESIDUE_TOL`].
    pub fn from_raw(kind: Kind, mut raw: Vec<(f64, Complex64)>) -> Self {
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, Complex64, f64)> = Vec::new();
        for (p, r) in raw {
            match merged.last_mut() {
                Some((q, s, w)) if (p - *q).abs() < POLE_TOL => {
                    // Residue-weighted position keeps clusters centred on the dominant member.
                    let wp = r.norm();
                    if *w + wp > 0.0 {
                        *q = (*q * *w + p * wp) / (*w + wp);
                    }
                    *w += wp;
                    *s += r;
                }
                _ => merged.push((p, r, r.norm())),
            }
        }
        let poles = merged
            .into_iter()
            .filter(|(_, r, _)| r.norm() >= RESIDUE_TOL)
            .map(|(p, r, _)| {
                let class = PoleClass::of(p);
                let position = if class == PoleClass::Static { 0.0 } else { p };
                Pole { position, residue: r, class }
            })
            .collect();
        Self { kind, poles }
    }

    pub fn dynamical(&self) -> impl Iterator<Item = &Pole> {
        self.poles.iter().filter(|p| p.class == PoleClass::Dynamical)
    }

    pub fn static_weight(&self) -> Complex64 {
        self.poles
            .iter()
            .filter(|p| p.class == PoleClass::Static)
            .map(|p| p.residue)
            .sum()
    }

    fn eval_filtered(&self, omega: Complex64, include_static: bool) -> Result<Complex64> {
        let mut acc = Complex64::default();
        for p in &self.poles {
            if !include_static && p.class == PoleClass::Static {
                continue;
            }
            let d = omega - p.position;
            if d.norm() < POLE_TOL {
                return Err(Error::PoleProximity {
                    omega: format!("{omega}"),
                    pole: p.position,
                    distance: d.norm(),
                });
            }
            acc += p.residue / d;
        }
        Ok(acc)
    }

    /// `Σ r / (ω − p)` over all poles.
    pub fn evaluate(&self, omega: Complex64) -> Result<Complex64> {
        self.eval_filtered(omega, true)
    }

    /// As [`evaluate`](Self::evaluate) excluding static poles.
    pub fn evaluate_dynamical(&self, omega: Complex64) -> Result<Complex64> {
        self.eval_filtered(omega, false)
    }

    /// Evaluation at `ω + iη`.
    pub fn evaluate_broadened(&self, omega: f64, eta: f64) -> Result<Complex64> {
        self.evaluate(Complex64::new(omega, eta))
    }

    /// `Σ r e^{−ipt} = <[δA(t), δB]_∓>` for the represented kind.
    pub fn time_domain(&self, t: f64) -> Complex64 {
        self.poles
            .iter()
            .map(|p| p.residue * Complex64::new(0.0, -p.position * t).exp())
            .sum()
    }

    /// `Σ r p^n`.
    pub fn spectral_moment(&self, n: u32) -> Complex64 {
        self.poles
            .iter()
            .map(|p| p.residue * p.position.powi(n as i32))
            .sum()
    }

    /// Residue sum, equal to the equal-time inhomogeneity.
    pub fn residue_sum(&self) -> Complex64 {
        self.spectral_moment(0)
    }

    /// `−Σ_{dynamical} r / p`, the zero-frequency value with static poles removed.
    pub fn static_limit(&self) -> Complex64 {
        self.dynamical().map(|p| -p.residue / p.position).sum()
    }

    pub fn nearest_pole_distance(&self, omega: Complex64) -> f64 {
        self.poles
            .iter()
            .map(|p| (omega - p.position).norm())
            .fold(f64::INFINITY, f64::min)
    }
}
