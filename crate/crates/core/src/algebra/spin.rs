//! Spin-1/2 operators `s^α = σ^α / 2` and `s^± = s^x ± i s^y`.

use num_complex::Complex64;

use super::sum::OperatorSum;
use super::word::{Letter, PauliWord};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn letter(self) -> Letter {
        match self {
            Axis::X => Letter::X,
            Axis::Y => Letter::Y,
            Axis::Z => Letter::Z,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Pauli matrix `σ^α` on `site`.
pub fn pauli(n_sites: usize, site: usize, axis: Axis) -> Result<OperatorSum> {
    Ok(OperatorSum::from_word(
        PauliWord::single(n_sites, site, axis.letter())?,
        Complex64::new(1.0, 0.0),
    ))
}

pub fn spin(n_sites: usize, site: usize, axis: Axis) -> Result<OperatorSum> {
    Ok(pauli(n_sites, site, axis)?.scale_real(0.5))
}

pub fn sx(n_sites: usize, site: usize) -> Result<OperatorSum> {
    spin(n_sites, site, Axis::X)
}

pub fn sy(n_sites: usize, site: usize) -> Result<OperatorSum> {
    spin(n_sites, site, Axis::Y)
}

pub fn sz(n_sites: usize, site: usize) -> Result<OperatorSum> {
    spin(n_sites, site, Axis::Z)
}

pub fn s_plus(n_sites: usize, site: usize) -> Result<OperatorSum> {
    sx(n_sites, site)?.axpy(Complex64::new(0.0, 1.0), &sy(n_sites, site)?)
}

pub fn s_minus(n_sites: usize, site: usize) -> Result<OperatorSum> {
    sx(n_sites, site)?.axpy(Complex64::new(0.0, -1.0), &sy(n_sites, site)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_commutators() {
        let n = 2;
        let i = Complex64::new(0.0, 1.0);
        for (a, b, c) in [(Axis::X, Axis::Y, Axis::Z), (Axis::Y, Axis::Z, Axis::X), (Axis::Z, Axis::X, Axis::Y)] {
            let lhs = spin(n, 0, a).unwrap().commutator(&spin(n, 0, b).unwrap()).unwrap();
            assert_eq!(lhs, spin(n, 0, c).unwrap().scale(i));
        }
    }

    #[test]
    fn raising_lowering_anticommutator_is_identity() {
        let ac = s_plus(2, 1).unwrap().anticommutator(&s_minus(2, 1).unwrap()).unwrap();
        assert_eq!(ac, OperatorSum::identity(2).unwrap());
    }

    #[test]
    fn disjoint_sites_commute() {
        for a in Axis::ALL {
            for b in Axis::ALL {
                assert!(spin(3, 0, a).unwrap().commutator(&spin(3, 2, b).unwrap()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn spin_squares_to_quarter() {
        let z = sz(1, 0).unwrap();
        assert_eq!(z.mul(&z).unwrap(), OperatorSum::identity(1).unwrap().scale_real(0.25));
    }
}
