use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::basis::{enumerate_cobs, GradedBasis};
use crate::algebra::dense::{word_matrix_element, word_to_dense, DENSE_MAX_SITES};
use crate::algebra::{OperatorSum, PauliWord};
use crate::error::{Error, Result};

/// Tolerance on state normalization and on identity/bound checks of expectation tables.
pub const STATE_TOL: f64 = 1e-12;

/// A state described by its expectation values over a set of Pauli words.
///
/// When a dense wavefunction is attached, expectations of words outside the stored table
/// are computed from it on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    n_sites: usize,
    expectations: BTreeMap<PauliWord, f64>,
    psi: Option<DVector<Complex64>>,
}

impl StateSpec {
    /// Builds a state from an explicit expectation table.
    ///
    /// The identity word is inserted with value 1 when absent.
    pub fn from_expectations<I>(n_sites: usize, table: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliWord, f64)>,
    {
        let id = PauliWord::identity(n_sites)?;
        let mut expectations = BTreeMap::new();
        for (w, v) in table {
            crate::error::check_sites(n_sites, w.n_sites())?;
            if !v.is_finite() {
                return Err(Error::Validation(format!("expectation of {w} is not finite")));
            }
            if v.abs() > 1.0 + STATE_TOL {
                return Err(Error::Validation(format!(
                    "|<{w}>| = {} exceeds 1",
                    v.abs()
                )));
            }
            if expectations.insert(w, v).is_some() {
                return Err(Error::Validation(format!("duplicate expectation for {w}")));
            }
        }
        match expectations.get(&id) {
            Some(v) if (v - 1.0).abs() > STATE_TOL => {
                return Err(Error::Validation(format!(
                    "expectation of the identity word must be 1, got {v}"
                )))
            }
            Some(_) => {}
            None => {
                expectations.insert(id, 1.0);
            }
        }
        Ok(Self {
            n_sites,
            expectations,
            psi: None,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn psi(&self) -> Option<&DVector<Complex64>> {
        self.psi.as_ref()
    }

    /// Stored expectation table in canonical word order.
    pub fn table(&self) -> &BTreeMap<PauliWord, f64> {
        &self.expectations
    }

    /// Words present in the stored table, grouped by grade.
    pub fn basis(&self) -> GradedBasis {
        let max = self.expectations.keys().map(|w| w.grade()).max().unwrap_or(0);
        // The table always contains the identity, so enumeration cannot fail here.
        enumerate_cobs(self.n_sites, max).expect("grade bounded by n_sites")
    }

    pub fn expect_word(&self, w: &PauliWord) -> Result<f64> {
        crate::error::check_sites(self.n_sites, w.n_sites())?;
        if let Some(v) = self.expectations.get(w) {
            return Ok(*v);
        }
        match &self.psi {
            Some(psi) => Ok(word_matrix_element(w, psi, psi).re),
            None => Err(Error::MissingData {
                words: vec![w.to_string()],
            }),
        }
    }

    /// `<op>`; all absent words are collected into a single missing-data error.
    pub fn expect(&self, op: &OperatorSum) -> Result<Complex64> {
        crate::error::check_sites(self.n_sites, op.n_sites())?;
        let mut acc = Complex64::default();
        let mut missing = Vec::new();
        for (w, c) in op.terms() {
            match self.expect_word(w) {
                Ok(v) => acc += c * v,
                Err(Error::MissingData { words }) => missing.extend(words),
                Err(e) => return Err(e),
            }
        }
        if missing.is_empty() {
            Ok(acc)
        } else {
            Err(Error::MissingData { words: missing })
        }
    }

    /// Words of `op` with no available expectation value.
    pub fn missing_words(&self, op: &OperatorSum) -> Vec<PauliWord> {
        if self.psi.is_some() {
            return Vec::new();
        }
        op.words()
            .filter(|w| !self.expectations.contains_key(w))
            .copied()
            .collect()
    }

    /// `(word, expectation)` rows in canonical order.
    pub fn to_rows(&self) -> Vec<(String, f64)> {
        self.expectations
            .iter()
            .map(|(w, v)| (w.to_string(), *v))
            .collect()
    }
}

/// `<u> = <psi|u|psi>` for every word of `basis`; the wavefunction is kept on the state.
pub fn expectations_from_state(psi: &DVector<Complex64>, basis: &GradedBasis) -> Result<StateSpec> {
    let n = basis.n_sites();
    if n > DENSE_MAX_SITES || psi.len() != 1usize << n {
        return Err(Error::Shape(format!(
            "state vector of length {} does not match {n} site-flavors",
            psi.len()
        )));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::Validation(format!(
            "state vector must have unit norm, got {norm}"
        )));
    }
    let expectations = basis
        .words()
        .map(|w| (*w, word_matrix_element(w, psi, psi).re))
        .collect();
    Ok(StateSpec {
        n_sites: n,
        expectations,
        psi: Some(psi.clone()),
    })
}

/// Normalizes `psi` and returns the state with the full basis table.
pub fn pure_state(psi: &DVector<Complex64>) -> Result<StateSpec> {
    let dim = psi.len();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Shape(format!(
            "state vector length {dim} is not a power of two >= 2"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::Validation("zero state vector".into()));
    }
    expectations_from_state(&(psi / Complex64::new(norm, 0.0)), &enumerate_cobs(n, n)?)
}

/// `ρ = Σ_u <u> u / 2^N` over the full basis.
pub fn density_matrix_from_expectations(s: &StateSpec) -> Result<DMatrix<Complex64>> {
    let n = s.n_sites();
    let full = enumerate_cobs(n, n)?;
    let missing: Vec<String> = full
        .words()
        .filter(|w| !s.expectations.contains_key(w))
        .map(|w| w.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingData { words: missing });
    }
    let dim = 1usize << n;
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for (w, v) in &s.expectations {
        if *v != 0.0 {
            rho += word_to_dense(w)? * Complex64::new(*v / dim as f64, 0.0);
        }
    }
    Ok(rho)
}

/// Smallest eigenvalue of a Hermitian density matrix (negative values flag unphysical input).
pub fn min_eigenvalue(rho: &DMatrix<Complex64>) -> f64 {
    rho.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
