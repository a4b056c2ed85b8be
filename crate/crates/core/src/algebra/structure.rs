use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::word::PauliWord;
use crate::error::{check_sites, Error, Result};

/// Sparse tensor over `(α, β, γ)` basis indices.
pub type Table = BTreeMap<(usize, usize, usize), Complex64>;

/// A product `u_α u_β` that lands on a word outside the supplied basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenProduct {
    pub alpha: usize,
    pub beta: usize,
    pub phase: Complex64,
    pub word: PauliWord,
}

/// Plain-product, commutator and anticommutator tables over a finite word list.
///
/// `u_α u_β = Σ_γ a^{αβ}_γ u_γ`, `b^{αβ}_γ = a^{αβ}_γ − a^{βα}_γ`, `f^{αβ}_γ = a^{αβ}_γ + a^{βα}_γ`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub basis: Vec<PauliWord>,
    pub a: Table,
    pub b: Table,
    pub f: Table,
    /// Products whose result is not in `basis`, in `(α, β)` order.
    pub closure_report: Vec<OpenProduct>,
}

impl StructureConstants {
    pub fn a(&self, alpha: usize, beta: usize, gamma: usize) -> Complex64 {
        self.a.get(&(alpha, beta, gamma)).copied().unwrap_or_default()
    }

    pub fn b(&self, alpha: usize, beta: usize, gamma: usize) -> Complex64 {
        self.b.get(&(alpha, beta, gamma)).copied().unwrap_or_default()
    }

    pub fn f(&self, alpha: usize, beta: usize, gamma: usize) -> Complex64 {
        self.f.get(&(alpha, beta, gamma)).copied().unwrap_or_default()
    }

    pub fn is_closed(&self) -> bool {
        self.closure_report.is_empty()
    }

    pub fn index_of(&self, w: &PauliWord) -> Option<usize> {
        self.basis.iter().position(|u| u == w)
    }
}

pub fn structure_constants(basis: &[PauliWord]) -> Result<StructureConstants> {
    let n = match basis.first() {
        Some(w) => w.n_sites(),
        None => return Err(Error::Validation("structure constants need a non-empty basis".into())),
    };
    let mut index = HashMap::with_capacity(basis.len());
    for (i, w) in basis.iter().enumerate() {
        check_sites(n, w.n_sites())?;
        if index.insert(*w, i).is_some() {
            return Err(Error::Validation(format!("duplicate basis word {w}")));
        }
    }

    let mut a = Table::new();
    let mut closure_report = Vec::new();
    for (al, u) in basis.iter().enumerate() {
        for (be, v) in basis.iter().enumerate() {
            let (ph, w) = u.product_unchecked(v);
            match index.get(&w) {
                Some(&g) => {
                    a.insert((al, be, g), ph.to_complex());
                }
                None => closure_report.push(OpenProduct {
                    alpha: al,
                    beta: be,
                    phase: ph.to_complex(),
                    word: w,
                }),
            }
        }
    }

    let mut b = Table::new();
    let mut f = Table::new();
    for (&(al, be, g), &v) in &a {
        let t = a.get(&(be, al, g)).copied().unwrap_or_default();
        let (bv, fv) = (v - t, v + t);
        // Phases are ±1, ±i so sums and differences are exact; zero entries are dropped.
        if bv != Complex64::default() {
            b.insert((al, be, g), bv);
        }
        if fv != Complex64::default() {
            f.insert((al, be, g), fv);
        }
    }

    Ok(StructureConstants {
        basis: basis.to_vec(),
        a,
        b,
        f,
        closure_report,
    })
}
