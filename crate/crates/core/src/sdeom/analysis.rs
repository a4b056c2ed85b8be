use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::greens::{Kind, POLE_TOL};
use super::krylov::adjoint_action;
use super::system::{SdeomSystem, Side};
use crate::algebra::{structure_constants, OperatorSum, PauliWord};
use crate::cobs_state::{GradedBasis, StateSpec};
use crate::error::{check_sites, Error, Result};

/// Inhomogeneities below this magnitude are not pivotal.
pub const PIVOT_TOL: f64 = 1e-12;

/// Largest nesting depth accepted by [`moment_series`].
pub const MAX_MOMENT_ORDER: usize = 12;

/// One row of the equations of motion with a nonzero inhomogeneity.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotalChannel {
    pub index: usize,
    pub delta: Complex64,
    pub basis_element: OperatorSum,
    /// The bracket whose expectation gives `delta`, e.g. `[u_k, O_f]`.
    pub bracket: OperatorSum,
    pub relation: String,
}

/// Rows of the selected kind whose `|Δ_k|` exceeds [`PIVOT_TOL`].
pub fn pivotal_channels(sys: &SdeomSystem) -> Vec<PivotalChannel> {
    let delta = sys.delta();
    let brackets = match sys.kind {
        Kind::Plus => &sys.brackets_plus,
        Kind::Minus => &sys.brackets_minus,
    };
    let (lhs, rhs) = match sys.side {
        Side::Initial => ("u_k", "O_f"),
        Side::Final => ("O_i", "u_k"),
    };
    (0..sys.dim())
        .filter(|&k| delta[k].norm() > PIVOT_TOL)
        .map(|k| {
            let relation = match sys.kind {
                Kind::Plus => format!("[{lhs}, {rhs}] = {}", brackets[k]),
                Kind::Minus => format!("{{{lhs}, {rhs}}} - 2<{lhs}><{rhs}>, {{{lhs}, {rhs}}} = {}", brackets[k]),
            };
            PivotalChannel {
                index: k,
                delta: delta[k],
                basis_element: sys.basis.vectors[k].clone(),
                bracket: brackets[k].clone(),
                relation,
            }
        })
        .collect()
}

/// Plain-text report of [`pivotal_channels`].
pub fn pivotal_report(sys: &SdeomSystem) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "kind = {}", sys.kind);
    let _ = writeln!(s, "subspace_dimension = {}", sys.dim());
    let channels = pivotal_channels(sys);
    let _ = writeln!(s, "pivotal_channels = {}", channels.len());
    for c in channels {
        let _ = writeln!(s);
        let _ = writeln!(s, "[channel {}]", c.index);
        let _ = writeln!(s, "delta = {:.16e}{:+.16e}i", c.delta.re, c.delta.im);
        let _ = writeln!(s, "u_k = {}", c.basis_element);
        let _ = writeln!(s, "relation = {}", c.relation);
    }
    s
}

/// `r_α = <[u_α, H]>` for every word of `basis`; zero for stationary states.
pub fn eigenstate_residual(
    state: &StateSpec,
    h: &OperatorSum,
    basis: &GradedBasis,
) -> Result<Vec<(PauliWord, Complex64)>> {
    check_sites(state.n_sites(), h.n_sites())?;
    check_sites(basis.n_sites(), h.n_sites())?;
    let mut out = Vec::with_capacity(basis.len());
    let mut missing = Vec::new();
    for w in basis.words() {
        let u = OperatorSum::from_word(*w, Complex64::new(1.0, 0.0));
        let c = adjoint_action(&u, h)?;
        match state.expect(&c) {
            Ok(v) => out.push((*w, v)),
            Err(Error::MissingData { words }) => missing.extend(words),
            Err(e) => return Err(e),
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::MissingData { words: missing });
    }
    Ok(out)
}

pub fn max_residual(residuals: &[(PauliWord, Complex64)]) -> f64 {
    residuals.iter().map(|(_, r)| r.norm()).fold(0.0, f64::max)
}

/// `<O^{(n)}>` for `n = 0..=n_max`, `O^{(n+1)} = [O^{(n)}, H]`, so that
/// `<O(t)> = Σ_n <O^{(n)}> (−it)^n / n!`.
pub fn moment_series(
    o: &OperatorSum,
    h: &OperatorSum,
    state: &StateSpec,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    if n_max > MAX_MOMENT_ORDER {
        return Err(Error::Resource {
            what: "moment series order".into(),
            limit: MAX_MOMENT_ORDER,
            residual: None,
        });
    }
    let mut cur = o.clone();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        out.push(state.expect(&cur)?);
        if n < n_max {
            cur = adjoint_action(&cur, h)?;
        }
    }
    Ok(out)
}

/// Evaluates the truncated series at time `t`.
pub fn moment_series_value(moments: &[Complex64], t: f64) -> Complex64 {
    let mut acc = Complex64::default();
    let mut fac = Complex64::new(1.0, 0.0);
    for (n, m) in moments.iter().enumerate() {
        if n > 0 {
            fac *= Complex64::new(0.0, -t) / n as f64;
        }
        acc += m * fac;
    }
    acc
}

/// Per-word contribution `d_w <w>` to a zero-frequency response.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseChannel {
    pub word: PauliWord,
    pub d: Complex64,
    pub expectation: f64,
}

impl ResponseChannel {
    pub fn contribution(&self) -> Complex64 {
        self.d * self.expectation
    }
}

/// Zero-frequency value of `G₊[O_i; O_f]` with static poles removed, decomposed over the
/// words whose expectations enter `Δ₊`.
///
/// For a stationary state this is the first-order change of `<O_i>` under `H → H + O_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticResponse {
    pub value: Complex64,
    pub channels: Vec<ResponseChannel>,
}

impl StaticResponse {
    /// Sum of contributions from words accepted by `keep`.
    pub fn partial<F: Fn(&PauliWord) -> bool>(&self, keep: F) -> Complex64 {
        self.channels
            .iter()
            .filter(|c| keep(&c.word))
            .map(|c| c.contribution())
            .sum()
    }
}

pub fn static_response(sys: &SdeomSystem, state: &StateSpec) -> Result<StaticResponse> {
    if sys.side != Side::Initial {
        return Err(Error::Validation(
            "static response decomposition uses the initial-operator hierarchy".into(),
        ));
    }
    let d = sys.dim();
    // Words appearing in any bracket, canonical order.
    let mut words: BTreeMap<PauliWord, usize> = BTreeMap::new();
    for b in &sys.brackets_plus {
        for w in b.words() {
            let next = words.len();
            words.entry(*w).or_insert(next);
        }
    }
    let ordered: Vec<PauliWord> = words.keys().copied().collect();
    let col: BTreeMap<PauliWord, usize> = ordered.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut cmat = DMatrix::<Complex64>::zeros(d, ordered.len());
    for (k, b) in sys.brackets_plus.iter().enumerate() {
        for (w, c) in b.terms() {
            cmat[(k, col[w])] = *c;
        }
    }
    let vals = sys.l_eigenvalues();
    let vecs = sys.l_eigenvectors();
    let mut dvec = vec![Complex64::default(); ordered.len()];
    for k in 0..d {
        if vals[k].abs() < POLE_TOL {
            continue;
        }
        let v = vecs.column(k);
        let left: Complex64 = sys.projection.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        let right = v.adjoint() * &cmat;
        for (j, r) in right.iter().enumerate() {
            dvec[j] -= left * r / vals[k];
        }
    }
    let mut channels = Vec::new();
    let mut value = Complex64::default();
    for (w, dw) in ordered.iter().zip(dvec) {
        let e = state.expect_word(w)?;
        value += dw * e;
        channels.push(ResponseChannel {
            word: *w,
            d: dw,
            expectation: e,
        });
    }
    Ok(StaticResponse { value, channels })
}

/// `L[α][γ] = Σ_η h_η b^{αη}_γ` over a word list that `[·, H]` maps into itself.
pub fn liouvillian_from_structure(words: &[PauliWord], h: &OperatorSum) -> Result<DMatrix<Complex64>> {
    let mut all = words.to_vec();
    let mut h_coeff = BTreeMap::new();
    for (w, c) in h.terms() {
        let idx = match all.iter().position(|u| u == w) {
            Some(i) => i,
            None => {
                all.push(*w);
                all.len() - 1
            }
        };
        h_coeff.insert(idx, *c);
    }
    let sc = structure_constants(&all)?;
    let d = words.len();
    let leaves = |a: usize, w: &PauliWord| {
        Error::Validation(format!("[{}, H] leaves the word list through {w}", words[a]))
    };
    for open in &sc.closure_report {
        if open.alpha < d && h_coeff.contains_key(&open.beta) && !all[open.alpha].commutes_with(&all[open.beta]) {
            return Err(leaves(open.alpha, &open.word));
        }
    }
    let mut l = DMatrix::zeros(d, d);
    for (&(a, eta, g), b) in &sc.b {
        let Some(h_eta) = h_coeff.get(&eta) else { continue };
        if a >= d {
            continue;
        }
        if g >= d {
            return Err(leaves(a, &all[g]));
        }
        l[(a, g)] += h_eta * b;
    }
    Ok(l)
}
