//! Seeded random inputs and small independent oracles for checking `adt-core`.

use std::path::{Path, PathBuf};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use adt_core::algebra::{OperatorSum, PauliWord};
use adt_core::models::{build_qsm_lattice, AxisName, LatticeSpec};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(r: &mut ChaCha8Rng, n: usize) -> PauliWord {
    let m = 1u64 << n;
    PauliWord::from_masks(n, r.random_range(0..m), r.random_range(0..m)).expect("n <= 64")
}

pub fn random_nonidentity_word(r: &mut ChaCha8Rng, n: usize) -> PauliWord {
    loop {
        let w = random_word(r, n);
        if !w.is_identity() {
            return w;
        }
    }
}

/// Sum of `terms` random words with complex coefficients in the unit square.
pub fn random_sum(r: &mut ChaCha8Rng, n: usize, terms: usize) -> OperatorSum {
    let mut s = OperatorSum::zero(n);
    for _ in 0..terms {
        let w = random_word(r, n);
        s.add_term(w, Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    }
    s
}

/// Hermitian operator with a real coefficient on every non-identity word.
pub fn random_hamiltonian(r: &mut ChaCha8Rng, n: usize) -> OperatorSum {
    let mut h = OperatorSum::zero(n);
    for w in PauliWord::all(n).expect("small n") {
        if !w.is_identity() {
            h.add_term(w, c(r.random_range(-1.0..1.0)));
        }
    }
    h
}

/// Spin lattice on 2 or 3 sites: random fields, Heisenberg bonds and one extra coupling per bond.
pub fn random_lattice(r: &mut ChaCha8Rng) -> adt_core::Result<OperatorSum> {
    let n = r.random_range(2..=3);
    let axes = [AxisName::X, AxisName::Y, AxisName::Z];
    let mut spec = LatticeSpec { n_sites: n, ..Default::default() };
    for i in 0..n {
        spec = spec.with_field(i, axes[r.random_range(0..3)], r.random_range(-1.0..1.0));
        for j in i + 1..n {
            spec = spec.with_heisenberg(i, j, r.random_range(-1.0..1.0));
            let (a, b) = (axes[r.random_range(0..3)], axes[r.random_range(0..3)]);
            spec = spec.with_coupling(i, j, a, b, r.random_range(-1.0..1.0));
        }
    }
    build_qsm_lattice(&spec, 6)
}

/// Normalized random state vector on `n` sites.
pub fn random_psi(r: &mut ChaCha8Rng, n: usize) -> DVector<Complex64> {
    let v = DVector::from_fn(1 << n, |_, _| {
        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    });
    let norm = v.norm();
    v / c(norm)
}

pub fn basis_vector(dim: usize, k: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[k] = c(1.0);
    v
}

/// Applies a word letter by letter with explicit single-qubit rules (site 0 is the high bit).
pub fn apply_letters(w: &PauliWord, psi: &DVector<Complex64>) -> DVector<Complex64> {
    let n = w.n_sites();
    let text = w.to_string();
    let mut cur = psi.clone();
    let letters: Vec<char> = text.chars().collect();
    for (site, &ch) in letters.iter().enumerate().rev() {
        let bit = 1usize << (n - 1 - site);
        let mut next = DVector::zeros(cur.len());
        for k in 0..cur.len() {
            let up = k & bit == 0;
            let (dst, f) = match ch {
                'I' => (k, c(1.0)),
                'X' => (k ^ bit, c(1.0)),
                'Y' => (k ^ bit, if up { Complex64::i() } else { -Complex64::i() }),
                'Z' => (k, if up { c(1.0) } else { c(-1.0) }),
                other => panic!("unexpected letter {other}"),
            };
            next[dst] += f * cur[k];
        }
        cur = next;
    }
    cur
}

/// Finite-difference weights for the `m`-th derivative at 0 on nodes `xs` (Fornberg's recursion).
pub fn fd_weights(xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![vec![0.0; m + 1]; n];
    w[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (0..=mn).rev() {
                    let prev = if k > 0 { w[i - 1][k - 1] } else { 0.0 };
                    w[i][k] = c1 * (k as f64 * prev - xs[i - 1] * w[i - 1][k]) / c2;
                }
            }
            for k in (0..=mn).rev() {
                let prev = if k > 0 { w[j][k - 1] } else { 0.0 };
                w[j][k] = (xs[i] * w[j][k] - k as f64 * prev) / c3;
            }
        }
        c1 = c2;
    }
    w.iter().map(|row| row[m]).collect()
}

/// Repository root, two levels above this crate.
pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root exists")
}
