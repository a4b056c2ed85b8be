//! Dense matrix representation of words and sums.
//!
//! Basis index convention: site 0 is the most significant bit and bit value 0 is spin up
//! (`Z = +1`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::sum::OperatorSum;
use super::word::PauliWord;
use crate::error::{Error, Result};

/// Largest site count for which dense matrices are built.
pub const DENSE_MAX_SITES: usize = 12;

fn check_dense(n: usize) -> Result<usize> {
    if n > DENSE_MAX_SITES {
        return Err(Error::Resource {
            what: "dense operator dimension (site-flavors)".into(),
            limit: DENSE_MAX_SITES,
            residual: None,
        });
    }
    Ok(1usize << n)
}

/// `i^{x·z}` together with the index masks; `w|k> = phase(k) |k ^ x>`.
struct WordAction {
    x: usize,
    z: usize,
    base: Complex64,
}

impl WordAction {
    fn new(w: &PauliWord) -> Self {
        let (x, z) = w.index_masks();
        let base = super::word::Phase::from_exponent(w.grade_y()).to_complex();
        Self { x, z, base }
    }

    #[inline]
    fn phase(&self, k: usize) -> Complex64 {
        if (self.z & k).count_ones() % 2 == 1 {
            -self.base
        } else {
            self.base
        }
    }
}

impl PauliWord {
    /// Number of `Y` letters.
    pub(crate) fn grade_y(&self) -> u32 {
        (self.x_mask() & self.z_mask()).count_ones()
    }
}

pub fn word_to_dense(w: &PauliWord) -> Result<DMatrix<Complex64>> {
    let dim = check_dense(w.n_sites())?;
    let act = WordAction::new(w);
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        m[(k ^ act.x, k)] = act.phase(k);
    }
    Ok(m)
}

pub fn to_dense(op: &OperatorSum) -> Result<DMatrix<Complex64>> {
    let dim = check_dense(op.n_sites())?;
    let mut m = DMatrix::zeros(dim, dim);
    for (w, c) in op.terms() {
        let act = WordAction::new(w);
        for k in 0..dim {
            m[(k ^ act.x, k)] += c * act.phase(k);
        }
    }
    Ok(m)
}

/// `op |psi>`.
pub fn apply(op: &OperatorSum, psi: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let dim = check_dense(op.n_sites())?;
    if psi.len() != dim {
        return Err(Error::Shape(format!(
            "state vector length {} does not match operator dimension {dim}",
            psi.len()
        )));
    }
    let mut out = DVector::zeros(dim);
    for (w, c) in op.terms() {
        let act = WordAction::new(w);
        for k in 0..dim {
            out[k ^ act.x] += c * act.phase(k) * psi[k];
        }
    }
    Ok(out)
}

/// `<phi| w |psi>` for a single word.
pub fn word_matrix_element(
    w: &PauliWord,
    phi: &DVector<Complex64>,
    psi: &DVector<Complex64>,
) -> Complex64 {
    let act = WordAction::new(w);
    let mut acc = Complex64::default();
    for k in 0..psi.len() {
        acc += phi[k ^ act.x].conj() * act.phase(k) * psi[k];
    }
    acc
}

/// `tr(w · m) / 2^n`.
pub fn word_trace(w: &PauliWord, m: &DMatrix<Complex64>) -> Complex64 {
    let act = WordAction::new(w);
    let dim = m.nrows();
    let mut acc = Complex64::default();
    for k in 0..dim {
        acc += act.phase(k) * m[(k, k ^ act.x)];
    }
    acc / dim as f64
}

/// Expands a `2^n × 2^n` matrix as `Σ_w tr(w M)/2^n · w`.
pub fn expand_operator(m: &DMatrix<Complex64>) -> Result<OperatorSum> {
    let dim = m.nrows();
    if m.ncols() != dim || dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Shape(format!(
            "expected a square matrix with power-of-two dimension >= 2, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = dim.trailing_zeros() as usize;
    check_dense(n)?;
    let mut terms = Vec::new();
    for x in 0..(1u64 << n) {
        for z in 0..(1u64 << n) {
            let w = PauliWord::from_masks(n, x, z)?;
            let c = word_trace(&w, m);
            terms.push((w, c));
        }
    }
    OperatorSum::from_terms(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::spin::{s_minus, s_plus};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_site_matrices() {
        let x = word_to_dense(&"X".parse().unwrap()).unwrap();
        let y = word_to_dense(&"Y".parse().unwrap()).unwrap();
        let z = word_to_dense(&"Z".parse().unwrap()).unwrap();
        assert_eq!(x, DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]));
        assert_eq!(y, DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]));
        assert_eq!(z, DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]));
    }

    #[test]
    fn site_zero_is_most_significant() {
        // Z on site 0 acting on |↓↑> = index 0b10 gives -1.
        let z0 = word_to_dense(&"ZI".parse().unwrap()).unwrap();
        assert_eq!(z0[(2, 2)], c(-1.0, 0.0));
        assert_eq!(z0[(1, 1)], c(1.0, 0.0));
    }

    #[test]
    fn dense_product_matches_word_product() {
        let words = PauliWord::all(2).unwrap();
        for u in &words {
            for v in &words {
                let (ph, w) = u.product(v).unwrap();
                let lhs = word_to_dense(u).unwrap() * word_to_dense(v).unwrap();
                let rhs = word_to_dense(&w).unwrap() * ph.to_complex();
                assert!((lhs - rhs).norm() < 1e-15, "{u} * {v}");
            }
        }
    }

    #[test]
    fn expand_identity_and_raising() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        let e = expand_operator(&id).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(&"II".parse().unwrap()), c(1.0, 0.0));

        let sp = s_plus(2, 0).unwrap();
        let back = expand_operator(&to_dense(&sp).unwrap()).unwrap();
        assert_eq!(back.coeff(&"XI".parse().unwrap()), c(0.5, 0.0));
        assert_eq!(back.coeff(&"YI".parse().unwrap()), c(0.0, 0.5));
        // s+ raises |↓> (index 1) to |↑> (index 0).
        let m = to_dense(&s_plus(1, 0).unwrap()).unwrap();
        assert_eq!(m[(0, 1)], c(1.0, 0.0));
        assert_eq!(to_dense(&s_minus(1, 0).unwrap()).unwrap()[(1, 0)], c(1.0, 0.0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            expand_operator(&DMatrix::<Complex64>::zeros(3, 3)),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            expand_operator(&DMatrix::<Complex64>::zeros(4, 2)),
            Err(Error::Shape(_))
        ));
    }
}
