use num_complex::Complex64;

use super::state::StateSpec;
use crate::algebra::{Letter, OperatorSum, PauliWord};
use crate::error::{check_sites, Error, Result};

/// Largest number of factors accepted by [`cumulant`].
pub const MAX_CUMULANT_ORDER: usize = 4;

/// All set partitions of `{0, .., n-1}`; blocks list indices in ascending order.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[..i]).
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut a = vec![0usize; n];
    loop {
        let blocks = a.iter().copied().max().unwrap_or(0) + 1;
        let mut p = vec![Vec::new(); blocks];
        for (i, &b) in a.iter().enumerate() {
            p[b].push(i);
        }
        out.push(p);
        // Advance to the next restricted growth string.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let m = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= m {
                a[i] += 1;
                for v in a.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

fn validate_factors(s: &StateSpec, factors: &[OperatorSum]) -> Result<()> {
    if factors.is_empty() || factors.len() > MAX_CUMULANT_ORDER {
        return Err(Error::Validation(format!(
            "cumulant order must be in 1..={MAX_CUMULANT_ORDER}, got {}",
            factors.len()
        )));
    }
    let mut seen = 0u64;
    for (k, f) in factors.iter().enumerate() {
        check_sites(s.n_sites(), f.n_sites())?;
        let m = f.support_mask();
        if m & seen != 0 {
            return Err(Error::Validation(format!(
                "cumulant factor {k} overlaps the support of an earlier factor"
            )));
        }
        seen |= m;
    }
    Ok(())
}

fn block_expectation(s: &StateSpec, factors: &[OperatorSum], block: &[usize]) -> Result<Complex64> {
    let mut prod = factors[block[0]].clone();
    for &i in &block[1..] {
        prod = prod.mul(&factors[i])?;
    }
    s.expect(&prod)
}

/// Connected average of an ordered product of factors on disjoint sites.
///
/// `Σ_π (−1)^{|π|−1} (|π|−1)! Π_{B∈π} <Π_{i∈B} f_i>`, blocks keeping input order.
pub fn cumulant(s: &StateSpec, factors: &[OperatorSum]) -> Result<Complex64> {
    validate_factors(s, factors)?;
    let mut total = Complex64::default();
    for p in set_partitions(factors.len()) {
        let l = p.len();
        let weight = if l % 2 == 1 { 1.0 } else { -1.0 } * factorial(l - 1);
        let mut term = Complex64::new(weight, 0.0);
        for block in &p {
            term *= block_expectation(s, factors, block)?;
        }
        total += term;
    }
    Ok(total)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Hand-written recursive definitions for orders 1 to 3, used to cross-check [`cumulant`].
pub fn cumulant_recursive(s: &StateSpec, factors: &[OperatorSum]) -> Result<Complex64> {
    validate_factors(s, factors)?;
    let e = |idx: &[usize]| block_expectation(s, factors, idx);
    match factors.len() {
        1 => e(&[0]),
        2 => Ok(e(&[0, 1])? - e(&[0])? * e(&[1])?),
        3 => {
            let (a, b, c) = (e(&[0])?, e(&[1])?, e(&[2])?);
            let ab = e(&[0, 1])? - a * b;
            let ac = e(&[0, 2])? - a * c;
            let bc = e(&[1, 2])? - b * c;
            Ok(e(&[0, 1, 2])? - ab * c - ac * b - bc * a - a * b * c)
        }
        n => Err(Error::Validation(format!(
            "recursive cumulant implemented for orders 1..=3, got {n}"
        ))),
    }
}

/// `(u_i − <u_i>)(u_j − <u_j>)`.
pub fn cumulant_operator(s: &StateSpec, u_i: &OperatorSum, u_j: &OperatorSum) -> Result<OperatorSum> {
    let id = OperatorSum::identity(s.n_sites())?;
    let a = u_i.axpy(-s.expect(u_i)?, &id)?;
    let b = u_j.axpy(-s.expect(u_j)?, &id)?;
    a.mul(&b)
}

/// Splits a word into its single-site factors (one per non-identity letter, ascending site).
pub fn site_factors(w: &PauliWord) -> Vec<OperatorSum> {
    let n = w.n_sites();
    w.support()
        .map(|site| {
            let mut letters = vec![Letter::I; n];
            letters[site] = w.letter(site);
            let u = PauliWord::from_letters(&letters).expect("valid site");
            OperatorSum::from_word(u, Complex64::new(1.0, 0.0))
        })
        .collect()
}

/// Linear extension of the fully connected average over site factors of every word.
///
/// The identity word contributes its coefficient; words of grade above
/// [`MAX_CUMULANT_ORDER`] are rejected.
pub fn connected_expectation(s: &StateSpec, op: &OperatorSum) -> Result<Complex64> {
    let mut acc = Complex64::default();
    for (w, c) in op.terms() {
        if w.is_identity() {
            acc += c;
            continue;
        }
        acc += c * cumulant(s, &site_factors(w))?;
    }
    Ok(acc)
}
