use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::word::PauliWord;
use crate::error::{check_sites, Error, Result};

/// Coefficients with magnitude below this are dropped after every arithmetic pass.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Tolerance used by [`OperatorSum::is_hermitian`] on imaginary parts.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Sparse complex linear combination of Pauli words over a fixed number of site-flavors.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum {
    n_sites: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl OperatorSum {
    pub fn zero(n_sites: usize) -> Self {
        Self {
            n_sites,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        Ok(Self::from_word(PauliWord::identity(n_sites)?, Complex64::new(1.0, 0.0)))
    }

    pub fn from_word(word: PauliWord, coeff: Complex64) -> Self {
        let mut s = Self::zero(word.n_sites());
        s.add_term(word, coeff);
        s
    }

    pub fn from_terms<I>(n_sites: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliWord, Complex64)>,
    {
        let mut s = Self::zero(n_sites);
        for (w, c) in terms {
            check_sites(n_sites, w.n_sites())?;
            s.accumulate(w, c);
        }
        s.prune();
        Ok(s)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &PauliWord> {
        self.terms.keys()
    }

    pub fn coeff(&self, word: &PauliWord) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    /// Adds `coeff · word`; the word must match `n_sites`.
    ///
    /// # Panics
    /// Panics when the word has a different site count.
    pub fn add_term(&mut self, word: PauliWord, coeff: Complex64) {
        assert_eq!(word.n_sites(), self.n_sites, "word length mismatch");
        self.accumulate(word, coeff);
        if let Some(c) = self.terms.get(&word) {
            if c.norm() < PRUNE_THRESHOLD {
                self.terms.remove(&word);
            }
        }
    }

    fn accumulate(&mut self, word: PauliWord, coeff: Complex64) {
        *self.terms.entry(word).or_default() += coeff;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n_sites);
        for (w, v) in &self.terms {
            out.terms.insert(*w, v * c);
        }
        out.prune();
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// `self + a · other`.
    pub fn axpy(&self, a: Complex64, other: &Self) -> Result<Self> {
        check_sites(self.n_sites, other.n_sites)?;
        let mut out = self.clone();
        for (w, v) in &other.terms {
            out.accumulate(*w, a * v);
        }
        out.prune();
        Ok(out)
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_sites(self.n_sites, other.n_sites)?;
        let mut out = Self::zero(self.n_sites);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let (ph, w) = u.product_unchecked(v);
                out.accumulate(w, a * b * ph.to_complex());
            }
        }
        out.prune();
        Ok(out)
    }

    /// `[self, other]` when `anti` is false, `{self, other}` otherwise.
    fn bracket(&self, other: &Self, anti: bool) -> Result<Self> {
        check_sites(self.n_sites, other.n_sites)?;
        let mut out = Self::zero(self.n_sites);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.commutes_with(v) == anti {
                    // Commuting pairs cancel in the commutator; anticommuting pairs cancel in the anticommutator.
                    let (ph, w) = u.product_unchecked(v);
                    out.accumulate(w, 2.0 * a * b * ph.to_complex());
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.bracket(other, false)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.bracket(other, true)
    }

    /// Hermitian conjugate: words are Hermitian, so only coefficients are conjugated.
    pub fn adjoint(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            terms: self.terms.iter().map(|(w, c)| (*w, c.conj())).collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() <= HERMITIAN_TOL)
    }

    /// `tr(self† · other) / 2^n`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_sites(self.n_sites, other.n_sites)?;
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::default();
        for (w, a) in &small.terms {
            if let Some(b) = large.terms.get(w) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// Hilbert-Schmidt norm under the normalized trace.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficient of the identity word, i.e. `tr(self) / 2^n`.
    pub fn trace_normalized(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|(w, _)| w.is_identity())
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    /// Union of the supports of all words, as a bit mask.
    pub fn support_mask(&self) -> u64 {
        self.terms.keys().fold(0, |m, w| m | w.support_mask())
    }

    /// `(word, re, im)` triples in canonical word order.
    pub fn to_triples(&self) -> Vec<(String, f64, f64)> {
        self.terms
            .iter()
            .map(|(w, c)| (w.to_string(), c.re, c.im))
            .collect()
    }

    pub fn from_triples<S: AsRef<str>>(n_sites: usize, rows: &[(S, f64, f64)]) -> Result<Self> {
        let terms = rows
            .iter()
            .map(|(w, re, im)| {
                let word: PauliWord = w.as_ref().parse()?;
                Ok((word, Complex64::new(*re, *im)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n_sites, terms)
    }

    /// Largest coefficient-wise difference; `Err` on site mismatch.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs_coeff())
    }
}

/// `[a, b]`.
pub fn commutator(a: &OperatorSum, b: &OperatorSum) -> Result<OperatorSum> {
    a.commutator(b)
}

/// `{a, b}`.
pub fn anticommutator(a: &OperatorSum, b: &OperatorSum) -> Result<OperatorSum> {
    a.anticommutator(b)
}

/// `tr(a† b) / 2^n`.
pub fn trace_inner_product(a: &OperatorSum, b: &OperatorSum) -> Result<Complex64> {
    a.inner(b)
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)*{}", c.re, c.im, w)?;
        }
        Ok(())
    }
}

impl TryFrom<&str> for OperatorSum {
    type Error = Error;

    /// Parses the `Display` form, e.g. `(0.5+0i)*XI + (0-0.25i)*ZZ`.
    fn try_from(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Err(Error::Parse(
                "the empty sum carries no site count; use OperatorSum::zero".into(),
            ));
        }
        let mut terms = Vec::new();
        for part in s.split(" + ") {
            let (coef, word) = part
                .rsplit_once(")*")
                .ok_or_else(|| Error::Parse(format!("malformed term \"{part}\"")))?;
            let coef = coef
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix('i'))
                .ok_or_else(|| Error::Parse(format!("malformed coefficient in \"{part}\"")))?;
            let split = coef[1..]
                .rfind(['+', '-'])
                .map(|k| k + 1)
                .filter(|&k| !coef[..k].ends_with(['e', 'E']))
                .ok_or_else(|| Error::Parse(format!("malformed coefficient in \"{part}\"")))?;
            let re: f64 = coef[..split]
                .parse()
                .map_err(|_| Error::Parse(format!("bad real part in \"{part}\"")))?;
            let im: f64 = coef[split..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad imaginary part in \"{part}\"")))?;
            let w: PauliWord = word.parse()?;
            terms.push((w, Complex64::new(re, im)));
        }
        let n = terms[0].0.n_sites();
        OperatorSum::from_terms(n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    #[test]
    fn prune_removes_cancellation() {
        let a = OperatorSum::from_word(w("XI"), c(1.0, 0.0));
        let z = a.sub(&a).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn bracket_matches_products() {
        let a = OperatorSum::from_terms(2, [(w("XY"), c(0.3, 0.1)), (w("ZI"), c(-1.0, 0.0))]).unwrap();
        let b = OperatorSum::from_terms(2, [(w("YY"), c(0.7, 0.0)), (w("IX"), c(0.0, 2.0))]).unwrap();
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert!(a.commutator(&b).unwrap().max_diff(&ab.sub(&ba).unwrap()).unwrap() < 1e-15);
        assert!(a.anticommutator(&b).unwrap().max_diff(&ab.add(&ba).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn inner_product_conjugates_left() {
        let a = OperatorSum::from_word(w("ZZ"), c(2.0, 1.0));
        let b = OperatorSum::from_word(w("ZZ"), c(1.0, 0.0));
        assert_eq!(a.inner(&b).unwrap(), c(2.0, -1.0));
        assert_eq!(b.inner(&a).unwrap(), c(2.0, 1.0));
    }

    #[test]
    fn text_round_trip_is_exact() {
        let a = OperatorSum::from_terms(
            3,
            [
                (w("XIZ"), c(0.1, -1.0 / 3.0)),
                (w("YYY"), c(-2.5e-7, 1e300)),
                (w("III"), c(std::f64::consts::PI, 0.0)),
            ],
        )
        .unwrap();
        let back = OperatorSum::try_from(a.to_string().as_str()).unwrap();
        assert_eq!(a, back);
        let triples = a.to_triples();
        assert_eq!(OperatorSum::from_triples(3, &triples).unwrap(), a);
    }

    #[test]
    fn hermiticity_is_real_coefficients() {
        assert!(OperatorSum::from_word(w("XY"), c(1.0, 0.0)).is_hermitian());
        assert!(!OperatorSum::from_word(w("XY"), c(0.0, 1.0)).is_hermitian());
    }
}
