use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{check_sites, Error, Result};

/// Largest number of site-flavors a word can address (one bit per site in each mask).
pub const MAX_SITES: usize = 64;

/// Single-site generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// A power of `i`: the only phases that appear in products of Pauli words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Tensor product of single-site Pauli generators over `n_sites` site-flavors.
///
/// Stored in the symplectic form `P(x, z) = i^{x·z} X^x Z^z`, one bit per site in each
/// mask (bit `s` is site `s`). Words carry no phase: every word is Hermitian and squares
/// to the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n_sites: u8,
    x: u64,
    z: u64,
}

impl PauliWord {
    pub fn identity(n_sites: usize) -> Result<Self> {
        Self::from_masks(n_sites, 0, 0)
    }

    pub fn from_masks(n_sites: usize, x: u64, z: u64) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::Validation(format!(
                "word length must be in 1..={MAX_SITES}, got {n_sites}"
            )));
        }
        let mask = site_mask(n_sites);
        if (x | z) & !mask != 0 {
            return Err(Error::Validation(format!(
                "bit masks address sites beyond n_sites = {n_sites}"
            )));
        }
        Ok(Self {
            n_sites: n_sites as u8,
            x,
            z,
        })
    }

    /// Word with `letter` on `site` and identity elsewhere.
    pub fn single(n_sites: usize, site: usize, letter: Letter) -> Result<Self> {
        if site >= n_sites {
            return Err(Error::Validation(format!(
                "site {site} out of range for {n_sites} site-flavors"
            )));
        }
        let (xb, zb) = letter.bits();
        Self::from_masks(
            n_sites,
            (xb as u64) << site,
            (zb as u64) << site,
        )
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for (s, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x |= (xb as u64) << s;
            z |= (zb as u64) << s;
        }
        Self::from_masks(letters.len(), x, z)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, site: usize) -> Letter {
        Letter::from_bits((self.x >> site) & 1 == 1, (self.z >> site) & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n_sites()).map(move |s| self.letter(s))
    }

    /// Number of non-identity letters.
    pub fn grade(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let m = self.support_mask();
        (0..self.n_sites()).filter(move |s| (m >> s) & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Exact product `self · other = phase · w`.
    pub fn product(&self, other: &PauliWord) -> Result<(Phase, PauliWord)> {
        check_sites(self.n_sites(), other.n_sites())?;
        Ok(self.product_unchecked(other))
    }

    pub(crate) fn product_unchecked(&self, other: &PauliWord) -> (Phase, PauliWord) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // i^{x1 z1} X^x1 Z^z1 · i^{x2 z2} X^x2 Z^z2, moving Z^z1 past X^x2 costs (-1)^{z1·x2}.
        let k = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        (
            Phase::from_exponent(k),
            PauliWord {
                n_sites: self.n_sites,
                x,
                z,
            },
        )
    }

    /// Masks rearranged so that site 0 is the most significant bit of a dense basis index.
    pub(crate) fn index_masks(&self) -> (usize, usize) {
        let n = self.n_sites();
        let mut xi = 0usize;
        let mut zi = 0usize;
        for s in 0..n {
            let b = n - 1 - s;
            xi |= (((self.x >> s) & 1) as usize) << b;
            zi |= (((self.z >> s) & 1) as usize) << b;
        }
        (xi, zi)
    }

    /// All `4^n` words in canonical order.
    pub fn all(n_sites: usize) -> Result<Vec<PauliWord>> {
        if n_sites == 0 || n_sites > 12 {
            return Err(Error::Resource {
                what: "full Pauli basis enumeration".into(),
                limit: 12,
                residual: None,
            });
        }
        let mut words: Vec<PauliWord> = (0..(1u64 << n_sites))
            .flat_map(|x| (0..(1u64 << n_sites)).map(move |z| (x, z)))
            .map(|(x, z)| PauliWord {
                n_sites: n_sites as u8,
                x,
                z,
            })
            .collect();
        words.sort();
        Ok(words)
    }
}

fn site_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_sites.cmp(&other.n_sites).then_with(|| {
            let diff = (self.x ^ other.x) | (self.z ^ other.z);
            if diff == 0 {
                return Ordering::Equal;
            }
            let s = diff.trailing_zeros() as usize;
            self.letter(s).cmp(&other.letter(s))
        })
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| {
                Letter::from_char(c)
                    .ok_or_else(|| Error::Parse(format!("invalid Pauli letter '{c}' in \"{s}\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliWord::from_letters(&letters)
    }
}
