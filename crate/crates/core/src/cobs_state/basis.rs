use crate::algebra::{Letter, PauliWord};
use crate::error::{Error, Result};

/// Pauli words over `n_sites` grouped by grade (number of non-identity letters).
#[derive(Debug, Clone, PartialEq)]
pub struct GradedBasis {
    n_sites: usize,
    grades: Vec<Vec<PauliWord>>,
}

impl GradedBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn max_grade(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, g: usize) -> &[PauliWord] {
        self.grades.get(g).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All words, grade by grade, canonical order within a grade.
    pub fn words(&self) -> impl Iterator<Item = &PauliWord> {
        self.grades.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.grades.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, w: &PauliWord) -> bool {
        w.n_sites() == self.n_sites && self.grade(w.grade()).binary_search(w).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        self.max_grade() == self.n_sites
    }
}

/// All words of grade at most `max_grade`, built as Cartesian products of single-site generators.
pub fn enumerate_cobs(n_sites: usize, max_grade: usize) -> Result<GradedBasis> {
    if max_grade > n_sites {
        return Err(Error::Validation(format!(
            "max_grade {max_grade} exceeds n_sites {n_sites}"
        )));
    }
    if n_sites > 12 {
        return Err(Error::Resource {
            what: "operator basis enumeration (site-flavors)".into(),
            limit: 12,
            residual: None,
        });
    }
    let mut grades = vec![Vec::new(); max_grade + 1];
    grades[0].push(PauliWord::identity(n_sites)?);
    for g in 1..=max_grade {
        for support in combinations(n_sites, g) {
            // 3^g letter assignments over the chosen sites.
            for code in 0..3usize.pow(g as u32) {
                let mut letters = vec![Letter::I; n_sites];
                let mut c = code;
                for &s in &support {
                    letters[s] = Letter::NON_IDENTITY[c % 3];
                    c /= 3;
                }
                grades[g].push(PauliWord::from_letters(&letters)?);
            }
        }
        grades[g].sort();
    }
    Ok(GradedBasis { n_sites, grades })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let b = enumerate_cobs(1, 1).unwrap();
        let s: Vec<String> = b.words().map(|w| w.to_string()).collect();
        assert_eq!(s, ["I", "X", "Y", "Z"]);
        assert_eq!(enumerate_cobs(2, 2).unwrap().len(), 16);
        assert_eq!(enumerate_cobs(3, 2).unwrap().len(), 37);
        assert_eq!(enumerate_cobs(4, 4).unwrap().len(), 256);
    }

    #[test]
    fn grades_partition_the_basis() {
        let b = enumerate_cobs(3, 3).unwrap();
        for g in 0..=3 {
            assert!(b.grade(g).iter().all(|w| w.grade() == g));
        }
        let mut all: Vec<_> = b.words().copied().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 64);
        assert!(b.contains(&"XIZ".parse().unwrap()));
    }

    #[test]
    fn max_grade_checked() {
        assert!(matches!(enumerate_cobs(2, 3), Err(Error::Validation(_))));
    }
}
