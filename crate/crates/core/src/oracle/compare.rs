use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sdeom::greens::{GreensFunction, PoleClass, POLE_TOL};

/// One pole of `a` matched to one pole of `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolePair {
    pub position_a: f64,
    pub position_b: f64,
    pub residue_a: Complex64,
    pub residue_b: Complex64,
    pub class: PoleClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub tolerance: f64,
    pub margin: f64,
    pub grid_points: usize,
    pub max_deviation: f64,
    pub worst_omega: Option<Complex64>,
    pub pairs: Vec<PolePair>,
    pub unmatched_a: Vec<(f64, Complex64)>,
    pub unmatched_b: Vec<(f64, Complex64)>,
    pub static_weight_a: Complex64,
    pub static_weight_b: Complex64,
    pub pass: bool,
}

impl CompareReport {
    pub fn max_residue_deviation(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| (p.residue_a - p.residue_b).norm())
            .fold(0.0, f64::max)
    }

    /// Structured-text form: header, pole pairing table, deviation and verdict.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "grid_points = {}", self.grid_points);
        let _ = writeln!(s, "pole_margin = {:e}", self.margin);
        let _ = writeln!(s, "tolerance = {:e}", self.tolerance);
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:>24} {:>24} {:>24} {:>24} {:>10}",
            "pole_a", "pole_b", "|res_a|", "|res_a - res_b|", "class"
        );
        for p in &self.pairs {
            let _ = writeln!(
                s,
                "{:>24.16e} {:>24.16e} {:>24.16e} {:>24.16e} {:>10}",
                p.position_a,
                p.position_b,
                p.residue_a.norm(),
                (p.residue_a - p.residue_b).norm(),
                p.class.name()
            );
        }
        for (side, list) in [("a", &self.unmatched_a), ("b", &self.unmatched_b)] {
            for (pos, r) in list {
                let _ = writeln!(s, "unmatched_{side} {:.16e} residue {:.16e}{:+.16e}i", pos, r.re, r.im);
            }
        }
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "static_weight_a = {:.16e}{:+.16e}i",
            self.static_weight_a.re, self.static_weight_a.im
        );
        let _ = writeln!(
            s,
            "static_weight_b = {:.16e}{:+.16e}i",
            self.static_weight_b.re, self.static_weight_b.im
        );
        let _ = writeln!(s, "max_residue_deviation = {:.16e}", self.max_residue_deviation());
        let _ = writeln!(s, "max_deviation = {:.16e}", self.max_deviation);
        if let Some(w) = self.worst_omega {
            let _ = writeln!(s, "worst_omega = {:.16e}{:+.16e}i", w.re, w.im);
        }
        let _ = writeln!(s, "verdict = {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

/// Pairs poles within [`POLE_TOL`] and measures `max |a(ω) − b(ω)|` over `grid`.
///
/// Every grid point must stay at least `margin` away from every pole of both functions.
pub fn compare_greens(
    a: &GreensFunction,
    b: &GreensFunction,
    grid: &[Complex64],
    tolerance: f64,
    margin: f64,
) -> Result<CompareReport> {
    for w in grid {
        let d = a.nearest_pole_distance(*w).min(b.nearest_pole_distance(*w));
        if d < margin {
            return Err(Error::Validation(format!(
                "grid point {w} lies {d:e} from a pole, inside the margin {margin:e}"
            )));
        }
    }
    let mut max_deviation = 0.0;
    let mut worst_omega = None;
    for w in grid {
        let d = (a.evaluate(*w)? - b.evaluate(*w)?).norm();
        if d > max_deviation || worst_omega.is_none() {
            max_deviation = d;
            worst_omega = Some(*w);
        }
    }

    let mut pairs = Vec::new();
    let mut unmatched_a = Vec::new();
    let mut used = vec![false; b.poles.len()];
    for pa in &a.poles {
        let hit = b
            .poles
            .iter()
            .enumerate()
            .filter(|(k, pb)| !used[*k] && (pa.position - pb.position).abs() < POLE_TOL)
            .min_by(|x, y| {
                (pa.position - x.1.position)
                    .abs()
                    .total_cmp(&(pa.position - y.1.position).abs())
            });
        match hit {
            Some((k, pb)) => {
                used[k] = true;
                pairs.push(PolePair {
                    position_a: pa.position,
                    position_b: pb.position,
                    residue_a: pa.residue,
                    residue_b: pb.residue,
                    class: pa.class,
                });
            }
            None => unmatched_a.push((pa.position, pa.residue)),
        }
    }
    let unmatched_b: Vec<(f64, Complex64)> = b
        .poles
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(p, _)| (p.position, p.residue))
        .collect();
    let pass = max_deviation <= tolerance && unmatched_a.is_empty() && unmatched_b.is_empty();
    Ok(CompareReport {
        tolerance,
        margin,
        grid_points: grid.len(),
        max_deviation,
        worst_omega,
        pairs,
        unmatched_a,
        unmatched_b,
        static_weight_a: a.static_weight(),
        static_weight_b: b.static_weight(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdeom::greens::Kind;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn grid() -> Vec<Complex64> {
        (0..50).map(|k| c(-2.0 + 4.0 * k as f64 / 49.0)).filter(|w| (w.re.abs() - 0.5).abs() > 0.05).collect()
    }

    #[test]
    fn identical_inputs() {
        let g = GreensFunction::from_raw(Kind::Plus, vec![(0.5, c(0.5)), (-0.5, c(-0.5))]);
        let r = compare_greens(&g, &g, &grid(), 1e-8, 0.05).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.pass);
        assert_eq!(r.pairs.len(), 2);
    }

    #[test]
    fn perturbed_residue_fails() {
        let g = GreensFunction::from_raw(Kind::Plus, vec![(0.5, c(0.5)), (-0.5, c(-0.5))]);
        let h = GreensFunction::from_raw(Kind::Plus, vec![(0.5, c(0.5 + 1e-3)), (-0.5, c(-0.5))]);
        let gr = grid();
        let r = compare_greens(&g, &h, &gr, 1e-8, 0.05).unwrap();
        assert!(!r.pass);
        let nearest = gr.iter().map(|w| (w - 0.5).norm()).fold(f64::INFINITY, f64::min);
        assert!((r.max_deviation - 1e-3 / nearest).abs() < 1e-12);
        assert!(r.to_text().contains("verdict = FAIL"));
    }

    #[test]
    fn margin_enforced() {
        let g = GreensFunction::from_raw(Kind::Plus, vec![(0.5, c(0.5))]);
        assert!(matches!(
            compare_greens(&g, &g, &[c(0.52)], 1e-8, 0.05),
            Err(Error::Validation(_))
        ));
    }
}
