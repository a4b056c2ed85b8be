//! First-order response of `<s^x_a>` to a transverse field on the two-spin bond.
//!
//! Three channels are compared: the naive single-site channel, the channel that follows
//! the operator hierarchy through a two-site parent, and an exact-diagonalization slope.

use std::fmt::{self, Write as _};

use num_complex::Complex64;

use crate::algebra::{sx, sy, sz, OperatorSum, PauliWord};
use crate::cobs_state::StateSpec;
use crate::error::{Error, Result};
use crate::models::build_qsm_bond;
use crate::oracle::exact_diagonalize;
use crate::sdeom::{assemble, static_response, Kind};

/// Agreement required between an engine value and its closed form.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

/// `|h^z| = J^z/2` is treated as singular within this distance.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Default finite-difference probe, in units of `J^z`.
pub const DEFAULT_PROBE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Naive,
    Hierarchy,
    Exact,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Naive => "naive",
            Channel::Hierarchy => "hierarchy",
            Channel::Exact => "exact",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// `|h^z| > J^z/2`: the unperturbed ground state has changed.
    OutsideRegime,
    /// Vanishing denominator; `value` is NaN.
    Singular,
}

impl Validity {
    pub fn name(self) -> &'static str {
        match self {
            Validity::Valid => "ok",
            Validity::OutsideRegime => "outside_regime",
            Validity::Singular => "singular",
        }
    }
}

/// Per-parent contribution `d_α <u^α>_0 h^x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParentalChannel {
    pub word: PauliWord,
    /// Coefficient per unit `h^x`.
    pub d: f64,
    pub expectation: f64,
}

impl ParentalChannel {
    pub fn contribution(&self, hx: f64) -> f64 {
        self.d * self.expectation * hx
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseInputs {
    pub hx: f64,
    pub hz: f64,
    pub jz: f64,
    /// Expectations of the state that enter the closed forms, e.g. `("s^z_a", 0.5)`.
    pub state: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseResult {
    pub channel: Channel,
    /// Induced `<s^x_a>`.
    pub value: f64,
    /// `value / h^x`.
    pub slope: f64,
    pub inputs: ResponseInputs,
    /// `None` when the channel has no decomposition.
    pub parents: Option<Vec<ParentalChannel>>,
    /// Engine value before the closed-form cross-check, when one exists.
    pub engine_value: Option<f64>,
    pub validity: Validity,
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{name} must be finite, got {v}")))
    }
}

fn check_two_site(state: &StateSpec) -> Result<()> {
    crate::error::check_sites(2, state.n_sites())
}

fn cross_check(engine: f64, closed: f64, what: &str) -> Result<()> {
    let gap = (engine - closed).abs();
    if gap > CROSS_CHECK_TOL * closed.abs().max(1.0) {
        return Err(Error::Validation(format!(
            "{what}: engine value {engine:e} and closed form {closed:e} differ by {gap:e}"
        )));
    }
    Ok(())
}

/// `4 h^x h^z sz0 / ((J^z)² − 4(h^z)²)` where `sz0 = −<s^z_a>_0 = <s^z_b>_0` on the bond sector.
pub fn naive_closed_form(hx: f64, hz: f64, jz: f64, sz0: f64) -> Result<f64> {
    let den = jz * jz - 4.0 * hz * hz;
    if den.abs() <= SINGULAR_TOL * jz.abs().max(1.0).powi(2) {
        return Err(Error::Singular(format!(
            "naive response denominator vanishes at |h^z| = J^z/2 (h^z = {hz}, J^z = {jz})"
        )));
    }
    Ok(4.0 * hx * hz * sz0 / den)
}

/// Inhomogeneities `<[u, s^y_a]>` over the single-site operators on site `a`.
///
/// The single-site algebra on `a` closes on itself, so when these vanish no single-site
/// parent can feed the naive channel.
pub fn naive_subgroup_delta(state: &StateSpec) -> Result<Vec<(PauliWord, Complex64)>> {
    check_two_site(state)?;
    let target = sy(2, 0)?;
    let mut out = Vec::with_capacity(3);
    for op in [sx(2, 0)?, sy(2, 0)?, sz(2, 0)?] {
        let w = *op.words().next().expect("single word");
        out.push((w, state.expect(&op.commutator(&target)?)?));
    }
    Ok(out)
}

/// Naive single-site channel, through `G₊[s^y_a; s^y_a]` of `J^z s^z_a s^z_b + h^z Σ s^z`.
///
/// Returns the closed-form value after checking it against the engine. Fails with
/// [`Error::Singular`] at `|h^z| = J^z/2`.
pub fn naive_response(hx: f64, hz: f64, jz: f64, state: &StateSpec) -> Result<ResponseResult> {
    for (n, v) in [("hx", hx), ("hz", hz), ("jz", jz)] {
        check_finite(n, v)?;
    }
    check_two_site(state)?;
    let sz_a = state.expect(&sz(2, 0)?)?.re;
    let closed = naive_closed_form(hx, hz, jz, -sz_a)?;

    let h0 = build_qsm_bond(jz, hz, 0.0)?;
    let y = sy(2, 0)?;
    let sys = assemble(&y, &y, &h0, state, Kind::Plus)?;
    let resp = static_response(&sys, state)?;
    let parents: Vec<ParentalChannel> = resp
        .channels
        .iter()
        .filter(|c| c.word.grade() == 1)
        .map(|c| ParentalChannel {
            word: c.word,
            d: c.d.re,
            expectation: c.expectation,
        })
        .collect();
    let engine = hx * resp.partial(|w| w.grade() == 1).re;
    cross_check(engine, closed, "naive channel")?;

    let validity = if 2.0 * hz.abs() > jz.abs() {
        Validity::OutsideRegime
    } else {
        Validity::Valid
    };
    Ok(ResponseResult {
        channel: Channel::Naive,
        value: closed,
        slope: if hx != 0.0 { closed / hx } else { 4.0 * hz * -sz_a / (jz * jz - 4.0 * hz * hz) },
        inputs: ResponseInputs {
            hx,
            hz,
            jz,
            state: vec![("s^z_a".into(), sz_a)],
        },
        parents: Some(parents),
        engine_value: Some(engine),
        validity,
    })
}

/// [`naive_response`] with a singular denominator reported as a NaN row flagged
/// [`Validity::Singular`].
pub fn naive_response_flagged(hx: f64, hz: f64, jz: f64, state: &StateSpec) -> Result<ResponseResult> {
    match naive_response(hx, hz, jz, state) {
        Err(Error::Singular(_)) => Ok(ResponseResult {
            channel: Channel::Naive,
            value: f64::NAN,
            slope: f64::NAN,
            inputs: ResponseInputs {
                hx,
                hz,
                jz,
                state: vec![("s^z_a".into(), state.expect(&sz(2, 0)?)?.re)],
            },
            parents: None,
            engine_value: None,
            validity: Validity::Singular,
        }),
        other => other,
    }
}

/// Channel through the two-site parent `<s^y_a s^y_b>`, from `G₋[s^z_a s^y_b; s^y_a s^z_b]`
/// of `J^z s^z_a s^z_b`: `<s^x_a> = −4 h^x Σ_p r_p / |p|`, cross-checked against
/// `−4 h^x <s^y_a s^y_b> / J^z`.
pub fn hierarchy_response(hx: f64, jz: f64, state: &StateSpec) -> Result<ResponseResult> {
    check_finite("hx", hx)?;
    check_finite("jz", jz)?;
    check_two_site(state)?;
    if jz.abs() <= SINGULAR_TOL {
        return Err(Error::Singular("hierarchy response needs J^z != 0".into()));
    }
    let yy = sy(2, 0)?.mul(&sy(2, 1)?)?;
    let syy = state.expect(&yy)?.re;
    let closed = -4.0 * hx * syy / jz;

    let h0 = build_qsm_bond(jz, 0.0, 0.0)?;
    let o_i = sz(2, 0)?.mul(&sy(2, 1)?)?;
    let o_f = sy(2, 0)?.mul(&sz(2, 1)?)?;
    let g = assemble(&o_i, &o_f, &h0, state, Kind::Minus)?.greens();
    let sum: Complex64 = g.dynamical().map(|p| p.residue / p.position.abs()).sum();
    let engine = -4.0 * hx * sum.re;
    cross_check(engine, closed, "hierarchy channel")?;

    let yy_word = *yy.words().next().expect("single word");
    Ok(ResponseResult {
        channel: Channel::Hierarchy,
        value: closed,
        slope: -4.0 * syy / jz,
        inputs: ResponseInputs {
            hx,
            hz: 0.0,
            jz,
            state: vec![("s^y_a s^y_b".into(), syy)],
        },
        parents: Some(vec![ParentalChannel {
            word: yy_word,
            // <s^y_a s^y_b> = <YY>/4.
            d: -1.0 / jz,
            expectation: state.expect_word(&yy_word)?,
        }]),
        engine_value: Some(engine),
        validity: Validity::Valid,
    })
}

/// Ground-state `<s^x_a>` of the bond with fields `(h^z, h^x)` on both sites.
pub fn exact_sx(hx: f64, hz: f64, jz: f64) -> Result<f64> {
    let h = build_qsm_bond(jz, hz, hx)?;
    let spec = exact_diagonalize(&h)?;
    if spec.eigenvalues.len() > 1 && spec.eigenvalues[1] - spec.eigenvalues[0] < crate::oracle::DEGENERACY_TOL {
        return Err(Error::Validation(format!(
            "ground state is degenerate at h^x = {hx}, h^z = {hz}, J^z = {jz}"
        )));
    }
    let psi = spec.eigenvector(0);
    let xa: PauliWord = "XI".parse()?;
    Ok(crate::algebra::word_matrix_element(&xa, &psi, &psi).re / 2.0)
}

/// Central-difference slope `∂<s^x_a>/∂h^x` at `h^x = 0`; `value` is the slope itself
/// (inputs record `h^x = 1`).
pub fn exact_response_slope(hz: f64, jz: f64, hx_probe: Option<f64>) -> Result<ResponseResult> {
    check_finite("hz", hz)?;
    check_finite("jz", jz)?;
    let probe = hx_probe.unwrap_or(DEFAULT_PROBE * jz.abs());
    if !(probe > 0.0 && probe.is_finite()) {
        return Err(Error::Validation(format!("hx_probe must be positive, got {probe}")));
    }
    let slope = (exact_sx(probe, hz, jz)? - exact_sx(-probe, hz, jz)?) / (2.0 * probe);
    Ok(ResponseResult {
        channel: Channel::Exact,
        value: slope,
        slope,
        inputs: ResponseInputs {
            hx: 1.0,
            hz,
            jz,
            state: vec![("hx_probe".into(), probe)],
        },
        parents: None,
        engine_value: None,
        validity: Validity::Valid,
    })
}

/// Linear extrapolation `slope · h^x` of [`exact_response_slope`].
pub fn exact_response(hx: f64, hz: f64, jz: f64, hx_probe: Option<f64>) -> Result<ResponseResult> {
    check_finite("hx", hx)?;
    let mut r = exact_response_slope(hz, jz, hx_probe)?;
    r.value = r.slope * hx;
    r.inputs.hx = hx;
    Ok(r)
}

/// Side-by-side comparison of response channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseReport {
    pub rows: Vec<ResponseResult>,
}

fn num(x: f64) -> String {
    // Adding 0.0 maps -0.0 to 0.0.
    format!("{:.16e}", x + 0.0)
}

impl ResponseReport {
    fn exact_value(&self) -> Option<f64> {
        self.rows.iter().find(|r| r.channel == Channel::Exact).map(|r| r.value)
    }

    fn parents_text(r: &ResponseResult) -> String {
        let Some(parents) = &r.parents else {
            return "not computed".into();
        };
        if parents.is_empty() {
            return "none".into();
        }
        parents
            .iter()
            .map(|p| format!("{}:{}", p.word, num(p.contribution(r.inputs.hx))))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn ratio(&self, r: &ResponseResult) -> Option<f64> {
        match self.exact_value() {
            Some(e) if e != 0.0 && r.value.is_finite() => Some(r.value / e),
            _ => None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:>24} {:>24} {:>24} {:>15}  parents",
            "channel", "value", "slope", "ratio_to_exact", "validity"
        );
        for r in &self.rows {
            let ratio = self.ratio(r).map_or("n/a".to_string(), num);
            let _ = writeln!(
                s,
                "{:<10} {:>24} {:>24} {:>24} {:>15}  {}",
                r.channel.name(),
                num(r.value),
                num(r.slope),
                ratio,
                r.validity.name(),
                Self::parents_text(r)
            );
        }
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Validation(format!("csv: {e}"));
        w.write_record(["channel", "hx", "hz", "jz", "value", "slope", "ratio_to_exact", "validity", "parents"])
            .map_err(io)?;
        for r in &self.rows {
            let ratio = self.ratio(r).map_or(String::new(), num);
            w.write_record([
                r.channel.name().to_string(),
                num(r.inputs.hx),
                num(r.inputs.hz),
                num(r.inputs.jz),
                num(r.value),
                num(r.slope),
                ratio,
                r.validity.name().to_string(),
                Self::parents_text(r),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Validation(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Validation(format!("csv: {e}")))
    }
}

/// Collects results into a report; all rows must share `h^x` and `J^z`.
pub fn response_report(results: Vec<ResponseResult>) -> Result<ResponseReport> {
    if let Some(first) = results.first() {
        for r in &results[1..] {
            if r.inputs.jz != first.inputs.jz || r.inputs.hx != first.inputs.hx {
                return Err(Error::Validation(format!(
                    "inconsistent inputs: {} has (hx, jz) = ({}, {}), {} has ({}, {})",
                    first.channel, first.inputs.hx, first.inputs.jz, r.channel, r.inputs.hx, r.inputs.jz
                )));
            }
        }
    }
    Ok(ResponseReport { rows: results })
}

/// Operator whose expectation the channels predict.
pub fn response_observable() -> Result<OperatorSum> {
    sx(2, 0)
}
