//! Hamiltonians of the two-spin bond, small spin lattices, the Hubbard atom and the local
//! Kondo problem, all expressed over spin-1/2 site-flavors.
//!
//! Fermions are mapped through a Jordan-Wigner string with "occupied" = spin up:
//! `c_j = Π_{k<j} Z_k · s^-_j`, `c†_j = Π_{k<j} Z_k · s^+_j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{pauli, s_minus, s_plus, spin, Axis, OperatorSum};
use crate::error::{Error, Result};

/// Default largest lattice size accepted by [`build_qsm_lattice`].
pub const DEFAULT_SITE_CAP: usize = 6;

/// Single-site field `h · s^axis_site`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Field {
    pub site: usize,
    pub axis: AxisName,
    pub h: f64,
}

/// Two-site coupling `J · s^a_i s^b_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub a: AxisName,
    pub b: AxisName,
    pub j_ab: f64,
}

/// Serializable axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl From<AxisName> for Axis {
    fn from(a: AxisName) -> Axis {
        match a {
            AxisName::X => Axis::X,
            AxisName::Y => Axis::Y,
            AxisName::Z => Axis::Z,
        }
    }
}

/// A spin lattice organized by grade: one-site fields and two-site couplings.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub n_sites: usize,
    #[serde(default)]
    pub fields: Vec<Field>,
    #[serde(default)]
    pub couplings: Vec<Coupling>,
}

impl LatticeSpec {
    /// Adds `J (s^x_i s^x_j + s^y_i s^y_j + s^z_i s^z_j)`.
    pub fn with_heisenberg(mut self, i: usize, j: usize, jj: f64) -> Self {
        for a in [AxisName::X, AxisName::Y, AxisName::Z] {
            self.couplings.push(Coupling { i, j, a, b: a, j_ab: jj });
        }
        self
    }

    pub fn with_coupling(mut self, i: usize, j: usize, a: AxisName, b: AxisName, jj: f64) -> Self {
        self.couplings.push(Coupling { i, j, a, b, j_ab: jj });
        self
    }

    pub fn with_field(mut self, site: usize, axis: AxisName, h: f64) -> Self {
        self.fields.push(Field { site, axis, h });
        self
    }
}

/// Tagged model description.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    QsmBond { jz: f64, hz: f64, hx: f64 },
    QsmLattice(LatticeSpec),
    HubbardAtom { mu_up: [f64; 3], mu_dn: [f64; 3], u: f64 },
    KondoLocal { mu_up: [f64; 3], mu_dn: [f64; 3], h: [f64; 3], jk: f64 },
}

/// A built Hamiltonian together with bookkeeping from the fermion mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub hamiltonian: OperatorSum,
    /// Energy offset between the spin form and the occupation-number form.
    pub constant_shift: f64,
    /// True when a single-fermion (Jordan-Wigner string bearing) term is present.
    pub string_bearing: bool,
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::QsmBond { .. } => "qsm-bond",
            ModelSpec::QsmLattice(_) => "qsm-lattice",
            ModelSpec::HubbardAtom { .. } => "hubbard-atom",
            ModelSpec::KondoLocal { .. } => "kondo-local",
        }
    }

    pub fn n_sites(&self) -> usize {
        match self {
            ModelSpec::QsmBond { .. } | ModelSpec::HubbardAtom { .. } => 2,
            ModelSpec::QsmLattice(l) => l.n_sites,
            ModelSpec::KondoLocal { .. } => 3,
        }
    }

    pub fn build(&self, site_cap: usize) -> Result<Model> {
        match self {
            ModelSpec::QsmBond { jz, hz, hx } => Ok(Model {
                hamiltonian: build_qsm_bond(*jz, *hz, *hx)?,
                constant_shift: 0.0,
                string_bearing: false,
            }),
            ModelSpec::QsmLattice(l) => Ok(Model {
                hamiltonian: build_qsm_lattice(l, site_cap)?,
                constant_shift: 0.0,
                string_bearing: false,
            }),
            ModelSpec::HubbardAtom { mu_up, mu_dn, u } => build_hubbard_atom_full(*mu_up, *mu_dn, *u),
            ModelSpec::KondoLocal { mu_up, mu_dn, h, jk } => build_kondo_local(*mu_up, *mu_dn, *h, *jk),
        }
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("parameter {name} is not finite")))
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `H = J^z s^z_a s^z_b + h^z (s^z_a + s^z_b) + h^x (s^x_a + s^x_b)` on sites a = 0, b = 1.
pub fn build_qsm_bond(jz: f64, hz: f64, hx: f64) -> Result<OperatorSum> {
    for (n, v) in [("jz", jz), ("hz", hz), ("hx", hx)] {
        check_finite(n, v)?;
    }
    let l = LatticeSpec { n_sites: 2, ..Default::default() }
        .with_coupling(0, 1, AxisName::Z, AxisName::Z, jz)
        .with_field(0, AxisName::Z, hz)
        .with_field(1, AxisName::Z, hz)
        .with_field(0, AxisName::X, hx)
        .with_field(1, AxisName::X, hx);
    build_qsm_lattice(&l, 2)
}

/// `H = Σ h s^α_i + Σ J s^a_i s^b_j`.
pub fn build_qsm_lattice(spec: &LatticeSpec, site_cap: usize) -> Result<OperatorSum> {
    let n = spec.n_sites;
    if n == 0 {
        return Err(Error::Validation("n_sites must be positive".into()));
    }
    if n > site_cap {
        return Err(Error::Resource {
            what: "lattice size (site-flavors)".into(),
            limit: site_cap,
            residual: None,
        });
    }
    let mut h = OperatorSum::zero(n);
    for (k, f) in spec.fields.iter().enumerate() {
        check_finite(&format!("fields[{k}].h"), f.h)?;
        if f.site >= n {
            return Err(Error::Validation(format!(
                "fields[{k}].site = {} out of range for {n} sites",
                f.site
            )));
        }
        h = h.axpy(real(f.h), &spin(n, f.site, f.axis.into())?)?;
    }
    for (k, c) in spec.couplings.iter().enumerate() {
        check_finite(&format!("couplings[{k}].j_ab"), c.j_ab)?;
        if c.i >= n || c.j >= n {
            return Err(Error::Validation(format!(
                "couplings[{k}] references site out of range for {n} sites"
            )));
        }
        if c.i == c.j {
            return Err(Error::Validation(format!(
                "couplings[{k}] is a self-bond on site {}",
                c.i
            )));
        }
        let term = spin(n, c.i, c.a.into())?.mul(&spin(n, c.j, c.b.into())?)?;
        h = h.axpy(real(c.j_ab), &term)?;
    }
    Ok(h)
}

/// Jordan-Wigner annihilation operator for flavor `j`.
pub fn jw_annihilation(n_sites: usize, j: usize) -> Result<OperatorSum> {
    jw_string(n_sites, j)?.mul(&s_minus(n_sites, j)?)
}

/// Jordan-Wigner creation operator for flavor `j`.
pub fn jw_creation(n_sites: usize, j: usize) -> Result<OperatorSum> {
    jw_string(n_sites, j)?.mul(&s_plus(n_sites, j)?)
}

fn jw_string(n_sites: usize, j: usize) -> Result<OperatorSum> {
    let mut s = OperatorSum::identity(n_sites)?;
    for k in 0..j {
        s = s.mul(&pauli(n_sites, k, Axis::Z)?)?;
    }
    Ok(s)
}

/// Majorana-type triple of flavor `j`: `γ^x = (c + c†)/2`, `γ^y = (c† − c)/(2i)`, `γ^z = c†c − 1/2`.
///
/// This `γ^y` orientation makes `[γ^x, γ^y] = i γ^z`.
pub fn majorana(n_sites: usize, j: usize) -> Result<[OperatorSum; 3]> {
    let c = jw_annihilation(n_sites, j)?;
    let cd = jw_creation(n_sites, j)?;
    let gx = c.add(&cd)?.scale_real(0.5);
    let gy = cd.sub(&c)?.scale(Complex64::new(0.0, -0.5));
    let gz = cd.mul(&c)?.axpy(real(-0.5), &OperatorSum::identity(n_sites)?)?;
    Ok([gx, gy, gz])
}

/// `Σ_σ μ^z_σ γ^z_σ + (U/2) γ^z_↑ γ^z_↓` with ↑ on site-flavor 0 and ↓ on 1.
pub fn build_hubbard_atom(mu_up: f64, mu_dn: f64, u: f64) -> Result<OperatorSum> {
    Ok(build_hubbard_atom_full([0.0, 0.0, mu_up], [0.0, 0.0, mu_dn], u)?.hamiltonian)
}

/// Hubbard atom from occupation-form parameters `E = μ_↑ n_↑ + μ_↓ n_↓ + U_occ n_↑ n_↓`.
///
/// Returns the spin-form model; `constant_shift` is the energy to add to spin-form
/// eigenvalues to recover occupation-form energies.
pub fn hubbard_from_occupation_form(mu_up: f64, mu_dn: f64, u_occ: f64) -> Result<Model> {
    let u = 2.0 * u_occ;
    build_hubbard_atom_full([0.0, 0.0, mu_up + u_occ / 2.0], [0.0, 0.0, mu_dn + u_occ / 2.0], u)
}

/// Hubbard atom with all three `μ^α_σ` components; `μ^{x,y}` terms are single-fermion terms.
pub fn build_hubbard_atom_full(mu_up: [f64; 3], mu_dn: [f64; 3], u: f64) -> Result<Model> {
    for (k, v) in mu_up.iter().chain(mu_dn.iter()).chain([u].iter()).enumerate() {
        check_finite(&format!("hubbard parameter {k}"), *v)?;
    }
    let n = 2;
    let g_up = majorana(n, 0)?;
    let g_dn = majorana(n, 1)?;
    let mut h = OperatorSum::zero(n);
    for a in 0..3 {
        h = h.axpy(real(mu_up[a]), &g_up[a])?;
        h = h.axpy(real(mu_dn[a]), &g_dn[a])?;
    }
    h = h.axpy(real(u / 2.0), &g_up[2].mul(&g_dn[2])?)?;
    // (U/2)(n↑−½)(n↓−½) + Σ μ(n−½) = Σ (μ − U/4) n + (U/2) n↑n↓ + U/8 − Σ μ/2.
    let constant_shift = -(u / 8.0 - (mu_up[2] + mu_dn[2]) / 2.0);
    let string_bearing = mu_up[..2].iter().chain(mu_dn[..2].iter()).any(|v| *v != 0.0);
    Ok(Model {
        hamiltonian: h,
        constant_shift,
        string_bearing,
    })
}

/// Electron spin density `S^α_c = Σ c†_σ (σ^α/2)_{σσ'} c_σ'` on flavors `up`, `dn`.
pub fn electron_spin(n_sites: usize, up: usize, dn: usize) -> Result<[OperatorSum; 3]> {
    let cu = jw_annihilation(n_sites, up)?;
    let cd = jw_annihilation(n_sites, dn)?;
    let cud = jw_creation(n_sites, up)?;
    let cdd = jw_creation(n_sites, dn)?;
    let ud = cud.mul(&cd)?;
    let du = cdd.mul(&cu)?;
    let nu = cud.mul(&cu)?;
    let nd = cdd.mul(&cd)?;
    let sx = ud.add(&du)?.scale_real(0.5);
    let sy = ud.sub(&du)?.scale(Complex64::new(0.0, -0.5));
    let sz = nu.sub(&nd)?.scale_real(0.5);
    Ok([sx, sy, sz])
}

/// Flavor order for the local Kondo problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KondoOrdering {
    pub up: usize,
    pub dn: usize,
    pub moment: usize,
}

impl Default for KondoOrdering {
    fn default() -> Self {
        Self { up: 0, dn: 1, moment: 2 }
    }
}

/// `Σ_σ μ^α_σ γ^α_σ + Σ h^α s^α + J_K Σ_α s^α S^α_c` on (electron-↑, electron-↓, moment).
pub fn build_kondo_local(mu_up: [f64; 3], mu_dn: [f64; 3], h: [f64; 3], jk: f64) -> Result<Model> {
    build_kondo_local_ordered(mu_up, mu_dn, h, jk, KondoOrdering::default())
}

/// As [`build_kondo_local`] with an explicit Jordan-Wigner flavor order.
pub fn build_kondo_local_ordered(
    mu_up: [f64; 3],
    mu_dn: [f64; 3],
    h: [f64; 3],
    jk: f64,
    order: KondoOrdering,
) -> Result<Model> {
    let mut seen = [false; 3];
    for s in [order.up, order.dn, order.moment] {
        if s >= 3 || seen[s] {
            return Err(Error::Validation("Kondo ordering must be a permutation of 0, 1, 2".into()));
        }
        seen[s] = true;
    }
    for (k, v) in mu_up.iter().chain(&mu_dn).chain(&h).chain([jk].iter()).enumerate() {
        check_finite(&format!("kondo parameter {k}"), *v)?;
    }
    let n = 3;
    let g_up = majorana(n, order.up)?;
    let g_dn = majorana(n, order.dn)?;
    let sc = electron_spin(n, order.up, order.dn)?;
    let mut ham = OperatorSum::zero(n);
    for a in 0..3 {
        ham = ham.axpy(real(mu_up[a]), &g_up[a])?;
        ham = ham.axpy(real(mu_dn[a]), &g_dn[a])?;
        let s = spin(n, order.moment, Axis::ALL[a])?;
        ham = ham.axpy(real(h[a]), &s)?;
        ham = ham.axpy(real(jk), &s.mul(&sc[a])?)?;
    }
    let constant_shift = (mu_up[2] + mu_dn[2]) / 2.0;
    let string_bearing = mu_up[..2].iter().chain(mu_dn[..2].iter()).any(|v| *v != 0.0);
    Ok(Model {
        hamiltonian: ham,
        constant_shift,
        string_bearing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sz, PauliWord};

    #[test]
    fn ising_bond_is_quarter_zz() {
        let h = build_qsm_bond(1.0, 0.0, 0.0).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.coeff(&"ZZ".parse::<PauliWord>().unwrap()), real(0.25));
    }

    #[test]
    fn bond_word_families() {
        let h = build_qsm_bond(1.0, 0.4, 0.1).unwrap();
        let words: Vec<String> = h.words().map(|w| w.to_string()).collect();
        assert_eq!(words, ["IX", "IZ", "XI", "ZI", "ZZ"]);
        assert!(h.is_hermitian());
    }

    #[test]
    fn lattice_validation() {
        let bad = LatticeSpec { n_sites: 2, ..Default::default() }.with_heisenberg(0, 0, 1.0);
        assert!(matches!(build_qsm_lattice(&bad, 6), Err(Error::Validation(_))));
        let oob = LatticeSpec { n_sites: 2, ..Default::default() }.with_field(2, AxisName::Z, 1.0);
        assert!(matches!(build_qsm_lattice(&oob, 6), Err(Error::Validation(_))));
        let big = LatticeSpec { n_sites: 7, ..Default::default() };
        assert!(matches!(build_qsm_lattice(&big, 6), Err(Error::Resource { .. })));
    }

    #[test]
    fn canonical_anticommutation() {
        let n = 3;
        let id = OperatorSum::identity(n).unwrap();
        for a in 0..n {
            for b in 0..n {
                let ca = jw_annihilation(n, a).unwrap();
                let cb = jw_annihilation(n, b).unwrap();
                let cbd = jw_creation(n, b).unwrap();
                let expect = if a == b { id.clone() } else { OperatorSum::zero(n) };
                assert_eq!(ca.anticommutator(&cbd).unwrap(), expect);
                assert!(ca.anticommutator(&cb).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn majorana_su2() {
        for j in 0..2 {
            let [gx, gy, gz] = majorana(2, j).unwrap();
            let i = Complex64::new(0.0, 1.0);
            assert_eq!(gx.commutator(&gy).unwrap(), gz.scale(i));
            assert_eq!(gy.commutator(&gz).unwrap(), gx.scale(i));
            assert_eq!(gz.commutator(&gx).unwrap(), gy.scale(i));
            assert_eq!(gz, sz(2, j).unwrap());
            let c = jw_annihilation(2, j).unwrap();
            assert!(c.anticommutator(&gz).unwrap().is_zero());
        }
    }

    #[test]
    fn hubbard_interaction_is_ising() {
        let h = build_hubbard_atom(0.0, 0.0, 2.0).unwrap();
        assert_eq!(h, sz(2, 0).unwrap().mul(&sz(2, 1).unwrap()).unwrap());
    }
}
