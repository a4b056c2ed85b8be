use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use adt_core::algebra::{commutator, spin, sx, Axis, OperatorSum, PauliWord};
use adt_core::cobs_state::{pure_state, triplet_state, StateSpec};
use adt_core::models::{build_kondo_local, build_qsm_bond, hubbard_from_occupation_form, jw_annihilation, jw_creation};
use adt_core::oracle::{exact_diagonalize, lehmann_greens, SpectralData};
use adt_core::perturbation::exact_response_slope;
use adt_core::sdeom::{adjoint_action, assemble, assemble_conjugate, Kind};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Eigenvector whose occupation-form energy is `target`.
fn level(spec: &SpectralData, shift: f64, target: f64) -> DVector<Complex64> {
    let k = spec
        .eigenvalues
        .iter()
        .position(|e| (e + shift - target).abs() < 1e-12)
        .expect("level present");
    spec.eigenvector(k)
}

#[test]
fn hubbard_atom_particle_addition() {
    let (mu_up, mu_dn, u) = (0.3, 0.5, 1.0);
    let model = hubbard_from_occupation_form(mu_up, mu_dn, u).unwrap();
    let h = &model.hamiltonian;
    let spec = exact_diagonalize(h).unwrap();
    let c_up = jw_annihilation(2, 0).unwrap();
    let cd_up = jw_creation(2, 0).unwrap();

    // Empty atom: adding ↑ costs μ_↑; with ↓ present it costs μ_↑ + U.
    for (occupied_energy, pole) in [(0.0, mu_up), (mu_dn, mu_up + u)] {
        let psi = level(&spec, model.constant_shift, occupied_energy);
        let state = pure_state(&psi).unwrap();
        let g = assemble(&c_up, &cd_up, h, &state, Kind::Minus).unwrap().greens();
        let dynamic: Vec<_> = g.dynamical().collect();
        assert_eq!(dynamic.len(), 1, "{:?}", g.poles);
        assert!((dynamic[0].position - pole).abs() < 1e-12);
        assert!((dynamic[0].residue - c(1.0)).norm() < 1e-12);
    }
}

#[test]
fn kondo_site_matches_lehmann_from_both_sides() {
    let model = build_kondo_local([0.0, 0.0, 0.3], [0.0, 0.0, 0.1], [0.02, 0.0, 0.05], 1.0).unwrap();
    let h = &model.hamiltonian;
    let spec = exact_diagonalize(h).unwrap();
    let psi = spec.eigenvector(0);
    let state = pure_state(&psi).unwrap();
    let pairs = [("XXI", "YYI"), ("IIZ", "ZIX"), ("XZY", "IZI")];
    for (a, b) in pairs {
        let o_i = OperatorSum::from_word(a.parse().unwrap(), c(1.0));
        let o_f = OperatorSum::from_word(b.parse().unwrap(), c(1.0));
        for kind in [Kind::Plus, Kind::Minus] {
            let exact = lehmann_greens(&spec, &psi, &o_i, &o_f, kind).unwrap();
            let left = assemble(&o_i, &o_f, h, &state, kind).unwrap().greens();
            let right = assemble_conjugate(&o_i, &o_f, h, &state, kind).unwrap().greens();
            for k in 0..40 {
                let w = Complex64::new(-3.0 + 0.15 * k as f64, 0.3);
                let e = exact.evaluate(w).unwrap();
                assert!((left.evaluate(w).unwrap() - e).norm() < 1e-10, "{a};{b} {kind}");
                assert!((right.evaluate(w).unwrap() - e).norm() < 1e-10, "{a};{b} {kind} final side");
            }
        }
    }
}

#[test]
fn static_limit_is_the_exact_linear_response() {
    let sx_ab = sx(2, 0).unwrap().add(&sx(2, 1).unwrap()).unwrap();
    for hz in [0.0, 0.1, 0.2] {
        let h = build_qsm_bond(1.0, hz, 0.0).unwrap();
        let sys = assemble(&sx(2, 0).unwrap(), &sx_ab, &h, &triplet_state(), Kind::Plus).unwrap();
        let engine = sys.greens().static_limit().re;
        let closed = -2.0 / (1.0 - 4.0 * hz * hz);
        let ed = exact_response_slope(hz, 1.0, Some(1e-4)).unwrap().slope;
        assert!((engine - closed).abs() < 1e-12, "hz {hz}: {engine} vs {closed}");
        assert!((ed - closed).abs() < 1e-6, "hz {hz}: ED {ed} vs {closed}");
    }
}

/// `Σ r p^n = <[ad^n A, B]>` for the commutator function in an eigenstate.
#[test]
fn spectral_moments_are_nested_commutators() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let mut h = OperatorSum::zero(3);
        for w in PauliWord::all(3).unwrap().into_iter().skip(1) {
            if r.random_bool(0.4) {
                h.add_term(w, c(r.random_range(-1.0..1.0)));
            }
        }
        let spec = exact_diagonalize(&h).unwrap();
        let state: StateSpec = pure_state(&spec.eigenvector(r.random_range(0..8))).unwrap();
        let a = spin(3, 0, Axis::X).unwrap().add(&spin(3, 2, Axis::Y).unwrap()).unwrap();
        let b = spin(3, 1, Axis::Z).unwrap().add(&a).unwrap();
        let g = assemble(&a, &b, &h, &state, Kind::Plus).unwrap().greens();
        let mut nested = a.clone();
        for n in 0..4u32 {
            let want = state.expect(&commutator(&nested, &b).unwrap()).unwrap();
            let got = g.spectral_moment(n);
            assert!((got - want).norm() < 1e-10 * (1.0 + want.norm()), "n = {n}: {got} vs {want}");
            nested = adjoint_action(&nested, &h).unwrap();
        }
    }
}
