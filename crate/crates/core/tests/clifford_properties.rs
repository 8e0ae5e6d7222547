use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use ncb_core::clifford::identities::verify_decomposition;
use ncb_core::clifford::killing::killing_charge;
use ncb_core::clifford::operators::*;
use ncb_core::clifford::rep::{boundary_projector, c, CliffordRep, ProjectorKind, Spinor, I};

const SPEC_TOL: f64 = 1e-12;
const PROJ_TOL: f64 = 1e-13;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn spinor(parts: &[(f64, f64)], dim: usize) -> Spinor {
    let v = Spinor::from_fn(dim, |i, _| Complex64::new(parts[i].0, parts[i].1));
    let nv = v.norm();
    v / c(nv.max(1e-300))
}

fn vec_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, len)
}

fn spinor_parts() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn r_and_w_spectra(n in 3usize..6, rho in -2.0..2.0f64, j in vec_strategy(5)) {
        let rep = CliffordRep::new(n).unwrap();
        let j = &j[..n];
        let expect = paired_spectrum(rep.dim, 0.5 * rho, 0.5 * norm(j));
        prop_assert!(operator_r(&rep, rho, j).unwrap().spectrum_deviation(&expect) <= SPEC_TOL);
        prop_assert!(operator_w(&rep, rho, j).unwrap().spectrum_deviation(&expect) <= SPEC_TOL);
    }

    #[test]
    fn u_and_t_spectra(n in 3usize..6, v in vec_strategy(4)) {
        let rep = CliffordRep::new(n).unwrap();
        let v = &v[..n - 1];
        let expect = paired_spectrum(rep.dim, 0.0, norm(v));
        prop_assert!(operator_u(&rep, v).unwrap().spectrum_deviation(&expect) <= SPEC_TOL);
        let t = operator_t(&rep, v).unwrap();
        prop_assert!(t.op.spectrum_deviation(&expect) <= SPEC_TOL);
        prop_assert!(t.commutator <= PROJ_TOL);
        let omega = &rep.gamma[n] * I;
        prop_assert_eq!(t.eigenbasis.len(), rep.dim);
        for (phi, l, s) in &t.eigenbasis {
            prop_assert!((&t.op.matrix * phi - phi * c(*l)).norm() <= SPEC_TOL);
            prop_assert!((&omega * phi - phi * c(*s)).norm() <= PROJ_TOL);
        }
    }

    #[test]
    fn boundary_operator_psd_iff_margin(n in 3usize..6, h in -2.0..2.0f64, v in vec_strategy(4)) {
        let rep = CliffordRep::new(n).unwrap();
        let v = &v[..n - 1];
        let margin = h - norm(v);
        let op = boundary_operator(&rep, h, v).unwrap();
        prop_assert!((op.min_eigenvalue() - margin).abs() <= SPEC_TOL);
        if margin.abs() > 1e-10 {
            prop_assert_eq!(op.is_psd(SPEC_TOL), margin >= 0.0);
        }
    }

    #[test]
    fn decomposition_residual(n in 3usize..6, entries in vec_strategy(15)) {
        let rep = CliffordRep::new(n).unwrap();
        let mut h = DMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                h[(i, j)] = entries[k];
                h[(j, i)] = entries[k];
                k += 1;
            }
        }
        prop_assert!(verify_decomposition(&rep, &h).unwrap() <= SPEC_TOL);
    }

    #[test]
    fn mit_eigenspinors_are_isotropic(n in 3usize..6, a in spinor_parts(), b in spinor_parts()) {
        let rep = CliffordRep::new(n).unwrap();
        let psi = spinor(&a, rep.dim);
        let xi = spinor(&b, rep.dim);
        let plus = boundary_projector(&rep, ProjectorKind::MitPlus);
        let minus = boundary_projector(&rep, ProjectorKind::MitMinus);
        let g0 = &rep.gamma[0];
        let gn = &rep.gamma[n];
        for p in [&plus, &minus] {
            let v = p.apply(&psi);
            // (ϱ·ψ, ψ) = ⟨γ₀γ_n ψ, ψ⟩
            prop_assert!((g0 * gn * &v).dotc(&v).norm() <= PROJ_TOL);
        }
        prop_assert!((gn * plus.apply(&psi)).dotc(&minus.apply(&xi)).norm() <= PROJ_TOL);
    }

    #[test]
    fn chi_eigenspinors_are_isotropic(n in 3usize..6, a in spinor_parts(), plus in any::<bool>()) {
        let rep = CliffordRep::new(n).unwrap();
        let kind = if plus { ProjectorKind::ChiPlus } else { ProjectorKind::ChiMinus };
        let v = boundary_projector(&rep, kind).apply(&spinor(&a, rep.dim));
        for k in 1..n {
            prop_assert!((&rep.gamma[0] * &rep.gamma[k] * &v).dotc(&v).norm() <= PROJ_TOL);
        }
        prop_assert!((&rep.gamma[n] * &v).dotc(&v).norm() <= PROJ_TOL);
        let q = killing_charge(&rep, &v, Some(kind)).unwrap();
        prop_assert!(q.margin >= -PROJ_TOL);
        prop_assert!(q.boundary_deviation.unwrap() <= PROJ_TOL);
    }

    #[test]
    fn killing_charge_is_causal(n in 3usize..6, a in spinor_parts()) {
        let rep = CliffordRep::new(n).unwrap();
        let phi = spinor(&a, rep.dim);
        let q = killing_charge(&rep, &phi, None).unwrap();
        prop_assert!(q.margin >= -PROJ_TOL);
        prop_assert!(q.boundary_deviation.is_none());
        // V_φ = |φ|² and the components of W are bounded by it
        prop_assert!((q.v - 1.0).abs() <= 1e-14);
        prop_assert!(q.w.iter().all(|x| x.abs() <= 1.0 + 1e-14));
    }
}

#[test]
fn killing_charge_off_eigenspace_has_no_boundary_relation() {
    let rep = CliffordRep::new(3).unwrap();
    let parts: Vec<(f64, f64)> = (0..rep.dim).map(|k| (0.3 + k as f64, -0.2 * k as f64)).collect();
    let phi = spinor(&parts, rep.dim);
    assert!(killing_charge(&rep, &phi, Some(ProjectorKind::ChiPlus)).unwrap().boundary_deviation.is_none());
    assert!(killing_charge(&rep, &phi, Some(ProjectorKind::MitPlus)).is_err());
    assert!(killing_charge(&rep, &Spinor::zeros(2), None).is_err());
}

#[test]
fn chi_equality_case() {
    for n in 3..=5 {
        let rep = CliffordRep::new(n).unwrap();
        for kind in [ProjectorKind::ChiPlus, ProjectorKind::ChiMinus] {
            for phi in boundary_projector(&rep, kind).basis() {
                let q = killing_charge(&rep, &phi, Some(kind)).unwrap();
                assert!(q.margin.abs() <= PROJ_TOL);
                assert!((q.w[n - 1] - kind.sign() * q.v).abs() <= PROJ_TOL);
            }
        }
    }
}
