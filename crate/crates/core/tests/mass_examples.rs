use std::f64::consts::PI;

use nalgebra::DMatrix;

use ncb_core::constraints::{check_dec, SampleSet, DEC_TOL};
use ncb_core::datasets::{DatasetDescriptor, Example};
use ncb_core::geometry::domain::{ChartDomain, Model, Region};
use ncb_core::geometry::field::{TensorField, Valence};
use ncb_core::geometry::InitialDataSet;
use ncb_core::datasets::profiles::radial_sym2;
use ncb_core::mass::einstein::einstein_prefactor;
use ncb_core::mass::flux::corner_integrand;
use ncb_core::mass::invariance::{FLAT_ENERGY_TOL, FLAT_MOMENTUM_TOL, LORENTZ_NORM_TOL};
use ncb_core::mass::*;
use ncb_core::models::{killing_basis, reference_metric, static_potentials, CausalClass, ModelIsometry};
use ncb_core::Error;

fn build(ex: Example) -> InitialDataSet {
    DatasetDescriptor::example(ex, 3).build().unwrap()
}

fn row_energy(row: &FluxRow) -> f64 {
    row.energy_bulk[0] + row.energy_corner[0]
}

fn flat_parts(rep: &MassReport) -> (f64, Vec<f64>, f64) {
    match &rep.invariants {
        Invariants::Flat { energy, momentum, energy_minus_momentum, .. } => (*energy, momentum.clone(), *energy_minus_momentum),
        _ => panic!("expected flat invariants"),
    }
}

fn hyperbolic_parts(rep: &MassReport) -> (Vec<f64>, Vec<f64>, CausalClass) {
    match &rep.invariants {
        Invariants::Hyperbolic { energy_vector, momentum_vector, energy_class, .. } => (energy_vector.clone(), momentum_vector.clone(), *energy_class),
        _ => panic!("expected hyperbolic invariants"),
    }
}

// induced area of the coordinate hemisphere |y| = r, by a midpoint rule on the metric itself
fn hemisphere_area_oracle(model: Model, r: f64) -> f64 {
    let g = reference_metric(model, 3);
    let (nt, np) = (200, 200);
    let mut area = 0.0;
    for i in 0..nt {
        let t = (i as f64 + 0.5) * (PI / 2.0) / nt as f64;
        for j in 0..np {
            let p = (j as f64 + 0.5) * 2.0 * PI / np as f64;
            let x = [r * t.sin() * p.cos(), r * t.sin() * p.sin(), r * t.cos()];
            let et = [r * t.cos() * p.cos(), r * t.cos() * p.sin(), -r * t.sin()];
            let ep = [-r * t.sin() * p.sin(), r * t.sin() * p.cos(), 0.0];
            let m = g.eval_matrix(&x).unwrap();
            let q = |a: &[f64; 3], b: &[f64; 3]| (0..3).map(|k| (0..3).map(|l| a[k] * m[(k, l)] * b[l]).sum::<f64>()).sum::<f64>();
            let det = q(&et, &et) * q(&ep, &ep) - q(&et, &ep).powi(2);
            area += det.sqrt() * (PI / 2.0 / nt as f64) * (2.0 * PI / np as f64);
        }
    }
    area
}

#[test]
fn hemisphere_rule_weights() {
    let flat = ChartDomain::new(3, Model::Flat, 0.5).unwrap();
    let rule = build_hemisphere_rule(&flat, 1.0, 32, 64).unwrap();
    assert!((rule.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
    assert!((rule.corner_weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
    assert!(rule.nodes.iter().chain(&rule.corner_nodes).all(|p| p[2] >= 0.0));
    for (model, r) in [(Model::HyperbolicPolar, 2.0), (Model::HyperbolicBall, 0.5)] {
        let d = ChartDomain::new(3, model, 0.1).unwrap();
        let rule = build_hemisphere_rule(&d, r, 32, 64).unwrap();
        let oracle = hemisphere_area_oracle(model, r);
        let s: f64 = rule.weights.iter().sum();
        assert!(((s - oracle) / oracle).abs() < 1e-4, "{model:?}: {s} {oracle}");
    }
    assert!(matches!(build_hemisphere_rule(&flat, 0.5, 8, 16), Err(Error::Domain { .. })));
}

#[test]
fn hemisphere_rule_integrates_harmonics() {
    let flat = ChartDomain::new(3, Model::Flat, 0.5).unwrap();
    let rule = build_hemisphere_rule(&flat, 1.0, 16, 32).unwrap();
    let int = |f: &dyn Fn(&[f64]) -> f64| rule.nodes.iter().zip(&rule.weights).map(|(p, w)| w * f(p)).sum::<f64>();
    // ∫_{S²_+} x_3^k = 2π/(k+1), odd harmonics in x_1, x_2 vanish
    for k in 0..10 {
        assert!((int(&|p| p[2].powi(k)) - 2.0 * PI / (k as f64 + 1.0)).abs() < 1e-12);
    }
    assert!(int(&|p| p[0] * p[1].powi(3) * p[2]).abs() < 1e-12);
    assert!((int(&|p| p[0] * p[0] - p[1] * p[1])).abs() < 1e-12);
}

#[test]
fn trivial_data_have_zero_mass() {
    let rep = energy_momentum(&build(Example::FlatTrivial), &MassConfig::default()).unwrap();
    let (e, p, _) = flat_parts(&rep);
    assert!(e == 0.0 && p.iter().all(|x| *x == 0.0));
    let rep = energy_momentum(&build(Example::HyperbolicTrivial), &MassConfig::default()).unwrap();
    let (ev, pv, class) = hyperbolic_parts(&rep);
    assert!(ev.iter().chain(&pv).all(|x| x.abs() <= 1e-7), "{ev:?} {pv:?}");
    assert_eq!(class, CausalClass::Zero);
}

#[test]
fn schwarzschild_energy() {
    let data = build(Example::Schwarzschild);
    let m = 1.0;
    let rep = energy_momentum(&data, &MassConfig::default()).unwrap();
    // flux of ((1 + m/2r)⁴ − 1)δ through the hemisphere: 8πm(1 + m/2r)³, corner term zero
    for row in &rep.rows {
        let oracle = 8.0 * PI * m * (1.0 + m / (2.0 * row.r)).powi(3);
        assert!((row_energy(row) - oracle).abs() < 1e-6 * oracle, "{} {}", row_energy(row), oracle);
        assert!(row.energy_corner[0].abs() < 1e-12);
    }
    let (e, p, _) = flat_parts(&rep);
    assert!((e / (8.0 * PI) - 1.0).abs() < 0.005, "{e}");
    let pn = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(pn <= 1e-6 * e);
}

#[test]
fn bowen_york_momentum() {
    let rep = energy_momentum(&build(Example::BowenYork), &MassConfig::default()).unwrap();
    let (e, p, diff) = flat_parts(&rep);
    assert!(e.abs() <= 1e-6);
    assert!((p[0] / (8.0 * PI * 0.1) - 1.0).abs() < 0.01, "{p:?}");
    assert!(p[1].abs() < 1e-8);
    assert!((diff + 8.0 * PI * 0.1).abs() < 0.01 * 8.0 * PI * 0.1);
}

#[test]
fn ads_schwarzschild_energy() {
    let m = 0.1;
    let data = build(Example::AdsSchwarzschild);
    let rep = energy_momentum(&data, &MassConfig::default()).unwrap();
    // radial f = φ dr² gives Ũ(V_(0), f)(μ) = 2(1 + r²)ψ/r with ψ = tr_b f, so the hemisphere flux is
    // 8πm(1 + r²)/(1 + r² − 2m/r); the corner term vanishes since f(ϱ_b, ϑ) = 0
    for row in &rep.rows {
        let r = row.r;
        let oracle = 8.0 * PI * m * (1.0 + r * r) / (1.0 + r * r - 2.0 * m / r);
        assert!((row_energy(row) - oracle).abs() < 1e-4 * oracle, "{r}: {} {oracle}", row_energy(row));
    }
    let c3 = 8.0 * PI;
    let (ev, pv, class) = hyperbolic_parts(&rep);
    assert!((ev[0] / (c3 * m) - 1.0).abs() < 0.01, "{ev:?}");
    assert!(ev[1..].iter().all(|x| x.abs() < 1e-6 * ev[0]));
    assert!(pv.iter().all(|x| x.abs() < 1e-10));
    assert_eq!(class, CausalClass::TimelikeFuture);
}

#[test]
fn pure_gauge_data_have_no_mass() {
    let rep = energy_momentum(&build(Example::GaugePerturbation), &MassConfig::default()).unwrap();
    for est in rep.energy.iter().chain(&rep.momentum) {
        assert!(est.value.abs() <= est.error_bar().max(1e-7), "{} {}", est.value, est.error_bar());
    }
}

#[test]
fn estimate_error_is_last_extrapolant_gap() {
    let rep = energy_momentum(&build(Example::Schwarzschild), &MassConfig::default()).unwrap();
    let e = &rep.energy[0];
    let k = e.extrapolants.len();
    assert!(k >= 2);
    assert_eq!(e.error, (e.extrapolants[k - 1] - e.extrapolants[k - 2]).abs());
    assert_eq!(e.value, e.extrapolants[k - 1]);
}

#[test]
fn radius_sequence_independence() {
    let data = build(Example::Schwarzschild);
    let a = energy_momentum(&data, &MassConfig::default().with_radii(vec![10.0, 20.0, 40.0, 80.0])).unwrap();
    let b = energy_momentum(&data, &MassConfig::default().with_radii(vec![10.0, 30.0, 90.0, 270.0])).unwrap();
    let (ea, eb) = (&a.energy[0], &b.energy[0]);
    let bar = ea.error_bar() + eb.error_bar();
    assert!((ea.value - eb.value).abs() <= bar.max(1e-6 * ea.value), "{} {} {bar}", ea.value, eb.value);
}

#[test]
fn einstein_crosscheck() {
    let cfg = MassConfig::default();
    let s = einstein_energy_crosscheck(&build(Example::Schwarzschild), &cfg).unwrap();
    assert!((einstein_prefactor(3) + 2.0).abs() < 1e-15);
    assert!((s.einstein_energy.value / (8.0 * PI) - 1.0).abs() < 0.01, "{}", s.einstein_energy.value);
    assert!(s.relative_deviation < 0.01);
    let z = einstein_energy_crosscheck(&build(Example::FlatTrivial), &cfg).unwrap();
    assert!(z.einstein_energy.value.abs() < 1e-12 && z.flux_energy.value.abs() < 1e-12);
    let c = einstein_energy_crosscheck(&build(Example::ConformalBump), &cfg).unwrap();
    assert!(c.einstein_energy.value.abs() < 1e-10 && c.flux_energy.value.abs() < 1e-10);
    let h = build(Example::HyperbolicTrivial);
    assert!(einstein_energy_crosscheck(&h, &cfg).is_err());
}

#[test]
fn corner_integrand_vanishes_for_conformally_flat_data() {
    for ex in [Example::Schwarzschild, Example::ConformalBump, Example::FlatTrivial] {
        let data = build(ex);
        for r in [2.0, 16.0] {
            let v = corner_integrand(&data, r, 8, 32).unwrap();
            assert!(v.iter().all(|x| x.abs() <= 1e-14), "{ex:?} {r}");
        }
    }
}

#[test]
fn identity_invariance_is_exact() {
    let rep = invariance_test(&build(Example::BowenYork), &ModelIsometry::rotation_about_normal(3, 0.0), &MassConfig::default()).unwrap();
    assert!(rep.pass && rep.energy_deviation == 0.0 && rep.momentum_deviation == 0.0);
}

#[test]
fn flat_rotation_invariance() {
    let data = build(Example::BowenYork);
    let angle = PI / 6.0;
    let rep = invariance_test(&data, &ModelIsometry::rotation_about_normal(3, angle), &MassConfig::default()).unwrap();
    assert!(rep.pass, "{} {}", rep.energy_deviation, rep.momentum_deviation);
    assert!(rep.energy_deviation <= FLAT_ENERGY_TOL && rep.momentum_deviation <= FLAT_MOMENTUM_TOL);
    // the pulled-back data carry the momentum of the inverse rotation
    let (_, p0, _) = flat_parts(&rep.original);
    let (_, p1, _) = flat_parts(&rep.transformed);
    let rot = DMatrix::from_row_slice(2, 2, &[angle.cos(), angle.sin(), -angle.sin(), angle.cos()]);
    let expect = rot * nalgebra::DVector::from_vec(p0[..2].to_vec());
    let norm = p0.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((0..2).all(|i| (expect[i] - p1[i]).abs() <= 1e-6 * norm), "{p0:?} {p1:?}");
}

#[test]
fn hyperbolic_isometry_invariance() {
    let data = build(Example::AdsSchwarzschild);
    for iso in [ModelIsometry::boost(3, 1, 0.3), ModelIsometry::hyperbolic_rotation(3, 1, 2, 0.4)] {
        let rep = invariance_test(&data, &iso, &MassConfig::default()).unwrap();
        assert!(rep.pass && rep.norm_deviation.unwrap() <= LORENTZ_NORM_TOL, "{:?}", rep.norm_deviation);
    }
}

#[test]
fn mass_inequality_reports() {
    let cfg = MassConfig::default();
    let report = |ex: Example| {
        let data = build(ex);
        let rep = energy_momentum(&data, &cfg).unwrap();
        let dec = check_dec(&data, &SampleSet::shell(&data.domain, 8.0, 7).unwrap(), DEC_TOL, None).unwrap();
        mass_inequality_report(&rep, &dec)
    };
    let s = report(Example::Schwarzschild);
    assert!(s.dec_pass && s.hypotheses_hold && s.inequality_holds);
    assert!((s.energy_minus_momentum.unwrap() / (8.0 * PI) - 1.0).abs() < 0.005);
    let by = report(Example::BowenYork);
    assert!(!by.dec_pass && !by.hypotheses_hold && !by.inequality_holds);
    assert!(by.energy_minus_momentum.unwrap() < 0.0);
    let z = report(Example::FlatTrivial);
    assert!(z.dec_pass && z.inequality_holds && z.energy_minus_momentum.unwrap() == 0.0);
    let a = report(Example::AdsSchwarzschild);
    assert!(a.dec_pass && a.inequality_holds && a.energy_class.is_future_causal());
}

#[test]
fn functional_on_reference_data_vanishes() {
    let data = build(Example::HyperbolicTrivial);
    let cfg = MassConfig::default().with_orders(16, 32);
    for (v, w) in static_potentials(Model::HyperbolicPolar, 3).into_iter().zip(killing_basis(Model::HyperbolicPolar, 3)) {
        let val = mass_functional(&data, &v, &w, &cfg).unwrap();
        assert!(val.estimate.value.abs() <= 1e-7);
    }
}

#[test]
fn slowly_decaying_data_do_not_converge() {
    // f = r^{-0.3} δ claims τ = 1 but its flux grows like r^{0.7}
    let f = radial_sym2(3, Region::HalfSpace, |r| [0.0, 0.0, 0.0, r.powf(-0.3), -0.3 * r.powf(-1.3), 0.39 * r.powf(-2.3)]);
    let data = InitialDataSet::new(ChartDomain::new(3, Model::Flat, 1.0).unwrap(), f, TensorField::zero(3, Valence::SYM2), 1.0).unwrap();
    let cfg = MassConfig::default().with_orders(16, 32);
    assert!(matches!(energy_momentum(&data, &cfg), Err(Error::Convergence(_))));
}

#[test]
fn decay_below_threshold_is_refused() {
    let mut d = DatasetDescriptor::example(Example::Schwarzschild, 3);
    d.decay = 0.4;
    let data = d.build().unwrap();
    assert!(energy_momentum(&data, &MassConfig::default()).is_err());
    assert!(matches!(energy_momentum(&build(Example::Schwarzschild), &MassConfig::default().with_radii(vec![16.0])), Err(Error::Input(_))));
}
