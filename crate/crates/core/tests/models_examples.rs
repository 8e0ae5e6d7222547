use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncb_core::constraints::adjoint_constraint;
use ncb_core::datasets::{bowen_york, DatasetDescriptor, Example};
use ncb_core::geometry::domain::{ChartDomain, Model, Region};
use ncb_core::geometry::field::{TensorField, Valence};
use ncb_core::geometry::killing_dev::lie_derivative_metric;
use ncb_core::geometry::{curvature, fd_derivative, InitialDataSet};
use ncb_core::models::*;
use ncb_core::Error;

fn random_point(rng: &mut ChaCha8Rng, model: Model, n: usize, boundary: bool) -> Vec<f64> {
    let (lo, hi) = if model == Model::HyperbolicBall { (-0.5, 0.5) } else { (-3.0, 3.0) };
    let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
    p[n - 1] = if boundary { 0.0 } else { p[n - 1].abs() + 0.05 };
    p
}

#[test]
fn reference_metric_examples() {
    let d = reference_metric(Model::Flat, 3).eval_matrix(&[1.0, -2.0, 0.5]).unwrap();
    assert_eq!(d, DMatrix::identity(3, 3));
    let b = reference_metric(Model::HyperbolicBall, 3).eval_matrix(&[0.0, 0.0, 0.0]).unwrap();
    assert!((b - DMatrix::identity(3, 3) * 4.0).amax() < 1e-15);
    let polar = reference_metric(Model::HyperbolicPolar, 3);
    let c = curvature(&polar, &[1.2, 0.0, 1.6], None).unwrap();
    assert!((c.scalar + 6.0).abs() < 1e-5);
}

#[test]
fn static_potential_examples() {
    let flat = static_potentials(Model::Flat, 3);
    assert_eq!(flat.len(), 1);
    assert_eq!(flat[0].eval_scalar(&[3.0, 1.0, 2.0]).unwrap(), 1.0);
    let ball = static_potentials(Model::HyperbolicBall, 3);
    assert_eq!(ball.len(), 3);
    let o = [0.0, 0.0, 0.0];
    assert!((ball[0].eval_scalar(&o).unwrap() - 1.0).abs() < 1e-15);
    for v in &ball[1..] {
        assert!(v.eval_scalar(&o).unwrap().abs() < 1e-15);
    }
    // away from the origin the closed forms (1+|z|²)/(1−|z|²) and 2z_A/(1−|z|²)
    let z = [0.3, -0.2, 0.4];
    let q = 1.0 - (0.09 + 0.04 + 0.16);
    assert!((ball[0].eval_scalar(&z).unwrap() - (2.0 - q) / q).abs() < 1e-14);
    assert!((ball[1].eval_scalar(&z).unwrap() - 0.6 / q).abs() < 1e-14);
    assert!((ball[2].eval_scalar(&z).unwrap() + 0.4 / q).abs() < 1e-14);
}

#[test]
fn killing_basis_examples() {
    let flat = killing_basis(Model::Flat, 3);
    assert_eq!(flat.len(), 2);
    assert_eq!(flat[0].eval(&[1.0, 2.0, 3.0]).unwrap(), flat[0].eval(&[-4.0, 0.5, 0.1]).unwrap());
    let ball = killing_basis(Model::HyperbolicBall, 3);
    let w = ball[0].eval(&[0.0, 0.0, 0.0]).unwrap();
    assert!(w[0].abs() < 1e-15 && w[1].abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
    let b = reference_metric(Model::HyperbolicBall, 3).eval_matrix(&[0.0, 0.0, 0.0]).unwrap();
    let norm2: f64 = (0..3).map(|i| b[(i, i)] * w[i] * w[i]).sum();
    assert!((norm2 - 1.0).abs() < 1e-14);
}

#[test]
fn killing_fields_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for model in [Model::Flat, Model::HyperbolicPolar, Model::HyperbolicBall] {
        let g0 = reference_metric(model, 3);
        for w in killing_basis(model, 3) {
            for _ in 0..20 {
                let p = random_point(&mut rng, model, 3, false);
                let lie = lie_derivative_metric(&g0, &w, &p, None).unwrap();
                assert!(lie.amax() <= 1e-7, "{model:?} {p:?}: {}", lie.amax());
            }
        }
    }
}

#[test]
fn static_potentials_and_killing_fields_satisfy_the_model_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for model in [Model::Flat, Model::HyperbolicPolar, Model::HyperbolicBall] {
        let n = 3;
        let g0 = reference_metric(model, n);
        let pots = static_potentials(model, n);
        let fields = killing_basis(model, n);
        let zero_v = TensorField::zero(n, Valence::SCALAR);
        let zero_w = TensorField::zero(n, Valence::VECTOR);
        for _ in 0..50 {
            let p = random_point(&mut rng, model, n, false);
            for v in &pots {
                let a = adjoint_constraint(model, v, &zero_w, &p, None).unwrap();
                assert!(a.scalar_part.amax() <= 1e-6, "{model:?} {p:?}");
            }
            for w in &fields {
                let a = adjoint_constraint(model, &zero_v, w, &p, None).unwrap();
                assert!(a.vector_part.amax() <= 1e-6);
                assert!(lie_derivative_metric(&g0, w, &p, None).unwrap().amax() <= 1e-6);
            }
        }
        for _ in 0..20 {
            let p = random_point(&mut rng, model, n, true);
            // Neumann condition ∂V/∂x_n = 0 (boundary normal is along x_n in every model)
            for v in &pots {
                let dn = fd_derivative(v, &p, &[n - 1], None).unwrap()[0];
                assert!(dn.abs() <= 1e-6);
            }
            if model.is_hyperbolic() {
                let b = g0.eval_matrix(&p).unwrap();
                for w in &fields {
                    let wv = w.eval(&p).unwrap();
                    for a in 0..n - 1 {
                        let ip: f64 = (0..n).map(|k| b[(a, k)] * wv[k]).sum();
                        assert!(ip.abs() <= 1e-10);
                    }
                }
            } else {
                for w in &fields {
                    assert_eq!(w.eval(&p).unwrap()[n - 1], 0.0);
                }
            }
        }
    }
}

#[test]
fn boundary_values_of_killing_fields() {
    // W_(a) = V_(a) e_n on the boundary, e_n the unit normal of b
    for model in [Model::HyperbolicPolar, Model::HyperbolicBall] {
        let g0 = reference_metric(model, 3);
        let pots = static_potentials(model, 3);
        let fields = killing_basis(model, 3);
        let p = if model == Model::HyperbolicBall { [0.2, -0.3, 0.0] } else { [1.5, -0.7, 0.0] };
        let bnn = g0.eval_matrix(&p).unwrap()[(2, 2)];
        for (v, w) in pots.iter().zip(&fields) {
            let wv = w.eval(&p).unwrap();
            let expect = v.eval_scalar(&p).unwrap() / bnn.sqrt();
            assert!((wv[2] - expect).abs() < 1e-12, "{model:?}");
        }
    }
}

#[test]
fn potentials_agree_across_coordinate_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let polar = static_potentials(Model::HyperbolicPolar, 3);
    let ball = static_potentials(Model::HyperbolicBall, 3);
    for _ in 0..20 {
        let y = random_point(&mut rng, Model::HyperbolicPolar, 3, false);
        let (z, _) = polar_to_ball(&y);
        for (vp, vb) in polar.iter().zip(&ball) {
            assert!((vp.eval_scalar(&y).unwrap() - vb.eval_scalar(&z).unwrap()).abs() <= 1e-9);
        }
        let x = hyperboloid_point(Model::HyperbolicBall, &z).unwrap();
        let back = chart_point(Model::HyperbolicPolar, &x).unwrap();
        assert!(back.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-10));
    }
}

#[test]
fn identity_pullback_is_bit_identical() {
    let data = DatasetDescriptor::example(Example::BowenYork, 3).build().unwrap();
    let iso = ModelIsometry::rotation_about_normal(3, 0.0);
    let pulled = pullback_data(&data, &iso).unwrap();
    for p in [[1.0, 2.0, 0.5], [-3.0, 0.2, 0.0]] {
        assert_eq!(pulled.h.eval(&p).unwrap(), data.h.eval(&p).unwrap());
        assert_eq!(pulled.metric().eval(&p).unwrap(), data.metric().eval(&p).unwrap());
    }
}

#[test]
fn rotations_fix_the_flat_metric_and_rotate_bowen_york() {
    let iso = ModelIsometry::rotation_about_normal(3, PI / 2.0);
    let delta = reference_metric(Model::Flat, 3);
    let pulled = pullback_sym2(&delta, &iso, Model::Flat).unwrap();
    let p = [0.4, 1.1, 0.7];
    assert!((pulled.eval_matrix(&p).unwrap() - DMatrix::identity(3, 3)).amax() < 1e-15);

    // the pullback of Bowen-York data with momentum p is Bowen-York data with momentum R^T p
    let angle = PI / 6.0;
    let iso = ModelIsometry::rotation_about_normal(3, angle);
    let h = bowen_york(vec![0.1, 0.0, 0.0], Region::HalfSpace);
    let rotated = pullback_sym2(&h, &iso, Model::Flat).unwrap();
    let expect = bowen_york(vec![0.1 * angle.cos(), -0.1 * angle.sin(), 0.0], Region::HalfSpace);
    let d = (rotated.eval_matrix(&p).unwrap() - expect.eval_matrix(&p).unwrap()).amax();
    assert!(d < 1e-14, "{d}");
}

#[test]
fn boundary_moving_maps_are_rejected() {
    let domain = ChartDomain::new(3, Model::HyperbolicPolar, 1.0).unwrap();
    let data = InitialDataSet::new(domain, TensorField::zero(3, Valence::SYM2), TensorField::zero(3, Valence::SYM2), 3.0).unwrap();
    // boost along the normal axis moves the boundary
    let bad = ModelIsometry::boost(3, 3, 0.4);
    assert!(matches!(pullback_data(&data, &bad), Err(Error::InvalidIsometry(_))));
}

#[test]
fn causal_class_examples() {
    assert_eq!(causal_classify(&[1.0, 0.0, 0.0], 1e-12), CausalClass::TimelikeFuture);
    assert_eq!(causal_classify(&[1.0, 1.0, 0.0], 1e-12), CausalClass::NullFuture);
    assert_eq!(causal_classify(&[0.0, 0.0, 0.0], 1e-12), CausalClass::Zero);
    assert_eq!(causal_classify(&[-2.0, 1.0, 0.0], 1e-12), CausalClass::TimelikePast);
    assert_eq!(causal_classify(&[-1.0, 0.0, 1.0], 1e-12), CausalClass::NullPast);
    assert_eq!(causal_classify(&[0.5, 1.0, 0.0], 1e-12), CausalClass::Spacelike);
}

fn orthochronous(rapidity: f64, angle: f64) -> DMatrix<f64> {
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let boost = DMatrix::from_row_slice(3, 3, &[ch, sh, 0.0, sh, ch, 0.0, 0.0, 0.0, 1.0]);
    let rot = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, angle.cos(), -angle.sin(), 0.0, angle.sin(), angle.cos()]);
    rot * boost
}

proptest! {
    #[test]
    fn causal_class_is_orthochronous_invariant(
        v in prop::array::uniform3(-2.0..2.0f64),
        rapidity in -1.5..1.5f64,
        angle in 0.0..6.3f64,
    ) {
        let q = minkowski_product(&v, &v);
        let e2: f64 = v.iter().map(|x| x * x).sum();
        prop_assume!(q.abs() > 1e-3 * e2 && e2 > 1e-6);
        let l = orthochronous(rapidity, angle);
        let w = &l * nalgebra::DVector::from_column_slice(&v);
        prop_assert!((minkowski_product(w.as_slice(), w.as_slice()) - q).abs() < 1e-9 * e2.max(1.0) * 20.0);
        prop_assert_eq!(causal_classify(&v, 1e-12), causal_classify(w.as_slice(), 1e-12));
    }

    #[test]
    fn null_vectors_stay_null(theta in 0.0..6.3f64, scale in 0.1..10.0f64, rapidity in -1.0..1.0f64) {
        let v = [scale, scale * theta.cos(), scale * theta.sin()];
        let w = orthochronous(rapidity, 0.3) * nalgebra::DVector::from_column_slice(&v);
        prop_assert_eq!(causal_classify(w.as_slice(), 1e-10), CausalClass::NullFuture);
    }
}

#[test]
fn polar_to_ball_pullback_has_consistent_jets() {
    use ncb_core::constraints::interior_constraints;
    use ncb_core::geometry::fd::{gradient, hessian};
    let mut d = DatasetDescriptor::example(Example::AdsSchwarzschild, 3);
    d.model = Model::HyperbolicBall;
    d.r0 = 1.0 / (1.0 + 2f64.sqrt());
    let data = d.build().unwrap();
    let p = [0.1, -0.2, 0.475];
    let f = data.perturbation.clone();
    let g = f.clone();
    let plain = TensorField::from_fn(3, Valence::SYM2, move |q| g.eval(q));
    let gap = |a: Vec<f64>, b: Vec<f64>| a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(gap(gradient(&f, &p, None).unwrap(), gradient(&plain, &p, Some(1e-4)).unwrap()) < 1e-6);
    let e1 = gap(hessian(&f, &p, None).unwrap(), hessian(&plain, &p, Some(1e-3)).unwrap());
    let e2 = gap(hessian(&f, &p, None).unwrap(), hessian(&plain, &p, Some(5e-4)).unwrap());
    assert!((e1 / e2).log2() > 1.9, "{e1} {e2}");
    // vacuum in either chart
    let c = interior_constraints(&data.metric(), &data.h, data.lambda, &p, None).unwrap();
    assert!(c.rho.abs() < 1e-12 && c.j_norm < 1e-12);
    let polar = ball_data_to_polar(&data).unwrap();
    let (y, _) = ball_to_polar(&p);
    let direct = DatasetDescriptor::example(Example::AdsSchwarzschild, 3).build().unwrap();
    let (a, b) = (polar.perturbation.eval(&y).unwrap(), direct.perturbation.eval(&y).unwrap());
    assert!(gap(a, b) < 1e-14);
}
