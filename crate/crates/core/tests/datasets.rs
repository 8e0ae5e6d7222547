#![allow(unused_imports)]

use ncb_core::geometry::domain::Region;
use ncb_core::geometry::field::TensorField;

mod profiles {
    #[allow(unused_imports)]
    use super::*;
    use ncb_core::datasets::profiles::*;
    use ncb_core::geometry::fd::fd_closure;

    fn check_exact(field: &TensorField, p: &[f64], tol: f64) {
        let n = field.dim();
        let h = 1e-5;
        let f = |q: &[f64]| field.eval(q);
        let d = ncb_core::geometry::fd::gradient(field, p, None).unwrap();
        for k in 0..n {
            let fd = fd_closure(&f, Region::Whole, p, &[k], h).unwrap();
            for (c, v) in fd.iter().enumerate() {
                assert!((d[k * field.ncomp() + c] - v).abs() < tol, "d{k} comp {c}: {} vs {v}", d[k * field.ncomp() + c]);
            }
        }
        let dd = ncb_core::geometry::fd::hessian(field, p, None).unwrap();
        let dfield = |q: &[f64]| ncb_core::geometry::fd::gradient(field, q, None);
        for l in 0..n {
            let fd = fd_closure(&dfield, Region::Whole, p, &[l], h).unwrap();
            for k in 0..n {
                for c in 0..field.ncomp() {
                    let exact = dd[(k * n + l) * field.ncomp() + c];
                    let approx = fd[k * field.ncomp() + c];
                    assert!((exact - approx).abs() < tol, "dd{k}{l} comp {c}: {exact} vs {approx}");
                }
            }
        }
    }

    #[test]
    fn radial_profile_derivatives() {
        let prof = |r: f64| [1.0 / (1.0 + r * r), -2.0 * r / (1.0 + r * r).powi(2), (6.0 * r * r - 2.0) / (1.0 + r * r).powi(3), r.sin(), r.cos(), -r.sin()];
        let f = radial_sym2(3, Region::Whole, prof);
        check_exact(&f, &[0.3, -0.7, 1.1], 1e-7);
    }

    #[test]
    fn bump_derivatives() {
        let f = conformal_bump(3, 0.4, Bump { center: vec![0.0, 0.2, 0.5], radius: 1.5 }, Region::Whole);
        check_exact(&f, &[0.3, -0.4, 0.9], 1e-7);
        let t = tensor_bump(3, vec![1.0, 0.2, -0.3, 0.2, 0.5, 0.7, -0.3, 0.7, -1.0], Bump { center: vec![0.1, 0.0, 1.0], radius: 1.2 }, Region::Whole);
        check_exact(&t, &[0.2, 0.3, 0.8], 1e-7);
        let v = vector_bump(vec![0.3, -1.0, 0.0], Bump { center: vec![0.1, 0.0, 1.0], radius: 1.2 }, Region::Whole);
        check_exact(&v, &[0.2, 0.3, 0.8], 1e-7);
    }
}
