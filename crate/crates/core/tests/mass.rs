#![allow(unused_imports)]

use std::f64::consts::PI;

use ncb_core::Error;

mod extrapolate {
    #[allow(unused_imports)]
    use super::*;
    use ncb_core::mass::extrapolate::*;

    #[test]
    fn exact_model_is_recovered() {
        let radii = [16.0, 32.0, 64.0, 128.0];
        let vals: Vec<f64> = radii.iter().map(|r: &f64| 3.0 + 2.0 / r).collect();
        let e = extrapolate(&radii, &vals, 1.0, 3, 0.0).unwrap();
        assert!((e.limit - 3.0).abs() < 1e-13);
        assert!(e.error < 1e-13);
    }

    #[test]
    fn growing_sequence_fails() {
        let radii = [16.0, 32.0, 64.0, 128.0];
        let vals: Vec<f64> = radii.iter().map(|r: &f64| r.sqrt()).collect();
        assert!(matches!(extrapolate(&radii, &vals, 1.0, 3, 0.0), Err(Error::Convergence(_))));
    }
}

mod report {
    #[allow(unused_imports)]
    use super::*;
    use ncb_core::mass::report::*;

    #[test]
    fn unit_sphere_areas() {
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }
}

mod quadrature {
    #[allow(unused_imports)]
    use super::*;
    use ncb_core::mass::quadrature::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(a, b)| b * a.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn three_dimensional_weights() {
        let r = HemisphereRule::new(3, 48, 96).unwrap();
        assert!((r.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        assert!((r.corner_weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        let m = |f: &dyn Fn(&[f64]) -> f64| r.nodes.iter().zip(&r.weights).map(|(p, w)| w * f(p)).sum::<f64>();
        assert!((m(&|p| p[2]) - PI).abs() < 1e-12);
        assert!((m(&|p| p[0] * p[0]) - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((m(&|p| p[0] * p[1] * p[2])).abs() < 1e-12);
    }

    #[test]
    fn higher_dimensional_areas() {
        // |S^3_+| = π², |S^2| = 4π
        let r = HemisphereRule::new(4, 24, 48).unwrap();
        assert!((r.weights.iter().sum::<f64>() - PI * PI).abs() < 1e-11);
        assert!((r.corner_weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-11);
    }
}
