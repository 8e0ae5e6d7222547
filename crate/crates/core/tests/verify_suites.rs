use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncb_core::clifford::rep::CliffordRep;
use ncb_core::verify::{boundary_spinor_rows, run_suite, Suite, SuiteOptions, MIN_ORDER};
use ncb_core::Error;

fn fast() -> SuiteOptions {
    let mut o = SuiteOptions::default();
    o.mass = o.mass.with_orders(24, 48);
    o
}

#[test]
fn every_suite_passes_at_the_default_seed() {
    for suite in Suite::ALL {
        let rep = run_suite(suite, &fast()).unwrap();
        assert!(!rep.rows.is_empty(), "{suite:?}");
        for row in &rep.rows {
            assert!(row.pass, "{suite:?}: {} [{}] residual {:e} tol {:e}", row.identity, row.sample, row.residual, row.tolerance);
        }
        assert!(rep.pass);
    }
}

#[test]
fn convergence_rows_report_orders() {
    for suite in [Suite::Divergence, Suite::GaugeCharge, Suite::Weitzenbock] {
        let rep = run_suite(suite, &fast()).unwrap();
        let conv: Vec<_> = rep.rows.iter().filter(|r| r.residual_half.is_some()).collect();
        assert!(!conv.is_empty(), "{suite:?}");
        for row in conv {
            let at_floor = row.residual <= 1e-11 && row.residual_half.unwrap() <= 1e-11;
            assert!(at_floor || row.observed_order.unwrap() >= MIN_ORDER, "{suite:?}: {}", row.identity);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for suite in [Suite::Decomposition, Suite::CliffordSpectra, Suite::Divergence] {
        let a = serde_json::to_string(&run_suite(suite, &fast()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(suite, &fast()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn other_seeds_pass_too() {
    for seed in [1, 99, 12345] {
        let mut o = fast();
        o.seed = seed;
        for suite in [Suite::Decomposition, Suite::CliffordSpectra, Suite::Divergence, Suite::GaugeCharge] {
            assert!(run_suite(suite, &o).unwrap().pass, "{suite:?} seed {seed}");
        }
    }
}

#[test]
fn boundary_spinor_suite_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 3..=5 {
        let rep = CliffordRep::new(n).unwrap();
        let rows = boundary_spinor_rows(&rep, 1000, &mut rng);
        assert!(rows.iter().all(|r| r.pass), "n = {n}");
        assert!(rows.iter().any(|r| r.identity.contains("MIT")));
    }
}

#[test]
fn bad_options_and_names() {
    let mut o = fast();
    o.step = 0.0;
    assert!(matches!(run_suite(Suite::Divergence, &o), Err(Error::Input(_))));
    assert_eq!(Suite::from_name("killing-dev"), Some(Suite::KillingDev));
    assert_eq!(Suite::from_name("nope"), None);
    for s in Suite::ALL {
        assert_eq!(Suite::from_name(s.name()), Some(s));
    }
}
