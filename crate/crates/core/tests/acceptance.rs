use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncb_core::clifford::operators::{boundary_operator, operator_r, operator_t, operator_u, operator_w, paired_spectrum};
use ncb_core::clifford::rep::{boundary_projector, c, CliffordRep, ProjectorKind, Spinor, I};
use ncb_core::clifford::killing::killing_charge;
use ncb_core::constraints::{check_dec, SampleSet, DEC_TOL};
use ncb_core::datasets::{DatasetDescriptor, Example};
use ncb_core::geometry::InitialDataSet;
use ncb_core::mass::invariance::{FLAT_ENERGY_TOL, FLAT_MOMENTUM_TOL, LORENTZ_NORM_TOL};
use ncb_core::mass::*;
use ncb_core::models::{CausalClass, ModelIsometry};
use ncb_core::verify::{run_suite, Suite, SuiteOptions};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn build(ex: Example) -> InitialDataSet {
    DatasetDescriptor::example(ex, 3).build().expect("built-in example")
}

fn flat(rep: &MassReport) -> (f64, Vec<f64>) {
    match &rep.invariants {
        Invariants::Flat { energy, momentum, .. } => (*energy, momentum.clone()),
        _ => panic!("flat invariants expected"),
    }
}

fn hyperbolic(rep: &MassReport) -> (Vec<f64>, Vec<f64>, CausalClass) {
    match &rep.invariants {
        Invariants::Hyperbolic { energy_vector, momentum_vector, energy_class, .. } => (energy_vector.clone(), momentum_vector.clone(), *energy_class),
        _ => panic!("hyperbolic invariants expected"),
    }
}

fn shell_dec(data: &InitialDataSet) -> ncb_core::constraints::DecReport {
    let samples = SampleSet::shell(&data.domain, 8.0, 9).expect("sample set");
    check_dec(data, &samples, DEC_TOL, None).expect("dec")
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn schwarzschild() -> Outcome {
    let t = Instant::now();
    let data = build(Example::Schwarzschild);
    let cfg = MassConfig::default();
    let rep = energy_momentum(&data, &cfg).unwrap();
    let (e, p) = flat(&rep);
    let target = 8.0 * PI;
    let e_ok = (e / target - 1.0).abs() <= 0.005;
    let p_ok = norm(&p) <= 1e-6 * e;
    // per-radius oracle 8πm(1 + m/2r)³ with a vanishing corner term
    let oracle_gap = rep
        .rows
        .iter()
        .map(|r| {
            let o = 8.0 * PI * (1.0 + 0.5 / r.r).powi(3);
            ((r.energy_bulk[0] + r.energy_corner[0] - o) / o).abs().max(r.energy_corner[0].abs())
        })
        .fold(0.0, f64::max);
    let dec = shell_dec(&data);
    let ein = einstein_energy_crosscheck(&data, &cfg).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let pass = e_ok && p_ok && oracle_gap <= 1e-6 && dec.pass && ein.relative_deviation <= 0.01 && secs <= 30.0;
    outcome(
        pass,
        format!(
            "E = {e:.6} (8π = {target:.6}, rel {:.2e}), |P| = {:.1e}, flux oracle gap {oracle_gap:.1e}, DEC {}, Einstein rel dev {:.2e}, {secs:.1} s",
            e / target - 1.0,
            norm(&p),
            dec.pass,
            ein.relative_deviation
        ),
    )
}

fn bowen_york() -> Outcome {
    let t = Instant::now();
    let data = build(Example::BowenYork);
    let rep = energy_momentum(&data, &MassConfig::default()).unwrap();
    let (e, p) = flat(&rep);
    let target = 8.0 * PI * 0.1;
    // the momentum flux 2∫π(∂_1, μ) is radius independent: 8πp₁ on every hemisphere
    let row_gap = rep.rows.iter().map(|r| (r.momentum[0] / target - 1.0).abs()).fold(0.0, f64::max);
    let dec = shell_dec(&data);
    let ineq = mass_inequality_report(&rep, &dec);
    let secs = t.elapsed().as_secs_f64();
    let pass = (p[0] / target - 1.0).abs() <= 0.01
        && e.abs() <= 1e-6
        && row_gap <= 0.01
        && dec.interior.worst_margin <= -1e-4
        && !ineq.hypotheses_hold
        && secs <= 30.0;
    outcome(
        pass,
        format!(
            "P₁ = {:.6} (8π·0.1 = {target:.6}), |E| = {:.1e}, interior DEC worst {:.3e}, hypotheses hold: {}, {secs:.1} s",
            p[0],
            e.abs(),
            dec.interior.worst_margin,
            ineq.hypotheses_hold
        ),
    )
}

fn chart_invariance() -> Outcome {
    let cfg = MassConfig::default();
    let rot = invariance_test(&build(Example::BowenYork), &ModelIsometry::rotation_about_normal(3, PI / 6.0), &cfg).unwrap();
    let flat_ok = rot.energy_deviation <= FLAT_ENERGY_TOL && rot.momentum_deviation <= FLAT_MOMENTUM_TOL;
    let boost = invariance_test(&build(Example::AdsSchwarzschild), &ModelIsometry::boost(3, 1, 0.5), &cfg).unwrap();
    let nd = boost.norm_deviation.unwrap_or(f64::INFINITY);
    outcome(
        flat_ok && nd <= LORENTZ_NORM_TOL,
        format!(
            "30° rotation on Bowen–York: E rel dev {:.1e}, P rel dev {:.1e}; boost on AdS–Schwarzschild: ⟨⟨ℰ,ℰ⟩⟩ rel dev {nd:.1e}",
            rot.energy_deviation, rot.momentum_deviation
        ),
    )
}

fn hyperbolic_baseline() -> Outcome {
    let cfg = MassConfig::default();
    let (ev, pv, _) = hyperbolic(&energy_momentum(&build(Example::HyperbolicTrivial), &cfg).unwrap());
    let trivial = ev.iter().chain(&pv).map(|x| x.abs()).fold(0.0, f64::max);
    let ads = energy_momentum(&build(Example::AdsSchwarzschild), &cfg).unwrap();
    let (ev, pv, class) = hyperbolic(&ads);
    let c3m = 8.0 * PI * 0.1;
    let ads_ok = (ev[0] / c3m - 1.0).abs() <= 0.01
        && ev[1..].iter().all(|x| x.abs() <= 0.01 * c3m)
        && pv.iter().all(|x| x.abs() <= 0.01 * c3m)
        && class == CausalClass::TimelikeFuture;
    let gauge = energy_momentum(&build(Example::GaugePerturbation), &cfg).unwrap();
    let gauge_ok = gauge.energy.iter().chain(&gauge.momentum).all(|e| e.value.abs() <= e.error_bar());
    let gauge_max = gauge.energy.iter().chain(&gauge.momentum).map(|e| e.value.abs()).fold(0.0, f64::max);
    outcome(
        trivial <= 1e-7 && ads_ok && gauge_ok,
        format!("(b,0) max component {trivial:.1e}; AdS–Schwarzschild ℰ₀ = {:.6} (c₃m = {c3m:.6}), class {class:?}; gauge max component {gauge_max:.1e} within error bars: {gauge_ok}", ev[0]),
    )
}

fn run(suites: &[Suite]) -> (bool, Vec<String>) {
    let opts = SuiteOptions::default();
    let mut ok = true;
    let mut failed = Vec::new();
    for &s in suites {
        let rep = run_suite(s, &opts).unwrap();
        for row in rep.rows.iter().filter(|r| !r.pass) {
            failed.push(format!("{}: {} ({:e})", s.name(), row.identity, row.residual));
        }
        ok &= rep.pass;
    }
    (ok, failed)
}

fn identity_suites() -> Outcome {
    let suites = [Suite::Decomposition, Suite::Shift, Suite::Divergence, Suite::GaugeCharge, Suite::Weitzenbock, Suite::KillingDev];
    let (ok, failed) = run(&suites);
    let worst_order = suites[2..5]
        .iter()
        .flat_map(|&s| run_suite(s, &SuiteOptions::default()).unwrap().rows)
        .filter_map(|r| r.observed_order)
        .fold(f64::INFINITY, f64::min);
    outcome(ok, format!("decomposition, shift, divergence, gauge-charge, weitzenbock, killing-dev; lowest observed order {worst_order:.2}; failures {failed:?}"))
}

fn spinor(rng: &mut ChaCha8Rng, dim: usize) -> Spinor {
    let v = Spinor::from_fn(dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let nv = v.norm();
    v / c(nv)
}

fn spectral_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut psd_mismatch = 0;
    let mut comm = 0.0f64;
    let mut simul = 0.0f64;
    for n in 3..=5 {
        let rep = CliffordRep::new(n).unwrap();
        let omega = &rep.gamma[n] * I;
        for _ in 0..100 {
            let rho: f64 = rng.gen_range(-2.0..2.0);
            let j: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let h: f64 = rng.gen_range(-2.0..2.0);
            let half = paired_spectrum(rep.dim, 0.5 * rho, 0.5 * norm(&j));
            let pm = paired_spectrum(rep.dim, 0.0, norm(&v));
            worst = worst.max(operator_r(&rep, rho, &j).unwrap().spectrum_deviation(&half));
            worst = worst.max(operator_w(&rep, rho, &j).unwrap().spectrum_deviation(&half));
            worst = worst.max(operator_u(&rep, &v).unwrap().spectrum_deviation(&pm));
            let t = operator_t(&rep, &v).unwrap();
            worst = worst.max(t.op.spectrum_deviation(&pm));
            comm = comm.max(t.commutator);
            for (phi, l, s) in &t.eigenbasis {
                simul = simul.max((&t.op.matrix * phi - phi * c(*l)).norm()).max((&omega * phi - phi * c(*s)).norm());
            }
            let margin = h - norm(&v);
            if margin.abs() > 1e-10 && boundary_operator(&rep, h, &v).unwrap().is_psd(1e-12) != (margin >= 0.0) {
                psd_mismatch += 1;
            }
        }
    }
    let (suite_ok, failed) = run(&[Suite::CliffordSpectra]);
    outcome(
        worst <= 1e-12 && psd_mismatch == 0 && comm <= 1e-13 && simul <= 1e-12 && suite_ok,
        format!("worst spectrum deviation {worst:.1e}, PSD mismatches {psd_mismatch}, ‖[𝒯, iγ_n]‖ {comm:.1e}, eigenpair residual {simul:.1e}; suite failures {failed:?}"),
    )
}

fn boundary_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut mit, mut chi, mut margin, mut equality) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for n in 3..=5 {
        let rep = CliffordRep::new(n).unwrap();
        let (g0, gn) = (&rep.gamma[0], &rep.gamma[n]);
        for k in 0..1000 {
            let psi = spinor(&mut rng, rep.dim);
            for kind in [ProjectorKind::MitPlus, ProjectorKind::MitMinus] {
                let v = boundary_projector(&rep, kind).apply(&psi);
                mit = mit.max((g0 * gn * &v).dotc(&v).norm());
            }
            let kind = if k % 2 == 0 { ProjectorKind::ChiPlus } else { ProjectorKind::ChiMinus };
            let v = boundary_projector(&rep, kind).apply(&psi);
            for a in 1..n {
                chi = chi.max((g0 * &rep.gamma[a] * &v).dotc(&v).norm());
            }
            chi = chi.max((gn * &v).dotc(&v).norm());
            let free = killing_charge(&rep, &psi, None).unwrap();
            let on = killing_charge(&rep, &v, Some(kind)).unwrap();
            margin = margin.min(free.margin).min(on.margin);
            // W_φ = ±V_φ e_n checked directly
            let mut dev = on.w.clone();
            dev[n - 1] -= kind.sign() * on.v;
            equality = equality.max(norm(&dev));
        }
    }
    outcome(
        mit <= 1e-13 && chi <= 1e-13 && margin >= -1e-13 && equality <= 1e-13,
        format!("MIT max |(ϱ·ψ,ψ)| {mit:.1e}, CHI max pairing {chi:.1e}, min causality margin {margin:.1e}, max |W_φ ∓ V_φ e_n| {equality:.1e} over 3000 spinors per check"),
    )
}

fn determinism(start: Instant) -> Outcome {
    let data = build(Example::BowenYork);
    let cfg = MassConfig::default().with_orders(24, 48);
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = serial.install(|| serde_json::to_string(&energy_momentum(&data, &cfg).unwrap()).unwrap());
    let b = wide.install(|| serde_json::to_string(&energy_momentum(&data, &cfg).unwrap()).unwrap());
    let s1 = serde_json::to_string(&run_suite(Suite::Divergence, &SuiteOptions::default()).unwrap()).unwrap();
    let s2 = wide.install(|| serde_json::to_string(&run_suite(Suite::Divergence, &SuiteOptions::default()).unwrap()).unwrap());
    let d1 = serde_json::to_string(&shell_dec(&data)).unwrap();
    let d2 = serial.install(|| serde_json::to_string(&shell_dec(&data)).unwrap());
    let same = a == b && s1 == s2 && d1 == d2;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        same && secs <= 300.0,
        format!("mass, suite and DEC reports byte-identical across 1 and 4 threads: {same}; acceptance wall time {secs:.1} s of the 300 s budget"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("Schwarzschild half-slice", schwarzschild),
        ("Bowen–York momentum", bowen_york),
        ("chart invariance", chart_invariance),
        ("hyperbolic baseline", hyperbolic_baseline),
        ("identity suites", identity_suites),
        ("spectral suite", spectral_suite),
        ("boundary-condition suite", boundary_suite),
    ];
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        all &= o.pass;
        println!("criterion {} [{}] {name}: {} ({:.1} s)", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed().as_secs_f64());
    }
    let o = determinism(start);
    all &= o.pass;
    println!("criterion 8 [{}] timing and determinism: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    if !all {
        std::process::exit(1);
    }
}
