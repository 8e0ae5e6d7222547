use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::constraints::dec::DecReport;
use crate::error::{Error, Result};
use crate::geometry::domain::Model;
use crate::geometry::field::TensorField;
use crate::geometry::InitialDataSet;
use crate::mass::extrapolate::{extrapolate, Extrapolation};
use crate::mass::flux::{check_decay, flux_chart, flux_rows, FluxRow, MassConfig};
use crate::models::lorentz::{minkowski_product, CausalClass};
use crate::models::{killing_basis, static_potentials};

#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// Difference of the last two window extrapolants.
    pub error: f64,
    /// Roundoff allowance from the size of the integrands.
    pub roundoff: f64,
    pub extrapolants: Vec<f64>,
}

impl From<Extrapolation> for Estimate {
    fn from(e: Extrapolation) -> Self {
        Self { value: e.limit, error: e.error, roundoff: e.floor, extrapolants: e.extrapolants }
    }
}

impl Estimate {
    /// Combined error bar `max(error, roundoff)`.
    pub fn error_bar(&self) -> f64 {
        self.error.max(self.roundoff)
    }
}

/// Relative roundoff budget of a flux integral with respect to the integral of
/// the absolute integrand.
pub const ROUNDOFF_REL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Invariants {
    Flat {
        energy: f64,
        momentum: Vec<f64>,
        /// `E − |P|`.
        energy_minus_momentum: f64,
        /// `−E² + |P|²`.
        lorentz_square: f64,
        class: CausalClass,
    },
    Hyperbolic {
        energy_vector: Vec<f64>,
        momentum_vector: Vec<f64>,
        /// `⟨⟨ℰ, ℰ⟩⟩`.
        energy_norm: f64,
        /// `⟨⟨𝒫, 𝒫⟩⟩`.
        momentum_norm: f64,
        energy_class: CausalClass,
        momentum_class: CausalClass,
    },
}

/// Energy divided by `(n−1) ω_{n−1}`, for comparison with the usual ADM normalization.
#[derive(Debug, Clone, Serialize)]
pub struct AdmNormalized {
    pub label: String,
    pub factor: f64,
    pub energy: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MassReport {
    pub model: Model,
    pub n: usize,
    pub exponent: f64,
    pub window: usize,
    pub rows: Vec<FluxRow>,
    /// Index 0 pairs with the constant potential (flat) or `V_(0)`.
    pub energy: Vec<Estimate>,
    pub momentum: Vec<Estimate>,
    pub invariants: Invariants,
    pub adm_normalized: AdmNormalized,
}

/// Area of the unit sphere `S^k`.
pub fn sphere_area(k: usize) -> f64 {
    // ω_k = 2 π^{(k+1)/2} / Γ((k+1)/2)
    let half = (k + 1) as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_half(k + 1)
}

/// `Γ(m/2)` for positive integers `m`.
fn gamma_half(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        (1..m / 2).map(|j| j as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < m as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Causal class of an estimated vector: zero when its norm is within three
/// error bars, null when the Lorentz square is within the propagated error.
pub fn classify_estimate(v: &[f64], err: &[f64]) -> CausalClass {
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ne = err.iter().map(|x| x * x).sum::<f64>().sqrt();
    let floor = 3.0 * ne + 1e-10;
    if nv <= floor {
        return CausalClass::Zero;
    }
    let q = minkowski_product(v, v);
    let future = v[0] > 0.0;
    if q.abs() <= 2.0 * nv * floor {
        if future {
            CausalClass::NullFuture
        } else {
            CausalClass::NullPast
        }
    } else if q > 0.0 {
        if future {
            CausalClass::TimelikeFuture
        } else {
            CausalClass::TimelikePast
        }
    } else {
        CausalClass::Spacelike
    }
}

fn series(rows: &[FluxRow], pick: impl Fn(&FluxRow) -> f64) -> Vec<f64> {
    rows.iter().map(pick).collect()
}

fn roundoff(rows: &[FluxRow], c: usize) -> f64 {
    ROUNDOFF_REL * rows.iter().map(|r| r.magnitude[c]).fold(0.0f64, f64::max)
}

fn extrapolate_all(
    cfg: &MassConfig,
    rows: &[FluxRow],
    s: f64,
    count: usize,
    offset: usize,
    pick: impl Fn(&FluxRow, usize) -> f64,
) -> Result<Vec<Estimate>> {
    (0..count)
        .map(|c| {
            let vals = series(rows, |r| pick(r, c));
            extrapolate(&cfg.radii, &vals, s, cfg.window, roundoff(rows, offset + c)).map(Estimate::from).map_err(|e| match e {
                Error::Convergence(msg) => Error::Convergence(format!("component {c}: {msg}")),
                other => other,
            })
        })
        .collect()
}

/// Energy and momentum of flat or hyperbolic data, extrapolated from the
/// configured radii. Ball data are converted to the polar chart first.
pub fn energy_momentum(data: &InitialDataSet, cfg: &MassConfig) -> Result<MassReport> {
    let data = flux_chart(data)?;
    let model = data.domain.model;
    let n = data.n();
    check_decay(model, n, data.decay)?;
    let potentials = static_potentials(model, n);
    let killing = killing_basis(model, n);
    let rows = flux_rows(&data, &potentials, &killing, cfg)?;
    let s = cfg.exponent_for(model, n, data.decay);
    let energy = extrapolate_all(cfg, &rows, s, potentials.len(), 0, |r, c| r.energy_bulk[c] + r.energy_corner[c])?;
    let momentum = extrapolate_all(cfg, &rows, s, killing.len(), potentials.len(), |r, c| r.momentum[c])?;
    let ev: Vec<f64> = energy.iter().map(|e| e.value).collect();
    let ee: Vec<f64> = energy.iter().map(|e| e.error_bar()).collect();
    let pv: Vec<f64> = momentum.iter().map(|e| e.value).collect();
    let pe: Vec<f64> = momentum.iter().map(|e| e.error_bar()).collect();
    let invariants = if model == Model::Flat {
        let mut v = ev.clone();
        v.extend(&pv);
        let mut err = ee.clone();
        err.extend(&pe);
        let pn = pv.iter().map(|x| x * x).sum::<f64>().sqrt();
        Invariants::Flat {
            energy: ev[0],
            momentum: pv.clone(),
            energy_minus_momentum: ev[0] - pn,
            lorentz_square: -minkowski_product(&v, &v),
            class: classify_estimate(&v, &err),
        }
    } else {
        Invariants::Hyperbolic {
            energy_norm: minkowski_product(&ev, &ev),
            momentum_norm: minkowski_product(&pv, &pv),
            energy_class: classify_estimate(&ev, &ee),
            momentum_class: classify_estimate(&pv, &pe),
            energy_vector: ev.clone(),
            momentum_vector: pv,
        }
    };
    let factor = (n - 1) as f64 * sphere_area(n - 1);
    let adm_normalized = AdmNormalized {
        label: "energy divided by (n-1)·ω_{n-1}; not part of the reported invariants".into(),
        factor,
        energy: ev.iter().map(|e| e / factor).collect(),
    };
    Ok(MassReport { model, n, exponent: s, window: cfg.window, rows, energy, momentum, invariants, adm_normalized })
}

/// Value of the mass functional for one potential and one Killing field.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionalValue {
    pub estimate: Estimate,
    pub rows: Vec<FluxRow>,
}

/// `𝔪(V, W)` for arbitrary `V`, `W` given in the chart of the data (polar or flat).
pub fn mass_functional(data: &InitialDataSet, v: &TensorField, w: &TensorField, cfg: &MassConfig) -> Result<FunctionalValue> {
    if data.domain.model == Model::HyperbolicBall {
        return Err(Error::Input("pass polar-chart data and fields to the mass functional".into()));
    }
    check_decay(data.domain.model, data.n(), data.decay)?;
    let rows = flux_rows(data, std::slice::from_ref(v), std::slice::from_ref(w), cfg)?;
    let s = cfg.exponent_for(data.domain.model, data.n(), data.decay);
    let vals = series(&rows, |r| r.energy_bulk[0] + r.energy_corner[0] + r.momentum[0]);
    let floor = roundoff(&rows, 0) + roundoff(&rows, 1);
    let estimate = extrapolate(&cfg.radii, &vals, s, cfg.window, floor)?.into();
    Ok(FunctionalValue { estimate, rows })
}

impl MassReport {
    /// Convergence table with running window extrapolants of the energy components.
    pub fn to_csv(&self) -> String {
        let ne = self.energy.len();
        let np = self.momentum.len();
        let suffix = |c: usize| if ne == 1 { String::new() } else { format!("_{c}") };
        let mut head = vec!["r".to_string()];
        head.extend((0..ne).map(|c| format!("flux_E{}", suffix(c))));
        head.extend((0..ne).map(|c| format!("flux_corner{}", suffix(c))));
        head.extend((0..np).map(|c| format!("flux_P_{}", c + usize::from(self.model == Model::Flat))));
        head.extend((0..ne).map(|c| format!("extrapolant{}", suffix(c))));
        let mut out = head.join(",");
        out.push('\n');
        let k = self.window.clamp(2, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = vec![format!("{:.17e}", row.r)];
            cells.extend(row.energy_bulk.iter().map(|x| format!("{x:.17e}")));
            cells.extend(row.energy_corner.iter().map(|x| format!("{x:.17e}")));
            cells.extend(row.momentum.iter().map(|x| format!("{x:.17e}")));
            for c in 0..ne {
                if i + 1 >= k {
                    cells.push(format!("{:.17e}", self.energy[c].extrapolants[i + 1 - k]));
                } else {
                    cells.push(String::new());
                }
            }
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MassInequalityReport {
    pub model: Model,
    /// `E − |P|` (flat only).
    pub energy_minus_momentum: Option<f64>,
    pub energy_class: CausalClass,
    pub momentum_class: Option<CausalClass>,
    pub dec_pass: bool,
    pub hypotheses_hold: bool,
    /// Whether the inequality holds for the computed values.
    pub inequality_holds: bool,
    pub conclusion: String,
}

/// Compare the computed invariants with the positive energy inequality, taking
/// the energy conditions into account.
pub fn mass_inequality_report(report: &MassReport, dec: &DecReport) -> MassInequalityReport {
    let tol = report.energy.iter().chain(&report.momentum).map(|e| e.error_bar()).fold(0.0f64, f64::max) * 3.0 + 1e-10;
    let (emp, energy_class, momentum_class, holds) = match &report.invariants {
        Invariants::Flat { energy_minus_momentum, class, .. } => {
            (Some(*energy_minus_momentum), *class, None, *energy_minus_momentum >= -tol)
        }
        Invariants::Hyperbolic { energy_class, momentum_class, .. } => (
            None,
            *energy_class,
            Some(*momentum_class),
            energy_class.is_future_causal() && momentum_class.is_future_causal(),
        ),
    };
    let conclusion = match (dec.pass, holds) {
        (true, true) => "energy conditions hold and the computed invariants satisfy the inequality".to_string(),
        (true, false) => "energy conditions hold but the computed invariants violate the inequality".to_string(),
        (false, h) => format!(
            "energy conditions fail, so the hypotheses of the positive energy theorem are violated and no inequality is expected (computed values {} it)",
            if h { "satisfy" } else { "violate" }
        ),
    };
    MassInequalityReport {
        model: report.model,
        energy_minus_momentum: emp,
        energy_class,
        momentum_class,
        dec_pass: dec.pass,
        hypotheses_hold: dec.pass,
        inequality_holds: holds,
        conclusion,
    }
}
