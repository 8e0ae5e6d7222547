//! Per-radius flux integrals of the charge density over coordinate half-spheres,
//! with the corner correction on their boundary spheres.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constraints::interior::div_minus_dtrace;
use crate::error::{Error, Result};
use crate::geometry::domain::{norm, ChartDomain, Model};
use crate::geometry::fd::gradient;
use crate::geometry::field::TensorField;
use crate::geometry::tensor::spd_inverse;
use crate::geometry::InitialDataSet;
use crate::mass::quadrature::HemisphereRule;
use crate::models::ball_data_to_polar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassConfig {
    pub radii: Vec<f64>,
    pub polar: usize,
    pub azimuth: usize,
    /// Number of consecutive radii per extrapolation window.
    pub window: usize,
    /// Overrides the default extrapolation exponent.
    pub exponent: Option<f64>,
    pub step: Option<f64>,
}

impl Default for MassConfig {
    fn default() -> Self {
        Self { radii: vec![16.0, 32.0, 64.0, 128.0], polar: 48, azimuth: 96, window: 3, exponent: None, step: None }
    }
}

impl MassConfig {
    pub fn with_radii(mut self, radii: Vec<f64>) -> Self {
        self.radii = radii;
        self
    }

    pub fn with_orders(mut self, polar: usize, azimuth: usize) -> Self {
        self.polar = polar;
        self.azimuth = azimuth;
        self
    }

    /// Default exponent of the remainder `r^{-s}`.
    pub fn exponent_for(&self, model: Model, n: usize, decay: f64) -> f64 {
        self.exponent.unwrap_or(match model {
            Model::Flat => 2.0 * decay - (n as f64 - 2.0),
            _ => 2.0 * decay - n as f64,
        })
    }

    pub(crate) fn validate(&self, domain: &ChartDomain) -> Result<()> {
        if self.radii.len() < 2 {
            return Err(Error::Input("need at least two radii".into()));
        }
        if self.radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input("radii must be strictly increasing".into()));
        }
        if let Some(&r) = self.radii.iter().find(|&&r| r <= domain.r0) {
            return Err(Error::Domain { point: vec![r], reason: format!("radius inside the exterior radius {}", domain.r0) });
        }
        Ok(())
    }
}

/// Decay exponent the mass needs: `(n−2)/2` for flat data, `n/2` for hyperbolic data.
pub fn decay_threshold(model: Model, n: usize) -> f64 {
    match model {
        Model::Flat => (n as f64 - 2.0) / 2.0,
        _ => n as f64 / 2.0,
    }
}

/// Reject data whose claimed decay does not exceed [`decay_threshold`].
pub fn check_decay(model: Model, n: usize, decay: f64) -> Result<()> {
    let t = decay_threshold(model, n);
    if decay > t {
        Ok(())
    } else {
        Err(Error::Precondition { what: format!("decay exponent {decay} must exceed {t}"), residual: t - decay })
    }
}

/// Nodes and area weights on the coordinate half-sphere of radius `r` and its corner sphere.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusRule {
    pub r: f64,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub corner_nodes: Vec<Vec<f64>>,
    pub corner_weights: Vec<f64>,
}

/// Quadrature on `S^{n-1}_{r,+}` and `S^{n-2}_r` with the area measure of the reference metric.
pub fn build_hemisphere_rule(domain: &ChartDomain, r: f64, polar: usize, azimuth: usize) -> Result<RadiusRule> {
    if r <= domain.r0 {
        return Err(Error::Domain { point: vec![r], reason: format!("radius inside the exterior radius {}", domain.r0) });
    }
    if domain.model == Model::HyperbolicBall && r >= 1.0 {
        return Err(Error::Domain { point: vec![r], reason: "ball radius must be below 1".into() });
    }
    let n = domain.n;
    let unit = HemisphereRule::new(n, polar, azimuth)?;
    let scale = |nodes: &[Vec<f64>]| nodes.iter().map(|u| u.iter().map(|x| r * x).collect()).collect();
    let fb = HemisphereRule::measure_factor(domain.model, r, n - 1);
    let fc = HemisphereRule::measure_factor(domain.model, r, n - 2);
    Ok(RadiusRule {
        r,
        nodes: scale(&unit.nodes),
        weights: unit.weights.iter().map(|w| w * fb).collect(),
        corner_nodes: scale(&unit.corner_nodes),
        corner_weights: unit.corner_weights.iter().map(|w| w * fc).collect(),
    })
}

/// Summation by recursive halving, independent of thread scheduling.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        m => pairwise_sum(&v[..m / 2]) + pairwise_sum(&v[m / 2..]),
    }
}

/// Flux values at one radius, one entry per potential / Killing field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxRow {
    pub r: f64,
    /// `∫ Ũ(V, f)(μ)` over the half-sphere.
    pub energy_bulk: Vec<f64>,
    /// `∫ V f(ϱ, ϑ)` over the corner sphere.
    pub energy_corner: Vec<f64>,
    /// `2 ∫ π(W, μ)` over the half-sphere.
    pub momentum: Vec<f64>,
    /// Integrals of the absolute integrands (bulk plus corner), energy then momentum
    /// components; they set the roundoff scale of the fluxes.
    pub magnitude: Vec<f64>,
}

impl FluxRow {
    pub fn energy(&self) -> Vec<f64> {
        self.energy_bulk.iter().zip(&self.energy_corner).map(|(a, b)| a + b).collect()
    }
}

/// Outward unit normal of the coordinate sphere through `p`, with respect to the
/// reference metric: `u` for flat, `sqrt(1 + |y|²) u` in the polar chart.
pub fn reference_normal(model: Model, p: &[f64]) -> Vec<f64> {
    let r = norm(p);
    let s = match model {
        Model::Flat => 1.0,
        _ => (1.0 + r * r).sqrt(),
    };
    p.iter().map(|x| s * x / r).collect()
}

struct Kernel<'a> {
    data: &'a InitialDataSet,
    metric: TensorField,
    potentials: &'a [TensorField],
    killing: &'a [TensorField],
    step: Option<f64>,
}

impl Kernel<'_> {
    fn bulk(&self, p: &[f64]) -> Result<Vec<f64>> {
        let model = self.data.domain.model;
        let g0 = &self.data.reference;
        let f = &self.data.perturbation;
        let mu = DVector::from_vec(reference_normal(model, p));
        let b = g0.eval_matrix(p)?;
        let binv = spd_inverse(&b, p)?;
        let alpha = DVector::from_vec(div_minus_dtrace(g0, f, p, self.step)?);
        let fm = f.eval_matrix(p)?;
        let trf = (&binv * &fm).trace();
        let mut out = Vec::with_capacity(self.potentials.len() + self.killing.len());
        for v in self.potentials {
            let vv = v.eval_scalar(p)?;
            let dv = DVector::from_vec(gradient(v, p, self.step)?);
            let grad_v = &binv * &dv;
            let u = &alpha * vv - &fm * &grad_v + &dv * trf;
            out.push(u.dot(&mu));
        }
        if !self.killing.is_empty() {
            let gm = self.metric.eval_matrix(p)?;
            let ginv = spd_inverse(&gm, p)?;
            let hm = self.data.h.eval_matrix(p)?;
            let pi = &hm - &gm * (&ginv * &hm).trace();
            for w in self.killing {
                let wv = DVector::from_vec(w.eval(p)?);
                out.push(2.0 * (&pi * &wv).dot(&mu));
            }
        }
        Ok(out)
    }

    fn corner(&self, p: &[f64]) -> Result<Vec<f64>> {
        let model = self.data.domain.model;
        let n = p.len();
        let theta = DVector::from_vec(reference_normal(model, p));
        let fm = self.data.perturbation.eval_matrix(p)?;
        // ϱ = ∂_n on the boundary for both flat and polar reference metrics
        let f_rho_theta = (0..n).map(|i| fm[(n - 1, i)] * theta[i]).sum::<f64>();
        self.potentials.iter().map(|v| Ok(v.eval_scalar(p)? * f_rho_theta)).collect()
    }
}

fn weighted_sums(values: &[Vec<f64>], weights: &[f64], comps: usize, abs: bool) -> Vec<f64> {
    (0..comps)
        .map(|c| {
            let terms: Vec<f64> = values.iter().zip(weights).map(|(v, w)| if abs { (v[c] * w).abs() } else { v[c] * w }).collect();
            pairwise_sum(&terms)
        })
        .collect()
}

/// Flux rows for the given potentials and Killing fields. Data must be in a flat
/// or polar chart.
pub fn flux_rows(data: &InitialDataSet, potentials: &[TensorField], killing: &[TensorField], cfg: &MassConfig) -> Result<Vec<FluxRow>> {
    if data.domain.model == Model::HyperbolicBall {
        return Err(Error::Input("convert ball data to the polar chart first".into()));
    }
    cfg.validate(&data.domain)?;
    let kernel = Kernel { data, metric: data.metric(), potentials, killing, step: cfg.step };
    let (np, nk) = (potentials.len(), killing.len());
    cfg.radii
        .iter()
        .map(|&r| {
            let rule = build_hemisphere_rule(&data.domain, r, cfg.polar, cfg.azimuth)?;
            let bulk: Result<Vec<Vec<f64>>> = rule.nodes.par_iter().map(|p| kernel.bulk(p)).collect();
            let corner: Result<Vec<Vec<f64>>> = rule.corner_nodes.par_iter().map(|p| kernel.corner(p)).collect();
            let (bulk, corner) = (bulk?, corner?);
            let sums = weighted_sums(&bulk, &rule.weights, np + nk, false);
            let energy_corner = weighted_sums(&corner, &rule.corner_weights, np, false);
            let mut magnitude = weighted_sums(&bulk, &rule.weights, np + nk, true);
            for (m, c) in magnitude.iter_mut().zip(weighted_sums(&corner, &rule.corner_weights, np, true)) {
                *m += c;
            }
            Ok(FluxRow { r, energy_bulk: sums[..np].to_vec(), energy_corner, momentum: sums[np..].to_vec(), magnitude })
        })
        .collect()
}

/// Data in a chart the flux code accepts.
pub(crate) fn flux_chart(data: &InitialDataSet) -> Result<InitialDataSet> {
    if data.domain.model == Model::HyperbolicBall {
        ball_data_to_polar(data)
    } else {
        Ok(data.clone())
    }
}

/// Corner integrand `f(ϱ, ϑ)` at the corner nodes of radius `r`.
pub fn corner_integrand(data: &InitialDataSet, r: f64, polar: usize, azimuth: usize) -> Result<Vec<f64>> {
    let data = flux_chart(data)?;
    let rule = build_hemisphere_rule(&data.domain, r, polar, azimuth)?;
    let one = TensorField::constant(data.n(), crate::geometry::Valence::SCALAR, vec![1.0]);
    let kernel = Kernel { data: &data, metric: data.metric(), potentials: std::slice::from_ref(&one), killing: &[], step: None };
    rule.corner_nodes.iter().map(|p| Ok(kernel.corner(p)?[0])).collect()
}
