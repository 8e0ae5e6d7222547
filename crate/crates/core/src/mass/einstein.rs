use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::boundary::boundary_geometry;
use crate::geometry::curvature::einstein_tensor;
use crate::geometry::domain::Model;
use crate::geometry::InitialDataSet;
use crate::mass::extrapolate::extrapolate;
use crate::mass::flux::{build_hemisphere_rule, pairwise_sum, reference_normal, MassConfig};
use crate::mass::report::{energy_momentum, Estimate};

#[derive(Debug, Clone, Serialize)]
pub struct EinsteinRow {
    pub r: f64,
    /// `∫ G(r∂_r, μ)` over the half-sphere.
    pub bulk: f64,
    /// `∫ N(r∂_r, ϑ)` over the corner sphere.
    pub corner: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EinsteinCrosscheck {
    pub d_n: f64,
    pub rows: Vec<EinsteinRow>,
    pub einstein_energy: Estimate,
    pub flux_energy: Estimate,
    pub relative_deviation: f64,
    pub note: String,
}

/// `2 / (2 − n)`.
pub fn einstein_prefactor(n: usize) -> f64 {
    2.0 / (2.0 - n as f64)
}

/// Energy from the Einstein tensor of `g` and the Newton tensor of the boundary,
/// compared with the charge-density flux energy.
pub fn einstein_energy_crosscheck(data: &InitialDataSet, cfg: &MassConfig) -> Result<EinsteinCrosscheck> {
    if data.domain.model != Model::Flat {
        return Err(Error::Input("the Einstein tensor cross-check needs flat-model data".into()));
    }
    let n = data.n();
    if n < 3 {
        return Err(Error::Input("the Einstein tensor cross-check needs n >= 3".into()));
    }
    cfg.validate(&data.domain)?;
    let g = data.metric();
    let mut rows = Vec::with_capacity(cfg.radii.len());
    for &r in &cfg.radii {
        let rule = build_hemisphere_rule(&data.domain, r, cfg.polar, cfg.azimuth)?;
        let bulk: Result<Vec<f64>> = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(p, w)| {
                let gt = einstein_tensor(&g, p, cfg.step)?;
                let mu = reference_normal(Model::Flat, p);
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += gt[(i, j)] * p[i] * mu[j];
                    }
                }
                Ok(w * s)
            })
            .collect();
        let corner: Result<Vec<f64>> = rule
            .corner_nodes
            .par_iter()
            .zip(&rule.corner_weights)
            .map(|(p, w)| {
                let bg = boundary_geometry(&g, p, cfg.step)?;
                let nt = bg.newton_tensor();
                let theta = reference_normal(Model::Flat, p);
                let mut s = 0.0;
                for a in 0..n - 1 {
                    for b in 0..n - 1 {
                        s += nt[(a, b)] * p[a] * theta[b];
                    }
                }
                Ok(w * s)
            })
            .collect();
        rows.push(EinsteinRow { r, bulk: pairwise_sum(&bulk?), corner: pairwise_sum(&corner?) });
    }
    let d_n = einstein_prefactor(n);
    let vals: Vec<f64> = rows.iter().map(|row| d_n * (row.bulk - row.corner)).collect();
    let s = cfg.exponent_for(Model::Flat, n, data.decay);
    let einstein_energy: Estimate = extrapolate(&cfg.radii, &vals, s, cfg.window, 0.0)?.into();
    let flux_energy = energy_momentum(data, cfg)?.energy.remove(0);
    let scale = einstein_energy.value.abs().max(flux_energy.value.abs());
    let relative_deviation = if scale < 1e-12 { 0.0 } else { (einstein_energy.value - flux_energy.value).abs() / scale };
    Ok(EinsteinCrosscheck {
        d_n,
        rows,
        einstein_energy,
        flux_energy,
        relative_deviation,
        note: "uses second derivatives of the metric, so finite-radius values converge more slowly than the flux energy".into(),
    })
}
