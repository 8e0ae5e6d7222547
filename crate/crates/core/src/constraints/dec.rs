use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constraints::interior::{boundary_constraints, interior_constraints};
use crate::error::{Error, Result};
use crate::geometry::domain::{norm, ChartDomain, Model};
use crate::geometry::InitialDataSet;

/// Default pass tolerance for the energy conditions.
pub const DEC_TOL: f64 = 1e-9;

/// Interior and boundary points at which pointwise conditions are checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub interior: Vec<Vec<f64>>,
    pub boundary: Vec<Vec<f64>>,
}

impl SampleSet {
    /// Tensor grid over `[-extent, extent]^{n-1} × (0, extent]` restricted to the
    /// shell `r0 <= |p| <= extent`, plus the matching grid on `{x_n = 0}`.
    /// Normal coordinates are cell centred so no interior point lies on the boundary.
    pub fn shell(domain: &ChartDomain, extent: f64, per_axis: usize) -> Result<Self> {
        let n = domain.n;
        if per_axis < 2 {
            return Err(Error::Input("need at least two samples per axis".into()));
        }
        if !(extent > domain.r0) {
            return Err(Error::Input(format!("extent {extent} must exceed the exterior radius {}", domain.r0)));
        }
        if domain.model == Model::HyperbolicBall && extent >= 1.0 {
            return Err(Error::Input("ball sample extent must stay below 1".into()));
        }
        let tang: Vec<f64> = (0..per_axis).map(|i| -extent + 2.0 * extent * i as f64 / (per_axis - 1) as f64).collect();
        let normal: Vec<f64> = (0..per_axis).map(|i| extent * (i as f64 + 0.5) / per_axis as f64).collect();
        let keep = |p: &[f64]| {
            let r = norm(p);
            r >= domain.r0 && r <= extent
        };
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        let total = per_axis.pow((n - 1) as u32);
        for flat in 0..total {
            let mut p = Vec::with_capacity(n);
            let mut rem = flat;
            for _ in 0..n - 1 {
                p.push(tang[rem % per_axis]);
                rem /= per_axis;
            }
            let mut b = p.clone();
            b.push(0.0);
            if keep(&b) {
                boundary.push(b);
            }
            for &xn in &normal {
                let mut q = p.clone();
                q.push(xn);
                if keep(&q) {
                    interior.push(q);
                }
            }
        }
        Ok(Self { interior, boundary })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginSummary {
    pub worst_margin: f64,
    pub worst_point: Vec<f64>,
    pub samples: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecReport {
    /// `ρ − |J|_g` over interior points.
    pub interior: MarginSummary,
    /// `H − |π(ϱ, ·)^⊤|` over boundary points.
    pub tangential: MarginSummary,
    /// `H − |π(ϱ, ϱ)|` over boundary points.
    pub normal: MarginSummary,
    /// Which boundary condition the positivity statement needs for this model.
    pub required_boundary: String,
    pub tol: f64,
    pub pass: bool,
}

fn summarize(margins: Vec<(f64, Vec<f64>)>, tol: f64) -> MarginSummary {
    let samples = margins.len();
    let worst = margins.into_iter().min_by(|a, b| match a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal) {
        Ordering::Equal => a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal),
        o => o,
    });
    match worst {
        Some((m, p)) => MarginSummary { worst_margin: m, worst_point: p, samples, pass: m >= -tol },
        None => MarginSummary { worst_margin: f64::INFINITY, worst_point: vec![], samples: 0, pass: true },
    }
}

/// Evaluate the interior and boundary dominant energy margins on a sample set.
/// The worst point is the smallest margin, ties broken lexicographically.
pub fn check_dec(data: &InitialDataSet, samples: &SampleSet, tol: f64, step: Option<f64>) -> Result<DecReport> {
    let metric = data.metric();
    let interior: Result<Vec<(f64, Vec<f64>)>> = samples
        .interior
        .par_iter()
        .map(|p| {
            let c = interior_constraints(&metric, &data.h, data.lambda, p, step)?;
            Ok((c.rho - c.j_norm, p.clone()))
        })
        .collect();
    let bdry: Result<Vec<(f64, f64, Vec<f64>)>> = samples
        .boundary
        .par_iter()
        .map(|p| {
            let c = boundary_constraints(&metric, &data.h, p, step)?;
            Ok((c.mean_curvature - c.tangential_norm, c.mean_curvature - c.pi_normal.abs(), p.clone()))
        })
        .collect();
    let bdry = bdry?;
    let interior = summarize(interior?, tol);
    let tangential = summarize(bdry.iter().map(|(t, _, p)| (*t, p.clone())).collect(), tol);
    let normal = summarize(bdry.iter().map(|(_, nm, p)| (*nm, p.clone())).collect(), tol);
    let (required_boundary, bpass) = if data.domain.model.is_hyperbolic() {
        ("normal".to_string(), normal.pass)
    } else {
        ("tangential".to_string(), tangential.pass)
    };
    let pass = interior.pass && bpass;
    Ok(DecReport { interior, tangential, normal, required_boundary, tol, pass })
}
