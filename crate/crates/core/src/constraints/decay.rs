//! Heuristic audit of the claimed fall-off of `(f, h)` and of the integrability
//! of the constraints. Only the sampled exterior can be inspected, so the
//! verdict is a tail heuristic: weighted sup norms must not grow and the
//! annulus integrals of the constraints must shrink.

use rayon::prelude::*;
use serde::Serialize;

use crate::constraints::interior::{boundary_constraints, interior_constraints};
use crate::error::{Error, Result};
use crate::geometry::domain::Model;
use crate::geometry::fd::gradient;
use crate::geometry::field::{TensorField, Valence};
use crate::geometry::tensor::{covariant_from_partials, norm_cov, spd_inverse, MetricJet};
use crate::geometry::InitialDataSet;
use crate::mass::quadrature::{gauss_legendre_on, HemisphereRule};
use crate::models::ball_data_to_polar;

#[derive(Debug, Clone, Serialize)]
pub struct DecayRow {
    pub r: f64,
    pub weighted_sup: f64,
    /// Constraint integral over the annulus between this radius and the next.
    pub bulk_integral: Option<f64>,
    pub boundary_integral: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub decay: f64,
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `log weighted_sup` against `log r`.
    pub sup_slope: f64,
    pub sup_pass: bool,
    pub integrals_pass: bool,
    pub pass: bool,
    pub heuristic: bool,
}

const SLOPE_TOL: f64 = 0.1;
const ABS_FLOOR: f64 = 1e-8;
/// Constraint values inside this band (relative to `1 + 2|Λ|`) are differencing noise.
const NOISE_BAND: f64 = 1e-9;

fn denoise(x: f64, scale: f64) -> f64 {
    (x.abs() - NOISE_BAND * scale).max(0.0)
}

fn frob(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn covariant_field(t: &TensorField, g: &TensorField, rank: usize, step: Option<f64>) -> TensorField {
    let n = t.dim();
    let region = t.region();
    let (t, g) = (t.clone(), g.clone());
    TensorField::from_fn(n, Valence { covariant: rank + 1, contravariant: 0 }, move |q| {
        let jet = MetricJet::at(&g, q, step, false)?;
        let gamma = jet.christoffel();
        Ok(covariant_from_partials(&t.eval(q)?, &gradient(&t, q, step)?, n, rank, &gamma))
    })
    .with_region(region)
}

fn weighted_quantity(data: &InitialDataSet, p: &[f64], step: Option<f64>) -> Result<f64> {
    let n = data.n();
    let r = crate::geometry::domain::norm(p);
    let w = r.powf(data.decay);
    let f = &data.perturbation;
    let h = &data.h;
    if data.domain.model == Model::Flat {
        let df = gradient(f, p, step)?;
        let ddf = crate::geometry::fd::hessian(f, p, step)?;
        let dh = gradient(h, p, step)?;
        Ok(w * (frob(&f.eval(p)?) + r * frob(&df) + r * r * frob(&ddf)) + w * r * (frob(&h.eval(p)?) + r * frob(&dh)))
    } else {
        let b = &data.reference;
        let ginv = spd_inverse(&b.eval_matrix(p)?, p)?;
        let nf = covariant_field(f, b, 2, step);
        let nnf = covariant_field(&nf, b, 3, step);
        let nh = covariant_field(h, b, 2, step);
        let s = norm_cov(&f.eval(p)?, n, 2, &ginv)
            + norm_cov(&nf.eval(p)?, n, 3, &ginv)
            + norm_cov(&nnf.eval(p)?, n, 4, &ginv)
            + norm_cov(&h.eval(p)?, n, 2, &ginv)
            + norm_cov(&nh.eval(p)?, n, 3, &ginv);
        Ok(w * s)
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn decay_audit(data: &InitialDataSet, radii: &[f64], step: Option<f64>) -> Result<DecayReport> {
    if data.domain.model == Model::HyperbolicBall {
        return decay_audit(&ball_data_to_polar(data)?, radii, step);
    }
    if radii.len() < 2 {
        return Err(Error::Input("decay audit needs at least two radii".into()));
    }
    if radii.iter().any(|&r| r < data.domain.r0) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("radii must be increasing and outside the exterior radius".into()));
    }
    let n = data.n();
    let rule = HemisphereRule::new(n, 6, 12)?;
    let hyperbolic = data.domain.model.is_hyperbolic();
    let metric = data.metric();
    let scale = 1.0 + 2.0 * data.lambda.abs();

    let mut rows = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let pts: Vec<Vec<f64>> = rule
            .nodes
            .iter()
            .chain(&rule.corner_nodes)
            .map(|u| u.iter().map(|x| r * x).collect())
            .collect();
        let vals: Result<Vec<f64>> = pts.par_iter().map(|p| weighted_quantity(data, p, step)).collect();
        let weighted_sup = vals?.into_iter().fold(0.0f64, f64::max);

        let (bulk_integral, boundary_integral) = if i + 1 < radii.len() {
            let (rs, rw) = gauss_legendre_on(3, r, radii[i + 1]);
            let mut bulk = 0.0;
            let mut bdry = 0.0;
            for (&s, &sw) in rs.iter().zip(&rw) {
                let measure = if hyperbolic { 1.0 / (1.0 + s * s).sqrt() } else { 1.0 };
                let weight = if hyperbolic { s } else { 1.0 };
                let vb: Result<Vec<f64>> = rule
                    .nodes
                    .par_iter()
                    .map(|u| {
                        let p: Vec<f64> = u.iter().map(|x| s * x).collect();
                        let c = interior_constraints(&metric, &data.h, data.lambda, &p, step)?;
                        let (rho, j) = (denoise(c.rho, scale), denoise(c.j_norm, scale));
                        Ok(2.0 * (rho * rho + j * j).sqrt())
                    })
                    .collect();
                let sb: f64 = vb?.iter().zip(&rule.weights).map(|(a, w)| a * w).sum();
                bulk += sw * weight * measure * s.powi(n as i32 - 1) * sb;
                let vc: Result<Vec<f64>> = rule
                    .corner_nodes
                    .par_iter()
                    .map(|u| {
                        let p: Vec<f64> = u.iter().map(|x| s * x).collect();
                        let c = boundary_constraints(&metric, &data.h, &p, step)?;
                        let part = if hyperbolic { c.pi_normal.abs() } else { c.tangential_norm };
                        let (hm, part) = (denoise(c.mean_curvature, scale), denoise(part, scale));
                        Ok(2.0 * (hm * hm + part * part).sqrt())
                    })
                    .collect();
                let sc: f64 = vc?.iter().zip(&rule.corner_weights).map(|(a, w)| a * w).sum();
                bdry += sw * weight * measure * s.powi(n as i32 - 2) * sc;
            }
            (Some(bulk), Some(bdry))
        } else {
            (None, None)
        };
        rows.push(DecayRow { r, weighted_sup, bulk_integral, boundary_integral });
    }

    let xs: Vec<f64> = rows.iter().map(|r| r.r.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.weighted_sup.max(1e-300).ln()).collect();
    let all_tiny = rows.iter().all(|r| r.weighted_sup < ABS_FLOOR);
    let sup_slope = slope(&xs, &ys);
    let sup_pass = all_tiny || sup_slope <= SLOPE_TOL;
    let tail_ok = |vals: Vec<f64>| {
        if vals.iter().all(|v| *v < ABS_FLOOR) {
            return true;
        }
        vals.len() < 2 || vals[vals.len() - 1] <= vals[vals.len() - 2]
    };
    let integrals_pass = tail_ok(rows.iter().filter_map(|r| r.bulk_integral).collect())
        && tail_ok(rows.iter().filter_map(|r| r.boundary_integral).collect());
    Ok(DecayReport { decay: data.decay, rows, sup_slope, sup_pass, integrals_pass, pass: sup_pass && integrals_pass, heuristic: true })
}
