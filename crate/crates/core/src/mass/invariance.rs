use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::domain::Model;
use crate::geometry::InitialDataSet;
use crate::mass::flux::{flux_chart, MassConfig};
use crate::mass::report::{energy_momentum, MassReport};
use crate::models::isometry::{pullback_data, ModelIsometry};
use crate::models::lorentz::minkowski_product;

pub const FLAT_ENERGY_TOL: f64 = 1e-8;
pub const FLAT_MOMENTUM_TOL: f64 = 1e-6;
pub const LORENTZ_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub original: MassReport,
    pub transformed: MassReport,
    pub predicted_energy: Vec<f64>,
    pub predicted_momentum: Vec<f64>,
    /// Relative deviation of the transformed energy components from the prediction.
    pub energy_deviation: f64,
    pub momentum_deviation: f64,
    /// Relative change of `⟨⟨ℰ, ℰ⟩⟩` (hyperbolic only).
    pub norm_deviation: Option<f64>,
    pub pass: bool,
}

fn values(r: &MassReport) -> (Vec<f64>, Vec<f64>) {
    (r.energy.iter().map(|e| e.value).collect(), r.momentum.iter().map(|e| e.value).collect())
}

fn rel(a: &[f64], b: &[f64], scale: f64) -> f64 {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

/// Matrix acting on the invariant vectors when the data are pulled back by `iso`:
/// `R^T` on the tangential block for flat rotations, the leading `n × n` block of
/// `Λ^{-1}` for Lorentz maps.
pub fn transformation_matrix(iso: &ModelIsometry, n: usize) -> Result<DMatrix<f64>> {
    match iso {
        ModelIsometry::Euclidean { .. } => {
            let r = iso.rotation().ok_or_else(|| Error::InvalidIsometry("missing rotation".into()))?;
            Ok(r.view((0, 0), (n - 1, n - 1)).transpose())
        }
        ModelIsometry::Lorentz { .. } => {
            let l = iso.lorentz().ok_or_else(|| Error::InvalidIsometry("missing matrix".into()))?;
            let mut eta = DMatrix::identity(n + 1, n + 1);
            eta[(0, 0)] = -1.0;
            let inv = &eta * l.transpose() * &eta;
            Ok(inv.view((0, 0), (n, n)).into_owned())
        }
    }
}

/// Compute the invariants before and after pulling the data back by `iso` and
/// compare with the transformation law.
pub fn invariance_test(data: &InitialDataSet, iso: &ModelIsometry, cfg: &MassConfig) -> Result<InvarianceReport> {
    let data = flux_chart(data)?;
    let n = data.n();
    iso.validate(data.domain.model, n)?;
    let original = energy_momentum(&data, cfg)?;
    let transformed = energy_momentum(&pullback_data(&data, iso)?, cfg)?;
    let m = transformation_matrix(iso, n)?;
    let (e0, p0) = values(&original);
    let (e1, p1) = values(&transformed);
    let scale = e0.iter().chain(&p0).map(|x| x * x).sum::<f64>().sqrt();
    let apply = |v: &[f64]| (&m * DVector::from_column_slice(v)).iter().copied().collect::<Vec<f64>>();
    let out = if data.domain.model == Model::Flat {
        let predicted_momentum = apply(&p0);
        let energy_deviation = rel(&e1, &e0, scale);
        let momentum_deviation = rel(&p1, &predicted_momentum, scale);
        let pass = energy_deviation <= FLAT_ENERGY_TOL && momentum_deviation <= FLAT_MOMENTUM_TOL;
        InvarianceReport {
            original,
            transformed,
            predicted_energy: e0,
            predicted_momentum,
            energy_deviation,
            momentum_deviation,
            norm_deviation: None,
            pass,
        }
    } else {
        let predicted_energy = apply(&e0);
        let predicted_momentum = apply(&p0);
        let q0 = minkowski_product(&e0, &e0);
        let q1 = minkowski_product(&e1, &e1);
        let qs = e0.iter().map(|x| x * x).sum::<f64>();
        let norm_deviation = if qs > 0.0 { (q1 - q0).abs() / qs } else { (q1 - q0).abs() };
        let energy_deviation = rel(&e1, &predicted_energy, scale);
        let momentum_deviation = rel(&p1, &predicted_momentum, scale);
        let pass = norm_deviation <= LORENTZ_NORM_TOL;
        InvarianceReport {
            original,
            transformed,
            predicted_energy,
            predicted_momentum,
            energy_deviation,
            momentum_deviation,
            norm_deviation: Some(norm_deviation),
            pass,
        }
    };
    Ok(out)
}
