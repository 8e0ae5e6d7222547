use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::field::TensorField;
use crate::geometry::tensor::{gram_schmidt, spd_inverse, MetricJet};

/// Extrinsic geometry of the boundary `{x_n = 0}` at one point.
///
/// `normal` is the inward unit normal (positive last component) and
/// `second_fundamental[(A, B)] = g(∇_{∂_A} ∂_B, normal)`, so that the
/// boundary of a round ball, seen from inside, has positive mean curvature.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryGeometry {
    pub n: usize,
    pub normal: Vec<f64>,
    /// Induced metric on the boundary coordinates `x_1..x_{n-1}`.
    pub induced: DMatrix<f64>,
    pub second_fundamental: DMatrix<f64>,
    pub mean_curvature: f64,
    /// Adapted orthonormal frame as columns; the last column is `normal`.
    pub frame: DMatrix<f64>,
}

impl BoundaryGeometry {
    /// Newton tensor `H γ − b` on the boundary coordinates.
    pub fn newton_tensor(&self) -> DMatrix<f64> {
        &self.induced * self.mean_curvature - &self.second_fundamental
    }
}

pub(crate) fn require_boundary_point(p: &[f64]) -> Result<()> {
    let last = *p.last().unwrap_or(&1.0);
    if last.abs() > 1e-12 {
        return Err(Error::Domain { point: p.to_vec(), reason: "not a boundary point".into() });
    }
    Ok(())
}

/// Unit normal `g^{in} / sqrt(g^{nn})` and the adapted frame from a metric value.
pub fn adapted_frame(g: &DMatrix<f64>, p: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = g.nrows();
    let ginv = spd_inverse(g, p)?;
    let gnn = ginv[(n - 1, n - 1)];
    let normal = DVector::from_fn(n, |i, _| ginv[(i, n - 1)] / gnn.sqrt());
    let mut start = DMatrix::identity(n, n);
    start.set_column(n - 1, &normal);
    let tang = gram_schmidt(g, &start.columns(0, n - 1).into_owned());
    let mut frame = DMatrix::zeros(n, n);
    for a in 0..n - 1 {
        frame.set_column(a, &tang.column(a));
    }
    frame.set_column(n - 1, &normal);
    Ok((normal, frame))
}

pub fn boundary_geometry(metric: &TensorField, p: &[f64], step: Option<f64>) -> Result<BoundaryGeometry> {
    require_boundary_point(p)?;
    let n = metric.dim();
    let jet = MetricJet::at(metric, p, step, false)?;
    let gamma = jet.christoffel();
    let gnn = jet.ginv[(n - 1, n - 1)];
    let (normal, frame) = adapted_frame(&jet.g, p)?;
    let m = n - 1;
    let induced = jet.g.view((0, 0), (m, m)).into_owned();
    let second_fundamental = DMatrix::from_fn(m, m, |a, b| gamma[n - 1][(a, b)] / gnn.sqrt());
    let iinv = spd_inverse(&induced, p)?;
    let mean_curvature = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).map(|(a, b)| iinv[(a, b)] * second_fundamental[(a, b)]).sum();
    Ok(BoundaryGeometry { n, normal: normal.iter().copied().collect(), induced, second_fundamental, mean_curvature, frame })
}
