use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::boundary::{boundary_geometry, BoundaryGeometry};
use crate::geometry::curvature::curvature_from_jet;
use crate::geometry::fd::gradient;
use crate::geometry::field::{row_major, TensorField, Valence};
use crate::geometry::tensor::{covariant_from_partials, mat_from, norm_cov, trace2, MetricJet};
use crate::geometry::InitialDataSet;

/// `π = h − (tr_g h) g`.
pub fn conjugate_momentum(metric: &TensorField, h: &TensorField) -> TensorField {
    let n = metric.dim();
    let (g, h) = (metric.clone(), h.clone());
    TensorField::from_fn(n, Valence::SYM2, move |p| {
        let gm = g.eval_matrix(p)?;
        let hm = h.eval_matrix(p)?;
        let ginv = crate::geometry::tensor::spd_inverse(&gm, p)?;
        let tr = (&ginv * &hm).trace();
        Ok(row_major(&(hm - gm * tr)))
    })
    .with_region(metric.region())
}

/// `(div_g T)_j = g^{ik} ∇_i T_kj` from a value and partials of a (0,2) tensor.
pub(crate) fn div_from_partials(t: &[f64], dt: &[f64], jet: &MetricJet, gamma: &[DMatrix<f64>]) -> Vec<f64> {
    let n = jet.n;
    let cov = covariant_from_partials(t, dt, n, 2, gamma);
    (0..n)
        .map(|j| {
            let mut s = 0.0;
            for i in 0..n {
                for k in 0..n {
                    s += jet.ginv[(i, k)] * cov[i * n * n + k * n + j];
                }
            }
            s
        })
        .collect()
}

/// `∂_j (g^{ik} T_ik)`.
pub(crate) fn dtrace_from_partials(t: &[f64], dt: &[f64], jet: &MetricJet) -> Vec<f64> {
    let n = jet.n;
    (0..n)
        .map(|j| {
            let dginv = -(&jet.ginv * &jet.dg[j] * &jet.ginv);
            trace2(t, n, &dginv) + trace2(&dt[j * n * n..(j + 1) * n * n], n, &jet.ginv)
        })
        .collect()
}

/// `div_g T − d tr_g T` at a point.
pub fn div_minus_dtrace(metric: &TensorField, t: &TensorField, p: &[f64], step: Option<f64>) -> Result<Vec<f64>> {
    let jet = MetricJet::at(metric, p, step, false)?;
    let gamma = jet.christoffel();
    let tv = t.eval(p)?;
    let dt = gradient(t, p, step)?;
    let div = div_from_partials(&tv, &dt, &jet, &gamma);
    let dtr = dtrace_from_partials(&tv, &dt, &jet);
    Ok(div.iter().zip(&dtr).map(|(a, b)| a - b).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct InteriorConstraints {
    pub rho: f64,
    pub j: Vec<f64>,
    pub j_norm: f64,
}

/// `ρ = ½(R − 2Λ − |h|² + (tr h)²)` and `J = div h − d tr h`.
pub fn interior_constraints(metric: &TensorField, h: &TensorField, lambda: f64, p: &[f64], step: Option<f64>) -> Result<InteriorConstraints> {
    let n = metric.dim();
    let jet = MetricJet::at(metric, p, step, true)?;
    let curv = curvature_from_jet(&jet)?;
    let gamma = jet.christoffel();
    let hv = h.eval(p)?;
    let dh = gradient(h, p, step)?;
    let tr = trace2(&hv, n, &jet.ginv);
    let h2 = norm_cov(&hv, n, 2, &jet.ginv).powi(2);
    let rho = 0.5 * (curv.scalar - 2.0 * lambda - h2 + tr * tr);
    let div = div_from_partials(&hv, &dh, &jet, &gamma);
    let dtr = dtrace_from_partials(&hv, &dh, &jet);
    let j: Vec<f64> = div.iter().zip(&dtr).map(|(a, b)| a - b).collect();
    let j_norm = norm_cov(&j, n, 1, &jet.ginv);
    Ok(InteriorConstraints { rho, j, j_norm })
}

pub fn data_interior_constraints(data: &InitialDataSet, p: &[f64], step: Option<f64>) -> Result<InteriorConstraints> {
    interior_constraints(&data.metric(), &data.h, data.lambda, p, step)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryConstraints {
    pub mean_curvature: f64,
    /// `π(ϱ, e_A)` in the adapted orthonormal frame.
    pub pi_tangential: Vec<f64>,
    /// `π(ϱ, ϱ)`.
    pub pi_normal: f64,
    pub tangential_norm: f64,
}

pub fn boundary_constraints(metric: &TensorField, h: &TensorField, p: &[f64], step: Option<f64>) -> Result<BoundaryConstraints> {
    let bg = boundary_geometry(metric, p, step)?;
    boundary_constraints_from(&bg, metric, h, p)
}

pub(crate) fn boundary_constraints_from(bg: &BoundaryGeometry, metric: &TensorField, h: &TensorField, p: &[f64]) -> Result<BoundaryConstraints> {
    let n = metric.dim();
    let pi = conjugate_momentum(metric, h).eval(p)?;
    let pim = mat_from(&pi, n);
    let frame_pi = bg.frame.transpose() * pim * &bg.frame;
    let pi_tangential: Vec<f64> = (0..n - 1).map(|a| frame_pi[(n - 1, a)]).collect();
    let tangential_norm = pi_tangential.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(BoundaryConstraints { mean_curvature: bg.mean_curvature, pi_tangential, pi_normal: frame_pi[(n - 1, n - 1)], tangential_norm })
}

/// Pointwise integrands of the Hamiltonian: interior `Vρ + W·J` and, at
/// boundary points, `VH + W·(ϱ⌟π)`. For noncompact data the integral of these
/// densities is a truncation and only meaningful together with the boundary
/// flux at infinity.
#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianDensity {
    pub interior: f64,
    pub boundary: Option<f64>,
    pub truncated: bool,
}

pub fn hamiltonian_density(
    data: &InitialDataSet,
    v: &TensorField,
    w: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<HamiltonianDensity> {
    let n = data.n();
    if v.dim() != n || w.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.dim().min(w.dim()) });
    }
    let metric = data.metric();
    let ic = interior_constraints(&metric, &data.h, data.lambda, p, step)?;
    let vv = v.eval_scalar(p)?;
    let wv = w.eval(p)?;
    let interior = vv * ic.rho + wv.iter().zip(&ic.j).map(|(a, b)| a * b).sum::<f64>();
    let boundary = if p[n - 1].abs() <= 1e-12 {
        let bg = boundary_geometry(&metric, p, step)?;
        let pi = mat_from(&conjugate_momentum(&metric, &data.h).eval(p)?, n);
        let rho = nalgebra::DVector::from_vec(bg.normal.clone());
        let flux = &pi * &rho;
        Some(vv * bg.mean_curvature + wv.iter().zip(flux.iter()).map(|(a, b)| a * b).sum::<f64>())
    } else {
        None
    };
    Ok(HamiltonianDensity { interior, boundary, truncated: true })
}
