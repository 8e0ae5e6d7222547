//! Linearized constraint maps at a reference model, the charge density and the
//! formal adjoint, with pointwise checks of the divergence identities relating them.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::constraints::interior::div_minus_dtrace;
use crate::error::{Error, Result};
use crate::geometry::boundary::{boundary_geometry, require_boundary_point};
use crate::geometry::curvature::curvature;
use crate::geometry::domain::{Model, Region};
use crate::geometry::fd::gradient;
use crate::geometry::field::{row_major, TensorField, Valence};
use crate::geometry::killing_dev::lie_derivative_metric;
use crate::geometry::tensor::{covariant_from_partials, mat_from, trace2, MetricJet};
use crate::models::reference_metric;

#[derive(Debug, Clone, Serialize)]
pub struct LinearizedConstraints {
    /// `div(div f − d tr f) − ⟨Ric, f⟩`.
    pub interior_scalar: f64,
    /// `2(div h − d tr h)`.
    pub interior_covector: Vec<f64>,
    /// Boundary part, present at boundary points.
    pub boundary_scalar: Option<f64>,
    pub boundary_covector: Option<Vec<f64>>,
}

fn covector_closure(n: usize, region: Region, f: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static) -> TensorField {
    TensorField::from_fn(n, Valence::COVECTOR, f).with_region(region)
}

/// `α = div_{g₀} f − d tr_{g₀} f` as a field.
pub fn alpha_field(background: &TensorField, f: &TensorField, step: Option<f64>) -> TensorField {
    let (g, f) = (background.clone(), f.clone());
    covector_closure(background.dim(), background.region(), move |q| div_minus_dtrace(&g, &f, q, step))
}

/// `div_g α = g^{ij}(∂_i α_j − Γ^k_ij α_k)`.
pub fn divergence_covector(metric: &TensorField, alpha: &TensorField, p: &[f64], step: Option<f64>) -> Result<f64> {
    let n = metric.dim();
    let jet = MetricJet::at(metric, p, step, false)?;
    let gamma = jet.christoffel();
    let a = alpha.eval(p)?;
    let da = gradient(alpha, p, step)?;
    let cov = covariant_from_partials(&a, &da, n, 1, &gamma);
    Ok(trace2(&cov, n, &jet.ginv))
}

/// `⟨A, B⟩_g = g^{ik} g^{jl} A_ij B_kl`.
pub fn pair2(a: &DMatrix<f64>, b: &DMatrix<f64>, ginv: &DMatrix<f64>) -> f64 {
    (ginv * a * ginv).component_mul(b).sum()
}

fn boundary_chart(field: &TensorField, a_part: impl Fn(&[f64], &TensorField) -> Result<Vec<f64>> + Send + Sync + 'static, valence: Valence) -> TensorField {
    let n = field.dim();
    let f = field.clone();
    TensorField::from_fn(n - 1, valence, move |x| {
        let mut p = x.to_vec();
        p.push(0.0);
        a_part(&p, &f)
    })
    .with_region(Region::Whole)
}

pub fn linearized_constraints(
    model: Model,
    f: &TensorField,
    h: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<LinearizedConstraints> {
    let n = f.dim();
    let g0 = reference_metric(model, n);
    let g0m = g0.eval_matrix(p)?;
    let ginv = crate::geometry::tensor::spd_inverse(&g0m, p)?;
    let alpha = alpha_field(&g0, f, step);
    let ric = curvature(&g0, p, step)?.ricci_matrix();
    let fm = f.eval_matrix(p)?;
    let interior_scalar = divergence_covector(&g0, &alpha, p, step)? - pair2(&ric, &fm, &ginv);
    let interior_covector = div_minus_dtrace(&g0, h, p, step)?.into_iter().map(|x| 2.0 * x).collect();

    let (boundary_scalar, boundary_covector) = if p[n - 1].abs() <= 1e-12 {
        let bg = boundary_geometry(&g0, p, step)?;
        let rho = DVector::from_vec(bg.normal.clone());
        let a = DVector::from_vec(alpha.eval(p)?);
        let m = n - 1;
        // tangential covector (ϱ⌟f)^⊤ on the boundary chart
        let tang = boundary_chart(
            f,
            move |q, f| {
                let g = reference_metric(model, q.len()).eval_matrix(q)?;
                let ginv = crate::geometry::tensor::spd_inverse(&g, q)?;
                let k = q.len();
                let rho: Vec<f64> = (0..k).map(|i| ginv[(i, k - 1)] / ginv[(k - 1, k - 1)].sqrt()).collect();
                let fm = f.eval_matrix(q)?;
                Ok((0..k - 1).map(|a| (0..k).map(|i| rho[i] * fm[(i, a)]).sum()).collect())
            },
            Valence::COVECTOR,
        );
        let gamma_field = boundary_chart(
            &g0,
            move |q, g| {
                let gm = g.eval_matrix(q)?;
                Ok(row_major(&gm.view((0, 0), (q.len() - 1, q.len() - 1)).into_owned()))
            },
            Valence::SYM2,
        );
        let x = &p[..m];
        let div_t = divergence_covector(&gamma_field, &tang, x, step)?;
        let iinv = crate::geometry::tensor::spd_inverse(&bg.induced, p)?;
        let ftan = fm.view((0, 0), (m, m)).into_owned();
        let scalar = a.dot(&rho) + div_t - pair2(&bg.second_fundamental, &ftan, &iinv);
        let hm = h.eval_matrix(p)?;
        let trh = (&ginv * &hm).trace();
        let cov = (&hm * &rho - &g0m * &rho * trh) * 2.0;
        (Some(scalar), Some(cov.iter().copied().collect()))
    } else {
        (None, None)
    };
    Ok(LinearizedConstraints { interior_scalar, interior_covector, boundary_scalar, boundary_covector })
}

/// Charge density
/// `𝕌 = V(div f − d tr f) − f(∇V, ·) + (tr f) dV + 2(h(W, ·) − (tr h) W♭)`
/// with all operations taken with respect to the reference metric.
pub fn charge_density(
    model: Model,
    f: &TensorField,
    h: &TensorField,
    v: &TensorField,
    w: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<Vec<f64>> {
    let n = f.dim();
    let g0 = reference_metric(model, n);
    charge_density_with(&g0, f, h, v, w, p, step)
}

pub(crate) fn charge_density_with(
    g0: &TensorField,
    f: &TensorField,
    h: &TensorField,
    v: &TensorField,
    w: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<Vec<f64>> {
    let gm = g0.eval_matrix(p)?;
    let ginv = crate::geometry::tensor::spd_inverse(&gm, p)?;
    let alpha = DVector::from_vec(div_minus_dtrace(g0, f, p, step)?);
    let vv = v.eval_scalar(p)?;
    let dv = DVector::from_vec(gradient(v, p, step)?);
    let fm = f.eval_matrix(p)?;
    let hm = h.eval_matrix(p)?;
    let wv = DVector::from_vec(w.eval(p)?);
    let grad_v = &ginv * &dv;
    let trf = (&ginv * &fm).trace();
    let trh = (&ginv * &hm).trace();
    let u = &alpha * vv - &fm * &grad_v + &dv * trf + (&hm * &wv - &gm * &wv * trh) * 2.0;
    Ok(u.iter().copied().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjointValue {
    /// `∇²V − (ΔV) g₀ − V Ric`.
    pub scalar_part: DMatrix<f64>,
    /// `−ℒ_W g₀ + 2 (div W) g₀`.
    pub vector_part: DMatrix<f64>,
}

pub fn adjoint_constraint(model: Model, v: &TensorField, w: &TensorField, p: &[f64], step: Option<f64>) -> Result<AdjointValue> {
    let n = v.dim();
    let g0 = reference_metric(model, n);
    let jet = MetricJet::at(&g0, p, step, false)?;
    let gamma = jet.christoffel();
    let dv = gradient(v, p, step)?;
    let ddv = crate::geometry::fd::hessian(v, p, step)?;
    let hess = DMatrix::from_fn(n, n, |i, j| ddv[i * n + j] - (0..n).map(|k| gamma[k][(i, j)] * dv[k]).sum::<f64>());
    let lap = (&jet.ginv * &hess).trace();
    let ric = curvature(&g0, p, step)?.ricci_matrix();
    let vv = v.eval_scalar(p)?;
    let scalar_part = &hess - &jet.g * lap - ric * vv;
    let wv = w.eval(p)?;
    let dw = gradient(w, p, step)?;
    let div_w: f64 = (0..n).map(|i| dw[i * n + i] + (0..n).map(|k| gamma[i][(i, k)] * wv[k]).sum::<f64>()).sum();
    let lie = lie_derivative_metric(&g0, w, p, step)?;
    let vector_part = -lie + &jet.g * (2.0 * div_w);
    Ok(AdjointValue { scalar_part, vector_part })
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceCheck {
    /// `⟨DΨ(f, h), (V, W)⟩`.
    pub lhs: f64,
    pub div_charge: f64,
    /// `⟨(f, h), 𝓕(V, W)⟩`.
    pub adjoint_pairing: f64,
    pub residual: f64,
}

/// Residual of `⟨DΨ(f,h), (V,W)⟩ − div 𝕌 − ⟨(f,h), 𝓕(V,W)⟩` at an interior point.
pub fn verify_divergence_identity(
    model: Model,
    f: &TensorField,
    h: &TensorField,
    v: &TensorField,
    w: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<DivergenceCheck> {
    let n = f.dim();
    let g0 = reference_metric(model, n);
    let lin = linearized_constraints(model, f, h, p, step)?;
    let vv = v.eval_scalar(p)?;
    let wv = w.eval(p)?;
    let lhs = vv * lin.interior_scalar + lin.interior_covector.iter().zip(&wv).map(|(a, b)| a * b).sum::<f64>();
    let (f2, h2, v2, w2, g2) = (f.clone(), h.clone(), v.clone(), w.clone(), g0.clone());
    let u_field = covector_closure(n, g0.region(), move |q| charge_density_with(&g2, &f2, &h2, &v2, &w2, q, step));
    let div_charge = divergence_covector(&g0, &u_field, p, step)?;
    let adj = adjoint_constraint(model, v, w, p, step)?;
    let ginv = crate::geometry::tensor::spd_inverse(&g0.eval_matrix(p)?, p)?;
    let adjoint_pairing = pair2(&f.eval_matrix(p)?, &adj.scalar_part, &ginv) + pair2(&h.eval_matrix(p)?, &adj.vector_part, &ginv);
    Ok(DivergenceCheck { lhs, div_charge, adjoint_pairing, residual: (lhs - div_charge - adjoint_pairing).abs() })
}

/// `ℒ_ζ g₀` as a field.
pub fn lie_metric_field(model: Model, zeta: &TensorField, step: Option<f64>) -> TensorField {
    let n = zeta.dim();
    let g0 = reference_metric(model, n);
    let z = zeta.clone();
    TensorField::from_fn(n, Valence::SYM2, move |q| Ok(row_major(&lie_derivative_metric(&g0, &z, q, step)?)))
        .with_region(model.region())
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeCheck {
    pub charge: Vec<f64>,
    pub div_potential: Vec<f64>,
    pub residual: f64,
}

/// Check that the charge density of a pure gauge perturbation `(ℒ_ζ g₀, 0)` is
/// the divergence of
/// `𝕍_ik = V(∇_k ζ_i − ∇_i ζ_k) + 2(ζ_k ∂_i V − ζ_i ∂_k V)`,
/// `(div 𝕍)_i = g₀^{kl} ∇_l 𝕍_ik`.
pub fn verify_gauge_charge(
    model: Model,
    zeta: &TensorField,
    v: &TensorField,
    w: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<GaugeCheck> {
    let n = zeta.dim();
    let mut foot = p.to_vec();
    foot[n - 1] = 0.0;
    let zn = zeta.eval(&foot)?[n - 1];
    if zn.abs() > 1e-10 * (1.0 + crate::geometry::domain::norm(&zeta.eval(&foot)?)) {
        return Err(Error::InvalidGauge { normal: zn });
    }
    let g0 = reference_metric(model, n);
    let f = lie_metric_field(model, zeta, step);
    let zero = TensorField::zero(n, Valence::SYM2);
    let charge = charge_density_with(&g0, &f, &zero, v, w, p, step)?;
    let (g2, z2, v2) = (g0.clone(), zeta.clone(), v.clone());
    let potential = TensorField::from_fn(n, Valence::SYM2, move |q| {
        let jet = MetricJet::at(&g2, q, step, false)?;
        let gamma = jet.christoffel();
        let zu = DVector::from_vec(z2.eval(q)?);
        let zl = &jet.g * &zu;
        let dzu = gradient(&z2, q, step)?;
        // ∂_k ζ_i = ∂_k g_ij ζ^j + g_ij ∂_k ζ^j
        let mut dzl = vec![0.0; n * n];
        for k in 0..n {
            let dz = DVector::from_fn(n, |j, _| dzu[k * n + j]);
            let v = &jet.dg[k] * &zu + &jet.g * dz;
            for i in 0..n {
                dzl[k * n + i] = v[i];
            }
        }
        let cov = covariant_from_partials(zl.as_slice(), &dzl, n, 1, &gamma);
        let vv = v2.eval_scalar(q)?;
        let dv = gradient(&v2, q, step)?;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                out[i * n + k] = vv * (cov[k * n + i] - cov[i * n + k]) + 2.0 * (zl[k] * dv[i] - zl[i] * dv[k]);
            }
        }
        Ok(out)
    })
    .with_region(g0.region());
    let jet = MetricJet::at(&g0, p, step, false)?;
    let gamma = jet.christoffel();
    let vt = potential.eval(p)?;
    let dvt = gradient(&potential, p, step)?;
    let cov = covariant_from_partials(&vt, &dvt, n, 2, &gamma);
    let div_potential: Vec<f64> = (0..n)
        .map(|i| {
            let mut s = 0.0;
            for k in 0..n {
                for l in 0..n {
                    s += jet.ginv[(k, l)] * cov[l * n * n + i * n + k];
                }
            }
            s
        })
        .collect();
    let residual = charge.iter().zip(&div_potential).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(GaugeCheck { charge, div_potential, residual })
}

/// Value of `(ϱ⌟f)^⊤` needed by callers that integrate boundary terms.
pub fn normal_contraction(model: Model, f: &TensorField, p: &[f64]) -> Result<Vec<f64>> {
    require_boundary_point(p)?;
    let n = f.dim();
    let g = reference_metric(model, n).eval_matrix(p)?;
    let ginv = crate::geometry::tensor::spd_inverse(&g, p)?;
    let rho = DVector::from_fn(n, |i, _| ginv[(i, n - 1)] / ginv[(n - 1, n - 1)].sqrt());
    Ok((mat_from(&f.eval(p)?, n) * rho).iter().copied().collect())
}
