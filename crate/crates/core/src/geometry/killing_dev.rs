//! Curvature of the Killing development `−V² du² + g(dx − W du, dx − W du)`.
//!
//! The development is built as an explicit metric on `(u, x)` and its curvature
//! is computed numerically, then compared in the frame
//! `ẽ_0 = (∂_u + W)/V, ẽ_i = e_i` with the closed forms
//!
//! ```text
//! R̃_ijkt = R_ijkt + h_ik h_jt − h_it h_jk
//! R̃_ijk0 = ∇_i h_kj − ∇_j h_ki
//! R̃_i0k0 = (∇_k h_it − ∇_t h_ik) W^t / V
//! ```

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::curvature::{curvature, curvature_from_jet};
use crate::geometry::domain::norm;
use crate::geometry::fd::gradient;
use crate::geometry::field::{row_major, TensorField, Valence};
use crate::geometry::tensor::{covariant_from_partials, gram_schmidt, idx4, mat_from, MetricJet};

#[derive(Debug, Clone, Serialize)]
pub struct KillingDevCheck {
    pub spatial_residual: f64,
    pub mixed_residual: f64,
    pub normal_residual: f64,
    pub precondition_residual: f64,
}

impl KillingDevCheck {
    pub fn max_residual(&self) -> f64 {
        self.spatial_residual.max(self.mixed_residual).max(self.normal_residual)
    }
}

/// Lie derivative `ℒ_W g` at `p` for a vector field `W`.
pub fn lie_derivative_metric(metric: &TensorField, w: &TensorField, p: &[f64], step: Option<f64>) -> Result<DMatrix<f64>> {
    let n = metric.dim();
    let g = metric.eval_matrix(p)?;
    let dg = gradient(metric, p, step)?;
    let wv = w.eval(p)?;
    let dw = gradient(w, p, step)?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let mut s = 0.0;
        for k in 0..n {
            s += wv[k] * dg[k * n * n + i * n + j];
            s += g[(k, j)] * dw[i * n + k] + g[(i, k)] * dw[j * n + k];
        }
        s
    }))
}

/// Residuals of `ℒ_W g − 2Vh = 0` and `d(V² − |W|²) = 0` at `p`.
pub fn killing_precondition(
    metric: &TensorField,
    h: &TensorField,
    v: &TensorField,
    w: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<f64> {
    let n = metric.dim();
    let lie = lie_derivative_metric(metric, w, p, step)?;
    let hv = h.eval_matrix(p)?;
    let vv = v.eval_scalar(p)?;
    let r1 = (lie - hv * (2.0 * vv)).amax();
    let metric_c = metric.clone();
    let (v_c, w_c) = (v.clone(), w.clone());
    let potential = TensorField::from_fn(n, Valence::SCALAR, move |q| {
        let g = metric_c.eval_matrix(q)?;
        let wq = DVector::from_vec(w_c.eval(q)?);
        let vq = v_c.eval_scalar(q)?;
        Ok(vec![vq * vq - (wq.transpose() * &g * &wq)[(0, 0)]])
    })
    .with_region(metric.region());
    let r2 = gradient(&potential, p, step)?.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(r1.max(r2))
}

/// Development metric on `(u, x_1, .., x_n)`.
pub fn killing_development(metric: &TensorField, v: &TensorField, w: &TensorField) -> TensorField {
    let n = metric.dim();
    let (g, v, w) = (metric.clone(), v.clone(), w.clone());
    TensorField::from_fn(n + 1, Valence::SYM2, move |q| {
        let x = &q[1..];
        let gm = g.eval_matrix(x)?;
        let wv = DVector::from_vec(w.eval(x)?);
        let vv = v.eval_scalar(x)?;
        let gw = &gm * &wv;
        let mut out = DMatrix::zeros(n + 1, n + 1);
        out[(0, 0)] = -vv * vv + wv.dot(&gw);
        for i in 0..n {
            out[(0, i + 1)] = -gw[i];
            out[(i + 1, 0)] = -gw[i];
            for j in 0..n {
                out[(i + 1, j + 1)] = gm[(i, j)];
            }
        }
        Ok(row_major(&out))
    })
    .with_region(metric.region())
}

/// Compare the numerically computed curvature of the development with the
/// closed forms. Refuses to run when the Killing equations fail at `p`.
pub fn killing_development_check(
    metric: &TensorField,
    h: &TensorField,
    v: &TensorField,
    w: &TensorField,
    p: &[f64],
    step: Option<f64>,
) -> Result<KillingDevCheck> {
    let n = metric.dim();
    let vv = v.eval_scalar(p)?;
    if vv <= 1e-12 {
        return Err(Error::DegenerateLapse { point: p.to_vec() });
    }
    let pre = killing_precondition(metric, h, v, w, p, step)?;
    let scale = 1.0 + h.eval(p)?.iter().fold(0.0f64, |m, x| m.max(x.abs())) + vv.abs();
    if pre > 1e-5 * scale {
        return Err(Error::Precondition { what: "ℒ_W g = 2Vh and d(V² − |W|²) = 0".into(), residual: pre });
    }

    let q: Vec<f64> = std::iter::once(0.0).chain(p.iter().copied()).collect();
    let dev = killing_development(metric, v, w);
    let dev_step = step.or(Some(1e-4 * norm(p).max(1.0)));
    let jet = MetricJet::at_with(&dev, &q, dev_step, true, false)?;
    let big = curvature_from_jet(&jet)?;

    let g = metric.eval_matrix(p)?;
    let frame = gram_schmidt(&g, &DMatrix::identity(n, n));
    let wv = w.eval(p)?;
    let mut ext = DMatrix::zeros(n + 1, n + 1);
    ext[(0, 0)] = 1.0 / vv;
    for i in 0..n {
        ext[(i + 1, 0)] = wv[i] / vv;
        for a in 0..n {
            ext[(a + 1, i + 1)] = frame[(a, i)];
        }
    }
    let m = n + 1;
    let frame_comp = |r: &[f64], e: &DMatrix<f64>, dim: usize, al: usize, be: usize, ga: usize, de: usize| {
        let mut s = 0.0;
        for a in 0..dim {
            let ea = e[(a, al)];
            if ea == 0.0 {
                continue;
            }
            for b in 0..dim {
                let eb = e[(b, be)];
                if eb == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    let ec = e[(c, ga)];
                    if ec == 0.0 {
                        continue;
                    }
                    for d in 0..dim {
                        s += ea * eb * ec * e[(d, de)] * r[idx4(dim, a, b, c, d)];
                    }
                }
            }
        }
        s
    };

    let small = curvature(metric, p, step)?;
    let hc = h.eval(p)?;
    let hf = frame.transpose() * mat_from(&hc, n) * &frame;
    let gamma: Vec<DMatrix<f64>> = small.christoffel.iter().map(|c| mat_from(c, n)).collect();
    let dh = covariant_from_partials(&hc, &gradient(h, p, step)?, n, 2, &gamma);
    // ∇_{e_i} h(e_k, e_j) in the frame
    let dh_frame = |i: usize, k: usize, j: usize| {
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    s += frame[(a, i)] * frame[(b, k)] * frame[(c, j)] * dh[a * n * n + b * n + c];
                }
            }
        }
        s
    };
    let finv = frame.clone().try_inverse().ok_or(Error::SingularMetric { point: p.to_vec() })?;
    let wf = &finv * DVector::from_vec(wv.clone());

    let mut spatial: f64 = 0.0;
    let mut mixed: f64 = 0.0;
    let mut normal: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for t in 0..n {
                    let big_c = frame_comp(&big.riemann, &ext, m, i + 1, j + 1, k + 1, t + 1);
                    let want = frame_comp(&small.riemann, &frame, n, i, j, k, t) + hf[(i, k)] * hf[(j, t)] - hf[(i, t)] * hf[(j, k)];
                    spatial = spatial.max((big_c - want).abs());
                }
                let big_m = frame_comp(&big.riemann, &ext, m, i + 1, j + 1, k + 1, 0);
                let want_m = dh_frame(i, k, j) - dh_frame(j, k, i);
                mixed = mixed.max((big_m - want_m).abs());
            }
        }
        for k in 0..n {
            let big_n = frame_comp(&big.riemann, &ext, m, i + 1, 0, k + 1, 0);
            let want_n: f64 = (0..n).map(|t| (dh_frame(k, i, t) - dh_frame(t, i, k)) * wf[t] / vv).sum();
            normal = normal.max((big_n - want_n).abs());
        }
    }
    Ok(KillingDevCheck { spatial_residual: spatial, mixed_residual: mixed, normal_residual: normal, precondition_residual: pre })
}
