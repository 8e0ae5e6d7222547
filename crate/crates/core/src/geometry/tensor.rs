//! Pointwise tensor algebra on flat component arrays.
//!
//! A rank-k covariant tensor in dimension n is a `Vec<f64>` of length `n^k`,
//! row-major in its indices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::fd::{gradient, hessian};
use crate::geometry::field::TensorField;

/// Metric, inverse and partial derivatives at one point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub n: usize,
    pub g: DMatrix<f64>,
    pub ginv: DMatrix<f64>,
    /// `dg[k][(i, j)] = ∂_k g_ij`.
    pub dg: Vec<DMatrix<f64>>,
    /// `ddg[k][l][(i, j)] = ∂_k ∂_l g_ij`, filled when requested.
    pub ddg: Option<Vec<Vec<DMatrix<f64>>>>,
}

pub(crate) fn split_gradient(n: usize, d: &[f64]) -> Vec<DMatrix<f64>> {
    (0..n).map(|k| DMatrix::from_row_slice(n, n, &d[k * n * n..(k + 1) * n * n])).collect()
}

pub(crate) fn split_hessian(n: usize, dd: &[f64]) -> Vec<Vec<DMatrix<f64>>> {
    (0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    let o = (k * n + l) * n * n;
                    DMatrix::from_row_slice(n, n, &dd[o..o + n * n])
                })
                .collect()
        })
        .collect()
}

/// Inverse of a positive definite metric, failing with `SingularMetric`.
pub fn spd_inverse(g: &DMatrix<f64>, p: &[f64]) -> Result<DMatrix<f64>> {
    let sym = (g + g.transpose()) * 0.5;
    match sym.clone().cholesky() {
        Some(ch) => Ok(ch.inverse()),
        None => Err(Error::SingularMetric { point: p.to_vec() }),
    }
}

/// Inverse of a nondegenerate (possibly indefinite) metric.
pub fn general_inverse(g: &DMatrix<f64>, p: &[f64]) -> Result<DMatrix<f64>> {
    let scale = g.amax().max(1e-300);
    let det = g.determinant();
    if !det.is_finite() || det.abs() <= 1e-14 * scale.powi(g.nrows() as i32) {
        return Err(Error::SingularMetric { point: p.to_vec() });
    }
    g.clone().try_inverse().ok_or(Error::SingularMetric { point: p.to_vec() })
}

impl MetricJet {
    pub fn at(metric: &TensorField, p: &[f64], step: Option<f64>, second: bool) -> Result<Self> {
        Self::at_with(metric, p, step, second, true)
    }

    pub(crate) fn at_with(metric: &TensorField, p: &[f64], step: Option<f64>, second: bool, riemannian: bool) -> Result<Self> {
        let n = metric.dim();
        let g = metric.eval_matrix(p)?;
        let g = (&g + g.transpose()) * 0.5;
        let ginv = if riemannian { spd_inverse(&g, p)? } else { general_inverse(&g, p)? };
        let dg = split_gradient(n, &gradient(metric, p, step)?);
        let ddg = if second { Some(split_hessian(n, &hessian(metric, p, step)?)) } else { None };
        Ok(Self { n, g, ginv, dg, ddg })
    }

    /// `Γ^k_ij`, returned as `gamma[k][(i, j)]`.
    pub fn christoffel(&self) -> Vec<DMatrix<f64>> {
        let n = self.n;
        let lower = self.christoffel_lower();
        (0..n)
            .map(|k| {
                DMatrix::from_fn(n, n, |i, j| (0..n).map(|l| self.ginv[(k, l)] * lower[l][(i, j)]).sum())
            })
            .collect()
    }

    /// `Γ_{l ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`.
    pub fn christoffel_lower(&self) -> Vec<DMatrix<f64>> {
        let n = self.n;
        (0..n)
            .map(|l| {
                DMatrix::from_fn(n, n, |i, j| 0.5 * (self.dg[i][(j, l)] + self.dg[j][(i, l)] - self.dg[l][(i, j)]))
            })
            .collect()
    }

    /// `∂_a Γ^e_{bd}` as `out[a][e][(b, d)]`. Requires second derivatives.
    pub fn christoffel_derivative(&self) -> Result<Vec<Vec<DMatrix<f64>>>> {
        let n = self.n;
        let ddg = self.ddg.as_ref().ok_or_else(|| Error::Input("second derivatives were not computed".into()))?;
        let lower = self.christoffel_lower();
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            // ∂_a g^{el} = −g^{em} ∂_a g_{mq} g^{ql}
            let dginv = -(&self.ginv * &self.dg[a] * &self.ginv);
            let dlower: Vec<DMatrix<f64>> = (0..n)
                .map(|l| {
                    DMatrix::from_fn(n, n, |b, d| 0.5 * (ddg[a][b][(d, l)] + ddg[a][d][(b, l)] - ddg[a][l][(b, d)]))
                })
                .collect();
            let per_e = (0..n)
                .map(|e| {
                    DMatrix::from_fn(n, n, |b, d| {
                        (0..n).map(|l| dginv[(e, l)] * lower[l][(b, d)] + self.ginv[(e, l)] * dlower[l][(b, d)]).sum()
                    })
                })
                .collect();
            out.push(per_e);
        }
        Ok(out)
    }
}

/// Index helper for rank-4 arrays.
#[inline]
pub fn idx4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// Raise every index of a covariant rank-k tensor with `ginv`.
pub fn raise_all(t: &[f64], n: usize, rank: usize, ginv: &DMatrix<f64>) -> Vec<f64> {
    let mut cur = t.to_vec();
    for slot in 0..rank {
        let stride = n.pow((rank - 1 - slot) as u32);
        let mut next = vec![0.0; cur.len()];
        for (flat, out) in next.iter_mut().enumerate() {
            let i = (flat / stride) % n;
            let base = flat - i * stride;
            *out = (0..n).map(|j| ginv[(i, j)] * cur[base + j * stride]).sum();
        }
        cur = next;
    }
    cur
}

/// Norm `sqrt(T_{a..} T^{a..})` of a covariant tensor.
pub fn norm_cov(t: &[f64], n: usize, rank: usize, ginv: &DMatrix<f64>) -> f64 {
    let up = raise_all(t, n, rank, ginv);
    t.iter().zip(&up).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
}

/// Covariant derivative of a covariant rank-k tensor from its value and partials.
/// `partials[a * ncomp + c]`; the result uses the same layout.
pub fn covariant_from_partials(t: &[f64], partials: &[f64], n: usize, rank: usize, gamma: &[DMatrix<f64>]) -> Vec<f64> {
    let nc = n.pow(rank as u32);
    let mut out = partials.to_vec();
    for a in 0..n {
        for flat in 0..nc {
            let mut corr = 0.0;
            for slot in 0..rank {
                let stride = n.pow((rank - 1 - slot) as u32);
                let i = (flat / stride) % n;
                let base = flat - i * stride;
                for c in 0..n {
                    corr += gamma[c][(a, i)] * t[base + c * stride];
                }
            }
            out[a * nc + flat] -= corr;
        }
    }
    out
}

/// Covariant derivative of a covariant field at `p` with respect to `metric`.
pub fn covariant_derivative(field: &TensorField, metric: &TensorField, p: &[f64], step: Option<f64>) -> Result<Vec<f64>> {
    let n = field.dim();
    if field.valence().contravariant != 0 {
        return Err(Error::Input("covariant_derivative expects a covariant field".into()));
    }
    let jet = MetricJet::at(metric, p, step, false)?;
    let gamma = jet.christoffel();
    let t = field.eval(p)?;
    let d = gradient(field, p, step)?;
    Ok(covariant_from_partials(&t, &d, n, field.valence().covariant, &gamma))
}

/// Contraction `g^{ij} T_{ij}` of a rank-2 covariant array.
pub fn trace2(t: &[f64], n: usize, ginv: &DMatrix<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += ginv[(i, j)] * t[i * n + j];
        }
    }
    s
}

pub fn mat_from(t: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, t)
}

/// Gram–Schmidt orthonormal frame with respect to `g`, starting from the given
/// vectors (columns). Returns the frame as columns.
pub fn gram_schmidt(g: &DMatrix<f64>, start: &DMatrix<f64>) -> DMatrix<f64> {
    let n = start.ncols();
    let mut frame = start.clone();
    for i in 0..n {
        let mut v = frame.column(i).into_owned();
        for j in 0..i {
            let e = frame.column(j).into_owned();
            let c = (e.transpose() * g * &v)[(0, 0)];
            v -= e * c;
        }
        let nrm = (v.transpose() * g * &v)[(0, 0)].sqrt();
        frame.set_column(i, &(v / nrm));
    }
    frame
}
