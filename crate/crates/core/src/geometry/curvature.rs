use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::field::TensorField;
use crate::geometry::tensor::{idx4, MetricJet};

/// Curvature of a metric at one point.
///
/// `riemann[idx4(a, b, c, d)] = g(R(∂_a, ∂_b) ∂_d, ∂_c)` with
/// `R(X, Y) = [∇_X, ∇_Y] − ∇_[X,Y]`, so sectional curvature is
/// `R_abab / (g_aa g_bb − g_ab²)`.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureBundle {
    pub n: usize,
    /// `christoffel[k][i * n + j] = Γ^k_ij`.
    pub christoffel: Vec<Vec<f64>>,
    pub riemann: Vec<f64>,
    pub ricci: Vec<f64>,
    pub scalar: f64,
    pub symmetry_residual: f64,
    pub bianchi_residual: f64,
}

impl CurvatureBundle {
    pub fn ricci_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.ricci)
    }

    pub fn riemann_at(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.riemann[idx4(self.n, a, b, c, d)]
    }
}

pub fn curvature(metric: &TensorField, p: &[f64], step: Option<f64>) -> Result<CurvatureBundle> {
    let jet = MetricJet::at(metric, p, step, true)?;
    curvature_from_jet(&jet)
}

pub(crate) fn curvature_from_jet(jet: &MetricJet) -> Result<CurvatureBundle> {
    let n = jet.n;
    let gamma = jet.christoffel();
    let dgamma = jet.christoffel_derivative()?;
    // R^e_{dab} = ∂_a Γ^e_bd − ∂_b Γ^e_ad + Γ^e_af Γ^f_bd − Γ^e_bf Γ^f_ad
    let mut rup = vec![0.0; n * n * n * n];
    for e in 0..n {
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut v = dgamma[a][e][(b, d)] - dgamma[b][e][(a, d)];
                    for f in 0..n {
                        v += gamma[e][(a, f)] * gamma[f][(b, d)] - gamma[e][(b, f)] * gamma[f][(a, d)];
                    }
                    rup[idx4(n, e, d, a, b)] = v;
                }
            }
        }
    }
    let mut riemann = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    riemann[idx4(n, a, b, c, d)] = (0..n).map(|e| jet.g[(c, e)] * rup[idx4(n, e, d, a, b)]).sum();
                }
            }
        }
    }
    let mut ricci = vec![0.0; n * n];
    for b in 0..n {
        for d in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for c in 0..n {
                    s += jet.ginv[(a, c)] * riemann[idx4(n, a, b, c, d)];
                }
            }
            ricci[b * n + d] = s;
        }
    }
    let scalar = (0..n).flat_map(|b| (0..n).map(move |d| (b, d))).map(|(b, d)| jet.ginv[(b, d)] * ricci[b * n + d]).sum();
    let scale = riemann.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut sym: f64 = 0.0;
    let mut bianchi: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let r = riemann[idx4(n, a, b, c, d)];
                    sym = sym
                        .max((r + riemann[idx4(n, b, a, c, d)]).abs())
                        .max((r + riemann[idx4(n, a, b, d, c)]).abs())
                        .max((r - riemann[idx4(n, c, d, a, b)]).abs());
                    bianchi = bianchi.max((r + riemann[idx4(n, a, c, d, b)] + riemann[idx4(n, a, d, b, c)]).abs());
                }
            }
        }
    }
    let christoffel = gamma.iter().map(crate::geometry::field::row_major).collect();
    Ok(CurvatureBundle {
        n,
        christoffel,
        riemann,
        ricci,
        scalar,
        symmetry_residual: sym / scale,
        bianchi_residual: bianchi / scale,
    })
}

/// Einstein tensor `Ric − (R/2) g` at an interior point.
pub fn einstein_tensor(metric: &TensorField, p: &[f64], step: Option<f64>) -> Result<DMatrix<f64>> {
    let g = metric.eval_matrix(p)?;
    let c = curvature(metric, p, step)?;
    Ok(c.ricci_matrix() - g * (0.5 * c.scalar))
}
