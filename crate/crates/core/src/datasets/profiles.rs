//! Closed-form tensor fields with exact first and second derivatives.

use crate::geometry::domain::{dot, Region};
use crate::geometry::field::{TensorField, Valence};

fn kd(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Values `(ψ, ψ', ψ'', χ, χ', χ'')` of a radial profile.
pub type RadialJet = [f64; 6];

/// `f_ij = ψ(r) x_i x_j + χ(r) δ_ij` with exact derivatives.
pub fn radial_sym2<F>(n: usize, region: Region, profile: F) -> TensorField
where
    F: Fn(f64) -> RadialJet + Send + Sync + Clone + 'static,
{
    let (p0, p1, p2) = (profile.clone(), profile.clone(), profile);
    TensorField::new(n, Valence::SYM2, move |x| {
        let [psi, _, _, chi, _, _] = p0(dot(x, x).sqrt());
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                v[i * n + j] = psi * x[i] * x[j] + chi * kd(i, j);
            }
        }
        v
    })
    .with_d_eval(move |x| {
        let r = dot(x, x).sqrt();
        let [psi, dpsi, _, _, dchi, _] = p1(r);
        let mut d = vec![0.0; n * n * n];
        for k in 0..n {
            let rk = x[k] / r;
            for i in 0..n {
                for j in 0..n {
                    d[k * n * n + i * n + j] = dpsi * rk * x[i] * x[j] + psi * (kd(i, k) * x[j] + kd(j, k) * x[i]) + dchi * rk * kd(i, j);
                }
            }
        }
        d
    })
    .with_dd_eval(move |x| {
        let r = dot(x, x).sqrt();
        let [psi, dpsi, ddpsi, _, dchi, ddchi] = p2(r);
        let rho: Vec<f64> = x.iter().map(|v| v / r).collect();
        let mut dd = vec![0.0; n * n * n * n];
        for k in 0..n {
            for l in 0..n {
                let drho = (kd(k, l) - rho[k] * rho[l]) / r;
                for i in 0..n {
                    for j in 0..n {
                        let a = ddpsi * rho[l] * rho[k] * x[i] * x[j]
                            + dpsi * drho * x[i] * x[j]
                            + dpsi * rho[k] * (kd(i, l) * x[j] + kd(j, l) * x[i])
                            + dpsi * rho[l] * (kd(i, k) * x[j] + kd(j, k) * x[i])
                            + psi * (kd(i, k) * kd(j, l) + kd(j, k) * kd(i, l))
                            + (ddchi * rho[l] * rho[k] + dchi * drho) * kd(i, j);
                        dd[(k * n + l) * n * n + i * n + j] = a;
                    }
                }
            }
        }
        dd
    })
    .with_region(region)
}

/// Smooth bump `exp(−1/(1 − s))`, `s = |x − c|²/R²`, with value, gradient and Hessian.
#[derive(Debug, Clone)]
pub struct Bump {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Bump {
    pub fn jet(&self, x: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let n = x.len();
        let r2 = self.radius * self.radius;
        let dx: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let s = dot(&dx, &dx) / r2;
        if s >= 1.0 {
            return (0.0, vec![0.0; n], vec![0.0; n * n]);
        }
        let q = 1.0 - s;
        let b = (-1.0 / q).exp();
        let b1 = -b / (q * q);
        let b2 = b / q.powi(4) - 2.0 * b / q.powi(3);
        let ds: Vec<f64> = dx.iter().map(|v| 2.0 * v / r2).collect();
        let grad = ds.iter().map(|v| b1 * v).collect();
        let mut hess = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                hess[k * n + l] = b2 * ds[k] * ds[l] + b1 * 2.0 * kd(k, l) / r2;
            }
        }
        (b, grad, hess)
    }
}

/// `A β(x) δ_ij` for a bump `β`.
pub fn conformal_bump(n: usize, amplitude: f64, bump: Bump, region: Region) -> TensorField {
    let a: Vec<f64> = (0..n * n).map(|c| if c / n == c % n { amplitude } else { 0.0 }).collect();
    tensor_bump(n, a, bump, region)
}

/// `A_ij β(x)` for a constant symmetric matrix `A` (row-major) and a bump `β`.
pub fn tensor_bump(n: usize, a: Vec<f64>, bump: Bump, region: Region) -> TensorField {
    let (b0, b1, b2) = (bump.clone(), bump.clone(), bump);
    let (a0, a1, a2) = (a.clone(), a.clone(), a);
    TensorField::new(n, Valence::SYM2, move |x| {
        let v = b0.jet(x).0;
        a0.iter().map(|c| c * v).collect()
    })
    .with_d_eval(move |x| {
        let (_, g, _) = b1.jet(x);
        let mut d = Vec::with_capacity(n * n * n);
        for gk in &g {
            d.extend(a1.iter().map(|c| c * gk));
        }
        d
    })
    .with_dd_eval(move |x| {
        let (_, _, h) = b2.jet(x);
        let mut dd = Vec::with_capacity(n * n * n * n);
        for hkl in &h {
            dd.extend(a2.iter().map(|c| c * hkl));
        }
        dd
    })
    .with_region(region)
}

/// `u β(x)` for a constant vector `u` and a bump `β`.
pub fn vector_bump(u: Vec<f64>, bump: Bump, region: Region) -> TensorField {
    let n = u.len();
    let (b0, b1, b2) = (bump.clone(), bump.clone(), bump);
    let (u0, u1, u2) = (u.clone(), u.clone(), u);
    TensorField::new(n, Valence::VECTOR, move |x| {
        let v = b0.jet(x).0;
        u0.iter().map(|c| c * v).collect()
    })
    .with_d_eval(move |x| {
        let (_, g, _) = b1.jet(x);
        g.iter().flat_map(|gk| u1.iter().map(move |c| c * gk)).collect()
    })
    .with_dd_eval(move |x| {
        let (_, _, h) = b2.jet(x);
        h.iter().flat_map(|hkl| u2.iter().map(move |c| c * hkl)).collect()
    })
    .with_region(region)
}
