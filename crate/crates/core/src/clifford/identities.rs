use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::rep::{c, max_abs, max_abs_vec, CMat, CliffordRep, Spinor, I};
use crate::constraints::interior_constraints;
use crate::error::{Error, Result};
use crate::geometry::field::TensorField;
use crate::models::reference_metric;
use crate::geometry::domain::Model;
use num_complex::Complex64;

/// `−½ Σ_j t_ij γ₀ γ_j` for a fixed row `i`.
fn row_gamma0(rep: &CliffordRep, t: &DMatrix<f64>, i: usize) -> CMat {
    let mut m = CMat::zeros(rep.dim, rep.dim);
    for j in 0..rep.n {
        m += &rep.gamma[0] * &rep.gamma[j + 1] * c(-0.5 * t[(i, j)]);
    }
    m
}

/// `−½ Σ_kl h_kl γ_k γ₀ γ_l`.
fn dirac_potential(rep: &CliffordRep, h: &DMatrix<f64>) -> CMat {
    let mut m = CMat::zeros(rep.dim, rep.dim);
    for k in 0..rep.n {
        for l in 0..rep.n {
            m += &rep.gamma[k + 1] * &rep.gamma[0] * &rep.gamma[l + 1] * c(-0.5 * h[(k, l)]);
        }
    }
    m
}

/// Zeroth-order part of `∇̄_{e_i} + e_i·𝒟̄ = ∇_{e_i} + e_i·𝒟 − ½π_ij e₀·e_j·`:
/// `−½h_ij γ₀γ_j + γ_i(−½h_kl γ_kγ₀γ_l) + ½π_ij γ₀γ_j`, maximum over `i`.
pub fn verify_decomposition(rep: &CliffordRep, h: &DMatrix<f64>) -> Result<f64> {
    let n = rep.n;
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::Input(format!("h must be {n}x{n}, got {}x{}", h.nrows(), h.ncols())));
    }
    let asym = (h - h.transpose()).abs().max();
    let scale = h.abs().max().max(1.0);
    if asym > 1e-12 * scale || h.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input(format!("h is not symmetric (asymmetry {asym:e})")));
    }
    let pi = h - DMatrix::identity(n, n) * h.trace();
    let dp = dirac_potential(rep, h);
    let mut worst = 0.0f64;
    for i in 0..n {
        let lhs = row_gamma0(rep, h, i) + &rep.gamma[i + 1] * &dp;
        let rhs = row_gamma0(rep, &pi, i);
        worst = worst.max(max_abs(&(lhs - rhs)));
    }
    Ok(worst)
}

/// Random symmetric `n×n` matrix with entries uniform in `[−1, 1]`.
pub fn random_symmetric(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

pub fn random_spinor(dim: usize, rng: &mut impl Rng) -> Spinor {
    Spinor::from_fn(dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

type SpinorFn = dyn Fn(&[f64]) -> Spinor + Send + Sync;

/// Spinor-valued field on a flat chart.
#[derive(Clone)]
pub struct SpinorField {
    f: Arc<SpinorFn>,
}

impl std::fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SpinorField")
    }
}

impl SpinorField {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> Spinor + Send + Sync + 'static,
    {
        Self { f: Arc::new(f) }
    }

    pub fn constant(v: Spinor) -> Self {
        Self::new(move |_| v.clone())
    }

    /// `a + b_k x_k + c_kl x_k x_l` with complex coefficient spinors.
    pub fn quadratic(a: Spinor, b: Vec<Spinor>, cq: Vec<Vec<Spinor>>) -> Self {
        Self::new(move |x| {
            let mut v = a.clone();
            for (k, bk) in b.iter().enumerate() {
                v += bk * c(x[k]);
            }
            for (k, row) in cq.iter().enumerate() {
                for (l, ckl) in row.iter().enumerate() {
                    v += ckl * c(x[k] * x[l]);
                }
            }
            v
        })
    }

    /// Componentwise quadratic field with seeded random coefficients.
    pub fn random_quadratic(rep: &CliffordRep, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rep.n;
        let a = random_spinor(rep.dim, &mut rng);
        let b = (0..n).map(|_| random_spinor(rep.dim, &mut rng)).collect();
        let cq = (0..n).map(|_| (0..n).map(|_| random_spinor(rep.dim, &mut rng) * c(0.5)).collect()).collect();
        Self::quadratic(a, b, cq)
    }

    pub fn eval(&self, p: &[f64]) -> Spinor {
        (self.f)(p)
    }
}

fn shifted(p: &[f64], k: usize, s: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[k] += s;
    q
}

fn central<F>(f: F, p: &[f64], k: usize, s: f64) -> Result<Spinor>
where
    F: Fn(&[f64]) -> Result<Spinor>,
{
    Ok((f(&shifted(p, k, s))? - f(&shifted(p, k, -s))?) / c(2.0 * s))
}

#[derive(Debug, Clone, Serialize)]
pub struct WeitzenbockCheck {
    pub step: f64,
    /// `max |𝒟̄²ψ − (∇̄*∇̄ψ + ℛψ)|`.
    pub residual: f64,
    /// `max |𝒟̄²ψ|`, for scale.
    pub lhs_norm: f64,
    pub rho: f64,
    pub j: Vec<f64>,
}

/// Both sides of `𝒟̄² = ∇̄*∇̄ + ℛ` at `p` on the flat chart, with
/// `∇̄_i = ∂_i − ½h_ij γ₀γ_j`, `∇̄*_i = −∇̄_i + h_ij γ_jγ₀` and
/// `ℛ = ½(ρ + J_i γ_iγ₀)` from `(δ, h)`. All derivatives are central differences with `step`.
pub fn verify_weitzenbock(rep: &CliffordRep, h_field: &TensorField, psi: &SpinorField, p: &[f64], step: f64) -> Result<WeitzenbockCheck> {
    let n = rep.n;
    if h_field.dim() != n || p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: if h_field.dim() != n { h_field.dim() } else { p.len() } });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Input(format!("step must be positive, got {step}")));
    }
    let g0: Vec<CMat> = (0..n).map(|j| &rep.gamma[0] * &rep.gamma[j + 1]).collect();
    let gj0: Vec<CMat> = (0..n).map(|j| &rep.gamma[j + 1] * &rep.gamma[0]).collect();
    let h_at = |q: &[f64]| h_field.eval_matrix(q);
    let psi_r = |q: &[f64]| -> Result<Spinor> { Ok(psi.eval(q)) };
    // Φ_i = ∇̄_i ψ
    let phi = |i: usize, q: &[f64]| -> Result<Spinor> {
        let h = h_at(q)?;
        let v = psi.eval(q);
        let mut out = central(psi_r, q, i, step)?;
        for j in 0..n {
            out -= &g0[j] * &v * c(0.5 * h[(i, j)]);
        }
        Ok(out)
    };
    let dirac = |q: &[f64]| -> Result<Spinor> {
        let mut out = Spinor::zeros(rep.dim);
        for i in 0..n {
            out += &rep.gamma[i + 1] * phi(i, q)?;
        }
        Ok(out)
    };
    let h = h_at(p)?;
    let dpsi = dirac(p)?;
    let mut lhs = Spinor::zeros(rep.dim);
    for k in 0..n {
        let mut nab = central(dirac, p, k, step)?;
        for l in 0..n {
            nab -= &g0[l] * &dpsi * c(0.5 * h[(k, l)]);
        }
        lhs += &rep.gamma[k + 1] * nab;
    }
    let mut rhs = Spinor::zeros(rep.dim);
    for i in 0..n {
        let phi_i = phi(i, p)?;
        let mut nab = central(|q: &[f64]| phi(i, q), p, i, step)?;
        for j in 0..n {
            nab -= &g0[j] * &phi_i * c(0.5 * h[(i, j)]);
        }
        rhs -= nab;
        for j in 0..n {
            rhs += &gj0[j] * &phi_i * c(h[(i, j)]);
        }
    }
    let delta = reference_metric(Model::Flat, n);
    let ic = interior_constraints(&delta, h_field, 0.0, p, Some(step))?;
    let v = psi.eval(p);
    let mut r = &v * c(ic.rho);
    for i in 0..n {
        r += &gj0[i] * &v * c(ic.j[i]);
    }
    rhs += r * c(0.5);
    Ok(WeitzenbockCheck { step, residual: max_abs_vec(&(&lhs - &rhs)), lhs_norm: max_abs_vec(&lhs), rho: ic.rho, j: ic.j })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftCheck {
    pub n: usize,
    /// `max_± ‖Σ_i γ_i(±(i/2)γ_i) ± (ni/2)I‖`.
    pub residual: f64,
    /// The same sum compared against the opposite sign, `= n`.
    pub wrong_sign_residual: f64,
}

/// `𝒟̄^± = 𝒟̄ ∓ ni/2` from `∇̄^±_X = ∇̄_X ± (i/2)X·`.
pub fn killing_dirac_shift_check(rep: &CliffordRep) -> ShiftCheck {
    let n = rep.n as f64;
    let id = rep.identity();
    let mut residual = 0.0f64;
    let mut wrong = 0.0f64;
    for sign in [1.0, -1.0] {
        let mut sum = CMat::zeros(rep.dim, rep.dim);
        for i in 1..=rep.n {
            sum += &rep.gamma[i] * (&rep.gamma[i] * (I * c(0.5 * sign)));
        }
        residual = residual.max(max_abs(&(&sum - &id * (I * c(-sign * n / 2.0)))));
        wrong = wrong.max(max_abs(&(&sum - &id * (I * c(sign * n / 2.0)))));
    }
    ShiftCheck { n: rep.n, residual, wrong_sign_residual: wrong }
}
