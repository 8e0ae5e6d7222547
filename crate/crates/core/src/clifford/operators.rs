use nalgebra::linalg::SymmetricEigen;

use crate::clifford::rep::{boundary_projector, c, max_abs, CMat, CliffordRep, ProjectorKind, Spinor, I};
use crate::error::{Error, Result};

/// Hermitian operator with its eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    pub matrix: CMat,
    pub eigenvalues: Vec<f64>,
}

impl SpectralOperator {
    pub fn from_matrix(matrix: CMat) -> Self {
        let eigenvalues = hermitian_eigenvalues(&matrix);
        Self { matrix, eigenvalues }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Distinct eigenvalues (clustered within `tol`) with multiplicities.
    pub fn distinct(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &l in &self.eigenvalues {
            match out.last_mut() {
                Some((v, m)) if (l - *v).abs() <= tol => *m += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Largest deviation of the sorted spectrum from `expected` (any order).
    pub fn spectrum_deviation(&self, expected: &[f64]) -> f64 {
        if expected.len() != self.eigenvalues.len() {
            return f64::INFINITY;
        }
        let mut e = expected.to_vec();
        e.sort_by(f64::total_cmp);
        e.iter().zip(&self.eigenvalues).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()) * c(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn check_len(what: &str, v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::Input(format!("{what}: expected {expected} components, got {}", v.len())));
    }
    Ok(())
}

/// `½(ρ I + J_i γ_i γ₀)`.
fn half_rho_j(rep: &CliffordRep, rho: f64, j: &[f64]) -> CMat {
    let mut m = rep.identity() * c(rho);
    for (i, &ji) in j.iter().enumerate() {
        m += &rep.gamma[i + 1] * &rep.gamma[0] * c(ji);
    }
    m * c(0.5)
}

/// Interior curvature endomorphism `ℛ = ½(ρ + J_i γ_i γ₀)`, spectrum `½(ρ ± |J|)`.
pub fn operator_r(rep: &CliffordRep, rho: f64, j: &[f64]) -> Result<SpectralOperator> {
    check_len("J", j, rep.n)?;
    Ok(SpectralOperator::from_matrix(half_rho_j(rep, rho, j)))
}

/// Boundary endomorphism `𝒰 = π_{An} γ₀ γ_A`, spectrum `±|π^↓|`.
pub fn operator_u(rep: &CliffordRep, pi_tangential: &[f64]) -> Result<SpectralOperator> {
    check_len("π_An", pi_tangential, rep.n - 1)?;
    Ok(SpectralOperator::from_matrix(tangential_gamma0(rep, pi_tangential)))
}

/// `𝒲` in the reduced form `½(ρ_{Λ_n} + J_i γ_i γ₀)`.
pub fn operator_w(rep: &CliffordRep, rho_lambda: f64, j: &[f64]) -> Result<SpectralOperator> {
    check_len("J", j, rep.n)?;
    Ok(SpectralOperator::from_matrix(half_rho_j(rep, rho_lambda, j)))
}

fn tangential_gamma0(rep: &CliffordRep, v: &[f64]) -> CMat {
    let mut m = CMat::zeros(rep.dim, rep.dim);
    for (a, &x) in v.iter().enumerate() {
        m += &rep.gamma[0] * &rep.gamma[a + 1] * c(x);
    }
    m
}

/// `H + 𝒰`, positive semidefinite iff `H ≥ |π^↓|`.
pub fn boundary_operator(rep: &CliffordRep, mean_curvature: f64, pi_tangential: &[f64]) -> Result<SpectralOperator> {
    let u = operator_u(rep, pi_tangential)?;
    Ok(SpectralOperator::from_matrix(rep.identity() * c(mean_curvature) + u.matrix))
}

#[derive(Debug, Clone)]
pub struct TOperator {
    pub op: SpectralOperator,
    /// `‖[𝒯, iγ_n]‖`.
    pub commutator: f64,
    /// Simultaneous eigenvectors `(φ, 𝒯 eigenvalue, iγ_n eigenvalue)`.
    pub eigenbasis: Vec<(Spinor, f64, f64)>,
}

impl TOperator {
    /// A unit spinor with `𝒯φ = |P|φ` and `iγ_n φ = sign·φ`.
    pub fn top_eigenvector(&self, sign: f64) -> Option<&Spinor> {
        self.eigenbasis
            .iter()
            .filter(|(_, _, s)| (s - sign).abs() < 0.5)
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(v, _, _)| v)
    }
}

/// `𝒯 = P_A γ₀ γ_A` with a basis diagonalizing `𝒯` and `iγ_n` together.
pub fn operator_t(rep: &CliffordRep, p: &[f64]) -> Result<TOperator> {
    check_len("P", p, rep.n - 1)?;
    let t = tangential_gamma0(rep, p);
    let omega = &rep.gamma[rep.n] * I;
    let commutator = max_abs(&(&t * &omega - &omega * &t));
    let mut eigenbasis = Vec::with_capacity(rep.dim);
    for kind in [ProjectorKind::MitPlus, ProjectorKind::MitMinus] {
        let proj = boundary_projector(rep, kind);
        let basis = proj.basis();
        let b = CMat::from_columns(&basis);
        let restricted = b.adjoint() * &t * &b;
        let herm = (&restricted + restricted.adjoint()) * c(0.5);
        let eig = SymmetricEigen::new(herm);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v: Spinor = &b * eig.eigenvectors.column(k);
            eigenbasis.push((v, lambda, kind.sign()));
        }
    }
    eigenbasis.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.1.total_cmp(&b.1)));
    Ok(TOperator { op: SpectralOperator::from_matrix(t), commutator, eigenbasis })
}

/// Closed-form spectrum `centre ± radius`, each with multiplicity `N/2`.
pub fn paired_spectrum(dim: usize, centre: f64, radius: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|k| if k < dim / 2 { centre - radius } else { centre + radius }).collect();
    v.sort_by(f64::total_cmp);
    v
}
