use serde::{Deserialize, Serialize};

use crate::clifford::operators::hermitian_eigenvalues;
use crate::clifford::rep::{boundary_projector, c, max_abs_vec, CMat, CliffordRep, ProjectorKind, Spinor, I};
use crate::error::{Error, Result};
use crate::geometry::domain::Model;
use crate::mass::MassReport;

#[derive(Debug, Clone, Serialize)]
pub struct KillingCharge {
    /// `V_φ = ⟨φ, φ⟩`.
    pub v: f64,
    /// `W_φ^i = Re⟨γ₀γ_i φ, φ⟩`.
    pub w: Vec<f64>,
    /// `V_φ² − |W_φ|²`.
    pub margin: f64,
    /// When `φ` lies in the requested CHI eigenspace, `|W_φ ∓ V_φ e_n|`.
    pub boundary_deviation: Option<f64>,
}

pub fn killing_charge(rep: &CliffordRep, phi: &Spinor, chi: Option<ProjectorKind>) -> Result<KillingCharge> {
    if phi.len() != rep.dim {
        return Err(Error::DimensionMismatch { expected: rep.dim, got: phi.len() });
    }
    let v = phi.dotc(phi).re;
    let w: Vec<f64> = (1..=rep.n).map(|i| (&rep.gamma[0] * &rep.gamma[i] * phi).dotc(phi).re).collect();
    let margin = v * v - w.iter().map(|x| x * x).sum::<f64>();
    let boundary_deviation = match chi {
        Some(kind @ (ProjectorKind::ChiPlus | ProjectorKind::ChiMinus)) => {
            let p = boundary_projector(rep, kind);
            let scale = phi.norm().max(1e-300);
            if max_abs_vec(&(p.apply(phi) - phi)) > 1e-10 * scale {
                None
            } else {
                let mut dev = w.clone();
                dev[rep.n - 1] -= kind.sign() * v;
                Some(dev.iter().map(|x| x * x).sum::<f64>().sqrt())
            }
        }
        Some(k) => return Err(Error::Input(format!("killing_charge boundary relation needs a CHI projector, got {k:?}"))),
        None => None,
    };
    Ok(KillingCharge { v, w, margin, boundary_deviation })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChargeKind {
    /// `𝔪(V_(a), 0)`.
    Energy,
    /// `𝔪(0, W_(a))`.
    Momentum,
}

/// Killing-spinor parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterSpace {
    ChiPlus,
    ChiMinus,
    Full,
}

impl ParameterSpace {
    pub fn basis(self, rep: &CliffordRep) -> Vec<Spinor> {
        match self {
            ParameterSpace::ChiPlus => boundary_projector(rep, ProjectorKind::ChiPlus).basis(),
            ParameterSpace::ChiMinus => boundary_projector(rep, ProjectorKind::ChiMinus).basis(),
            ParameterSpace::Full => (0..rep.dim).map(|k| Spinor::from_fn(rep.dim, |i, _| c(if i == k { 1.0 } else { 0.0 }))).collect(),
        }
    }
}

/// Hermitian coefficient matrices of the charge map on the parameter space:
/// `V_φ = Σ_a ⟨C_a φ, φ⟩ V_(a)` and `W_φ = Σ_a ⟨D_a φ, φ⟩ W_(a)`, with
/// `C_0 = I`, `C_A = iγ_A`, `D_0 = γ₀γ_n`, `D_A = iγ₀γ_Aγ_n`.
pub fn charge_coefficients(rep: &CliffordRep) -> (Vec<CMat>, Vec<CMat>) {
    let n = rep.n;
    let g = &rep.gamma;
    let mut cs = vec![rep.identity()];
    let mut ds = vec![&g[0] * &g[n]];
    for a in 1..n {
        cs.push(&g[a] * I);
        ds.push(&g[0] * &g[a] * &g[n] * I);
    }
    (cs, ds)
}

#[derive(Debug, Clone, Serialize)]
pub struct KtildeReport {
    pub space: ParameterSpace,
    pub dim: usize,
    /// Row-major `(re, im)` entries.
    pub matrix: Vec<(f64, f64)>,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub psd: bool,
    #[serde(skip)]
    pub hermitian: CMat,
}

/// Matrix of `φ ↦ 𝔪(V_φ, W_φ)` on the chosen parameter space, assembled from
/// `mass_values(a, kind)` for `a = 0..n−1`.
pub fn quadratic_form_ktilde<F>(rep: &CliffordRep, space: ParameterSpace, mass_values: F) -> Result<KtildeReport>
where
    F: Fn(usize, ChargeKind) -> f64,
{
    let (cs, ds) = charge_coefficients(rep);
    let mut full = CMat::zeros(rep.dim, rep.dim);
    let mut scale = 0.0f64;
    for a in 0..rep.n {
        let e = mass_values(a, ChargeKind::Energy);
        let p = mass_values(a, ChargeKind::Momentum);
        if !e.is_finite() || !p.is_finite() {
            return Err(Error::Input(format!("non-finite mass value for index {a}")));
        }
        scale = scale.max(e.abs()).max(p.abs());
        full += &cs[a] * c(e) + &ds[a] * c(p);
    }
    let basis = space.basis(rep);
    let b = CMat::from_columns(&basis);
    let m = b.adjoint() * full * &b;
    let eigenvalues = hermitian_eigenvalues(&m);
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let tolerance = 1e-12 * scale.max(1e-300);
    let matrix = m.transpose().iter().map(|z| (z.re, z.im)).collect();
    Ok(KtildeReport { space, dim: basis.len(), matrix, eigenvalues, min_eigenvalue, tolerance, psd: min_eigenvalue >= -tolerance, hermitian: m })
}

/// `𝒦̃` from the energy and momentum vectors of a hyperbolic mass report.
pub fn ktilde_from_report(rep: &CliffordRep, report: &MassReport, space: ParameterSpace) -> Result<KtildeReport> {
    if report.model == Model::Flat {
        return Err(Error::Input("the Killing-spinor quadratic form needs hyperbolic mass data".into()));
    }
    if report.n != rep.n {
        return Err(Error::DimensionMismatch { expected: rep.n, got: report.n });
    }
    if report.energy.len() != rep.n || report.momentum.len() != rep.n {
        return Err(Error::DimensionMismatch { expected: rep.n, got: report.energy.len().min(report.momentum.len()) });
    }
    quadratic_form_ktilde(rep, space, |a, kind| match kind {
        ChargeKind::Energy => report.energy[a].value,
        ChargeKind::Momentum => report.momentum[a].value,
    })
}
