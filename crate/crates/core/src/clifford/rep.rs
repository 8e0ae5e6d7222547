use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type Spinor = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pauli() -> [CMat; 3] {
    let z = c(0.0);
    let o = c(1.0);
    [
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -I, I, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// `m` Hermitian, pairwise anticommuting matrices squaring to the identity, of
/// size `2^⌊m/2⌋`. Level `k + 1` is built from level `k` as
/// `{A_j ⊗ σ₁} ∪ {Γ ⊗ σ₁, I ⊗ σ₂}` with chirality `I ⊗ σ₃`; an odd count adds
/// the chirality of the last level.
pub fn hermitian_generators(m: usize) -> Vec<CMat> {
    let [s1, s2, s3] = pauli();
    let mut gens: Vec<CMat> = Vec::new();
    let mut gamma = CMat::identity(1, 1);
    for _ in 0..m / 2 {
        let dim = gamma.nrows();
        let mut next: Vec<CMat> = gens.iter().map(|a| a.kronecker(&s1)).collect();
        next.push(gamma.kronecker(&s1));
        next.push(CMat::identity(dim, dim).kronecker(&s2));
        gamma = CMat::identity(dim, dim).kronecker(&s3);
        gens = next;
    }
    if m % 2 == 1 {
        gens.push(gamma);
    }
    gens
}

/// Complex representation of `Cl(n,1)` on `C^N`, `N = 2^⌊(n+1)/2⌋`:
/// `γ₀² = I`, `γ_i² = −I`, `γ₀` Hermitian and `γ_i` anti-Hermitian for the
/// standard form `⟨ψ, φ⟩ = ψ^† φ`.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    pub n: usize,
    pub dim: usize,
    /// `γ₀, γ₁, .., γ_n`.
    pub gamma: Vec<CMat>,
}

impl CliffordRep {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input(format!("Clifford representations need n >= 2, got {n}")));
        }
        let e = hermitian_generators(n + 1);
        let gamma: Vec<CMat> = e.iter().enumerate().map(|(a, m)| if a == 0 { m.clone() } else { m * I }).collect();
        let dim = gamma[0].nrows();
        Ok(Self { n, dim, gamma })
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.dim, self.dim)
    }

    /// `⟨ψ, φ⟩ = ψ^† φ`.
    pub fn inner(&self, psi: &Spinor, phi: &Spinor) -> Complex64 {
        psi.dotc(phi)
    }

    /// `(ψ, φ) = ⟨γ₀ ψ, φ⟩`.
    pub fn indefinite(&self, psi: &Spinor, phi: &Spinor) -> Complex64 {
        (&self.gamma[0] * psi).dotc(phi)
    }

    /// Clifford product `X·` for `X = a₀ e₀ + a_i e_i`.
    pub fn clifford_mul(&self, a: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (g, &x) in self.gamma.iter().zip(a) {
            m += g * c(x);
        }
        m
    }

    /// Largest deviation from `γ_α γ_β + γ_β γ_α = −2 η_αβ I`, `η = diag(−1, 1, .., 1)`.
    pub fn anticommutator_residual(&self) -> f64 {
        let id = self.identity();
        let mut worst = 0.0f64;
        for a in 0..=self.n {
            for b in 0..=self.n {
                let eta = if a != b {
                    0.0
                } else if a == 0 {
                    -1.0
                } else {
                    1.0
                };
                let ac = &self.gamma[a] * &self.gamma[b] + &self.gamma[b] * &self.gamma[a] + &id * c(2.0 * eta);
                worst = worst.max(max_abs(&ac));
            }
        }
        worst
    }

    /// Largest deviation from `γ₀^† = γ₀`, `γ_i^† = −γ_i`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.gamma
            .iter()
            .enumerate()
            .map(|(a, g)| {
                let s = if a == 0 { 1.0 } else { -1.0 };
                max_abs(&(g.adjoint() - g * c(s)))
            })
            .fold(0.0, f64::max)
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &Spinor) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectorKind {
    MitPlus,
    MitMinus,
    ChiPlus,
    ChiMinus,
}

impl ProjectorKind {
    pub const ALL: [ProjectorKind; 4] = [ProjectorKind::MitPlus, ProjectorKind::MitMinus, ProjectorKind::ChiPlus, ProjectorKind::ChiMinus];

    pub fn sign(self) -> f64 {
        match self {
            ProjectorKind::MitPlus | ProjectorKind::ChiPlus => 1.0,
            _ => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            ProjectorKind::MitPlus => ProjectorKind::MitMinus,
            ProjectorKind::MitMinus => ProjectorKind::MitPlus,
            ProjectorKind::ChiPlus => ProjectorKind::ChiMinus,
            ProjectorKind::ChiMinus => ProjectorKind::ChiPlus,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryProjector {
    pub kind: ProjectorKind,
    /// The involution `ω = iγ_n` or `𝒬 = γ₀γ_n`.
    pub involution: CMat,
    pub matrix: CMat,
}

impl BoundaryProjector {
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round() as usize
    }

    /// Orthonormal basis of the range.
    pub fn basis(&self) -> Vec<Spinor> {
        range_basis(&self.matrix)
    }

    pub fn apply(&self, psi: &Spinor) -> Spinor {
        &self.matrix * psi
    }
}

/// Orthonormal basis of the range of an orthogonal projector (modified Gram–Schmidt on its columns).
pub fn range_basis(p: &CMat) -> Vec<Spinor> {
    let mut out: Vec<Spinor> = Vec::new();
    for j in 0..p.ncols() {
        let mut v: Spinor = p.column(j).into_owned();
        for b in &out {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let nv = v.norm();
        if nv > 1e-8 {
            out.push(v / c(nv));
        }
    }
    out
}

/// `MIT± = (I ± iγ_n)/2`, `CHI± = (I ± γ₀γ_n)/2`.
pub fn boundary_projector(rep: &CliffordRep, kind: ProjectorKind) -> BoundaryProjector {
    let n = rep.n;
    let involution = match kind {
        ProjectorKind::MitPlus | ProjectorKind::MitMinus => &rep.gamma[n] * I,
        ProjectorKind::ChiPlus | ProjectorKind::ChiMinus => &rep.gamma[0] * &rep.gamma[n],
    };
    let matrix = (rep.identity() + &involution * c(kind.sign())) * c(0.5);
    BoundaryProjector { kind, involution, matrix }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorCheck {
    pub kind: ProjectorKind,
    pub idempotency: f64,
    pub involution: f64,
    pub hermiticity: f64,
    pub rank: usize,
    /// `‖P_+ + P_− − I‖` and `‖P_+ P_−‖`.
    pub complement: f64,
    pub annihilation: f64,
}

pub fn projector_check(rep: &CliffordRep, kind: ProjectorKind) -> ProjectorCheck {
    let p = boundary_projector(rep, kind);
    let q = boundary_projector(rep, kind.opposite());
    let id = rep.identity();
    ProjectorCheck {
        kind,
        idempotency: max_abs(&(&p.matrix * &p.matrix - &p.matrix)),
        involution: max_abs(&(&p.involution * &p.involution - &id)),
        hermiticity: max_abs(&(p.involution.adjoint() - &p.involution)),
        rank: p.rank(),
        complement: max_abs(&(&p.matrix + &q.matrix - &id)),
        annihilation: max_abs(&(&p.matrix * &q.matrix)),
    }
}
