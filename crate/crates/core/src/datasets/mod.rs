//! Built-in example data sets and their JSON descriptors.

pub mod grid;
pub mod profiles;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::domain::{dot, ChartDomain, Model, Region};
use crate::geometry::fd::{gradient, hessian};
use crate::geometry::field::{TensorField, Valence};
use crate::geometry::InitialDataSet;
use crate::models::{polar_data_to_ball, reference_metric};
use profiles::{conformal_bump, radial_sym2, Bump};

pub use grid::{load_grid, GridHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Example {
    FlatTrivial,
    Schwarzschild,
    BowenYork,
    ConformalBump,
    HyperbolicTrivial,
    AdsSchwarzschild,
    GaugePerturbation,
    CustomGrid,
}

impl Example {
    pub const ALL: [Example; 8] = [
        Example::FlatTrivial,
        Example::Schwarzschild,
        Example::BowenYork,
        Example::ConformalBump,
        Example::HyperbolicTrivial,
        Example::AdsSchwarzschild,
        Example::GaugePerturbation,
        Example::CustomGrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::FlatTrivial => "flat-trivial",
            Example::Schwarzschild => "schwarzschild",
            Example::BowenYork => "bowen-york",
            Example::ConformalBump => "conformal-bump",
            Example::HyperbolicTrivial => "hyperbolic-trivial",
            Example::AdsSchwarzschild => "ads-schwarzschild",
            Example::GaugePerturbation => "gauge-perturbation",
            Example::CustomGrid => "custom-grid",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub example: Example,
    pub n: usize,
    pub model: Model,
    #[serde(default)]
    pub params: Params,
    pub r0: f64,
    pub decay: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_file: Option<PathBuf>,
}

impl DatasetDescriptor {
    /// Descriptor with the default parameters of an example.
    pub fn example(example: Example, n: usize) -> Self {
        let nf = n as f64;
        let (model, params, r0, decay) = match example {
            Example::FlatTrivial => (Model::Flat, Params::default(), 1.0, nf - 2.0),
            Example::Schwarzschild => (Model::Flat, Params { mass: Some(1.0), ..Params::default() }, 1.0, nf - 2.0),
            Example::BowenYork => {
                let mut p = vec![0.0; n];
                p[0] = 0.1;
                (Model::Flat, Params { momentum: Some(p), ..Params::default() }, 1.0, nf - 2.0)
            }
            Example::ConformalBump => {
                let mut c = vec![0.0; n];
                c[n - 1] = 2.0;
                (Model::Flat, Params { amplitude: Some(0.1), center: Some(c), width: Some(1.5), ..Params::default() }, 1.0, nf - 2.0)
            }
            Example::HyperbolicTrivial => (Model::HyperbolicPolar, Params::default(), 1.0, nf),
            Example::AdsSchwarzschild => (Model::HyperbolicPolar, Params { mass: Some(0.1), ..Params::default() }, 1.0, nf),
            Example::GaugePerturbation => {
                (Model::HyperbolicPolar, Params { amplitude: Some(0.1), width: Some(1.5), ..Params::default() }, 1.0, nf - 1.0)
            }
            Example::CustomGrid => (Model::Flat, Params::default(), 1.0, nf - 2.0),
        };
        Self { example, n, model, params, r0, decay, grid_file: None }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Input(m));
        let n = self.n;
        if n < 3 {
            return bad(format!("dimension {n} is below 3"));
        }
        ChartDomain::new(n, self.model, self.r0)?;
        if !self.decay.is_finite() {
            return bad("decay exponent must be finite".into());
        }
        if let Some(m) = self.params.mass {
            if !(m >= 0.0) || !m.is_finite() {
                return bad(format!("mass must be non-negative, got {m}"));
            }
        }
        for (name, v) in [("momentum", &self.params.momentum), ("center", &self.params.center)] {
            if let Some(v) = v {
                if v.len() != n || v.iter().any(|x| !x.is_finite()) {
                    return bad(format!("{name} must have {n} finite components"));
                }
            }
        }
        if let Some(w) = self.params.width {
            if !(w > 0.0) {
                return bad(format!("width must be positive, got {w}"));
            }
        }
        if (self.example == Example::CustomGrid) != self.grid_file.is_some() {
            return bad("a grid file is required exactly for the custom-grid example".into());
        }
        let flat_only = matches!(self.example, Example::FlatTrivial | Example::Schwarzschild | Example::BowenYork | Example::ConformalBump);
        if flat_only && self.model != Model::Flat {
            return bad(format!("{} is a flat-model example", self.example.name()));
        }
        let hyperbolic_only = matches!(self.example, Example::HyperbolicTrivial | Example::AdsSchwarzschild | Example::GaugePerturbation);
        if hyperbolic_only && !self.model.is_hyperbolic() {
            return bad(format!("{} is a hyperbolic-model example", self.example.name()));
        }
        if self.example == Example::Schwarzschild && n < 3 {
            return bad("schwarzschild needs n >= 3".into());
        }
        if self.example == Example::BowenYork && n != 3 {
            return bad("bowen-york is defined for n = 3".into());
        }
        if self.example == Example::AdsSchwarzschild && n < 3 {
            return bad("ads-schwarzschild needs n >= 3".into());
        }
        if self.example == Example::AdsSchwarzschild {
            let m = self.params.mass.unwrap_or(0.0);
            let r = self.r0;
            if 1.0 + r * r - 2.0 * m * r.powf(2.0 - n as f64) <= 0.0 {
                return bad("exterior radius lies inside the horizon".into());
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<ChartDomain> {
        ChartDomain::new(self.n, self.model, self.r0)
    }

    /// Build the data set. Relative grid paths resolve against `base`.
    pub fn build_in(&self, base: Option<&Path>) -> Result<InitialDataSet> {
        self.validate()?;
        let domain = self.domain()?;
        let n = self.n;
        let region = domain.region();
        let p = &self.params;
        let zero = || TensorField::zero(n, Valence::SYM2);
        let polar_only = matches!(self.example, Example::AdsSchwarzschild | Example::GaugePerturbation);
        if polar_only && self.model == Model::HyperbolicBall {
            let r = self.r0;
            let polar = Self { model: Model::HyperbolicPolar, r0: 2.0 * r / (1.0 - r * r), ..self.clone() };
            return polar_data_to_ball(&polar.build_in(base)?, r);
        }
        match self.example {
            Example::FlatTrivial | Example::HyperbolicTrivial => InitialDataSet::new(domain, zero(), zero(), self.decay),
            Example::Schwarzschild => {
                InitialDataSet::new(domain, schwarzschild_perturbation(n, p.mass.unwrap_or(1.0), region), zero(), self.decay)
            }
            Example::BowenYork => {
                let mom = p.momentum.clone().unwrap_or_else(|| vec![0.1, 0.0, 0.0]);
                InitialDataSet::new(domain, zero(), bowen_york(mom, region), self.decay)
            }
            Example::ConformalBump => {
                let center = p.center.clone().unwrap_or_else(|| {
                    let mut c = vec![0.0; n];
                    c[n - 1] = 2.0;
                    c
                });
                let bump = Bump { center, radius: p.width.unwrap_or(1.5) };
                InitialDataSet::new(domain, conformal_bump(n, p.amplitude.unwrap_or(0.1), bump, region), zero(), self.decay)
            }
            Example::AdsSchwarzschild => {
                InitialDataSet::new(domain, ads_schwarzschild_perturbation(n, p.mass.unwrap_or(0.1)), zero(), self.decay)
            }
            Example::GaugePerturbation => {
                let zeta = gauge_vector(n, p.amplitude.unwrap_or(0.1), p.width.unwrap_or(1.5));
                InitialDataSet::new(domain, lie_derivative_exact(&reference_metric(self.model, n), &zeta), zero(), self.decay)
            }
            Example::CustomGrid => {
                let path = self.grid_file.as_ref().expect("validated");
                let path = match base {
                    Some(b) if path.is_relative() => b.join(path),
                    _ => path.clone(),
                };
                load_grid(&path, self)
            }
        }
    }

    pub fn build(&self) -> Result<InitialDataSet> {
        self.build_in(None)
    }

    /// Human-readable closed forms of the example.
    pub fn closed_form(&self) -> ClosedForm {
        let (metric, h) = match self.example {
            Example::FlatTrivial => ("g = δ", "h = 0"),
            Example::Schwarzschild => ("g = (1 + m/(2 r^{n-2}))^{4/(n-2)} δ", "h = 0"),
            Example::BowenYork => ("g = δ", "h_ij = 3/(2 r²) (p_i ν_j + p_j ν_i − (δ_ij − ν_i ν_j) p·ν), ν = x/r"),
            Example::ConformalBump => ("g = (1 + A exp(−1/(1 − |x − c|²/w²))) δ, bump supported in |x − c| < w", "h = 0"),
            Example::HyperbolicTrivial => ("g = b", "h = 0"),
            Example::AdsSchwarzschild => ("g = dr²/(1 + r² − 2m r^{2-n}) + r² dΩ², polar chart", "h = 0"),
            Example::GaugePerturbation => ("g = b + ℒ_ζ b, ζ = A (1 + r²)^{-n/2} ((1 + y_n) ∂_1 + y_n ∂_n) + A β ∂_2, β a bump of width w", "h = 0"),
            Example::CustomGrid => ("g sampled on a grid, multilinear interpolation", "h sampled on the same grid"),
        };
        ClosedForm { metric: metric.into(), h: h.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub metric: String,
    pub h: String,
}

/// Canonical dataset file: the descriptor plus a description of the fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub format: String,
    pub descriptor: DatasetDescriptor,
    pub closed_form: ClosedForm,
}

pub const DATASET_FORMAT: &str = "ncb-dataset/1";

impl DatasetFile {
    pub fn new(descriptor: DatasetDescriptor) -> Result<Self> {
        descriptor.validate()?;
        if let Some(path) = &descriptor.grid_file {
            GridHeader::read(path)?.check(&descriptor)?;
        }
        let closed_form = descriptor.closed_form();
        Ok(Self { format: DATASET_FORMAT.into(), descriptor, closed_form })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset files serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(s)?;
        if file.format != DATASET_FORMAT {
            return Err(Error::Input(format!("unknown dataset format {:?}", file.format)));
        }
        file.descriptor.validate()?;
        Ok(file)
    }
}

/// Read a dataset document: either a full dataset file or a bare descriptor.
pub fn read_descriptor(path: &Path) -> Result<DatasetDescriptor> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("format").is_some() {
        Ok(DatasetFile::from_json(&text)?.descriptor)
    } else {
        let d: DatasetDescriptor = serde_json::from_value(value)?;
        d.validate()?;
        Ok(d)
    }
}

/// `(u^{4/(n-2)} − 1) δ` with `u = 1 + m/(2 r^{n-2})`.
pub fn schwarzschild_perturbation(n: usize, m: f64, region: Region) -> TensorField {
    let k = n as f64 - 2.0;
    let q = 4.0 / k;
    radial_sym2(n, region, move |r| {
        let a = m / (2.0 * r.powf(k));
        let u = 1.0 + a;
        let du = -k * a / r;
        let ddu = k * (k + 1.0) * a / (r * r);
        let chi = (q * a.ln_1p()).exp_m1();
        let dchi = q * u.powf(q - 1.0) * du;
        let ddchi = q * (q - 1.0) * u.powf(q - 2.0) * du * du + q * u.powf(q - 1.0) * ddu;
        [0.0, 0.0, 0.0, chi, dchi, ddchi]
    })
}

/// AdS–Schwarzschild minus the hyperbolic metric in the polar chart:
/// `f = φ(r) dr²`, `φ = 2m r^{2−n} / ((1 + r²)(1 + r² − 2m r^{2−n}))`.
pub fn ads_schwarzschild_perturbation(n: usize, m: f64) -> TensorField {
    let nf = n as f64;
    radial_sym2(n, Region::HalfSpace, move |r| {
        // f_ij = ψ y_i y_j with ψ = φ / r² = 2m r^{-n} / (A B)
        let a = 1.0 + r * r;
        let c = 2.0 * m * r.powf(2.0 - nf);
        let b = a - c;
        let db = 2.0 * r + (nf - 2.0) * c / r;
        let ddb = 2.0 - (nf - 2.0) * (nf - 1.0) * c / (r * r);
        let psi = c / (r * r * a * b);
        let l = -nf / r - 2.0 * r / a - db / b;
        let dl = nf / (r * r) - (2.0 * a - 4.0 * r * r) / (a * a) - (ddb * b - db * db) / (b * b);
        [psi, psi * l, psi * (l * l + dl), 0.0, 0.0, 0.0]
    })
}

/// Bowen–York extrinsic curvature of linear momentum `p` on flat space.
pub fn bowen_york(p: Vec<f64>, region: Region) -> TensorField {
    let n = p.len();
    TensorField::new(n, Valence::SYM2, move |x| {
        let r2 = dot(x, x);
        let r = r2.sqrt();
        let nu: Vec<f64> = x.iter().map(|v| v / r).collect();
        let pn = dot(&p, &nu);
        let c = 1.5 / r2;
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { 1.0 } else { 0.0 };
                h[i * n + j] = c * (p[i] * nu[j] + p[j] * nu[i] - (d - nu[i] * nu[j]) * pn);
            }
        }
        h
    })
    .with_region(region)
}

/// `ζ = A (1 + r²)^{-n/2} ((1 + y_n) ∂_1 + y_n ∂_n) + A β ∂_2` (β a bump
/// straddling the boundary), tangent to the boundary, with exact derivatives.
pub fn gauge_vector(n: usize, amplitude: f64, width: f64) -> TensorField {
    let mut center = vec![0.0; n];
    center[n - 1] = 0.5;
    let bump = Bump { center, radius: width };
    let second = if n >= 3 { Some(1) } else { None };
    // components (c + y_n) q with q = (1 + r²)^{-n/2}: c = 1 for ∂_1, c = 0 for ∂_n
    let a = n as f64 / 2.0;
    let jet = move |y: &[f64]| {
        let w = 1.0 + dot(y, y);
        let q = w.powf(-a);
        let dq: Vec<f64> = y.iter().map(|yk| -2.0 * a * yk * w.powf(-a - 1.0)).collect();
        let mut ddq = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                ddq[k * n + l] = -2.0 * a * kd(k, l) * w.powf(-a - 1.0) + 4.0 * a * (a + 1.0) * y[k] * y[l] * w.powf(-a - 2.0);
            }
        }
        (q, dq, ddq)
    };
    let comps = [(0usize, 1.0), (n - 1, 0.0)];
    let (b1, b2, b3) = (bump.clone(), bump.clone(), bump);
    TensorField::new(n, Valence::VECTOR, move |y| {
        let (q, _, _) = jet(y);
        let mut v = vec![0.0; n];
        for (i, c) in comps {
            v[i] += amplitude * (c + y[n - 1]) * q;
        }
        if let Some(s) = second {
            v[s] += amplitude * b1.jet(y).0;
        }
        v
    })
    .with_d_eval(move |y| {
        let (q, dq, _) = jet(y);
        let (_, g, _) = b2.jet(y);
        let mut d = vec![0.0; n * n];
        for k in 0..n {
            for (i, c) in comps {
                d[k * n + i] += amplitude * (kd(k, n - 1) * q + (c + y[n - 1]) * dq[k]);
            }
            if let Some(s) = second {
                d[k * n + s] += amplitude * g[k];
            }
        }
        d
    })
    .with_dd_eval(move |y| {
        let (_, dq, ddq) = jet(y);
        let (_, _, hs) = b3.jet(y);
        let mut dd = vec![0.0; n * n * n];
        for k in 0..n {
            for l in 0..n {
                let kl = k * n + l;
                for (i, c) in comps {
                    dd[kl * n + i] += amplitude * (kd(k, n - 1) * dq[l] + kd(l, n - 1) * dq[k] + (c + y[n - 1]) * ddq[kl]);
                }
                if let Some(s) = second {
                    dd[kl * n + s] += amplitude * hs[kl];
                }
            }
        }
        dd
    })
    .with_region(Region::HalfSpace)
}

fn kd(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// `ℒ_ζ g` with an exact first derivative, for `g` and `ζ` carrying exact
/// first and second derivatives.
pub fn lie_derivative_exact(g: &TensorField, zeta: &TensorField) -> TensorField {
    let n = g.dim();
    let region = g.region();
    let (g1, z1, g2, z2) = (g.clone(), zeta.clone(), g.clone(), zeta.clone());
    TensorField::from_fn(n, Valence::SYM2, move |p| {
        let gv = g1.eval(p)?;
        let dg = gradient(&g1, p, None)?;
        let z = z1.eval(p)?;
        let dz = gradient(&z1, p, None)?;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += z[k] * dg[k * n * n + i * n + j] + gv[k * n + j] * dz[i * n + k] + gv[i * n + k] * dz[j * n + k];
                }
                out[i * n + j] = s;
            }
        }
        Ok(out)
    })
    .with_d_fn(move |p| {
        let gv = g2.eval(p)?;
        let dg = gradient(&g2, p, None)?;
        let ddg = hessian(&g2, p, None)?;
        let z = z2.eval(p)?;
        let dz = gradient(&z2, p, None)?;
        let ddz = hessian(&z2, p, None)?;
        let mut out = vec![0.0; n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += dz[l * n + k] * dg[k * n * n + i * n + j]
                            + z[k] * ddg[(l * n + k) * n * n + i * n + j]
                            + dg[l * n * n + k * n + j] * dz[i * n + k]
                            + gv[k * n + j] * ddz[(l * n + i) * n + k]
                            + dg[l * n * n + i * n + k] * dz[j * n + k]
                            + gv[i * n + k] * ddz[(l * n + j) * n + k];
                    }
                    out[l * n * n + i * n + j] = s;
                }
            }
        }
        Ok(out)
    })
    .with_region(region)
}
