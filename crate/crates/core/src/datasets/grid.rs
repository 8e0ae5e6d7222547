//! Sampled data on a regular grid: a JSON header plus a little-endian `f64`
//! raw file holding, per grid point and in row-major point order (last axis
//! fastest), the components of each listed field back to back.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::datasets::DatasetDescriptor;
use crate::error::{Error, Result};
use crate::geometry::field::{TensorField, Valence};
use crate::geometry::InitialDataSet;
use crate::models::reference_metric;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub dims: Vec<usize>,
    pub spacing: Vec<f64>,
    pub origin: Vec<f64>,
    /// Field names in storage order: `g` (full metric) or `f` (perturbation), optionally `h`.
    pub fields: Vec<String>,
    /// Raw file, relative to the header; defaults to the header path with extension `bin`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    #[serde(skip)]
    pub path: PathBuf,
}

impl GridHeader {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut h: GridHeader = serde_json::from_str(&text).map_err(|e| Error::Input(format!("grid header {}: {e}", path.display())))?;
        h.path = path.to_path_buf();
        Ok(h)
    }

    pub fn data_path(&self) -> PathBuf {
        match &self.data {
            Some(d) if d.is_relative() => self.path.parent().unwrap_or(Path::new(".")).join(d),
            Some(d) => d.clone(),
            None => self.path.with_extension("bin"),
        }
    }

    pub fn points(&self) -> usize {
        self.dims.iter().product()
    }

    /// Check the header against the descriptor and the raw file size.
    pub fn check(&self, desc: &DatasetDescriptor) -> Result<()> {
        let n = desc.n;
        let bad = |m: String| Err(Error::Input(format!("grid header {}: {m}", self.path.display())));
        for (name, len) in [("dims", self.dims.len()), ("spacing", self.spacing.len()), ("origin", self.origin.len())] {
            if len != n {
                return bad(format!("{name} has {len} entries, expected {n}"));
            }
        }
        if self.dims.iter().any(|&d| d < 2) {
            return bad("every axis needs at least two samples".into());
        }
        if self.spacing.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return bad("spacing must be positive".into());
        }
        let metric_fields = self.fields.iter().filter(|f| *f == "g" || *f == "f").count();
        if metric_fields != 1 || self.fields.iter().any(|f| !matches!(f.as_str(), "g" | "f" | "h")) {
            return bad(format!("fields must be one of g/f plus optionally h, got {:?}", self.fields));
        }
        if self.fields.iter().filter(|f| *f == "h").count() > 1 {
            return bad("field h listed twice".into());
        }
        let expected = (self.points() * self.fields.len() * n * n * 8) as u64;
        let path = self.data_path();
        if let Ok(meta) = std::fs::metadata(&path) {
            if meta.len() != expected {
                return bad(format!("raw file {} has {} bytes, expected {expected}", path.display(), meta.len()));
            }
        }
        Ok(())
    }
}

struct Grid {
    dims: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
    stride: usize,
    values: Vec<f64>,
}

impl Grid {
    /// Multilinear interpolation of components `offset..offset + count`.
    fn interpolate(&self, p: &[f64], offset: usize, count: usize) -> Result<Vec<f64>> {
        let n = self.dims.len();
        let mut base = vec![0usize; n];
        let mut frac = vec![0.0; n];
        for k in 0..n {
            let t = (p[k] - self.origin[k]) / self.spacing[k];
            let top = (self.dims[k] - 1) as f64;
            let eps = 1e-9;
            let t = if k == n - 1 && t < 0.0 {
                0.0
            } else if t < -eps || t > top + eps {
                return Err(Error::Domain { point: p.to_vec(), reason: "outside the sampled grid".into() });
            } else {
                t.clamp(0.0, top)
            };
            let i = (t.floor() as usize).min(self.dims[k] - 2);
            base[k] = i;
            frac[k] = t - i as f64;
        }
        let mut out = vec![0.0; count];
        for corner in 0..(1usize << n) {
            let mut w = 1.0;
            let mut idx = 0;
            for k in 0..n {
                let bit = (corner >> k) & 1;
                w *= if bit == 1 { frac[k] } else { 1.0 - frac[k] };
                idx = idx * self.dims[k] + base[k] + bit;
            }
            if w == 0.0 {
                continue;
            }
            let start = idx * self.stride + offset;
            for (o, v) in out.iter_mut().zip(&self.values[start..start + count]) {
                *o += w * v;
            }
        }
        Ok(out)
    }
}

/// Load a custom grid data set described by `desc`, whose grid file is `header_path`.
pub fn load_grid(header_path: &Path, desc: &DatasetDescriptor) -> Result<InitialDataSet> {
    let header = GridHeader::read(header_path)?;
    header.check(desc)?;
    let n = desc.n;
    let path = header.data_path();
    let bytes = std::fs::read(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let stride = header.fields.len() * n * n;
    if bytes.len() != header.points() * stride * 8 {
        return Err(Error::Input(format!("raw file {} has {} bytes, expected {}", path.display(), bytes.len(), header.points() * stride * 8)));
    }
    let values: Vec<f64> = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input(format!("raw file {} contains non-finite values", path.display())));
    }
    let grid = Arc::new(Grid { dims: header.dims.clone(), spacing: header.spacing.clone(), origin: header.origin.clone(), stride, values });
    let field = |name: &str| -> Option<TensorField> {
        let pos = header.fields.iter().position(|f| f == name)?;
        let g = grid.clone();
        Some(TensorField::from_fn(n, Valence::SYM2, move |p| g.interpolate(p, pos * n * n, n * n)))
    };
    let domain = desc.domain()?;
    let h = field("h").unwrap_or_else(|| TensorField::zero(n, Valence::SYM2));
    let f = match field("f") {
        Some(f) => f,
        None => {
            let g = field("g").expect("checked header");
            g.add(&reference_metric(desc.model, n).scaled(-1.0))?
        }
    };
    InitialDataSet::new(domain, f, h, desc.decay)
}
