use crate::error::{Error, Result};
use crate::geometry::domain::ChartDomain;
use crate::geometry::field::{TensorField, Valence};
use crate::models::reference_metric;

/// Initial data `(g, h)` on the exterior of a chart.
///
/// The metric is stored as `g₀ + f` with `f` held as its own field, so that
/// derivatives of the small perturbation never suffer cancellation against the
/// reference metric.
#[derive(Debug, Clone)]
pub struct InitialDataSet {
    pub domain: ChartDomain,
    pub reference: TensorField,
    pub perturbation: TensorField,
    pub h: TensorField,
    /// Claimed decay exponent (τ for flat, κ for hyperbolic models).
    pub decay: f64,
    pub lambda: f64,
}

impl InitialDataSet {
    pub fn new(domain: ChartDomain, perturbation: TensorField, h: TensorField, decay: f64) -> Result<Self> {
        let n = domain.n;
        for (name, field) in [("f", &perturbation), ("h", &h)] {
            if field.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: field.dim() });
            }
            if field.valence() != Valence::SYM2 {
                return Err(Error::Input(format!("{name} must be a (0,2) tensor field")));
            }
        }
        let region = domain.region();
        Ok(Self {
            domain,
            reference: reference_metric(domain.model, n),
            perturbation: perturbation.with_region(region),
            h: h.with_region(region),
            decay,
            lambda: domain.model.lambda(n),
        })
    }

    /// Build from a full metric `g`; the perturbation is the pointwise difference.
    pub fn from_metric(domain: ChartDomain, g: TensorField, h: TensorField, decay: f64) -> Result<Self> {
        let reference = reference_metric(domain.model, domain.n);
        let f = g.add(&reference.scaled(-1.0))?;
        Self::new(domain, f, h, decay)
    }

    pub fn n(&self) -> usize {
        self.domain.n
    }

    pub fn metric(&self) -> TensorField {
        self.reference.add(&self.perturbation).expect("validated dimensions").with_region(self.domain.region())
    }

    /// Same data with a different second fundamental form.
    pub fn with_h(&self, h: TensorField) -> Self {
        Self { h: h.with_region(self.domain.region()), ..self.clone() }
    }
}
