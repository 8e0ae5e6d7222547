use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reference model of the asymptotic region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Flat,
    HyperbolicPolar,
    HyperbolicBall,
}

impl Model {
    /// Cosmological constant of the vacuum model, `-n(n-1)/2` for the hyperbolic ones.
    pub fn lambda(self, n: usize) -> f64 {
        match self {
            Model::Flat => 0.0,
            _ => -((n * (n - 1)) as f64) / 2.0,
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        !matches!(self, Model::Flat)
    }

    pub fn region(self) -> Region {
        match self {
            Model::HyperbolicBall => Region::HalfBall,
            _ => Region::HalfSpace,
        }
    }
}

/// Coordinate region on which a field may be sampled. The last coordinate is the
/// one normal to the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// `x_n >= 0`.
    HalfSpace,
    /// `|z| < 1, z_n >= 0`.
    HalfBall,
    /// No constraint (used for auxiliary charts such as a Killing development).
    Whole,
}

impl Region {
    pub fn contains(self, p: &[f64]) -> bool {
        let last = *p.last().unwrap_or(&0.0);
        match self {
            Region::Whole => true,
            Region::HalfSpace => last >= 0.0,
            Region::HalfBall => last >= 0.0 && norm(p) < 1.0,
        }
    }

    pub fn check(self, p: &[f64]) -> Result<()> {
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain { point: p.to_vec(), reason: "non-finite coordinate".into() });
        }
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Domain { point: p.to_vec(), reason: format!("outside {:?}", self) })
        }
    }

    /// Whether the normal coordinate is bounded below (one-sided stencils needed there).
    pub fn has_boundary(self) -> bool {
        !matches!(self, Region::Whole)
    }
}

/// Chart on which an initial data set lives: dimension, reference model and the
/// radius beyond which the data are assumed to be defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartDomain {
    pub n: usize,
    pub model: Model,
    pub r0: f64,
}

impl ChartDomain {
    pub fn new(n: usize, model: Model, r0: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Input(format!("dimension must be at least 3, got {n}")));
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Input(format!("exterior radius must be positive, got {r0}")));
        }
        if model == Model::HyperbolicBall && r0 >= 1.0 {
            return Err(Error::Input("ball exterior radius must be below 1".into()));
        }
        Ok(Self { n, model, r0 })
    }

    pub fn region(&self) -> Region {
        self.model.region()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.n && self.region().contains(p) && norm(p) >= self.r0
    }
}

pub fn norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
