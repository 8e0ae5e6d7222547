//! Tensor fields on a coordinate chart.
//!
//! A field is a closure returning a flat, row-major component array. Covariant
//! indices come first, then contravariant ones. Optional closures give exact
//! first and second partial derivatives; when absent the finite difference
//! engine in [`crate::geometry::fd`] is used instead.
//!
//! Derivative arrays are laid out with the derivative indices outermost:
//! `d[k * ncomp + c]` and `dd[(k * n + l) * ncomp + c]`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::domain::Region;

pub type EvalFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valence {
    pub covariant: usize,
    pub contravariant: usize,
}

impl Valence {
    pub const SCALAR: Valence = Valence { covariant: 0, contravariant: 0 };
    pub const VECTOR: Valence = Valence { covariant: 0, contravariant: 1 };
    pub const COVECTOR: Valence = Valence { covariant: 1, contravariant: 0 };
    pub const SYM2: Valence = Valence { covariant: 2, contravariant: 0 };

    pub fn rank(self) -> usize {
        self.covariant + self.contravariant
    }
}

#[derive(Clone)]
enum Repr {
    Closure { eval: EvalFn, d_eval: Option<EvalFn>, dd_eval: Option<EvalFn> },
    Sum(Vec<TensorField>),
    Scaled(f64, Box<TensorField>),
}

#[derive(Clone)]
pub struct TensorField {
    n: usize,
    valence: Valence,
    region: Region,
    repr: Repr,
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorField")
            .field("n", &self.n)
            .field("valence", &self.valence)
            .field("region", &self.region)
            .finish_non_exhaustive()
    }
}

fn check_finite(p: &[f64], v: Vec<f64>) -> Result<Vec<f64>> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(Error::Eval { point: p.to_vec(), reason: "non-finite component".into() })
    }
}

impl TensorField {
    /// Field from a fallible closure.
    pub fn from_fn<F>(n: usize, valence: Valence, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        Self {
            n,
            valence,
            region: Region::HalfSpace,
            repr: Repr::Closure { eval: Arc::new(f), d_eval: None, dd_eval: None },
        }
    }

    /// Field from an infallible closure.
    pub fn new<F>(n: usize, valence: Valence, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::from_fn(n, valence, move |p| Ok(f(p)))
    }

    pub fn scalar<F>(n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(n, Valence::SCALAR, move |p| vec![f(p)])
    }

    /// Symmetric (0,2) field from a closure returning an `n x n` matrix.
    pub fn sym2<F>(n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        Self::new(n, Valence::SYM2, move |p| row_major(&f(p)))
    }

    pub fn constant(n: usize, valence: Valence, values: Vec<f64>) -> Self {
        let nc = values.len();
        let v1 = values.clone();
        Self::new(n, valence, move |_| v1.clone())
            .with_d_eval(move |_| vec![0.0; n * nc])
            .with_dd_eval(move |_| vec![0.0; n * n * nc])
    }

    pub fn zero(n: usize, valence: Valence) -> Self {
        Self::constant(n, valence, vec![0.0; n.pow(valence.rank() as u32)])
    }

    pub fn with_d_eval<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if let Repr::Closure { d_eval, .. } = &mut self.repr {
            *d_eval = Some(Arc::new(move |p| Ok(f(p))));
        }
        self
    }

    /// Exact first derivatives from a fallible closure.
    pub fn with_d_fn<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        if let Repr::Closure { d_eval, .. } = &mut self.repr {
            *d_eval = Some(Arc::new(f));
        }
        self
    }

    pub fn with_dd_eval<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if let Repr::Closure { dd_eval, .. } = &mut self.repr {
            *dd_eval = Some(Arc::new(move |p| Ok(f(p))));
        }
        self
    }

    /// Exact second derivatives from a fallible closure.
    pub fn with_dd_fn<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        if let Repr::Closure { dd_eval, .. } = &mut self.repr {
            *dd_eval = Some(Arc::new(f));
        }
        self
    }

    pub fn with_region(mut self, region: Region) -> Self {
        self.region = region;
        if let Repr::Sum(parts) = &mut self.repr {
            for part in parts {
                *part = part.clone().with_region(region);
            }
        } else if let Repr::Scaled(_, inner) = &mut self.repr {
            **inner = inner.as_ref().clone().with_region(region);
        }
        self
    }

    pub fn add(&self, other: &TensorField) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.valence != other.valence {
            return Err(Error::Input("cannot add fields of different valence".into()));
        }
        Ok(Self {
            n: self.n,
            valence: self.valence,
            region: self.region,
            repr: Repr::Sum(vec![self.clone(), other.clone()]),
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, valence: self.valence, region: self.region, repr: Repr::Scaled(c, Box::new(self.clone())) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn ncomp(&self) -> usize {
        self.n.pow(self.valence.rank() as u32)
    }

    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: p.len() });
        }
        match &self.repr {
            Repr::Closure { eval, .. } => {
                let v = eval(p)?;
                if v.len() != self.ncomp() {
                    return Err(Error::Eval {
                        point: p.to_vec(),
                        reason: format!("closure returned {} components, expected {}", v.len(), self.ncomp()),
                    });
                }
                check_finite(p, v)
            }
            Repr::Sum(parts) => {
                let mut acc = parts[0].eval(p)?;
                for part in &parts[1..] {
                    for (a, b) in acc.iter_mut().zip(part.eval(p)?) {
                        *a += b;
                    }
                }
                Ok(acc)
            }
            Repr::Scaled(c, inner) => Ok(inner.eval(p)?.into_iter().map(|x| c * x).collect()),
        }
    }

    pub fn eval_scalar(&self, p: &[f64]) -> Result<f64> {
        Ok(self.eval(p)?[0])
    }

    /// Components of a rank-2 field as a matrix `m[(i, j)]`.
    pub fn eval_matrix(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        if self.valence.rank() != 2 {
            return Err(Error::Input("eval_matrix needs a rank-2 field".into()));
        }
        let v = self.eval(p)?;
        Ok(DMatrix::from_row_slice(self.n, self.n, &v))
    }

    pub(crate) fn exact_d(&self) -> Option<&EvalFn> {
        match &self.repr {
            Repr::Closure { d_eval, .. } => d_eval.as_ref(),
            _ => None,
        }
    }

    pub(crate) fn exact_dd(&self) -> Option<&EvalFn> {
        match &self.repr {
            Repr::Closure { dd_eval, .. } => dd_eval.as_ref(),
            _ => None,
        }
    }

    pub(crate) fn parts(&self) -> Option<&[TensorField]> {
        match &self.repr {
            Repr::Sum(parts) => Some(parts),
            _ => None,
        }
    }

    pub(crate) fn scale_parts(&self) -> Option<(f64, &TensorField)> {
        match &self.repr {
            Repr::Scaled(c, inner) => Some((*c, inner)),
            _ => None,
        }
    }
}

pub fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let (r, c) = m.shape();
    let mut v = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            v.push(m[(i, j)]);
        }
    }
    v
}
