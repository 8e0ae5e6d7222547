use serde::{Deserialize, Serialize};

/// Vector in `L^{1,m}` with product `z_0 w_0 − Σ z_k w_k`.
pub type LorentzVector = Vec<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausalClass {
    Zero,
    TimelikeFuture,
    TimelikePast,
    NullFuture,
    NullPast,
    Spacelike,
}

impl CausalClass {
    pub fn is_future_causal(self) -> bool {
        matches!(self, CausalClass::TimelikeFuture | CausalClass::NullFuture | CausalClass::Zero)
    }
}

/// `⟨⟨z, w⟩⟩ = z_0 w_0 − Σ_k z_k w_k`.
pub fn minkowski_product(z: &[f64], w: &[f64]) -> f64 {
    z[0] * w[0] - z[1..].iter().zip(&w[1..]).map(|(a, b)| a * b).sum::<f64>()
}

/// Causal character of `v`, with a null band `|⟨⟨v, v⟩⟩| <= tol ‖v‖²`.
pub fn causal_classify(v: &[f64], tol: f64) -> CausalClass {
    let e2: f64 = v.iter().map(|x| x * x).sum();
    if e2.sqrt() <= tol {
        return CausalClass::Zero;
    }
    let q = minkowski_product(v, v);
    let future = v[0] > 0.0;
    if q.abs() <= tol * e2 {
        if future {
            CausalClass::NullFuture
        } else {
            CausalClass::NullPast
        }
    } else if q > 0.0 {
        if future {
            CausalClass::TimelikeFuture
        } else {
            CausalClass::TimelikePast
        }
    } else {
        CausalClass::Spacelike
    }
}
