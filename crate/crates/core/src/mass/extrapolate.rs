use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub error: f64,
    /// Limit estimates from successive windows of radii.
    pub extrapolants: Vec<f64>,
    pub exponent: f64,
    /// Absolute change below which successive estimates are treated as roundoff.
    pub floor: f64,
}

/// Least-squares fit of `c0 + c1 r^{-s}`; returns `c0`.
pub fn fit_limit(radii: &[f64], values: &[f64], s: f64) -> f64 {
    let m = radii.len() as f64;
    let xs: Vec<f64> = radii.iter().map(|r| r.powf(-s)).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = values.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return my;
    }
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| (x - mx) * (y - my)).sum();
    my - sxy / sxx * mx
}

/// Extrapolate `values(r)` to `r → ∞` from sliding windows of `window` radii.
/// The error estimate is the difference of the last two window limits; growing
/// differences or a change larger than a tenth of the limit are reported as a
/// convergence failure. Changes below `floor` (an absolute roundoff allowance,
/// raised to at least `1e-9 max |value| + 1e-13`) never count as divergence.
pub fn extrapolate(radii: &[f64], values: &[f64], s: f64, window: usize, floor: f64) -> Result<Extrapolation> {
    if radii.len() != values.len() || radii.len() < 2 {
        return Err(Error::Input("extrapolation needs at least two radii with values".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence("non-finite flux value".into()));
    }
    let k = window.clamp(2, radii.len());
    let extrapolants: Vec<f64> = (0..=radii.len() - k).map(|i| fit_limit(&radii[i..i + k], &values[i..i + k], s)).collect();
    let m = extrapolants.len();
    let limit = extrapolants[m - 1];
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = floor.max(1e-9 * scale + 1e-13);
    let error = if m >= 2 {
        (extrapolants[m - 1] - extrapolants[m - 2]).abs()
    } else {
        (limit - values[values.len() - 1]).abs()
    };
    if m >= 3 {
        let prev = (extrapolants[m - 2] - extrapolants[m - 3]).abs();
        if error > prev + floor {
            return Err(Error::Convergence(format!("successive limit estimates diverge ({prev:e} then {error:e})")));
        }
    }
    if error > 0.1 * limit.abs() + floor {
        return Err(Error::Convergence(format!("limit estimate {limit} moved by {error:e} between windows")));
    }
    Ok(Extrapolation { limit, error, extrapolants, exponent: s, floor })
}
