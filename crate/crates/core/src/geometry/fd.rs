//! Second-order finite differences with one-sided stencils at the boundary.

use crate::error::{Error, Result};
use crate::geometry::domain::{norm, Region};
use crate::geometry::field::{EvalFn, TensorField};

/// Default step `1e-4 * max(1, |p|)`.
pub fn default_step(p: &[f64]) -> f64 {
    1e-4 * norm(p).max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stencil {
    Central,
    Forward,
    Backward,
}

fn shifted(p: &[f64], k: usize, t: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[k] += t;
    q
}

fn choose(region: Region, p: &[f64], k: usize, h: f64) -> Result<Stencil> {
    let inside = |t: f64| region.contains(&shifted(p, k, t));
    let plus = inside(h);
    let minus = inside(-h);
    if plus && minus {
        Ok(Stencil::Central)
    } else if plus && inside(2.0 * h) && inside(3.0 * h) {
        Ok(Stencil::Forward)
    } else if minus && inside(-2.0 * h) && inside(-3.0 * h) {
        Ok(Stencil::Backward)
    } else {
        Err(Error::Stencil { point: p.to_vec(), step: h })
    }
}

fn combine(terms: &[(f64, Vec<f64>)], scale: f64) -> Vec<f64> {
    let mut out = vec![0.0; terms[0].1.len()];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out.iter_mut().for_each(|o| *o *= scale);
    out
}

type Func<'a> = dyn Fn(&[f64]) -> Result<Vec<f64>> + 'a;

fn d1(f: &Func, region: Region, p: &[f64], k: usize, h: f64) -> Result<Vec<f64>> {
    match choose(region, p, k, h)? {
        Stencil::Central => {
            let fp = f(&shifted(p, k, h))?;
            let fm = f(&shifted(p, k, -h))?;
            Ok(combine(&[(1.0, fp), (-1.0, fm)], 0.5 / h))
        }
        st => {
            let s = if st == Stencil::Forward { h } else { -h };
            let f0 = f(p)?;
            let f1 = f(&shifted(p, k, s))?;
            let f2 = f(&shifted(p, k, 2.0 * s))?;
            Ok(combine(&[(-3.0, f0), (4.0, f1), (-1.0, f2)], 0.5 / s))
        }
    }
}

/// Nested central first differences, i.e. the three-point stencil at `2h`.
fn d2_same(f: &Func, region: Region, p: &[f64], k: usize, h: f64) -> Result<Vec<f64>> {
    let wide = choose(region, p, k, 2.0 * h)? == Stencil::Central;
    match if wide { Stencil::Central } else { choose(region, p, k, h)? } {
        Stencil::Central if wide => {
            let fp = f(&shifted(p, k, 2.0 * h))?;
            let f0 = f(p)?;
            let fm = f(&shifted(p, k, -2.0 * h))?;
            Ok(combine(&[(1.0, fp), (-2.0, f0), (1.0, fm)], 0.25 / (h * h)))
        }
        Stencil::Central => {
            let fp = f(&shifted(p, k, h))?;
            let f0 = f(p)?;
            let fm = f(&shifted(p, k, -h))?;
            Ok(combine(&[(1.0, fp), (-2.0, f0), (1.0, fm)], 1.0 / (h * h)))
        }
        st => {
            let s = if st == Stencil::Forward { h } else { -h };
            let f0 = f(p)?;
            let f1 = f(&shifted(p, k, s))?;
            let f2 = f(&shifted(p, k, 2.0 * s))?;
            let f3 = f(&shifted(p, k, 3.0 * s))?;
            Ok(combine(&[(2.0, f0), (-5.0, f1), (4.0, f2), (-1.0, f3)], 1.0 / (h * h)))
        }
    }
}

/// Partial derivative of a plain closure along the multi-index (length 0, 1 or 2).
pub fn fd_closure(f: &Func, region: Region, p: &[f64], multi_index: &[usize], h: f64) -> Result<Vec<f64>> {
    match multi_index {
        [] => f(p),
        [k] => d1(f, region, p, *k, h),
        [k, l] if k == l => d2_same(f, region, p, *k, h),
        [k, l] => {
            let inner = |q: &[f64]| d1(f, region, q, *l, h);
            d1(&inner, region, p, *k, h)
        }
        _ => Err(Error::Input("derivative order above 2 is not supported".into())),
    }
}

fn slice_d(d: &EvalFn, ncomp: usize, l: usize) -> impl Fn(&[f64]) -> Result<Vec<f64>> + '_ {
    move |q: &[f64]| Ok(d(q)?[l * ncomp..(l + 1) * ncomp].to_vec())
}

/// Partial derivative `∂_{multi_index} field` at `p`. Exact derivative closures are
/// used when present. `step` defaults to [`default_step`].
pub fn fd_derivative(field: &TensorField, p: &[f64], multi_index: &[usize], step: Option<f64>) -> Result<Vec<f64>> {
    let n = field.dim();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    if multi_index.iter().any(|&k| k >= n) {
        return Err(Error::Input(format!("derivative index out of range for n = {n}")));
    }
    field.region().check(p)?;
    let h = step.unwrap_or_else(|| default_step(p));
    if !(h > 0.0) {
        return Err(Error::Input(format!("step must be positive, got {h}")));
    }
    if let Some(parts) = field.parts() {
        let mut acc = fd_derivative(&parts[0], p, multi_index, Some(h))?;
        for part in &parts[1..] {
            for (a, b) in acc.iter_mut().zip(fd_derivative(part, p, multi_index, Some(h))?) {
                *a += b;
            }
        }
        return Ok(acc);
    }
    if let Some((c, inner)) = field.scale_parts() {
        return Ok(fd_derivative(inner, p, multi_index, Some(h))?.into_iter().map(|x| c * x).collect());
    }
    let nc = field.ncomp();
    let region = field.region();
    match multi_index {
        [] => field.eval(p),
        [k] => {
            if let Some(d) = field.exact_d() {
                return Ok(d(p)?[k * nc..(k + 1) * nc].to_vec());
            }
            let f = |q: &[f64]| field.eval(q);
            fd_closure(&f, region, p, multi_index, h)
        }
        [k, l] => {
            if let Some(dd) = field.exact_dd() {
                let idx = k * n + l;
                return Ok(dd(p)?[idx * nc..(idx + 1) * nc].to_vec());
            }
            if let Some(d) = field.exact_d() {
                let g = slice_d(d, nc, *l);
                return fd_closure(&g, region, p, &[*k], h);
            }
            let f = |q: &[f64]| field.eval(q);
            fd_closure(&f, region, p, multi_index, h)
        }
        _ => Err(Error::Input("derivative order above 2 is not supported".into())),
    }
}

/// All first partials, laid out `d[k * ncomp + c]`.
pub fn gradient(field: &TensorField, p: &[f64], step: Option<f64>) -> Result<Vec<f64>> {
    if let Some(d) = field.exact_d() {
        field.region().check(p)?;
        return d(p);
    }
    let mut out = Vec::with_capacity(field.dim() * field.ncomp());
    for k in 0..field.dim() {
        out.extend(fd_derivative(field, p, &[k], step)?);
    }
    Ok(out)
}

/// All second partials, laid out `dd[(k * n + l) * ncomp + c]`.
pub fn hessian(field: &TensorField, p: &[f64], step: Option<f64>) -> Result<Vec<f64>> {
    let n = field.dim();
    let nc = field.ncomp();
    if let Some(dd) = field.exact_dd() {
        field.region().check(p)?;
        return dd(p);
    }
    let mut out = vec![0.0; n * n * nc];
    for k in 0..n {
        for l in k..n {
            let v = fd_derivative(field, p, &[k, l], step)?;
            out[(k * n + l) * nc..(k * n + l + 1) * nc].copy_from_slice(&v);
            out[(l * n + k) * nc..(l * n + k + 1) * nc].copy_from_slice(&v);
        }
    }
    Ok(out)
}
