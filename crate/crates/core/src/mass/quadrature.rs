//! Product rules on half-spheres `{|x| = 1, x_n >= 0}` and their boundary
//! spheres `{|x| = 1, x_n = 0}`: Gauss–Legendre in the polar angles and the
//! trapezoid rule in the azimuth.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::domain::Model;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=m {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            pp = m as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    (x, w)
}

/// Nodes and weights on `[a, b]`.
pub fn gauss_legendre_on(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(m);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| h * v).collect())
}

/// Unit sphere `S^k ⊂ R^{k+1}`.
fn sphere(k: usize, polar: usize, azimuth: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    match k {
        0 => (vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0]),
        1 => {
            let h = 2.0 * PI / azimuth as f64;
            let nodes = (0..azimuth).map(|j| {
                let phi = h * j as f64;
                vec![phi.cos(), phi.sin()]
            });
            (nodes.collect(), vec![h; azimuth])
        }
        _ => {
            let (sub, subw) = sphere(k - 1, polar, azimuth);
            let (th, thw) = gauss_legendre_on(polar, 0.0, PI);
            lift(&sub, &subw, &th, &thw, k)
        }
    }
}

fn lift(sub: &[Vec<f64>], subw: &[f64], th: &[f64], thw: &[f64], k: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(th.len() * sub.len());
    let mut weights = Vec::with_capacity(th.len() * sub.len());
    for (t, tw) in th.iter().zip(thw) {
        let (s, c) = t.sin_cos();
        let jac = s.powi(k as i32 - 1);
        for (o, ow) in sub.iter().zip(subw) {
            let mut p: Vec<f64> = o.iter().map(|x| s * x).collect();
            p.push(c);
            nodes.push(p);
            weights.push(tw * jac * ow);
        }
    }
    (nodes, weights)
}

#[derive(Debug, Clone, Serialize)]
pub struct HemisphereRule {
    pub n: usize,
    pub polar: usize,
    pub azimuth: usize,
    /// Unit half-sphere nodes in `R^n`.
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Unit boundary sphere nodes in `R^n` (last coordinate zero).
    pub corner_nodes: Vec<Vec<f64>>,
    pub corner_weights: Vec<f64>,
}

impl HemisphereRule {
    pub fn new(n: usize, polar: usize, azimuth: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input("half-sphere rules need n >= 2".into()));
        }
        if polar == 0 || azimuth < 3 {
            return Err(Error::Input(format!("rule orders too small: {polar} x {azimuth}")));
        }
        let (sub, subw) = sphere(n - 2, polar, azimuth);
        let (th, thw) = gauss_legendre_on(polar, 0.0, 0.5 * PI);
        let (nodes, weights) = lift(&sub, &subw, &th, &thw, n - 1);
        let corner_nodes = sub
            .iter()
            .map(|o| {
                let mut p = o.clone();
                p.push(0.0);
                p
            })
            .collect();
        Ok(Self { n, polar, azimuth, nodes, weights, corner_nodes, corner_weights: subw })
    }

    /// Area factor of the coordinate sphere of radius `r` relative to the unit
    /// sphere, for the half-sphere (`dim = n - 1`) or the corner (`dim = n - 2`).
    pub fn measure_factor(model: Model, r: f64, dim: usize) -> f64 {
        match model {
            Model::Flat | Model::HyperbolicPolar => r.powi(dim as i32),
            Model::HyperbolicBall => (2.0 * r / (1.0 - r * r)).powi(dim as i32),
        }
    }
}
