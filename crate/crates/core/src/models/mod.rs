//! Reference models: flat half-space and the hyperbolic half-space in polar and
//! ball coordinates, with their static potentials and boundary Killing fields.

pub mod isometry;
pub mod lorentz;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::domain::{dot, Model, Region};
use crate::geometry::field::{row_major, TensorField, Valence};

pub use isometry::{isometry_apply, pullback_sym2, pullback_data, ModelIsometry};
pub use lorentz::{causal_classify, minkowski_product, CausalClass, LorentzVector};

fn kd(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Reference metric with exact first and second derivatives.
pub fn reference_metric(model: Model, n: usize) -> TensorField {
    match model {
        Model::Flat => TensorField::constant(n, Valence::SYM2, row_major(&DMatrix::identity(n, n))),
        Model::HyperbolicPolar => TensorField::new(n, Valence::SYM2, move |y| {
            let s = 1.0 / (1.0 + dot(y, y));
            let mut v = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    v[i * n + j] = kd(i, j) - y[i] * y[j] * s;
                }
            }
            v
        })
        .with_d_eval(move |y| {
            let s = 1.0 / (1.0 + dot(y, y));
            let mut v = vec![0.0; n * n * n];
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        v[k * n * n + i * n + j] =
                            -(kd(i, k) * y[j] + y[i] * kd(j, k)) * s + 2.0 * y[i] * y[j] * y[k] * s * s;
                    }
                }
            }
            v
        })
        .with_dd_eval(move |y| {
            let s = 1.0 / (1.0 + dot(y, y));
            let mut v = vec![0.0; n * n * n * n];
            for k in 0..n {
                for l in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let t1 = -(kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k)) * s;
                            let t2 = 2.0 * (kd(i, k) * y[j] + y[i] * kd(j, k)) * y[l] * s * s;
                            let t3 = 2.0 * (kd(i, l) * y[j] * y[k] + y[i] * kd(j, l) * y[k] + y[i] * y[j] * kd(k, l)) * s * s;
                            let t4 = -8.0 * y[i] * y[j] * y[k] * y[l] * s * s * s;
                            v[(k * n + l) * n * n + i * n + j] = t1 + t2 + t3 + t4;
                        }
                    }
                }
            }
            v
        }),
        Model::HyperbolicBall => TensorField::new(n, Valence::SYM2, move |z| {
            let phi = 4.0 / (1.0 - dot(z, z)).powi(2);
            row_major(&(DMatrix::identity(n, n) * phi))
        })
        .with_d_eval(move |z| {
            let q = 1.0 - dot(z, z);
            let mut v = vec![0.0; n * n * n];
            for k in 0..n {
                let dphi = 16.0 * z[k] / q.powi(3);
                for i in 0..n {
                    v[k * n * n + i * n + i] = dphi;
                }
            }
            v
        })
        .with_dd_eval(move |z| {
            let q = 1.0 - dot(z, z);
            let mut v = vec![0.0; n * n * n * n];
            for k in 0..n {
                for l in 0..n {
                    let d2 = 16.0 * kd(k, l) / q.powi(3) + 96.0 * z[k] * z[l] / q.powi(4);
                    for i in 0..n {
                        v[(k * n + l) * n * n + i * n + i] = d2;
                    }
                }
            }
            v
        })
        .with_region(Region::HalfBall),
    }
}

/// Basis of static potentials with Neumann boundary data: `{1}` for flat,
/// `{V_(0), .., V_(n-1)}` (restrictions of the ambient coordinates `x_a`) for
/// the hyperbolic models.
pub fn static_potentials(model: Model, n: usize) -> Vec<TensorField> {
    match model {
        Model::Flat => vec![TensorField::constant(n, Valence::SCALAR, vec![1.0])],
        Model::HyperbolicPolar => {
            let mut out = vec![TensorField::scalar(n, |y| (1.0 + dot(y, y)).sqrt())
                .with_d_eval(|y| {
                    let x0 = (1.0 + dot(y, y)).sqrt();
                    y.iter().map(|yk| yk / x0).collect()
                })
                .with_dd_eval(move |y| {
                    let x0 = (1.0 + dot(y, y)).sqrt();
                    let mut v = vec![0.0; n * n];
                    for k in 0..n {
                        for l in 0..n {
                            v[k * n + l] = kd(k, l) / x0 - y[k] * y[l] / x0.powi(3);
                        }
                    }
                    v
                })];
            for a in 0..n - 1 {
                out.push(
                    TensorField::scalar(n, move |y| y[a])
                        .with_d_eval(move |_| (0..n).map(|k| kd(k, a)).collect())
                        .with_dd_eval(move |_| vec![0.0; n * n]),
                );
            }
            out
        }
        Model::HyperbolicBall => {
            let mut out = vec![TensorField::scalar(n, |z| {
                let r2 = dot(z, z);
                (1.0 + r2) / (1.0 - r2)
            })
            .with_d_eval(|z| {
                let q = 1.0 - dot(z, z);
                z.iter().map(|zk| 4.0 * zk / (q * q)).collect()
            })
            .with_dd_eval(move |z| {
                let q = 1.0 - dot(z, z);
                let mut v = vec![0.0; n * n];
                for k in 0..n {
                    for l in 0..n {
                        v[k * n + l] = 4.0 * kd(k, l) / (q * q) + 16.0 * z[k] * z[l] / q.powi(3);
                    }
                }
                v
            })
            .with_region(Region::HalfBall)];
            for a in 0..n - 1 {
                out.push(
                    TensorField::scalar(n, move |z| 2.0 * z[a] / (1.0 - dot(z, z)))
                        .with_d_eval(move |z| {
                            let q = 1.0 - dot(z, z);
                            (0..n).map(|k| 2.0 * kd(k, a) / q + 4.0 * z[a] * z[k] / (q * q)).collect()
                        })
                        .with_dd_eval(move |z| {
                            let q = 1.0 - dot(z, z);
                            let mut v = vec![0.0; n * n];
                            for k in 0..n {
                                for l in 0..n {
                                    v[k * n + l] = 4.0 * (kd(k, a) * z[l] + kd(l, a) * z[k] + z[a] * kd(k, l)) / (q * q)
                                        + 16.0 * z[a] * z[k] * z[l] / q.powi(3);
                                }
                            }
                            v
                        })
                        .with_region(Region::HalfBall),
                );
            }
            out
        }
    }
}

fn vector_field<F, D>(n: usize, region: Region, f: F, d: D) -> TensorField
where
    F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    D: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
{
    TensorField::new(n, Valence::VECTOR, f)
        .with_d_eval(d)
        .with_dd_eval(move |_| vec![0.0; n * n * n])
        .with_region(region)
}

fn rotation_an(n: usize, a: usize, region: Region) -> TensorField {
    // x_a ∂_n − x_n ∂_a
    vector_field(
        n,
        region,
        move |x| {
            let mut v = vec![0.0; n];
            v[n - 1] = x[a];
            v[a] = -x[n - 1];
            v
        },
        move |_| {
            let mut d = vec![0.0; n * n];
            d[a * n + (n - 1)] = 1.0;
            d[(n - 1) * n + a] = -1.0;
            d
        },
    )
}

/// Killing fields of the model whose restriction to the boundary is normal:
/// `∂_{x_A}` tangential translations for flat, `W_(a) = L_{an}` for hyperbolic.
/// The returned vector fields carry exact Jacobians.
pub fn killing_basis(model: Model, n: usize) -> Vec<TensorField> {
    match model {
        Model::Flat => (0..n - 1)
            .map(|a| {
                let mut e = vec![0.0; n];
                e[a] = 1.0;
                TensorField::constant(n, Valence::VECTOR, e)
            })
            .collect(),
        Model::HyperbolicPolar => {
            // L_0n = x_0 ∂_{y_n} in the polar chart
            let l0 = TensorField::new(n, Valence::VECTOR, move |y| {
                let mut v = vec![0.0; n];
                v[n - 1] = (1.0 + dot(y, y)).sqrt();
                v
            })
            .with_d_eval(move |y| {
                let x0 = (1.0 + dot(y, y)).sqrt();
                let mut d = vec![0.0; n * n];
                for k in 0..n {
                    d[k * n + n - 1] = y[k] / x0;
                }
                d
            });
            let mut out = vec![l0];
            out.extend((0..n - 1).map(|a| rotation_an(n, a, Region::HalfSpace)));
            out
        }
        Model::HyperbolicBall => {
            let l0 = vector_field(
                n,
                Region::HalfBall,
                move |z| {
                    let zn = z[n - 1];
                    let mut v: Vec<f64> = z.iter().map(|zi| -zn * zi).collect();
                    v[n - 1] += 0.5 * (1.0 + dot(z, z));
                    v
                },
                move |z| {
                    let zn = z[n - 1];
                    let mut d = vec![0.0; n * n];
                    for k in 0..n {
                        for i in 0..n {
                            d[k * n + i] = z[k] * kd(i, n - 1) - kd(k, n - 1) * z[i] - zn * kd(i, k);
                        }
                    }
                    d
                },
            );
            let mut out = vec![l0];
            out.extend((0..n - 1).map(|a| rotation_an(n, a, Region::HalfBall)));
            out
        }
    }
}

/// Hyperboloid point `(x_0, x_1, .., x_n)` of a chart point.
pub fn hyperboloid_point(model: Model, p: &[f64]) -> Result<Vec<f64>> {
    match model {
        Model::HyperbolicPolar => {
            let mut x = vec![(1.0 + dot(p, p)).sqrt()];
            x.extend_from_slice(p);
            Ok(x)
        }
        Model::HyperbolicBall => {
            let q = 1.0 - dot(p, p);
            if q <= 0.0 {
                return Err(Error::Domain { point: p.to_vec(), reason: "outside the unit ball".into() });
            }
            let mut x = vec![(2.0 - q) / q];
            x.extend(p.iter().map(|z| 2.0 * z / q));
            Ok(x)
        }
        Model::Flat => Err(Error::Input("flat model has no hyperboloid".into())),
    }
}

/// Chart point of a hyperboloid point.
pub fn chart_point(model: Model, x: &[f64]) -> Result<Vec<f64>> {
    match model {
        Model::HyperbolicPolar => Ok(x[1..].to_vec()),
        Model::HyperbolicBall => Ok(x[1..].iter().map(|y| y / (1.0 + x[0])).collect()),
        Model::Flat => Err(Error::Input("flat model has no hyperboloid".into())),
    }
}

/// Polar coordinates `y` of a ball point `z`, with Jacobian `∂y/∂z`.
pub fn ball_to_polar(z: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let n = z.len();
    let q = 1.0 - dot(z, z);
    let y = z.iter().map(|zi| 2.0 * zi / q).collect();
    let jac = DMatrix::from_fn(n, n, |i, j| 2.0 * kd(i, j) / q + 4.0 * z[i] * z[j] / (q * q));
    (y, jac)
}

/// Ball coordinates `z = y / (1 + sqrt(1 + |y|²))` with Jacobian `∂z/∂y`.
pub fn polar_to_ball(y: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let n = y.len();
    let x0 = (1.0 + dot(y, y)).sqrt();
    let z = y.iter().map(|yi| yi / (1.0 + x0)).collect();
    let jac = DMatrix::from_fn(n, n, |i, j| kd(i, j) / (1.0 + x0) - y[i] * y[j] / ((1.0 + x0).powi(2) * x0));
    (z, jac)
}

/// Re-express data given in ball coordinates in the polar chart (exact chart change).
pub fn ball_data_to_polar(data: &crate::geometry::InitialDataSet) -> Result<crate::geometry::InitialDataSet> {
    use crate::geometry::domain::ChartDomain;
    if data.domain.model != Model::HyperbolicBall {
        return Err(Error::Input("data are not in ball coordinates".into()));
    }
    let n = data.n();
    let pull = |t: &TensorField| {
        let t = t.clone();
        TensorField::from_fn(n, Valence::SYM2, move |y| {
            let (z, jac) = polar_to_ball(y);
            let m = t.eval_matrix(&z)?;
            Ok(row_major(&(jac.transpose() * m * &jac)))
        })
    };
    let r0 = data.domain.r0;
    let r0_polar = 2.0 * r0 / (1.0 - r0 * r0);
    let domain = ChartDomain::new(n, Model::HyperbolicPolar, r0_polar)?;
    crate::geometry::InitialDataSet::new(domain, pull(&data.perturbation), pull(&data.h), data.decay)
}

/// `∂_c J_ia` and `∂_d ∂_c J_ia` for `J = ∂y/∂z`, laid out `[(i n + a) n + c]` and `[((i n + a) n + c) n + d]`.
fn ball_jacobian_jets(z: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = z.len();
    let q = 1.0 - dot(z, z);
    let (q2, q3, q4) = (q * q, q * q * q, q * q * q * q);
    let mut dj = vec![0.0; n * n * n];
    let mut ddj = vec![0.0; n * n * n * n];
    for i in 0..n {
        for a in 0..n {
            for c in 0..n {
                let lin = 4.0 * (kd(i, a) * z[c] + kd(i, c) * z[a] + kd(a, c) * z[i]);
                let cub = 16.0 * z[i] * z[a] * z[c];
                dj[(i * n + a) * n + c] = lin / q2 + cub / q3;
                for d in 0..n {
                    let con = 4.0 * (kd(i, a) * kd(c, d) + kd(i, c) * kd(a, d) + kd(a, c) * kd(i, d));
                    let quad = 16.0 * (kd(i, d) * z[a] * z[c] + kd(a, d) * z[i] * z[c] + kd(c, d) * z[i] * z[a]);
                    ddj[((i * n + a) * n + c) * n + d] = con / q2 + (4.0 * lin * z[d] + quad) / q3 + 6.0 * cub * z[d] / q4;
                }
            }
        }
    }
    (dj, ddj)
}

/// `J^T t(y(z)) J` with first and second derivatives by the chain rule.
fn pull_polar_to_ball(t: &TensorField) -> TensorField {
    use crate::geometry::fd::{gradient, hessian};
    let n = t.dim();
    let nc = n * n;
    let (t0, t1, t2) = (t.clone(), t.clone(), t.clone());
    let tv = move |t: &TensorField, y: &[f64]| t.eval(y);
    TensorField::from_fn(n, Valence::SYM2, move |z| {
        let (y, jac) = ball_to_polar(z);
        let m = DMatrix::from_row_slice(n, n, &tv(&t0, &y)?);
        Ok(row_major(&(jac.transpose() * m * &jac)))
    })
    .with_d_fn(move |z| {
        let (y, jac) = ball_to_polar(z);
        let (dj, _) = ball_jacobian_jets(z);
        let tval = t1.eval(&y)?;
        let dt = gradient(&t1, &y, None)?;
        let mut out = vec![0.0; n * nc];
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut acc = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            let tij = tval[i * n + j];
                            acc += (dj[(i * n + a) * n + c] * jac[(j, b)] + jac[(i, a)] * dj[(j * n + b) * n + c]) * tij;
                            let dtc: f64 = (0..n).map(|k| dt[k * nc + i * n + j] * jac[(k, c)]).sum();
                            acc += jac[(i, a)] * jac[(j, b)] * dtc;
                        }
                    }
                    out[c * nc + a * n + b] = acc;
                }
            }
        }
        Ok(out)
    })
    .with_dd_fn(move |z| {
        let (y, jac) = ball_to_polar(z);
        let (dj, ddj) = ball_jacobian_jets(z);
        let tval = t2.eval(&y)?;
        let dt = gradient(&t2, &y, None)?;
        let ddt = hessian(&t2, &y, None)?;
        let djx = |i: usize, a: usize, c: usize| dj[(i * n + a) * n + c];
        // t_ij,k J_kc and (t_ij,kl J_kc J_ld + t_ij,k ∂_d J_kc)
        let dtc = |i: usize, j: usize, c: usize| (0..n).map(|k| dt[k * nc + i * n + j] * jac[(k, c)]).sum::<f64>();
        let mut out = vec![0.0; n * n * nc];
        for c in 0..n {
            for d in c..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut acc = 0.0;
                        for i in 0..n {
                            for j in 0..n {
                                let tij = tval[i * n + j];
                                let (jia, jjb) = (jac[(i, a)], jac[(j, b)]);
                                acc += (ddj[((i * n + a) * n + c) * n + d] * jjb
                                    + djx(i, a, c) * djx(j, b, d)
                                    + djx(i, a, d) * djx(j, b, c)
                                    + jia * ddj[((j * n + b) * n + c) * n + d])
                                    * tij;
                                let (tc, td) = (dtc(i, j, c), dtc(i, j, d));
                                acc += (djx(i, a, c) * jjb + jia * djx(j, b, c)) * td;
                                acc += (djx(i, a, d) * jjb + jia * djx(j, b, d)) * tc;
                                let mut second = 0.0;
                                for k in 0..n {
                                    second += dt[k * nc + i * n + j] * djx(k, c, d);
                                    for l in 0..n {
                                        second += ddt[(k * n + l) * nc + i * n + j] * jac[(k, c)] * jac[(l, d)];
                                    }
                                }
                                acc += jia * jjb * second;
                            }
                        }
                        out[(c * n + d) * nc + a * n + b] = acc;
                        out[(d * n + c) * nc + a * n + b] = acc;
                    }
                }
            }
        }
        Ok(out)
    })
}

/// Re-express polar-chart data in ball coordinates with exterior radius `r0_ball`.
pub fn polar_data_to_ball(data: &crate::geometry::InitialDataSet, r0_ball: f64) -> Result<crate::geometry::InitialDataSet> {
    use crate::geometry::domain::ChartDomain;
    if data.domain.model != Model::HyperbolicPolar {
        return Err(Error::Input("data are not in polar coordinates".into()));
    }
    let domain = ChartDomain::new(data.n(), Model::HyperbolicBall, r0_ball)?;
    crate::geometry::InitialDataSet::new(domain, pull_polar_to_ball(&data.perturbation), pull_polar_to_ball(&data.h), data.decay)
}
