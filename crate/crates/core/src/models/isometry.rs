use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::domain::Model;
use crate::geometry::field::{row_major, TensorField, Valence};
use crate::geometry::InitialDataSet;
use crate::models::{ball_to_polar, chart_point, hyperboloid_point, polar_to_ball};

/// Isometry of a reference model that preserves the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelIsometry {
    /// `p ↦ R p + a` with `R e_n = e_n`, `a_n = 0`.
    Euclidean { rotation: Vec<Vec<f64>>, translation: Vec<f64> },
    /// Orthochronous Lorentz matrix on `(x_0, .., x_n)` fixing `e_n`.
    Lorentz { matrix: Vec<Vec<f64>> },
}

fn to_mat(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

fn from_mat(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl ModelIsometry {
    /// Rotation by `angle` in the `(x_1, x_2)` plane, fixing the normal axis.
    pub fn rotation_about_normal(n: usize, angle: f64) -> Self {
        let mut r = DMatrix::identity(n, n);
        let (s, c) = angle.sin_cos();
        r[(0, 0)] = c;
        r[(0, 1)] = -s;
        r[(1, 0)] = s;
        r[(1, 1)] = c;
        ModelIsometry::Euclidean { rotation: from_mat(&r), translation: vec![0.0; n] }
    }

    /// Boost with the given rapidity in the `(x_0, x_axis)` plane, `axis < n`.
    pub fn boost(n: usize, axis: usize, rapidity: f64) -> Self {
        let mut l = DMatrix::identity(n + 1, n + 1);
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        l[(0, 0)] = ch;
        l[(0, axis)] = sh;
        l[(axis, 0)] = sh;
        l[(axis, axis)] = ch;
        ModelIsometry::Lorentz { matrix: from_mat(&l) }
    }

    /// Rotation in the `(x_a, x_b)` plane of the hyperboloid, `1 <= a, b < n`.
    pub fn hyperbolic_rotation(n: usize, a: usize, b: usize, angle: f64) -> Self {
        let mut l = DMatrix::identity(n + 1, n + 1);
        let (s, c) = angle.sin_cos();
        l[(a, a)] = c;
        l[(a, b)] = -s;
        l[(b, a)] = s;
        l[(b, b)] = c;
        ModelIsometry::Lorentz { matrix: from_mat(&l) }
    }

    pub fn rotation(&self) -> Option<DMatrix<f64>> {
        match self {
            ModelIsometry::Euclidean { rotation, .. } => Some(to_mat(rotation)),
            _ => None,
        }
    }

    pub fn lorentz(&self) -> Option<DMatrix<f64>> {
        match self {
            ModelIsometry::Lorentz { matrix } => Some(to_mat(matrix)),
            _ => None,
        }
    }

    pub fn validate(&self, model: Model, n: usize) -> Result<()> {
        let tol = 1e-10;
        match (self, model) {
            (ModelIsometry::Euclidean { rotation, translation }, Model::Flat) => {
                let r = to_mat(rotation);
                if r.shape() != (n, n) || translation.len() != n {
                    return Err(Error::InvalidIsometry("shape does not match the dimension".into()));
                }
                if (r.transpose() * &r - DMatrix::identity(n, n)).amax() > tol {
                    return Err(Error::InvalidIsometry("rotation is not orthogonal".into()));
                }
                let en = r.column(n - 1);
                let row = r.row(n - 1);
                for i in 0..n - 1 {
                    if en[i].abs() > tol || row[i].abs() > tol {
                        return Err(Error::InvalidIsometry("rotation moves the normal axis".into()));
                    }
                }
                if (en[n - 1] - 1.0).abs() > tol {
                    return Err(Error::InvalidIsometry("rotation reflects the normal axis".into()));
                }
                if translation[n - 1].abs() > tol {
                    return Err(Error::InvalidIsometry("translation leaves the boundary".into()));
                }
                Ok(())
            }
            (ModelIsometry::Lorentz { matrix }, Model::HyperbolicPolar | Model::HyperbolicBall) => {
                let l = to_mat(matrix);
                if l.shape() != (n + 1, n + 1) {
                    return Err(Error::InvalidIsometry("shape does not match the dimension".into()));
                }
                let mut eta = DMatrix::identity(n + 1, n + 1);
                eta[(0, 0)] = -1.0;
                if (l.transpose() * &eta * &l - &eta).amax() > tol * l.amax().powi(2).max(1.0) {
                    return Err(Error::InvalidIsometry("matrix does not preserve the Minkowski product".into()));
                }
                if l[(0, 0)] <= 0.0 {
                    return Err(Error::InvalidIsometry("matrix reverses time orientation".into()));
                }
                for i in 0..n {
                    if l[(i, n)].abs() > tol || l[(n, i)].abs() > tol {
                        return Err(Error::InvalidIsometry("matrix moves the normal axis".into()));
                    }
                }
                if (l[(n, n)] - 1.0).abs() > tol {
                    return Err(Error::InvalidIsometry("matrix reflects the normal axis".into()));
                }
                Ok(())
            }
            _ => Err(Error::InvalidIsometry(format!("isometry kind does not match model {model:?}"))),
        }
    }
}

/// Image of `p` and the Jacobian of the map there.
pub fn isometry_apply(iso: &ModelIsometry, model: Model, p: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    iso.validate(model, p.len())?;
    apply_unchecked(iso, model, p)
}

fn apply_unchecked(iso: &ModelIsometry, model: Model, p: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = p.len();
    match iso {
        ModelIsometry::Euclidean { rotation, translation } => {
            let r = to_mat(rotation);
            let q = &r * DVector::from_column_slice(p) + DVector::from_column_slice(translation);
            Ok((q.iter().copied().collect(), r))
        }
        ModelIsometry::Lorentz { matrix } => {
            let l = to_mat(matrix);
            let polar_apply = |y: &[f64]| -> Result<(Vec<f64>, DMatrix<f64>)> {
                let x = hyperboloid_point(Model::HyperbolicPolar, y)?;
                let xv = &l * DVector::from_vec(x.clone());
                let out = chart_point(Model::HyperbolicPolar, xv.as_slice())?;
                // dy'/dy = L[1.., 0] (y / x_0)^T + L[1.., 1..]
                let jac = DMatrix::from_fn(n, n, |i, j| l[(i + 1, 0)] * y[j] / x[0] + l[(i + 1, j + 1)]);
                Ok((out, jac))
            };
            match model {
                Model::HyperbolicPolar => polar_apply(p),
                Model::HyperbolicBall => {
                    let (y, j1) = ball_to_polar(p);
                    let (y2, j2) = polar_apply(&y)?;
                    let (z, j3) = polar_to_ball(&y2);
                    Ok((z, j3 * j2 * j1))
                }
                Model::Flat => Err(Error::InvalidIsometry("Lorentz map on the flat model".into())),
            }
        }
    }
}

/// Pullback `A*T` of a (0,2) field: `(A*T)(p) = dA^T T(A p) dA`.
pub fn pullback_sym2(field: &TensorField, iso: &ModelIsometry, model: Model) -> Result<TensorField> {
    let n = field.dim();
    iso.validate(model, n)?;
    let (f, iso) = (field.clone(), iso.clone());
    Ok(TensorField::from_fn(n, Valence::SYM2, move |p| {
        let (q, jac) = apply_unchecked(&iso, model, p)?;
        let m = f.eval_matrix(&q)?;
        Ok(row_major(&(jac.transpose() * m * &jac)))
    })
    .with_region(field.region()))
}

/// Pull back `(g, h)` by a model isometry. The reference metric is invariant, so
/// only the perturbation and `h` change.
pub fn pullback_data(data: &InitialDataSet, iso: &ModelIsometry) -> Result<InitialDataSet> {
    let model = data.domain.model;
    let f = pullback_sym2(&data.perturbation, iso, model)?;
    let h = pullback_sym2(&data.h, iso, model)?;
    InitialDataSet::new(data.domain, f, h, data.decay)
}
