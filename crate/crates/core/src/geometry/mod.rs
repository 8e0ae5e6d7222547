//! Fields, finite differences and curvature on half-space charts.

pub mod boundary;
pub mod curvature;
pub mod data;
pub mod domain;
pub mod fd;
pub mod field;
pub mod killing_dev;
pub mod tensor;

pub use boundary::{boundary_geometry, BoundaryGeometry};
pub use curvature::{curvature, einstein_tensor, CurvatureBundle};
pub use data::InitialDataSet;
pub use domain::{ChartDomain, Model, Region};
pub use fd::{default_step, fd_derivative};
pub use field::{TensorField, Valence};
pub use killing_dev::{killing_development_check, KillingDevCheck};
