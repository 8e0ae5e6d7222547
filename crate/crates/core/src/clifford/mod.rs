//! Complex Clifford algebra `Cl(n,1)`, boundary projectors, curvature
//! endomorphisms and the spinorial identities behind the positivity arguments.

pub mod identities;
pub mod killing;
pub mod operators;
pub mod rep;

pub use identities::{killing_dirac_shift_check, verify_decomposition, verify_weitzenbock, ShiftCheck, SpinorField, WeitzenbockCheck};
pub use killing::{killing_charge, ktilde_from_report, quadratic_form_ktilde, ChargeKind, KillingCharge, KtildeReport, ParameterSpace};
pub use operators::{boundary_operator, operator_r, operator_t, operator_u, operator_w, SpectralOperator, TOperator};
pub use rep::{boundary_projector, BoundaryProjector, CMat, CliffordRep, ProjectorKind, Spinor};
