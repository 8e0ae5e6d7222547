//! Flux integrals at infinity: energy, momentum and the mass functional.

pub mod einstein;
pub mod extrapolate;
pub mod flux;
pub mod invariance;
pub mod quadrature;
pub mod report;

pub use einstein::{einstein_energy_crosscheck, EinsteinCrosscheck};
pub use extrapolate::{extrapolate, Extrapolation};
pub use flux::{build_hemisphere_rule, check_decay, decay_threshold, flux_rows, FluxRow, MassConfig, RadiusRule};
pub use invariance::{invariance_test, InvarianceReport};
pub use quadrature::HemisphereRule;
pub use report::{energy_momentum, mass_functional, mass_inequality_report, Estimate, Invariants, MassInequalityReport, MassReport};
