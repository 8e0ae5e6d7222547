//! Constraint maps, energy conditions and their linearizations.

pub mod decay;
pub mod dec;
pub mod interior;
pub mod linearized;

pub use dec::{check_dec, DecReport, SampleSet, DEC_TOL};
pub use decay::{decay_audit, DecayReport};
pub use interior::{
    boundary_constraints, conjugate_momentum, hamiltonian_density, interior_constraints, BoundaryConstraints, HamiltonianDensity,
    InteriorConstraints,
};
pub use linearized::{
    adjoint_constraint, charge_density, linearized_constraints, verify_divergence_identity, verify_gauge_charge, AdjointValue,
    DivergenceCheck, GaugeCheck, LinearizedConstraints,
};
