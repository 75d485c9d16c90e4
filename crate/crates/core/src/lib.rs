//! Mission-planning toolkit for active debris removal.
//!
//! The pipeline runs in four stages: two-line element sets are reduced to
//! pairwise RAAN-alignment epochs and transfer/disposal cost tables
//! ([`orbits`]), the resulting routing problem is assembled into a quadratic
//! binary model with penalty-encoded constraints ([`qubo`]), classical
//! samplers search that model ([`solvers`]), and low-energy bit vectors are
//! decoded back into schedules with validated timing ([`mission`]).

pub mod artificial;
pub mod instance;
pub mod mission;
pub mod orbits;
pub mod qubo;
pub mod solvers;

pub use instance::ProblemInstance;
pub use mission::{MissionPlan, ValidationReport};
pub use orbits::{DebrisObject, OsculatingElements, PhysicalConstants};
pub use qubo::{LagrangeWeights, QuboModel, VariableRegistry};
pub use solvers::{Sample, SampleSet, SolverConfig};
