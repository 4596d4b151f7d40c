//! Space-time mollification, commutators and the mollified energy balance.

mod commutator;
mod kernel;
pub mod lemmas;
mod spacetime;
mod test_function;

pub use commutator::{
    commutator_fields, commutator_record, mollified_energy_identity_residual, weighted_residuals, CommutatorFields,
    EpsRecord, MollifiedEnergy,
};
pub use kernel::{bump, mollify, mollify_space, MollifierKernel};
pub use lemmas::nonlinear_commutator;
pub use spacetime::SpaceTimeField;
pub use test_function::{SpaceProfile, TestFunction, TimeProfile};

pub(crate) use test_function::support_integral;
