//! Periodic grids, fields, spectral calculus, quadrature and snapshot I/O.

mod field;
mod grid;
mod quadrature;
pub mod snapshot;
pub mod spectral;

pub use field::{lp_norm, ScalarField, SymTensorField, VectorField};
pub use grid::{make_grid, TorusGrid};
pub use quadrature::{integrate, simpson, simpson_weights};
pub use snapshot::{read_snapshot, write_snapshot};
pub use spectral::{spectral_divergence, spectral_gradient, spectral_laplacian};
