//! A-selfadjoint oblique projections, reduced solutions and shorted operators on `C^n`.

pub mod blocks;
pub mod cli;
pub mod douglas;
pub mod error;
pub mod numcore;
pub mod projector;
pub mod sampling;
pub mod shorted;
pub mod subspace;
pub mod twoproj;

pub use error::{Error, Result};
pub use numcore::{ComplexMatrix, Field, HermitianMatrix, ToleranceProfile};
pub use projector::Projection;
pub use subspace::Subspace;
