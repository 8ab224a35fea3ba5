//! Coarse hyperbolic geometry and random walks on three backends: the Cayley
//! tree of a free group, the Farey graph with its SL2(Z) action, and the
//! curve complex of a genus-2 surface.

pub mod boundary;
pub mod error;
pub mod group;
pub mod halfspace;
pub mod heegaard;
pub mod hyp;
pub mod isometry;
pub mod rng;
pub mod spaces;
pub mod stats;
pub mod walk;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{LabError, Result};
pub use group::GroupElement;
pub use hyp::{ConstantTable, Geodesic, HyperbolicSpace, Rational};
pub use spaces::tree::{FreeTree, Word};
