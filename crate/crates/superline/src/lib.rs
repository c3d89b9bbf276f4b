//! Exact computer algebra for the superline `R^{1|1}`.
//!
//! The crate models polynomial superfunctions with their contact bracket,
//! the osp(1|2) subalgebra of contact vector fields and its action on
//! weighted densities, bilinear differential operators between density
//! modules, and the degree-one Chevalley-Eilenberg cohomology of osp(1|2)
//! and sl(2) with operator coefficients. All arithmetic is exact rational;
//! dimensions are computed by sparse nullspace/rank elimination and
//! cross-checked against closed-form cocycle families.

pub mod scalar;
pub mod poly;
pub mod superfield;
pub mod liealg;
pub mod biop;
pub mod jet;
pub mod linalg;
pub mod cohomology;
pub mod families;
pub mod error;

pub use biop::{BilinOp, Key, KeyRecord, OpContext};
pub use error::{Error, Result};
pub use liealg::{ContactField, Density, Gen};
pub use scalar::Rat;
pub use superfield::{contact_bracket, Parity, SuperFn};
