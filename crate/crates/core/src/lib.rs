//! Finite group computations for rank questions: exact arithmetic, a
//! permutation group engine, concrete constructions, modules over `Z/ell^k`
//! and formula cross-checks.

pub mod arith;
pub mod constructions;
pub mod ff;
pub mod latmod;
pub mod matrix;
pub mod perm;
pub mod permgroup;
pub mod verify;

pub use arith::InvariantTriple;
pub use constructions::Descriptor;
pub use matrix::{Matrix, MatrixGroupSpec};
pub use perm::{GroupSpec, Perm};
pub use permgroup::GroupTable;
