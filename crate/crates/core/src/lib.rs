//! Exact computations with modules of the universal additive DAHA of type
//! `(C1∨, C1)` and the universal Racah algebra.
//!
//! Everything is computed over `Q` with arbitrary-precision rationals; no
//! floating point enters any result.

pub mod algebra;
pub mod catalog;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod subspace;
pub mod sweep;

pub use algebra::{HRep, ModuleMeta, RacahRep, RelationReport};
pub use catalog::{Family, ModuleSpec, Twist};
pub use matrix::RatMatrix;
pub use rational::Rational;
pub use subspace::Subspace;
