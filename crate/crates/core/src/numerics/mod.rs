//! Deterministic scalar numerics: root scanning, tridiagonal eigenvalues and
//! Richardson extrapolation.

pub mod richardson;
pub mod roots;
pub mod tridiag;

pub use richardson::{convergence_ratio, richardson};
pub use roots::{derivative_estimate, find_roots, refine, Bracket, Refined, RootError, RootResult, POLE_MAGNITUDE};
pub use tridiag::{gershgorin_bounds, sturm_count, tridiag_smallest_eigs, TridiagError};
