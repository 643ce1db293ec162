//! Bound states and critical coupling for attractive delta potentials.
//!
//! Two problems are covered:
//!
//! * the half-line `-y'' - β δ(x - a) y = λ y` on `[0, ∞)` with a Dirichlet,
//!   Neumann or Robin condition at the origin ([`dispersion1d`]);
//! * the radial shell `-Δy - β δ(r - 1 - a) y = λ y` outside the unit disk
//!   with `y = 0` on the disk ([`dispersion2d`]).
//!
//! Bound states come from the secular equations in closed form, the critical
//! coupling from [`critical`], and every analytic result can be checked
//! against finite-difference spectra from [`fdoracle`]. [`verify`] bundles
//! those checks into reproducible suites.
//!
//! ```
//! use deltabound::{solve_bound_states, BoundaryCondition, Problem1D};
//!
//! let problem = Problem1D::new(1.0, 3.0, BoundaryCondition::dirichlet()).unwrap();
//! let states = solve_bound_states(&problem).unwrap();
//! assert_eq!(states.len(), 1);
//! assert!((states[0].k - 1.4107).abs() < 1e-4);
//! ```
//!
//! The half-line solvers, root finders and tridiagonal eigensolver are
//! generic over [`scalar::Real`]; the aliases below fix them to `f64`.

pub mod critical;
pub mod dispersion1d;
pub mod dispersion2d;
pub mod fdoracle;
pub mod numerics;
pub mod scalar;
pub mod specfun;
pub mod verify;

pub use critical::{beta_cr, beta_cr_search, beta_cr_sweep, CriticalMethod, CriticalResult, Family, SweepRow};
pub use dispersion1d::{solve_bound_states, BcKind};
pub use dispersion2d::{solve_bound_states_2d, Problem2D, SecularMode};

pub type Problem1D = dispersion1d::HalfLineProblem<f64>;
pub type BoundaryCondition = dispersion1d::BoundaryCondition<f64>;
pub type BoundState = dispersion1d::BoundState<f64>;
pub type PiecewiseEigenfunction = dispersion1d::PiecewiseEigenfunction<f64>;
pub type ReducedForm = dispersion1d::ReducedForm<f64>;
pub type FdConfig = fdoracle::FdConfig<f64>;
pub type Bracket = numerics::Bracket<f64>;
pub type RootResult = numerics::RootResult<f64>;
