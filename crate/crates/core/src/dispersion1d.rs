//! Half-line problem `-y'' - β δ(x - a) y = λ y` on `[0, ∞)`.
//!
//! For `λ = -k² < 0` the solution is a boundary-adapted combination of
//! `e^{±kx}` on `[0, a]` and `e^{k(a-x)}` beyond the delta, normalised to
//! `y(a) = 1`. Matching the derivative jump `-[y']_a = β y(a)` gives the
//! dispersion relation `F(k) = β` with
//!
//! | condition            | `F(k)`                                       |
//! |----------------------|----------------------------------------------|
//! | Dirichlet `y(0)=0`   | `k + k coth(ka)`                             |
//! | Neumann `y'(0)=0`    | `k + k tanh(ka)`                             |
//! | Robin `y'(0)+σy(0)=0`| `k (1 + tanh ka)(k - σ) / (k - σ tanh ka)`   |
//!
//! The Robin entry is the matching equation with numerator and denominator
//! multiplied through by `tanh(ka)`; it has a pole where `k coth(ka) = σ`,
//! which lies inside `(0, σ)` exactly when `σa > 1`.

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{find_roots, RootError, RootResult};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BcKind {
    Dirichlet,
    Neumann,
    Robin,
}

impl std::fmt::Display for BcKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BcKind::Dirichlet => "dirichlet",
            BcKind::Neumann => "neumann",
            BcKind::Robin => "robin",
        })
    }
}

/// Boundary condition at `x = 0`. `sigma` is only read for Robin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryCondition<T> {
    pub kind: BcKind,
    pub sigma: T,
}

impl<T: Real> BoundaryCondition<T> {
    pub fn dirichlet() -> Self {
        Self {
            kind: BcKind::Dirichlet,
            sigma: T::one(),
        }
    }

    pub fn neumann() -> Self {
        Self {
            kind: BcKind::Neumann,
            sigma: T::one(),
        }
    }

    /// `y'(0) + σ y(0) = 0`.
    pub fn robin(sigma: T) -> Self {
        Self {
            kind: BcKind::Robin,
            sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Dispersion1dError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),
    #[error("Robin dispersion function has a pole at k = {0}")]
    Pole(f64),
    #[error("reduced form is undefined for B = 0")]
    ZeroCoupling,
    #[error("no reduced transcendental form is implemented for {0} conditions")]
    UnsupportedReduction(BcKind),
    #[error("Robin eigenfunction normalisation vanishes at k = {0}")]
    DegenerateNormalization(f64),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Delta at `x = a` with coupling `beta` on the half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfLineProblem<T> {
    pub a: T,
    pub beta: T,
    pub bc: BoundaryCondition<T>,
}

impl<T: Real> HalfLineProblem<T> {
    pub fn new(a: T, beta: T, bc: BoundaryCondition<T>) -> Result<Self, Dispersion1dError> {
        let problem = Self { a, beta, bc };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<(), Dispersion1dError> {
        if !(self.a > T::zero()) || !self.a.is_finite() {
            return Err(Dispersion1dError::InvalidProblem(format!("a = {} must be positive", self.a)));
        }
        if !(self.beta >= T::zero()) || !self.beta.is_finite() {
            return Err(Dispersion1dError::InvalidProblem(format!(
                "beta = {} must be nonnegative",
                self.beta
            )));
        }
        if self.bc.kind == BcKind::Robin && !self.bc.sigma.is_finite() {
            return Err(Dispersion1dError::InvalidProblem(format!(
                "sigma = {} must be finite",
                self.bc.sigma
            )));
        }
        Ok(())
    }

    pub fn with_beta(self, beta: T) -> Self {
        Self { beta, ..self }
    }

    /// Upper end of the root scan, `max(10β, 10/a, 10, 10|σ|)`.
    pub fn k_max(&self) -> T {
        let ten = T::lit(10.0);
        let mut k_max = (ten * self.beta).max(ten / self.a).max(ten);
        if self.bc.kind == BcKind::Robin {
            k_max = k_max.max(ten * self.bc.sigma.abs());
        }
        k_max
    }
}

/// Dimensionless variables `z = 2ka`, `B = βa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedForm<T> {
    pub z: T,
    pub b: T,
}

impl<T: Real> ReducedForm<T> {
    pub fn from_problem(k: T, problem: &HalfLineProblem<T>) -> Self {
        Self {
            z: T::lit(2.0) * k * problem.a,
            b: problem.beta * problem.a,
        }
    }

    /// Wavenumber `k = z / (2a)`.
    pub fn wavenumber(&self, a: T) -> T {
        self.z / (T::lit(2.0) * a)
    }
}

/// A solved bound state with `lambda = -k²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState<T> {
    pub k: T,
    pub lambda: T,
    pub dispersion_residual: T,
    pub jump_residual: T,
    pub converged: bool,
}

impl<T: Real> BoundState<T> {
    pub fn new(k: T, dispersion_residual: T, jump_residual: T, converged: bool) -> Self {
        Self {
            k,
            lambda: -(k * k),
            dispersion_residual,
            jump_residual,
            converged,
        }
    }
}

/// `coth x` written with `expm1` so that `k coth(ka) → 1/a` cleanly as `k → 0`.
#[cfg(not(feature = "fault-coth"))]
fn coth<T: Real>(x: T) -> T {
    T::one() + T::lit(2.0) / (x + x).exp_m1()
}

#[cfg(feature = "fault-coth")]
fn coth<T: Real>(x: T) -> T {
    T::lit(1.1) + T::lit(2.0) / (x + x).exp_m1()
}

/// Left-hand side `F(k)` of the dispersion relation `F(k) = β`.
pub fn dispersion_lhs<T: Real>(k: T, problem: &HalfLineProblem<T>) -> Result<T, Dispersion1dError> {
    if !(k > T::zero()) {
        return Err(Dispersion1dError::NonPositiveWavenumber(k.to_f64().unwrap_or(f64::NAN)));
    }
    let ka = k * problem.a;
    match problem.bc.kind {
        BcKind::Dirichlet => Ok(k + k * coth(ka)),
        BcKind::Neumann => Ok(k + k * ka.tanh()),
        BcKind::Robin => {
            let sigma = problem.bc.sigma;
            let t = ka.tanh();
            let denom = k - sigma * t;
            if denom == T::zero() {
                return Err(Dispersion1dError::Pole(k.to_f64().unwrap_or(f64::NAN)));
            }
            Ok(k * (T::one() + t) * (k - sigma) / denom)
        }
    }
}

/// `F(k) - β`; zero exactly at bound-state wavenumbers.
pub fn dispersion_residual<T: Real>(k: T, problem: &HalfLineProblem<T>) -> Result<T, Dispersion1dError> {
    Ok(dispersion_lhs(k, problem)? - problem.beta)
}

/// Robin relation cleared of its pole, `(k-σ)(k(1+t)-β) - βσ(1-t)`, which
/// equals `(k - σt)(F - β)`; `1 - t` is formed from `e^{2ka}` directly so the
/// root just above `σ` stays resolved when `σa` is large.
fn robin_cleared_residual<T: Real>(k: T, problem: &HalfLineProblem<T>) -> T {
    let (sigma, beta) = (problem.bc.sigma, problem.beta);
    let ka = k * problem.a;
    let one_minus_t = T::lit(2.0) / ((ka + ka).exp() + T::one());
    let one_plus_t = T::lit(2.0) - one_minus_t;
    (k - sigma) * (k * one_plus_t - beta) - beta * sigma * one_minus_t
}

/// `e^{-z} - (1 - z/B)` (Dirichlet) or `e^{-z} - (z/B - 1)` (Neumann).
pub fn reduced_residual<T: Real>(form: ReducedForm<T>, kind: BcKind) -> Result<T, Dispersion1dError> {
    if form.b == T::zero() {
        return Err(Dispersion1dError::ZeroCoupling);
    }
    // e^{-z} - 1 kept as expm1 so the Dirichlet form stays accurate as z → 0.
    let decay_m1 = (-form.z).exp_m1();
    let ratio = form.z / form.b;
    match kind {
        BcKind::Dirichlet => Ok(decay_m1 + ratio),
        BcKind::Neumann => Ok(decay_m1 + T::lit(2.0) - ratio),
        BcKind::Robin => Err(Dispersion1dError::UnsupportedReduction(kind)),
    }
}

fn root_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

/// Pole of the Robin dispersion relation, the root of `k = σ tanh(ka)` in
/// `(0, σ)`; it exists only when `σa > 1`.
pub fn robin_pole<T: Real>(problem: &HalfLineProblem<T>) -> Option<T> {
    robin_pole_bracket(problem).map(|(lo, hi)| T::lit(0.5) * (lo + hi))
}

/// Adjacent floats `(lo, hi)` straddling the Robin pole.
fn robin_pole_bracket<T: Real>(problem: &HalfLineProblem<T>) -> Option<(T, T)> {
    let sigma = problem.bc.sigma;
    if problem.bc.kind != BcKind::Robin || !(sigma > T::zero()) || !(sigma * problem.a > T::one()) {
        return None;
    }
    let h = |k: T| k - sigma * (k * problem.a).tanh();
    let (mut lo, mut hi) = (T::zero(), sigma);
    for _ in 0..256 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

/// Scan intervals for the root search.
///
/// For Robin with `σ > 0`, `F < 0` between the pole and `σ`, so that stretch
/// is skipped and the scan runs on `(0, pole)` and `[σ, k_max)`. Once `σa`
/// is large the pole, the zero of `F` at `σ` and the ground-state root just
/// above `σ` all crowd into a width of order `e^{-2σa}`, far below any
/// uniform scan step, so they must be separated explicitly.
fn scan_intervals<T: Real>(problem: &HalfLineProblem<T>) -> Vec<(T, T)> {
    let k_lo = T::min_positive_value().sqrt();
    let k_max = problem.k_max();
    let sigma = problem.bc.sigma;
    if problem.bc.kind != BcKind::Robin || !(sigma > T::zero()) {
        return vec![(k_lo, k_max)];
    }
    match robin_pole_bracket(problem) {
        // `left` is on the side where `F → +∞`, so no false sign change.
        Some((left, _)) => vec![(k_lo, left), (sigma, k_max)],
        None => vec![(k_lo, sigma), (sigma, k_max)],
    }
}

/// All bound states of `problem`, ground state (most negative `λ`) first.
pub fn solve_bound_states<T: Real>(problem: &HalfLineProblem<T>) -> Result<Vec<BoundState<T>>, Dispersion1dError> {
    problem.validate()?;
    let residual = |k: T| match dispersion_residual(k, problem) {
        Ok(v) => v,
        Err(_) => T::infinity(),
    };
    // The cleared form vanishes at k = 0 too, so it is used above σ only.
    let cleared = |k: T| robin_cleared_residual(k, problem);
    let mut roots = Vec::new();
    for (lo, hi) in scan_intervals(problem) {
        let found = if problem.bc.kind == BcKind::Robin && lo == problem.bc.sigma {
            find_roots(cleared, (lo, hi), usize::MAX, root_tolerance())?
        } else {
            find_roots(residual, (lo, hi), usize::MAX, root_tolerance())?
        };
        for root in found {
            // A zero on a shared endpoint is reported by both neighbours.
            let duplicate = roots
                .last()
                .is_some_and(|prev: &RootResult<T>| (root.root - prev.root).abs() <= T::epsilon() * root.root);
            if !duplicate {
                roots.push(root);
            }
        }
    }

    let mut states = Vec::with_capacity(roots.len());
    for root in roots.into_iter().rev() {
        let jump = match eigenfunction(root.root, problem) {
            Ok(eigfn) => jump_residual(&eigfn, problem.beta),
            Err(_) => T::nan(),
        };
        states.push(BoundState::new(root.root, root.residual, jump, root.converged));
    }
    Ok(states)
}

/// Solves the reduced Dirichlet/Neumann equation for `z` on `(√ε, z_max)`.
///
/// Below `√ε` both sides of the Dirichlet form agree to rounding, so the
/// scan starts there.
pub fn solve_reduced<T: Real>(b: T, kind: BcKind, z_max: T) -> Result<Vec<T>, Dispersion1dError> {
    if b == T::zero() {
        return Err(Dispersion1dError::ZeroCoupling);
    }
    let f = |z: T| reduced_residual(ReducedForm { z, b }, kind).unwrap_or(T::nan());
    let roots = find_roots(f, (T::epsilon().sqrt(), z_max), usize::MAX, root_tolerance())?;
    Ok(roots.into_iter().map(|r| r.root).collect())
}

/// Which side of the breakpoint a one-sided derivative is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A two-region closed-form eigenfunction normalised to 1 at its breakpoint.
pub trait Eigenfunction<T: Real> {
    fn breakpoint(&self) -> T;

    fn value(&self, x: T) -> T;

    /// Derivative at `x`; `side` only matters at the breakpoint itself.
    fn derivative(&self, x: T, side: Side) -> T;

    /// Weight multiplying `β y(breakpoint)` in the jump condition.
    fn jump_weight(&self) -> T {
        T::one()
    }
}

/// `|-(y'(b⁺) - y'(b⁻)) - β y(b)|` from the analytic one-sided derivatives.
pub fn jump_residual<T: Real, E: Eigenfunction<T> + ?Sized>(eigfn: &E, beta: T) -> T {
    let b = eigfn.breakpoint();
    let jump = eigfn.derivative(b, Side::Right) - eigfn.derivative(b, Side::Left);
    (-jump - beta * eigfn.jump_weight() * eigfn.value(b)).abs()
}

/// Region-I profile on `[0, a]`, before normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum InnerProfile<T> {
    /// `sinh(kx)`
    Sinh,
    /// `cosh(kx)`
    Cosh,
    /// `k cosh(kx) - σ sinh(kx)`
    Robin { sigma: T },
}

/// `y₁(x)` on `[0, a]` and `y₂(x) = e^{k(a-x)}` on `[a, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiecewiseEigenfunction<T> {
    pub breakpoint: T,
    pub k: T,
    pub inner: InnerProfile<T>,
}

impl<T: Real> PiecewiseEigenfunction<T> {
    /// `e^{-kx}`-scaled inner profile and its derivative: `(P(x), P'(x))` with
    /// `y₁ = e^{k(x-a)} P(x)/P(a)`.
    fn scaled_inner(&self, x: T) -> (T, T) {
        let k = self.k;
        let two = T::lit(2.0);
        let one_minus = -(-two * k * x).exp_m1();
        let one_plus = T::one() + (-two * k * x).exp();
        match self.inner {
            InnerProfile::Sinh => (one_minus, k * one_plus),
            InnerProfile::Cosh => (one_plus, k * one_minus),
            InnerProfile::Robin { sigma } => (
                k * one_plus - sigma * one_minus,
                k * (k * one_minus - sigma * one_plus),
            ),
        }
    }

    fn inner_norm(&self) -> T {
        self.scaled_inner(self.breakpoint).0
    }

    fn inner_value(&self, x: T) -> T {
        (self.k * (x - self.breakpoint)).exp() * self.scaled_inner(x).0 / self.inner_norm()
    }

    fn inner_derivative(&self, x: T) -> T {
        (self.k * (x - self.breakpoint)).exp() * self.scaled_inner(x).1 / self.inner_norm()
    }

    fn outer_value(&self, x: T) -> T {
        (self.k * (self.breakpoint - x)).exp()
    }
}

impl<T: Real> Eigenfunction<T> for PiecewiseEigenfunction<T> {
    fn breakpoint(&self) -> T {
        self.breakpoint
    }

    fn value(&self, x: T) -> T {
        if x < self.breakpoint {
            self.inner_value(x)
        } else {
            self.outer_value(x)
        }
    }

    fn derivative(&self, x: T, side: Side) -> T {
        let left = x < self.breakpoint || (x == self.breakpoint && side == Side::Left);
        if left {
            self.inner_derivative(x)
        } else {
            -self.k * self.outer_value(x)
        }
    }
}

/// Closed-form eigenfunction at wavenumber `k` for the problem's boundary condition.
pub fn eigenfunction<T: Real>(k: T, problem: &HalfLineProblem<T>) -> Result<PiecewiseEigenfunction<T>, Dispersion1dError> {
    if !(k > T::zero()) {
        return Err(Dispersion1dError::NonPositiveWavenumber(k.to_f64().unwrap_or(f64::NAN)));
    }
    let inner = match problem.bc.kind {
        BcKind::Dirichlet => InnerProfile::Sinh,
        BcKind::Neumann => InnerProfile::Cosh,
        BcKind::Robin => InnerProfile::Robin {
            sigma: problem.bc.sigma,
        },
    };
    let eigfn = PiecewiseEigenfunction {
        breakpoint: problem.a,
        k,
        inner,
    };
    if eigfn.inner_norm() == T::zero() {
        return Err(Dispersion1dError::DegenerateNormalization(k.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(eigfn)
}

/// Convenience wrapper taking a solved state.
pub fn eigenfunction_of<T: Real>(
    state: &BoundState<T>,
    problem: &HalfLineProblem<T>,
) -> Result<PiecewiseEigenfunction<T>, Dispersion1dError> {
    eigenfunction(state.k, problem)
}
