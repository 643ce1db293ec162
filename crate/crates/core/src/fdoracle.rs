//! Finite-difference spectra used as an independent check on the closed forms.
//!
//! Both discretisations are the standard three-point stencil on a uniform
//! grid, truncated with a Dirichlet condition at the far end. The delta is
//! either a `-β/h` diagonal entry at the node sitting on the breakpoint or a
//! rectangular well of depth `β/w` and width `w` averaged over each cell.

use serde::Serialize;
use thiserror::Error;

use crate::dispersion1d::{BcKind, HalfLineProblem};
use crate::numerics::{richardson, sturm_count, tridiag_smallest_eigs, TridiagError};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DeltaHandling<T> {
    /// `-β/h` on the node at the breakpoint; the step is shrunk so that the
    /// breakpoint is a node.
    OnNode,
    /// Well of depth `β/w` centred on the breakpoint; needs `w ≥ 2h`.
    NarrowWell { width: T },
}

/// Grid step, truncation length (or outer radius) and delta realisation.
///
/// The far boundary is always Dirichlet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdConfig<T> {
    pub h: T,
    pub extent: T,
    pub delta: DeltaHandling<T>,
}

impl<T: Real> FdConfig<T> {
    pub fn on_node(h: T, extent: T) -> Self {
        Self {
            h,
            extent,
            delta: DeltaHandling::OnNode,
        }
    }

    pub fn narrow_well(h: T, extent: T, width: T) -> Self {
        Self {
            h,
            extent,
            delta: DeltaHandling::NarrowWell { width },
        }
    }

    pub fn with_h(self, h: T) -> Self {
        Self { h, ..self }
    }

    pub fn with_extent(self, extent: T) -> Self {
        Self { extent, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdError {
    #[error("invalid grid: {0}")]
    InvalidConfig(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Tridiag(#[from] TridiagError),
}

fn invalid<T: Real>(what: &str, value: T) -> FdError {
    FdError::InvalidConfig(format!("{what} = {value}"))
}

/// Step actually used: `h` itself for a well, `a / round(a/h)` on a node.
pub fn aligned_step<T: Real>(breakpoint: T, config: &FdConfig<T>) -> Result<T, FdError> {
    if !(config.h > T::zero() && config.h.is_finite()) {
        return Err(invalid("h", config.h));
    }
    if !(config.extent > breakpoint && config.extent.is_finite()) {
        return Err(FdError::InvalidConfig(format!(
            "extent {} must exceed the breakpoint {}",
            config.extent, breakpoint
        )));
    }
    match config.delta {
        DeltaHandling::OnNode => {
            let cells = (breakpoint / config.h).round().max(T::one());
            Ok(breakpoint / cells)
        }
        DeltaHandling::NarrowWell { width } => {
            if !(width >= T::lit(2.0) * config.h) {
                return Err(FdError::InvalidConfig(format!(
                    "well width {} is below twice the step {}",
                    width, config.h
                )));
            }
            if width / T::lit(2.0) > breakpoint {
                return Err(FdError::InvalidConfig(format!("well width {width} reaches past the boundary")));
            }
            Ok(config.h)
        }
    }
}

/// Cell-averaged potential at node `x` with cell half-width `h/2`.
fn well_average<T: Real>(x: T, h: T, centre: T, width: T, depth: T) -> T {
    let half = T::lit(0.5);
    let lo = (x - half * h).max(centre - half * width);
    let hi = (x + half * h).min(centre + half * width);
    if hi > lo {
        -depth * (hi - lo) / h
    } else {
        T::zero()
    }
}

/// Symmetric tridiagonal matrix `(diag, offdiag)` for the half-line problem.
pub fn halfline_matrix<T: Real>(problem: &HalfLineProblem<T>, config: &FdConfig<T>) -> Result<(Vec<T>, Vec<T>), FdError> {
    problem
        .validate()
        .map_err(|e| FdError::InvalidProblem(e.to_string()))?;
    let h = aligned_step(problem.a, config)?;
    let n_total = (config.extent / h).round().to_usize().unwrap_or(0);
    if n_total < 3 {
        return Err(invalid("extent / h", config.extent / h));
    }
    let inv_h2 = T::one() / (h * h);
    let two = T::lit(2.0);
    // Unknowns are x_first .. x_{n_total-1}; x_{n_total} carries the far Dirichlet condition.
    let first = match problem.bc.kind {
        BcKind::Dirichlet => 1,
        BcKind::Neumann | BcKind::Robin => 0,
    };
    let dim = n_total - first;
    let mut diag = vec![two * inv_h2; dim];
    let mut off = vec![-inv_h2; dim - 1];
    match problem.bc.kind {
        BcKind::Dirichlet => {}
        // Ghost node y₋₁ = y₁ (Neumann) or y₋₁ = y₁ + 2hσy₀ (Robin), then the
        // first row is rescaled by 1/√2 to restore symmetry.
        BcKind::Neumann => off[0] = -two.sqrt() * inv_h2,
        BcKind::Robin => {
            diag[0] = two * (T::one() - h * problem.bc.sigma) * inv_h2;
            off[0] = -two.sqrt() * inv_h2;
        }
    }
    match config.delta {
        DeltaHandling::OnNode => {
            let node = (problem.a / h).round().to_usize().unwrap_or(0);
            diag[node - first] = diag[node - first] - problem.beta / h;
        }
        DeltaHandling::NarrowWell { width } => {
            let depth = problem.beta / width;
            for (j, d) in diag.iter_mut().enumerate() {
                let x = h * T::of_usize(j + first);
                *d = *d + well_average(x, h, problem.a, width, depth);
            }
        }
    }
    Ok((diag, off))
}

/// The `count` smallest eigenvalues of the discretised half-line operator.
pub fn fd_halfline_spectrum<T: Real>(
    problem: &HalfLineProblem<T>,
    config: &FdConfig<T>,
    count: usize,
) -> Result<Vec<T>, FdError> {
    let (diag, off) = halfline_matrix(problem, config)?;
    Ok(tridiag_smallest_eigs(&diag, &off, count)?)
}

/// Richardson-extrapolated half-line eigenvalues from steps `h` and `h/2`.
///
/// `h` is aligned first so both grids put the delta on a node.
pub fn fd_halfline_richardson<T: Real>(
    problem: &HalfLineProblem<T>,
    config: &FdConfig<T>,
    count: usize,
) -> Result<Vec<T>, FdError> {
    let h = aligned_step(problem.a, config)?;
    let coarse = fd_halfline_spectrum(problem, &config.with_h(h), count)?;
    let fine = fd_halfline_spectrum(problem, &config.with_h(h / T::lit(2.0)), count)?;
    Ok(coarse.iter().zip(&fine).map(|(&c, &f)| richardson(c, f, 2)).collect())
}

/// Smallest eigenvalue for each well width, with a fixed step.
pub fn narrow_well_convergence<T: Real>(
    problem: &HalfLineProblem<T>,
    h: T,
    extent: T,
    widths: &[T],
) -> Result<Vec<(T, T)>, FdError> {
    if widths.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(FdError::InvalidConfig("well widths must be strictly decreasing".into()));
    }
    widths
        .iter()
        .map(|&w| {
            let config = FdConfig::narrow_well(h, extent, w);
            let lambda = fd_halfline_spectrum(problem, &config, 1)?[0];
            Ok((w, lambda))
        })
        .collect()
}

/// Radial operator `-(1/r)(r y')' - β δ(r - b) y` on `[1, R]`, Dirichlet at
/// both ends, symmetrised by the node weights `√rᵢ`. The step is aligned
/// so that `b` is a node.
pub fn radial_matrix(a: f64, beta: f64, config: &FdConfig<f64>) -> Result<(Vec<f64>, Vec<f64>), FdError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(FdError::InvalidProblem(format!("a = {a}")));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(FdError::InvalidProblem(format!("beta = {beta}")));
    }
    if config.extent <= 1.0 + a {
        return Err(FdError::InvalidConfig(format!(
            "outer radius {} must exceed the shell radius {}",
            config.extent,
            1.0 + a
        )));
    }
    // Offsets from r = 1 play the role of x in the half-line grid.
    let shifted = FdConfig {
        extent: config.extent - 1.0,
        ..*config
    };
    let h = aligned_step(a, &shifted)?;
    let n_total = (shifted.extent / h).round() as usize;
    if n_total < 3 {
        return Err(invalid("(R - 1) / h", shifted.extent / h));
    }
    let inv_h2 = 1.0 / (h * h);
    let r = |i: usize| 1.0 + h * i as f64;
    let dim = n_total - 1;
    let mut diag = Vec::with_capacity(dim);
    let mut off = Vec::with_capacity(dim - 1);
    for i in 1..n_total {
        let (rm, rp) = (r(i) - 0.5 * h, r(i) + 0.5 * h);
        diag.push((rm + rp) * inv_h2 / r(i));
        if i + 1 < n_total {
            off.push(-rp * inv_h2 / (r(i) * r(i + 1)).sqrt());
        }
    }
    match config.delta {
        DeltaHandling::OnNode => {
            let node = (a / h).round() as usize;
            diag[node - 1] -= beta / h;
        }
        DeltaHandling::NarrowWell { width } => {
            let depth = beta / width;
            for (j, d) in diag.iter_mut().enumerate() {
                *d += well_average(h * (j + 1) as f64, h, a, width, depth);
            }
        }
    }
    Ok((diag, off))
}

/// The `count` smallest eigenvalues of the discretised radial operator.
pub fn fd_radial_spectrum(a: f64, beta: f64, config: &FdConfig<f64>, count: usize) -> Result<Vec<f64>, FdError> {
    let (diag, off) = radial_matrix(a, beta, config)?;
    Ok(tridiag_smallest_eigs(&diag, &off, count)?)
}

/// Richardson-extrapolated radial eigenvalues from steps `h` and `h/2`.
pub fn fd_radial_richardson(a: f64, beta: f64, config: &FdConfig<f64>, count: usize) -> Result<Vec<f64>, FdError> {
    let shifted = FdConfig {
        extent: config.extent - 1.0,
        ..*config
    };
    let h = aligned_step(a, &shifted)?;
    let coarse = fd_radial_spectrum(a, beta, &config.with_h(h), count)?;
    let fine = fd_radial_spectrum(a, beta, &config.with_h(h / 2.0), count)?;
    Ok(coarse.iter().zip(&fine).map(|(&c, &f)| richardson(c, f, 2)).collect())
}

/// Number of negative eigenvalues of the discretised radial operator.
pub fn fd_radial_negative_count(a: f64, beta: f64, config: &FdConfig<f64>) -> Result<usize, FdError> {
    let (diag, off) = radial_matrix(a, beta, config)?;
    Ok(sturm_count(&diag, &off, 0.0))
}

/// Number of negative eigenvalues of the discretised half-line operator.
pub fn fd_halfline_negative_count<T: Real>(problem: &HalfLineProblem<T>, config: &FdConfig<T>) -> Result<usize, FdError> {
    let (diag, off) = halfline_matrix(problem, config)?;
    Ok(sturm_count(&diag, &off, T::zero()))
}

/// Zero-energy threshold of the shell in the disk-to-`R` annulus:
/// `1/(b ln b) + 1/(b ln(R/b))`.
///
/// At `λ = 0` the solutions are `ln r` inside and `ln(R/r)` outside, and the
/// jump condition fixes `β`. As `R → ∞` this tends to `1/(b ln b)`.
pub fn box_threshold(a: f64, outer_radius: f64) -> f64 {
    let b = 1.0 + a;
    1.0 / (b * b.ln()) + 1.0 / (b * (outer_radius / b).ln())
}

/// Smallest `β` at which the discretised radial operator has a negative
/// eigenvalue, by bisection on the Sturm count to width `tol`.
pub fn fd_radial_threshold(a: f64, config: &FdConfig<f64>, tol: f64) -> Result<(f64, f64), FdError> {
    let exists = |beta: f64| fd_radial_negative_count(a, beta, config).map(|n| n > 0);
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while !exists(hi)? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 40 {
            return Err(FdError::InvalidProblem("no threshold below 2^40".into()));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if exists(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
