//! Critical coupling `β_cr`: the infimum of `β` at which a bound state exists.
//!
//! Three routes are available. The Dirichlet half-line has the closed form
//! `1/a`. Any problem can be bisected on the existence predicate, which is
//! how the half-line thresholds are certified numerically. Radial problems
//! whose states approach the threshold with `k → 0` faster than any scan can
//! resolve are handled instead by following the curve `β(k)` down to
//! `k = 10⁻¹⁶⁰` and extrapolating in `1/ln(1/k)`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dispersion1d::{solve_bound_states, BcKind, BoundaryCondition, Dispersion1dError, HalfLineProblem};
use crate::dispersion2d::{beta_of_k, solve_bound_states_2d, Dispersion2dError, Problem2D, SecularMode};

/// Coupling at which existence is probed before declaring `β_cr = 0`.
pub const ZERO_PROBE: f64 = 1e-12;

/// The upper bracket is doubled from 1 up to this value.
pub const DOUBLING_CAP: f64 = 1_099_511_627_776.0; // 2^40

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CriticalMethod {
    AnalyticDirichlet1D,
    ExistenceBisection,
    CurveInfimum,
}

impl CriticalMethod {
    pub fn name(self) -> &'static str {
        match self {
            CriticalMethod::AnalyticDirichlet1D => "analytic-dirichlet-1d",
            CriticalMethod::ExistenceBisection => "existence-bisection",
            CriticalMethod::CurveInfimum => "curve-infimum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CriticalStatus {
    /// `beta_cr` is pinned to within the requested tolerance.
    Converged,
    /// A bound state already exists at [`ZERO_PROBE`]; `beta_cr` is reported as 0.
    ZeroByProbe,
    /// Existence was not monotone in `β`, or the curve was not monotone in
    /// `k`; only the bracket is meaningful.
    BracketOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    pub beta: f64,
    pub exists: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalResult {
    pub beta_cr: f64,
    pub bracket: (f64, f64),
    pub method: CriticalMethod,
    pub status: CriticalStatus,
    pub iterations: usize,
    /// Bracket width for bisection, extrapolation error estimate for the
    /// curve infimum, zero for the closed form.
    pub residual: f64,
    /// Every existence probe in the order it was made.
    pub trace: Vec<Probe>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriticalError {
    #[error("a must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("no bound state found for any coupling up to 2^40")]
    NoThreshold,
    #[error(transparent)]
    HalfLine(#[from] Dispersion1dError),
    #[error(transparent)]
    Radial(#[from] Dispersion2dError),
}

/// A problem with its coupling left free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Family {
    HalfLine { a: f64, bc: BoundaryCondition<f64> },
    Radial { a: f64, mode: SecularMode },
}

impl Family {
    pub fn a(&self) -> f64 {
        match *self {
            Family::HalfLine { a, .. } | Family::Radial { a, .. } => a,
        }
    }

    pub fn with_a(self, a: f64) -> Self {
        match self {
            Family::HalfLine { bc, .. } => Family::HalfLine { a, bc },
            Family::Radial { mode, .. } => Family::Radial { a, mode },
        }
    }

    /// Whether a bound state exists at coupling `beta`.
    pub fn has_bound_state(&self, beta: f64) -> Result<bool, CriticalError> {
        match *self {
            Family::HalfLine { a, bc } => {
                let problem = HalfLineProblem::new(a, beta, bc)?;
                Ok(!solve_bound_states(&problem)?.is_empty())
            }
            Family::Radial { a, mode } => {
                let problem = Problem2D::new(a, beta, mode)?;
                Ok(!solve_bound_states_2d(&problem)?.is_empty())
            }
        }
    }
}

/// `β_cr = 1/a` for the Dirichlet half-line.
pub fn beta_cr_analytic_dirichlet_1d(a: f64) -> Result<f64, CriticalError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(CriticalError::InvalidLength(a));
    }
    Ok(1.0 / a)
}

fn flips(trace: &[Probe]) -> usize {
    let mut sorted = trace.to_vec();
    sorted.sort_by(|x, y| x.beta.total_cmp(&y.beta));
    sorted.windows(2).filter(|w| w[0].exists != w[1].exists).count()
}

/// Bisection on the existence predicate until the bracket is narrower than `tol`.
///
/// A state at [`ZERO_PROBE`] short-circuits to `β_cr = 0`. Otherwise the
/// upper end is doubled from 1 until a state appears, the bracket is
/// bisected, and four couplings above the bracket are probed to confirm that
/// existence does not switch off again.
pub fn beta_cr_search(family: &Family, tol: f64) -> Result<CriticalResult, CriticalError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CriticalError::InvalidTolerance(tol));
    }
    let mut trace = Vec::new();
    let mut probe = |beta: f64| -> Result<bool, CriticalError> {
        let exists = family.has_bound_state(beta)?;
        trace.push(Probe { beta, exists });
        Ok(exists)
    };

    if probe(ZERO_PROBE)? {
        return Ok(CriticalResult {
            beta_cr: 0.0,
            bracket: (0.0, ZERO_PROBE),
            method: CriticalMethod::ExistenceBisection,
            status: CriticalStatus::ZeroByProbe,
            iterations: 0,
            residual: ZERO_PROBE,
            trace,
        });
    }

    let mut lo = ZERO_PROBE;
    let mut hi = 1.0;
    while !probe(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > DOUBLING_CAP {
            return Err(CriticalError::NoThreshold);
        }
    }

    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    for step in 1..=4 {
        probe(hi * (1.0 + 0.5f64.powi(step)))?;
    }

    let status = if flips(&trace) > 1 {
        CriticalStatus::BracketOnly
    } else {
        CriticalStatus::Converged
    };
    Ok(CriticalResult {
        beta_cr: 0.5 * (lo + hi),
        bracket: (lo, hi),
        method: CriticalMethod::ExistenceBisection,
        status,
        iterations,
        residual: hi - lo,
        trace,
    })
}

/// Neville's algorithm: value at 0 of the polynomial through `(s, v)`.
fn neville_at_zero(s: &[f64], v: &[f64]) -> f64 {
    let mut p = v.to_vec();
    let n = s.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (s[i + m] * p[i] - s[i] * p[i + 1]) / (s[i + m] - s[i]);
        }
    }
    p[0]
}

/// Exponents `e` of the wavenumbers `k = 10^{-e}` used for the extrapolation.
const EXTRAPOLATION_DECADES: [f64; 5] = [10.0, 20.0, 40.0, 80.0, 160.0];

/// Infimum of the radial curve `β(k)` as `k → 0`.
///
/// The curve is sampled on 400 log-spaced points in `[10⁻⁶, 10³]`; if it is
/// strictly increasing there, its values at `k = 10^{-10·2^j}` are
/// extrapolated polynomially in `s = 1/ln(1/k)` to `s = 0`. A non-monotone
/// or pole-crossing curve gives a bracket-only result `(0, min β)`.
pub fn beta_cr_curve_infimum(a: f64, mode: SecularMode) -> Result<CriticalResult, CriticalError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(CriticalError::InvalidLength(a));
    }
    let points = 400;
    let mut grid = Vec::with_capacity(points);
    let mut monotone = true;
    for i in 0..points {
        let k = 10f64.powf(-6.0 + 9.0 * i as f64 / (points - 1) as f64);
        match beta_of_k(k, a, mode) {
            Ok(beta) => {
                if let Some(&prev) = grid.last() {
                    monotone &= beta > prev;
                }
                grid.push(beta);
            }
            Err(Dispersion2dError::Pole(_)) => monotone = false,
            Err(e) => return Err(e.into()),
        }
    }
    let sampled_min = grid.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    if !monotone {
        return Ok(CriticalResult {
            beta_cr: sampled_min,
            bracket: (0.0, sampled_min),
            method: CriticalMethod::CurveInfimum,
            status: CriticalStatus::BracketOnly,
            iterations: points,
            residual: sampled_min,
            trace: Vec::new(),
        });
    }

    let ln10 = std::f64::consts::LN_10;
    let mut s = Vec::with_capacity(EXTRAPOLATION_DECADES.len());
    let mut v = Vec::with_capacity(EXTRAPOLATION_DECADES.len());
    for e in EXTRAPOLATION_DECADES {
        s.push(1.0 / (e * ln10));
        v.push(beta_of_k(10f64.powf(-e), a, mode)?);
    }
    let full = neville_at_zero(&s, &v);
    let reduced = neville_at_zero(&s[1..], &v[1..]);
    let estimate = full.max(0.0);
    let err = (full - reduced).abs();
    Ok(CriticalResult {
        beta_cr: estimate,
        bracket: ((estimate - err).max(0.0), estimate + err),
        method: CriticalMethod::CurveInfimum,
        status: CriticalStatus::Converged,
        iterations: points + EXTRAPOLATION_DECADES.len(),
        residual: err,
        trace: Vec::new(),
    })
}

/// `β_cr` by the method suited to the family.
///
/// Half-line problems are bisected. Radial problems are first probed at
/// [`ZERO_PROBE`]; if no state exists there, the curve infimum is used.
pub fn beta_cr(family: &Family, tol: f64) -> Result<CriticalResult, CriticalError> {
    match *family {
        Family::HalfLine { .. } => beta_cr_search(family, tol),
        Family::Radial { a, mode } => {
            if family.has_bound_state(ZERO_PROBE)? {
                return Ok(CriticalResult {
                    beta_cr: 0.0,
                    bracket: (0.0, ZERO_PROBE),
                    method: CriticalMethod::ExistenceBisection,
                    status: CriticalStatus::ZeroByProbe,
                    iterations: 0,
                    residual: ZERO_PROBE,
                    trace: vec![Probe {
                        beta: ZERO_PROBE,
                        exists: true,
                    }],
                });
            }
            beta_cr_curve_infimum(a, mode)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    /// NaN when the row failed.
    pub beta_cr: f64,
    pub method: Option<CriticalMethod>,
    pub status: Option<CriticalStatus>,
    /// `a·β_cr` for half-line rows, `β_cr·b ln b` for radial rows.
    pub check: f64,
    pub error: Option<String>,
}

fn check_value(family: &Family, beta_cr: f64) -> f64 {
    match *family {
        Family::HalfLine { a, .. } => a * beta_cr,
        Family::Radial { a, .. } => {
            let b = 1.0 + a;
            beta_cr * b * b.ln()
        }
    }
}

/// One row per `a`, in input order; a failing row is flagged, not fatal.
pub fn beta_cr_sweep(a_values: &[f64], family: &Family, tol: f64) -> Vec<SweepRow> {
    a_values
        .par_iter()
        .map(|&a| {
            let member = family.with_a(a);
            match beta_cr(&member, tol) {
                Ok(result) => SweepRow {
                    a,
                    beta_cr: result.beta_cr,
                    method: Some(result.method),
                    status: Some(result.status),
                    check: check_value(&member, result.beta_cr),
                    error: None,
                },
                Err(e) => SweepRow {
                    a,
                    beta_cr: f64::NAN,
                    method: None,
                    status: None,
                    check: f64::NAN,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Half-line family shorthand.
pub fn halfline(a: f64, kind: BcKind, sigma: f64) -> Family {
    let bc = match kind {
        BcKind::Dirichlet => BoundaryCondition::dirichlet(),
        BcKind::Neumann => BoundaryCondition::neumann(),
        BcKind::Robin => BoundaryCondition::robin(sigma),
    };
    Family::HalfLine { a, bc }
}
