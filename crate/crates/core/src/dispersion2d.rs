//! Radial problem for a delta shell at `r = b = 1 + a` outside the unit disk.
//!
//! The radial equation `y'' + y'/r + β δ(r - b) y = -λ y` is posed on
//! `r ≥ 1` with `y(1) = 0`, `y(b) = 1` and decay at infinity. The exterior
//! solution is `K₀(kr)/K₀(kb)`; the interior one depends on the basis:
//!
//! * [`InteriorBasisMode::PaperLiteral`] uses `Y₀(k)J₀(kr) - J₀(k)Y₀(kr)`,
//!   which solves the equation for `λ = +k²`, not `-k²`.
//! * [`InteriorBasisMode::ModifiedInterior`] uses `K₀(k)I₀(kr) - I₀(k)K₀(kr)`,
//!   which solves it for `λ = -k²` and therefore matches the exterior piece.
//!
//! Matching `-[y']_b = β` gives `β/k = -g(k, a) + K₁(kb)/K₀(kb)` in the
//! modified basis and `β/k = g(k, a) + K₁(kb)/K₀(kb)` in the literal one. The
//! shortcut `g ≡ -1` turns the latter into `β = k (K₁(kb)/K₀(kb) - 1)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::dispersion1d::{BoundState, Eigenfunction, Side};
use crate::numerics::{find_roots, RootError, POLE_MAGNITUDE};
use crate::specfun::{i0_scaled, i1_scaled, j0, j1, k1_over_k0, k_scaled, y0, y1, RatioBoundParams};

/// Lower end of the wavenumber scan.
pub const K_SCAN_MIN: f64 = 1e-6;

/// Half-width of the band around `-1` used to test the `g ≈ -1` claim.
pub const NEAR_MINUS_ONE: f64 = 0.15;

/// Which functions span the solution between the disk and the shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InteriorBasisMode {
    PaperLiteral,
    ModifiedInterior,
}

/// How `β(k)` is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SecularMode {
    /// Literal basis with the computed `g`.
    Paper,
    /// Literal basis with `g` replaced by `-1`.
    PaperEq13,
    Modified,
}

impl SecularMode {
    pub const ALL: [SecularMode; 3] = [SecularMode::Paper, SecularMode::PaperEq13, SecularMode::Modified];

    pub fn basis(self) -> InteriorBasisMode {
        match self {
            SecularMode::Paper | SecularMode::PaperEq13 => InteriorBasisMode::PaperLiteral,
            SecularMode::Modified => InteriorBasisMode::ModifiedInterior,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SecularMode::Paper => "paper",
            SecularMode::PaperEq13 => "paper-eq13",
            SecularMode::Modified => "modified",
        }
    }
}

impl fmt::Display for SecularMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SecularMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(SecularMode::Paper),
            "paper-eq13" => Ok(SecularMode::PaperEq13),
            "modified" => Ok(SecularMode::Modified),
            other => Err(format!("unknown mode `{other}` (expected paper, paper-eq13 or modified)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Dispersion2dError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),
    #[error("interior denominator vanishes at k = {0}")]
    Pole(f64),
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Problem2D {
    pub a: f64,
    pub beta: f64,
    pub mode: SecularMode,
}

impl Problem2D {
    pub fn new(a: f64, beta: f64, mode: SecularMode) -> Result<Self, Dispersion2dError> {
        let p = Self { a, beta, mode };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Dispersion2dError> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Dispersion2dError::InvalidProblem(format!("a must be positive and finite, got {}", self.a)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Dispersion2dError::InvalidProblem(format!(
                "beta must be non-negative and finite, got {}",
                self.beta
            )));
        }
        Ok(())
    }

    /// Shell radius `b = 1 + a`.
    pub fn shell_radius(&self) -> f64 {
        1.0 + self.a
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }

    pub fn k_max(&self) -> f64 {
        (10.0 * self.beta * (1.0 + self.a)).max(10.0)
    }
}

/// `g(k, a)` or a pole marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GValue {
    Finite(f64),
    Pole,
}

impl GValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            GValue::Finite(v) => Some(v),
            GValue::Pole => None,
        }
    }
}

fn check_k(k: f64) -> Result<(), Dispersion2dError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Dispersion2dError::NonPositiveWavenumber(k))
    }
}

fn check_a(a: f64) -> Result<(), Dispersion2dError> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Dispersion2dError::InvalidProblem(format!("a must be positive and finite, got {a}")))
    }
}

/// Literal interior pair at radius `r`: `(v(r), v'(r)/k)` with
/// `v(r) = Y₀(k)J₀(kr) - J₀(k)Y₀(kr)`. Also returns the magnitude of the
/// cancelling terms in `v` so callers can judge a zero.
fn literal_interior(k: f64, r: f64) -> (f64, f64, f64) {
    let (j0k, y0k) = (j0(k), y0(k));
    let kr = k * r;
    let (t1, t2) = (y0k * j0(kr), j0k * y0(kr));
    let value = t1 - t2;
    let slope = -y0k * j1(kr) + j0k * y1(kr);
    (value, slope, t1.abs() + t2.abs())
}

/// Modified interior pair at radius `r`, both multiplied by `e^{-k(r-1)}`:
/// `(u(r), u'(r)/k)` with `u(r) = K₀(k)I₀(kr) - I₀(k)K₀(kr)`.
fn modified_interior_scaled(k: f64, r: f64) -> (f64, f64) {
    let kr = k * r;
    let (k0k, _) = k_scaled(k);
    let i0k = i0_scaled(k);
    let (k0r, k1r) = k_scaled(kr);
    let damp = (-2.0 * k * (r - 1.0)).exp();
    let value = k0k * i0_scaled(kr) - i0k * k0r * damp;
    let slope = k0k * i1_scaled(kr) + i0k * k1r * damp;
    (value, slope)
}

/// The interior logarithmic-derivative term `g(k, a)`.
///
/// For the literal basis this is `g₁/g₂` exactly as printed; for the
/// modified basis it is `-[K₀(k)I₁(kb) + I₀(k)K₁(kb)]/[K₀(k)I₀(kb) - I₀(k)K₀(kb)]`.
pub fn g_eval(k: f64, a: f64, basis: InteriorBasisMode) -> Result<GValue, Dispersion2dError> {
    check_k(k)?;
    check_a(a)?;
    let b = 1.0 + a;
    match basis {
        InteriorBasisMode::PaperLiteral => {
            let (g2, g1, scale) = literal_interior(k, b);
            if g2.abs() <= 64.0 * f64::EPSILON * scale {
                return Ok(GValue::Pole);
            }
            Ok(GValue::Finite(g1 / g2))
        }
        InteriorBasisMode::ModifiedInterior => {
            let (den, num) = modified_interior_scaled(k, b);
            if den <= 0.0 {
                return Ok(GValue::Pole);
            }
            Ok(GValue::Finite(-num / den))
        }
    }
}

/// The coupling that places a bound state at wavenumber `k`.
pub fn beta_of_k(k: f64, a: f64, mode: SecularMode) -> Result<f64, Dispersion2dError> {
    check_k(k)?;
    check_a(a)?;
    let ratio = k1_over_k0(k * (1.0 + a));
    let interior = match mode {
        SecularMode::PaperEq13 => -1.0,
        SecularMode::Paper => match g_eval(k, a, InteriorBasisMode::PaperLiteral)? {
            GValue::Finite(g) => g,
            GValue::Pole => return Err(Dispersion2dError::Pole(k)),
        },
        SecularMode::Modified => match g_eval(k, a, InteriorBasisMode::ModifiedInterior)? {
            GValue::Finite(g) => -g,
            GValue::Pole => return Err(Dispersion2dError::Pole(k)),
        },
    };
    Ok(k * (interior + ratio))
}

/// Window `(k/(2(kb + p)), k/(2(kb + q)))` that the K₁/K₀ ratio bounds
/// impose on the `g ≡ -1` coupling.
pub fn beta_window_with(k: f64, a: f64, params: RatioBoundParams) -> (f64, f64) {
    let kb = k * (1.0 + a);
    (k / (2.0 * (kb + params.p)), k / (2.0 * (kb + params.q)))
}

/// [`beta_window_with`] at the sharp parameters `p = 1/4`, `q = 0`.
pub fn beta_window(k: f64, a: f64) -> (f64, f64) {
    beta_window_with(k, a, RatioBoundParams::default())
}

/// `1/(b ln b)`: the `k → 0` limit of the modified-basis `β(k)`.
pub fn modified_threshold(a: f64) -> f64 {
    let b = 1.0 + a;
    1.0 / (b * b.ln())
}

fn root_tolerance() -> f64 {
    1e-12
}

/// All radial bound states for the problem's mode, ground state first.
///
/// Roots of `β(k) - β` are scanned on `(1e-6, k_max)`; poles of the literal
/// `g` are excluded. `β = 0` returns no states in every mode.
pub fn solve_bound_states_2d(problem: &Problem2D) -> Result<Vec<BoundState<f64>>, Dispersion2dError> {
    problem.validate()?;
    if problem.beta == 0.0 {
        // No shell, so no state. The literal curve does cross zero, but only
        // because its interior basis solves the wrong equation.
        return Ok(Vec::new());
    }
    let residual = |k: f64| match beta_of_k(k, problem.a, problem.mode) {
        Ok(v) => v - problem.beta,
        Err(_) => f64::INFINITY,
    };
    let roots = find_roots(residual, (K_SCAN_MIN, problem.k_max()), usize::MAX, root_tolerance())?;
    let mut states = Vec::with_capacity(roots.len());
    for root in roots.into_iter().rev() {
        let jump = match eigenfunction_2d_at(root.root, problem) {
            Ok(eigfn) => crate::dispersion1d::jump_residual(&eigfn, problem.beta),
            Err(_) => f64::NAN,
        };
        states.push(BoundState::new(root.root, root.residual, jump, root.converged));
    }
    Ok(states)
}

/// Two-region radial eigenfunction, `y(1) = 0`, `y(b) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialEigenfunction {
    pub k: f64,
    pub shell_radius: f64,
    pub basis: InteriorBasisMode,
    /// Interior value at the shell before normalisation (scaled for the modified basis).
    norm: f64,
}

impl RadialEigenfunction {
    fn interior(&self, r: f64) -> (f64, f64) {
        match self.basis {
            InteriorBasisMode::PaperLiteral => {
                let (v, s, _) = literal_interior(self.k, r);
                (v / self.norm, self.k * s / self.norm)
            }
            InteriorBasisMode::ModifiedInterior => {
                let (v, s) = modified_interior_scaled(self.k, r);
                let grow = (self.k * (r - self.shell_radius)).exp();
                (grow * v / self.norm, grow * self.k * s / self.norm)
            }
        }
    }

    fn exterior(&self, r: f64) -> (f64, f64) {
        let (k0b, _) = k_scaled(self.k * self.shell_radius);
        let (k0r, k1r) = k_scaled(self.k * r);
        let decay = (-self.k * (r - self.shell_radius)).exp();
        (decay * k0r / k0b, -self.k * decay * k1r / k0b)
    }
}

impl Eigenfunction<f64> for RadialEigenfunction {
    fn breakpoint(&self) -> f64 {
        self.shell_radius
    }

    fn value(&self, r: f64) -> f64 {
        if r < self.shell_radius {
            self.interior(r).0
        } else {
            self.exterior(r).0
        }
    }

    fn derivative(&self, r: f64, side: Side) -> f64 {
        if r < self.shell_radius || (r == self.shell_radius && side == Side::Left) {
            self.interior(r).1
        } else {
            self.exterior(r).1
        }
    }
}

fn eigenfunction_2d_at(k: f64, problem: &Problem2D) -> Result<RadialEigenfunction, Dispersion2dError> {
    check_k(k)?;
    let b = problem.shell_radius();
    let basis = problem.mode.basis();
    let norm = match basis {
        InteriorBasisMode::PaperLiteral => {
            let (v, _, scale) = literal_interior(k, b);
            if v.abs() <= 64.0 * f64::EPSILON * scale {
                return Err(Dispersion2dError::Pole(k));
            }
            v
        }
        InteriorBasisMode::ModifiedInterior => modified_interior_scaled(k, b).0,
    };
    if norm == 0.0 || !norm.is_finite() {
        return Err(Dispersion2dError::Pole(k));
    }
    Ok(RadialEigenfunction {
        k,
        shell_radius: b,
        basis,
        norm,
    })
}

/// Closed-form eigenfunction for a solved state.
///
/// Under [`SecularMode::PaperEq13`] the literal basis is used, so the jump
/// residual measures how far the `g ≡ -1` root is from a true solution.
pub fn eigenfunction_2d(state: &BoundState<f64>, problem: &Problem2D) -> Result<RadialEigenfunction, Dispersion2dError> {
    problem.validate()?;
    eigenfunction_2d_at(state.k, problem)
}

/// One sample of `g` on a plotting grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GSample {
    pub k: f64,
    /// NaN at a flagged pole.
    pub g: f64,
    pub pole: bool,
}

/// `g` on a uniform grid, with the share of non-pole samples within
/// [`NEAR_MINUS_ONE`] of `-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GCurve {
    pub a: f64,
    pub basis: InteriorBasisMode,
    pub samples: Vec<GSample>,
    pub non_pole: usize,
    pub near_minus_one: usize,
    pub fraction_near_minus_one: f64,
}

/// Samples `g(k, a)` at `points` uniformly spaced `k` in `[k_min, k_max]`.
///
/// A sample is flagged as a pole when the denominator vanishes to rounding
/// or `|g|` exceeds the root finder's pole magnitude.
pub fn g_curve(a: f64, k_min: f64, k_max: f64, points: usize, basis: InteriorBasisMode) -> Result<GCurve, Dispersion2dError> {
    check_a(a)?;
    check_k(k_min)?;
    if !(k_max >= k_min) || !k_max.is_finite() || points == 0 {
        return Err(Dispersion2dError::InvalidProblem(format!(
            "need 0 < k_min <= k_max and points >= 1, got [{k_min}, {k_max}] with {points} points"
        )));
    }
    let step = if points > 1 { (k_max - k_min) / (points - 1) as f64 } else { 0.0 };
    let mut samples = Vec::with_capacity(points);
    for i in 0..points {
        let k = if i + 1 == points { k_max } else { k_min + step * i as f64 };
        let sample = match g_eval(k, a, basis)? {
            GValue::Finite(g) if g.abs() <= POLE_MAGNITUDE => GSample { k, g, pole: false },
            _ => GSample { k, g: f64::NAN, pole: true },
        };
        samples.push(sample);
    }
    let non_pole = samples.iter().filter(|s| !s.pole).count();
    let near_minus_one = samples
        .iter()
        .filter(|s| !s.pole && (s.g + 1.0).abs() < NEAR_MINUS_ONE)
        .count();
    let fraction_near_minus_one = if non_pole == 0 {
        0.0
    } else {
        near_minus_one as f64 / non_pole as f64
    };
    Ok(GCurve {
        a,
        basis,
        samples,
        non_pole,
        near_minus_one,
        fraction_near_minus_one,
    })
}
