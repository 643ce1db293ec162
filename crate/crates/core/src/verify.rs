//! Self-verification suites and the experiments behind them.
//!
//! Every experiment is a plain function returning its measurements, so the
//! same code drives `deltabound verify` and the acceptance tests. Random
//! parameters come from a fixed-seed ChaCha stream and every loop runs in a
//! fixed order, so a report is reproducible bit for bit.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::critical::{beta_cr_curve_infimum, beta_cr_search, halfline, CriticalStatus};
use crate::dispersion1d::{
    dispersion_lhs, dispersion_residual, reduced_residual, solve_bound_states, solve_reduced, BcKind,
    BoundaryCondition, HalfLineProblem, ReducedForm,
};
use crate::dispersion2d::{
    beta_of_k, beta_window, g_curve, modified_threshold, solve_bound_states_2d, InteriorBasisMode, Problem2D,
    SecularMode,
};
use crate::fdoracle::{
    box_threshold, fd_halfline_richardson, fd_halfline_spectrum, fd_radial_negative_count, fd_radial_richardson,
    fd_radial_spectrum, fd_radial_threshold, narrow_well_convergence, FdConfig,
};
use crate::numerics::richardson;
use crate::specfun::{i0_scaled, i1_scaled, j0, j1, k1_over_k0, k_ratio_bounds, k_scaled, y0, y1, RatioBoundParams};

/// Seed of every random parameter stream.
pub const SEED: u64 = 0x5eed_de17a;

/// Share of `g` samples near `-1` is measured on this `k` range.
pub const G_K_RANGE: (f64, f64) = (0.5, 10.0);
pub const G_POINTS: usize = 500;
pub const G_SHELL_OFFSETS: [f64; 4] = [0.5, 2.0, 4.0, 10.0];

/// Relative agreement required for an analytic mode to match the radial oracle.
pub const ARBITRATION_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Specfun,
    OneD,
    TwoD,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Specfun, Suite::OneD, Suite::TwoD, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::OneD => "1d",
            Suite::TwoD => "2d",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `all` or a single suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection(pub Option<Suite>);

impl Selection {
    pub fn suites(self) -> Vec<Suite> {
        match self.0 {
            Some(s) => vec![s],
            None => Suite::ALL.to_vec(),
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(Selection(None));
        }
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .map(|suite| Selection(Some(suite)))
            .ok_or_else(|| format!("unknown suite `{s}` (expected specfun, 1d, 2d, oracle or all)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

/// A reported number that is not pass/fail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub suite: Suite,
    pub name: String,
    pub value: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<Suite>,
    pub tol_scale: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub measurements: Vec<Measurement>,
    pub arbitration: Vec<ArbitrationCase>,
    /// The single mode that matched the radial oracle in every arbitration
    /// case, if there is one.
    pub arbitration_winner: Option<String>,
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n).map(move |i| {
        if i == 0 {
            lo
        } else if i + 1 == n {
            hi
        } else {
            (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()
        }
    })
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.gen::<f64>()).exp()
}

fn rel(x: f64, reference: f64) -> f64 {
    ((x - reference) / reference).abs()
}

// ---------------------------------------------------------------- specfun

/// Largest relative residuals of `J₁Y₀ - J₀Y₁ = 2/(πx)` and
/// `I₀K₁ + I₁K₀ = 1/x` on `points` log-spaced `x` in `[lo, hi]`.
pub fn wronskian_residuals(lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let mut worst = (0.0f64, 0.0f64);
    for x in log_grid(lo, hi, points) {
        let jy = j1(x) * y0(x) - j0(x) * y1(x);
        worst.0 = worst.0.max(rel(jy, 2.0 / (std::f64::consts::PI * x)));
        // e^{-x} and e^{x} scalings cancel in each product.
        let (k0s, k1s) = k_scaled(x);
        let ik = i0_scaled(x) * k1s + i1_scaled(x) * k0s;
        worst.1 = worst.1.max(rel(ik, 1.0 / x));
    }
    worst
}

/// Grid points where the sharp ratio bounds fail to hold strictly, and
/// whether `K₁/K₀` decreased strictly along the grid.
pub fn ratio_bound_scan(lo: f64, hi: f64, points: usize) -> (usize, bool) {
    let mut violations = 0;
    let mut decreasing = true;
    let mut prev = f64::INFINITY;
    for x in log_grid(lo, hi, points) {
        let ratio = k1_over_k0(x);
        let (lower, upper) = k_ratio_bounds(x, RatioBoundParams::default()).expect("positive grid");
        if !(lower < ratio && ratio < upper) {
            violations += 1;
        }
        decreasing &= ratio < prev;
        prev = ratio;
    }
    (violations, decreasing)
}

// ---------------------------------------------------------------- 1D

fn bc_of(kind: BcKind) -> BoundaryCondition<f64> {
    match kind {
        BcKind::Dirichlet => BoundaryCondition::dirichlet(),
        BcKind::Neumann => BoundaryCondition::neumann(),
        BcKind::Robin => BoundaryCondition::robin(1.0),
    }
}

/// One solved state checked against `λ = -β²/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCase {
    pub bc: BcKind,
    pub a: f64,
    pub beta: f64,
    pub k: f64,
    pub ground: bool,
    /// `λ + β²/4` for Dirichlet (should be `≥ 0`), `-β²/4 - λ` otherwise.
    pub margin: f64,
}

impl BoundCase {
    pub fn holds(&self, tol: f64) -> bool {
        self.margin >= -tol
    }
}

/// `pairs` random `(a, β)` per boundary condition, log-uniform in
/// `[0.1, 10]²`, keeping only pairs with at least one state. Every state of
/// every kept pair is returned.
pub fn eigenvalue_bound_cases(seed: u64, pairs: usize) -> Vec<BoundCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for kind in [BcKind::Dirichlet, BcKind::Neumann, BcKind::Robin] {
        let mut kept = 0;
        while kept < pairs {
            let a = log_uniform(&mut rng, 0.1, 10.0);
            let beta = log_uniform(&mut rng, 0.1, 10.0);
            let problem = HalfLineProblem::<f64>::new(a, beta, bc_of(kind)).expect("valid");
            let states = solve_bound_states(&problem).expect("solvable");
            if states.is_empty() {
                continue;
            }
            kept += 1;
            let quarter = beta * beta / 4.0;
            for (i, s) in states.iter().enumerate() {
                let margin = match kind {
                    BcKind::Dirichlet => s.lambda + quarter,
                    _ => -quarter - s.lambda,
                };
                cases.push(BoundCase {
                    bc: kind,
                    a,
                    beta,
                    k: s.k,
                    ground: i == 0,
                    margin,
                });
            }
        }
    }
    cases
}

/// Worst disagreement `|z/(2a) - k|/max(1, k)` between reduced and
/// unreduced roots over `pairs` random Dirichlet and Neumann problems, and
/// the number of pairs whose root counts differ.
pub fn reduced_equivalence(seed: u64, pairs: usize) -> (f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut count_mismatch = 0;
    for kind in [BcKind::Dirichlet, BcKind::Neumann] {
        for _ in 0..pairs {
            let a = log_uniform(&mut rng, 0.1, 10.0);
            let beta = log_uniform(&mut rng, 0.1, 10.0);
            let problem = HalfLineProblem::<f64>::new(a, beta, bc_of(kind)).expect("valid");
            let states = solve_bound_states(&problem).expect("solvable");
            let zs = solve_reduced(beta * a, kind, 2.0 * a * problem.k_max()).expect("solvable");
            if zs.len() != states.len() {
                count_mismatch += 1;
                continue;
            }
            for (s, z) in states.iter().zip(&zs) {
                worst = worst.max((z / (2.0 * a) - s.k).abs() / s.k.max(1.0));
                // The image of each root must also zero the other form.
                let form = ReducedForm { z: 2.0 * s.k * a, b: beta * a };
                let r = reduced_residual(form, kind).expect("nonzero coupling");
                worst = worst.max(r.abs());
            }
        }
    }
    (worst, count_mismatch)
}

// ---------------------------------------------------------------- oracle

/// Analytic versus extrapolated finite-difference eigenvalues for one problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCase {
    pub bc: BcKind,
    pub a: f64,
    pub beta: f64,
    pub analytic: Vec<f64>,
    pub fd: Vec<f64>,
    pub worst_rel: f64,
}

/// Oracle step for the half-line runs.
pub const FD_STEP_1D: f64 = 1e-2;

/// `n` random problems with bound states, cycling Dirichlet, Neumann, Robin.
///
/// States with `k < 0.2` would need very long grids; problems having one
/// are redrawn.
pub fn oracle_agreement_1d(seed: u64, n: usize) -> Vec<OracleCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = [BcKind::Dirichlet, BcKind::Neumann, BcKind::Robin];
    let mut cases = Vec::with_capacity(n);
    while cases.len() < n {
        let kind = kinds[cases.len() % 3];
        let a = log_uniform(&mut rng, 0.5, 2.0);
        let beta = match kind {
            BcKind::Dirichlet => (1.5 + 2.5 * rng.gen::<f64>()) / a,
            _ => 0.5 + 3.5 * rng.gen::<f64>(),
        };
        let problem = HalfLineProblem::<f64>::new(a, beta, bc_of(kind)).expect("valid");
        let states = solve_bound_states(&problem).expect("solvable");
        let k_min = states.iter().map(|s| s.k).fold(f64::INFINITY, f64::min);
        if states.is_empty() || k_min < 0.2 {
            continue;
        }
        let extent = a + 20.0 / k_min;
        let config = FdConfig::on_node(FD_STEP_1D, extent);
        let fd = fd_halfline_richardson(&problem, &config, states.len()).expect("grid");
        let analytic: Vec<f64> = states.iter().map(|s| s.lambda).collect();
        let worst_rel = analytic.iter().zip(&fd).map(|(&l, &f)| rel(f, l)).fold(0.0, f64::max);
        cases.push(OracleCase {
            bc: kind,
            a,
            beta,
            analytic,
            fd,
            worst_rel,
        });
    }
    cases
}

/// Smallest FD eigenvalue of the free Robin (`σ = 1`) half-line, which
/// should be `-1`; step `1e-3`, length 40, Richardson.
pub fn robin_free_eigenvalue() -> f64 {
    let problem = HalfLineProblem::<f64>::new(1.0, 0.0, BoundaryCondition::robin(1.0)).expect("valid");
    fd_halfline_richardson(&problem, &FdConfig::on_node(1e-3, 40.0), 1).expect("grid")[0]
}

/// Narrow-well study at Dirichlet `a = 1`, `β = 3`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NarrowWellStudy {
    pub exact: f64,
    pub widths: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub errors: Vec<f64>,
    pub decreasing: bool,
    pub final_rel: f64,
    /// First-order Richardson in `w` on the last two widths.
    pub extrapolated_rel: f64,
}

pub fn narrow_well_study() -> NarrowWellStudy {
    let problem = HalfLineProblem::<f64>::new(1.0, 3.0, BoundaryCondition::dirichlet()).expect("valid");
    let exact = solve_bound_states(&problem).expect("solvable")[0].lambda;
    let widths = vec![0.2, 0.1, 0.05, 0.025];
    let rows = narrow_well_convergence(&problem, 1e-3, 30.0, &widths).expect("grid");
    let eigenvalues: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let errors: Vec<f64> = eigenvalues.iter().map(|l| (l - exact).abs()).collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let n = eigenvalues.len();
    NarrowWellStudy {
        exact,
        decreasing,
        final_rel: errors[n - 1] / exact.abs(),
        extrapolated_rel: rel(richardson(eigenvalues[n - 2], eigenvalues[n - 1], 1), exact),
        widths,
        eigenvalues,
        errors,
    }
}

/// One analytic mode compared against the radial oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeComparison {
    pub mode: String,
    pub analytic: Vec<f64>,
    pub matches: bool,
    /// Largest pairwise relative difference when the counts agree.
    pub worst_rel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArbitrationCase {
    pub a: f64,
    pub beta: f64,
    pub outer_radius: f64,
    pub fd: Vec<f64>,
    pub comparisons: Vec<ModeComparison>,
    pub matched: Vec<String>,
}

/// Oracle step for the radial runs.
pub const FD_STEP_2D: f64 = 1e-2;

/// Compares every secular mode with the extrapolated radial spectrum.
///
/// A mode matches when it predicts the same number of negative eigenvalues
/// and each agrees with the oracle to [`ARBITRATION_TOLERANCE`].
pub fn arbitration(a: f64, beta: f64) -> ArbitrationCase {
    let modified = solve_bound_states_2d(&Problem2D::new(a, beta, SecularMode::Modified).expect("valid"))
        .expect("solvable");
    let k_min = modified.iter().map(|s| s.k).fold(f64::INFINITY, f64::min);
    let outer_radius = if k_min.is_finite() {
        (1.0 + a + 25.0 / k_min).max(60.0)
    } else {
        60.0
    };
    let config = FdConfig::on_node(FD_STEP_2D, outer_radius);
    let negative = fd_radial_negative_count(a, beta, &config).expect("grid");
    let fd: Vec<f64> = if negative == 0 {
        Vec::new()
    } else {
        fd_radial_richardson(a, beta, &config, negative)
            .expect("grid")
            .into_iter()
            .filter(|l| *l < 0.0)
            .collect()
    };
    let mut comparisons = Vec::new();
    for mode in SecularMode::ALL {
        let problem = Problem2D::new(a, beta, mode).expect("valid");
        let mut analytic: Vec<f64> = solve_bound_states_2d(&problem)
            .expect("solvable")
            .iter()
            .map(|s| s.lambda)
            .collect();
        analytic.sort_by(f64::total_cmp);
        let worst_rel = (analytic.len() == fd.len())
            .then(|| analytic.iter().zip(&fd).map(|(&l, &f)| rel(f, l)).fold(0.0, f64::max));
        let matches = worst_rel.is_some_and(|w| w <= ARBITRATION_TOLERANCE);
        comparisons.push(ModeComparison {
            mode: mode.name().to_string(),
            analytic,
            matches,
            worst_rel,
        });
    }
    let matched = comparisons.iter().filter(|c| c.matches).map(|c| c.mode.clone()).collect();
    ArbitrationCase {
        a,
        beta,
        outer_radius,
        fd,
        comparisons,
        matched,
    }
}

/// The arbitration at `a = 1`, `k = 1` on the `g ≡ -1` curve, followed by
/// `β = 2·β_cr` of the modified basis for `a ∈ {0.5, 1, 2}`.
///
/// The first case has no oracle state at all, so it only separates modes by
/// their state count; the others compare actual eigenvalues.
pub fn arbitration_cases() -> Vec<ArbitrationCase> {
    let beta_eq13 = beta_of_k(1.0, 1.0, SecularMode::PaperEq13).expect("finite");
    let mut cases = vec![arbitration(1.0, beta_eq13)];
    for a in [0.5, 1.0, 2.0] {
        cases.push(arbitration(a, 2.0 * modified_threshold(a)));
    }
    cases
}

/// The mode that matched in every case, if exactly one did.
pub fn arbitration_winner(cases: &[ArbitrationCase]) -> Option<String> {
    let first = cases.first()?;
    let common: Vec<&String> = first
        .matched
        .iter()
        .filter(|m| cases.iter().all(|c| c.matched.contains(m)))
        .collect();
    match common.as_slice() {
        [only] if cases.iter().all(|c| c.matched.len() == 1) => Some((*only).clone()),
        _ => None,
    }
}

// ---------------------------------------------------------------- suites

struct Recorder {
    suite: Suite,
    scale: f64,
    checks: Vec<Check>,
    measurements: Vec<Measurement>,
}

impl Recorder {
    /// Passes when `value ≤ limit · scale`.
    fn at_most(&mut self, name: &str, value: f64, limit: f64, detail: String) {
        let passed = value <= limit * self.scale;
        self.push(name, passed, value, limit, detail);
    }

    fn flag(&mut self, name: &str, passed: bool, detail: String) {
        self.push(name, passed, if passed { 1.0 } else { 0.0 }, 1.0, detail);
    }

    fn push(&mut self, name: &str, passed: bool, value: f64, limit: f64, detail: String) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            passed,
            value,
            limit,
            detail,
        });
    }

    fn measure(&mut self, name: &str, value: f64, detail: String) {
        self.measurements.push(Measurement {
            suite: self.suite,
            name: name.to_string(),
            value,
            detail,
        });
    }
}

fn specfun_suite(r: &mut Recorder) {
    let (jy, ik) = wronskian_residuals(0.05, 100.0, 1000);
    r.at_most("wronskian_jy", jy, 1e-10, "max relative residual on [0.05, 100]".into());
    r.at_most("wronskian_ik", ik, 1e-10, "max relative residual on [0.05, 100]".into());
    let (violations, decreasing) = ratio_bound_scan(1e-3, 50.0, 1000);
    r.at_most(
        "ratio_bounds_strict",
        violations as f64,
        0.0,
        "grid points in [1e-3, 50] where K1/K0 leaves the sharp bounds".into(),
    );
    r.flag("ratio_decreasing", decreasing, "K1/K0 strictly decreasing on the grid".into());
    let ratio = k1_over_k0(1.0);
    let (lo, hi) = k_ratio_bounds(1.0, RatioBoundParams::default()).expect("positive");
    r.flag(
        "ratio_at_one",
        lo == 1.4 && hi == 1.5 && lo < ratio && ratio < hi,
        format!("K1(1)/K0(1) = {ratio:.16e} in ({lo}, {hi})"),
    );
}

fn one_d_suite(r: &mut Recorder) {
    let mut worst = 0.0f64;
    for a in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let res = beta_cr_search(&halfline(a, BcKind::Dirichlet, 1.0), 1e-9).expect("threshold");
        worst = worst.max((res.beta_cr - 1.0 / a).abs());
    }
    r.at_most("dirichlet_threshold", worst, 1e-8, "max |beta_cr - 1/a| over a in {0.1, 0.5, 1, 2, 10}".into());

    let mut worst = 0.0f64;
    for j in 1..=20 {
        let a = 0.5f64.powi(j);
        let res = beta_cr_search(&halfline(a, BcKind::Dirichlet, 1.0), 1e-9 / a).expect("threshold");
        worst = worst.max((a * res.beta_cr - 1.0).abs());
    }
    r.at_most("dirichlet_blowup", worst, 1e-8, "max |a*beta_cr - 1| over a = 2^-j, j = 1..20".into());

    let beta = 1e-6;
    let neumann = HalfLineProblem::<f64>::new(1.0, beta, BoundaryCondition::neumann()).expect("valid");
    let states = solve_bound_states(&neumann).expect("solvable");
    let inside = states.len() == 1 && beta / 2.0 - 1e-12 <= states[0].k && states[0].k <= beta + 1e-12;
    r.flag("neumann_tiny_coupling", inside, format!("states at beta = 1e-6: {:?}", states.iter().map(|s| s.k).collect::<Vec<_>>()));
    for kind in [BcKind::Neumann, BcKind::Robin] {
        let res = beta_cr_search(&halfline(1.0, kind, 1.0), 1e-8).expect("threshold");
        r.at_most(
            &format!("{kind}_beta_cr_zero"),
            res.beta_cr,
            1e-10,
            format!("status {:?}", res.status),
        );
    }
    let robin = HalfLineProblem::<f64>::new(1.0, 0.0, BoundaryCondition::robin(1.0)).expect("valid");
    let residual = dispersion_residual(1.0, &robin).expect("off pole").abs();
    r.at_most("robin_free_state_residual", residual, 1e-12, "F(1) - 0 at sigma = 1".into());

    let cases = eigenvalue_bound_cases(SEED, 100);
    for kind in [BcKind::Dirichlet, BcKind::Neumann, BcKind::Robin] {
        let ground: Vec<&BoundCase> = cases.iter().filter(|c| c.bc == kind && c.ground).collect();
        let failing = ground.iter().filter(|c| !c.holds(1e-12)).count();
        r.at_most(
            &format!("{kind}_ground_state_bound"),
            failing as f64,
            0.0,
            format!("ground states violating the beta^2/4 bound out of {}", ground.len()),
        );
        let excited: Vec<&BoundCase> = cases.iter().filter(|c| c.bc == kind && !c.ground).collect();
        if !excited.is_empty() {
            let failing = excited.iter().filter(|c| !c.holds(1e-12)).count();
            r.measure(
                &format!("{kind}_excited_bound_violations"),
                failing as f64,
                format!("excited states violating k >= beta/2 out of {}", excited.len()),
            );
        }
    }

    let (worst, mismatched) = reduced_equivalence(SEED + 1, 50);
    r.at_most("reduced_equivalence", worst, 1e-10, "max root disagreement over 50 pairs per condition".into());
    r.at_most("reduced_root_counts", mismatched as f64, 0.0, "pairs whose root counts differ".into());

    let mut worst = 0.0f64;
    let mut monotone = true;
    for a in [0.1, 1.0, 10.0] {
        let d = HalfLineProblem::<f64>::new(a, 0.0, BoundaryCondition::dirichlet()).expect("valid");
        worst = worst.max((dispersion_lhs(1e-8, &d).expect("positive k") - 1.0 / a).abs());
        for kind in [BcKind::Dirichlet, BcKind::Neumann] {
            let p = HalfLineProblem::<f64>::new(a, 0.0, bc_of(kind)).expect("valid");
            let mut prev = f64::NEG_INFINITY;
            for k in log_grid(1e-6, 1e3, 2000) {
                let f = dispersion_lhs(k, &p).expect("positive k");
                monotone &= f > prev;
                prev = f;
            }
        }
    }
    r.at_most("dirichlet_small_k_limit", worst, 1e-6, "max |F(1e-8) - 1/a| over a in {0.1, 1, 10}".into());
    r.flag("dispersion_monotone", monotone, "Dirichlet and Neumann F(k) strictly increasing".into());
}

fn two_d_suite(r: &mut Recorder) {
    let mut outside = 0;
    let mut hi_max = 0.0f64;
    let mut nonpositive = 0;
    for a in [0.5, 1.0, 2.0, 4.0, 10.0] {
        for k in log_grid(0.01, 100.0, 200) {
            let beta = beta_of_k(k, a, SecularMode::PaperEq13).expect("finite");
            let (lo, hi) = beta_window(k, a);
            if !(lo < beta && beta < hi) {
                outside += 1;
            }
            if !(beta > 0.0) {
                nonpositive += 1;
            }
            hi_max = hi_max.max(hi);
        }
    }
    r.at_most("eq13_in_window", outside as f64, 0.0, "grid points outside the window".into());
    r.at_most("eq13_positive", nonpositive as f64, 0.0, "grid points with beta <= 0".into());
    r.flag("window_below_half", hi_max < 0.5, format!("largest upper end {hi_max:.16e}"));

    for a in G_SHELL_OFFSETS {
        let curve = g_curve(a, G_K_RANGE.0, G_K_RANGE.1, G_POINTS, InteriorBasisMode::PaperLiteral).expect("valid");
        let poles = curve.samples.len() - curve.non_pole;
        r.flag(
            &format!("g_curve_a{a}"),
            curve.samples.len() == G_POINTS,
            format!("{G_POINTS} samples emitted, {poles} flagged as poles"),
        );
        r.measure(
            &format!("g_near_minus_one_a{a}"),
            curve.fraction_near_minus_one,
            format!(
                "{} of {} non-pole samples with |g + 1| < 0.15 on k in [0.5, 10]",
                curve.near_minus_one, curve.non_pole
            ),
        );
    }

    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let res = beta_cr_curve_infimum(a, SecularMode::Modified).expect("curve");
        if res.status != CriticalStatus::Converged {
            worst = f64::INFINITY;
        } else {
            worst = worst.max(rel(res.beta_cr, modified_threshold(a)));
        }
    }
    r.at_most(
        "modified_threshold_closed_form",
        worst,
        1e-8,
        "curve infimum vs 1/(b ln b) for a in {0.5, 1, 2}".into(),
    );

    let p = Problem2D::new(1.0, 2.0, SecularMode::Modified).expect("valid");
    let states = solve_bound_states_2d(&p).expect("solvable");
    let jump = states.iter().map(|s| s.jump_residual).fold(0.0, f64::max);
    r.at_most("modified_jump_residual", jump, 1e-8, format!("{} state(s) at a = 1, beta = 2", states.len()));
}

fn oracle_suite(r: &mut Recorder) -> Vec<ArbitrationCase> {
    let lambda = robin_free_eigenvalue();
    r.at_most("robin_free_state", (lambda + 1.0).abs(), 1e-5, format!("lambda = {lambda:.16e}"));

    let d = HalfLineProblem::<f64>::new(1.0, 0.5, BoundaryCondition::dirichlet()).expect("valid");
    let lowest = fd_halfline_spectrum(&d, &FdConfig::on_node(1e-3, 60.0), 1).expect("grid")[0];
    r.flag("dirichlet_subcritical_no_state", lowest > -1e-6, format!("lowest eigenvalue {lowest:.16e}"));

    let cases = oracle_agreement_1d(SEED + 2, 10);
    let worst = cases.iter().map(|c| c.worst_rel).fold(0.0, f64::max);
    r.at_most("oracle_agreement_1d", worst, 1e-3, "10 random problems across all conditions".into());

    let study = narrow_well_study();
    r.flag("narrow_well_decreasing", study.decreasing, format!("errors {:?}", study.errors));
    r.measure(
        "narrow_well_final_rel",
        study.final_rel,
        "relative error at w = 0.025 (first order in w)".into(),
    );
    r.at_most(
        "narrow_well_extrapolated",
        study.extrapolated_rel,
        1e-2,
        "first-order Richardson in w on the last two widths".into(),
    );

    let config = FdConfig::on_node(FD_STEP_2D, 40.0);
    let free = fd_radial_spectrum(1.0, 0.0, &config, 1).expect("grid")[0];
    r.flag("radial_free_positive", free > 0.0, format!("lowest eigenvalue {free:.16e}"));

    let radius = 50.0;
    let (lo, hi) = fd_radial_threshold(1.0, &config.with_extent(radius), 1e-8).expect("threshold");
    let exact = box_threshold(1.0, radius);
    r.at_most(
        "radial_box_threshold",
        rel(0.5 * (lo + hi), exact),
        1e-3,
        format!("FD threshold [{lo:.10}, {hi:.10}] vs {exact:.10} for R = {radius}"),
    );

    let beta = 2.0 * modified_threshold(1.0);
    let near = fd_radial_spectrum(1.0, beta, &config.with_extent(60.0), 1).expect("grid")[0];
    let far = fd_radial_spectrum(1.0, beta, &config.with_extent(120.0), 1).expect("grid")[0];
    r.at_most(
        "radial_truncation_independence",
        (near - far).abs(),
        1e-8,
        "change in lowest eigenvalue from R = 60 to R = 120".into(),
    );

    let cases = arbitration_cases();
    for case in &cases {
        let names = if case.matched.is_empty() {
            "none".to_string()
        } else {
            case.matched.join(",")
        };
        r.flag(
            &format!("arbitration_a{}_beta{:.6}", case.a, case.beta),
            case.matched.len() == 1,
            format!("oracle has {} state(s); matching mode: {names}", case.fd.len()),
        );
    }
    let winner = arbitration_winner(&cases);
    r.flag(
        "arbitration_unique",
        winner.is_some(),
        format!("mode matching the oracle in every case: {}", winner.as_deref().unwrap_or("none")),
    );
    cases
}

/// Runs the selected suites with every tolerance multiplied by `tol_scale`.
pub fn run(selection: Selection, tol_scale: f64) -> VerifyReport {
    let suites = selection.suites();
    let mut checks = Vec::new();
    let mut measurements = Vec::new();
    let mut arbitration = Vec::new();
    for &suite in &suites {
        let mut r = Recorder {
            suite,
            scale: tol_scale,
            checks: Vec::new(),
            measurements: Vec::new(),
        };
        match suite {
            Suite::Specfun => specfun_suite(&mut r),
            Suite::OneD => one_d_suite(&mut r),
            Suite::TwoD => two_d_suite(&mut r),
            Suite::Oracle => arbitration = oracle_suite(&mut r),
        }
        checks.extend(r.checks);
        measurements.extend(r.measurements);
    }
    let arbitration_winner = arbitration_winner(&arbitration);
    VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        suites,
        tol_scale,
        checks,
        measurements,
        arbitration,
        arbitration_winner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_parsing() {
        assert_eq!("all".parse::<Selection>().unwrap().suites().len(), 4);
        assert_eq!("1d".parse::<Selection>().unwrap(), Selection(Some(Suite::OneD)));
        assert!("2D".parse::<Selection>().is_err());
    }

    #[test]
    fn log_grid_hits_endpoints() {
        let g: Vec<f64> = log_grid(1e-3, 50.0, 1000).collect();
        assert_eq!(g.len(), 1000);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[999], 50.0);
    }

    #[test]
    fn specfun_suite_passes() {
        let report = run(Selection(Some(Suite::Specfun)), 1.0);
        assert!(report.passed, "{:#?}", report.checks);
    }
}
