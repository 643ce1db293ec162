//! Bracketed scalar root finding with pole rejection.
//!
//! [`find_roots`] scans an interval on a uniform grid, collects sign changes
//! and refines each one with Brent's method (bisection safeguarding secant
//! and inverse-quadratic steps). A sign change whose `|f|` keeps growing as
//! the bracket shrinks is a pole, not a root, and is dropped.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

/// Initial number of scan subintervals.
pub const SCAN_MIN: usize = 512;
/// Scan density is doubled while the bracket count changes, up to this.
pub const SCAN_MAX: usize = 8192;
/// Iteration cap for a single bracket refinement.
pub const MAX_ITERATIONS: usize = 200;
/// Flanking `|f|` above which a shrunken bracket is classified as a pole.
pub const POLE_MAGNITUDE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("invalid interval ({lo}, {hi})")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("function is not finite at x = {x}")]
    Evaluation { x: f64 },
    #[error("endpoints of ({lo}, {hi}) do not bracket a sign change")]
    NoSignChange { lo: f64, hi: f64 },
}

/// An interval `[lo, hi]` whose endpoint values have opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
}

impl<T: Real> Bracket<T> {
    /// Checks the invariants (ordered, finite, opposite signs).
    pub fn new(lo: T, hi: T, f_lo: T, f_hi: T) -> Result<Self, RootError> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(RootError::InvalidInterval {
                lo: lo.to_f64().unwrap_or(f64::NAN),
                hi: hi.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !f_lo.is_finite() || !f_hi.is_finite() || f_lo.signum() == f_hi.signum() {
            return Err(RootError::NoSignChange {
                lo: lo.to_f64().unwrap_or(f64::NAN),
                hi: hi.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult<T> {
    pub root: T,
    pub residual: T,
    pub iterations: usize,
    /// `|residual| ≤ tol · (1 + |f′(root)|)`, with `f′` from a central difference.
    pub converged: bool,
}

/// Outcome of refining one sign-change bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Refined<T> {
    Root(RootResult<T>),
    Pole { location: T },
}

/// Finds the sign-change roots of `f` inside `(lo, hi)`, ascending.
///
/// At most `max_roots` roots are returned (the smallest ones). Poles are
/// excluded. `f` may return `±∞` at an isolated pole; NaN anywhere on the
/// scan grid is an evaluation error.
pub fn find_roots<T, F>(
    f: F,
    interval: (T, T),
    max_roots: usize,
    tol: T,
) -> Result<Vec<RootResult<T>>, RootError>
where
    T: Real,
    F: Fn(T) -> T,
{
    let (lo, hi) = interval;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(RootError::InvalidInterval {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(tol > T::zero()) {
        return Err(RootError::InvalidTolerance(tol.to_f64().unwrap_or(f64::NAN)));
    }
    if max_roots == 0 {
        return Ok(Vec::new());
    }

    let mut candidates = scan(&f, lo, hi, SCAN_MIN)?;
    let mut n = SCAN_MIN;
    while n < SCAN_MAX {
        n *= 2;
        let finer = scan(&f, lo, hi, n)?;
        let stable = finer.len() == candidates.len();
        candidates = finer;
        if stable {
            break;
        }
    }

    let mut roots = Vec::new();
    for candidate in candidates {
        if roots.len() == max_roots {
            break;
        }
        match candidate {
            Candidate::Exact(x) => roots.push(RootResult {
                root: x,
                residual: T::zero(),
                iterations: 0,
                converged: true,
            }),
            Candidate::Bracket(bracket) => {
                if let Refined::Root(root) = refine(&f, bracket, tol) {
                    roots.push(root);
                }
            }
        }
    }
    Ok(roots)
}

enum Candidate<T> {
    Exact(T),
    Bracket(Bracket<T>),
}

fn scan<T, F>(f: &F, lo: T, hi: T, n: usize) -> Result<Vec<Candidate<T>>, RootError>
where
    T: Real,
    F: Fn(T) -> T,
{
    let step = (hi - lo) / T::of_usize(n);
    let node = |i: usize| if i == n { hi } else { lo + step * T::of_usize(i) };
    let eval = |x: T| {
        let y = f(x);
        if y.is_nan() {
            Err(RootError::Evaluation {
                x: x.to_f64().unwrap_or(f64::NAN),
            })
        } else {
            Ok(y)
        }
    };

    let mut out = Vec::new();
    let mut x_prev = node(0);
    let mut f_prev = eval(x_prev)?;
    if f_prev == T::zero() {
        out.push(Candidate::Exact(x_prev));
    }
    for i in 1..=n {
        let x = node(i);
        let fx = eval(x)?;
        if fx == T::zero() {
            out.push(Candidate::Exact(x));
        } else if f_prev != T::zero()
            && f_prev.is_finite()
            && fx.is_finite()
            && f_prev.signum() != fx.signum()
        {
            out.push(Candidate::Bracket(Bracket {
                lo: x_prev,
                hi: x,
                f_lo: f_prev,
                f_hi: fx,
            }));
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(out)
}

/// Refines a sign-change bracket with Brent's method and classifies the
/// limit as a root or a pole.
pub fn refine<T, F>(f: &F, bracket: Bracket<T>, tol: T) -> Refined<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let eps = T::epsilon();

    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    let mut iterations = 0;

    for iter in 1..=MAX_ITERATIONS {
        iterations = iter;
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + half * T::min_positive_value();
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            break;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = T::lit(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1.copysign(xm)
        };
        fb = f(b);
        if fb.is_nan() {
            break;
        }
    }

    let grown = fb.abs().min(fc.abs());
    let initial = bracket.f_lo.abs().max(bracket.f_hi.abs());
    if fb != T::zero() && grown > T::lit(POLE_MAGNITUDE) && grown > initial {
        return Refined::Pole { location: b };
    }

    let residual = f(b);
    let slope = derivative_estimate(f, b);
    let converged = residual.is_finite()
        && residual.abs() <= tol * (T::one() + slope.abs().min(T::max_value() / two));
    Refined::Root(RootResult {
        root: b,
        residual,
        iterations,
        converged,
    })
}

/// Central-difference estimate of `f′(x)`; zero when it cannot be formed.
pub fn derivative_estimate<T, F>(f: &F, x: T) -> T
where
    T: Real,
    F: Fn(T) -> T,
{
    let h = T::epsilon().sqrt() * x.abs().max(T::epsilon().sqrt());
    let d = (f(x + h) - f(x - h)) / (h + h);
    if d.is_finite() {
        d
    } else {
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root_lands_on_grid() {
        let roots = find_roots(|x: f64| x - 1.0, (0.0, 2.0), 4, 1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].root, 1.0);
        assert!(roots[0].converged);
    }

    #[test]
    fn reduced_dirichlet_form_with_b_equal_two() {
        // Independent oracle: plain bisection.
        let g = |z: f64| (-z).exp() - (1.0 - z / 2.0);
        let (mut lo, mut hi) = (1.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo).signum() == g(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let roots = find_roots(g, (1e-9, 50.0), 8, 1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].root - lo).abs() < 1e-13);
        assert!((roots[0].root - 1.5936).abs() < 1e-4);
    }

    #[test]
    fn positive_function_has_no_roots() {
        let roots = find_roots(|k: f64| 1.0 / k.tanh() - 1.0, (0.1, 10.0), 8, 1e-12).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn poles_are_not_roots() {
        // tan has roots at kπ and poles at (k + 1/2)π.
        let roots = find_roots(|x: f64| x.tan(), (0.5, 10.0), 16, 1e-12).unwrap();
        let expected = [std::f64::consts::PI, 2.0 * std::f64::consts::PI, 3.0 * std::f64::consts::PI];
        assert_eq!(roots.len(), expected.len());
        for (r, e) in roots.iter().zip(expected) {
            assert!((r.root - e).abs() < 1e-12);
        }
    }

    #[test]
    fn simple_pole_without_root_is_rejected() {
        let roots = find_roots(|x: f64| 1.0 / (x - 0.3), (0.0, 1.0), 4, 1e-12).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn max_roots_keeps_the_smallest() {
        let roots = find_roots(|x: f64| x.sin(), (1.0, 20.0), 2, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].root - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn nan_is_an_evaluation_error() {
        let err = find_roots(|x: f64| (x - 0.5).ln(), (0.0, 1.0), 4, 1e-12).unwrap_err();
        assert!(matches!(err, RootError::Evaluation { .. }));
    }

    #[test]
    fn bad_arguments() {
        assert!(find_roots(|x: f64| x, (1.0, 0.0), 1, 1e-12).is_err());
        assert!(find_roots(|x: f64| x, (0.0, 1.0), 1, 0.0).is_err());
        assert!(Bracket::new(0.0, 1.0, 1.0, 2.0).is_err());
        assert!(Bracket::new(0.0, 1.0, -1.0, 2.0).is_ok());
    }

    #[test]
    fn tiny_root_near_left_end() {
        let roots = find_roots(|x: f64| x - 1e-12, (1e-200, 10.0), 1, 1e-15).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].root - 1e-12).abs() < 1e-25);
    }

    #[test]
    fn works_in_single_precision() {
        let roots = find_roots(|x: f32| x * x - 2.0, (0.0f32, 3.0), 2, 1e-5).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].root - std::f32::consts::SQRT_2).abs() < 1e-6);
    }
}
