//! Cylinder functions of order 0 and 1.
//!
//! `J` and `Y` come from the fdlibm rational/asymptotic approximations shipped
//! in the `libm` crate. The modified functions are evaluated here:
//!
//! * `I₀`, `I₁`: ascending power series for `x ≤ 25` (all terms positive, so
//!   no cancellation), Hankel asymptotic expansion of `e⁻ˣIᵥ(x)` beyond.
//! * `K₀`, `K₁`: ascending series for `x ≤ 2`, Steed's continued fraction
//!   (Temme's CF2 form) for `x > 2`, which yields `eˣKᵥ(x)` directly.
//!
//! The exponentially scaled forms are public because the radial secular
//! equation multiplies `K₀(k)` by `I₀(kb)` and the unscaled product overflows
//! long before the scaled one does.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_I_MAX: f64 = 25.0;
const SERIES_K_MAX: f64 = 2.0;
const MAX_TERMS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BesselFamily {
    J,
    Y,
    I,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BesselOrder {
    Zero,
    One,
}

/// One of the eight supported cylinder functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BesselKind {
    pub family: BesselFamily,
    pub order: BesselOrder,
}

impl BesselKind {
    pub const J0: Self = Self::new(BesselFamily::J, BesselOrder::Zero);
    pub const J1: Self = Self::new(BesselFamily::J, BesselOrder::One);
    pub const Y0: Self = Self::new(BesselFamily::Y, BesselOrder::Zero);
    pub const Y1: Self = Self::new(BesselFamily::Y, BesselOrder::One);
    pub const I0: Self = Self::new(BesselFamily::I, BesselOrder::Zero);
    pub const I1: Self = Self::new(BesselFamily::I, BesselOrder::One);
    pub const K0: Self = Self::new(BesselFamily::K, BesselOrder::Zero);
    pub const K1: Self = Self::new(BesselFamily::K, BesselOrder::One);

    pub const ALL: [Self; 8] = [
        Self::J0,
        Self::J1,
        Self::Y0,
        Self::Y1,
        Self::I0,
        Self::I1,
        Self::K0,
        Self::K1,
    ];

    pub const fn new(family: BesselFamily, order: BesselOrder) -> Self {
        Self { family, order }
    }

    /// Whether `x = 0` is inside the domain (only `J` and `I` are regular there).
    pub fn accepts_zero(self) -> bool {
        matches!(self.family, BesselFamily::J | BesselFamily::I)
    }
}

impl fmt::Display for BesselKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            BesselFamily::J => 'J',
            BesselFamily::Y => 'Y',
            BesselFamily::I => 'I',
            BesselFamily::K => 'K',
        };
        let order = match self.order {
            BesselOrder::Zero => 0,
            BesselOrder::One => 1,
        };
        write!(f, "{family}{order}")
    }
}

impl std::str::FromStr for BesselKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BesselKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown Bessel function `{s}` (expected one of J0 J1 Y0 Y1 I0 I1 K0 K1)"))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{name} is undefined at x = {x}")]
    Domain { name: String, x: f64 },
    #[error("{name}({x}) overflows f64")]
    Overflow { name: String, x: f64 },
    #[error("{name}({x}) underflows f64; use the exponentially scaled form")]
    Underflow { name: String, x: f64 },
    #[error("ratio bound parameters must be nonnegative (p = {p}, q = {q})")]
    InvalidParams { p: f64, q: f64 },
}

/// Evaluates the cylinder function `kind` at `x`.
pub fn bessel_eval(kind: BesselKind, x: f64) -> Result<f64, SpecFunError> {
    let domain = || SpecFunError::Domain {
        name: kind.to_string(),
        x,
    };
    if !x.is_finite() || x < 0.0 || (x == 0.0 && !kind.accepts_zero()) {
        return Err(domain());
    }
    let value = match kind.family {
        BesselFamily::J => match kind.order {
            BesselOrder::Zero => j0(x),
            BesselOrder::One => j1(x),
        },
        BesselFamily::Y => match kind.order {
            BesselOrder::Zero => y0(x),
            BesselOrder::One => y1(x),
        },
        BesselFamily::I => {
            let value = if x <= SERIES_I_MAX {
                i_series(x, kind.order)
            } else {
                // e^x overflows at ~709.8 while I(x) itself survives a little longer.
                let half = (0.5 * x).exp();
                i_asymptotic_scaled(x, kind.order) * half * half
            };
            if !value.is_finite() {
                return Err(SpecFunError::Overflow {
                    name: kind.to_string(),
                    x,
                });
            }
            value
        }
        BesselFamily::K => {
            let value = if x <= SERIES_K_MAX {
                match kind.order {
                    BesselOrder::Zero => k0_series(x),
                    BesselOrder::One => k1_series(x),
                }
            } else {
                let (k0s, k1s) = k_continued_fraction_scaled(x);
                let scaled = match kind.order {
                    BesselOrder::Zero => k0s,
                    BesselOrder::One => k1s,
                };
                let half = (-0.5 * x).exp();
                scaled * half * half
            };
            if value < f64::MIN_POSITIVE {
                return Err(SpecFunError::Underflow {
                    name: kind.to_string(),
                    x,
                });
            }
            value
        }
    };
    Ok(value)
}

#[inline]
pub fn j0(x: f64) -> f64 {
    libm::j0(x)
}

#[inline]
pub fn j1(x: f64) -> f64 {
    libm::j1(x)
}

#[inline]
pub fn y0(x: f64) -> f64 {
    libm::y0(x)
}

#[inline]
pub fn y1(x: f64) -> f64 {
    libm::y1(x)
}

/// `e⁻ˣ I₀(x)` for `x ≥ 0`.
pub fn i0_scaled(x: f64) -> f64 {
    i_scaled(x, BesselOrder::Zero)
}

/// `e⁻ˣ I₁(x)` for `x ≥ 0`.
pub fn i1_scaled(x: f64) -> f64 {
    i_scaled(x, BesselOrder::One)
}

/// `eˣ K₀(x)` for `x > 0`.
pub fn k0_scaled(x: f64) -> f64 {
    k_scaled(x).0
}

/// `eˣ K₁(x)` for `x > 0`.
pub fn k1_scaled(x: f64) -> f64 {
    k_scaled(x).1
}

/// `K₁(x)/K₀(x)` for `x > 0`, free of overflow and underflow at any `x`.
pub fn k1_over_k0(x: f64) -> f64 {
    let (k0s, k1s) = k_scaled(x);
    k1s / k0s
}

/// Both scaled `K` values, sharing one continued-fraction evaluation.
pub fn k_scaled(x: f64) -> (f64, f64) {
    if x <= SERIES_K_MAX {
        let e = x.exp();
        (k0_series(x) * e, k1_series(x) * e)
    } else {
        k_continued_fraction_scaled(x)
    }
}

fn i_scaled(x: f64, order: BesselOrder) -> f64 {
    if x <= SERIES_I_MAX {
        i_series(x, order) * (-x).exp()
    } else {
        i_asymptotic_scaled(x, order)
    }
}

fn order_value(order: BesselOrder) -> f64 {
    match order {
        BesselOrder::Zero => 0.0,
        BesselOrder::One => 1.0,
    }
}

/// Ascending series `Σ (x/2)^(2m+ν) / (m! (m+ν)!)`.
fn i_series(x: f64, order: BesselOrder) -> f64 {
    let nu = order_value(order);
    let y = 0.25 * x * x;
    let mut term = if nu == 0.0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for m in 1..MAX_TERMS {
        let m = m as f64;
        term *= y / (m * (m + nu));
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    sum
}

/// `e⁻ˣ Iᵥ(x) ≈ (2πx)^(-1/2) Σ (-1)^k aₖ(ν) / xᵏ`; accurate to ~e^(-2x).
fn i_asymptotic_scaled(x: f64, order: BesselOrder) -> f64 {
    let mu = 4.0 * order_value(order).powi(2);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (8.0 * k as f64 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 0.25 * f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// `K₀(x) = -(ln(x/2) + γ) I₀(x) + Σ_{m≥1} H_m (x²/4)^m / (m!)²`.
fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0f64;
    let mut i0 = 1.0f64;
    let mut tail = 0.0f64;
    let mut harmonic = 0.0f64;
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        term *= y / (mf * mf);
        harmonic += 1.0 / mf;
        i0 += term;
        tail += harmonic * term;
        if term <= f64::EPSILON * 0.125 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

/// `K₁(x) = 1/x + ln(x/2) I₁(x) - (x/4) Σ_{k≥0} [ψ(k+1) + ψ(k+2)] (x²/4)^k / (k!(k+1)!)`.
fn k1_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0f64;
    let mut i1_sum = 1.0f64;
    // ψ(1) + ψ(2) = (0 - γ) + (1 - γ)
    let mut psi_pair = 1.0 - 2.0 * EULER_GAMMA;
    let mut digamma_sum = psi_pair;
    let mut harmonic = 0.0f64;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        psi_pair = 2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        i1_sum += term;
        digamma_sum += psi_pair * term;
        if term <= f64::EPSILON * 0.125 * i1_sum {
            break;
        }
    }
    1.0 / x + (0.5 * x).ln() * (0.5 * x * i1_sum) - 0.25 * x * digamma_sum
}

/// Steed's method for `(eˣK₀(x), eˣK₁(x))`, valid for `x ≳ 2`.
fn k_continued_fraction_scaled(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0f64;
    let mut q2 = 1.0f64;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS * 20 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 0.5 * f64::EPSILON {
            break;
        }
    }
    h *= a1;
    let k0s = (PI / (2.0 * x)).sqrt() / s;
    let k1s = k0s * (x + 0.5 - h) / x;
    (k0s, k1s)
}

/// Parameters `p`, `q` of the double inequality
/// `1 + 1/(2(x+p)) < K₁(x)/K₀(x) < 1 + 1/(2(x+q))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioBoundParams {
    pub p: f64,
    pub q: f64,
}

impl Default for RatioBoundParams {
    /// The sharp constants `p = 1/4`, `q = 0`.
    fn default() -> Self {
        Self { p: 0.25, q: 0.0 }
    }
}

impl RatioBoundParams {
    /// True for the constants under which the bounds hold for every `x > 0`.
    pub fn is_sharp(&self) -> bool {
        self.p >= 0.25 && self.q == 0.0
    }
}

/// Returns `(1 + 1/(2(x+p)), 1 + 1/(2(x+q)))`.
pub fn k_ratio_bounds(x: f64, params: RatioBoundParams) -> Result<(f64, f64), SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain {
            name: "K1/K0 bounds".to_string(),
            x,
        });
    }
    if !(params.p >= 0.0 && params.q >= 0.0) {
        return Err(SpecFunError::InvalidParams {
            p: params.p,
            q: params.q,
        });
    }
    Ok((
        1.0 + 1.0 / (2.0 * (x + params.p)),
        1.0 + 1.0 / (2.0 * (x + params.q)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn regular_functions_at_origin() {
        assert_eq!(bessel_eval(BesselKind::J0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_eval(BesselKind::J1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_eval(BesselKind::I0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_eval(BesselKind::I1, 0.0).unwrap(), 0.0);
        assert!((bessel_eval(BesselKind::J0, 1e-300).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_functions_reject_nonpositive() {
        for kind in [BesselKind::Y0, BesselKind::Y1, BesselKind::K0, BesselKind::K1] {
            assert!(matches!(bessel_eval(kind, 0.0), Err(SpecFunError::Domain { .. })));
            assert!(matches!(bessel_eval(kind, -1.0), Err(SpecFunError::Domain { .. })));
        }
        assert!(bessel_eval(BesselKind::J0, -1.0).is_err());
        assert!(bessel_eval(BesselKind::I1, f64::NAN).is_err());
    }

    #[test]
    fn i_overflow_is_reported() {
        assert!(bessel_eval(BesselKind::I0, 700.0).unwrap().is_finite());
        assert!(matches!(
            bessel_eval(BesselKind::I0, 720.0),
            Err(SpecFunError::Overflow { .. })
        ));
        assert!(i0_scaled(720.0).is_finite());
    }

    #[test]
    fn k_underflow_is_reported() {
        assert!(bessel_eval(BesselKind::K1, 600.0).unwrap() > 0.0);
        assert!(matches!(
            bessel_eval(BesselKind::K0, 800.0),
            Err(SpecFunError::Underflow { .. })
        ));
        let (k0s, k1s) = k_scaled(800.0);
        assert!(k0s > 0.0 && k1s > k0s);
    }

    #[test]
    fn reference_values() {
        // Abramowitz & Stegun tables.
        assert!(rel(bessel_eval(BesselKind::K0, 1.0).unwrap(), 0.421_024_438_240_708_3) < 1e-14);
        assert!(rel(bessel_eval(BesselKind::K1, 1.0).unwrap(), 0.601_907_230_197_234_6) < 1e-14);
        assert!(rel(bessel_eval(BesselKind::K0, 2.0).unwrap(), 0.113_893_872_749_533_4) < 1e-14);
        assert!(rel(bessel_eval(BesselKind::I0, 1.0).unwrap(), 1.266_065_877_752_008_4) < 1e-14);
        assert!(rel(bessel_eval(BesselKind::I1, 1.0).unwrap(), 0.565_159_103_992_485_0) < 1e-14);
    }

    #[test]
    fn series_and_continued_fraction_agree_at_switch() {
        let below = 2.0f64;
        let above = below.next_up();
        let (k0a, k1a) = k_scaled(below);
        let (k0b, k1b) = k_continued_fraction_scaled(above);
        assert!(rel(k0a, k0b) < 1e-14);
        assert!(rel(k1a, k1b) < 1e-14);
    }

    #[test]
    fn series_and_asymptotic_agree_at_switch() {
        for order in [BesselOrder::Zero, BesselOrder::One] {
            let s = i_series(SERIES_I_MAX, order) * (-SERIES_I_MAX).exp();
            let a = i_asymptotic_scaled(SERIES_I_MAX, order);
            assert!(rel(s, a) < 1e-14, "{order:?}: {s} vs {a}");
        }
    }

    #[test]
    fn ratio_bounds_at_one() {
        let (lo, hi) = k_ratio_bounds(1.0, RatioBoundParams::default()).unwrap();
        assert!((lo - 1.4).abs() < 1e-15);
        assert_eq!(hi, 1.5);
        let ratio = k1_over_k0(1.0);
        assert!(lo < ratio && ratio < hi);
        assert!((ratio - 1.4296).abs() < 5e-5);
    }

    #[test]
    fn ratio_bounds_pinch_at_infinity() {
        let (lo, hi) = k_ratio_bounds(1e12, RatioBoundParams::default()).unwrap();
        assert!(lo - 1.0 < 1e-11 && hi - 1.0 < 1e-11);
        assert!(k_ratio_bounds(0.0, RatioBoundParams::default()).is_err());
        assert!(k_ratio_bounds(1.0, RatioBoundParams { p: -1.0, q: 0.0 }).is_err());
    }

    #[test]
    fn kind_parses_case_insensitively() {
        assert_eq!("k1".parse::<BesselKind>().unwrap(), BesselKind::K1);
        assert!("H0".parse::<BesselKind>().is_err());
    }
}
