//! Richardson extrapolation for step-halving sequences.

use crate::scalar::Real;

/// Eliminates the leading `h^order` error term from a pair of results
/// computed at steps `h` (`v_h`) and `h/2` (`v_h2`).
pub fn richardson<T: Real>(v_h: T, v_h2: T, order: u32) -> T {
    let factor = T::lit(2.0).powi(order as i32);
    (factor * v_h2 - v_h) / (factor - T::one())
}

/// Observed convergence ratio `(v_h - v_h2) / (v_h2 - v_h4)`; about `2^order`
/// for a method in its asymptotic regime.
pub fn convergence_ratio<T: Real>(v_h: T, v_h2: T, v_h4: T) -> T {
    (v_h - v_h2) / (v_h2 - v_h4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_cancellation() {
        assert!((richardson(1.1f64, 1.025, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn first_order() {
        assert_eq!(richardson(2.0, 1.5, 1), 1.0);
    }

    #[test]
    fn ratio_of_quadratic_sequence() {
        let v = |h: f64| 1.0 + 3.0 * h * h;
        assert!((convergence_ratio(v(0.1), v(0.05), v(0.025)) - 4.0).abs() < 1e-9);
    }
}
