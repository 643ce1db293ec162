//! Sturm-sequence bisection for symmetric tridiagonal matrices.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TridiagError {
    #[error("off-diagonal length {offdiag} does not match diagonal length {diag}")]
    ShapeMismatch { diag: usize, offdiag: usize },
    #[error("requested {count} eigenvalues of a {dim}x{dim} matrix")]
    CountOutOfRange { count: usize, dim: usize },
}

/// Number of eigenvalues strictly below `x`.
///
/// Counts the negative pivots of the LDLᵀ factorisation of `T - xI`.
pub fn sturm_count<T: Real>(diag: &[T], offdiag: &[T], x: T) -> usize {
    if diag.is_empty() {
        return 0;
    }
    let guard = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            let e = offdiag[i - 1];
            let prev = if q.abs() < guard { guard.copysign(q) } else { q };
            q = diag[i] - x - e * e / prev;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin_bounds<T: Real>(diag: &[T], offdiag: &[T]) -> (T, T) {
    let n = diag.len();
    let mut lo = T::max_value();
    let mut hi = T::min_value();
    for i in 0..n {
        let left = if i > 0 { offdiag[i - 1].abs() } else { T::zero() };
        let right = if i + 1 < n { offdiag[i].abs() } else { T::zero() };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The `count` smallest eigenvalues, ascending.
///
/// Each eigenvalue is bisected until its enclosing interval is at the
/// rounding level of the matrix entries, well inside the advertised
/// absolute accuracy `1e-12 · max(1, ‖diag‖∞)`.
pub fn tridiag_smallest_eigs<T: Real>(
    diag: &[T],
    offdiag: &[T],
    count: usize,
) -> Result<Vec<T>, TridiagError> {
    let n = diag.len();
    if n == 0 || offdiag.len() + 1 != n {
        return Err(TridiagError::ShapeMismatch {
            diag: n,
            offdiag: offdiag.len(),
        });
    }
    if count == 0 || count > n {
        return Err(TridiagError::CountOutOfRange { count, dim: n });
    }

    let (glo, ghi) = gershgorin_bounds(diag, offdiag);
    let scale = glo.abs().max(ghi.abs()).max(T::one());
    let pad = scale * T::epsilon() * T::lit(4.0);
    let (glo, ghi) = (glo - pad, ghi + pad);
    let half = T::lit(0.5);

    let mut eigs: Vec<T> = Vec::with_capacity(count);
    for j in 0..count {
        // The j-th eigenvalue is at least the (j-1)-th.
        let mut lo = eigs.last().copied().map_or(glo, |prev| prev.max(glo) - pad);
        let mut hi = ghi;
        for _ in 0..256 {
            let mid = half * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= T::lit(2.0) * T::epsilon() * scale {
                break;
            }
            if sturm_count(diag, offdiag, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        eigs.push(half * (lo + hi));
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_difference_3x3() {
        let eigs = tridiag_smallest_eigs(&[2.0, 2.0, 2.0], &[-1.0, -1.0], 3).unwrap();
        let s = std::f64::consts::SQRT_2;
        let expected = [2.0 - s, 2.0, 2.0 + s];
        for (e, x) in eigs.iter().zip(expected) {
            assert!((e - x).abs() < 1e-12, "{e} vs {x}");
        }
    }

    #[test]
    fn diagonal_matrix() {
        let eigs = tridiag_smallest_eigs(&[5.0f64, 1.0, 3.0], &[0.0, 0.0], 1).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_box_ground_state() {
        let n = 1000;
        let len = 30.0f64;
        let h = len / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let eigs = tridiag_smallest_eigs(&diag, &off, 1).unwrap();
        let exact = (std::f64::consts::PI / len).powi(2);
        assert!(((eigs[0] - exact) / exact).abs() < 1e-4);
    }

    #[test]
    fn degenerate_pivot_does_not_break_count() {
        // T - 1·I has a zero leading pivot.
        let d = [1.0, 3.0];
        let e = [-1.0];
        assert_eq!(sturm_count(&d, &e, 0.0), 0);
        assert_eq!(sturm_count(&d, &e, 1.0), 1);
        assert_eq!(sturm_count(&d, &e, 4.0), 2);
    }

    #[test]
    fn argument_errors() {
        assert!(tridiag_smallest_eigs(&[1.0, 2.0], &[0.5], 3).is_err());
        assert!(tridiag_smallest_eigs(&[1.0, 2.0], &[], 1).is_err());
        assert!(tridiag_smallest_eigs::<f64>(&[1.0], &[], 0).is_err());
    }

    #[test]
    fn single_precision() {
        let eigs = tridiag_smallest_eigs(&[2.0f32, 2.0, 2.0], &[-1.0, -1.0], 1).unwrap();
        assert!((eigs[0] - (2.0 - std::f32::consts::SQRT_2)).abs() < 1e-5);
    }
}
