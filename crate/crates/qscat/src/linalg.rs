//! Small dense complex linear algebra: LU solve and inverse with partial
//! pivoting.
//!
//! The matrices here are tiny (8x8 spin operators, the 16x16 two-site source
//! system), so a direct Gaussian elimination is both adequate and easy to
//! keep generic over the scalar type.

use crate::error::{Error, Result};
use crate::real::{Cplx, Real};

/// Solves `A x = b` in place for a single right-hand side.
///
/// Fails with [`Error::SingularSystem`] when a pivot falls below
/// `tol * max_initial_row_norm`.
pub fn solve<T: Real, const N: usize>(
    a: &[[Cplx<T>; N]; N],
    b: &[Cplx<T>; N],
    tol: T,
) -> Result<[Cplx<T>; N]> {
    let mut m = *a;
    let mut x = *b;

    // Scale reference for the singularity test.
    let mut scale = T::zero();
    for row in m.iter() {
        for e in row.iter() {
            scale = scale.max(e.norm());
        }
    }
    if scale == T::zero() {
        return Err(Error::SingularSystem { pivot: 0.0 });
    }
    let threshold = tol * scale;

    for col in 0..N {
        let mut pivot_row = col;
        let mut pivot_mag = m[col][col].norm();
        for row in col + 1..N {
            let mag = m[row][col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= threshold {
            return Err(Error::SingularSystem {
                pivot: pivot_mag.to_f64().unwrap_or(0.0),
            });
        }
        if pivot_row != col {
            m.swap(col, pivot_row);
            x.swap(col, pivot_row);
        }
        let pivot = m[col][col];
        for row in col + 1..N {
            let factor = m[row][col] / pivot;
            if factor.norm() == T::zero() {
                continue;
            }
            for k in col..N {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            let sub = factor * x[col];
            x[row] -= sub;
        }
    }

    for col in (0..N).rev() {
        let mut acc = x[col];
        for k in col + 1..N {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Ok(x)
}

/// Dense inverse by Gauss-Jordan elimination with partial pivoting.
pub fn invert<T: Real, const N: usize>(
    a: &[[Cplx<T>; N]; N],
    tol: T,
) -> Result<[[Cplx<T>; N]; N]> {
    let zero = Cplx::new(T::zero(), T::zero());
    let one = Cplx::new(T::one(), T::zero());
    let mut m = *a;
    let mut inv = [[zero; N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = one;
    }

    let mut scale = T::zero();
    for row in m.iter() {
        for e in row.iter() {
            scale = scale.max(e.norm());
        }
    }
    if scale == T::zero() {
        return Err(Error::SingularSystem { pivot: 0.0 });
    }
    let threshold = tol * scale;

    for col in 0..N {
        let mut pivot_row = col;
        let mut pivot_mag = m[col][col].norm();
        for row in col + 1..N {
            let mag = m[row][col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= threshold {
            return Err(Error::SingularSystem {
                pivot: pivot_mag.to_f64().unwrap_or(0.0),
            });
        }
        if pivot_row != col {
            m.swap(col, pivot_row);
            inv.swap(col, pivot_row);
        }
        let pivot = m[col][col];
        for k in 0..N {
            m[col][k] /= pivot;
            inv[col][k] /= pivot;
        }
        for row in 0..N {
            if row == col {
                continue;
            }
            let factor = m[row][col];
            if factor.norm() == T::zero() {
                continue;
            }
            for k in 0..N {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
                let sub = factor * inv[col][k];
                inv[row][k] -= sub;
            }
        }
    }
    Ok(inv)
}

/// Numerical rank by row elimination with full column scan.
pub fn rank<T: Real, const N: usize>(a: &[[Cplx<T>; N]; N], tol: T) -> usize {
    let mut m = *a;
    let mut scale = T::zero();
    for row in m.iter() {
        for e in row.iter() {
            scale = scale.max(e.norm());
        }
    }
    if scale == T::zero() {
        return 0;
    }
    let threshold = tol * scale;

    let mut rank = 0;
    let mut row_cursor = 0;
    for col in 0..N {
        let mut pivot_row = row_cursor;
        let mut pivot_mag = T::zero();
        for row in row_cursor..N {
            let mag = m[row][col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= threshold {
            continue;
        }
        m.swap(row_cursor, pivot_row);
        let pivot = m[row_cursor][col];
        for row in row_cursor + 1..N {
            let factor = m[row][col] / pivot;
            for k in col..N {
                let sub = factor * m[row_cursor][k];
                m[row][k] -= sub;
            }
        }
        rank += 1;
        row_cursor += 1;
        if row_cursor == N {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = [
            [c(2.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
            [c(0.5, 0.0), c(3.0, 0.0), c(0.0, 2.0)],
            [c(1.0, -1.0), c(0.0, 0.0), c(4.0, 1.0)],
        ];
        let x_true = [c(1.0, 2.0), c(-0.5, 0.25), c(0.0, -3.0)];
        let mut b = [c(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i] += a[i][j] * x_true[j];
            }
        }
        let x = solve(&a, &b, 1e-14).unwrap();
        for i in 0..3 {
            assert!((x[i] - x_true[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn invert_times_original_is_identity() {
        let a = [
            [c(1.0, 0.5), c(2.0, 0.0), c(0.0, 1.0)],
            [c(0.0, -2.0), c(1.0, 1.0), c(3.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0), c(1.0, -1.0)],
        ];
        let inv = invert(&a, 1e-14).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = c(0.0, 0.0);
                for k in 0..3 {
                    acc += a[i][k] * inv[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((acc - c(expect, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = [
            [c(1.0, 0.0), c(2.0, 0.0)],
            [c(2.0, 0.0), c(4.0, 0.0)],
        ];
        let b = [c(1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(
            solve(&a, &b, 1e-12),
            Err(Error::SingularSystem { .. })
        ));
        assert_eq!(rank(&a, 1e-12), 1);
    }
}
