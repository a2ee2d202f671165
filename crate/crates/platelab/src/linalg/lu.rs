//! LU factorization with partial pivoting, generic over real and complex
//! scalars.

use super::{Matrix, Scalar, SINGULARITY_THRESHOLD};
use crate::error::{Error, Result};

/// Packed LU factors of a square matrix with row-pivot record.
///
/// `P A = L U` where `perm[i]` is the original row now in position `i`.
pub struct LuFactor<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

/// Factors `a`, failing when a pivot falls below
/// `SINGULARITY_THRESHOLD * norm_inf(a)`.
pub fn lu_factor<T: Scalar>(a: &Matrix<T>) -> Result<LuFactor<T>> {
    if !a.is_square() {
        return Err(Error::Parameter(format!(
            "LU requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let pivot_floor = SINGULARITY_THRESHOLD * a.norm_inf();

    for k in 0..n {
        let mut p = k;
        let mut pmax = lu[(k, k)].modulus();
        for i in k + 1..n {
            let m = lu[(i, k)].modulus();
            if m > pmax {
                pmax = m;
                p = i;
            }
        }
        if pmax <= pivot_floor {
            return Err(Error::SingularMatrix(format!(
                "pivot {pmax:.3e} at column {k} below threshold {pivot_floor:.3e}"
            )));
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor != T::zero() {
                for j in k + 1..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] -= factor * t;
                }
            }
        }
    }
    Ok(LuFactor { lu, perm })
}

impl<T: Scalar> LuFactor<T> {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        // forward: L y = P b (unit lower)
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // backward: U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A^H x = b` (conjugate-transpose system) from the same factors.
    ///
    /// With `P A = L U` we have `A^H = U^H L^H P`, so the triangular sweeps
    /// run in the opposite order and the permutation is applied last.
    pub fn solve_conj_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut y = b.to_vec();
        // U^H s = b (U^H is lower triangular)
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = acc / self.lu[(i, i)].conj();
        }
        // L^H t = s (L^H is unit upper triangular)
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = acc;
        }
        // x = P^T t
        let mut x = vec![T::zero(); n];
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
        x
    }
}

/// Solves `A X = B` column by column.
pub fn lu_solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.rows() != b.rows() {
        return Err(Error::Parameter(format!(
            "lu_solve dimension mismatch: A is {}x{}, B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let f = lu_factor(a)?;
    let n = b.rows();
    let mut x = Matrix::zeros(n, b.cols());
    let mut col = vec![T::zero(); n];
    for j in 0..b.cols() {
        for i in 0..n {
            col[i] = b[(i, j)];
        }
        let sol = f.solve(&col);
        for i in 0..n {
            x[(i, j)] = sol[i];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm2_complex, DenseMatrix, SplitMix64};
    use num_complex::Complex64;

    #[test]
    fn identity_solve_returns_rhs() {
        let a = DenseMatrix::identity(4);
        let b = DenseMatrix::from_fn(4, 2, |i, j| (i + 2 * j) as f64);
        let x = lu_solve(&a, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let a = DenseMatrix::from_vec(2, 2, vec![2.0, 0.0, 0.0, 4.0]).unwrap();
        let b = DenseMatrix::from_vec(2, 1, vec![2.0, 4.0]).unwrap();
        let x = lu_solve(&a, &b).unwrap();
        assert_eq!(x[(0, 0)], 1.0);
        assert_eq!(x[(1, 0)], 1.0);
    }

    #[test]
    fn singular_matrix_is_detected() {
        let a = DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        let b = DenseMatrix::from_vec(2, 1, vec![1.0, 1.0]).unwrap();
        assert!(matches!(lu_solve(&a, &b), Err(Error::SingularMatrix(_))));
    }

    // Backward-stability contract on a constructed well-conditioned system:
    // A = Q1 diag(1..n) Q2 with random rotations applied from both sides.
    #[test]
    fn random_well_conditioned_residual() {
        let n = 50;
        let mut rng = SplitMix64::new(0xA5A5);
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = (i + 1) as f64;
        }
        // apply random Givens rotations from left and right
        for _ in 0..400 {
            let i = (rng.next_u64() as usize) % n;
            let mut j = (rng.next_u64() as usize) % n;
            if i == j {
                j = (j + 1) % n;
            }
            let theta = rng.next_f64() * std::f64::consts::PI;
            let (s, c) = theta.sin_cos();
            for k in 0..n {
                let (x, y) = (a[(i, k)], a[(j, k)]);
                a[(i, k)] = c * x - s * y;
                a[(j, k)] = s * x + c * y;
            }
            for k in 0..n {
                let (x, y) = (a[(k, i)], a[(k, j)]);
                a[(k, i)] = c * x - s * y;
                a[(k, j)] = s * x + c * y;
            }
        }
        let b = DenseMatrix::from_fn(n, 1, |i, _| rng.next_f64() + (i as f64) / n as f64);
        let x = lu_solve(&a, &b).unwrap();
        let mut residual: f64 = 0.0;
        let mut xnorm: f64 = 0.0;
        for i in 0..n {
            let mut acc = -b[(i, 0)];
            for j in 0..n {
                acc += a[(i, j)] * x[(j, 0)];
            }
            residual += acc * acc;
            xnorm += x[(i, 0)] * x[(i, 0)];
        }
        let residual = residual.sqrt();
        let xnorm = xnorm.sqrt();
        assert!(
            residual <= 1e-12 * a.norm_inf() * xnorm,
            "residual {residual:.3e} too large"
        );
    }

    #[test]
    fn complex_conj_transpose_solve() {
        let n = 8;
        let mut rng = SplitMix64::new(3);
        let a = Matrix::<Complex64>::from_fn(n, n, |_, _| {
            Complex64::new(rng.next_f64(), rng.next_f64())
        });
        let b: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.next_f64(), rng.next_f64()))
            .collect();
        let f = lu_factor(&a).unwrap();
        let x = f.solve_conj_transpose(&b);
        // residual of A^H x - b
        let mut r = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = -b[i];
            for j in 0..n {
                acc += a[(j, i)].conj() * x[j];
            }
            r[i] = acc;
        }
        assert!(norm2_complex(&r) <= 1e-12 * a.norm_inf() * norm2_complex(&x));
    }
}
