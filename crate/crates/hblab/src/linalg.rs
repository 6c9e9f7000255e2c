//! Minimal dense Hermitian linear algebra for the small matrices that show
//! up here (Gram blocks, defect blocks; dimension at most a few dozen).

use num_traits::Zero;

use crate::Complex;

/// Cholesky factorization of a Hermitian matrix given row-major. Returns the
/// lower factor, or `None` if a pivot fails to be strictly positive.
pub(crate) fn cholesky(a: &[Complex], n: usize) -> Option<Vec<Complex>> {
    let mut l = vec![Complex::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k].conj();
            }
            if i == j {
                if sum.re <= 0.0 {
                    return None;
                }
                l[i * n + i] = Complex::new(sum.re.sqrt(), 0.0);
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solves `L x = b` for lower-triangular `L` (forward substitution).
fn solve_lower(l: &[Complex], n: usize, b: &mut [Complex]) {
    for i in 0..n {
        let mut acc = b[i];
        for k in 0..i {
            acc -= l[i * n + k] * b[k];
        }
        b[i] = acc / l[i * n + i];
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
pub(crate) fn hermitian_eigenvalues(a: &[Complex], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q].norm_sqr();
            }
        }
        let scale: f64 = (0..n).map(|i| m[i * n + i].norm_sqr()).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let phase = apq / apq.norm();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // Columns: col_p' = c col_p - s conj(phase) col_q,
                //          col_q' = s phase col_p + c col_q.
                for i in 0..n {
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    m[i * n + p] = aip * c - aiq * phase.conj() * s;
                    m[i * n + q] = aip * phase * s + aiq * c;
                }
                for j in 0..n {
                    let apj = m[p * n + j];
                    let aqj = m[q * n + j];
                    m[p * n + j] = apj * c - aqj * phase * s;
                    m[q * n + j] = apj * phase.conj() * s + aqj * c;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}

/// Extreme generalized eigenvalues of the Hermitian positive-definite pencil
/// `A x = mu B x`, via `C = L^{-1} A L^{-*}` with `B = L L^*`.
pub(crate) fn generalized_eigen_extremes(
    a: &[Complex],
    b: &[Complex],
    n: usize,
) -> Option<(f64, f64)> {
    let l = cholesky(b, n)?;
    // C = L^{-1} A L^{-*}: solve column-wise, then row-wise.
    let mut c = a.to_vec();
    // X = L^{-1} A  (apply forward substitution to each column)
    for j in 0..n {
        let mut col: Vec<Complex> = (0..n).map(|i| c[i * n + j]).collect();
        solve_lower(&l, n, &mut col);
        for i in 0..n {
            c[i * n + j] = col[i];
        }
    }
    // C = X L^{-*}  <=>  C^* = L^{-1} X^*
    for i in 0..n {
        let mut row: Vec<Complex> = (0..n).map(|j| c[i * n + j].conj()).collect();
        solve_lower(&l, n, &mut row);
        for j in 0..n {
            c[i * n + j] = row[j].conj();
        }
    }
    let eig = hermitian_eigenvalues(&c, n);
    Some((eig[0], eig[n - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_and_eigen() {
        // A = [[2, i], [-i, 2]]: eigenvalues 1 and 3.
        let a = vec![
            Complex::new(2.0, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(0.0, -1.0),
            Complex::new(2.0, 0.0),
        ];
        assert!(cholesky(&a, 2).is_some());
        let eig = hermitian_eigenvalues(&a, 2);
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);

        // Not positive definite.
        let bad = vec![
            Complex::new(1.0, 0.0),
            Complex::new(2.0, 0.0),
            Complex::new(2.0, 0.0),
            Complex::new(1.0, 0.0),
        ];
        assert!(cholesky(&bad, 2).is_none());
    }

    #[test]
    fn generalized_identity() {
        let a = vec![
            Complex::new(3.0, 0.0),
            Complex::new(0.0, 0.5),
            Complex::new(0.0, -0.5),
            Complex::new(1.0, 0.0),
        ];
        let b = vec![
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        ];
        let (lo, hi) = generalized_eigen_extremes(&a, &b, 2).unwrap();
        let eig = hermitian_eigenvalues(&a, 2);
        assert!((lo - eig[0]).abs() < 1e-12);
        assert!((hi - eig[1]).abs() < 1e-12);
    }
}
