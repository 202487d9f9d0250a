//! One-sided Jacobi SVD for small dense complex matrices.
//!
//! Small singular values come out with absolute accuracy on the order of
//! `eps * ||A||`, which the principal-angle computations rely on.

use num_complex::Complex64;

use super::{vec_norm, ComplexMatrix, LinalgError};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct Svd {
    /// Non-increasing.
    pub singular_values: Vec<f64>,
    /// Left singular vectors; zero for vanishing singular values.
    pub left: Vec<Vec<Complex64>>,
    /// Right singular vectors, a full orthonormal basis of the column space
    /// dimension.
    pub right: Vec<Vec<Complex64>>,
}

impl Svd {
    pub fn rank(&self, tol: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > tol).count()
    }
}

/// SVD of a square matrix.
pub fn svd(a: &ComplexMatrix) -> Result<Svd, LinalgError> {
    let cols: Vec<Vec<Complex64>> = (0..a.dim()).map(|j| a.column(j)).collect();
    svd_columns(&cols)
}

/// SVD of the matrix whose columns are `cols` (all of equal length).
pub fn svd_columns(cols: &[Vec<Complex64>]) -> Result<Svd, LinalgError> {
    let ncols = cols.len();
    if ncols == 0 {
        return Ok(Svd {
            singular_values: vec![],
            left: vec![],
            right: vec![],
        });
    }
    let nrows = cols[0].len();
    if cols.iter().any(|c| c.len() != nrows) {
        return Err(LinalgError::Shape {
            expected: nrows,
            found: cols.iter().map(Vec::len).find(|&l| l != nrows).unwrap_or(0),
        });
    }

    let mut work: Vec<Vec<Complex64>> = cols.to_vec();
    let mut right: Vec<Vec<Complex64>> = (0..ncols)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); ncols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    // Columns at rounding level of the whole matrix are numerically zero and
    // would otherwise never pass the relative orthogonality test.
    let total: f64 = work.iter().flatten().map(|z| z.norm_sqr()).sum();
    let negligible = (64.0 * f64::EPSILON).powi(2) * total;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..ncols {
            for j in i + 1..ncols {
                let alpha: f64 = work[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = work[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = work[i].iter().zip(&work[j]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= negligible || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut work, i, j, phase, c, s);
                rotate(&mut right, i, j, phase, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            budget: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..ncols).collect();
    let norms: Vec<f64> = work.iter().map(|c| vec_norm(c)).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let mut singular_values = Vec::with_capacity(ncols);
    let mut left = Vec::with_capacity(ncols);
    let mut right_sorted = Vec::with_capacity(ncols);
    for &k in &order {
        let s = norms[k];
        singular_values.push(s);
        left.push(if s > 0.0 {
            work[k].iter().map(|z| z / s).collect()
        } else {
            vec![Complex64::new(0.0, 0.0); nrows]
        });
        right_sorted.push(right[k].clone());
    }
    Ok(Svd {
        singular_values,
        left,
        right: right_sorted,
    })
}

/// Rotates columns `i`, `j` after rephasing column `j` by `phase`.
fn rotate(cols: &mut [Vec<Complex64>], i: usize, j: usize, phase: Complex64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(j);
    let ci = &mut lo[i];
    let cj = &mut hi[0];
    for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
        let bj = *b * phase;
        let ai = *a;
        *a = ai * c - bj * s;
        *b = ai * s + bj * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_triangular_example() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap();
        let svd = svd(&a).unwrap();
        let s2 = 2f64.sqrt();
        assert!((svd.singular_values[0] - (1.0 + s2)).abs() < 1e-14);
        assert!((svd.singular_values[1] - (s2 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_complex_rectangular() {
        let c = |re, im| Complex64::new(re, im);
        let cols = vec![
            vec![c(1.0, 0.5), c(0.0, 2.0), c(-1.0, 0.0)],
            vec![c(0.3, -0.2), c(1.0, 1.0), c(2.0, 0.1)],
        ];
        let svd = svd_columns(&cols).unwrap();
        // A v_k = s_k u_k
        for k in 0..2 {
            let av: Vec<Complex64> = (0..3)
                .map(|r| (0..2).map(|j| cols[j][r] * svd.right[k][j]).sum())
                .collect();
            for r in 0..3 {
                assert!((av[r] - svd.left[k][r] * svd.singular_values[k]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn tiny_singular_value_is_resolved() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1e-12]]).unwrap();
        let svd = svd(&a).unwrap();
        assert!((svd.singular_values[1] - 1e-12).abs() < 1e-24);
    }
}
