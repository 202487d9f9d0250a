//! Dense complex linear algebra.

mod hermitian;
mod matrix;
mod svd;

use num_complex::Complex64;
use thiserror::Error;

pub use hermitian::{
    extreme_eigenpairs, hermitian_eig, hermitian_eigenvalues, max_eigenvalue, EigenPair,
    ExtremePairs, HermitianSpectrum, HERMITIAN_TOL,
};
pub use matrix::{vec_inner, vec_norm, ComplexMatrix};
pub use svd::{svd, svd_columns, Svd};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("eigen iteration exceeded its budget of {budget} steps")]
    NoConvergence { budget: usize },
    #[error("shape mismatch: expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

/// Largest singular value, as the square root of the top eigenvalue of `A^* A`.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    let gram = a.adjoint_mul(a);
    // The Gram matrix is exactly Hermitian and finite, so the solver only
    // fails on pathological (non-finite) input.
    match max_eigenvalue(&gram) {
        Ok(top) => top.max(0.0).sqrt(),
        Err(_) => f64::NAN,
    }
}

/// `(A + A^*) / 2`
pub fn real_part(a: &ComplexMatrix) -> ComplexMatrix {
    a.hermitian_part()
}

/// Orthonormal basis of the orthogonal complement of the span of the given
/// orthonormal vectors in `C^n`.
pub fn orthonormal_complement(
    basis: &[Vec<Complex64>],
    n: usize,
) -> Result<Vec<Vec<Complex64>>, LinalgError> {
    let target = n.saturating_sub(basis.len());
    if target == 0 {
        return Ok(vec![]);
    }
    let mut proj = ComplexMatrix::identity(n);
    for v in basis {
        for i in 0..n {
            for j in 0..n {
                proj[(i, j)] -= v[i] * v[j].conj();
            }
        }
    }
    let spec = hermitian_eig(&proj.hermitian_part())?;
    Ok((0..target).map(|j| spec.vector(j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_examples() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap();
        assert!((spectral_norm(&a) - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(3)), 0.0);
        let rot = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap();
        assert!((spectral_norm(&rot) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn real_part_examples() {
        let h = ComplexMatrix::from_rows(&[
            vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, -1.0)],
            vec![Complex64::new(1.0, 1.0), Complex64::new(-3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(real_part(&h), h);
        let skew = h.scale(Complex64::new(0.0, 1.0));
        assert!(real_part(&skew).frobenius_norm() < 1e-15);
    }

    #[test]
    fn complement_of_first_axis() {
        let e0 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let comp = orthonormal_complement(std::slice::from_ref(&e0), 3).unwrap();
        assert_eq!(comp.len(), 2);
        for v in &comp {
            assert!(vec_inner(v, &e0).norm() < 1e-14);
            assert!((vec_norm(v) - 1.0).abs() < 1e-14);
        }
    }
}
