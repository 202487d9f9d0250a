//! Unitary canonical form of a quadratic matrix:
//! `lambda1 I (+) lambda2 I (+) [[lambda1 I, 2X], [0, lambda2 I]]` with `X`
//! positive definite and diagonal.

use num_complex::Complex64;

use super::{QuadraticError, QuadraticSignature, QUADRATIC_TOL};
use crate::linalg::{orthonormal_complement, svd, svd_columns, vec_inner, ComplexMatrix};
use crate::random::{random_unitary, rng_from_seed};

/// Principal-angle cosines at or below this are orthogonal pairs.
const ANGLE_TOL: f64 = 1e-10;
/// Relative eigenvalue gap below which the nilpotent branch is used. The
/// fitted eigenvalues of a matrix with a double eigenvalue carry errors of
/// order `sqrt(eps)`.
const DOUBLE_EIGENVALUE_TOL: f64 = 1e-7;
const REASSEMBLY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub dim1: usize,
    pub dim2: usize,
    pub dim3: usize,
    /// Diagonal of `X`, sorted non-increasing.
    pub x_values: Vec<f64>,
    /// `U` with `U^* A U` in canonical form.
    pub unitary: ComplexMatrix,
}

impl CanonicalForm {
    pub fn norm_x(&self) -> f64 {
        self.x_values.first().copied().unwrap_or(0.0)
    }
}

/// How an assembled canonical matrix is conjugated.
#[derive(Debug, Clone, Copy)]
pub enum Conjugation<'a> {
    Identity,
    Given(&'a ComplexMatrix),
    Random { seed: u64 },
}

/// The unconjugated canonical matrix.
pub fn canonical_block_matrix(
    lambda1: Complex64,
    lambda2: Complex64,
    x_values: &[f64],
    dims: (usize, usize),
) -> ComplexMatrix {
    let (d1, d2) = dims;
    let d3 = x_values.len();
    let n = d1 + d2 + 2 * d3;
    let mut c = ComplexMatrix::zeros(n);
    for i in 0..d1 {
        c[(i, i)] = lambda1;
    }
    for i in d1..d1 + d2 {
        c[(i, i)] = lambda2;
    }
    for (i, &x) in x_values.iter().enumerate() {
        let f = d1 + d2 + i;
        let g = d1 + d2 + d3 + i;
        c[(f, f)] = lambda1;
        c[(g, g)] = lambda2;
        c[(f, g)] = Complex64::new(2.0 * x, 0.0);
    }
    c
}

/// `U C U^*` for the canonical matrix `C`.
pub fn assemble_canonical(
    lambda1: Complex64,
    lambda2: Complex64,
    x_values: &[f64],
    dims: (usize, usize),
    conjugation: Conjugation<'_>,
) -> ComplexMatrix {
    assert!(
        x_values.iter().all(|&x| x > 0.0 && x.is_finite()),
        "x values must be positive"
    );
    let c = canonical_block_matrix(lambda1, lambda2, x_values, dims);
    let n = c.dim();
    let owned;
    let u = match conjugation {
        Conjugation::Identity => return c,
        Conjugation::Given(u) => u,
        Conjugation::Random { seed } => {
            owned = random_unitary(&mut rng_from_seed(seed), n);
            &owned
        }
    };
    u.matmul(&c).matmul(&u.adjoint())
}

/// Recovers the canonical form of a quadratic matrix.
pub fn canonical_decompose(
    a: &ComplexMatrix,
    sig: &QuadraticSignature,
) -> Result<CanonicalForm, QuadraticError> {
    sig.require_quadratic(QUADRATIC_TOL)?;
    let scale = a.frobenius_norm().max(1.0);
    let gap = (sig.lambda1 - sig.lambda2).norm();
    let (form, lambda1, lambda2) = if gap <= DOUBLE_EIGENVALUE_TOL * scale {
        (nilpotent_branch(a, sig.mu, scale)?, sig.mu, sig.mu)
    } else {
        (distinct_branch(a, sig.lambda1, sig.lambda2)?, sig.lambda1, sig.lambda2)
    };

    let n = a.dim();
    let gram = form.unitary.adjoint_mul(&form.unitary);
    let unitarity = (&gram - &ComplexMatrix::identity(n)).frobenius_norm();
    let target = canonical_block_matrix(lambda1, lambda2, &form.x_values, (form.dim1, form.dim2));
    let reassembly = (&a.congruence(&form.unitary) - &target).frobenius_norm();
    if unitarity > REASSEMBLY_TOL || reassembly > REASSEMBLY_TOL * scale {
        return Err(QuadraticError::DefectiveDecomposition(format!(
            "reassembly residual {reassembly:.3e}, unitarity defect {unitarity:.3e}"
        )));
    }
    Ok(form)
}

fn combine(basis: &[Vec<Complex64>], coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = basis.first().map_or(0, Vec::len);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (b, &c) in basis.iter().zip(coeffs) {
        for (o, &bi) in out.iter_mut().zip(b) {
            *o += c * bi;
        }
    }
    out
}

fn unitary_from_columns(cols: &[Vec<Complex64>]) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(cols.len());
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

/// Orthonormal basis of `ker(A - lambda I)`, given that all non-zero
/// singular values of `A - lambda I` are at least `gap`.
fn eigenspace(a: &ComplexMatrix, lambda: Complex64, gap: f64) -> Result<Vec<Vec<Complex64>>, QuadraticError> {
    let dec = svd(&a.shift(-lambda))?;
    Ok(dec
        .singular_values
        .iter()
        .zip(dec.right)
        .filter(|(&s, _)| s < 0.5 * gap)
        .map(|(_, v)| v)
        .collect())
}

fn distinct_branch(
    a: &ComplexMatrix,
    lambda1: Complex64,
    lambda2: Complex64,
) -> Result<CanonicalForm, QuadraticError> {
    let n = a.dim();
    let delta = (lambda2 - lambda1).norm();
    let b1 = eigenspace(a, lambda1, delta)?;
    let b2 = eigenspace(a, lambda2, delta)?;
    if b1.len() + b2.len() != n {
        return Err(QuadraticError::DefectiveDecomposition(format!(
            "eigenspace dimensions {} + {} do not add up to {n}",
            b1.len(),
            b2.len()
        )));
    }

    // Principal angles between the eigenspaces: SVD of B1^* B2.
    let cross: Vec<Vec<Complex64>> = b2
        .iter()
        .map(|f| b1.iter().map(|e| vec_inner(f, e)).collect())
        .collect();
    let dec = svd_columns(&cross)?;
    if let Some(&smax) = dec.singular_values.first() {
        if smax >= 1.0 - ANGLE_TOL {
            return Err(QuadraticError::DefectiveDecomposition(format!(
                "eigenspaces intersect (cosine {smax})"
            )));
        }
    }

    let phase = (lambda2 - lambda1) / delta;
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut x_values = Vec::new();
    let mut paired_left = Vec::new();
    let mut h2 = Vec::new();
    for ((&sigma, left), right) in dec.singular_values.iter().zip(&dec.left).zip(&dec.right) {
        let f = combine(&b2, right);
        if sigma <= ANGLE_TOL {
            h2.push(f);
            continue;
        }
        let e = combine(&b1, left);
        let sine = (1.0 - sigma * sigma).sqrt();
        let g: Vec<Complex64> = f
            .iter()
            .zip(&e)
            .map(|(fi, ei)| (fi - ei * sigma) * (phase.conj() / sine))
            .collect();
        x_values.push(0.5 * delta * sigma / sine);
        first.push(e);
        second.push(g);
        paired_left.push(left.clone());
    }
    let h1: Vec<Vec<Complex64>> = orthonormal_complement(&paired_left, b1.len())?
        .iter()
        .map(|w| combine(&b1, w))
        .collect();

    let (dim1, dim2, dim3) = (h1.len(), h2.len(), x_values.len());
    let cols: Vec<Vec<Complex64>> = h1.into_iter().chain(h2).chain(first).chain(second).collect();
    Ok(CanonicalForm {
        dim1,
        dim2,
        dim3,
        x_values,
        unitary: unitary_from_columns(&cols),
    })
}

/// Double eigenvalue: `N = A - mu I` satisfies `N^2 = 0` and its singular
/// values are `2 x_i`. The rest of the space (kernel of both `N` and `N^*`)
/// is reported as `H1`.
fn nilpotent_branch(a: &ComplexMatrix, mu: Complex64, scale: f64) -> Result<CanonicalForm, QuadraticError> {
    let n = a.dim();
    let dec = svd(&a.shift(-mu))?;
    let mut x_values = Vec::new();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for ((&sigma, left), right) in dec.singular_values.iter().zip(&dec.left).zip(&dec.right) {
        if sigma <= ANGLE_TOL * scale {
            break;
        }
        x_values.push(0.5 * sigma);
        first.push(left.clone());
        second.push(right.clone());
    }
    let used: Vec<Vec<Complex64>> = first.iter().chain(&second).cloned().collect();
    let h1 = orthonormal_complement(&used, n)?;
    let (dim1, dim3) = (h1.len(), x_values.len());
    let cols: Vec<Vec<Complex64>> = h1.into_iter().chain(first).chain(second).collect();
    Ok(CanonicalForm {
        dim1,
        dim2: 0,
        dim3,
        x_values,
        unitary: unitary_from_columns(&cols),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::fit_quadratic;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn assemble_examples() {
        let a = assemble_canonical(c(1.0, 0.0), c(-1.0, 0.0), &[1.0], (0, 0), Conjugation::Identity);
        assert_eq!(a, ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap());
        let d = assemble_canonical(c(1.0, 0.0), c(-1.0, 0.0), &[], (1, 1), Conjugation::Identity);
        assert_eq!(d, ComplexMatrix::from_real_diagonal(&[1.0, -1.0]));
    }

    #[test]
    fn assembled_matrices_are_quadratic() {
        let a = assemble_canonical(c(0.3, 1.0), c(-2.0, 0.5), &[2.0, 0.7, 0.1], (2, 1), Conjugation::Random { seed: 1 });
        assert!(fit_quadratic(&a).residual <= 1e-12);
    }

    #[test]
    fn decompose_normal_matrix() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        let form = canonical_decompose(&d, &fit_quadratic(&d)).unwrap();
        assert_eq!((form.dim1, form.dim2, form.dim3), (1, 1, 0));
    }

    #[test]
    fn decompose_nilpotent() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let form = canonical_decompose(&a, &fit_quadratic(&a)).unwrap();
        assert_eq!(form.dim3, 1);
        assert!((form.x_values[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn decompose_scalar() {
        let a = ComplexMatrix::scalar(3, c(2.0, -1.0));
        let form = canonical_decompose(&a, &fit_quadratic(&a)).unwrap();
        assert_eq!((form.dim1, form.dim2, form.dim3), (3, 0, 0));
    }

    #[test]
    fn round_trip_recovers_x_values() {
        let x = [1.5, 0.9, 0.2];
        let a = assemble_canonical(c(2.0, 1.0), c(-1.0, 0.0), &x, (2, 3), Conjugation::Random { seed: 17 });
        let form = canonical_decompose(&a, &fit_quadratic(&a)).unwrap();
        assert_eq!((form.dim1, form.dim2, form.dim3), (2, 3, 3));
        for (got, want) in form.x_values.iter().zip(x) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_non_quadratic() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            canonical_decompose(&d, &fit_quadratic(&d)),
            Err(QuadraticError::NotQuadratic { .. })
        ));
    }
}
