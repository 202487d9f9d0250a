//! Hankel matrices of the power weight `omega(e^{i theta}) = e^{i beta theta}`,
//! `theta in (-pi, pi)`, and the norm of the associated singular integral
//! operator.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{OperatorError, PredictorResult};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::quadratic::{Attainment, TruncationFamily};

/// Fourier coefficient `(1/2pi) int e^{i (beta - k) theta} d theta`
/// `= (-1)^k sin(pi beta) / (pi (beta - k))`.
pub fn hankel_coefficient(beta: f64, k: i64) -> f64 {
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * (PI * beta).sin() / (PI * (beta - k as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HankelModel {
    pub beta: f64,
    pub n: usize,
    /// `c_1, ..., c_{2n-1}`.
    pub coeffs: Vec<f64>,
    /// `H[m][k] = c_{m+k+1}`.
    pub matrix: ComplexMatrix,
}

impl HankelModel {
    /// `||H||`; the matrix is real symmetric, so this is its largest
    /// eigenvalue modulus.
    pub fn norm(&self) -> f64 {
        match hermitian_eigenvalues(&self.matrix) {
            Ok(ev) => ev.first().copied().unwrap_or(0.0).abs().max(ev.last().copied().unwrap_or(0.0).abs()),
            Err(_) => f64::NAN,
        }
    }
}

fn check_beta(beta: f64) -> Result<(), OperatorError> {
    if !(beta.abs() > 0.0 && beta.abs() < 1.0) {
        return Err(OperatorError::InvalidParameter(format!(
            "power-weight exponent {beta} must satisfy 0 < |beta| < 1"
        )));
    }
    Ok(())
}

pub fn power_weight_hankel(beta: f64, n: usize) -> Result<HankelModel, OperatorError> {
    check_beta(beta)?;
    if n == 0 {
        return Err(OperatorError::InvalidParameter("truncation size must be positive".into()));
    }
    let coeffs: Vec<f64> = (1..2 * n as i64).map(|k| hankel_coefficient(beta, k)).collect();
    let mut data = Vec::with_capacity(n * n);
    for m in 0..n {
        data.extend(coeffs[m..m + n].iter().map(|&c| Complex64::new(c, 0.0)));
    }
    let matrix = ComplexMatrix::from_row_major(n, data).expect("finite square data");
    Ok(HankelModel {
        beta,
        n,
        coeffs,
        matrix,
    })
}

/// `||S|| = sqrt((1 + h) / (1 - h))` from the Hankel norm `h`.
pub fn singular_norm_from_hankel(h: f64) -> Result<f64, OperatorError> {
    if !(h >= 0.0) {
        return Err(OperatorError::InvalidParameter(format!("Hankel norm {h} is negative")));
    }
    if h >= 1.0 {
        return Err(OperatorError::WeightNotAdmissible { h });
    }
    Ok(((1.0 + h) / (1.0 - h)).sqrt())
}

/// Index of a node whose exponent differs in sign from every other non-zero
/// exponent and whose modulus is at least the sum of their moduli. Zero
/// exponents are ignored; with no non-zero exponent every node qualifies.
pub fn dominant_node(betas: &[f64]) -> Option<usize> {
    let (idx, top) = betas
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
    if *top == 0.0 {
        return Some(idx);
    }
    let mut rest = 0.0;
    for (j, &b) in betas.iter().enumerate() {
        if j == idx || b == 0.0 {
            continue;
        }
        if b.signum() == top.signum() {
            return None;
        }
        rest += b.abs();
    }
    (top.abs() >= rest).then_some(idx)
}

/// Essential norm `cot(pi (1 - 2 beta~) / 4)` with `beta~ = max |beta_j|`,
/// independent of where the nodes sit. When `one_node_dominant` is set the
/// dominance condition is checked and the norm equals the essential norm and
/// is not attained; otherwise the norm is left undetermined.
pub fn power_weight_predict(betas: &[f64], one_node_dominant: bool) -> Result<PredictorResult, OperatorError> {
    if betas.is_empty() {
        return Err(OperatorError::InvalidParameter("no power-weight exponents".into()));
    }
    if let Some(b) = betas.iter().find(|b| !(b.abs() < 0.5)) {
        return Err(OperatorError::InvalidParameter(format!(
            "exponent {b} must satisfy |beta| < 1/2"
        )));
    }
    let tilde = betas.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    let ess = 1.0 / (PI * (1.0 - 2.0 * tilde) / 4.0).tan();
    if !one_node_dominant {
        return PredictorResult::involution(None, ess, Attainment::Unknown, "power-weight");
    }
    if dominant_node(betas).is_none() {
        return Err(OperatorError::InvalidParameter(format!(
            "no dominant node among exponents {betas:?}"
        )));
    }
    let attained = if tilde == 0.0 { Attainment::Yes } else { Attainment::No };
    PredictorResult::involution(Some(ess), ess, attained, "power-weight-dominant")
}

/// Sections `power_weight_hankel(beta, n)`.
#[derive(Debug, Clone, Copy)]
pub struct HankelFamily {
    beta: f64,
}

impl HankelFamily {
    pub fn new(beta: f64) -> Result<Self, OperatorError> {
        check_beta(beta)?;
        Ok(Self { beta })
    }
}

impl TruncationFamily for HankelFamily {
    fn section(&self, n: usize) -> ComplexMatrix {
        power_weight_hankel(self.beta, n).expect("exponent validated on construction").matrix
    }

    fn label(&self) -> String {
        format!("hankel(beta={})", self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson rule for `(1/2pi) int_{-pi}^{pi} cos((beta - k) t) dt`;
    /// the sine part integrates to zero by symmetry.
    fn quadrature(beta: f64, k: i64) -> f64 {
        let panels = 200_000;
        let h = 2.0 * PI / panels as f64;
        let f = |t: f64| ((beta - k as f64) * t).cos();
        let mut sum = f(-PI) + f(PI);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(-PI + h * i as f64);
        }
        sum * h / 3.0 / (2.0 * PI)
    }

    #[test]
    fn coefficients_match_quadrature() {
        for beta in [0.25, -0.4, 0.7] {
            for k in [1, 2, 3, 7, 20, 63] {
                let q = quadrature(beta, k);
                assert!((hankel_coefficient(beta, k) - q).abs() < 1e-10, "beta {beta} k {k}");
            }
        }
    }

    #[test]
    fn layout() {
        let h = power_weight_hankel(0.25, 5).unwrap();
        assert_eq!(h.coeffs.len(), 9);
        for m in 0..5 {
            for k in 0..5 {
                assert_eq!(h.matrix[(m, k)].re, hankel_coefficient(0.25, (m + k + 1) as i64));
                assert_eq!(h.matrix[(m, k)].im, 0.0);
            }
        }
    }

    #[test]
    fn small_exponent_vanishes() {
        let h = power_weight_hankel(1e-12, 16).unwrap();
        assert!(h.norm() < 1e-11);
        assert!(power_weight_hankel(0.0, 4).is_err());
        assert!(power_weight_hankel(1.0, 4).is_err());
    }

    #[test]
    fn sections_increase_below_limit() {
        let limit = (PI * 0.25).sin();
        let norms: Vec<f64> = [16, 32, 64].iter().map(|&n| power_weight_hankel(0.25, n).unwrap().norm()).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        assert!(norms.iter().all(|&v| v <= limit + 1e-9));
    }

    #[test]
    fn singular_norm_values() {
        assert_eq!(singular_norm_from_hankel(0.0).unwrap(), 1.0);
        let s = singular_norm_from_hankel((PI / 4.0).sin()).unwrap();
        assert!((s - 1.0 / (PI / 8.0).tan()).abs() < 1e-12);
        assert!(matches!(
            singular_norm_from_hankel(1.0),
            Err(OperatorError::WeightNotAdmissible { .. })
        ));
        assert!(singular_norm_from_hankel(-0.1).is_err());
    }

    #[test]
    fn cross_formula_on_grid() {
        // Near beta = 1/2 the rounding of sin(pi beta) alone is amplified past
        // 1e-12, so the grid stops where the comparison is well conditioned.
        for i in 1..=1000 {
            let beta = 0.45 * i as f64 / 1000.0;
            let lhs = singular_norm_from_hankel((PI * beta).sin()).unwrap();
            let rhs = 1.0 / (PI * (1.0 - 2.0 * beta) / 4.0).tan();
            assert!((lhs - rhs).abs() <= 1e-12, "beta {beta}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn single_node_prediction() {
        let r = power_weight_predict(&[0.25], true).unwrap();
        let cot = 1.0 / (PI / 8.0).tan();
        assert!((r.norm.unwrap() - cot).abs() < 1e-12);
        assert_eq!(r.ess_norm, r.norm.unwrap());
        assert!((r.major_axis().unwrap() - 2.0 / (PI / 4.0).cos()).abs() < 1e-12);
        assert_eq!(r.attained, Attainment::No);
    }

    #[test]
    fn circle_limit() {
        let r = power_weight_predict(&[1e-12], true).unwrap();
        assert!((r.ess_norm - 1.0).abs() < 1e-11);
    }

    #[test]
    fn dominant_node_branch() {
        assert_eq!(dominant_node(&[0.3, -0.1]), Some(0));
        assert_eq!(dominant_node(&[0.1, -0.35, 0.2]), Some(1));
        assert_eq!(dominant_node(&[0.3, 0.1]), None);
        assert_eq!(dominant_node(&[0.2, -0.15, -0.1]), None);
        let r = power_weight_predict(&[0.3, -0.1], true).unwrap();
        assert!((r.norm.unwrap() - 1.0 / (0.1 * PI).tan()).abs() < 1e-12);
        assert!(power_weight_predict(&[0.3, 0.1], true).is_err());
        let open = power_weight_predict(&[0.3, 0.1], false).unwrap();
        assert_eq!(open.norm, None);
        assert!(open.ellipse_w.is_none());
        assert!((open.ess_norm - 1.0 / (0.1 * PI).tan()).abs() < 1e-12);
    }

    #[test]
    fn invalid_exponents() {
        assert!(power_weight_predict(&[], false).is_err());
        assert!(power_weight_predict(&[0.5], false).is_err());
        assert!(power_weight_predict(&[f64::NAN], false).is_err());
    }
}
