//! Composition operators `C_phi f = f o phi` with the involutive disc
//! automorphism `phi(z) = (p - z) / (1 - conj(p) z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_symbol, OperatorError, PredictorResult};
use crate::linalg::ComplexMatrix;
use crate::quadratic::{Attainment, TruncationFamily};

pub const WEIGHTED_GRID: usize = 4096;

/// Weight ratios beyond this are treated as a violated boundedness condition.
const OVERFLOW_GUARD: f64 = 1e150;
const REFINE_PASSES: usize = 2;
const REFINE_POINTS: usize = 64;
const CONSTANT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionSpace {
    Hardy,
    Dirichlet,
}

impl FunctionSpace {
    pub fn name(self) -> &'static str {
        match self {
            FunctionSpace::Hardy => "hardy",
            FunctionSpace::Dirichlet => "dirichlet",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionModel {
    pub p: Complex64,
    pub space: FunctionSpace,
    pub n: usize,
}

impl CompositionModel {
    pub fn new(p: Complex64, space: FunctionSpace, n: usize) -> Result<Self, OperatorError> {
        check_symbol(p)?;
        if n == 0 {
            return Err(OperatorError::InvalidParameter("truncation size must be positive".into()));
        }
        Ok(Self { p, space, n })
    }

    /// Leading `n x n` section. Only the Hardy space has a matrix model.
    pub fn matrix(&self) -> Result<ComplexMatrix, OperatorError> {
        match self.space {
            FunctionSpace::Hardy => composition_matrix(self.p, self.n),
            FunctionSpace::Dirichlet => Err(OperatorError::UnsupportedSpace(self.space.name())),
        }
    }

    pub fn predict(&self) -> Result<PredictorResult, OperatorError> {
        match self.space {
            FunctionSpace::Hardy => composition_predict(self.p),
            FunctionSpace::Dirichlet => dirichlet_predict(self.p),
        }
    }
}

/// Taylor coefficients of `phi` up to degree `n - 1`:
/// `phi(z) = p - (1 - |p|^2) sum_{k >= 1} conj(p)^{k-1} z^k`.
pub fn composition_symbol(p: Complex64, n: usize) -> Vec<Complex64> {
    let mut coeffs = Vec::with_capacity(n);
    if n == 0 {
        return coeffs;
    }
    coeffs.push(p);
    let mut power = Complex64::new(-(1.0 - p.norm_sqr()), 0.0);
    for _ in 1..n {
        coeffs.push(power);
        power *= p.conj();
    }
    coeffs
}

/// `M[m][k]` = coefficient of `z^m` in `phi(z)^k`, for `m, k < n`.
pub fn composition_matrix(p: Complex64, n: usize) -> Result<ComplexMatrix, OperatorError> {
    check_symbol(p)?;
    if n == 0 {
        return Err(OperatorError::InvalidParameter("truncation size must be positive".into()));
    }
    let phi = composition_symbol(p, n);
    let mut m = ComplexMatrix::zeros(n);
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    col[0] = Complex64::new(1.0, 0.0);
    m.set_column(0, &col);
    let mut next = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n {
        for (deg, slot) in next.iter_mut().enumerate() {
            *slot = (0..=deg).map(|j| col[j] * phi[deg - j]).sum();
        }
        std::mem::swap(&mut col, &mut next);
        m.set_column(k, &col);
    }
    Ok(m)
}

/// `||C_phi|| = ||C_phi||_ess = sqrt((1+|p|)/(1-|p|))` on the Hardy space; the
/// norm is attained only for `p = 0`.
pub fn composition_predict(p: Complex64) -> Result<PredictorResult, OperatorError> {
    check_symbol(p)?;
    let r = p.norm();
    let s = ((1.0 + r) / (1.0 - r)).sqrt();
    let attained = if r == 0.0 { Attainment::Yes } else { Attainment::No };
    PredictorResult::involution(Some(s), s, attained, "composition-hardy")
}

/// Dirichlet space: `L = -ln(1-|p|^2)`, `||C_phi|| = (sqrt(L) + sqrt(4+L))/2`,
/// essential norm 1, norm attained.
pub fn dirichlet_predict(p: Complex64) -> Result<PredictorResult, OperatorError> {
    check_symbol(p)?;
    let l = -(-p.norm_sqr()).ln_1p();
    let s = 0.5 * (l.sqrt() + (4.0 + l).sqrt());
    PredictorResult::involution(Some(s), 1.0, Attainment::Yes, "composition-dirichlet")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNorm {
    pub m: f64,
    pub attained: Attainment,
}

/// Norm of `C_phi` on the weighted Hardy space `H^2_rho`:
/// `M = sqrt(1-|p|^2) sup_t rho(phi(t)) / (|p - t| rho(t))` over `|t| = 1`.
/// `rho` takes the angle of a point on the circle. The supremum is taken on
/// a uniform grid of `grid` angles followed by local refinement around the
/// best sample, so `M` is biased low. The norm counts as attained when the
/// objective is constant on the grid.
pub fn weighted_composition_norm(
    p: Complex64,
    rho: &dyn Fn(f64) -> f64,
    grid: usize,
) -> Result<WeightedNorm, OperatorError> {
    check_symbol(p)?;
    if grid < 8 {
        return Err(OperatorError::InvalidParameter(format!("grid of size {grid} is too coarse")));
    }
    let scale = (1.0 - p.norm_sqr()).sqrt();
    let objective = |theta: f64| -> Result<f64, OperatorError> {
        let t = Complex64::from_polar(1.0, theta);
        let image = (p - t) / (Complex64::new(1.0, 0.0) - p.conj() * t);
        let (r_t, r_phi) = (rho(theta), rho(image.arg()));
        for r in [r_t, r_phi] {
            if !(r > 0.0) || !r.is_finite() {
                return Err(OperatorError::InvalidParameter(format!(
                    "weight must be positive and finite, got {r}"
                )));
            }
        }
        let ratio = r_phi / r_t;
        if !(ratio <= OVERFLOW_GUARD) {
            return Err(OperatorError::UnboundedModel(format!(
                "weight ratio {ratio} at angle {theta}"
            )));
        }
        Ok(scale * ratio / (p - t).norm())
    };

    let h = std::f64::consts::TAU / grid as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    let mut lowest = f64::INFINITY;
    for i in 0..grid {
        let theta = h * i as f64;
        let v = objective(theta)?;
        lowest = lowest.min(v);
        if v > best.1 {
            best = (theta, v);
        }
    }
    let spread = (best.1 - lowest) / best.1;

    let mut width = h;
    for _ in 0..REFINE_PASSES {
        let center = best.0;
        for j in 0..=REFINE_POINTS {
            let theta = center - width + 2.0 * width * j as f64 / REFINE_POINTS as f64;
            let v = objective(theta)?;
            if v > best.1 {
                best = (theta, v);
            }
        }
        width *= 2.0 / REFINE_POINTS as f64;
    }

    Ok(WeightedNorm {
        m: best.1,
        attained: if spread <= CONSTANT_TOL { Attainment::Yes } else { Attainment::No },
    })
}

/// Hardy-space sections `composition_matrix(p, n)`.
#[derive(Debug, Clone, Copy)]
pub struct CompositionFamily {
    p: Complex64,
}

impl CompositionFamily {
    pub fn new(p: Complex64) -> Result<Self, OperatorError> {
        check_symbol(p)?;
        Ok(Self { p })
    }
}

impl TruncationFamily for CompositionFamily {
    fn section(&self, n: usize) -> ComplexMatrix {
        composition_matrix(self.p, n).expect("symbol validated on construction")
    }

    fn label(&self) -> String {
        format!("composition(p={})", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_symbol_is_alternating_diagonal() {
        let m = composition_matrix(c(0.0, 0.0), 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { (-1f64).powi(j as i32) } else { 0.0 };
                assert_eq!(m[(i, j)], c(expected, 0.0));
            }
        }
    }

    #[test]
    fn first_row_is_powers_of_p() {
        let p = c(0.3, -0.4);
        let m = composition_matrix(p, 10).unwrap();
        for k in 0..10 {
            assert!((m[(0, k)] - p.powu(k as u32)).norm() < 1e-15);
        }
    }

    #[test]
    fn columns_match_direct_expansion() {
        // phi^2 from the closed-form coefficients by explicit convolution.
        let p = c(0.2, 0.5);
        let phi = composition_symbol(p, 8);
        let m = composition_matrix(p, 8).unwrap();
        for deg in 0..8 {
            let direct: Complex64 = (0..=deg).map(|j| phi[j] * phi[deg - j]).sum();
            assert!((m[(deg, 2)] - direct).norm() < 1e-15);
        }
    }

    #[test]
    fn symbol_is_involution_on_samples() {
        let p = c(0.4, 0.1);
        let phi = |z: Complex64| (p - z) / (1.0 - p.conj() * z);
        let z = c(0.2, -0.3);
        assert!((phi(phi(z)) - z).norm() < 1e-15);
        let coeffs = composition_symbol(p, 200);
        let series: Complex64 = coeffs.iter().enumerate().map(|(k, a)| a * z.powu(k as u32)).sum();
        assert!((series - phi(z)).norm() < 1e-14);
    }

    #[test]
    fn truncation_norm_for_half() {
        let m = composition_matrix(c(0.5, 0.0), 256).unwrap();
        let norm = spectral_norm(&m);
        let target = 3f64.sqrt();
        assert!(norm > target - 0.05 && norm < target + 1e-9, "{norm}");
    }

    #[test]
    fn rejects_boundary_symbols() {
        assert!(composition_matrix(c(1.0, 0.0), 4).is_err());
        assert!(composition_matrix(c(0.0, 0.0), 0).is_err());
        assert!(CompositionModel::new(c(0.5, 0.0), FunctionSpace::Dirichlet, 4)
            .unwrap()
            .matrix()
            .is_err());
    }

    #[test]
    fn hardy_prediction() {
        let zero = composition_predict(c(0.0, 0.0)).unwrap();
        assert_eq!(zero.norm, Some(1.0));
        let w = zero.ellipse_w.unwrap();
        assert_eq!(w.minor_axis(), 0.0);
        assert!((w.major_axis() - 2.0).abs() < 1e-15);
        assert_eq!(zero.attained, Attainment::Yes);

        let half = composition_predict(c(0.5, 0.0)).unwrap();
        let s = half.norm.unwrap();
        assert!((half.major_axis().unwrap() - 2.0 / 0.75f64.sqrt()).abs() < 1e-12);
        assert!((half.major_axis().unwrap() - (s + 1.0 / s)).abs() < 1e-12);
        assert_eq!(half.ess_norm, s);
        assert_eq!(half.attained, Attainment::No);
        assert_eq!(half.ellipse_w.unwrap().boundary, crate::geometry::BoundaryStatus::Open);
        assert_eq!(half.ellipse_wess.boundary, crate::geometry::BoundaryStatus::Closed);
    }

    #[test]
    fn dirichlet_prediction() {
        let zero = dirichlet_predict(c(0.0, 0.0)).unwrap();
        assert_eq!(zero.norm, Some(1.0));
        assert_eq!(zero.ellipse_w.unwrap().minor_axis(), 0.0);
        assert_eq!(zero.ellipse_wess.minor_axis(), 0.0);
        for p in [c(0.3, 0.0), c(0.1, 0.7), c(-0.9, 0.2)] {
            let r = dirichlet_predict(p).unwrap();
            let s = r.norm.unwrap();
            let l = -(1.0 - p.norm_sqr()).ln();
            assert!((r.major_axis().unwrap() - (4.0 + l).sqrt()).abs() < 1e-12);
            assert!((r.major_axis().unwrap() - (s + 1.0 / s)).abs() < 1e-12);
            assert_eq!(r.ess_norm, 1.0);
            let status = crate::quadratic::classify_closed(s, 1.0, None, 1).unwrap();
            assert_eq!(status, crate::geometry::BoundaryStatus::Closed);
        }
    }

    #[test]
    fn unweighted_norm_recovers_hardy_formula() {
        for p in [c(0.5, 0.0), c(0.2, -0.6), c(-0.7, 0.1)] {
            let r: f64 = p.norm();
            let w = weighted_composition_norm(p, &|_| 1.0, WEIGHTED_GRID).unwrap();
            // max of 1/|p - t| over the circle is 1/(1-|p|)
            let oracle = (1.0 - r * r).sqrt() / (1.0 - r);
            assert!((w.m - oracle).abs() < 1e-10 * oracle, "{} vs {oracle}", w.m);
            assert_eq!(w.attained, Attainment::No);
        }
        let w = weighted_composition_norm(c(0.0, 0.0), &|_| 1.0, WEIGHTED_GRID).unwrap();
        assert!((w.m - 1.0).abs() < 1e-15);
        assert_eq!(w.attained, Attainment::Yes);
    }

    #[test]
    fn weight_validation() {
        assert!(matches!(
            weighted_composition_norm(c(0.5, 0.0), &|_| -1.0, 64),
            Err(OperatorError::InvalidParameter(_))
        ));
        let blowup = |theta: f64| if theta.abs() < 1e-3 { 1e-300 } else { 1.0 };
        assert!(matches!(
            weighted_composition_norm(c(0.5, 0.0), &blowup, 64),
            Err(OperatorError::UnboundedModel(_))
        ));
    }
}
