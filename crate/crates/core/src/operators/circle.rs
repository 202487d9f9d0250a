//! The Cauchy singular integral operator on the unit circle and the
//! closed-form bounds for curves made of lines and arcs.

use std::f64::consts::PI;

use super::{OperatorError, PredictorResult};
use crate::linalg::ComplexMatrix;
use crate::quadratic::{Attainment, TruncationFamily};

const GOLDEN_TOL: f64 = 1e-10;

/// `S` in the Fourier basis `e_j`, `j = -floor(n/2), ..., n - 1 - floor(n/2)`:
/// `+1` on analytic modes `j >= 0` and `-1` on the others.
pub fn cauchy_circle(n: usize) -> Result<ComplexMatrix, OperatorError> {
    if n < 2 {
        return Err(OperatorError::InvalidParameter(format!(
            "circle model needs at least 2 modes, got {n}"
        )));
    }
    let first = -((n / 2) as i64);
    let d: Vec<f64> = (0..n as i64).map(|i| if first + i >= 0 { 1.0 } else { -1.0 }).collect();
    Ok(ComplexMatrix::from_real_diagonal(&d))
}

#[derive(Debug, Clone, Copy)]
pub struct CauchyCircleFamily;

impl TruncationFamily for CauchyCircleFamily {
    fn section(&self, n: usize) -> ComplexMatrix {
        cauchy_circle(n.max(2)).expect("size clamped to the minimum")
    }

    fn label(&self) -> String {
        "cauchy-circle".into()
    }
}

/// Lower bounds for `S` on a bundle of `m` lines through one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundleBound {
    /// `cot(pi / 4m)`.
    pub norm_lower: f64,
    /// `2 csc(pi / 2m)`.
    pub major_axis_lower: f64,
    /// The bounds are known to be sharp for `m <= 3`.
    pub equality: bool,
}

pub fn bundle_predict(m: usize) -> Result<BundleBound, OperatorError> {
    if m == 0 {
        return Err(OperatorError::InvalidParameter("bundle needs at least one line".into()));
    }
    let m_f = m as f64;
    Ok(BundleBound {
        norm_lower: 1.0 / (PI / (4.0 * m_f)).tan(),
        major_axis_lower: 2.0 / (PI / (2.0 * m_f)).sin(),
        equality: m <= 3,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcsPrediction {
    /// `D_phi = sup_{xi >= 0} sinh(pi phi xi) / cosh(pi xi)`.
    pub d: f64,
    pub result: PredictorResult,
}

/// `sinh(a x) / cosh(b x)` for `0 <= a < b`, `x >= 0`, without overflow.
fn arcs_objective(a: f64, b: f64, x: f64) -> f64 {
    ((a - b) * x).exp() * (-(-2.0 * a * x).exp_m1()) / (1.0 + (-2.0 * b * x).exp())
}

/// Two circular arcs meeting at angle `pi phi`: `||S|| = ||S||_ess =
/// D + sqrt(D^2 + 1)`, major axis `2 sqrt(D^2 + 1)`.
pub fn arcs_predict(phi: f64) -> Result<ArcsPrediction, OperatorError> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(OperatorError::InvalidParameter(format!("arc parameter {phi} outside (0, 1)")));
    }
    let (a, b) = (PI * phi, PI);
    // beyond this the objective decays like e^{-pi (1 - phi) xi}
    let (mut lo, mut hi) = (0.0, 10.0 / (PI * (1.0 - phi)));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (arcs_objective(a, b, x1), arcs_objective(a, b, x2));
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = arcs_objective(a, b, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = arcs_objective(a, b, x1);
        }
    }
    let d = arcs_objective(a, b, 0.5 * (lo + hi)).max(f1).max(f2);
    let s = d + d.hypot(1.0);
    Ok(ArcsPrediction {
        d,
        result: PredictorResult::involution(Some(s), s, Attainment::Unknown, "two-arcs")?,
    })
}
