//! Truncation sweeps: norms, essential-norm estimates and numerical-range
//! widths of growing finite sections, next to the closed-form predictions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    composition_matrix, composition_predict, cauchy_circle, check_symbol, power_weight_hankel, power_weight_predict,
    singular_norm_from_hankel, OperatorError, PredictorResult,
};
use crate::io::SweepRow;
use crate::linalg::{spectral_norm, ComplexMatrix};
use crate::numrange::support_value;
use crate::quadratic::{tail_norm, Attainment, DEFAULT_TAIL_FRACTION};

/// Operator families with a matrix model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Composition { p: Complex64 },
    Hankel { beta: f64 },
    CauchyCircle,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Composition { .. } => "composition",
            Family::Hankel { .. } => "hankel",
            Family::CauchyCircle => "cauchy-circle",
        }
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        match *self {
            Family::Composition { p } => check_symbol(p),
            Family::Hankel { beta } => power_weight_hankel(beta, 1).map(|_| ()),
            Family::CauchyCircle => Ok(()),
        }
    }

    pub fn matrix(&self, n: usize) -> Result<ComplexMatrix, OperatorError> {
        match *self {
            Family::Composition { p } => composition_matrix(p, n),
            Family::Hankel { beta } => Ok(power_weight_hankel(beta, n)?.matrix),
            Family::CauchyCircle => cauchy_circle(n),
        }
    }

    /// Closed-form prediction for the operator the sections approximate. For
    /// the Hankel family this is the singular integral operator `S` built
    /// from the weight, which needs `|beta| < 1/2`.
    pub fn predict(&self) -> Result<PredictorResult, OperatorError> {
        match *self {
            Family::Composition { p } => composition_predict(p),
            Family::Hankel { beta } => power_weight_predict(&[beta], true),
            Family::CauchyCircle => PredictorResult::involution(Some(1.0), 1.0, Attainment::Yes, "cauchy-circle"),
        }
    }

    /// The limit of the section norms.
    pub fn limit_norm(&self) -> Result<f64, OperatorError> {
        match *self {
            Family::Hankel { beta } => {
                self.validate()?;
                Ok((PI * beta.abs()).sin())
            }
            _ => self.predict()?.norm.ok_or_else(|| OperatorError::InvalidParameter("norm unknown".into())),
        }
    }
}

/// Width `h(0) + h(pi)` of `W(A)` along the real axis.
pub fn real_width(a: &ComplexMatrix) -> Result<f64, OperatorError> {
    let right = support_value(a, 0.0).map_err(|e| OperatorError::InvalidParameter(e.to_string()))?;
    let left = support_value(a, PI).map_err(|e| OperatorError::InvalidParameter(e.to_string()))?;
    Ok(right.h + left.h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Monotonicity problems, one line each.
    pub warnings: Vec<String>,
}

/// One row per size. For composition and circle sections `major_computed`
/// is the real-axis width of `W(A_N)`; for Hankel sections it is the major
/// axis `s + 1/s` of `W(S)` with `s = sqrt((1+h)/(1-h))`, `h = ||H_N||`.
pub fn run_sweep(family: Family, sizes: &[usize]) -> Result<Sweep, OperatorError> {
    if sizes.len() < 2 {
        return Err(OperatorError::InvalidParameter("a sweep needs at least two sizes".into()));
    }
    family.validate()?;
    let predicted = family.predict().ok().and_then(|p| p.major_axis());
    let rows = sizes
        .par_iter()
        .map(|&n| -> Result<SweepRow, OperatorError> {
            let a = family.matrix(n)?;
            let k = (DEFAULT_TAIL_FRACTION * n as f64).floor() as usize;
            let ess = tail_norm(&a, k);
            let (norm, major) = match family {
                Family::Hankel { beta } => {
                    let h = power_weight_hankel(beta, n)?.norm();
                    let major = singular_norm_from_hankel(h).ok().map(|s| s + 1.0 / s);
                    (h, major)
                }
                _ => (spectral_norm(&a), Some(real_width(&a)?)),
            };
            Ok(SweepRow {
                n,
                norm,
                ess_estimate: Some(ess),
                major_computed: major,
                major_predicted: predicted,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut warnings = Vec::new();
    for w in rows.windows(2) {
        if w[1].n > w[0].n && w[1].norm < w[0].norm - 1e-12 * w[0].norm.max(1.0) {
            warnings.push(format!(
                "norm decreases from N={} ({}) to N={} ({})",
                w[0].n, w[0].norm, w[1].n, w[1].norm
            ));
        }
        if let (Some(a), Some(b)) = (w[0].ess_estimate, w[1].ess_estimate) {
            if a > 0.0 && (a - b) / a > 0.05 {
                warnings.push(format!("essential-norm estimate drops by more than 5% at N={}", w[1].n));
            }
        }
    }
    Ok(Sweep { rows, warnings })
}
