//! Finite sections and closed-form predictors for concrete involutions:
//! composition operators on the Hardy space, Hankel matrices of power-weight
//! symbols, and the Cauchy singular integral operator on the circle and on
//! composite curves.
//!
//! All of these operators satisfy `S^2 = I`, so their numerical ranges are
//! elliptical discs with foci `+-1` whose axes are `||S|| +- ||S||^{-1}`.

mod circle;
mod composition;
mod hankel;
mod sweep;

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{BoundaryStatus, EllipseDisc};
use crate::quadratic::{axes_ellipse, Attainment, QuadraticError};

pub use circle::{arcs_predict, bundle_predict, cauchy_circle, ArcsPrediction, BundleBound, CauchyCircleFamily};
pub use composition::{
    composition_matrix, composition_predict, composition_symbol, dirichlet_predict, weighted_composition_norm,
    CompositionFamily, CompositionModel, FunctionSpace, WeightedNorm, WEIGHTED_GRID,
};
pub use sweep::{real_width, run_sweep, Family, Sweep};
pub use hankel::{
    dominant_node, hankel_coefficient, power_weight_hankel, power_weight_predict, singular_norm_from_hankel,
    HankelFamily, HankelModel,
};

/// Largest admissible `|p|` for self-maps of the disc.
pub const MAX_SYMBOL_MODULUS: f64 = 1.0 - 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Hankel norm {h} is not below 1; the weight is not admissible")]
    WeightNotAdmissible { h: f64 },
    #[error("operator is numerically unbounded: {0}")]
    UnboundedModel(String),
    #[error("no matrix model for the {0} space")]
    UnsupportedSpace(&'static str),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
}

/// Closed-form description of an involution `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorResult {
    /// `None` when the formula only determines the essential norm.
    pub norm: Option<f64>,
    pub ess_norm: f64,
    pub ellipse_w: Option<EllipseDisc>,
    pub ellipse_wess: EllipseDisc,
    pub attained: Attainment,
    /// Identifier of the formula the values come from.
    pub provenance: &'static str,
}

impl PredictorResult {
    pub(crate) fn involution(
        norm: Option<f64>,
        ess_norm: f64,
        attained: Attainment,
        provenance: &'static str,
    ) -> Result<Self, OperatorError> {
        let boundary = match attained {
            Attainment::Yes => BoundaryStatus::Closed,
            Attainment::No => BoundaryStatus::Open,
            Attainment::Unknown => BoundaryStatus::Unknown,
        };
        let ellipse_w = norm.map(|s| involution_ellipse(s, boundary)).transpose()?;
        Ok(Self {
            norm,
            ess_norm,
            ellipse_w,
            ellipse_wess: involution_ellipse(ess_norm, BoundaryStatus::Closed)?,
            attained,
            provenance,
        })
    }

    /// Major axis of the predicted `W(S)`, if the norm is known.
    pub fn major_axis(&self) -> Option<f64> {
        self.ellipse_w.map(|e| e.major_axis())
    }
}

/// Elliptical disc with foci `+-1` and axes `s +- 1/s`.
pub fn involution_ellipse(s: f64, boundary: BoundaryStatus) -> Result<EllipseDisc, OperatorError> {
    if !(s >= 1.0 - 1e-12) || !s.is_finite() {
        return Err(OperatorError::InvalidParameter(format!(
            "involution norm {s} is below 1"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(axes_ellipse(-one, one, s.max(1.0), 1.0, 1.0, boundary)?)
}

pub(crate) fn check_symbol(p: Complex64) -> Result<(), OperatorError> {
    if !p.re.is_finite() || !p.im.is_finite() || p.norm() > MAX_SYMBOL_MODULUS {
        return Err(OperatorError::InvalidParameter(format!(
            "|p| = {} must be below {MAX_SYMBOL_MODULUS}",
            p.norm()
        )));
    }
    Ok(())
}
