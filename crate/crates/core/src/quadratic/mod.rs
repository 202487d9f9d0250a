//! Quadratic operators: `A^2 - 2 mu A - nu I = 0`.
//!
//! A quadratic matrix has an elliptical numerical range with foci
//! `lambda_{1,2} = mu +- sqrt(mu^2 + nu)` and axes `s +- |mu^2 + nu| / s`,
//! where `s = ||A - mu I||`. The same shape with the essential norm of
//! `A - mu I` in place of `s` describes the essential numerical range.

mod canonical;
mod ess;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{BoundaryStatus, EllipseDisc, GeometryError};
use crate::linalg::{spectral_norm, ComplexMatrix, LinalgError};

pub use canonical::{assemble_canonical, canonical_block_matrix, canonical_decompose, CanonicalForm, Conjugation};
pub use ess::{estimate_ess_norm, tail_norm, EssNormEstimate, TruncationFamily, DEFAULT_TAIL_FRACTION};

/// Relative residual below which a matrix counts as quadratic.
pub const QUADRATIC_TOL: f64 = 1e-10;

/// Traceless parts below this relative size are treated as scalar.
const SCALAR_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadraticError {
    #[error("matrix is not quadratic (relative residual {residual:.3e})")]
    NotQuadratic { residual: f64 },
    #[error("canonical decomposition failed: {0}")]
    DefectiveDecomposition(String),
    #[error("eigenvalues coincide; the projection/involution pair is undefined")]
    DegenerateEigenvalues,
    #[error("invalid norms: norm {norm} is below essential norm {ess_norm}")]
    InvalidNorms { norm: f64, ess_norm: f64 },
    #[error("invalid estimator input: {0}")]
    InvalidEstimate(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Quadratic fit of a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSignature {
    pub mu: Complex64,
    pub nu: Complex64,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    /// `||A - mu I||`
    pub s: f64,
    /// `||A^2 - 2 mu A - nu I||_F / max(1, ||A||_F^2)`
    pub residual: f64,
}

impl QuadraticSignature {
    fn from_mu_nu(mu: Complex64, nu: Complex64, s: f64, residual: f64) -> Self {
        let root = (mu * mu + nu).sqrt();
        Self {
            mu,
            nu,
            lambda1: mu + root,
            lambda2: mu - root,
            s,
            residual,
        }
    }

    /// `mu^2 + nu`
    pub fn discriminant(&self) -> Complex64 {
        self.mu * self.mu + self.nu
    }

    pub fn is_quadratic(&self) -> bool {
        self.is_quadratic_within(QUADRATIC_TOL)
    }

    pub fn is_quadratic_within(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    fn require_quadratic(&self, tol: f64) -> Result<(), QuadraticError> {
        if self.is_quadratic_within(tol) {
            Ok(())
        } else {
            Err(QuadraticError::NotQuadratic {
                residual: self.residual,
            })
        }
    }
}

/// Fits `A^2 ~ 2 mu A + nu I` by Frobenius projection of `A^2` onto
/// `span{A, I}`. For scalar `A = alpha I` the projection is underdetermined
/// and the double-eigenvalue convention `mu = alpha, nu = -alpha^2` applies.
pub fn fit_quadratic(a: &ComplexMatrix) -> QuadraticSignature {
    let n = a.dim();
    let scale = a.frobenius_norm().max(1.0);
    let tau = a.trace() / n as f64;
    let traceless = a.shift(-tau);
    let t_norm = traceless.frobenius_norm();
    let square = a.matmul(a);

    let (mu, nu) = if t_norm <= SCALAR_TOL * scale {
        (tau, -tau * tau)
    } else {
        // traceless part and I are Frobenius-orthogonal
        let c1 = traceless.inner(&square) / (t_norm * t_norm);
        let c2 = square.trace() / n as f64;
        (c1 * 0.5, c2 - c1 * tau)
    };

    let defect = &(&square - &a.scale(mu * 2.0)) - &ComplexMatrix::scalar(n, nu);
    let residual = defect.frobenius_norm() / (scale * scale);
    let s = spectral_norm(&a.shift(-mu));
    QuadraticSignature::from_mu_nu(mu, nu, s, residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionSource {
    Classical,
    Essential,
    CScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attainment {
    Yes,
    No,
    Unknown,
}

impl From<BoundaryStatus> for Attainment {
    fn from(b: BoundaryStatus) -> Self {
        match b {
            BoundaryStatus::Closed => Attainment::Yes,
            BoundaryStatus::Open => Attainment::No,
            BoundaryStatus::Unknown => Attainment::Unknown,
        }
    }
}

/// Predicted elliptical disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsePrediction {
    pub ellipse: EllipseDisc,
    pub source: PredictionSource,
    /// The norm (`s`) or essential norm (`s0`) the axes were built from.
    pub s_used: f64,
    pub attained: Attainment,
}

/// Ellipse with foci `f1`, `f2` and axes `(s +- q/s) * scale`, where
/// `q = |f1 - f2|^2 / (4 scale^2)`. Uses the convention `q/s = 0` at `s = 0`.
pub(crate) fn axes_ellipse(
    f1: Complex64,
    f2: Complex64,
    s: f64,
    q: f64,
    scale: f64,
    boundary: BoundaryStatus,
) -> Result<EllipseDisc, QuadraticError> {
    if s == 0.0 {
        return Ok(EllipseDisc::point((f1 + f2) * 0.5).with_boundary(boundary));
    }
    let minor = (s - q / s) * scale;
    // s slightly below sqrt(q) is rounding; anything larger is inconsistent
    if minor < -1e-9 * (s + q / s) * scale {
        return Err(QuadraticError::InvalidNorms {
            norm: s,
            ess_norm: q.sqrt(),
        });
    }
    Ok(EllipseDisc::from_minor_axis(f1, f2, minor.max(0.0), boundary)?)
}

/// Predicted `W(A)`: foci `lambda_{1,2}`, major axis `s + |mu^2+nu|/s`.
/// Finite matrices always attain their norm, so the disc is closed.
pub fn predict_w(sig: &QuadraticSignature) -> Result<EllipsePrediction, QuadraticError> {
    predict_w_within(sig, QUADRATIC_TOL)
}

pub fn predict_w_within(sig: &QuadraticSignature, tol: f64) -> Result<EllipsePrediction, QuadraticError> {
    sig.require_quadratic(tol)?;
    let q = sig.discriminant().norm();
    let ellipse = axes_ellipse(sig.lambda1, sig.lambda2, sig.s, q, 1.0, BoundaryStatus::Closed)?;
    Ok(EllipsePrediction {
        ellipse,
        source: PredictionSource::Classical,
        s_used: sig.s,
        attained: Attainment::Yes,
    })
}

/// Predicted essential numerical range from an essential norm `s0` of
/// `A - mu I`; always closed, a single point `mu` when `s0 = 0`.
pub fn predict_wess(sig: &QuadraticSignature, s0: f64) -> Result<EllipsePrediction, QuadraticError> {
    sig.require_quadratic(QUADRATIC_TOL)?;
    if !(s0 >= 0.0) || !s0.is_finite() {
        return Err(QuadraticError::InvalidNorms {
            norm: sig.s,
            ess_norm: s0,
        });
    }
    let ellipse = if s0 == 0.0 {
        EllipseDisc::point(sig.mu)
    } else {
        let q = sig.discriminant().norm();
        axes_ellipse(sig.lambda1, sig.lambda2, s0, q, 1.0, BoundaryStatus::Closed)?
    };
    Ok(EllipsePrediction {
        ellipse,
        source: PredictionSource::Essential,
        s_used: s0,
        attained: Attainment::Yes,
    })
}

/// Relative tolerance for deciding `norm == ess_norm`.
const NORM_EQ_TOL: f64 = 1e-12;

/// Boundary status of `W(A)` (or of `W_c(A)` with `m = max(m+, m-)`) from the
/// norm and essential norm of `A - mu I` and the dimension of the subspace
/// on which the norm is attained.
pub fn classify_closed(
    norm: f64,
    ess_norm: f64,
    attained_dim: Option<usize>,
    m: usize,
) -> Result<BoundaryStatus, QuadraticError> {
    if !(ess_norm >= 0.0) || !(norm >= ess_norm - NORM_EQ_TOL) {
        return Err(QuadraticError::InvalidNorms { norm, ess_norm });
    }
    if norm - ess_norm > NORM_EQ_TOL * norm.max(1.0) {
        return Ok(BoundaryStatus::Closed);
    }
    Ok(match attained_dim {
        Some(d) if d >= m => BoundaryStatus::Closed,
        Some(_) => BoundaryStatus::Open,
        None => BoundaryStatus::Unknown,
    })
}

/// Both sides of `||P|| = (||S|| + ||S||^{-1}) / 2` for the projection
/// `P = (A - lambda1 I)/(lambda2 - lambda1)` and involution
/// `S = (A - mu I)/sqrt(mu^2 + nu)`.
pub fn projection_involution_check(
    a: &ComplexMatrix,
    sig: &QuadraticSignature,
) -> Result<(f64, f64), QuadraticError> {
    let gap = sig.lambda2 - sig.lambda1;
    let size = 1f64.max(sig.lambda1.norm() + sig.lambda2.norm());
    if gap.norm() <= 1e-12 * size {
        return Err(QuadraticError::DegenerateEigenvalues);
    }
    let p = a.shift(-sig.lambda1).scale(gap.inv());
    let root = sig.discriminant().sqrt();
    let s = a.shift(-sig.mu).scale(root.inv());
    let s_norm = spectral_norm(&s);
    Ok((spectral_norm(&p), 0.5 * (s_norm + 1.0 / s_norm)))
}
