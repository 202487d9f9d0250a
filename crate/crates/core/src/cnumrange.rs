//! c-numerical range `W_c(A) = { sum_j c_j <A x_j, x_j> : (x_j) orthonormal }`
//! for real coefficient vectors `c`.
//!
//! The support function of `W_c(A)` at angle `psi` is the Ky Fan sum
//! `sum_j c_j lambda_{p(j)}(Re(e^{-i psi} A))`, where `c` is padded with
//! zeros to length `n` and both sequences are sorted non-increasing: positive
//! coefficients meet the top eigenvalues and negative ones the bottom
//! eigenvalues. The eigenvectors in that pairing form an attaining frame.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{angle_grid, grid_angle, ConvexRegion, EllipseDisc, GeometryError, BoundaryStatus};
use crate::linalg::{hermitian_eig, hermitian_eigenvalues, ComplexMatrix, HermitianSpectrum, LinalgError};
use crate::numrange::MIN_GRID;
use crate::quadratic::{QuadraticError, QuadraticSignature, QUADRATIC_TOL};
use crate::random::{orthonormal_frame, stream_rng};

const ORACLE_CHUNK: usize = 512;
const COLLINEAR_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CnumError {
    #[error("{k} coefficients exceed the dimension {n}")]
    TooManyCoefficients { k: usize, n: usize },
    #[error("coefficient vector has no non-zero entries")]
    EmptyCoefficients,
    #[error("coefficients are not collinear with the origin")]
    NonCollinear,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("angle grid of size {0} is too coarse (need at least {MIN_GRID})")]
    GridTooSmall(usize),
    #[error("oracle needs at least one trial")]
    NoTrials,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
}

/// Non-zero real coefficients sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    values: Vec<f64>,
    norm_c: f64,
    m_plus: usize,
    m_minus: usize,
    /// Number of zero entries removed on construction.
    pub dropped: usize,
}

impl Coefficients {
    pub fn new(raw: &[f64]) -> Result<Self, CnumError> {
        if raw.iter().any(|c| !c.is_finite()) {
            return Err(CnumError::NonFinite);
        }
        let mut values: Vec<f64> = raw.iter().copied().filter(|&c| c != 0.0).collect();
        if values.is_empty() {
            return Err(CnumError::EmptyCoefficients);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let norm_c = values.iter().map(|c| c.abs()).sum();
        let m_plus = values.iter().filter(|&&c| c > 0.0).count();
        Ok(Self {
            m_minus: values.len() - m_plus,
            m_plus,
            norm_c,
            dropped: raw.len() - values.len(),
            values,
        })
    }

    /// Complex collinear coefficients `c_j = e^{i theta} r_j` with real `r_j`.
    /// Returns the real coefficients and the rotation `e^{i theta}`, so that
    /// `W_c(A) = e^{i theta} W_r(A)`.
    pub fn from_complex(raw: &[Complex64]) -> Result<(Self, Complex64), CnumError> {
        let lead = raw
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .ok_or(CnumError::EmptyCoefficients)?;
        if lead.norm() == 0.0 {
            return Err(CnumError::EmptyCoefficients);
        }
        let rotation = lead / lead.norm();
        let mut real = Vec::with_capacity(raw.len());
        for &c in raw {
            let r = c * rotation.conj();
            if r.im.abs() > COLLINEAR_TOL * lead.norm() {
                return Err(CnumError::NonCollinear);
            }
            real.push(r.re);
        }
        Ok((Self::new(&real)?, rotation))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum |c_j|`
    pub fn norm_c(&self) -> f64 {
        self.norm_c
    }

    /// `sum c_j`
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn m_plus(&self) -> usize {
        self.m_plus
    }

    pub fn m_minus(&self) -> usize {
        self.m_minus
    }

    /// `max(m+, m-)`
    pub fn m(&self) -> usize {
        self.m_plus.max(self.m_minus)
    }

    /// `(c_j, eigenvalue index)` pairs realizing the Ky Fan maximum for an
    /// `n`-dimensional spectrum sorted non-increasing.
    pub fn pairing(&self, n: usize) -> Vec<(f64, usize)> {
        let (pos, neg) = self.values.split_at(self.m_plus);
        pos.iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .chain(neg.iter().enumerate().map(|(t, &c)| (c, n - neg.len() + t)))
            .collect()
    }

    fn check_dim(&self, n: usize) -> Result<(), CnumError> {
        if self.len() > n {
            return Err(CnumError::TooManyCoefficients { k: self.len(), n });
        }
        Ok(())
    }
}

fn paired_sum(c: &Coefficients, eigenvalues: &[f64]) -> f64 {
    c.pairing(eigenvalues.len())
        .iter()
        .map(|&(cj, idx)| cj * eigenvalues[idx])
        .sum()
}

/// Support function of `W_c(A)` at outer normal angle `psi`.
pub fn kyfan_support(a: &ComplexMatrix, c: &Coefficients, psi: f64) -> Result<f64, CnumError> {
    c.check_dim(a.dim())?;
    let eig = hermitian_eigenvalues(&a.rotated_real_part(psi))?;
    Ok(paired_sum(c, &eig))
}

/// Attaining frame at angle `psi`: the eigenvectors of `Re(e^{-i psi} A)`
/// in Ky Fan pairing order, with the resulting support value and point
/// `sum c_j <A x_j, x_j>` of `W_c(A)`.
#[derive(Debug, Clone)]
pub struct AttainingFrame {
    pub support: f64,
    pub frame: Vec<Vec<Complex64>>,
    pub point: Complex64,
}

pub fn kyfan_frame(a: &ComplexMatrix, c: &Coefficients, psi: f64) -> Result<AttainingFrame, CnumError> {
    c.check_dim(a.dim())?;
    let spec = hermitian_eig(&a.rotated_real_part(psi))?;
    Ok(frame_from_spectrum(a, c, &spec, false))
}

/// Builds the attaining frame from the spectrum of `H`; with `negate` the
/// frame belongs to `-H` (the antipodal angle).
fn frame_from_spectrum(a: &ComplexMatrix, c: &Coefficients, spec: &HermitianSpectrum, negate: bool) -> AttainingFrame {
    let n = spec.dim();
    let mut support = 0.0;
    let mut frame = Vec::with_capacity(c.len());
    let mut point = Complex64::new(0.0, 0.0);
    for (cj, idx) in c.pairing(n) {
        let (value, col) = if negate {
            (-spec.eigenvalues[n - 1 - idx], n - 1 - idx)
        } else {
            (spec.eigenvalues[idx], idx)
        };
        support += cj * value;
        let v = spec.vector(col);
        point += a.quadratic_form(&v) * cj;
        frame.push(v);
    }
    AttainingFrame { support, frame, point }
}

/// Support table of `W_c(A)` on the uniform `m`-grid, with attaining-frame
/// witnesses.
pub fn compute_wc(a: &ComplexMatrix, c: &Coefficients, m: usize) -> Result<ConvexRegion, CnumError> {
    c.check_dim(a.dim())?;
    if m < MIN_GRID {
        return Err(CnumError::GridTooSmall(m));
    }
    let mut h = vec![0.0; m];
    let mut z = vec![Complex64::new(0.0, 0.0); m];
    let even = m.is_multiple_of(2);
    let count = if even { m / 2 } else { m };
    let rows: Vec<(AttainingFrame, Option<AttainingFrame>)> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<_, CnumError> {
            let spec = hermitian_eig(&a.rotated_real_part(grid_angle(i, m)))?;
            let fwd = frame_from_spectrum(a, c, &spec, false);
            let back = even.then(|| frame_from_spectrum(a, c, &spec, true));
            Ok((fwd, back))
        })
        .collect::<Result<_, _>>()?;
    for (i, (fwd, back)) in rows.into_iter().enumerate() {
        h[i] = fwd.support;
        z[i] = fwd.point;
        if let Some(b) = back {
            h[i + m / 2] = b.support;
            z[i + m / 2] = b.point;
        }
    }
    Ok(ConvexRegion::new(h, z)?)
}

/// Support values only (no witnesses), cheaper than [`compute_wc`].
pub fn wc_support_values(a: &ComplexMatrix, c: &Coefficients, m: usize) -> Result<Vec<f64>, CnumError> {
    c.check_dim(a.dim())?;
    if m < MIN_GRID {
        return Err(CnumError::GridTooSmall(m));
    }
    if !m.is_multiple_of(2) {
        return angle_grid(m).iter().map(|&p| kyfan_support(a, c, p)).collect();
    }
    let half = m / 2;
    let pairs: Vec<(f64, f64)> = (0..half)
        .into_par_iter()
        .map(|i| -> Result<_, CnumError> {
            let eig = hermitian_eigenvalues(&a.rotated_real_part(grid_angle(i, m)))?;
            let neg: Vec<f64> = eig.iter().rev().map(|l| -l).collect();
            Ok((paired_sum(c, &eig), paired_sum(c, &neg)))
        })
        .collect::<Result<_, _>>()?;
    let mut h = vec![0.0; m];
    for (i, (f, b)) in pairs.into_iter().enumerate() {
        h[i] = f;
        h[i + half] = b;
    }
    Ok(h)
}

/// Points `sum c_j <A x_j, x_j>` for random orthonormal frames.
pub fn frame_oracle(
    a: &ComplexMatrix,
    c: &Coefficients,
    trials: usize,
    seed: u64,
) -> Result<Vec<Complex64>, CnumError> {
    let n = a.dim();
    c.check_dim(n)?;
    if trials == 0 {
        return Err(CnumError::NoTrials);
    }
    let k = c.len();
    let chunks = trials.div_ceil(ORACLE_CHUNK);
    let out: Vec<Vec<Complex64>> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut rng = stream_rng(seed, ch as u64);
            let count = ORACLE_CHUNK.min(trials - ch * ORACLE_CHUNK);
            (0..count)
                .map(|_| {
                    let frame = orthonormal_frame(&mut rng, n, k);
                    frame
                        .iter()
                        .zip(c.values())
                        .map(|(x, &cj)| a.quadratic_form(x) * cj)
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// Outcome of comparing `W_c(A)` with the enclosing disc `E` and, when an
/// essential norm is supplied, the enclosed disc `E0`.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    #[serde(skip)]
    pub outer: EllipseDisc,
    #[serde(skip)]
    pub inner: Option<EllipseDisc>,
    pub grid: usize,
    /// `max_psi h_{W_c}(psi) - h_E(psi)`; non-positive when `W_c` fits in `E`.
    pub outer_violation: f64,
    /// `max_psi h_{E0}(psi) - h_{W_c}(psi)`.
    pub inner_violation: Option<f64>,
    /// `max_psi h_E(psi) - h_{W_c}(psi)`.
    pub outer_gap: f64,
}

impl SandwichReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.outer_violation <= tol && self.inner_violation.is_none_or(|v| v <= tol)
    }
}

/// Discs with foci `mu sum c_j +- sqrt(mu^2 + nu) ||c||` and axes
/// `(s +- |mu^2+nu|/s) ||c||` for `s` and, optionally, `s0`.
pub fn sandwich_discs(
    sig: &QuadraticSignature,
    c: &Coefficients,
    s0: Option<f64>,
) -> Result<(EllipseDisc, Option<EllipseDisc>), CnumError> {
    let root = sig.discriminant().sqrt();
    let center = sig.mu * c.sum();
    let f1 = center + root * c.norm_c();
    let f2 = center - root * c.norm_c();
    let q = sig.discriminant().norm();
    let outer = crate::quadratic::axes_ellipse(f1, f2, sig.s, q, c.norm_c(), BoundaryStatus::Closed)?;
    let inner = s0
        .map(|s0| crate::quadratic::axes_ellipse(f1, f2, s0, q, c.norm_c(), BoundaryStatus::Open))
        .transpose()?;
    Ok((outer, inner))
}

pub fn sandwich_check(
    a: &ComplexMatrix,
    sig: &QuadraticSignature,
    c: &Coefficients,
    s0: Option<f64>,
    grid: usize,
) -> Result<SandwichReport, CnumError> {
    if !sig.is_quadratic_within(QUADRATIC_TOL) {
        return Err(QuadraticError::NotQuadratic {
            residual: sig.residual,
        }
        .into());
    }
    let (outer, inner) = sandwich_discs(sig, c, s0)?;
    let hw = wc_support_values(a, c, grid)?;
    let angles = angle_grid(grid);
    let mut outer_violation = f64::NEG_INFINITY;
    let mut outer_gap = f64::NEG_INFINITY;
    let mut inner_violation: Option<f64> = inner.map(|_| f64::NEG_INFINITY);
    for (&psi, &h) in angles.iter().zip(&hw) {
        let he = outer.support(psi);
        outer_violation = outer_violation.max(h - he);
        outer_gap = outer_gap.max(he - h);
        if let (Some(e0), Some(v)) = (inner.as_ref(), inner_violation.as_mut()) {
            *v = v.max(e0.support(psi) - h);
        }
    }
    Ok(SandwichReport {
        outer,
        inner,
        grid,
        outer_violation,
        inner_violation,
        outer_gap,
    })
}
