//! Elliptical discs, sampled convex regions and their support functions.
//!
//! All support functions use the outer-normal convention
//! `h(psi) = sup { Re(e^{-i psi} z) : z in K }`, sampled on the uniform grid
//! `psi_i = 2 pi i / m`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default number of sample angles.
pub const DEFAULT_GRID: usize = 720;

const FOCUS_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid ellipse: {0}")]
    InvalidEllipse(String),
    #[error("grid mismatch: expected {expected} angles, found {found}")]
    GridMismatch { expected: usize, found: usize },
    #[error("invalid convex region: {0}")]
    InvalidRegion(String),
}

/// Whether the boundary of a set belongs to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryStatus {
    Closed,
    Open,
    Unknown,
}

impl BoundaryStatus {
    /// Report spelling: `yes` for closed, `no` for open.
    pub fn as_yes_no(self) -> &'static str {
        match self {
            BoundaryStatus::Closed => "yes",
            BoundaryStatus::Open => "no",
            BoundaryStatus::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Uniform angle grid on `[0, 2 pi)`.
pub fn angle_grid(m: usize) -> Vec<f64> {
    (0..m).map(|i| grid_angle(i, m)).collect()
}

pub fn grid_angle(i: usize, m: usize) -> f64 {
    TAU * i as f64 / m as f64
}

/// Elliptical disc given by its foci and the length of its major axis.
/// Segments (zero minor axis) and points are allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseDisc {
    focus1: Complex64,
    focus2: Complex64,
    major_axis: f64,
    pub boundary: BoundaryStatus,
}

impl EllipseDisc {
    pub fn new(
        focus1: Complex64,
        focus2: Complex64,
        major_axis: f64,
        boundary: BoundaryStatus,
    ) -> Result<Self, GeometryError> {
        let finite = [focus1.re, focus1.im, focus2.re, focus2.im, major_axis]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(GeometryError::InvalidEllipse("non-finite parameter".into()));
        }
        let d = (focus1 - focus2).norm();
        if major_axis < d - FOCUS_SLACK {
            return Err(GeometryError::InvalidEllipse(format!(
                "major axis {major_axis} shorter than focal distance {d}"
            )));
        }
        Ok(Self {
            focus1,
            focus2,
            major_axis: major_axis.max(d),
            boundary,
        })
    }

    /// Builds the disc from its foci and minor axis. The major axis is
    /// `hypot(|f1 - f2|, minor)`, so that a vanishing minor axis reproduces
    /// the segment exactly.
    pub fn from_minor_axis(
        focus1: Complex64,
        focus2: Complex64,
        minor_axis: f64,
        boundary: BoundaryStatus,
    ) -> Result<Self, GeometryError> {
        if !(minor_axis >= 0.0) {
            return Err(GeometryError::InvalidEllipse(format!(
                "negative minor axis {minor_axis}"
            )));
        }
        let d = (focus1 - focus2).norm();
        Self::new(focus1, focus2, d.hypot(minor_axis), boundary)
    }

    pub fn point(z: Complex64) -> Self {
        Self {
            focus1: z,
            focus2: z,
            major_axis: 0.0,
            boundary: BoundaryStatus::Closed,
        }
    }

    pub fn segment(a: Complex64, b: Complex64) -> Self {
        Self {
            focus1: a,
            focus2: b,
            major_axis: (a - b).norm(),
            boundary: BoundaryStatus::Closed,
        }
    }

    pub fn foci(&self) -> (Complex64, Complex64) {
        (self.focus1, self.focus2)
    }

    pub fn major_axis(&self) -> f64 {
        self.major_axis
    }

    pub fn focal_distance(&self) -> f64 {
        (self.focus1 - self.focus2).norm()
    }

    /// `sqrt(major^2 - |f1 - f2|^2)`, evaluated as a product of exact-ish
    /// factors to keep near-segments accurate.
    pub fn minor_axis(&self) -> f64 {
        let d = self.focal_distance();
        ((self.major_axis - d).max(0.0) * (self.major_axis + d)).sqrt()
    }

    pub fn center(&self) -> Complex64 {
        (self.focus1 + self.focus2) * 0.5
    }

    /// Direction of the major axis; zero for coincident foci.
    pub fn orientation(&self) -> f64 {
        let d = self.focus2 - self.focus1;
        if d.norm() > 0.0 {
            d.arg()
        } else {
            0.0
        }
    }

    pub fn with_boundary(mut self, boundary: BoundaryStatus) -> Self {
        self.boundary = boundary;
        self
    }

    /// Support function in the outer normal direction `psi`.
    pub fn support(&self, psi: f64) -> f64 {
        let a = 0.5 * self.major_axis;
        let b = 0.5 * self.minor_axis();
        let t = psi - self.orientation();
        let c = self.center();
        let (s, co) = t.sin_cos();
        (c * Complex64::from_polar(1.0, -psi)).re + (a * a * co * co + b * b * s * s).sqrt()
    }

    /// Classifies `z` by its focal sum against the major axis with a
    /// tolerance band of half-width `tol`.
    pub fn contains(&self, z: Complex64, tol: f64) -> Containment {
        let focal_sum = (z - self.focus1).norm() + (z - self.focus2).norm();
        let gap = focal_sum - self.major_axis;
        if gap.abs() <= tol {
            Containment::Boundary
        } else if gap < 0.0 {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// Boundary point with outer normal `psi`.
    pub fn boundary_point(&self, psi: f64) -> Complex64 {
        let a = 0.5 * self.major_axis;
        let b = 0.5 * self.minor_axis();
        let tau = self.orientation();
        let t = psi - tau;
        let (s, c) = t.sin_cos();
        let r = (a * a * c * c + b * b * s * s).sqrt();
        let local = if r > 0.0 {
            Complex64::new(a * a * c / r, b * b * s / r)
        } else {
            Complex64::new(0.0, 0.0)
        };
        self.center() + local * Complex64::from_polar(1.0, tau)
    }

    /// Samples the disc as a convex region on the uniform `m`-grid.
    pub fn to_region(&self, m: usize) -> ConvexRegion {
        let angles = angle_grid(m);
        let support_values = angles.iter().map(|&p| self.support(p)).collect();
        let boundary_points = angles.iter().map(|&p| self.boundary_point(p)).collect();
        ConvexRegion {
            angles,
            support_values,
            boundary_points,
        }
    }
}

/// Convex set described by support values on a uniform angle grid, with one
/// boundary witness per angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion {
    pub angles: Vec<f64>,
    pub support_values: Vec<f64>,
    pub boundary_points: Vec<Complex64>,
}

impl ConvexRegion {
    pub fn new(support_values: Vec<f64>, boundary_points: Vec<Complex64>) -> Result<Self, GeometryError> {
        let m = support_values.len();
        if boundary_points.len() != m {
            return Err(GeometryError::GridMismatch {
                expected: m,
                found: boundary_points.len(),
            });
        }
        if m == 0 {
            return Err(GeometryError::InvalidRegion("empty grid".into()));
        }
        if support_values.iter().any(|h| !h.is_finite())
            || boundary_points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(GeometryError::InvalidRegion("non-finite sample".into()));
        }
        Ok(Self {
            angles: angle_grid(m),
            support_values,
            boundary_points,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.angles.len()
    }

    /// Largest amount by which a witness leaves one of the sampled
    /// half-planes. Non-positive (up to rounding) for a consistent region.
    pub fn witness_violation(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (&psi, &h) in self.angles.iter().zip(&self.support_values) {
            let rot = Complex64::from_polar(1.0, -psi);
            for z in &self.boundary_points {
                worst = worst.max((z * rot).re - h);
            }
        }
        worst
    }

    /// Checks the witness invariant at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<(), GeometryError> {
        let v = self.witness_violation();
        if v > tol {
            return Err(GeometryError::InvalidRegion(format!(
                "witness leaves a support half-plane by {v:.3e}"
            )));
        }
        Ok(())
    }

    /// Classifies `z` against the outer polygonal approximation (the
    /// intersection of all sampled support half-planes).
    pub fn outer_contains(&self, z: Complex64, tol: f64) -> Containment {
        let excess = self.outer_excess(z);
        if excess > tol {
            Containment::Outside
        } else if excess >= -tol {
            Containment::Boundary
        } else {
            Containment::Inside
        }
    }

    /// `max_i Re(e^{-i psi_i} z) - h_i`
    pub fn outer_excess(&self, z: Complex64) -> f64 {
        self.angles
            .iter()
            .zip(&self.support_values)
            .map(|(&psi, &h)| (z * Complex64::from_polar(1.0, -psi)).re - h)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Width `h(psi_i) + h(psi_i + pi)`; requires an even grid.
    pub fn width(&self, i: usize) -> Option<f64> {
        let m = self.grid_size();
        if !m.is_multiple_of(2) {
            return None;
        }
        Some(self.support_values[i % m] + self.support_values[(i + m / 2) % m])
    }

    /// Smallest width over the grid directions.
    pub fn min_width(&self) -> Option<f64> {
        let m = self.grid_size();
        (0..m / 2)
            .map(|i| self.width(i))
            .collect::<Option<Vec<_>>>()
            .map(|w| w.into_iter().fold(f64::INFINITY, f64::min))
    }
}

/// Anything whose support function can be sampled on a uniform grid.
pub trait SupportFunction {
    fn support_on_grid(&self, m: usize) -> Result<Vec<f64>, GeometryError>;
}

impl SupportFunction for EllipseDisc {
    fn support_on_grid(&self, m: usize) -> Result<Vec<f64>, GeometryError> {
        Ok(angle_grid(m).into_iter().map(|p| self.support(p)).collect())
    }
}

impl SupportFunction for ConvexRegion {
    fn support_on_grid(&self, m: usize) -> Result<Vec<f64>, GeometryError> {
        if self.grid_size() != m {
            return Err(GeometryError::GridMismatch {
                expected: m,
                found: self.grid_size(),
            });
        }
        Ok(self.support_values.clone())
    }
}

/// Sup-distance between support functions on the `m`-grid; for convex
/// compacts this is their Hausdorff distance up to grid error.
pub fn hausdorff_support(
    a: &dyn SupportFunction,
    b: &dyn SupportFunction,
    m: usize,
) -> Result<f64, GeometryError> {
    let ha = a.support_on_grid(m)?;
    let hb = b.support_on_grid(m)?;
    Ok(ha
        .iter()
        .zip(&hb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}
