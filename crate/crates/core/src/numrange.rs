//! Classical numerical range `W(A)` by support functions.
//!
//! In the outer normal direction `psi` the support value of `W(A)` is the
//! top eigenvalue of `Re(e^{-i psi} A)`, and the Rayleigh quotient of a
//! matching unit eigenvector is a point of `W(A)` on the support line.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{grid_angle, ConvexRegion, GeometryError};
use crate::linalg::{extreme_eigenpairs, vec_norm, ComplexMatrix, LinalgError};
use crate::random::{stream_rng, unit_vector};

/// Smallest accepted angle grid.
pub const MIN_GRID: usize = 8;

const ORACLE_CHUNK: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumRangeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("angle grid of size {0} is too coarse (need at least {MIN_GRID})")]
    GridTooSmall(usize),
    #[error("oracle needs at least one trial")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportPoint {
    pub h: f64,
    pub witness: Complex64,
}

/// Sampled support function of `W(A)` whose witnesses are Rayleigh
/// quotients of extremal eigenvectors.
#[derive(Debug, Clone)]
pub struct SupportTable {
    pub region: ConvexRegion,
}

impl SupportTable {
    pub fn grid_size(&self) -> usize {
        self.region.grid_size()
    }

    /// Largest `|Re(e^{-i psi_i} z_i) - h_i|`: how far a witness sits from
    /// its own support line.
    pub fn witness_line_gap(&self) -> f64 {
        self.region
            .angles
            .iter()
            .zip(&self.region.support_values)
            .zip(&self.region.boundary_points)
            .map(|((&psi, &h), z)| ((z * Complex64::from_polar(1.0, -psi)).re - h).abs())
            .fold(0.0, f64::max)
    }
}

/// `<A v, v> / <v, v>`
pub fn rayleigh(a: &ComplexMatrix, v: &[Complex64]) -> Complex64 {
    let nn = vec_norm(v);
    a.quadratic_form(v) / (nn * nn)
}

/// Support value and witness of `W(A)` at outer normal angle `psi`.
pub fn support_value(a: &ComplexMatrix, psi: f64) -> Result<SupportPoint, NumRangeError> {
    let pairs = extreme_eigenpairs(&a.rotated_real_part(psi))?;
    Ok(SupportPoint {
        h: pairs.top.value,
        witness: rayleigh(a, &pairs.top.vector),
    })
}

/// Support table of `W(A)` on the uniform `m`-grid.
///
/// For even `m` the angles `psi` and `psi + pi` share one eigenproblem:
/// `h(psi + pi) = -lambda_min(Re(e^{-i psi} A))`.
pub fn compute_range(a: &ComplexMatrix, m: usize) -> Result<SupportTable, NumRangeError> {
    if m < MIN_GRID {
        return Err(NumRangeError::GridTooSmall(m));
    }
    let mut h = vec![0.0; m];
    let mut z = vec![Complex64::new(0.0, 0.0); m];

    if m.is_multiple_of(2) {
        let half = m / 2;
        let pairs: Vec<_> = (0..half)
            .into_par_iter()
            .map(|i| -> Result<_, NumRangeError> {
                let p = extreme_eigenpairs(&a.rotated_real_part(grid_angle(i, m)))?;
                Ok((
                    (p.top.value, rayleigh(a, &p.top.vector)),
                    (-p.bottom.value, rayleigh(a, &p.bottom.vector)),
                ))
            })
            .collect::<Result<_, _>>()?;
        for (i, (top, bottom)) in pairs.into_iter().enumerate() {
            (h[i], z[i]) = top;
            (h[i + half], z[i + half]) = bottom;
        }
    } else {
        let points: Vec<SupportPoint> = (0..m)
            .into_par_iter()
            .map(|i| support_value(a, grid_angle(i, m)))
            .collect::<Result<_, _>>()?;
        for (i, p) in points.into_iter().enumerate() {
            h[i] = p.h;
            z[i] = p.witness;
        }
    }
    Ok(SupportTable {
        region: ConvexRegion::new(h, z)?,
    })
}

/// Rayleigh quotients `<A x, x>` of `trials` random unit vectors
/// (normalized complex Gaussians). Reproducible from `seed` irrespective of
/// the worker count.
pub fn sample_oracle(a: &ComplexMatrix, trials: usize, seed: u64) -> Result<Vec<Complex64>, NumRangeError> {
    if trials == 0 {
        return Err(NumRangeError::NoTrials);
    }
    let n = a.dim();
    let chunks = trials.div_ceil(ORACLE_CHUNK);
    let out: Vec<Vec<Complex64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let count = ORACLE_CHUNK.min(trials - c * ORACLE_CHUNK);
            (0..count)
                .map(|_| a.quadratic_form(&unit_vector(&mut rng, n)))
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Containment;
    use std::f64::consts::FRAC_PI_2;

    fn upper(a: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, a], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn support_value_examples() {
        let a = upper(2.0);
        for psi in [0.0, 0.7, 2.0, 4.5] {
            assert!((support_value(&a, psi).unwrap().h - 1.0).abs() < 1e-14);
        }
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        let p = support_value(&d, 0.0).unwrap();
        assert!((p.h - 1.0).abs() < 1e-15);
        assert!((p.witness - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap();
        assert!((support_value(&b, FRAC_PI_2).unwrap().h - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normal_matrix_gives_segment() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        let t = compute_range(&d, 64).unwrap();
        assert!(t.region.min_width().unwrap() <= 1e-10);
        assert!(t.witness_line_gap() < 1e-12);
    }

    #[test]
    fn scalar_gives_point() {
        let s = ComplexMatrix::scalar(4, Complex64::new(3.0, 0.0));
        let t = compute_range(&s, 32).unwrap();
        for (psi, h) in t.region.angles.iter().zip(&t.region.support_values) {
            assert!((h - 3.0 * psi.cos()).abs() < 1e-13);
        }
        for z in &t.region.boundary_points {
            assert!((z - Complex64::new(3.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn odd_and_even_grids_agree() {
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.5], &[0.0, -1.0, 1.0], &[0.3, 0.0, 0.2]]).unwrap();
        let even = compute_range(&b, 18).unwrap();
        let odd = compute_range(&b, 9).unwrap();
        for i in 0..9 {
            assert!((even.region.support_values[2 * i] - odd.region.support_values[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_coarse_grid_and_zero_trials() {
        let d = ComplexMatrix::identity(2);
        assert_eq!(compute_range(&d, 4).unwrap_err(), NumRangeError::GridTooSmall(4));
        assert_eq!(sample_oracle(&d, 0, 1).unwrap_err(), NumRangeError::NoTrials);
    }

    #[test]
    fn oracle_examples() {
        let id = ComplexMatrix::identity(3);
        for z in sample_oracle(&id, 50, 5).unwrap() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        for z in sample_oracle(&d, 200, 5).unwrap() {
            assert!(z.im.abs() < 1e-15 && z.re.abs() <= 1.0 + 1e-15);
        }
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap();
        let table = compute_range(&b, 256).unwrap();
        for z in sample_oracle(&b, 2000, 9).unwrap() {
            assert_ne!(table.region.outer_contains(z, 1e-8), Containment::Outside);
        }
    }

    #[test]
    fn oracle_is_reproducible() {
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap();
        assert_eq!(sample_oracle(&b, 3000, 4).unwrap(), sample_oracle(&b, 3000, 4).unwrap());
        assert_ne!(sample_oracle(&b, 10, 4).unwrap(), sample_oracle(&b, 10, 5).unwrap());
    }
}
