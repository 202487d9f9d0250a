//! Finite-section heuristic for essential norms.
//!
//! For a bounded operator `A` and the coordinate projection `Q_K` onto
//! `span{e_K, e_{K+1}, ...}`, `A Q_K` differs from `A` by a finite-rank
//! operator, so `||A Q_K|| >= ||A||_ess` for every `K`, with equality in the
//! limit. The estimator evaluates `||A_N Q_K||` with `K = floor(f N)` along a
//! sequence of truncations `A_N`. Finite sections cannot certify an
//! essential norm, so the result is always labelled as an estimate.

use rayon::prelude::*;
use serde::Serialize;

use super::QuadraticError;
use crate::linalg::{max_eigenvalue, ComplexMatrix};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

/// Relative drop between consecutive estimates that flags oscillation.
const OSCILLATION_LIMIT: f64 = 0.05;

/// A deterministic family of `N x N` truncations of one operator.
pub trait TruncationFamily: Sync {
    fn section(&self, n: usize) -> ComplexMatrix;

    fn label(&self) -> String {
        "family".into()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EssNormEstimate {
    /// Value at the largest size.
    pub estimate: f64,
    /// `(N, ||A_N Q_K||)` for every requested size.
    pub sequence: Vec<(usize, f64)>,
    /// Largest relative drop between consecutive values.
    pub oscillation: f64,
    /// Set when the sequence drops by more than 5% somewhere.
    pub non_monotone: bool,
    pub tail_fraction: f64,
    pub status: &'static str,
}

/// `|| A Q_K ||`: norm of the columns `k..n` of `A`.
pub fn tail_norm(a: &ComplexMatrix, k: usize) -> f64 {
    let n = a.dim();
    let m = n.saturating_sub(k);
    if m == 0 {
        return 0.0;
    }
    let mut gram = ComplexMatrix::zeros(m);
    for r in 0..n {
        let row = &a.row(r)[k..];
        for i in 0..m {
            let ai = row[i].conj();
            for j in 0..m {
                gram[(i, j)] += ai * row[j];
            }
        }
    }
    max_eigenvalue(&gram).map_or(f64::NAN, |v| v.max(0.0).sqrt())
}

pub fn estimate_ess_norm(
    family: &dyn TruncationFamily,
    sizes: &[usize],
    tail_fraction: f64,
) -> Result<EssNormEstimate, QuadraticError> {
    if sizes.len() < 3 {
        return Err(QuadraticError::InvalidEstimate("need at least three sizes".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(QuadraticError::InvalidEstimate("sizes must be positive and increasing".into()));
    }
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(QuadraticError::InvalidEstimate(format!(
            "tail fraction {tail_fraction} outside (0, 1)"
        )));
    }

    let sequence: Vec<(usize, f64)> = sizes
        .par_iter()
        .map(|&n| {
            let k = (tail_fraction * n as f64).floor() as usize;
            (n, tail_norm(&family.section(n), k))
        })
        .collect();
    let oscillation = sequence
        .windows(2)
        .map(|w| {
            let (prev, cur) = (w[0].1, w[1].1);
            if prev > 0.0 {
                (prev - cur) / prev
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    Ok(EssNormEstimate {
        estimate: sequence.last().map(|p| p.1).unwrap_or(0.0),
        non_monotone: oscillation > OSCILLATION_LIMIT,
        oscillation,
        sequence,
        tail_fraction,
        status: "estimated",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Alternating;

    impl TruncationFamily for Alternating {
        fn section(&self, n: usize) -> ComplexMatrix {
            let d: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
            ComplexMatrix::from_real_diagonal(&d)
        }
    }

    struct RankOneBump;

    impl TruncationFamily for RankOneBump {
        fn section(&self, n: usize) -> ComplexMatrix {
            let mut d = vec![1.0; n];
            d[0] = 2.0;
            ComplexMatrix::from_real_diagonal(&d)
        }
    }

    struct Wobbly;

    impl TruncationFamily for Wobbly {
        fn section(&self, n: usize) -> ComplexMatrix {
            let v = if n.is_multiple_of(3) { 0.5 } else { 1.0 };
            ComplexMatrix::scalar(n, num_complex::Complex64::new(v, 0.0))
        }
    }

    #[test]
    fn isometric_tails() {
        let est = estimate_ess_norm(&Alternating, &[8, 16, 32], 0.5).unwrap();
        assert!((est.estimate - 1.0).abs() < 1e-14);
        assert!(!est.non_monotone);
        assert_eq!(est.status, "estimated");
    }

    #[test]
    fn compact_bump_is_invisible() {
        let est = estimate_ess_norm(&RankOneBump, &[8, 16, 32], 0.5).unwrap();
        assert!((est.estimate - 1.0).abs() < 1e-14);
    }

    #[test]
    fn oscillation_is_flagged() {
        let est = estimate_ess_norm(&Wobbly, &[4, 6, 8], 0.5).unwrap();
        assert!(est.non_monotone);
    }

    #[test]
    fn input_validation() {
        assert!(estimate_ess_norm(&Alternating, &[8, 16], 0.5).is_err());
        assert!(estimate_ess_norm(&Alternating, &[8, 8, 16], 0.5).is_err());
        assert!(estimate_ess_norm(&Alternating, &[8, 16, 32], 1.0).is_err());
    }
}
