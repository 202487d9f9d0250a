//! Seeded randomness.
//!
//! Every stochastic routine takes an explicit seed. Independent workers draw
//! from separate ChaCha streams of the same seed, so results do not depend on
//! how a batch is partitioned.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{svd_columns, vec_inner, vec_norm, ComplexMatrix};

/// Frames whose Gaussian draw is worse conditioned than this are redrawn.
pub const FRAME_CONDITION_LIMIT: f64 = 1e8;

pub type QnrRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> QnrRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> QnrRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniformly distributed unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = vec_norm(&v);
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Gram-Schmidt with one reorthogonalization pass; columns are replaced by
/// an orthonormal basis of their span.
pub fn orthonormalize(cols: &mut [Vec<Complex64>]) {
    for j in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(j);
        let cj = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let r = vec_inner(cj, q);
                for (x, qi) in cj.iter_mut().zip(q) {
                    *x -= r * qi;
                }
            }
        }
        let norm = vec_norm(cj);
        cj.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Random orthonormal `k`-frame in `C^n` (columns), from an orthonormalized
/// complex Gaussian `n x k` sample.
pub fn orthonormal_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<Complex64>> {
    assert!(k <= n, "frame size exceeds dimension");
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..k).map(|_| gaussian_vector(rng, n)).collect();
        if k > 1 {
            let Ok(svd) = svd_columns(&cols) else {
                continue;
            };
            let smax = svd.singular_values[0];
            let smin = svd.singular_values[k - 1];
            if !(smin > 0.0 && smax / smin <= FRAME_CONDITION_LIMIT) {
                continue;
            }
        }
        orthonormalize(&mut cols);
        return cols;
    }
}

/// Haar-distributed unitary matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| gaussian_vector(rng, n)).collect();
    orthonormalize(&mut cols);
    let mut u = ComplexMatrix::zeros(n);
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

/// Random complex matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_row_major(n, gaussian_vector(rng, n * n)).expect("finite Gaussian sample")
}

/// Random Hermitian matrix `(G + G^*)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n).hermitian_part()
}
