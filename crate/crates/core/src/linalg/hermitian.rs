//! Hermitian eigensolver.
//!
//! The matrix is reduced to a real symmetric tridiagonal matrix by Householder
//! reflections followed by a diagonal phase scaling, then diagonalized with
//! the implicit QL iteration. The extreme-eigenpair path finds the two
//! extreme eigenvalues by Sturm bisection and their eigenvectors by inverse
//! iteration on the tridiagonal form, which keeps support-function sweeps at
//! the cost of one reduction per angle.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

/// Relative Hermiticity tolerance on `||H - H^*||_F`.
pub const HERMITIAN_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Full spectrum of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    /// Sorted non-increasing.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose `j`-th column is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    /// `V diag(lambda) V^*`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &lam) in self.eigenvalues.iter().enumerate() {
                    acc += v[(i, k)] * lam * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

/// An eigenvalue together with a unit eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<Complex64>,
}

/// Largest and smallest eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct ExtremePairs {
    pub top: EigenPair,
    pub bottom: EigenPair,
}

/// Full eigendecomposition with eigenvalues sorted non-increasing.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianSpectrum, LinalgError> {
    let tri = Tridiagonal::reduce(&checked_symmetrize(h)?);
    let n = tri.dim();
    let mut d = tri.diag.clone();
    let mut e = tri.off_padded();
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    implicit_ql(&mut d, &mut e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));

    let mut vectors = ComplexMatrix::zeros(n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (col, &idx) in order.iter().enumerate() {
        eigenvalues.push(d[idx]);
        let v = tri.back_transform(&z[idx * n..(idx + 1) * n]);
        vectors.set_column(col, &v);
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Eigenvalues only, sorted non-increasing.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let tri = Tridiagonal::reduce(&checked_symmetrize(h)?);
    let mut d = tri.diag.clone();
    let mut e = tri.off_padded();
    implicit_ql(&mut d, &mut e, None)?;
    d.sort_by(|a, b| b.total_cmp(a));
    Ok(d)
}

/// Largest and smallest eigenpairs.
pub fn extreme_eigenpairs(h: &ComplexMatrix) -> Result<ExtremePairs, LinalgError> {
    let tri = Tridiagonal::reduce(&checked_symmetrize(h)?);
    let (bottom, top) = (extreme_eigenvalue(&tri, false), extreme_eigenvalue(&tri, true));
    let y_top = inverse_iteration(&tri.diag, &tri.off, top);
    let y_bottom = inverse_iteration(&tri.diag, &tri.off, bottom);
    Ok(ExtremePairs {
        top: EigenPair {
            value: top,
            vector: tri.back_transform(&y_top),
        },
        bottom: EigenPair {
            value: bottom,
            vector: tri.back_transform(&y_bottom),
        },
    })
}

/// Largest eigenvalue only.
pub fn max_eigenvalue(h: &ComplexMatrix) -> Result<f64, LinalgError> {
    let tri = Tridiagonal::reduce(&checked_symmetrize(h)?);
    Ok(extreme_eigenvalue(&tri, true))
}

/// Largest (`top`) or smallest eigenvalue of the tridiagonal form by Sturm
/// bisection inside the Gershgorin interval.
fn extreme_eigenvalue(tri: &Tridiagonal, top: bool) -> f64 {
    let (d, e) = (&tri.diag, &tri.off);
    let n = d.len();
    if n == 0 {
        return f64::NAN;
    }
    let radius = |i: usize| {
        (if i > 0 { e[i - 1] } else { 0.0 }) + (if i + 1 < n { e[i] } else { 0.0 })
    };
    let mut lo = (0..n).map(|i| d[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..n).map(|i| d[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let pivmin = f64::MIN_POSITIVE * e.iter().map(|x| x * x).fold(1.0, f64::max);
    let floor = f64::EPSILON * lo.abs().max(hi.abs());
    // number of eigenvalues below x
    let below = |x: f64| {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..n {
            let coupling = if i > 0 { e[i - 1] * e[i - 1] / q } else { 0.0 };
            q = d[i] - x - coupling;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let target = if top { n - 1 } else { 0 };
    loop {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + floor {
            return mid;
        }
        if below(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

fn checked_symmetrize(h: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let scale = h.frobenius_norm().max(1.0);
    let defect = h.skew_defect();
    if !(defect <= HERMITIAN_TOL * scale) {
        return Err(LinalgError::NotHermitian {
            defect: defect / scale,
        });
    }
    Ok(h.hermitian_part())
}

struct Reflector {
    /// Householder vector acting on coordinates `offset..n`.
    v: Vec<Complex64>,
    tau: f64,
    offset: usize,
}

/// Unitary reduction `A = Q D T D^* Q^*` with `T` real symmetric tridiagonal
/// and `D` a diagonal phase matrix.
struct Tridiagonal {
    diag: Vec<f64>,
    /// Non-negative couplings, length `n - 1`.
    off: Vec<f64>,
    phases: Vec<Complex64>,
    reflectors: Vec<Reflector>,
}

impl Tridiagonal {
    fn reduce(h: &ComplexMatrix) -> Self {
        let n = h.dim();
        // split storage so the inner loops vectorize
        let mut re: Vec<f64> = h.as_slice().iter().map(|z| z.re).collect();
        let mut im: Vec<f64> = h.as_slice().iter().map(|z| z.im).collect();
        let mut diag = vec![0.0; n];
        let mut sub = vec![ZERO; n.saturating_sub(1)];
        let mut reflectors = Vec::new();
        let (mut p_re, mut p_im) = (vec![0.0; n], vec![0.0; n]);
        let (mut w_re, mut w_im) = (vec![0.0; n], vec![0.0; n]);

        for k in 0..n.saturating_sub(1) {
            diag[k] = re[k * n + k];
            let m = n - k - 1;
            let at = |i: usize| Complex64::new(re[i * n + k], im[i * n + k]);
            if m == 1 {
                sub[k] = at(k + 1);
                continue;
            }
            let alpha = (k + 1..n).map(|i| at(i).norm_sqr()).sum::<f64>().sqrt();
            if alpha == 0.0 {
                continue;
            }
            let x0 = at(k + 1);
            let phase = if x0.norm() > 0.0 {
                x0 / x0.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let mut v: Vec<Complex64> = (k + 1..n).map(at).collect();
            v[0] += phase * alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let tau = 2.0 / vnorm2;
            sub[k] = -phase * alpha;
            let v_re: Vec<f64> = v.iter().map(|z| z.re).collect();
            let v_im: Vec<f64> = v.iter().map(|z| z.im).collect();

            // p = tau * A22 v, accumulated row by row as p += conj(A22[j, :]) v_j
            let (p_re, p_im) = (&mut p_re[..m], &mut p_im[..m]);
            p_re.fill(0.0);
            p_im.fill(0.0);
            for j in 0..m {
                let (vr, vi) = (v_re[j], v_im[j]);
                let base = (k + 1 + j) * n + k + 1;
                let (ar, ai) = (&re[base..base + m], &im[base..base + m]);
                let (pr, pi) = (&mut p_re[..m], &mut p_im[..m]);
                for i in 0..m {
                    pr[i] += ar[i] * vr + ai[i] * vi;
                    pi[i] += ar[i] * vi - ai[i] * vr;
                }
            }
            for i in 0..m {
                p_re[i] *= tau;
                p_im[i] *= tau;
            }
            let vp: f64 = (0..m).map(|i| v_re[i] * p_re[i] + v_im[i] * p_im[i]).sum();
            let kk = 0.5 * tau * vp;
            let (w_re, w_im) = (&mut w_re[..m], &mut w_im[..m]);
            for i in 0..m {
                w_re[i] = p_re[i] - v_re[i] * kk;
                w_im[i] = p_im[i] - v_im[i] * kk;
            }

            // A22 -= v w^* + w v^*
            for i in 0..m {
                let (vr, vi, wr, wi) = (v_re[i], v_im[i], w_re[i], w_im[i]);
                let base = (k + 1 + i) * n + k + 1;
                let (ar, ai) = (&mut re[base..base + m], &mut im[base..base + m]);
                let (xr, xi, yr, yi) = (&v_re[..m], &v_im[..m], &w_re[..m], &w_im[..m]);
                for j in 0..m {
                    ar[j] -= vr * yr[j] + vi * yi[j] + wr * xr[j] + wi * xi[j];
                    ai[j] -= vi * yr[j] - vr * yi[j] + wi * xr[j] - wr * xi[j];
                }
            }
            reflectors.push(Reflector {
                v,
                tau,
                offset: k + 1,
            });
        }
        if n > 0 {
            diag[n - 1] = re[(n - 1) * n + n - 1];
        }

        let mut phases = vec![Complex64::new(1.0, 0.0); n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            let b = sub[k];
            let r = b.norm();
            off[k] = r;
            phases[k + 1] = if r > 0.0 { phases[k] * (b / r) } else { phases[k] };
        }

        Self {
            diag,
            off,
            phases,
            reflectors,
        }
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn off_padded(&self) -> Vec<f64> {
        let mut e = self.off.clone();
        e.push(0.0);
        e
    }

    /// Maps an eigenvector of the real tridiagonal form back to the original
    /// basis.
    fn back_transform(&self, y: &[f64]) -> Vec<Complex64> {
        let mut z: Vec<Complex64> = y
            .iter()
            .zip(&self.phases)
            .map(|(&yi, &ph)| ph * yi)
            .collect();
        for r in self.reflectors.iter().rev() {
            let seg = &mut z[r.offset..];
            let dot: Complex64 = r.v.iter().zip(seg.iter()).map(|(v, s)| v.conj() * s).sum();
            let f = dot * r.tau;
            for (s, v) in seg.iter_mut().zip(&r.v) {
                *s -= v * f;
            }
        }
        z
    }
}

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
/// `e[i]` couples `i` and `i + 1`; `e[n-1]` is scratch. When `z` is given it
/// holds `n` column vectors (vector `i` at `z[i*n..]`) that are rotated along.
fn implicit_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<(), LinalgError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let budget = 100 * n * n;
    let mut iterations = 0usize;

    for l in 0..n {
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > budget {
                return Err(LinalgError::NoConvergence { budget });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Inverse iteration for the eigenvector of the symmetric tridiagonal matrix
/// `(d, off)` belonging to the (already converged) eigenvalue `lambda`.
fn inverse_iteration(d: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = d.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = d
        .iter()
        .map(|x| x.abs())
        .chain(off.iter().copied())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    let lu = TridiagonalLu::factor(d, off, lambda, tiny);

    // Deterministic, unstructured start vector.
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 * 0.618_033_988_749_895).fract() - 0.5))
        .collect();
    for _ in 0..3 {
        lu.solve(&mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

/// LU factorization with partial pivoting of `T - sigma I` for a symmetric
/// tridiagonal `T`.
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(diag: &[f64], off: &[f64], sigma: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut dl = off.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|x| x - sigma).collect();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                let fact = if d[i] != 0.0 { dl[i] / d[i] } else { 0.0 };
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for p in d.iter_mut() {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_spectrum(h: &ComplexMatrix, spec: &HermitianSpectrum) {
        let n = h.dim();
        let scale = h.frobenius_norm().max(1.0);
        assert!((&spec.reconstruct() - h).frobenius_norm() <= 1e-10 * scale);
        let gram = spec.eigenvectors.adjoint_mul(&spec.eigenvectors);
        assert!((&gram - &ComplexMatrix::identity(n)).frobenius_norm() <= 1e-10);
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn diagonal_input() {
        let h = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        let spec = hermitian_eig(&h).unwrap();
        assert_eq!(spec.eigenvalues, vec![1.0, -1.0]);
        check_spectrum(&h, &spec);
    }

    #[test]
    fn pauli_y() {
        let h = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap();
        let spec = hermitian_eig(&h).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-14);
        check_spectrum(&h, &spec);
    }

    #[test]
    fn identity_five() {
        let h = ComplexMatrix::identity(5);
        let spec = hermitian_eig(&h).unwrap();
        assert!(spec.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
        check_spectrum(&h, &spec);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&a), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn extreme_pairs_on_split_tridiagonal() {
        // Block-diagonal input forces zero couplings in the reduced form.
        let h = ComplexMatrix::from_real_diagonal(&[0.5, 3.0, -2.0, 3.0, 1.0]);
        let ext = extreme_eigenpairs(&h).unwrap();
        assert!((ext.top.value - 3.0).abs() <= 8.0 * f64::EPSILON);
        assert!((ext.bottom.value + 2.0).abs() <= 8.0 * f64::EPSILON);
        let hv = h.mul_vec(&ext.top.vector);
        let res: Vec<Complex64> = hv.iter().zip(&ext.top.vector).map(|(a, b)| a - b * 3.0).collect();
        assert!(vec_norm(&res) < 1e-12);
        assert!((vec_norm(&ext.top.vector) - 1.0).abs() < 1e-12);
    }
}
