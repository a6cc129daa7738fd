//! Haar-uniform sampling of unitary matrices.
//!
//! The sampler fills an m×m matrix with independent standard complex
//! Gaussians (a Ginibre matrix), takes its QR factorization, and then
//! right-multiplies Q by `diag(r_jj / |r_jj|)`. The phase correction is
//! mandatory: the raw Q of a Ginibre matrix is *not* Haar-distributed,
//! because the QR convention biases the phases of the R diagonal. Fixing
//! those phases makes the distribution exactly Haar.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};
use crate::rng::Seed;
use crate::scalar::Scalar;

/// Draw an m×m Haar-uniform unitary. Deterministic for a fixed seed.
pub fn haar_sample<T>(m: usize, seed: Seed) -> Result<UnitaryMatrix<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
{
    if m == 0 {
        return Err(Error::Domain("Haar sampling requires m >= 1".into()));
    }
    let mut rng = seed.rng();
    let ginibre = ComplexMatrix::from_fn(m, m, |_, _| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let (mut q, r) = householder_qr(&ginibre);
    // Column phase fix: U = Q · diag(r_jj / |r_jj|).
    for j in 0..m {
        let d = r.get(j, j);
        let norm = d.norm();
        let phase = if norm > T::zero() {
            d / norm
        } else {
            Complex::new(T::one(), T::zero())
        };
        for i in 0..m {
            let v = q.get(i, j) * phase;
            q.set(i, j, v);
        }
    }
    UnitaryMatrix::new(q)
}

/// Householder QR of a square complex matrix: returns (Q, R) with A = Q·R,
/// Q unitary and R upper triangular.
fn householder_qr<T: Scalar>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = a.rows();
    debug_assert!(a.is_square());
    let mut r = a.clone();
    let mut q = ComplexMatrix::<T>::identity(n);
    let zero = Complex::new(T::zero(), T::zero());

    let mut v = vec![zero; n];
    for k in 0..n {
        // Householder vector for column k, rows k..n.
        let mut norm_sq = T::zero();
        for i in k..n {
            norm_sq = norm_sq + r.get(i, k).norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = r.get(k, k);
        // beta = -(x0/|x0|)·‖x‖ so that v = x − beta·e1 adds magnitudes.
        let phase = if x0.norm() > T::zero() {
            x0 / x0.norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let beta = -phase * norm;
        let mut v_norm_sq = T::zero();
        for i in k..n {
            let vi = if i == k { r.get(i, k) - beta } else { r.get(i, k) };
            v[i] = vi;
            v_norm_sq = v_norm_sq + vi.norm_sqr();
        }
        if v_norm_sq == T::zero() {
            continue;
        }
        let scale = T::from_f64(2.0).unwrap() / v_norm_sq;

        // R ← H R with H = I − scale·vv† acting on rows k..n.
        for j in k..n {
            let mut dot = zero; // v† · R[:, j]
            for i in k..n {
                dot = dot + v[i].conj() * r.get(i, j);
            }
            let dot = dot * scale;
            for i in k..n {
                let val = r.get(i, j) - v[i] * dot;
                r.set(i, j, val);
            }
        }
        // Q ← Q H (accumulate from the right; H is Hermitian).
        for i in 0..n {
            let mut dot = zero; // Q[i, :] · v
            for j in k..n {
                dot = dot + q.get(i, j) * v[j];
            }
            let dot = dot * scale;
            for j in k..n {
                let val = q.get(i, j) - dot * v[j].conj();
                q.set(i, j, val);
            }
        }
    }
    (q, r)
}
