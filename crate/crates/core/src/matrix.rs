//! Dense complex matrices and validated unitaries.
//!
//! Storage is row-major with interleaved real/imaginary parts
//! (`Vec<Complex<T>>`). All tolerances in this crate are max-norm bounds.
//!
//! Index convention used throughout: entry `(i, j)` of an interferometer
//! matrix is the amplitude for a particle entering mode `j + 1` to exit mode
//! `i + 1`, i.e. rows label output modes and columns label input modes, and
//! an amplitude vector transforms as `out = U · in`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rectangular complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Build from row-major entries. Rejects length mismatches and non-finite
    /// values.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation(
                "matrix entries must be finite (no NaN/Inf)".into(),
            ));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Build from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex<T>) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Plain matrix product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Max-norm of `U†U − I`. Requires a square matrix.
    pub fn unitarity_residual(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "unitarity is only defined for square matrices, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                // (U†U)_{ij} = Σ_k conj(U_{ki}) U_{kj}
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    acc = acc + self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc = acc - Complex::new(T::one(), T::zero());
                }
                worst = worst.max(acc.norm());
            }
        }
        Ok(worst)
    }
}

/// True iff the max-norm of `U†U − I` is within `tol`.
///
/// Errors on non-square input.
pub fn check_unitary<T: Scalar>(mat: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    Ok(mat.unitarity_residual()? <= tol)
}

/// Square complex matrix validated to be unitary at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Scalar> UnitaryMatrix<T> {
    /// Validate at the construction tolerance of the scalar type.
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerance(mat, T::UNITARITY_TOL_CONSTRUCT)
    }

    /// Validate against an explicit max-norm tolerance.
    pub fn with_tolerance(mat: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let residual = mat.unitarity_residual()?;
        if residual > tol {
            return Err(Error::NotUnitary {
                residual: residual.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { mat })
    }

    /// Number of modes m.
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.mat.get(i, j)
    }

    pub fn dagger(&self) -> Self {
        // The adjoint of a unitary is unitary; no re-validation needed.
        Self {
            mat: self.mat.dagger(),
        }
    }
}

/// Product of two unitaries, re-validated at the product tolerance.
pub fn multiply<T: Scalar>(a: &UnitaryMatrix<T>, b: &UnitaryMatrix<T>) -> Result<UnitaryMatrix<T>> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "cannot compose unitaries of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let mat = a.matrix().matmul(b.matrix())?;
    UnitaryMatrix::with_tolerance(mat, T::UNITARITY_TOL_PRODUCT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn balanced_coupler() -> ComplexMatrix<f64> {
        let h = 0.5_f64.sqrt();
        ComplexMatrix::from_entries(
            2,
            2,
            vec![
                C64::new(h, 0.0),
                C64::new(0.0, h),
                C64::new(0.0, h),
                C64::new(h, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_unitary() {
        let id = ComplexMatrix::<f64>::identity(3);
        assert!(check_unitary(&id, 1e-12).unwrap());
    }

    #[test]
    fn rank_one_is_not_unitary() {
        let half = C64::new(0.5, 0.0);
        let mat = ComplexMatrix::from_entries(2, 2, vec![half; 4]).unwrap();
        assert!(!check_unitary(&mat, 1e-10).unwrap());
    }

    #[test]
    fn balanced_coupler_is_unitary() {
        assert!(check_unitary(&balanced_coupler(), 1e-10).unwrap());
    }

    #[test]
    fn check_unitary_rejects_non_square() {
        let mat = ComplexMatrix::<f64>::zeros(2, 3);
        assert!(matches!(
            check_unitary(&mat, 1e-10),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let err = ComplexMatrix::from_entries(1, 1, vec![C64::new(f64::NAN, 0.0)]);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn multiply_by_identity() {
        let u = UnitaryMatrix::new(balanced_coupler()).unwrap();
        let id = UnitaryMatrix::new(ComplexMatrix::identity(2)).unwrap();
        let prod = multiply(&u, &id).unwrap();
        assert!(prod.matrix().max_abs_diff(u.matrix()) < 1e-15);
    }

    #[test]
    fn multiply_by_adjoint_gives_identity() {
        let u = UnitaryMatrix::new(balanced_coupler()).unwrap();
        let prod = multiply(&u, &u.dagger()).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(prod.matrix().max_abs_diff(&id) < 1e-10);
    }

    #[test]
    fn mach_zehnder_from_two_balanced_couplers() {
        // Two balanced couplers in series swap the modes up to phase: the
        // bar-transmission probability vanishes.
        let u = UnitaryMatrix::new(balanced_coupler()).unwrap();
        let mz = multiply(&u, &u).unwrap();
        assert!(mz.get(0, 0).norm_sqr() < 1e-12);
        assert!((mz.get(0, 1).norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multiply_dim_mismatch() {
        let u2 = UnitaryMatrix::new(ComplexMatrix::<f64>::identity(2)).unwrap();
        let u3 = UnitaryMatrix::new(ComplexMatrix::<f64>::identity(3)).unwrap();
        assert!(matches!(multiply(&u2, &u3), Err(Error::Dimension(_))));
    }
}
