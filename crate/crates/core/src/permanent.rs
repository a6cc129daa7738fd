//! Exact permanents and determinants of small complex matrices.
//!
//! The permanent drives every multi-particle transition amplitude in this
//! crate. Three routes are provided: a direct sum over permutations
//! (`permanent_naive`, the reference oracle), Ryser's inclusion-exclusion
//! formula with Gray-code column updates (`permanent_ryser`, the production
//! path, O(2ⁿ·n)), and Glynn's formula (`permanent_glynn`, an independent
//! cross-check behind the same interface). Determinants use LU with partial
//! pivoting.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;

/// Hard bound for the exponential-time permanents.
pub const RYSER_MAX_DIM: usize = 30;
/// Bound for the factorial-time oracle.
pub const NAIVE_MAX_DIM: usize = 10;
/// Bound for the subset-DP permanent (O(2ⁿ) memory).
pub const NONNEG_MAX_DIM: usize = 22;

fn require_square<T: Scalar>(a: &ComplexMatrix<T>) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "permanent/determinant require a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows())
}

/// Permanent as the literal sum over all n! permutations of row-column
/// products. Guarded at n ≤ 10; this is the oracle the fast paths are
/// checked against.
pub fn permanent_naive<T: Scalar>(a: &ComplexMatrix<T>) -> Result<Complex<T>> {
    let n = require_square(a)?;
    if n > NAIVE_MAX_DIM {
        return Err(Error::SizeGuard(format!(
            "permanent_naive is limited to n <= {NAIVE_MAX_DIM} (got {n}); use permanent_ryser"
        )));
    }
    let one = Complex::new(T::one(), T::zero());
    let mut used = vec![false; n];
    fn expand<T: Scalar>(
        a: &ComplexMatrix<T>,
        row: usize,
        used: &mut [bool],
        prefix: Complex<T>,
    ) -> Complex<T> {
        let n = a.rows();
        if row == n {
            return prefix;
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                acc = acc + expand(a, row + 1, used, prefix * a.get(row, col));
                used[col] = false;
            }
        }
        acc
    }
    Ok(expand(a, 0, &mut used, one))
}

/// Permanent via Ryser's formula,
/// per(A) = (−1)ⁿ Σ_{∅≠S⊆cols} (−1)^{|S|} ∏ᵢ Σ_{j∈S} a_{ij},
/// with subsets walked in Gray-code order so each step updates the row sums
/// by a single column. Accumulation switches to Kahan compensation for
/// n ≥ 16, where the 2ⁿ-term alternating sum starts losing digits.
pub fn permanent_ryser<T: Scalar>(a: &ComplexMatrix<T>) -> Result<Complex<T>> {
    let n = require_square(a)?;
    if n > RYSER_MAX_DIM {
        return Err(Error::SizeGuard(format!(
            "permanent_ryser is limited to n <= {RYSER_MAX_DIM} (got {n})"
        )));
    }
    let zero = Complex::new(T::zero(), T::zero());
    if n == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }

    let mut row_sums = vec![zero; n];
    let mut sum = zero;
    let mut comp = zero; // Kahan compensation
    let compensated = n >= 16;
    let mut gray: u64 = 0;

    for k in 1u64..(1u64 << n) {
        let next_gray = k ^ (k >> 1);
        let changed = (gray ^ next_gray).trailing_zeros() as usize;
        let added = next_gray & (1 << changed) != 0;
        for (i, rs) in row_sums.iter_mut().enumerate() {
            let a_ic = a.get(i, changed);
            *rs = if added { *rs + a_ic } else { *rs - a_ic };
        }
        gray = next_gray;

        let mut product = Complex::new(T::one(), T::zero());
        for rs in &row_sums {
            product = product * *rs;
        }
        // Sign (−1)^{|S|}.
        let term = if gray.count_ones() % 2 == 0 {
            product
        } else {
            -product
        };
        if compensated {
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        } else {
            sum = sum + term;
        }
    }
    // Leading (−1)ⁿ.
    if n % 2 == 1 {
        sum = -sum;
    }
    Ok(sum)
}

/// Permanent via Glynn's formula,
/// per(A) = 2^{1−n} Σ_{δ∈{±1}ⁿ, δ₁=1} (∏ₖ δₖ) ∏ⱼ Σᵢ δᵢ a_{ij},
/// again with Gray-code sign flips. Kept as an independent cross-check of
/// the Ryser path.
pub fn permanent_glynn<T: Scalar>(a: &ComplexMatrix<T>) -> Result<Complex<T>> {
    let n = require_square(a)?;
    if n > RYSER_MAX_DIM {
        return Err(Error::SizeGuard(format!(
            "permanent_glynn is limited to n <= {RYSER_MAX_DIM} (got {n})"
        )));
    }
    if n == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let two = T::from_f64(2.0).unwrap();

    // Start at δ = (1,...,1): column sums.
    let mut col_sums = vec![zero; n];
    for j in 0..n {
        let mut s = zero;
        for i in 0..n {
            s = s + a.get(i, j);
        }
        col_sums[j] = s;
    }

    let mut sum = zero;
    let mut comp = zero;
    let compensated = n >= 16;
    let mut delta_sign = T::one(); // ∏ₖ δₖ
    let mut gray: u64 = 0;

    let accumulate = |term: Complex<T>, sum: &mut Complex<T>, comp: &mut Complex<T>| {
        if compensated {
            let y = term - *comp;
            let t = *sum + y;
            *comp = (t - *sum) - y;
            *sum = t;
        } else {
            *sum = *sum + term;
        }
    };

    let first = col_sums
        .iter()
        .fold(Complex::new(T::one(), T::zero()), |p, s| p * *s);
    accumulate(first, &mut sum, &mut comp);

    // Walk δ over {±1}^{n−1} on rows 2..n (row 1 fixed at +1).
    for k in 1u64..(1u64 << (n - 1)) {
        let next_gray = k ^ (k >> 1);
        let changed = (gray ^ next_gray).trailing_zeros() as usize + 1; // row index
        gray = next_gray;
        // δ_changed flips sign: column sums change by ∓2·a_{changed,j}.
        let flipped_to_minus = next_gray & (1 << (changed - 1)) != 0;
        for (j, cs) in col_sums.iter_mut().enumerate() {
            let shift = a.get(changed, j) * two;
            *cs = if flipped_to_minus { *cs - shift } else { *cs + shift };
        }
        delta_sign = -delta_sign;

        let mut product = Complex::new(T::one(), T::zero());
        for cs in &col_sums {
            product = product * *cs;
        }
        accumulate(product * delta_sign, &mut sum, &mut comp);
    }

    let norm = two.powi(n as i32 - 1);
    Ok(sum / norm)
}

/// Permanent of a matrix with nonnegative real entries via the subset
/// dynamic program dp[S] = Σ_{j∈S} a_{|S|,j}·dp[S∖{j}], O(2ⁿ·n) time and
/// O(2ⁿ) memory.
///
/// Unlike the inclusion-exclusion formulas, every intermediate here is a sum
/// of nonnegative terms, so the result keeps full relative precision even
/// when the permanent is many orders of magnitude below the largest entry
/// products — exactly the regime of distinguishable-particle probabilities
/// built from |U|² with near-zero matrix elements.
pub fn permanent_nonnegative<T: Scalar>(a: &ComplexMatrix<T>) -> Result<T> {
    let n = require_square(a)?;
    if n > NONNEG_MAX_DIM {
        return Err(Error::SizeGuard(format!(
            "permanent_nonnegative is limited to n <= {NONNEG_MAX_DIM} (got {n})"
        )));
    }
    for z in a.entries() {
        if z.im != T::zero() || z.re < T::zero() {
            return Err(Error::Validation(
                "permanent_nonnegative requires nonnegative real entries".into(),
            ));
        }
    }
    if n == 0 {
        return Ok(T::one());
    }
    let full = 1usize << n;
    let mut dp = vec![T::zero(); full];
    dp[0] = T::one();
    for mask in 1..full {
        let row = (mask as u32).count_ones() as usize - 1;
        let mut acc = T::zero();
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            acc += a.get(row, j).re * dp[mask ^ (1 << j)];
            rest &= rest - 1;
        }
        dp[mask] = acc;
    }
    Ok(dp[full - 1])
}

/// Determinant via LU decomposition with partial pivoting.
pub fn determinant<T: Scalar>(a: &ComplexMatrix<T>) -> Result<Complex<T>> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let mut lu = a.clone();
    let mut det = Complex::new(T::one(), T::zero());
    for k in 0..n {
        // Pick the largest pivot in column k.
        let mut pivot_row = k;
        let mut pivot_mag = lu.get(k, k).norm_sqr();
        for i in (k + 1)..n {
            let mag = lu.get(i, k).norm_sqr();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag == T::zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        if pivot_row != k {
            for j in 0..n {
                let a_kj = lu.get(k, j);
                let a_pj = lu.get(pivot_row, j);
                lu.set(k, j, a_pj);
                lu.set(pivot_row, j, a_kj);
            }
            det = -det;
        }
        let pivot = lu.get(k, k);
        det = det * pivot;
        for i in (k + 1)..n {
            let factor = lu.get(i, k) / pivot;
            for j in (k + 1)..n {
                let val = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, val);
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;
    use crate::C64;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn random_complex(n: usize, seed: u64) -> ComplexMatrix<f64> {
        let mut rng = Seed::new(seed).rng();
        ComplexMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn rel_err(a: C64, b: C64) -> f64 {
        let scale = a.norm().max(b.norm()).max(1e-300);
        (a - b).norm() / scale
    }

    #[test]
    fn one_by_one() {
        let x = C64::new(0.3, -0.7);
        let a = ComplexMatrix::from_entries(1, 1, vec![x]).unwrap();
        assert_eq!(permanent_naive(&a).unwrap(), x);
        assert_eq!(permanent_ryser(&a).unwrap(), x);
        assert_eq!(determinant(&a).unwrap(), x);
    }

    #[test]
    fn all_ones_permanent_is_factorial() {
        let a = ComplexMatrix::from_entries(3, 3, vec![C64::new(1.0, 0.0); 9]).unwrap();
        assert!((permanent_naive(&a).unwrap() - C64::new(6.0, 0.0)).norm() < 1e-12);
        assert!((permanent_ryser(&a).unwrap() - C64::new(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fourier_3x3_permanent() {
        // Unnormalized 3x3 DFT matrix, entries ω^{jk}: the permanent is −3.
        // Frozen from the permutation-sum oracle.
        let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let f = ComplexMatrix::from_fn(3, 3, |i, j| omega.powu((i * j) as u32));
        let p_naive = permanent_naive(&f).unwrap();
        assert!((p_naive - C64::new(-3.0, 0.0)).norm() < 1e-12, "{p_naive}");
        let p_ryser = permanent_ryser(&f).unwrap();
        assert!((p_ryser - C64::new(-3.0, 0.0)).norm() < 1e-12);
        let p_glynn = permanent_glynn(&f).unwrap();
        assert!((p_glynn - C64::new(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ryser_matches_naive_on_random_matrices() {
        for n in 1..=9 {
            for trial in 0..20 {
                let a = random_complex(n, (n * 100 + trial) as u64);
                let exact = permanent_naive(&a).unwrap();
                let fast = permanent_ryser(&a).unwrap();
                assert!(
                    rel_err(exact, fast) <= 1e-9,
                    "n={n} trial={trial}: {exact} vs {fast}"
                );
            }
        }
    }

    #[test]
    fn glynn_matches_naive_on_random_matrices() {
        for n in 1..=8 {
            let a = random_complex(n, 7_000 + n as u64);
            let exact = permanent_naive(&a).unwrap();
            let glynn = permanent_glynn(&a).unwrap();
            assert!(rel_err(exact, glynn) <= 1e-9);
        }
    }

    #[test]
    fn equal_rows_permanent_is_factorial_times_product() {
        // All rows equal to v: per = n!·∏ vₖ.
        let mut rng = Seed::new(99).rng();
        let n = 5;
        let v: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let a = ComplexMatrix::from_fn(n, n, |_, j| v[j]);
        let expected = v.iter().fold(C64::new(120.0, 0.0), |p, z| p * z);
        let got = permanent_ryser(&a).unwrap();
        assert!(rel_err(expected, got) < 1e-12);
    }

    #[test]
    fn repeated_unitary_rows_agree_with_oracle() {
        let u = crate::haar::haar_sample::<f64>(4, Seed::new(21)).unwrap();
        // Rows (0, 0, 1, 2) of U: two identical rows.
        let rows = [0usize, 0, 1, 2];
        let a = ComplexMatrix::from_fn(4, 4, |i, j| u.get(rows[i], j));
        let exact = permanent_naive(&a).unwrap();
        let fast = permanent_ryser(&a).unwrap();
        assert!(rel_err(exact, fast) <= 1e-9);
    }

    #[test]
    fn naive_size_guard() {
        let a = ComplexMatrix::<f64>::identity(11);
        match permanent_naive(&a) {
            Err(Error::SizeGuard(msg)) => assert!(msg.contains("permanent_ryser")),
            other => panic!("expected size guard, got {other:?}"),
        }
    }

    #[test]
    fn ryser_size_guard() {
        let a = ComplexMatrix::<f64>::identity(31);
        assert!(matches!(permanent_ryser(&a), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn non_square_rejected() {
        let a = ComplexMatrix::<f64>::zeros(2, 3);
        assert!(matches!(permanent_ryser(&a), Err(Error::Dimension(_))));
        assert!(matches!(determinant(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn determinant_identity() {
        let a = ComplexMatrix::<f64>::identity(4);
        assert!((determinant(&a).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn determinant_closed_form_2x2() {
        let mut rng = Seed::new(13).rng();
        let mut draw = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let (a, b, c, d) = (draw(), draw(), draw(), draw());
        let m = ComplexMatrix::from_entries(2, 2, vec![a, b, c, d]).unwrap();
        assert!((determinant(&m).unwrap() - (a * d - b * c)).norm() < 1e-12);
    }

    #[test]
    fn determinant_repeated_rows_is_zero() {
        let u = crate::haar::haar_sample::<f64>(3, Seed::new(31)).unwrap();
        let a = ComplexMatrix::from_fn(3, 3, |i, j| u.get(if i == 2 { 0 } else { i }, j));
        assert!(determinant(&a).unwrap().norm() < 1e-12);
    }

    #[test]
    fn determinant_of_unitary_has_unit_modulus() {
        let u = crate::haar::haar_sample::<f64>(6, Seed::new(77)).unwrap();
        assert!((determinant(u.matrix()).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn scaling_law() {
        // per(cA) = cⁿ·per(A).
        let a = random_complex(4, 4242);
        let c = C64::new(0.8, -0.3);
        let scaled = ComplexMatrix::from_fn(4, 4, |i, j| a.get(i, j) * c);
        let lhs = permanent_ryser(&scaled).unwrap();
        let rhs = permanent_ryser(&a).unwrap() * c.powu(4);
        assert!(rel_err(lhs, rhs) < 1e-10);
    }

    #[test]
    fn nonnegative_dp_matches_naive() {
        let mut rng = Seed::new(313).rng();
        for n in 1..=8 {
            let a = ComplexMatrix::<f64>::from_fn(n, n, |_, _| {
                let g: f64 = rng.sample(StandardNormal);
                C64::new(g * g, 0.0)
            });
            let exact = permanent_naive(&a).unwrap();
            let dp = permanent_nonnegative(&a).unwrap();
            assert!((dp - exact.re).abs() <= 1e-12 * exact.re.max(1.0));
        }
    }

    #[test]
    fn nonnegative_dp_keeps_precision_with_tiny_entries() {
        // All rows equal with one entry near zero: per = n!·∏ entries. The
        // alternating-sign formulas lose ~8 digits here; the DP must not.
        let row = [0.3_f64, 0.25, 0.2, 1e-9];
        let a = ComplexMatrix::<f64>::from_fn(4, 4, |_, j| C64::new(row[j], 0.0));
        let expected = 24.0 * row.iter().product::<f64>();
        let dp = permanent_nonnegative(&a).unwrap();
        assert!(
            ((dp - expected) / expected).abs() < 1e-13,
            "dp={dp}, expected={expected}"
        );
    }

    #[test]
    fn nonnegative_dp_rejects_bad_entries() {
        let a = ComplexMatrix::from_entries(1, 1, vec![C64::new(-1.0, 0.0)]).unwrap();
        assert!(matches!(permanent_nonnegative(&a), Err(Error::Validation(_))));
        let b = ComplexMatrix::from_entries(1, 1, vec![C64::new(1.0, 0.5)]).unwrap();
        assert!(matches!(permanent_nonnegative(&b), Err(Error::Validation(_))));
        let c = ComplexMatrix::<f64>::identity(NONNEG_MAX_DIM + 1);
        assert!(matches!(permanent_nonnegative(&c), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn f32_permanent_matches_f64_loosely() {
        let a64 = random_complex(5, 512);
        let a32 = ComplexMatrix::<f32>::from_fn(5, 5, |i, j| {
            let z = a64.get(i, j);
            num_complex::Complex::new(z.re as f32, z.im as f32)
        });
        let p64 = permanent_ryser(&a64).unwrap();
        let p32 = permanent_ryser(&a32).unwrap();
        let diff = (C64::new(p32.re as f64, p32.im as f64) - p64).norm();
        assert!(diff / p64.norm() < 1e-4);
    }
}
