//! Self-verification sweeps: the full-bunching ratio law exercised through
//! the permanent machinery on random unitaries, and cross-checks of the
//! permanent implementations against the permutation-sum oracle.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bunching::{expected_full_bunching_ratio, full_bunching_ratio};
use crate::haar::haar_sample;
use crate::matrix::ComplexMatrix;
use crate::permanent::{permanent_glynn, permanent_naive, permanent_ryser};
use crate::rng::Seed;
use crate::states::InputSpec;

/// Outcome of one verification check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &str, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: false,
            detail,
        }
    }
}

/// Full-bunching ratio law on `unitaries` Haar samples: for every mode with
/// nonzero classical full-bunching probability, the quantum/classical ratio
/// must equal n!/∏gₖ! within `rel_tol` relative error. Inputs cycle over
/// n ∈ [2,4] with and without doubled input modes, m ∈ [2,8].
pub fn full_bunching_ratio_sweep(seed: Seed, unitaries: usize, rel_tol: f64) -> Check {
    let name = "full-bunching ratio law";
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for k in 0..unitaries {
        let sub = seed.child(k as u64);
        let m = 2 + k % 7; // 2..=8
        let u = match haar_sample::<f64>(m, sub) {
            Ok(u) => u,
            Err(e) => return Check::fail(name, format!("sampling failed: {e}")),
        };
        let mut rng = sub.child(u64::MAX).rng();
        let n = 2 + k % 3; // 2..=4
        // Every third instance doubles one input mode (a g with a 2).
        let mut modes: Vec<usize> = Vec::with_capacity(n);
        if k % 3 == 0 && n >= 2 {
            let doubled = rng.random_range(1..=m);
            modes.push(doubled);
            modes.push(doubled);
            while modes.len() < n {
                modes.push(rng.random_range(1..=m));
            }
        } else {
            while modes.len() < n {
                modes.push(rng.random_range(1..=m));
            }
        }
        let input = match InputSpec::indistinguishable(m, &modes) {
            Ok(i) => i,
            Err(e) => return Check::fail(name, format!("input construction failed: {e}")),
        };
        let expected = expected_full_bunching_ratio::<f64>(&input);
        for j in 1..=m {
            match full_bunching_ratio(&u, &input, j) {
                Ok(Some(ratio)) => {
                    let rel = (ratio / expected - 1.0).abs();
                    worst = worst.max(rel);
                    checked += 1;
                    if rel > rel_tol {
                        return Check::fail(
                            name,
                            format!(
                                "m={m} n={n} modes={modes:?} j={j}: ratio {ratio} vs {expected} (rel {rel:.3e})"
                            ),
                        );
                    }
                }
                Ok(None) => {} // classical probability exactly zero: undefined, skip
                Err(e) => return Check::fail(name, format!("ratio computation failed: {e}")),
            }
        }
    }
    Check::pass(
        name,
        format!("{checked} defined ratios over {unitaries} unitaries, worst relative error {worst:.3e}"),
    )
}

/// Ryser and Glynn against the permutation-sum oracle on random complex
/// matrices of dimension ≤ 9.
pub fn permanent_oracle_sweep(seed: Seed, matrices: usize, rel_tol: f64) -> Check {
    let name = "permanent oracle equivalence";
    let mut worst: f64 = 0.0;
    for k in 0..matrices {
        let mut rng = seed.child(k as u64).rng();
        let n = 1 + k % 9;
        let a = ComplexMatrix::<f64>::from_fn(n, n, |_, _| {
            Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let exact = match permanent_naive(&a) {
            Ok(p) => p,
            Err(e) => return Check::fail(name, format!("oracle failed: {e}")),
        };
        let scale = exact.norm().max(1e-300);
        for (label, result) in [
            ("ryser", permanent_ryser(&a)),
            ("glynn", permanent_glynn(&a)),
        ] {
            match result {
                Ok(p) => {
                    let rel = (p - exact).norm() / scale;
                    worst = worst.max(rel);
                    if rel > rel_tol {
                        return Check::fail(
                            name,
                            format!("{label} disagrees with oracle at n={n}: rel {rel:.3e}"),
                        );
                    }
                }
                Err(e) => return Check::fail(name, format!("{label} failed: {e}")),
            }
        }
    }
    Check::pass(
        name,
        format!("{matrices} random matrices (n <= 9), worst relative error {worst:.3e}"),
    )
}

/// Frozen anchor: the permanent of the unnormalized 3×3 DFT matrix is −3.
pub fn fourier_permanent_anchor() -> Check {
    let name = "3x3 Fourier permanent anchor";
    let omega = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let f = ComplexMatrix::<f64>::from_fn(3, 3, |i, j| omega.powu((i * j) as u32));
    match permanent_ryser(&f) {
        Ok(p) => {
            let err = (p - Complex::new(-3.0, 0.0)).norm();
            if err < 1e-12 {
                Check::pass(name, format!("per = {p} (error {err:.3e})"))
            } else {
                Check::fail(name, format!("per = {p}, expected -3"))
            }
        }
        Err(e) => Check::fail(name, format!("computation failed: {e}")),
    }
}

/// Run the full verification suite (deterministic for a fixed seed).
pub fn run_verification(seed: Seed) -> Vec<Check> {
    vec![
        full_bunching_ratio_sweep(seed, 200, 1e-9),
        permanent_oracle_sweep(seed.child(1_000_000), 500, 1e-9),
        fourier_permanent_anchor(),
    ]
}
