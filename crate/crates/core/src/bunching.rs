//! Bunching observables: bunching probability, per-mode full-bunching,
//! quantum/classical full-bunching ratios, and the mixture predictions used
//! for partially distinguishable sources.
//!
//! A bunching event is any output with two or more particles in one mode;
//! full bunching puts all n particles in a single mode. The bunching
//! probability is computed as one minus the collision-free mass (fewer
//! terms than summing the bunching states directly).
//!
//! For every unitary, every mode, and every input, the ratio of quantum to
//! classical full-bunching probabilities equals `n!/∏ gₖ!` whenever the
//! classical probability is nonzero; the exhaustive sweep in the
//! verification suite exercises this identity through the permanent
//! machinery rather than assuming it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::UnitaryMatrix;
use crate::model::{output_distribution, transition_probability, OutputDistribution, StatisticsModel};
use crate::scalar::{factorial, real, Scalar};
use crate::states::{InputSpec, OccupationState};

/// Probability that two or more particles share an output mode:
/// `1 − Σ_{collision-free H} p(H)`.
///
/// Rejects distributions whose mass deviates from 1 by more than 1e-6.
pub fn bunching_probability<T: Scalar>(dist: &OutputDistribution<T>) -> Result<T> {
    let total = dist.total();
    if (total - T::one()).abs() > real::<T>(1e-6) {
        return Err(Error::Validation(format!(
            "distribution is not normalized (mass {total})"
        )));
    }
    let mut collision_free = T::zero();
    for (state, p) in dist.iter() {
        if state.is_collision_free() {
            collision_free += p;
        }
    }
    Ok(T::one() - collision_free)
}

/// Probability that all n particles exit in mode `j` (1-based).
pub fn full_bunching_probability<T: Scalar>(dist: &OutputDistribution<T>, j: usize) -> Result<T> {
    if j == 0 || j > dist.modes() {
        return Err(Error::Validation(format!(
            "mode index {j} outside [1, {}]",
            dist.modes()
        )));
    }
    let state = OccupationState::single_mode(dist.modes(), j, dist.particles())?;
    dist.probability(&state)
}

/// Quantum/classical full-bunching ratio for mode `j`: the probability that
/// all n indistinguishable particles exit mode j, divided by the same
/// probability for fully distinguishable particles.
///
/// Returns `None` when the classical probability is zero (some matrix
/// element `U_{j,rₖ}` vanishes, as happens in designed circuits); the
/// undefined case is a first-class value, never a NaN.
pub fn full_bunching_ratio<T: Scalar>(
    u: &UnitaryMatrix<T>,
    input: &InputSpec,
    j: usize,
) -> Result<Option<T>> {
    if j == 0 || j > u.dim() {
        return Err(Error::Validation(format!(
            "mode index {j} outside [1, {}]",
            u.dim()
        )));
    }
    let h = OccupationState::single_mode(u.dim(), j, input.particle_count())?;
    let quantum = transition_probability(u, input, &h, StatisticsModel::Boson)?;
    let classical = transition_probability(u, input, &h, StatisticsModel::Classical)?;
    if classical == T::zero() {
        return Ok(None);
    }
    Ok(Some(quantum / classical))
}

/// The value Theorem-style full-bunching enhancement takes for a given
/// input: n!/∏ gₖ!.
pub fn expected_full_bunching_ratio<T: Scalar>(input: &InputSpec) -> T {
    factorial::<T>(input.particle_count()) / input.occupations().factorial_product::<T>()
}

/// Recover the indistinguishable-particle bunching probability from the
/// measured coincidence ratio `t = (1 − p_b^{ind}) / (1 − p_b^{dist})` and
/// the distinguishable-particle bunching probability: `1 − t·(1 − p_c)`.
pub fn hom_invert<T: Scalar>(t: T, p_c: T) -> Result<T> {
    if t < T::zero() || !t.is_finite() {
        return Err(Error::Domain(format!("ratio t must be finite and >= 0, got {t}")));
    }
    if p_c < T::zero() || p_c > T::one() {
        return Err(Error::Domain(format!(
            "probability p_c must lie in [0, 1], got {p_c}"
        )));
    }
    let result = T::one() - t * (T::one() - p_c);
    if result < T::zero() || result > T::one() {
        return Err(Error::Domain(format!(
            "inconsistent measurement inputs: t={t}, p_c={p_c} imply p={result}"
        )));
    }
    Ok(result)
}

/// Full-bunching ratio predicted for a source that is fully
/// indistinguishable with probability `w` and has one distinguishable
/// particle otherwise: `w·n! + (1−w)·(n−1)!`.
///
/// For two particles `w` is the pairwise indistinguishability (often quoted
/// as a visibility β); for three it is the squared overlap α² of the third
/// particle with the interfering pair. Both readings enter this formula the
/// same way, so the raw weight is the argument.
pub fn predicted_ratio_mixture<T: Scalar>(n: usize, w: T) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "mixture ratio needs at least two particles, got {n}"
        )));
    }
    if w < T::zero() || w > T::one() {
        return Err(Error::Domain(format!("weight {w} outside [0, 1]")));
    }
    Ok(w * factorial::<T>(n) + (T::one() - w) * factorial::<T>(n - 1))
}

/// Bunching observables of one (unitary, input, model) triple.
///
/// `full_bunch[j-1]` is the probability that all particles exit mode j under
/// the requested model; `r_fb[j-1]` is the per-mode quantum/classical
/// full-bunching ratio (model-independent), `None` where the classical
/// probability vanishes.
#[derive(Clone, Debug, Serialize)]
pub struct BunchingReport<T> {
    pub model: StatisticsModel,
    pub p_bunch: T,
    #[serde(rename = "collision_free")]
    pub collision_free_mass: T,
    pub full_bunch: Vec<T>,
    pub r_fb: Vec<Option<T>>,
}

impl<T: Scalar> BunchingReport<T> {
    pub fn compute(
        u: &UnitaryMatrix<T>,
        input: &InputSpec,
        model: StatisticsModel,
    ) -> Result<Self> {
        let dist = output_distribution(u, input, model)?;
        let mut collision_free = T::zero();
        for (state, p) in dist.iter() {
            if state.is_collision_free() {
                collision_free += p;
            }
        }
        // Pauli exclusion makes every bunching state exactly zero for
        // fermions, so the bunching probability is an exact zero rather
        // than the 1-ulp residue of 1 − Σ.
        let p_bunch = if model == StatisticsModel::Fermion {
            T::zero()
        } else {
            T::one() - collision_free
        };
        let m = u.dim();
        let mut full_bunch = Vec::with_capacity(m);
        let mut r_fb = Vec::with_capacity(m);
        for j in 1..=m {
            full_bunch.push(full_bunching_probability(&dist, j)?);
            r_fb.push(full_bunching_ratio(u, input, j)?);
        }
        Ok(Self {
            model,
            p_bunch,
            collision_free_mass: collision_free,
            full_bunch,
            r_fb,
        })
    }

    /// First defined per-mode ratio, if any.
    pub fn ratio(&self) -> Option<T> {
        self.r_fb.iter().copied().flatten().next()
    }
}

/// Convex mixture of bunching probabilities: with probability `w` the
/// source is fully indistinguishable, otherwise it behaves as `base`.
pub fn mixture_bunching_probability<T: Scalar>(
    u: &UnitaryMatrix<T>,
    input: &InputSpec,
    w: T,
    base: StatisticsModel,
) -> Result<T> {
    if w < T::zero() || w > T::one() {
        return Err(Error::Domain(format!("weight {w} outside [0, 1]")));
    }
    let p_boson = bunching_probability(&output_distribution(u, input, StatisticsModel::Boson)?)?;
    let p_base = bunching_probability(&output_distribution(u, input, base)?)?;
    Ok(w * p_boson + (T::one() - w) * p_base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{preset_unitary, Preset};
    use crate::haar::haar_sample;
    use crate::model::output_distribution;
    use crate::rng::Seed;

    fn tritter() -> UnitaryMatrix<f64> {
        preset_unitary::<f64>(&Preset::QftTritter).unwrap()
    }

    fn coupler() -> UnitaryMatrix<f64> {
        preset_unitary::<f64>(&Preset::BalancedCoupler).unwrap()
    }

    #[test]
    fn hong_ou_mandel_bunching() {
        let u = coupler();
        let input = InputSpec::indistinguishable(2, &[1, 2]).unwrap();
        let boson = output_distribution(&u, &input, StatisticsModel::Boson).unwrap();
        assert!((bunching_probability(&boson).unwrap() - 1.0).abs() < 1e-12);
        let classical = output_distribution(&u, &input, StatisticsModel::Classical).unwrap();
        assert!((bunching_probability(&classical).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tritter_two_photon_bunching() {
        let u = tritter();
        let input = InputSpec::indistinguishable(3, &[1, 2]).unwrap();
        let boson = output_distribution(&u, &input, StatisticsModel::Boson).unwrap();
        assert!((bunching_probability(&boson).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let classical = output_distribution(&u, &input, StatisticsModel::Classical).unwrap();
        assert!((bunching_probability(&classical).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tritter_three_classical_bunching() {
        let u = tritter();
        let input = InputSpec::indistinguishable(3, &[1, 2, 3]).unwrap();
        let classical = output_distribution(&u, &input, StatisticsModel::Classical).unwrap();
        // 1 − 3!/3³ = 7/9.
        assert!((bunching_probability(&classical).unwrap() - 7.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn tritter_full_bunching_values() {
        let u = tritter();
        let input = InputSpec::indistinguishable(3, &[1, 2, 3]).unwrap();
        let boson = output_distribution(&u, &input, StatisticsModel::Boson).unwrap();
        let classical = output_distribution(&u, &input, StatisticsModel::Classical).unwrap();
        for j in 1..=3 {
            assert!((full_bunching_probability(&boson, j).unwrap() - 2.0 / 9.0).abs() < 1e-12);
            assert!(
                (full_bunching_probability(&classical, j).unwrap() - 1.0 / 27.0).abs() < 1e-12
            );
        }
    }

    #[test]
    fn full_bunching_single_particle() {
        let u = haar_sample::<f64>(3, Seed::new(8)).unwrap();
        let input = InputSpec::indistinguishable(3, &[2]).unwrap();
        let dist = output_distribution(&u, &input, StatisticsModel::Boson).unwrap();
        for j in 1..=3 {
            let q = full_bunching_probability(&dist, j).unwrap();
            assert!((q - u.get(j - 1, 1).norm_sqr()).abs() < 1e-14);
        }
    }

    #[test]
    fn ratio_is_two_for_two_distinct_inputs() {
        let u = haar_sample::<f64>(5, Seed::new(9)).unwrap();
        let input = InputSpec::indistinguishable(5, &[2, 4]).unwrap();
        for j in 1..=5 {
            let r = full_bunching_ratio(&u, &input, j).unwrap().unwrap();
            assert!((r - 2.0).abs() < 2.0 * 1e-9, "mode {j}: {r}");
        }
    }

    #[test]
    fn ratio_is_six_for_three_distinct_inputs() {
        let u = haar_sample::<f64>(4, Seed::new(10)).unwrap();
        let input = InputSpec::indistinguishable(4, &[1, 2, 4]).unwrap();
        for j in 1..=4 {
            let r = full_bunching_ratio(&u, &input, j).unwrap().unwrap();
            assert!((r / 6.0 - 1.0).abs() < 1e-9, "mode {j}: {r}");
        }
    }

    #[test]
    fn ratio_with_doubled_input_mode() {
        // g = (2,1): n!/∏gₖ! = 3!/2! = 3.
        let u = haar_sample::<f64>(4, Seed::new(11)).unwrap();
        let input = InputSpec::indistinguishable(4, &[1, 1, 2]).unwrap();
        assert_eq!(expected_full_bunching_ratio::<f64>(&input), 3.0);
        for j in 1..=4 {
            let r = full_bunching_ratio(&u, &input, j).unwrap().unwrap();
            assert!((r / 3.0 - 1.0).abs() < 1e-9, "mode {j}: {r}");
        }
    }

    #[test]
    fn ratio_undefined_where_classical_vanishes() {
        // A full-transmission coupler leaves U₁₂ = U₂₁ = 0, so routing both
        // photons of input (1,2) into one mode is classically impossible.
        let u = crate::circuit::build_unitary::<f64>(&crate::circuit::CircuitSpec::new(
            2,
            vec![crate::circuit::CircuitElement::Coupler { a: 1, b: 2, t: 1.0 }],
        ))
        .unwrap();
        let input = InputSpec::indistinguishable(2, &[1, 2]).unwrap();
        assert_eq!(full_bunching_ratio(&u, &input, 1).unwrap(), None);
        assert_eq!(full_bunching_ratio(&u, &input, 2).unwrap(), None);
    }

    #[test]
    fn hom_invert_cases() {
        assert!((hom_invert(0.0_f64, 0.25).unwrap() - 1.0).abs() < 1e-15);
        assert!((hom_invert(1.0_f64, 0.5).unwrap() - 0.5).abs() < 1e-15);
        // Balanced-coupler round trip: p_c = 0.5, p_q = 1 ⇒ t = 0.
        let t = (1.0_f64 - 1.0) / (1.0 - 0.5);
        assert!((hom_invert(t, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(hom_invert(-0.1_f64, 0.5).is_err());
        assert!(hom_invert(3.0_f64, 0.0).is_err());
        assert!(hom_invert(0.5_f64, 1.5).is_err());
    }

    #[test]
    fn mixture_ratio_predictions() {
        assert!((predicted_ratio_mixture(3, 1.0_f64).unwrap() - 6.0).abs() < 1e-15);
        let w = 0.63_f64 * 0.63;
        let r = predicted_ratio_mixture(3, w).unwrap();
        assert!((r - 3.5876).abs() < 1e-10, "{r}");
        assert!((predicted_ratio_mixture(2, 0.95_f64).unwrap() - 1.95).abs() < 1e-12);
        assert!(predicted_ratio_mixture(1, 0.5_f64).is_err());
        assert!(predicted_ratio_mixture(3, 1.2_f64).is_err());
    }

    #[test]
    fn report_consistency() {
        let u = tritter();
        let input = InputSpec::indistinguishable(3, &[1, 2]).unwrap();
        let report = BunchingReport::compute(&u, &input, StatisticsModel::Boson).unwrap();
        assert!((report.p_bunch - (1.0 - report.collision_free_mass)).abs() < 1e-12);
        let sum: f64 = report.full_bunch.iter().sum();
        assert!(sum <= report.p_bunch + 1e-12);
        // For n = 2 every bunching event is a full-bunching event.
        assert!((sum - report.p_bunch).abs() < 1e-12);
        assert!((report.ratio().unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn fermion_report_is_exactly_zero() {
        let u = haar_sample::<f64>(5, Seed::new(12)).unwrap();
        let input = InputSpec::indistinguishable(5, &[1, 4]).unwrap();
        let report = BunchingReport::compute(&u, &input, StatisticsModel::Fermion).unwrap();
        assert_eq!(report.p_bunch, 0.0);
        for q in &report.full_bunch {
            assert_eq!(*q, 0.0);
        }
        assert!((report.collision_free_mass - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unnormalized_distribution_rejected() {
        let dist = OutputDistribution::from_raw_parts(
            2,
            1,
            StatisticsModel::Boson,
            vec![0.4, 0.4],
        );
        assert!(matches!(
            bunching_probability(&dist),
            Err(Error::Validation(_))
        ));
    }
}
