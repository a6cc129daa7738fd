//! Haar Monte Carlo ensembles and the average-bunching law.
//!
//! For uniformly drawn m-mode interferometers fed with n particles in
//! distinct modes, the average bosonic bunching probability has the closed
//! form `p_b(n, m) = 1 − ∏_{a=0}^{n−1} (1 − a/m)/(1 + a/m)` — decreasing in
//! m, the bosonic analogue of the birthday paradox. The scan here estimates
//! the same quantity by sampling unitaries, so the two routes check each
//! other.
//!
//! Sample k of a scan uses the sub-seed `seed.child(k)`; samples are
//! independent work items and the reduction runs in index order after all
//! samples complete, so reports are identical across runs and thread
//! counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::bunching::bunching_probability;
use crate::error::{Error, Result};
use crate::haar::haar_sample;
use crate::model::{output_distribution, StatisticsModel};
use crate::rng::Seed;
use crate::scalar::{count, real, Scalar};
use crate::states::InputSpec;

/// Number of uniform histogram bins on [0, 1].
pub const HISTOGRAM_BINS: usize = 50;

/// Haar-average bunching probability for n particles in m modes
/// (n distinct input modes assumed), evaluated exactly in the working
/// precision.
pub fn birthday_formula<T: Scalar>(n: usize, m: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::Domain("particle number must be at least 1".into()));
    }
    if n > m {
        return Err(Error::Domain(format!(
            "the average-bunching formula assumes n <= m (got n={n}, m={m})"
        )));
    }
    let m_t = count::<T>(m);
    let mut product = T::one();
    for a in 0..n {
        let a_t = count::<T>(a);
        product = product * (T::one() - a_t / m_t) / (T::one() + a_t / m_t);
    }
    Ok(T::one() - product)
}

/// Histogram of per-sample bunching probabilities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram<T> {
    pub bin_edges: Vec<T>,
    pub counts: Vec<u64>,
}

impl<T: Scalar> Histogram<T> {
    fn from_values(values: &[T]) -> Self {
        let bins = HISTOGRAM_BINS;
        let mut counts = vec![0u64; bins];
        let width = T::one() / count::<T>(bins);
        for &v in values {
            let idx = (v / width).to_usize().unwrap_or(0).min(bins - 1);
            counts[idx] += 1;
        }
        let bin_edges = (0..=bins).map(|k| count::<T>(k) * width).collect();
        Self { bin_edges, counts }
    }
}

/// Summary statistics of a Haar ensemble scan.
///
/// `band_low`/`band_high` are mean ∓ 1.5·std exactly (no clamping; clamp to
/// [0, 1] at presentation time if needed). The standard deviation is the
/// unbiased (N−1) estimator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleReport<T> {
    pub n: usize,
    pub m: usize,
    pub samples: usize,
    pub model: StatisticsModel,
    pub mean: T,
    pub std: T,
    pub band_low: T,
    pub band_high: T,
    pub histogram: Histogram<T>,
}

/// A completed scan: the report plus the per-sample bunching probabilities
/// in sample order.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleRun<T> {
    pub report: EnsembleReport<T>,
    pub values: Vec<T>,
}

/// Sample `samples` Haar unitaries and collect the bunching probability of
/// the fixed input under the given model.
pub fn haar_ensemble_scan<T>(
    n: usize,
    m: usize,
    input: &InputSpec,
    samples: usize,
    seed: Seed,
    model: StatisticsModel,
) -> Result<EnsembleRun<T>>
where
    T: Scalar,
    rand_distr::StandardNormal: rand_distr::Distribution<T>,
{
    if samples < 2 {
        return Err(Error::Domain(
            "an ensemble needs at least 2 samples for a standard deviation".into(),
        ));
    }
    if input.modes() != m {
        return Err(Error::Validation(format!(
            "input declares {} modes but the scan asked for m={m}",
            input.modes()
        )));
    }
    if input.particle_count() != n {
        return Err(Error::Validation(format!(
            "input holds {} particles but the scan asked for n={n}",
            input.particle_count()
        )));
    }

    let values: Vec<T> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let u = haar_sample::<T>(m, seed.child(k))?;
            let dist = output_distribution(&u, input, model)?;
            if model == StatisticsModel::Fermion {
                // Exclusion principle: exactly zero, not a rounding residue.
                Ok(T::zero())
            } else {
                bunching_probability(&dist)
            }
        })
        .collect::<Result<Vec<T>>>()?;

    Ok(EnsembleRun {
        report: summarize(n, m, model, &values),
        values,
    })
}

fn summarize<T: Scalar>(n: usize, m: usize, model: StatisticsModel, values: &[T]) -> EnsembleReport<T> {
    let samples = values.len();
    let total = values.iter().copied().fold(T::zero(), |a, b| a + b);
    let mean = total / count::<T>(samples);
    let mut ss = T::zero();
    for &v in values {
        let d = v - mean;
        ss += d * d;
    }
    let std = (ss / count::<T>(samples - 1)).sqrt();
    let half_band = real::<T>(1.5) * std;
    EnsembleReport {
        n,
        m,
        samples,
        model,
        mean,
        std,
        band_low: mean - half_band,
        band_high: mean + half_band,
        histogram: Histogram::from_values(values),
    }
}

/// Mean bunching probability for a partially distinguishable source modeled
/// as: fully indistinguishable with probability `w`, fully distinguishable
/// otherwise. One Haar ensemble is drawn and reused for every weight, so
/// the sweep interpolates exactly linearly between the classical (w = 0)
/// and bosonic (w = 1) ensemble means.
pub fn distinguishability_sweep<T>(
    input: &InputSpec,
    samples: usize,
    seed: Seed,
    weights: &[T],
) -> Result<Vec<T>>
where
    T: Scalar,
    rand_distr::StandardNormal: rand_distr::Distribution<T>,
{
    if samples < 2 {
        return Err(Error::Domain("a sweep needs at least 2 samples".into()));
    }
    for &w in weights {
        if w < T::zero() || w > T::one() {
            return Err(Error::Domain(format!("weight {w} outside [0, 1]")));
        }
    }
    let m = input.modes();

    let pairs: Vec<(T, T)> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let u = haar_sample::<T>(m, seed.child(k))?;
            let boson = bunching_probability(&output_distribution(
                &u,
                input,
                StatisticsModel::Boson,
            )?)?;
            let classical = bunching_probability(&output_distribution(
                &u,
                input,
                StatisticsModel::Classical,
            )?)?;
            Ok((boson, classical))
        })
        .collect::<Result<Vec<_>>>()?;

    let inv = count::<T>(pairs.len()).recip();
    Ok(weights
        .iter()
        .map(|&w| {
            pairs
                .iter()
                .map(|&(q, c)| w * q + (T::one() - w) * c)
                .fold(T::zero(), |a, b| a + b)
                * inv
        })
        .collect())
}
