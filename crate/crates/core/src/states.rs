//! Occupation states, their enumeration, and multi-particle input specs.
//!
//! An occupation state lists how many particles sit in each of the m modes.
//! Enumeration is colexicographic: states are ordered by their reversed
//! occupation vector, so `(n,0,...,0)` comes first and `(0,...,0,n)` last.
//! The order is fixed so that CSV output is diffable across runs and
//! implementations.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};

/// Maximum number of occupation states an enumeration may produce.
pub const STATE_COUNT_GUARD: u128 = 10_000_000;

/// Output (or input) occupations h₁..h_m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OccupationState(Vec<usize>);

impl OccupationState {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self(occupations)
    }

    /// State with all n particles in mode `j` (1-based) of m modes.
    pub fn single_mode(m: usize, j: usize, n: usize) -> Result<Self> {
        if j == 0 || j > m {
            return Err(Error::Validation(format!(
                "mode index {j} outside [1, {m}]"
            )));
        }
        let mut occ = vec![0; m];
        occ[j - 1] = n;
        Ok(Self(occ))
    }

    /// Number of modes m.
    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// Number of particles n = Σ hⱼ.
    pub fn particles(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Occupancy of mode `j` (1-based).
    pub fn occupancy(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    /// True iff every mode holds at most one particle.
    pub fn is_collision_free(&self) -> bool {
        self.0.iter().all(|&h| h <= 1)
    }

    /// ∏ⱼ hⱼ! as a scalar.
    pub fn factorial_product<T: Scalar>(&self) -> T {
        self.0
            .iter()
            .map(|&h| factorial::<T>(h))
            .fold(T::one(), |a, b| a * b)
    }

    /// Modes listed once per particle, nondecreasing (mode j appears hⱼ
    /// times). 1-based.
    pub fn expanded_modes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.particles());
        for (idx, &h) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat(idx + 1).take(h));
        }
        out
    }

    /// Position of this state in the colex enumeration of all states with
    /// the same (n, m).
    pub fn colex_rank(&self) -> usize {
        // States preceding `self`: those whose trailing block (modes j..m)
        // holds strictly fewer particles, summed mode by mode.
        let m = self.modes();
        let mut rank: u128 = 0;
        let mut remaining = self.particles();
        for j in (1..m).rev() {
            let h = self.0[j];
            // All states matching self on modes j+2..m with fewer than h
            // particles in mode j+1 and the rest in modes 1..=j.
            for v in 0..h {
                rank += state_count_unguarded(remaining - v, j);
            }
            remaining -= h;
        }
        rank as usize
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, h) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, ")")
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // Saturate on overflow; callers only compare against the guard.
        match acc.checked_mul(n - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

fn state_count_unguarded(n: usize, m: usize) -> u128 {
    if m == 0 {
        return if n == 0 { 1 } else { 0 };
    }
    binomial((n + m - 1) as u128, n as u128)
}

/// Number of occupation states of n particles in m modes, C(n+m−1, n).
pub fn output_state_count(n: usize, m: usize) -> u128 {
    state_count_unguarded(n, m)
}

fn check_state_guard(n: usize, m: usize) -> Result<u128> {
    let count = state_count_unguarded(n, m);
    if count > STATE_COUNT_GUARD {
        return Err(Error::ResourceGuard(format!(
            "enumerating {count} occupation states (n={n}, m={m}) exceeds the guard of {STATE_COUNT_GUARD}"
        )));
    }
    Ok(count)
}

/// Iterator over all occupation states of n particles in m modes in colex
/// order.
#[derive(Clone, Debug)]
pub struct OccupationIter {
    current: Option<Vec<usize>>,
}

impl OccupationIter {
    fn new(n: usize, m: usize) -> Self {
        if m == 0 {
            return Self { current: None };
        }
        let mut first = vec![0; m];
        first[0] = n;
        Self { current: Some(first) }
    }
}

impl Iterator for OccupationIter {
    type Item = OccupationState;

    fn next(&mut self) -> Option<Self::Item> {
        let state = self.current.take()?;
        let m = state.len();
        // Advance: move one particle from the first occupied mode to its
        // right neighbour, dumping the rest of that mode back into mode 1.
        let mut next = state.clone();
        match next.iter().position(|&h| h > 0) {
            Some(i) if i + 1 < m => {
                let v = next[i];
                next[i] = 0;
                next[0] = v - 1;
                next[i + 1] += 1;
                self.current = Some(next);
            }
            _ => self.current = None, // all particles in the last mode (or n = 0)
        }
        Some(OccupationState::new(state))
    }
}

/// All C(n+m−1, n) occupation states in colex order. Guarded at 10⁷ states.
pub fn enumerate_outputs(n: usize, m: usize) -> Result<Vec<OccupationState>> {
    if m == 0 {
        return Err(Error::Validation("mode count must be at least 1".into()));
    }
    let count = check_state_guard(n, m)?;
    let mut out = Vec::with_capacity(count as usize);
    out.extend(OccupationIter::new(n, m));
    Ok(out)
}

/// Iterator form of [`enumerate_outputs`] for callers that do not need the
/// list materialized.
pub fn output_states(n: usize, m: usize) -> Result<OccupationIter> {
    if m == 0 {
        return Err(Error::Validation("mode count must be at least 1".into()));
    }
    check_state_guard(n, m)?;
    Ok(OccupationIter::new(n, m))
}

/// One input particle: mode (1-based) plus a distinguishability species.
/// Particles of the same species interfere; different species combine
/// classically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Particle {
    pub mode: usize,
    pub species: String,
}

/// n particles entering an m-mode interferometer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    m: usize,
    particles: Vec<Particle>,
}

impl InputSpec {
    pub fn new<S: Into<String>>(m: usize, particles: Vec<(usize, S)>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::Validation("input must contain at least one particle".into()));
        }
        let particles: Vec<Particle> = particles
            .into_iter()
            .map(|(mode, species)| Particle {
                mode,
                species: species.into(),
            })
            .collect();
        for p in &particles {
            if p.mode == 0 || p.mode > m {
                return Err(Error::Validation(format!(
                    "input mode {} outside [1, {m}]",
                    p.mode
                )));
            }
        }
        Ok(Self { m, particles })
    }

    /// All particles of one species (mutually indistinguishable).
    pub fn indistinguishable(m: usize, modes: &[usize]) -> Result<Self> {
        Self::new(m, modes.iter().map(|&mode| (mode, "a")).collect())
    }

    /// One species per particle (fully distinguishable).
    pub fn distinguishable(m: usize, modes: &[usize]) -> Result<Self> {
        Self::new(
            m,
            modes
                .iter()
                .enumerate()
                .map(|(k, &mode)| (mode, format!("s{k}")))
                .collect(),
        )
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn particle_count(&self) -> usize {
        self.particles.len()
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    /// Input occupations g₁..g_m.
    pub fn occupations(&self) -> OccupationState {
        let mut g = vec![0; self.m];
        for p in &self.particles {
            g[p.mode - 1] += 1;
        }
        OccupationState::new(g)
    }

    /// Input modes listed once per particle in nondecreasing order (mode k
    /// appears gₖ times).
    pub fn sorted_modes(&self) -> Vec<usize> {
        self.occupations().expanded_modes()
    }

    /// Species groups in deterministic (label-sorted) order, each with its
    /// particles' modes.
    pub fn species_groups(&self) -> Vec<(String, Vec<usize>)> {
        let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
        for p in &self.particles {
            match groups.iter_mut().find(|(label, _)| *label == p.species) {
                Some((_, modes)) => modes.push(p.mode),
                None => groups.push((p.species.clone(), vec![p.mode])),
            }
        }
        groups.sort_by(|a, b| a.0.cmp(&b.0));
        groups
    }

    pub fn species_count(&self) -> usize {
        self.species_groups().len()
    }
}
