//! Compilation of integrated-interferometer layouts into unitaries.
//!
//! A circuit is an ordered list of elements applied in propagation order:
//! list position 1 acts first, so the compiled matrix is
//! `element_N · … · element_1`.
//!
//! Conventions:
//! * A directional coupler on adjacent modes (a, a+1) with transmissivity T
//!   embeds the 2×2 block `[[√T, i√(1−T)], [i√(1−T), √T]]`; T is the
//!   same-mode (bar) probability. The relative phase of the cross term is a
//!   convention — the observables computed in this crate (moduli of
//!   permanents and determinants) do not depend on it.
//! * A phase shifter multiplies one mode by `e^{iφ}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};
use crate::rng::Seed;
use crate::scalar::{real, Scalar};

/// One optical element. Mode indices are 1-based; `a`/`b` must be adjacent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CircuitElement {
    /// Directional coupler on modes (a, b) with bar-probability `t`.
    Coupler { a: usize, b: usize, t: f64 },
    /// Phase shifter `e^{iφ}` on one mode.
    Phase { mode: usize, phi: f64 },
}

/// An m-mode layout: elements listed in propagation order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub m: usize,
    pub elements: Vec<CircuitElement>,
}

impl CircuitSpec {
    pub fn new(m: usize, elements: Vec<CircuitElement>) -> Self {
        Self { m, elements }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Validation("circuit must have at least one mode".into()));
        }
        for (idx, el) in self.elements.iter().enumerate() {
            match *el {
                CircuitElement::Coupler { a, b, t } => {
                    if a == 0 || b > self.m || b != a + 1 {
                        return Err(Error::Validation(format!(
                            "element {idx}: coupler ({a}, {b}) must act on adjacent modes within [1, {}]",
                            self.m
                        )));
                    }
                    if !(0.0..=1.0).contains(&t) {
                        return Err(Error::Validation(format!(
                            "element {idx}: transmissivity {t} outside [0, 1]"
                        )));
                    }
                }
                CircuitElement::Phase { mode, phi } => {
                    if mode == 0 || mode > self.m {
                        return Err(Error::Validation(format!(
                            "element {idx}: phase shifter mode {mode} outside [1, {}]",
                            self.m
                        )));
                    }
                    if !phi.is_finite() {
                        return Err(Error::Validation(format!(
                            "element {idx}: phase must be finite"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Concatenate two layouts (self first, then `later`).
    pub fn then(mut self, later: &CircuitSpec) -> Self {
        self.elements.extend(later.elements.iter().cloned());
        self
    }
}

/// Compile a circuit into its unitary, validated at the construction
/// tolerance.
pub fn build_unitary<T: Scalar>(spec: &CircuitSpec) -> Result<UnitaryMatrix<T>> {
    spec.validate()?;
    let m = spec.m;
    let mut u = ComplexMatrix::<T>::identity(m);
    for el in &spec.elements {
        // u ← element · u, applied column-by-column on the two touched rows.
        match *el {
            CircuitElement::Coupler { a, b, t } => {
                let bar = real::<T>(t).sqrt();
                let cross = (T::one() - real::<T>(t)).sqrt();
                let bar = Complex::new(bar, T::zero());
                let cross = Complex::new(T::zero(), cross);
                let (ra, rb) = (a - 1, b - 1);
                for j in 0..m {
                    let top = u.get(ra, j);
                    let bottom = u.get(rb, j);
                    u.set(ra, j, bar * top + cross * bottom);
                    u.set(rb, j, cross * top + bar * bottom);
                }
            }
            CircuitElement::Phase { mode, phi } => {
                let factor = Complex::from_polar(T::one(), real::<T>(phi));
                let r = mode - 1;
                for j in 0..m {
                    let v = u.get(r, j) * factor;
                    u.set(r, j, v);
                }
            }
        }
    }
    UnitaryMatrix::new(u)
}

/// How a layered layout fills its phase shifters.
#[derive(Clone, Debug, PartialEq)]
pub enum PhaseSource {
    /// All phases zero (no shifters emitted).
    Zero,
    /// Static disorder: one uniform draw in [0, 2π) per (layer, mode),
    /// layer-major.
    Seeded(Seed),
}

/// Stock layouts.
#[derive(Clone, Debug, PartialEq)]
pub enum Preset {
    /// Two-mode symmetric directional coupler (T = 0.5).
    BalancedCoupler,
    /// Ideal balanced three-mode splitter: the 3×3 discrete-Fourier matrix
    /// U_{jk} = ω^{(j−1)(k−1)}/√3 with ω = e^{2πi/3}.
    QftTritter,
    /// m-mode brick-wall of couplers: odd layers couple (1,2),(3,4),…, even
    /// layers (2,3),(4,5),…, all at the given transmissivity, with phases
    /// from `phases` ahead of each layer.
    Brickwall {
        m: usize,
        layers: usize,
        transmissivity: f64,
        phases: PhaseSource,
    },
    /// Brick-wall of symmetric couplers with seeded static phase disorder.
    RandomPhaseNetwork { m: usize, layers: usize, seed: Seed },
}

/// A preset compiles either to a layout or directly to a matrix.
#[derive(Clone, Debug)]
pub enum CompiledPreset<T> {
    Circuit(CircuitSpec),
    Matrix(UnitaryMatrix<T>),
}

/// Realize a preset.
pub fn make_preset<T: Scalar>(preset: &Preset) -> Result<CompiledPreset<T>> {
    match preset {
        Preset::BalancedCoupler => Ok(CompiledPreset::Circuit(CircuitSpec::new(
            2,
            vec![CircuitElement::Coupler { a: 1, b: 2, t: 0.5 }],
        ))),
        Preset::QftTritter => {
            let norm = real::<T>(3.0).sqrt().recip();
            let omega = Complex::from_polar(T::one(), real::<T>(2.0) * T::PI() / real::<T>(3.0));
            let mat = ComplexMatrix::from_fn(3, 3, |i, j| omega.powu((i * j) as u32) * norm);
            Ok(CompiledPreset::Matrix(UnitaryMatrix::new(mat)?))
        }
        Preset::Brickwall {
            m,
            layers,
            transmissivity,
            phases,
        } => Ok(CompiledPreset::Circuit(brickwall_spec(
            *m,
            *layers,
            *transmissivity,
            phases,
        )?)),
        Preset::RandomPhaseNetwork { m, layers, seed } => Ok(CompiledPreset::Circuit(
            brickwall_spec(*m, *layers, 0.5, &PhaseSource::Seeded(*seed))?,
        )),
    }
}

/// Realize a preset all the way to its unitary.
pub fn preset_unitary<T: Scalar>(preset: &Preset) -> Result<UnitaryMatrix<T>> {
    match make_preset::<T>(preset)? {
        CompiledPreset::Circuit(spec) => build_unitary(&spec),
        CompiledPreset::Matrix(u) => Ok(u),
    }
}

fn brickwall_spec(
    m: usize,
    layers: usize,
    transmissivity: f64,
    phases: &PhaseSource,
) -> Result<CircuitSpec> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "a brick-wall layout needs at least 2 modes, got {m}"
        )));
    }
    if layers == 0 {
        return Err(Error::Domain("a brick-wall layout needs at least 1 layer".into()));
    }
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(Error::Domain(format!(
            "transmissivity {transmissivity} outside [0, 1]"
        )));
    }
    let mut rng = match phases {
        PhaseSource::Zero => None,
        PhaseSource::Seeded(seed) => Some(seed.rng()),
    };
    let mut elements = Vec::new();
    for layer in 1..=layers {
        if let Some(rng) = rng.as_mut() {
            for mode in 1..=m {
                let phi: f64 = rand::Rng::random_range(rng, 0.0..std::f64::consts::TAU);
                elements.push(CircuitElement::Phase { mode, phi });
            }
        }
        // Odd layers start at mode 1, even layers at mode 2; couplers that
        // would stick out past mode m are dropped.
        let start = if layer % 2 == 1 { 1 } else { 2 };
        let mut a = start;
        while a + 1 <= m {
            elements.push(CircuitElement::Coupler {
                a,
                b: a + 1,
                t: transmissivity,
            });
            a += 2;
        }
    }
    Ok(CircuitSpec::new(m, elements))
}
