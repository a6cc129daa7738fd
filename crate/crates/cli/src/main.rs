//! Command-line front end: builds interferometers, evaluates output
//! distributions and bunching observables, runs Haar ensembles, and
//! executes the self-verification sweep.
//!
//! Exit codes: 0 success, 1 validation/resource/computation error, 2 usage
//! error, 3 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bunching::io;
use bunching::verify::run_verification;
use bunching::{
    birthday_formula, build_unitary, haar_ensemble_scan, haar_sample, hom_invert,
    output_distribution, predicted_ratio_mixture, preset_unitary, BunchingReport, Error,
    InputSpec, Preset, Seed, StatisticsModel, Unitary64,
};

#[derive(Parser)]
#[command(
    name = "bunching",
    version,
    about = "Simulate multi-particle bunching in linear interferometers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    #[value(name = "balanced_coupler", alias = "balanced-coupler")]
    BalancedCoupler,
    #[value(name = "qft_tritter", alias = "qft-tritter")]
    QftTritter,
    #[value(name = "brickwall")]
    Brickwall,
    #[value(name = "random_phase_network", alias = "random-phase-network")]
    RandomPhaseNetwork,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Boson,
    Classical,
    Fermion,
    Mixed,
}

impl From<ModelArg> for StatisticsModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Boson => StatisticsModel::Boson,
            ModelArg::Classical => StatisticsModel::Classical,
            ModelArg::Fermion => StatisticsModel::Fermion,
            ModelArg::Mixed => StatisticsModel::Mixed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Haar-uniform unitary and write it as JSON.
    Haar {
        /// Number of modes m.
        #[arg(long)]
        modes: usize,
        /// Master seed (deterministic output).
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a preset layout or a circuit file into a unitary.
    Build {
        /// Stock layout to compile.
        #[arg(long, conflicts_with = "circuit")]
        preset: Option<PresetArg>,
        /// Circuit JSON to compile instead of a preset.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Modes (brickwall/random-phase-network presets).
        #[arg(long)]
        modes: Option<usize>,
        /// Coupler layers (brickwall/random-phase-network presets).
        #[arg(long)]
        layers: Option<usize>,
        /// Coupler bar-probability (brickwall preset; default 0.5).
        #[arg(long)]
        transmissivity: Option<f64>,
        /// Seed for static phase disorder; omit for all-zero phases.
        #[arg(long)]
        phase_seed: Option<u64>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact output distribution over all occupation states (colex CSV).
    Distribution {
        /// Unitary JSON file.
        #[arg(long)]
        unitary: PathBuf,
        /// Input modes, 1-based, e.g. "1,2,3".
        #[arg(long)]
        input: String,
        /// Species labels aligned with --input, e.g. "a,a,b".
        #[arg(long)]
        species: Option<String>,
        #[arg(long)]
        model: ModelArg,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bunching observables; prints p_b(quantum), p_b(classical), r_fb.
    Bunching {
        /// Unitary JSON file.
        #[arg(long)]
        unitary: PathBuf,
        /// Input modes, 1-based, e.g. "1,2".
        #[arg(long)]
        input: String,
        /// Species labels aligned with --input (mixed model).
        #[arg(long)]
        species: Option<String>,
        #[arg(long)]
        model: ModelArg,
        /// Write the full per-mode report JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Haar-average bunching probability (closed form).
    Birthday {
        /// Number of particles.
        #[arg(long)]
        n: usize,
        /// Number of modes.
        #[arg(long)]
        m: usize,
    },
    /// Monte Carlo scan over Haar-random unitaries.
    Ensemble {
        /// Number of particles (must match --input).
        #[arg(long)]
        n: usize,
        /// Number of modes.
        #[arg(long)]
        m: usize,
        /// Input modes, 1-based.
        #[arg(long)]
        input: String,
        /// Species labels aligned with --input (mixed model).
        #[arg(long)]
        species: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        model: ModelArg,
        /// Per-sample CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON output path.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Full-bunching ratio of a partially indistinguishable source:
    /// w·n! + (1−w)·(n−1)!.
    PredictRatio {
        #[arg(long)]
        n: usize,
        /// Weight of the fully indistinguishable component, in [0, 1].
        #[arg(long)]
        w: f64,
    },
    /// Recover p_b for indistinguishable particles from the coincidence
    /// ratio t and the distinguishable-particle p_b.
    HomInvert {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        pc: f64,
    },
    /// Run the self-verification sweeps; nonzero exit on any violation.
    Verify {
        /// Seed of the verification sweep.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn parse_modes(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::Validation(format!("invalid mode index '{}'", tok.trim())))
        })
        .collect()
}

fn parse_input(m: usize, input: &str, species: Option<&str>) -> Result<InputSpec, Error> {
    let modes = parse_modes(input)?;
    match species {
        None => InputSpec::indistinguishable(m, &modes),
        Some(text) => {
            let labels: Vec<&str> = text.split(',').map(str::trim).collect();
            if labels.len() != modes.len() {
                return Err(Error::Validation(format!(
                    "{} species labels for {} particles",
                    labels.len(),
                    modes.len()
                )));
            }
            InputSpec::new(m, modes.into_iter().zip(labels).collect())
        }
    }
}

fn emit_unitary(u: &Unitary64, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => io::save_unitary(path, u),
        None => {
            println!("{}", io::unitary_to_json(u)?);
            Ok(())
        }
    }
}

fn format_ratio(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v}"),
        None => "undefined".into(),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Haar { modes, seed, out } => {
            let u = haar_sample::<f64>(modes, Seed::new(seed))?;
            emit_unitary(&u, out.as_ref())?;
        }
        Command::Build {
            preset,
            circuit,
            modes,
            layers,
            transmissivity,
            phase_seed,
            out,
        } => {
            let u = match (preset, circuit) {
                (Some(p), None) => {
                    let need_layout = |name: &str| -> Result<(usize, usize), Error> {
                        match (modes, layers) {
                            (Some(m), Some(l)) => Ok((m, l)),
                            _ => Err(Error::Validation(format!(
                                "preset '{name}' requires --modes and --layers"
                            ))),
                        }
                    };
                    let preset = match p {
                        PresetArg::BalancedCoupler => Preset::BalancedCoupler,
                        PresetArg::QftTritter => Preset::QftTritter,
                        PresetArg::Brickwall => {
                            let (m, l) = need_layout("brickwall")?;
                            Preset::Brickwall {
                                m,
                                layers: l,
                                transmissivity: transmissivity.unwrap_or(0.5),
                                phases: match phase_seed {
                                    Some(s) => bunching::PhaseSource::Seeded(Seed::new(s)),
                                    None => bunching::PhaseSource::Zero,
                                },
                            }
                        }
                        PresetArg::RandomPhaseNetwork => {
                            let (m, l) = need_layout("random-phase-network")?;
                            Preset::RandomPhaseNetwork {
                                m,
                                layers: l,
                                seed: Seed::new(phase_seed.ok_or_else(|| {
                                    Error::Validation(
                                        "preset 'random-phase-network' requires --phase-seed"
                                            .into(),
                                    )
                                })?),
                            }
                        }
                    };
                    preset_unitary::<f64>(&preset)?
                }
                (None, Some(path)) => build_unitary::<f64>(&io::load_circuit(&path)?)?,
                _ => {
                    return Err(Error::Validation(
                        "build needs exactly one of --preset or --circuit".into(),
                    ))
                }
            };
            emit_unitary(&u, out.as_ref())?;
        }
        Command::Distribution {
            unitary,
            input,
            species,
            model,
            out,
        } => {
            let u = io::load_unitary(&unitary)?;
            let input = parse_input(u.dim(), &input, species.as_deref())?;
            let dist = output_distribution(&u, &input, model.into())?;
            match out {
                Some(path) => io::save_distribution_csv(&path, &dist)?,
                None => {
                    let mut buf = Vec::new();
                    io::write_distribution_csv(&mut buf, &dist)?;
                    print!("{}", String::from_utf8_lossy(&buf));
                }
            }
        }
        Command::Bunching {
            unitary,
            input,
            species,
            model,
            out,
        } => {
            let u = io::load_unitary(&unitary)?;
            let input = parse_input(u.dim(), &input, species.as_deref())?;
            let report = BunchingReport::compute(&u, &input, model.into())?;
            // One line per run, shaped like the two-photon data tables:
            // quantum p_b, classical p_b, full-bunching ratio.
            let quantum = BunchingReport::compute(&u, &input, StatisticsModel::Boson)?;
            let classical = BunchingReport::compute(&u, &input, StatisticsModel::Classical)?;
            println!(
                "p_b(quantum)={} p_b(classical)={} r_fb={}",
                quantum.p_bunch,
                classical.p_bunch,
                format_ratio(report.ratio())
            );
            if let Some(path) = out {
                io::save_report(&path, &report)?;
            }
        }
        Command::Birthday { n, m } => {
            println!("{}", birthday_formula::<f64>(n, m)?);
        }
        Command::Ensemble {
            n,
            m,
            input,
            species,
            samples,
            seed,
            model,
            out,
            summary,
        } => {
            let input = parse_input(m, &input, species.as_deref())?;
            let run = haar_ensemble_scan::<f64>(n, m, &input, samples, Seed::new(seed), model.into())?;
            println!(
                "mean={} std={} band=[{},{}]",
                run.report.mean, run.report.std, run.report.band_low, run.report.band_high
            );
            if let Some(path) = out {
                io::save_ensemble_csv(&path, &run.values)?;
            }
            if let Some(path) = summary {
                io::save_ensemble_summary(&path, &run.report)?;
            }
        }
        Command::PredictRatio { n, w } => {
            println!("{}", predicted_ratio_mixture(n, w)?);
        }
        Command::HomInvert { t, pc } => {
            println!("{}", hom_invert(t, pc)?);
        }
        Command::Verify { seed } => {
            let checks = run_verification(Seed::new(seed));
            let mut failed = false;
            for check in &checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!("{status} {}: {}", check.name, check.detail);
                failed |= !check.passed;
            }
            if failed {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
