//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lacuna::concentration::{gram_matrix, lemma_main_report, ls_constant, nazarov_constant, theorem_split_check};
use lacuna::sequences::{
    build_counterexample, build_geometric, build_greedy, check_hadamard, strong_zygmund_profile, zygmund_constant,
    Sequence, TailSchedule,
};
use lacuna::sets::{partition_good_bad, thickness, ThickSet};
use lacuna::synthesis::{
    spectral_support, synthesize, unit_block_len, BandFunction, FrequencySupport, Grid, SpectralProfile,
};
use lacuna::uniqueness::{carleman_denjoy_partial, omega_diagnostics, separation_condition, BumpFunction};
use serde_json::json;

use crate::experiments::{random_blocks, trial_rng};

#[derive(Debug, Parser)]
#[command(
    name = "lacuna",
    version,
    about = "Lacunary sequences, thick sets and spectral concentration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or check lacunary sequences.
    #[command(subcommand)]
    Seq(SeqCommand),
    /// Thickness and good/bad partitions of sets.
    #[command(subcommand)]
    Set(SetCommand),
    /// Synthesis of band-limited sums.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Gram matrices and concentration constants.
    #[command(subcommand)]
    Conc(ConcCommand),
    /// The quasi-analytic weight construction.
    #[command(subcommand)]
    Uniq(UniqCommand),
    /// Run an experiment config.
    Run {
        config: PathBuf,
        /// Write here instead of the config's `output_dir`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Builder {
    Greedy,
    Counterexample,
    Geometric,
}

#[derive(Debug, Subcommand)]
pub enum SeqCommand {
    /// Print a sequence, one term per line.
    Build {
        #[arg(long, value_enum)]
        kind: Builder,
        /// Number of terms (greedy, geometric) or K (counterexample).
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 1)]
        start: u64,
        #[arg(long, default_value_t = 2)]
        ratio: u64,
    },
    /// Lacunarity reports as JSON.
    Check {
        #[command(flatten)]
        seq: SeqInput,
        #[arg(long)]
        hadamard: Option<f64>,
        #[arg(long)]
        zygmund: Option<f64>,
        /// Comma-separated levels for the strong profile.
        #[arg(long, value_delimiter = ',')]
        strong: Vec<usize>,
        /// `M(1), M(2), …`; the profile defaults to the whole sequence.
        #[arg(long, value_delimiter = ',')]
        tail_starts: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SetCommand {
    /// Exact thickness at scale Δ.
    Gamma {
        #[command(flatten)]
        set: SetInput,
        #[arg(long)]
        delta: f64,
    },
    /// Good/bad subintervals of every Δ-block.
    Partition {
        #[command(flatten)]
        set: SetInput,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        level: usize,
        /// Defaults to the exact thickness.
        #[arg(long)]
        gamma: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SynthCommand {
    /// Synthesise random blocks and report leakage and norms.
    Check {
        #[command(flatten)]
        seq: SeqInput,
        #[command(flatten)]
        grid: GridInput,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConcCommand {
    /// Print the Gram matrix as text.
    Gram {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        seq: SeqInput,
    },
    Nazarov {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        seq: SeqInput,
    },
    /// Concentration constant for spectrum in [0, 1], or in the unit
    /// profile of a sequence when one is given.
    Ls {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        grid: GridInput,
        #[arg(long, value_delimiter = ',')]
        profile: Vec<f64>,
    },
    Lemma {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        seq: SeqInput,
        #[command(flatten)]
        grid: GridInput,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        gamma: f64,
        /// Left end of the interval of length 1/L.
        #[arg(long, default_value_t = 0.0)]
        interval_start: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Theorem {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        seq: SeqInput,
        #[command(flatten)]
        grid: GridInput,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 1)]
        tail_start: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum UniqCommand {
    /// Separation of consecutive spectral intervals.
    Condition {
        #[command(flatten)]
        seq: SeqInput,
        #[arg(long)]
        count: Option<usize>,
    },
    Omega {
        #[command(flatten)]
        seq: SeqInput,
        #[arg(long)]
        t_max: f64,
    },
    /// Moments, their ratios and partial sums.
    Cd {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1e6)]
        t_max: f64,
        /// Include every value, not just the summary.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Debug, Args)]
pub struct SeqInput {
    /// Sequence file, one term per line.
    #[arg(long, conflicts_with = "values")]
    sequence: Option<PathBuf>,
    /// Comma-separated terms.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Vec<f64>,
}

impl SeqInput {
    fn load(&self) -> Result<Sequence> {
        if let Some(path) = &self.sequence {
            let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
            return Ok(Sequence::parse_text(&text)?);
        }
        if self.values.is_empty() {
            bail!(crate::config::ValidationError {
                violations: vec![crate::config::Violation {
                    field: "sequence".into(),
                    message: "give --sequence or --values".into(),
                }],
            });
        }
        if self.values.iter().all(|v| v.fract() == 0.0 && v.abs() < 9e15) {
            let ints: Vec<i64> = self.values.iter().map(|&v| v as i64).collect();
            return Ok(Sequence::from_i64(&ints)?);
        }
        Ok(Sequence::from_reals(self.values.clone())?)
    }
}

#[derive(Debug, Args)]
pub struct SetInput {
    /// JSON file describing the set.
    #[arg(long, conflicts_with_all = ["periodic", "full"])]
    set: Option<PathBuf>,
    /// `PERIOD,OFFSET,FRACTION` for `[o, o + fP) + Pℤ`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    periodic: Vec<f64>,
    /// `A,B`: the whole periodic window `[A, B]`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    full: Vec<f64>,
}

impl SetInput {
    fn load(&self) -> Result<ThickSet> {
        if let Some(path) = &self.set {
            let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
            return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
        }
        match (&self.periodic[..], &self.full[..]) {
            (&[p, o, f], []) => Ok(ThickSet::periodic_pattern(p, o, f)?),
            ([], &[a, b]) => Ok(ThickSet::full((a, b), true)?),
            _ => bail!(crate::config::ValidationError {
                violations: vec![crate::config::Violation {
                    field: "set".into(),
                    message: "give --set, --periodic PERIOD,OFFSET,FRACTION or --full A,B".into(),
                }],
            }),
        }
    }
}

#[derive(Debug, Args)]
pub struct GridInput {
    /// Grid period T.
    #[arg(long)]
    period: f64,
    /// Samples S per period.
    #[arg(long)]
    samples: usize,
}

impl GridInput {
    fn load(&self) -> Result<Grid> {
        Ok(Grid::new(self.period, self.samples)?)
    }
}

fn print_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Executes one command, writing its result to `out`.
pub fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Seq(c) => seq(c, out),
        Command::Set(c) => set(c, out),
        Command::Synth(c) => synth(c, out),
        Command::Conc(c) => conc(c, out),
        Command::Uniq(c) => uniq(c, out),
        Command::Run { config, output } => {
            let text = std::fs::read_to_string(&config).with_context(|| config.display().to_string())?;
            let base = config.parent().unwrap_or(Path::new("."));
            let manifest = crate::run(&text, base, output.as_deref())?;
            print_json(out, &manifest)
        }
    }
}

fn seq(command: SeqCommand, out: &mut dyn Write) -> Result<()> {
    match command {
        SeqCommand::Build {
            kind,
            count,
            level,
            start,
            ratio,
        } => {
            let seq = match kind {
                Builder::Greedy => build_greedy(count, &TailSchedule::fixed_level(level)?)?.sequence,
                Builder::Counterexample => build_counterexample(count)?,
                Builder::Geometric => build_geometric(start, ratio, count)?,
            };
            out.write_all(seq.to_text().as_bytes())?;
            Ok(())
        }
        SeqCommand::Check {
            seq,
            hadamard,
            zygmund,
            strong,
            tail_starts,
        } => {
            let seq = seq.load()?;
            let mut reports = Vec::new();
            if let Some(q) = hadamard {
                reports.push(check_hadamard(&seq, q)?);
            }
            if let Some(l) = zygmund {
                reports.push(zygmund_constant(&seq, l)?);
            }
            if !strong.is_empty() {
                let schedule = if tail_starts.is_empty() {
                    TailSchedule::constant(1)?
                } else {
                    TailSchedule::new(tail_starts, None)?
                };
                reports.extend(strong_zygmund_profile(&seq, &schedule, &strong)?);
            }
            print_json(out, &reports)
        }
    }
}

fn set(command: SetCommand, out: &mut dyn Write) -> Result<()> {
    match command {
        SetCommand::Gamma { set, delta } => {
            let set = set.load()?;
            let gamma = thickness(&set, delta)?;
            print_json(
                out,
                &json!({ "delta": delta, "gamma": gamma, "measure": set.measure() }),
            )
        }
        SetCommand::Partition {
            set,
            delta,
            level,
            gamma,
        } => {
            let set = set.load()?;
            let gamma = match gamma {
                Some(g) => g,
                None => thickness(&set, delta)?,
            };
            let report = partition_good_bad(&set, delta, level, gamma)?;
            print_json(out, &json!({ "bound_holds": report.bound_holds(), "report": report }))
        }
    }
}

fn synth(command: SynthCommand, out: &mut dyn Write) -> Result<()> {
    let SynthCommand::Check { seq, grid, seed } = command;
    let seq = seq.load()?;
    let grid = grid.load()?;
    let blocks = random_blocks(&mut trial_rng(seed, 0), seq.len(), unit_block_len(&grid));
    let f = synthesize(&blocks, &seq, &grid)?;
    let support = spectral_support(&f, 0.0);
    let inside = support.iter().all(|&b| f.support().contains(grid.frequency(b)));
    let block_mass: f64 = blocks.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>() * grid.period();
    print_json(
        out,
        &json!({
            "terms": seq.len(),
            "leakage": f.leakage(),
            "support_bins": support.len(),
            "support_inside_profile": inside,
            "norm_sqr": f.norm_sqr(),
            "norm_sqr_samples": f.norm_sqr_samples(),
            "norm_sqr_blocks": block_mass,
        }),
    )
}

fn conc(command: ConcCommand, out: &mut dyn Write) -> Result<()> {
    match command {
        ConcCommand::Gram { set, seq } => {
            let form = gram_matrix(&set.load()?, &seq.load()?)?;
            out.write_all(form.to_text().as_bytes())?;
            Ok(())
        }
        ConcCommand::Nazarov { set, seq } => print_json(out, &nazarov_constant(&set.load()?, &seq.load()?)?),
        ConcCommand::Ls { set, grid, profile } => {
            let support = if profile.is_empty() {
                FrequencySupport::unit()
            } else {
                FrequencySupport::Profile(SpectralProfile::unit(Sequence::from_reals(profile)?)?)
            };
            print_json(out, &ls_constant(&set.load()?, &support, &grid.load()?)?)
        }
        ConcCommand::Lemma {
            set,
            seq,
            grid,
            level,
            gamma,
            interval_start,
            c2,
            seed,
        } => {
            let (set, seq, grid) = (set.load()?, seq.load()?, grid.load()?);
            let blocks = random_blocks(&mut trial_rng(seed, 0), seq.len(), unit_block_len(&grid));
            let functions = blocks
                .into_iter()
                .map(|b| {
                    let bins = b.into_iter().enumerate().map(|(j, c)| (j as i64, c));
                    BandFunction::from_bins(grid, bins, FrequencySupport::unit())
                })
                .collect::<lacuna::Result<Vec<_>>>()?;
            let interval = (interval_start, interval_start + 1.0 / level.max(1) as f64);
            let terms = lemma_main_report(&functions, &seq, &set, interval, level, gamma)?;
            print_json(out, &json!({ "terms": terms, "margin": terms.margin(c2, level) }))
        }
        ConcCommand::Theorem {
            set,
            seq,
            grid,
            level,
            tail_start,
            seed,
        } => {
            let (set, seq, grid) = (set.load()?, seq.load()?, grid.load()?);
            let blocks = random_blocks(&mut trial_rng(seed, 0), seq.len(), unit_block_len(&grid));
            let check = theorem_split_check(&blocks, &seq, &TailSchedule::constant(tail_start)?, level, &set, &grid)?;
            print_json(out, &check)
        }
    }
}

fn uniq(command: UniqCommand, out: &mut dyn Write) -> Result<()> {
    match command {
        UniqCommand::Condition { seq, count } => {
            let seq = seq.load()?;
            let report = separation_condition(&seq, count.unwrap_or(seq.len()))?;
            print_json(
                out,
                &json!({
                    "all_hold": report.all_hold(),
                    "first_failure": report.first_failure(),
                    "partial_sum": report.partial_sum,
                }),
            )
        }
        UniqCommand::Omega { seq, t_max } => print_json(
            out,
            &omega_diagnostics(&seq.load()?, &BumpFunction::smoothstep(), t_max)?,
        ),
        UniqCommand::Cd { count, t_max, full } => {
            let report = carleman_denjoy_partial(count, t_max)?;
            if full {
                return print_json(out, &report);
            }
            print_json(
                out,
                &json!({
                    "count": count,
                    "log_convex": report.log_convex(1e-12),
                    "m_non_decreasing": report.m_non_decreasing(),
                    "mu_non_increasing": report.mu_non_increasing(1e-12),
                    "partial_sums_increasing": report.partial_sums_increasing(),
                    "partial_sum": report.partial_sum(count),
                    "integral_proxy": report.integral_proxy.last(),
                }),
            )
        }
    }
}
