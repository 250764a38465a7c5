//! Experiment configuration files.
//!
//! A config is a TOML document with an explicit `version`, one
//! `[experiment]` table tagged by `kind`, and optional `[sequence]`, `[set]`,
//! `[grid]` and `[ensemble]` tables. Unknown keys are rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use lacuna::sequences::{build_counterexample, build_geometric, build_greedy, Sequence, TailSchedule};
use lacuna::sets::ThickSet;
use lacuna::synthesis::Grid;
use serde::{Deserialize, Serialize};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub output_dir: PathBuf,
    pub experiment: Experiment,
    pub sequence: Option<SequenceSource>,
    pub set: Option<SetSource>,
    pub grid: Option<GridConfig>,
    pub ensemble: Option<Ensemble>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    /// `λ_min` of the Gram matrix on `E = [offset, offset + |E|]` for each `|E|`.
    NazarovSweep {
        measures: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    /// Greedy construction with a constant level, against the cubic bound.
    GreedyGrowth { count: usize, level: usize },
    /// Logvinenko–Sereda constant of periodic sets `[0, γΔ) + Δℤ`.
    LsSweep {
        gammas: Vec<f64>,
        #[serde(default = "one")]
        delta: f64,
    },
    /// Random `F = Σ f_n e^{2πiλ_n x}` and the share of `‖F‖` carried by `E`.
    TheoremEnsemble {
        level: usize,
        #[serde(default = "one_usize")]
        tail_start: usize,
    },
    /// The three local integrals on every interval of length `1/L` that
    /// meets `E` in at least `γ/L`.
    LemmaEnsemble { level: usize, gamma: f64, c2: f64 },
    /// `log M_n`, `μ_n` and partial sums for `n ≤ count`.
    CarlemanDenjoy { count: usize, t_max: f64 },
    /// Strong Zygmund counts for each level.
    ZygmundProfile {
        levels: Vec<usize>,
        /// `M(L)` for `L = 1, 2, …`; defaults to the whole sequence.
        #[serde(default)]
        tail_starts: Vec<usize>,
    },
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSource {
    Geometric {
        start: u64,
        ratio: u64,
        count: usize,
    },
    Greedy {
        count: usize,
        level: usize,
    },
    Counterexample {
        k: usize,
    },
    Explicit {
        values: Vec<f64>,
    },
    /// One term per line.
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSource {
    /// `[offset, offset + fraction·period) + period·ℤ`.
    Periodic {
        period: f64,
        #[serde(default)]
        offset: f64,
        fraction: f64,
    },
    Full {
        window: (f64, f64),
        periodic: bool,
    },
    Intervals {
        intervals: Vec<(f64, f64)>,
        window: (f64, f64),
        periodic: bool,
    },
    /// JSON serialisation of a set.
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub period: f64,
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ensemble {
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

/// Every problem found in a config, not just the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration ({} problem(s))", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {}: {}", v.field, v.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

impl ValidationError {
    fn single(field: &str, message: impl Into<String>) -> Self {
        ValidationError {
            violations: vec![Violation {
                field: field.into(),
                message: message.into(),
            }],
        }
    }
}

/// A config with every source materialised.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub sequence: Option<Sequence>,
    pub set: Option<ThickSet>,
    pub grid: Option<Grid>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ValidationError> {
        toml::from_str(text).map_err(|e| ValidationError::single("config", e.message()))
    }

    /// Builds the sources and checks them against the experiment. Relative
    /// paths are taken from `base`.
    pub fn resolve(self, base: &Path) -> Result<Resolved, ValidationError> {
        let mut issues = Issues::default();
        if self.version != CONFIG_VERSION {
            issues.push("version", format!("expected {CONFIG_VERSION}, found {}", self.version));
        }

        let sequence = self
            .sequence
            .as_ref()
            .and_then(|s| issues.take("sequence", s.build(base)));
        let set = self.set.as_ref().and_then(|s| issues.take("set", s.build(base)));
        let grid = self
            .grid
            .and_then(|g| issues.take("grid", Grid::new(g.period, g.samples).map_err(|e| e.to_string())));

        let needs = Needs::of(&self.experiment);
        for (needed, present, field) in [
            (needs.sequence, self.sequence.is_some(), "sequence"),
            (needs.set, self.set.is_some(), "set"),
            (needs.grid, self.grid.is_some(), "grid"),
            (needs.ensemble, self.ensemble.is_some(), "ensemble"),
        ] {
            if needed && !present {
                issues.push(field, format!("required by experiment `{}`", self.experiment.kind()));
            }
        }
        if let Some(e) = &self.ensemble {
            if e.trials == 0 {
                issues.push("ensemble.trials", "must be at least 1");
            }
        }

        self.experiment
            .validate(sequence.as_ref(), set.as_ref(), grid.as_ref(), &mut issues);

        if issues.0.is_empty() {
            Ok(Resolved {
                config: self,
                sequence,
                set,
                grid,
            })
        } else {
            Err(ValidationError { violations: issues.0 })
        }
    }
}

#[derive(Default)]
struct Issues(Vec<Violation>);

impl Issues {
    fn push(&mut self, field: &str, message: impl Into<String>) {
        self.0.push(Violation {
            field: field.into(),
            message: message.into(),
        });
    }

    fn take<T>(&mut self, field: &str, res: Result<T, String>) -> Option<T> {
        res.map_err(|e| self.push(field, e)).ok()
    }
}

struct Needs {
    sequence: bool,
    set: bool,
    grid: bool,
    ensemble: bool,
}

impl Needs {
    fn of(experiment: &Experiment) -> Needs {
        let (sequence, set, grid, ensemble) = match experiment {
            Experiment::NazarovSweep { .. } => (true, false, false, false),
            Experiment::GreedyGrowth { .. } => (false, false, false, false),
            Experiment::LsSweep { .. } => (false, false, true, false),
            Experiment::TheoremEnsemble { .. } => (true, true, true, true),
            Experiment::LemmaEnsemble { .. } => (true, true, true, true),
            Experiment::CarlemanDenjoy { .. } => (false, false, false, false),
            Experiment::ZygmundProfile { .. } => (true, false, false, false),
        };
        Needs {
            sequence,
            set,
            grid,
            ensemble,
        }
    }
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::NazarovSweep { .. } => "nazarov_sweep",
            Experiment::GreedyGrowth { .. } => "greedy_growth",
            Experiment::LsSweep { .. } => "ls_sweep",
            Experiment::TheoremEnsemble { .. } => "theorem_ensemble",
            Experiment::LemmaEnsemble { .. } => "lemma_ensemble",
            Experiment::CarlemanDenjoy { .. } => "carleman_denjoy",
            Experiment::ZygmundProfile { .. } => "zygmund_profile",
        }
    }

    fn validate(&self, sequence: Option<&Sequence>, set: Option<&ThickSet>, grid: Option<&Grid>, issues: &mut Issues) {
        match self {
            Experiment::NazarovSweep { measures, offset } => {
                if measures.is_empty() {
                    issues.push("experiment.measures", "must not be empty");
                }
                for (i, m) in measures.iter().enumerate() {
                    if !(*m > 0.0 && *m <= 1.0) {
                        issues.push(&format!("experiment.measures[{i}]"), format!("{m} is not in (0, 1]"));
                    }
                }
                if !(0.0..1.0).contains(offset) {
                    issues.push("experiment.offset", format!("{offset} is not in [0, 1)"));
                }
            }
            Experiment::GreedyGrowth { count, level } => {
                if *count == 0 {
                    issues.push("experiment.count", "must be at least 1");
                }
                if *level == 0 {
                    issues.push("experiment.level", "must be at least 1");
                }
            }
            Experiment::LsSweep { gammas, delta } => {
                if gammas.is_empty() {
                    issues.push("experiment.gammas", "must not be empty");
                }
                for (i, g) in gammas.iter().enumerate() {
                    if !(*g > 0.0 && *g <= 1.0) {
                        issues.push(&format!("experiment.gammas[{i}]"), format!("{g} is not in (0, 1]"));
                    }
                }
                if !(*delta > 0.0) {
                    issues.push("experiment.delta", "must be positive");
                }
                if let Some(grid) = grid {
                    check_spectrum(grid, sequence.map(|s| s.to_f64()).unwrap_or_else(|| vec![0.0]), issues);
                }
            }
            Experiment::TheoremEnsemble { level, tail_start } => {
                if *level == 0 {
                    issues.push("experiment.level", "must be at least 1");
                }
                if *tail_start == 0 {
                    issues.push("experiment.tail_start", "positions are 1-based");
                }
                if let (Some(seq), Some(grid)) = (sequence, grid) {
                    if seq.to_f64().iter().any(|&l| l <= 0.0) {
                        issues.push("sequence", "frequencies must be positive");
                    }
                    check_spectrum(grid, seq.to_f64(), issues);
                }
                if let Some(set) = set {
                    check_set_measure(set, issues);
                }
            }
            Experiment::LemmaEnsemble { level, gamma, c2 } => {
                if *level == 0 {
                    issues.push("experiment.level", "must be at least 1");
                }
                if !(*gamma > 0.0 && *gamma <= 1.0) {
                    issues.push("experiment.gamma", format!("{gamma} is not in (0, 1]"));
                }
                if !(*c2 >= 0.0) {
                    issues.push("experiment.c2", "must be non-negative");
                }
                if let (Some(seq), Some(grid)) = (sequence, grid) {
                    check_spectrum(grid, seq.to_f64(), issues);
                }
                if let Some(set) = set {
                    check_set_measure(set, issues);
                }
            }
            Experiment::CarlemanDenjoy { count, t_max } => {
                if *count == 0 {
                    issues.push("experiment.count", "must be at least 1");
                }
                if !(*t_max > 1.0) {
                    issues.push("experiment.t_max", "must exceed 1");
                }
            }
            Experiment::ZygmundProfile { levels, tail_starts } => {
                if levels.is_empty() {
                    issues.push("experiment.levels", "must not be empty");
                }
                if levels.contains(&0) {
                    issues.push("experiment.levels", "levels start at 1");
                }
                if !tail_starts.is_empty() {
                    if let Err(e) = TailSchedule::new(tail_starts.clone(), None) {
                        issues.push("experiment.tail_starts", e.to_string());
                    }
                }
            }
        }
    }
}

/// Every `f_n e^{2πiλ_n x}` with spectrum in `[λ_n, λ_n + 1]` must be
/// resolvable on the grid.
fn check_spectrum(grid: &Grid, lambdas: Vec<f64>, issues: &mut Issues) {
    for (n, &lambda) in lambdas.iter().enumerate() {
        let checks = [grid.bin_of(lambda).map(|_| ()), grid.check_nyquist(lambda + 1.0)];
        if let Some(e) = checks.into_iter().find_map(|c| c.err()) {
            issues.push("grid", format!("λ_{} = {lambda}: {e}", n + 1));
            return;
        }
    }
}

fn check_set_measure(set: &ThickSet, issues: &mut Issues) {
    if set.measure() <= 0.0 {
        issues.push("set", "has zero measure");
    }
}

impl SequenceSource {
    pub fn build(&self, base: &Path) -> Result<Sequence, String> {
        let seq = match self {
            SequenceSource::Geometric { start, ratio, count } => build_geometric(*start, *ratio, *count),
            SequenceSource::Greedy { count, level } => TailSchedule::fixed_level(*level)
                .and_then(|s| build_greedy(*count, &s))
                .map(|g| g.sequence),
            SequenceSource::Counterexample { k } => build_counterexample(*k),
            SequenceSource::Explicit { values } => Sequence::from_reals(values.clone()),
            SequenceSource::File { path } => {
                let text = std::fs::read_to_string(base.join(path)).map_err(|e| format!("{}: {e}", path.display()))?;
                Sequence::parse_text(&text)
            }
        };
        seq.map_err(|e| e.to_string())
    }
}

impl SetSource {
    pub fn build(&self, base: &Path) -> Result<ThickSet, String> {
        let set = match self {
            SetSource::Periodic {
                period,
                offset,
                fraction,
            } => ThickSet::periodic_pattern(*period, *offset, *fraction),
            SetSource::Full { window, periodic } => ThickSet::full(*window, *periodic),
            SetSource::Intervals {
                intervals,
                window,
                periodic,
            } => ThickSet::new(intervals.clone(), *window, *periodic),
            SetSource::File { path } => {
                let text = std::fs::read_to_string(base.join(path)).map_err(|e| format!("{}: {e}", path.display()))?;
                return serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()));
            }
        };
        set.map_err(|e| e.to_string())
    }
}
