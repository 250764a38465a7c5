//! Drives the library over the parameter grids of an experiment config.

use std::path::Path;

use anyhow::{anyhow, Result};
use lacuna::concentration::{lemma_main_report, ls_constant, nazarov_constant, theorem_split_check};
use lacuna::sequences::{build_greedy, strong_zygmund_profile, Sequence, TailSchedule};
use lacuna::sets::ThickSet;
use lacuna::synthesis::{unit_block_len, BandFunction, FrequencySupport, Grid, SpectralProfile};
use lacuna::uniqueness::carleman_denjoy_partial;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Ensemble, Experiment, Resolved};
use crate::manifest::{unix_now_ms, OutputSet, RunManifest};
use crate::table::{col, emit_plot_data, PlotSpec, Table};

/// Independent generator for one trial of an ensemble.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Coefficients uniform in the square `[-1, 1]²`.
pub fn random_blocks(rng: &mut ChaCha8Rng, blocks: usize, len: usize) -> Vec<Vec<Complex64>> {
    (0..blocks)
        .map(|_| {
            (0..len)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

/// Computes every output of the experiment in memory.
pub fn execute(resolved: &Resolved) -> Result<OutputSet> {
    let cfg = &resolved.config;
    let seq = || resolved.sequence.as_ref().ok_or_else(|| anyhow!("missing sequence"));
    let set = || resolved.set.as_ref().ok_or_else(|| anyhow!("missing set"));
    let grid = || resolved.grid.as_ref().ok_or_else(|| anyhow!("missing grid"));
    let ensemble = || cfg.ensemble.ok_or_else(|| anyhow!("missing ensemble"));

    let mut out = OutputSet::default();
    match &cfg.experiment {
        Experiment::NazarovSweep { measures, offset } => {
            let table = nazarov_sweep(seq()?, measures, *offset)?;
            out.add(
                "plot_lambda_min_vs_measure.dat",
                emit_plot_data(&table, &PlotSpec::new("measure", &["lambda_min"]).sorted())?,
            );
            out.add("results.csv", table.to_csv()?);
        }
        Experiment::GreedyGrowth { count, level } => {
            let table = greedy_growth(*count, *level)?;
            out.add(
                "plot_greedy_growth.dat",
                emit_plot_data(&table, &PlotSpec::new("n", &["lambda_next", "bound"]))?,
            );
            out.add("results.csv", table.to_csv()?);
        }
        Experiment::LsSweep { gammas, delta } => {
            let table = ls_sweep(resolved.sequence.as_ref(), grid()?, gammas, *delta)?;
            out.add(
                "plot_constant_vs_gamma.dat",
                emit_plot_data(&table, &PlotSpec::new("gamma", &["C"]).sorted())?,
            );
            out.add("results.csv", table.to_csv()?);
        }
        Experiment::TheoremEnsemble { level, tail_start } => {
            let (trials, summary) = theorem_ensemble(seq()?, set()?, grid()?, ensemble()?, *level, *tail_start)?;
            out.add(
                "plot_ratio_per_trial.dat",
                emit_plot_data(&trials, &PlotSpec::new("trial", &["ratio"]))?,
            );
            out.add("results.csv", trials.to_csv()?);
            out.add("summary.csv", summary.to_csv()?);
        }
        Experiment::LemmaEnsemble { level, gamma, c2 } => {
            let (rows, summary) = lemma_ensemble(seq()?, set()?, grid()?, ensemble()?, *level, *gamma, *c2)?;
            out.add("results.csv", rows.to_csv()?);
            out.add("summary.csv", summary.to_csv()?);
        }
        Experiment::CarlemanDenjoy { count, t_max } => {
            let (sums, proxy) = carleman_denjoy(*count, *t_max)?;
            out.add(
                "plot_partial_sums.dat",
                emit_plot_data(&sums, &PlotSpec::new("n", &["S"]))?,
            );
            out.add(
                "plot_integral_proxy.dat",
                emit_plot_data(&proxy, &PlotSpec::new("T", &["integral"]))?,
            );
            out.add("results.csv", sums.to_csv()?);
            out.add("integral_proxy.csv", proxy.to_csv()?);
        }
        Experiment::ZygmundProfile { levels, tail_starts } => {
            let table = zygmund_profile(seq()?, levels, tail_starts)?;
            out.add(
                "plot_count_vs_level.dat",
                emit_plot_data(&table, &PlotSpec::new("level", &["count"]))?,
            );
            out.add("results.csv", table.to_csv()?);
        }
    }
    Ok(out)
}

/// Validates, computes, then writes results and the manifest. Nothing is
/// written when validation or any computation fails.
pub fn run(config_text: &str, base: &Path, output_override: Option<&Path>) -> Result<RunManifest> {
    let started = unix_now_ms();
    let config = crate::config::ExperimentConfig::parse(config_text)?;
    let resolved = config.resolve(base)?;
    let outputs = execute(&resolved)?;
    let dir = match output_override {
        Some(dir) => dir.to_path_buf(),
        None => base.join(&resolved.config.output_dir),
    };
    outputs.commit(&dir, resolved.config.experiment.kind(), config_text.as_bytes(), started)
}

pub fn nazarov_sweep(seq: &Sequence, measures: &[f64], offset: f64) -> Result<Table> {
    let mut table = Table::new(vec![
        col("measure", "1"),
        col("lambda_min", "1"),
        col("C", "1"),
        col("residual", "1"),
        col("dimension", "count"),
    ]);
    for &m in measures {
        let set = ThickSet::periodic_pattern(1.0, offset, m)?;
        let est = nazarov_constant(&set, seq)?;
        table.push(vec![
            m.into(),
            est.lambda_min.into(),
            est.constant_c.into(),
            est.residual.into(),
            est.dimension.into(),
        ]);
    }
    Ok(table)
}

pub fn greedy_growth(count: usize, level: usize) -> Result<Table> {
    let g = build_greedy(count, &TailSchedule::fixed_level(level)?)?;
    let mut table = Table::new(vec![
        col("n", "count"),
        col("lambda_next", "1"),
        col("bound", "1"),
        col("within_bound", "bool"),
    ]);
    for s in &g.steps {
        table.push(vec![
            s.n.into(),
            (s.value as i64).into(),
            (s.bound as i64).into(),
            usize::from(s.within_bound()).into(),
        ]);
    }
    Ok(table)
}

pub fn ls_sweep(profile: Option<&Sequence>, grid: &Grid, gammas: &[f64], delta: f64) -> Result<Table> {
    let support = match profile {
        Some(seq) => FrequencySupport::Profile(SpectralProfile::unit(seq.clone())?),
        None => FrequencySupport::unit(),
    };
    let mut table = Table::new(vec![
        col("gamma", "1"),
        col("C", "1"),
        col("lambda_min", "1"),
        col("dimension", "count"),
    ]);
    for &gamma in gammas {
        let set = ThickSet::periodic_pattern(delta, 0.0, gamma)?;
        let est = ls_constant(&set, &support, grid)?;
        table.push(vec![
            gamma.into(),
            est.constant_c.into(),
            est.lambda_min.into(),
            est.dimension.into(),
        ]);
    }
    Ok(table)
}

pub fn theorem_ensemble(
    seq: &Sequence,
    set: &ThickSet,
    grid: &Grid,
    ensemble: Ensemble,
    level: usize,
    tail_start: usize,
) -> Result<(Table, Table)> {
    let schedule = TailSchedule::constant(tail_start)?;
    let len = unit_block_len(grid);
    let checks = (0..ensemble.trials)
        .into_par_iter()
        .map(|trial| {
            let blocks = random_blocks(&mut trial_rng(ensemble.seed, trial), seq.len(), len);
            theorem_split_check(&blocks, seq, &schedule, level, set, grid)
        })
        .collect::<lacuna::Result<Vec<_>>>()?;

    let mut tone = vec![vec![Complex64::new(0.0, 0.0); len]; seq.len()];
    tone[0][0] = Complex64::new(1.0, 0.0);
    let control = theorem_split_check(&tone, seq, &schedule, level, set, grid)?;

    let mut trials = Table::new(vec![
        col("trial", "index"),
        col("ratio", "1"),
        col("ratio_sq", "1"),
        col("ratio_head", "1"),
        col("ratio_tail", "1"),
        col("norm_head", "L2"),
        col("norm_tail", "L2"),
    ]);
    for (i, c) in checks.iter().enumerate() {
        trials.push(vec![
            i.into(),
            c.ratio.into(),
            (c.ratio * c.ratio).into(),
            c.ratio_head.into(),
            c.ratio_tail.into(),
            c.norm_head.into(),
            c.norm_tail.into(),
        ]);
    }
    let (argmin, min) =
        checks.iter().map(|c| c.ratio).enumerate().fold(
            (0, f64::INFINITY),
            |best, (i, r)| if r < best.1 { (i, r) } else { best },
        );
    let mut summary = Table::new(vec![
        col("trials", "count"),
        col("min_ratio", "1"),
        col("argmin_trial", "index"),
        col("control_ratio_sq", "1"),
        col("set_density", "1"),
    ]);
    summary.push(vec![
        ensemble.trials.into(),
        min.into(),
        argmin.into(),
        (control.ratio * control.ratio).into(),
        (set.measure() / set.window_len()).into(),
    ]);
    Ok((trials, summary))
}

pub fn lemma_ensemble(
    seq: &Sequence,
    set: &ThickSet,
    grid: &Grid,
    ensemble: Ensemble,
    level: usize,
    gamma: f64,
    c2: f64,
) -> Result<(Table, Table)> {
    let width = 1.0 / level as f64;
    let count = (grid.period() * level as f64).floor() as usize;
    let intervals: Vec<(f64, f64)> = (0..count)
        .map(|k| (k as f64 * width, (k + 1) as f64 * width))
        .filter(|&(a, b)| set.measure_in(a, b) >= gamma * width - lacuna::sets::MEASURE_TOLERANCE)
        .collect();
    if intervals.is_empty() {
        return Err(anyhow!("no interval of length 1/{level} meets E in at least γ/L"));
    }
    let len = unit_block_len(grid);
    let per_trial = (0..ensemble.trials)
        .into_par_iter()
        .map(|trial| {
            let blocks = random_blocks(&mut trial_rng(ensemble.seed, trial), seq.len(), len);
            let functions = blocks
                .into_iter()
                .map(|b| {
                    let bins = b.into_iter().enumerate().map(|(j, c)| (j as i64, c));
                    BandFunction::from_bins(*grid, bins, FrequencySupport::unit())
                })
                .collect::<lacuna::Result<Vec<_>>>()?;
            intervals
                .iter()
                .map(|&i| lemma_main_report(&functions, seq, set, i, level, gamma).map(|t| (i.0, t)))
                .collect::<lacuna::Result<Vec<_>>>()
        })
        .collect::<lacuna::Result<Vec<_>>>()?;

    let mut rows = Table::new(vec![
        col("trial", "index"),
        col("interval_start", "1"),
        col("lhs", "L2^2"),
        col("term_density", "L2^2"),
        col("term_sobolev", "H1^2"),
        col("margin", "1"),
    ]);
    let mut min_margin = f64::INFINITY;
    for (trial, reports) in per_trial.iter().enumerate() {
        for (start, t) in reports {
            let margin = t.margin(c2, level);
            if let Some(m) = margin {
                min_margin = min_margin.min(m);
            }
            rows.push(vec![
                trial.into(),
                (*start).into(),
                t.lhs.into(),
                t.term_density.into(),
                t.term_sobolev.into(),
                margin.into(),
            ]);
        }
    }
    let mut summary = Table::new(vec![col("rows", "count"), col("min_margin", "1")]);
    summary.push(vec![rows.rows.len().into(), min_margin.into()]);
    Ok((rows, summary))
}

pub fn carleman_denjoy(count: usize, t_max: f64) -> Result<(Table, Table)> {
    let report = carleman_denjoy_partial(count, t_max)?;
    let mut sums = Table::new(vec![
        col("n", "count"),
        col("log_M", "1"),
        col("mu", "1"),
        col("S", "1"),
    ]);
    for n in 1..=count {
        sums.push(vec![
            n.into(),
            report.log_m_values[n].into(),
            report.mu_values[n - 1].into(),
            report.partial_sums[n - 1].into(),
        ]);
    }
    let mut proxy = Table::new(vec![col("T", "1"), col("integral", "1")]);
    for &(t, v) in &report.integral_proxy {
        proxy.push(vec![t.into(), v.into()]);
    }
    Ok((sums, proxy))
}

pub fn zygmund_profile(seq: &Sequence, levels: &[usize], tail_starts: &[usize]) -> Result<Table> {
    let schedule = if tail_starts.is_empty() {
        TailSchedule::constant(1)?
    } else {
        TailSchedule::new(tail_starts.to_vec(), None)?
    };
    let reports = strong_zygmund_profile(seq, &schedule, levels)?;
    let mut table = Table::new(vec![
        col("level", "1"),
        col("tail_start", "position"),
        col("count", "pairs"),
        col("witness_k", "position"),
        col("witness_l", "position"),
    ]);
    for r in reports {
        let (k, l) = r.witness.first().map_or((0, 0), |&(k, l)| (k + 1, l + 1));
        table.push(vec![
            (r.parameter as usize).into(),
            r.tail_start.into(),
            (r.constant as usize).into(),
            k.into(),
            l.into(),
        ]);
    }
    Ok(table)
}
