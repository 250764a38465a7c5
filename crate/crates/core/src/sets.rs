//! Thick sets modelled as finite unions of closed intervals.
//!
//! A set lives in a window `[w0, w1]`. A periodic set tiles the line with
//! period `w1 − w0`; a non-periodic set is only probed by intervals lying
//! inside its window. Measure comparisons use an absolute tolerance of
//! [`MEASURE_TOLERANCE`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MEASURE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawThickSet")]
pub struct ThickSet {
    intervals: Vec<(f64, f64)>,
    window: (f64, f64),
    periodic: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThickSet {
    intervals: Vec<(f64, f64)>,
    window: (f64, f64),
    periodic: bool,
}

impl TryFrom<RawThickSet> for ThickSet {
    type Error = Error;

    fn try_from(raw: RawThickSet) -> Result<Self> {
        ThickSet::new(raw.intervals, raw.window, raw.periodic)
    }
}

impl ThickSet {
    /// Validates and normalises: intervals are sorted, and touching or
    /// overlapping intervals are rejected.
    pub fn new(mut intervals: Vec<(f64, f64)>, window: (f64, f64), periodic: bool) -> Result<Self> {
        let (w0, w1) = window;
        if !(w0.is_finite() && w1.is_finite() && w0 < w1) {
            return Err(Error::Domain(format!("bad window [{w0}, {w1}]")));
        }
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && a <= b) {
                return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
            }
            if a < w0 || b > w1 {
                return Err(Error::Domain(format!(
                    "interval [{a}, {b}] leaves the window [{w0}, {w1}]"
                )));
            }
        }
        intervals.retain(|&(a, b)| b > a);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        if let Some(w) = intervals.windows(2).find(|w| w[1].0 <= w[0].1) {
            return Err(Error::Domain(format!(
                "intervals [{}, {}] and [{}, {}] are not disjoint",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
        Ok(ThickSet {
            intervals,
            window,
            periodic,
        })
    }

    /// The whole window.
    pub fn full(window: (f64, f64), periodic: bool) -> Result<Self> {
        Self::new(vec![window], window, periodic)
    }

    /// `∪_k [k·period + offset, k·period + offset + fraction·period]` over the
    /// window `[0, period]`, periodic. With `period = Δ` this set is exactly
    /// `(Δ, fraction)`-thick.
    pub fn periodic_pattern(period: f64, offset: f64, fraction: f64) -> Result<Self> {
        if !(period > 0.0) || !(0.0..=1.0).contains(&fraction) || !(0.0..1.0).contains(&offset) {
            return Err(Error::Domain(format!(
                "bad pattern: period {period}, offset {offset}, fraction {fraction}"
            )));
        }
        let a = offset * period;
        let b = a + fraction * period;
        let intervals = if b <= period {
            vec![(a, b)]
        } else {
            vec![(0.0, b - period), (a, period)]
        };
        Self::new(intervals, (0.0, period), true)
    }

    /// The same intervals, measured on the window with `periodic = true`.
    pub fn into_periodic(self) -> Self {
        ThickSet { periodic: true, ..self }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn window_len(&self) -> f64 {
        self.window.1 - self.window.0
    }

    /// `|E ∩ window|`.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// `|E ∩ [w0, x]|` for `x` in the window.
    fn cumulative_in_window(&self, x: f64) -> f64 {
        self.intervals.iter().map(|&(a, b)| (b.min(x) - a).max(0.0)).sum()
    }

    /// `|E ∩ [w0, x]|` extended to all `x` (additively across periods when
    /// periodic, clamped to the window otherwise).
    fn cumulative(&self, x: f64) -> f64 {
        let (w0, w1) = self.window;
        if self.periodic {
            let p = self.window_len();
            let k = ((x - w0) / p).floor();
            let r = x - k * p;
            k * self.measure() + self.cumulative_in_window(r.clamp(w0, w1))
        } else {
            self.cumulative_in_window(x.clamp(w0, w1))
        }
    }

    /// `|E ∩ [a, b]|`, tiling periodic sets.
    pub fn measure_in(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        (self.cumulative(b) - self.cumulative(a)).max(0.0)
    }

    /// The intervals of `E ∩ [a, b]`, tiling periodic sets and clipping
    /// otherwise.
    pub fn intervals_in(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        if b <= a {
            return out;
        }
        let clip = |lo: f64, hi: f64, out: &mut Vec<(f64, f64)>| {
            let (lo, hi) = (lo.max(a), hi.min(b));
            if hi > lo {
                out.push((lo, hi));
            }
        };
        if self.periodic {
            let p = self.window_len();
            let w0 = self.window.0;
            let first = ((a - w0) / p).floor() as i64;
            let last = ((b - w0) / p).ceil() as i64;
            for k in first..=last {
                let shift = k as f64 * p;
                for &(lo, hi) in &self.intervals {
                    clip(lo + shift, hi + shift, &mut out);
                }
            }
        } else {
            for &(lo, hi) in &self.intervals {
                clip(lo, hi, &mut out);
            }
        }
        merge_touching(out)
    }
}

fn merge_touching(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// `inf |E ∩ I| / Δ` over intervals `I` of length `Δ`.
///
/// `t ↦ |E ∩ [t, t+Δ]|` is piecewise linear with kinks where `t` or `t + Δ`
/// crosses an endpoint, so the infimum is attained at one of those offsets
/// (or at an end of the admissible range) and is computed exactly.
pub fn thickness(set: &ThickSet, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("Δ must be positive, got {delta}")));
    }
    let (w0, w1) = set.window;
    let len = set.window_len();
    if delta > len + MEASURE_TOLERANCE {
        return Err(Error::Domain(format!(
            "Δ = {delta} exceeds the {} length {len}",
            if set.periodic { "period" } else { "window" }
        )));
    }
    let (lo, hi) = if set.periodic { (w0, w1) } else { (w0, w1 - delta) };
    let mut offsets = vec![lo, hi.max(lo)];
    for &(a, b) in &set.intervals {
        for e in [a, b] {
            for t in [e, e - delta] {
                let t = if set.periodic { w0 + (t - w0).rem_euclid(len) } else { t };
                if (lo..=hi).contains(&t) {
                    offsets.push(t);
                }
            }
        }
    }
    let min = offsets
        .into_iter()
        .map(|t| set.measure_in(t, t + delta))
        .fold(f64::INFINITY, f64::min);
    Ok((min / delta).clamp(0.0, 1.0))
}

/// `C(γ) = (γ/2) / (1 − γ/2)`.
pub fn good_fraction_constant(gamma: f64) -> f64 {
    (gamma / 2.0) / (1.0 - gamma / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockPartition {
    /// Left end of `J_k = [kΔ, (k+1)Δ]`.
    pub start: f64,
    pub good: Vec<usize>,
    pub bad: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub delta: f64,
    pub level: usize,
    pub gamma: f64,
    /// `C(γ) · LΔ`.
    pub lower_bound: f64,
    pub blocks: Vec<BlockPartition>,
}

impl PartitionReport {
    pub fn subintervals_per_block(&self) -> usize {
        (self.level as f64 * self.delta).round() as usize
    }

    /// Every block has at least `C(γ)·LΔ` good subintervals.
    pub fn bound_holds(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.good.len() as f64 >= self.lower_bound - MEASURE_TOLERANCE)
    }

    /// `Ξ`: the union of all good subintervals, on the same window and
    /// periodicity as the source set.
    pub fn good_union(&self, source: &ThickSet) -> Result<ThickSet> {
        let h = 1.0 / self.level as f64;
        let intervals = self
            .blocks
            .iter()
            .flat_map(|b| {
                b.good
                    .iter()
                    .map(move |&j| (b.start + j as f64 * h, b.start + (j + 1) as f64 * h))
            })
            .collect();
        let merged = merge_touching(intervals);
        ThickSet::new(merged, source.window, source.periodic)
    }
}

/// Splits every block `J_k = [kΔ, (k+1)Δ]` inside the window into `LΔ`
/// subintervals of length `1/L`; subinterval `j` is good iff
/// `|I_k^j ∩ E| > (γ/2)/L` (ties count as bad).
pub fn partition_good_bad(set: &ThickSet, delta: f64, level: usize, gamma: f64) -> Result<PartitionReport> {
    if level == 0 || !(delta > 0.0) || !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain(format!(
            "need L >= 1, Δ > 0 and γ in (0, 1]; got L = {level}, Δ = {delta}, γ = {gamma}"
        )));
    }
    let per_block = level as f64 * delta;
    if (per_block - per_block.round()).abs() > 1e-9 || per_block.round() < 1.0 {
        return Err(Error::Domain(format!("LΔ = {per_block} is not a positive integer")));
    }
    let per_block = per_block.round() as usize;

    let measured = thickness(set, delta)?;
    if measured < gamma - MEASURE_TOLERANCE {
        return Err(Error::Precondition(format!(
            "set is only ({delta}, {measured})-thick, not ({delta}, {gamma})-thick"
        )));
    }

    let (w0, w1) = set.window;
    if set.periodic {
        let blocks = set.window_len() / delta;
        let aligned = (w0 / delta - (w0 / delta).round()).abs() < 1e-9;
        if (blocks - blocks.round()).abs() > 1e-9 || !aligned {
            return Err(Error::Domain(format!(
                "periodic window [{w0}, {w1}] does not split into whole blocks of length {delta}"
            )));
        }
    }
    let first = (w0 / delta - 1e-9).ceil() as i64;
    let last = (w1 / delta + 1e-9).floor() as i64;
    let h = 1.0 / level as f64;
    let threshold = gamma / 2.0 * h;

    let blocks = (first..last)
        .map(|k| {
            let start = k as f64 * delta;
            let (good, bad): (Vec<usize>, Vec<usize>) = (0..per_block).partition(|&j| {
                let a = start + j as f64 * h;
                set.measure_in(a, a + h) > threshold + MEASURE_TOLERANCE
            });
            BlockPartition { start, good, bad }
        })
        .collect();

    Ok(PartitionReport {
        delta,
        level,
        gamma,
        lower_bound: good_fraction_constant(gamma) * per_block as f64,
        blocks,
    })
}
