//! Lacunary sequences and their certificates.
//!
//! A [`Sequence`] is a finite, strictly increasing truncation of a frequency
//! sequence. Integer-valued sequences are stored exactly as big integers so
//! that difference counting stays exact even for `4^k`-sized terms; real
//! sequences are stored as `f64`.
//!
//! Term positions are 1-based in everything that takes a [`TailSchedule`]:
//! the tail for level `L` is `(λ_k)_{k ≥ M(L)}` with `k = 1` the first term.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Terms {
    Real(Vec<f64>),
    Integer(Vec<BigInt>),
}

/// Strictly increasing finite list of frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    terms: Terms,
}

impl Sequence {
    pub fn from_reals(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite term {v}")));
        }
        check_increasing(&values, |a, b| a.partial_cmp(b))?;
        Ok(Sequence {
            terms: Terms::Real(values),
        })
    }

    pub fn from_integers(values: Vec<BigInt>) -> Result<Self> {
        check_increasing(&values, |a, b| Some(a.cmp(b)))?;
        Ok(Sequence {
            terms: Terms::Integer(values),
        })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::from_integers(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn empty() -> Self {
        Sequence {
            terms: Terms::Integer(Vec::new()),
        }
    }

    pub fn len(&self) -> usize {
        match &self.terms {
            Terms::Real(v) => v.len(),
            Terms::Integer(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn integer_valued(&self) -> bool {
        matches!(self.terms, Terms::Integer(_))
    }

    /// Exact integer terms, if the sequence is integer valued.
    pub fn integers(&self) -> Option<&[BigInt]> {
        match &self.terms {
            Terms::Integer(v) => Some(v),
            Terms::Real(_) => None,
        }
    }

    pub fn get_f64(&self, index: usize) -> f64 {
        match &self.terms {
            Terms::Real(v) => v[index],
            Terms::Integer(v) => v[index].to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// Terms as floating point (lossy for very large integers).
    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get_f64(i)).collect()
    }

    /// The subsequence starting at 0-based offset `start`.
    pub fn skip(&self, start: usize) -> Sequence {
        let terms = match &self.terms {
            Terms::Real(v) => Terms::Real(v[start.min(v.len())..].to_vec()),
            Terms::Integer(v) => Terms::Integer(v[start.min(v.len())..].to_vec()),
        };
        Sequence { terms }
    }

    /// The first `count` terms.
    pub fn take(&self, count: usize) -> Sequence {
        let terms = match &self.terms {
            Terms::Real(v) => Terms::Real(v[..count.min(v.len())].to_vec()),
            Terms::Integer(v) => Terms::Integer(v[..count.min(v.len())].to_vec()),
        };
        Sequence { terms }
    }

    /// Plain text form: one decimal value per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.terms {
            Terms::Real(v) => v.iter().for_each(|x| out.push_str(&format!("{x}\n"))),
            Terms::Integer(v) => v.iter().for_each(|x| out.push_str(&format!("{x}\n"))),
        }
        out
    }

    /// Parses the plain text form. Blank lines and `#` comments are skipped.
    /// The result is integer valued when every line is an integer literal.
    pub fn parse_text(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let integers: Option<Vec<BigInt>> = lines.iter().map(|l| l.parse().ok()).collect();
        if let Some(values) = integers {
            return Self::from_integers(values);
        }
        let values = lines
            .iter()
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad sequence term {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_reals(values)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match &self.terms {
            Terms::Real(v) => v.iter().map(|x| x.to_string()).collect(),
            Terms::Integer(v) => v.iter().map(|x| x.to_string()).collect(),
        };
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn check_increasing<T: fmt::Display>(values: &[T], cmp: impl Fn(&T, &T) -> Option<Ordering>) -> Result<()> {
    for (i, w) in values.windows(2).enumerate() {
        if cmp(&w[0], &w[1]) != Some(Ordering::Less) {
            return Err(Error::Domain(format!(
                "sequence not strictly increasing at index {i}: {} >= {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LacunarityKind {
    Hadamard,
    Zygmund,
    StrongZygmund,
}

/// Outcome of a lacunarity check on a truncation.
///
/// `witness` holds 0-based term positions: the consecutive pair achieving the
/// minimal ratio for Hadamard, the difference pair `(k, l)` achieving the
/// maximal count for Zygmund.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LacunarityReport {
    pub kind: LacunarityKind,
    pub parameter: f64,
    pub constant: f64,
    pub passes: Option<bool>,
    pub witness: Vec<(usize, usize)>,
    /// First 1-based position of the tail that was examined.
    pub tail_start: usize,
}

/// Minimal consecutive ratio; passes iff it is at least `q`.
pub fn check_hadamard(seq: &Sequence, q: f64) -> Result<LacunarityReport> {
    if !(q > 1.0) {
        return Err(Error::Domain(format!("Hadamard ratio must exceed 1, got {q}")));
    }
    let values = seq.to_f64();
    if let Some(i) = values.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "Hadamard check needs positive terms; term {i} is {}",
            values[i]
        )));
    }
    let mut constant = f64::INFINITY;
    let mut witness = Vec::new();
    for i in 0..values.len().saturating_sub(1) {
        let ratio = match seq.integers() {
            // Ratios of huge integers are computed from their quotient so
            // they stay finite.
            Some(ints) => big_ratio(&ints[i + 1], &ints[i]),
            None => values[i + 1] / values[i],
        };
        if ratio < constant {
            constant = ratio;
            witness = vec![(i, i + 1)];
        }
    }
    Ok(LacunarityReport {
        kind: LacunarityKind::Hadamard,
        parameter: q,
        constant,
        passes: Some(constant >= q),
        witness,
        tail_start: 1,
    })
}

fn big_ratio(num: &BigInt, den: &BigInt) -> f64 {
    let bits = num.bits().max(den.bits());
    let shift = bits.saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Maximal number of ordered pairs `(k', l')`, `k' ≠ l'`, whose difference is
/// within `threshold` of `λ_k − λ_l`, maximised over `k ≠ l`. The pair itself
/// is counted, so any sequence with two or more terms has constant at least 1.
pub fn zygmund_constant(seq: &Sequence, threshold: f64) -> Result<LacunarityReport> {
    if !(threshold >= 1.0) {
        return Err(Error::Domain(format!(
            "Zygmund threshold must be at least 1, got {threshold}"
        )));
    }
    let (count, witness) = match &seq.terms {
        Terms::Real(v) => {
            let diffs = ordered_differences(v, |a, b| a - b);
            let mut diffs = diffs;
            diffs.sort_by(|a, b| a.0.total_cmp(&b.0));
            max_close_count(&diffs, |lo, hi| hi - lo > threshold)
        }
        Terms::Integer(v) => {
            // |d - d'| ≤ L  ⟺  |d - d'| ≤ ⌊L⌋ for integer differences.
            let bound = BigInt::from(threshold.floor() as u64);
            let mut diffs = ordered_differences(v, |a, b| a - b);
            diffs.sort_by(|a, b| a.0.cmp(&b.0));
            max_close_count(&diffs, |lo, hi| hi - lo > bound)
        }
    };
    Ok(LacunarityReport {
        kind: LacunarityKind::Zygmund,
        parameter: threshold,
        constant: count as f64,
        passes: None,
        witness: witness.into_iter().collect(),
        tail_start: 1,
    })
}

fn ordered_differences<T>(values: &[T], sub: impl Fn(&T, &T) -> T) -> Vec<(T, usize, usize)> {
    let n = values.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for k in 0..n {
        for l in 0..n {
            if k != l {
                out.push((sub(&values[k], &values[l]), k, l));
            }
        }
    }
    out
}

/// Sliding window over sorted differences. `too_far(lo, hi)` says whether the
/// larger value `hi` lies strictly beyond the threshold from `lo`.
fn max_close_count<T>(
    sorted: &[(T, usize, usize)],
    too_far: impl Fn(&T, &T) -> bool,
) -> (usize, Option<(usize, usize)>) {
    let mut best = 0;
    let mut witness = None;
    let (mut lo, mut hi) = (0, 0);
    for (i, (d, k, l)) in sorted.iter().enumerate() {
        while too_far(&sorted[lo].0, d) {
            lo += 1;
        }
        if hi < i {
            hi = i;
        }
        while hi + 1 < sorted.len() && !too_far(d, &sorted[hi + 1].0) {
            hi += 1;
        }
        let count = hi + 1 - lo;
        if count > best {
            best = count;
            witness = Some((*k, *l));
        }
    }
    (best, witness)
}

/// Non-decreasing step function `M: {1, 2, ...} → {1, 2, ...} ∪ {∞}`.
///
/// `M(L)` is `levels[L-1]` for `L ≤ levels.len()` and `beyond` afterwards,
/// where `None` means infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSchedule {
    levels: Vec<usize>,
    beyond: Option<usize>,
}

impl TailSchedule {
    pub fn new(levels: Vec<usize>, beyond: Option<usize>) -> Result<Self> {
        if levels.iter().chain(beyond.iter()).any(|&m| m == 0) {
            return Err(Error::Domain("tail schedule values must be at least 1".into()));
        }
        if levels.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("tail schedule must be non-decreasing".into()));
        }
        if let (Some(&last), Some(b)) = (levels.last(), beyond) {
            if b < last {
                return Err(Error::Domain("tail schedule must be non-decreasing".into()));
            }
        }
        Ok(TailSchedule { levels, beyond })
    }

    /// `M ≡ m` for every level.
    pub fn constant(m: usize) -> Result<Self> {
        Self::new(Vec::new(), Some(m))
    }

    /// `M(1) = … = M(level) = 1` and `M = ∞` above: the greedy construction
    /// then uses threshold `level` at every step.
    pub fn fixed_level(level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::Domain("level must be at least 1".into()));
        }
        Self::new(vec![1; level], None)
    }

    /// Builds the step function from `(L, M)` breakpoints: `M(L') = M` for
    /// `L ≤ L' <` next breakpoint. Levels above the last breakpoint map to
    /// `beyond`. The first breakpoint must be at level 1.
    pub fn from_breakpoints(points: &[(usize, usize)], beyond: Option<usize>) -> Result<Self> {
        if points.is_empty() {
            return Self::new(Vec::new(), beyond);
        }
        if points[0].0 != 1 || points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Domain(
                "breakpoints must start at level 1 and strictly increase".into(),
            ));
        }
        let mut levels = Vec::new();
        for (i, &(level, m)) in points.iter().enumerate() {
            let end = points.get(i + 1).map_or(level + 1, |p| p.0);
            levels.extend(std::iter::repeat_n(m, end - level));
        }
        Self::new(levels, beyond)
    }

    /// `M(L)`, `None` for infinity.
    pub fn at(&self, level: usize) -> Option<usize> {
        assert!(level >= 1, "levels start at 1");
        self.levels.get(level - 1).copied().or(self.beyond)
    }

    /// Largest `L ≥ 1` with `M(L) ≤ n`; `Some(0)` when there is none and an
    /// error when every level qualifies.
    pub fn level_for(&self, n: usize) -> Result<usize> {
        if self.beyond.is_some_and(|m| m <= n) {
            return Err(Error::Domain(format!(
                "schedule has M(L) <= {n} for every L; no finite level"
            )));
        }
        Ok(self.levels.iter().take_while(|&&m| m <= n).count())
    }
}

/// Zygmund constants of the tails `(λ_k)_{k ≥ M(L)}` at threshold `L`.
pub fn strong_zygmund_profile(
    seq: &Sequence,
    schedule: &TailSchedule,
    levels: &[usize],
) -> Result<Vec<LacunarityReport>> {
    levels
        .iter()
        .map(|&level| {
            if level == 0 {
                return Err(Error::Domain("levels start at 1".into()));
            }
            let start = match schedule.at(level) {
                Some(m) if m <= seq.len() => m,
                other => {
                    return Err(Error::Precondition(format!(
                        "M({level}) = {} lies beyond the truncation of {} terms",
                        other.map_or("inf".to_string(), |m| m.to_string()),
                        seq.len()
                    )))
                }
            };
            let mut report = zygmund_constant(&seq.skip(start - 1), level as f64)?;
            report.kind = LacunarityKind::StrongZygmund;
            report.tail_start = start;
            report.witness = report
                .witness
                .iter()
                .map(|&(k, l)| (k + start - 1, l + start - 1))
                .collect();
            Ok(report)
        })
        .collect()
}

/// True iff every profile constant is at most `bound`.
pub fn certify_strong(reports: &[LacunarityReport], bound: f64) -> bool {
    reports.iter().all(|r| r.constant <= bound)
}

/// One step of the greedy construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthStep {
    /// Number of terms already placed.
    pub n: usize,
    pub level: usize,
    pub value: u64,
    /// `(2L+1) n³ + 1`.
    pub bound: u64,
}

impl GrowthStep {
    pub fn within_bound(&self) -> bool {
        self.value <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyConstruction {
    pub sequence: Sequence,
    pub steps: Vec<GrowthStep>,
}

impl GreedyConstruction {
    pub fn bound_holds(&self) -> bool {
        self.steps.iter().all(GrowthStep::within_bound)
    }

    pub fn values(&self) -> Vec<u64> {
        std::iter::once(1).chain(self.steps.iter().map(|s| s.value)).collect()
    }
}

/// Set of integers `λ_i + λ_j − λ_k` over placed terms, kept as a bitset over
/// `[-offset, ∞)`. The set only grows as terms are added, so each new term
/// contributes the sums it participates in.
struct CoreSums {
    offset: i64,
    bits: Vec<u64>,
}

impl CoreSums {
    fn new(offset: i64) -> Self {
        CoreSums {
            offset,
            bits: Vec::new(),
        }
    }

    fn insert(&mut self, s: i64) {
        if s < -self.offset {
            return;
        }
        let i = (s + self.offset) as usize;
        if i / 64 >= self.bits.len() {
            self.bits.resize(i / 64 + 1, 0);
        }
        self.bits[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, s: i64) -> bool {
        if s < -self.offset {
            return false;
        }
        let i = (s + self.offset) as usize;
        self.bits.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    fn hits_window(&self, x: i64, radius: i64) -> bool {
        (x - radius..=x + radius).any(|s| self.contains(s))
    }
}

/// Greedy strong Zygmund construction: `λ_1 = 1` and `λ_{n+1}` is the
/// smallest positive integer different from every `λ_i + λ_j − λ_k + p`,
/// `i, j, k ≤ n`, `|p| ≤ L`, where `M(L) ≤ n < M(L+1)`.
///
/// The candidate scan starts above `λ_n`: every smaller positive integer is
/// already forbidden (it was forbidden when it was passed over, by sums that
/// are still present, and levels never decrease).
pub fn build_greedy(count: usize, schedule: &TailSchedule) -> Result<GreedyConstruction> {
    if count == 0 {
        return Err(Error::Domain("greedy construction needs count >= 1".into()));
    }
    let max_level = (1..count)
        .map(|n| schedule.level_for(n))
        .try_fold(0, |acc, l| l.map(|l| acc.max(l)))?;

    let mut values: Vec<i64> = vec![1];
    let mut sums = CoreSums::new(max_level as i64);
    sums.insert(1);
    let mut steps = Vec::with_capacity(count - 1);

    for n in 1..count {
        let level = schedule.level_for(n)?;
        let radius = level as i64;
        let mut candidate = values[n - 1] + 1;
        while sums.hits_window(candidate, radius) {
            candidate += 1;
        }
        let bound = (2 * level as u64 + 1)
            .checked_mul((n as u64).pow(3))
            .and_then(|b| b.checked_add(1))
            .ok_or_else(|| Error::Overflow(format!("growth bound at n = {n}")))?;
        steps.push(GrowthStep {
            n,
            level,
            value: candidate as u64,
            bound,
        });

        let x = candidate;
        for &a in &values {
            for &b in &values {
                sums.insert(x + a - b);
                sums.insert(a + b - x);
            }
            sums.insert(2 * x - a);
            sums.insert(a);
        }
        sums.insert(x);
        values.push(x);
    }

    let sequence = Sequence::from_i64(&values)?;
    Ok(GreedyConstruction { sequence, steps })
}

/// Largest `K` accepted by [`build_counterexample`].
pub const MAX_COUNTEREXAMPLE_K: usize = 1024;

/// The sorted sequence `{4^k + jk : 1 ≤ k ≤ K, j ∈ {0, 1}}`: Zygmund lacunary
/// but not strong Zygmund lacunary.
pub fn build_counterexample(k_max: usize) -> Result<Sequence> {
    if k_max == 0 {
        return Err(Error::Domain("counterexample needs K >= 1".into()));
    }
    if k_max > MAX_COUNTEREXAMPLE_K {
        return Err(Error::Overflow(format!(
            "K = {k_max} exceeds the supported range (K <= {MAX_COUNTEREXAMPLE_K})"
        )));
    }
    let mut values = Vec::with_capacity(2 * k_max);
    let mut power = BigInt::from(1);
    for k in 1..=k_max {
        power *= 4;
        values.push(power.clone());
        values.push(&power + k);
    }
    Sequence::from_integers(values)
}

/// Hadamard geometric sequence `start · ratio^k`, `k = 0..count`.
pub fn build_geometric(start: u64, ratio: u64, count: usize) -> Result<Sequence> {
    if start == 0 || ratio < 2 {
        return Err(Error::Domain("geometric sequence needs start >= 1, ratio >= 2".into()));
    }
    let mut values = Vec::with_capacity(count);
    let mut v = BigInt::from(start);
    for _ in 0..count {
        values.push(v.clone());
        v *= ratio;
    }
    Sequence::from_integers(values)
}

/// Maximum over `m ∈ [4^n, 4^{n+1})` of the number of representations
/// `m = λ_a − λ_b` by terms of an integer sequence.
pub fn max_block_representations(seq: &Sequence, block: u32) -> Result<usize> {
    let ints = seq
        .integers()
        .ok_or_else(|| Error::Domain("representation counts need an integer sequence".into()))?;
    let lo = BigInt::from(4).pow(block);
    let hi = &lo * 4;
    let mut diffs: Vec<BigInt> = Vec::new();
    for a in ints {
        for b in ints {
            let d = a - b;
            if d >= lo && d < hi {
                diffs.push(d);
            }
        }
    }
    diffs.sort();
    let mut best = 0;
    let mut run = 0;
    for (i, d) in diffs.iter().enumerate() {
        run = if i > 0 && diffs[i - 1] == *d { run + 1 } else { 1 };
        best = best.max(run);
    }
    Ok(best)
}

/// `|d|` of the smallest gap, used when checking that intervals `[λ, λ+1]`
/// are disjoint.
pub fn min_gap(seq: &Sequence) -> Option<f64> {
    match &seq.terms {
        Terms::Integer(v) => v.windows(2).map(|w| (&w[1] - &w[0]).abs()).min().map(|g| {
            if g.is_zero() {
                0.0
            } else {
                g.to_f64().unwrap_or(f64::INFINITY)
            }
        }),
        Terms::Real(v) => v.windows(2).map(|w| w[1] - w[0]).min_by(f64::total_cmp),
    }
}
