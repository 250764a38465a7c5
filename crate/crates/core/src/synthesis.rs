//! Sampled functions with prescribed spectra on a periodic grid.
//!
//! A [`Grid`] of period `T` with `S` samples carries the frequencies
//! `(1/T)ℤ`. A [`BandFunction`] keeps both its samples and its discrete
//! Fourier coefficients `c_j`, normalised so that
//! `f(x) = Σ_j c_j e^{2πi ν_j x}` with `ν_j = j/T` and
//! `‖f‖²_{L²[0,T]} = T Σ |c_j|²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel;
use crate::sequences::Sequence;

/// Relative spectral mass allowed outside a declared support.
pub const LEAKAGE_TOLERANCE: f64 = 1e-8;

/// Tolerance on `λT` being an integer.
const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    period: f64,
    samples: usize,
}

impl Grid {
    pub fn new(period: f64, samples: usize) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) || samples < 2 {
            return Err(Error::Domain(format!(
                "grid needs period > 0 and at least 2 samples, got T = {period}, S = {samples}"
            )));
        }
        Ok(Grid { period, samples })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.samples as f64
    }

    /// Signed frequency index of FFT slot `j`.
    pub fn signed_bin(&self, slot: usize) -> i64 {
        let s = self.samples;
        if slot <= s / 2 {
            slot as i64
        } else {
            slot as i64 - s as i64
        }
    }

    /// FFT slot carrying signed index `bin`, if representable.
    pub fn slot(&self, bin: i64) -> Option<usize> {
        let s = self.samples as i64;
        let half = s / 2;
        if bin > half || bin <= half - s {
            return None;
        }
        Some(bin.rem_euclid(s) as usize)
    }

    pub fn frequency(&self, bin: i64) -> f64 {
        bin as f64 / self.period
    }

    /// The grid index of `frequency`, or an error if it is off the grid.
    pub fn bin_of(&self, frequency: f64) -> Result<i64> {
        let x = frequency * self.period;
        if (x - x.round()).abs() > GRID_TOLERANCE * x.abs().max(1.0) {
            return Err(Error::OffGrid {
                frequency,
                period: self.period,
            });
        }
        Ok(x.round() as i64)
    }

    /// `S/T > 2|ν|`.
    pub fn check_nyquist(&self, frequency: f64) -> Result<()> {
        if self.samples as f64 / self.period > 2.0 * frequency.abs() {
            Ok(())
        } else {
            Err(Error::Nyquist {
                samples: self.samples,
                period: self.period,
                frequency,
            })
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |k| k as f64 * self.spacing())
    }

    /// Bins `j` with `j/T ∈ [lo, hi]`.
    pub fn bins_in(&self, lo: f64, hi: f64) -> impl Iterator<Item = i64> {
        let a = (lo * self.period - GRID_TOLERANCE).ceil() as i64;
        let b = (hi * self.period + GRID_TOLERANCE).floor() as i64;
        a..=b
    }
}

/// `∪_n [λ_n, λ_n + interval_length]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProfile {
    pub base: Sequence,
    pub interval_length: f64,
}

impl SpectralProfile {
    /// Unit-length intervals; they must be pairwise disjoint.
    pub fn unit(base: Sequence) -> Result<Self> {
        Self::new(base, 1.0)
    }

    pub fn new(base: Sequence, interval_length: f64) -> Result<Self> {
        if !(interval_length > 0.0) {
            return Err(Error::Domain("interval length must be positive".into()));
        }
        if let Some(gap) = crate::sequences::min_gap(&base) {
            if gap <= interval_length {
                return Err(Error::Domain(format!(
                    "profile intervals overlap: gap {gap} <= length {interval_length}"
                )));
            }
        }
        Ok(SpectralProfile { base, interval_length })
    }

    pub fn intervals(&self) -> Vec<(f64, f64)> {
        self.base
            .to_f64()
            .into_iter()
            .map(|l| (l, l + self.interval_length))
            .collect()
    }
}

/// Where a function's spectrum is declared to live.
#[derive(Clone, Debug, PartialEq)]
pub enum FrequencySupport {
    Interval(f64, f64),
    Profile(SpectralProfile),
}

impl FrequencySupport {
    pub fn unit() -> Self {
        FrequencySupport::Interval(0.0, 1.0)
    }

    pub fn intervals(&self) -> Vec<(f64, f64)> {
        match self {
            FrequencySupport::Interval(a, b) => vec![(*a, *b)],
            FrequencySupport::Profile(p) => p.intervals(),
        }
    }

    pub fn contains(&self, frequency: f64) -> bool {
        let tol = GRID_TOLERANCE * frequency.abs().max(1.0);
        self.intervals()
            .iter()
            .any(|&(a, b)| frequency >= a - tol && frequency <= b + tol)
    }

    /// Grid bins inside the support, ascending and without repeats.
    pub fn bins(&self, grid: &Grid) -> Vec<i64> {
        let mut bins: Vec<i64> = self.intervals().iter().flat_map(|&(a, b)| grid.bins_in(a, b)).collect();
        bins.sort_unstable();
        bins.dedup();
        bins
    }

    pub fn within_unit(&self) -> bool {
        self.intervals()
            .iter()
            .all(|&(a, b)| a >= -GRID_TOLERANCE && b <= 1.0 + GRID_TOLERANCE)
    }
}

fn fft(values: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan: Arc<dyn rustfft::Fft<f64>> = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    plan.process(values);
}

#[derive(Clone, Debug)]
pub struct BandFunction {
    grid: Grid,
    samples: Vec<Complex64>,
    coefficients: Vec<Complex64>,
    support: FrequencySupport,
}

impl BandFunction {
    pub fn from_samples(grid: Grid, samples: Vec<Complex64>, support: FrequencySupport) -> Result<Self> {
        if samples.len() != grid.samples() {
            return Err(Error::Domain(format!(
                "expected {} samples, got {}",
                grid.samples(),
                samples.len()
            )));
        }
        let mut coefficients = samples.clone();
        fft(&mut coefficients, false);
        let scale = 1.0 / grid.samples() as f64;
        coefficients.iter_mut().for_each(|c| *c *= scale);
        Self::checked(grid, samples, coefficients, support)
    }

    /// From FFT-ordered coefficients.
    pub fn from_coefficients(grid: Grid, coefficients: Vec<Complex64>, support: FrequencySupport) -> Result<Self> {
        if coefficients.len() != grid.samples() {
            return Err(Error::Domain(format!(
                "expected {} coefficients, got {}",
                grid.samples(),
                coefficients.len()
            )));
        }
        let mut samples = coefficients.clone();
        fft(&mut samples, true);
        Self::checked(grid, samples, coefficients, support)
    }

    /// From `(bin, coefficient)` pairs; repeated bins add up.
    pub fn from_bins(
        grid: Grid,
        entries: impl IntoIterator<Item = (i64, Complex64)>,
        support: FrequencySupport,
    ) -> Result<Self> {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); grid.samples()];
        for (bin, c) in entries {
            let frequency = grid.frequency(bin);
            grid.check_nyquist(frequency)?;
            let slot = grid.slot(bin).ok_or(Error::Nyquist {
                samples: grid.samples(),
                period: grid.period(),
                frequency,
            })?;
            coefficients[slot] += c;
        }
        Self::from_coefficients(grid, coefficients, support)
    }

    fn checked(
        grid: Grid,
        samples: Vec<Complex64>,
        coefficients: Vec<Complex64>,
        support: FrequencySupport,
    ) -> Result<Self> {
        let f = BandFunction {
            grid,
            samples,
            coefficients,
            support,
        };
        let leakage = f.leakage();
        if leakage > LEAKAGE_TOLERANCE {
            return Err(Error::Leakage {
                leakage,
                tolerance: LEAKAGE_TOLERANCE,
            });
        }
        Ok(f)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// FFT-ordered coefficients `c_j`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn support(&self) -> &FrequencySupport {
        &self.support
    }

    /// Nonzero `(frequency, coefficient)` pairs.
    pub fn spectrum(&self) -> Vec<(f64, Complex64)> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(slot, &c)| (self.grid.frequency(self.grid.signed_bin(slot)), c))
            .collect()
    }

    fn spectral_mass(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Relative spectral mass outside the declared support.
    pub fn leakage(&self) -> f64 {
        let total = self.spectral_mass();
        if total == 0.0 {
            return 0.0;
        }
        let outside: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(slot, _)| !self.support.contains(self.grid.frequency(self.grid.signed_bin(*slot))))
            .map(|(_, c)| c.norm_sqr())
            .sum();
        outside / total
    }

    /// `‖f‖²` on one period from the samples (trapezoid = exact for the grid).
    pub fn norm_sqr_samples(&self) -> f64 {
        self.grid.spacing() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `‖f‖²` on one period from the coefficients.
    pub fn norm_sqr(&self) -> f64 {
        self.grid.period() * self.spectral_mass()
    }

    /// Exact evaluation at any real `x` from the coefficients.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.spectrum()
            .into_iter()
            .map(|(nu, c)| c * Complex64::from_polar(1.0, 2.0 * PI * nu * x))
            .sum()
    }

    /// `∫_E |f|²` over a list of intervals, exact.
    pub fn energy_on(&self, intervals: &[(f64, f64)]) -> f64 {
        let (freqs, coeffs): (Vec<f64>, Vec<Complex64>) = self.spectrum().into_iter().unzip();
        kernel::energy(&freqs, &coeffs, intervals)
    }

    /// Spectral derivative.
    pub fn derivative(&self) -> BandFunction {
        let coefficients: Vec<Complex64> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(slot, &c)| {
                let nu = self.grid.frequency(self.grid.signed_bin(slot));
                c * Complex64::new(0.0, 2.0 * PI * nu)
            })
            .collect();
        let mut samples = coefficients.clone();
        fft(&mut samples, true);
        BandFunction {
            grid: self.grid,
            samples,
            coefficients,
            support: self.support.clone(),
        }
    }

    /// Interleaved `re,im` CSV: a header line `T,S` then one sample per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{:?},{}\n", self.grid.period(), self.grid.samples());
        for z in &self.samples {
            out.push_str(&format!("{:?},{:?}\n", z.re, z.im));
        }
        out
    }

    /// Little-endian binary: `T: f64`, `S: u64`, then interleaved `f64` pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 16 * self.samples.len());
        out.extend_from_slice(&self.grid.period().to_le_bytes());
        out.extend_from_slice(&(self.grid.samples() as u64).to_le_bytes());
        for z in &self.samples {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], support: FrequencySupport) -> Result<Self> {
        let word = |i: usize| -> Result<[u8; 8]> {
            bytes
                .get(8 * i..8 * i + 8)
                .and_then(|s| s.try_into().ok())
                .ok_or_else(|| Error::Parse("truncated band function".into()))
        };
        let period = f64::from_le_bytes(word(0)?);
        let samples = u64::from_le_bytes(word(1)?) as usize;
        if bytes.len() != 16 + 16 * samples {
            return Err(Error::Parse(format!(
                "expected {} bytes, found {}",
                16 + 16 * samples,
                bytes.len()
            )));
        }
        let grid = Grid::new(period, samples)?;
        let values = (0..samples)
            .map(|k| {
                Ok(Complex64::new(
                    f64::from_le_bytes(word(2 + 2 * k)?),
                    f64::from_le_bytes(word(3 + 2 * k)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(grid, values, support)
    }
}

/// Number of grid frequencies in `[0, 1]`.
pub fn unit_block_len(grid: &Grid) -> usize {
    (grid.period() + GRID_TOLERANCE).floor() as usize + 1
}

/// Samples of `F(x) = Σ_n f_n(x) e^{2πi λ_n x}`, where block `n` of
/// `coefficients` holds the coefficients of `f_n` at `0, 1/T, 2/T, …` (all
/// within `[0, 1]`). Every `λ_n` must lie on the grid.
pub fn synthesize(coefficients: &[Vec<Complex64>], lambdas: &Sequence, grid: &Grid) -> Result<BandFunction> {
    if coefficients.len() != lambdas.len() {
        return Err(Error::Domain(format!(
            "{} coefficient blocks for {} frequencies",
            coefficients.len(),
            lambdas.len()
        )));
    }
    let block_len = unit_block_len(grid);
    let mut entries = Vec::new();
    for (n, block) in coefficients.iter().enumerate() {
        if block.len() > block_len {
            return Err(Error::Domain(format!(
                "block {n} has {} coefficients; only {block_len} fit in [0, 1]",
                block.len()
            )));
        }
        let lambda = lambdas.get_f64(n);
        let base = grid.bin_of(lambda)?;
        grid.check_nyquist(lambda)?;
        grid.check_nyquist(grid.frequency(base + block_len as i64 - 1))?;
        entries.extend(block.iter().enumerate().map(|(j, &c)| (base + j as i64, c)));
    }
    let profile = SpectralProfile::unit(lambdas.clone())?;
    BandFunction::from_bins(*grid, entries, FrequencySupport::Profile(profile))
}

/// Signed bins whose relative spectral mass exceeds `tol`.
pub fn spectral_support(f: &BandFunction, tol: f64) -> Vec<i64> {
    let total = f.spectral_mass();
    if total == 0.0 {
        return Vec::new();
    }
    let mut bins: Vec<i64> = f
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() / total > tol)
        .map(|(slot, _)| f.grid.signed_bin(slot))
        .collect();
    bins.sort_unstable();
    bins
}

/// Fourier multiplier `e^{−|ξ|}`.
pub fn poisson_transform(g: &BandFunction) -> BandFunction {
    let coefficients: Vec<Complex64> = g
        .coefficients
        .iter()
        .enumerate()
        .map(|(slot, &c)| c * (-g.grid.frequency(g.grid.signed_bin(slot)).abs()).exp())
        .collect();
    let mut samples = coefficients.clone();
    fft(&mut samples, true);
    BandFunction {
        grid: g.grid,
        samples,
        coefficients,
        support: g.support.clone(),
    }
}

/// `‖f′‖₂ / ‖f‖₂` computed spectrally.
pub fn bernstein_ratio(f: &BandFunction) -> Result<f64> {
    if !f.support.within_unit() {
        return Err(Error::Precondition("declared support is not inside [0, 1]".into()));
    }
    let total = f.spectral_mass();
    if total == 0.0 {
        return Err(Error::Domain("Bernstein ratio of the zero function".into()));
    }
    let weighted: f64 = f
        .coefficients
        .iter()
        .enumerate()
        .map(|(slot, c)| {
            let w = 2.0 * PI * f.grid.frequency(f.grid.signed_bin(slot));
            w * w * c.norm_sqr()
        })
        .sum();
    Ok((weighted / total).sqrt())
}

/// `Σ_{d∈D} |h(d)|² / ‖h‖²` with `h` evaluated exactly from its
/// coefficients and `‖h‖²` taken over one period.
///
/// The points must be `δ`-separated on the circle of length `T`, so no point
/// is counted twice modulo the period.
pub fn plancherel_polya_ratio(h: &BandFunction, points: &[f64], separation: f64) -> Result<f64> {
    if !(separation > 0.0) {
        return Err(Error::Domain(format!("separation must be positive, got {separation}")));
    }
    if !h.support.within_unit() {
        return Err(Error::Precondition("declared support is not inside [0, 1]".into()));
    }
    let period = h.grid.period();
    let mut reduced: Vec<f64> = points.iter().map(|d| d.rem_euclid(period)).collect();
    reduced.sort_by(f64::total_cmp);
    let wrap = reduced.first().zip(reduced.last()).map(|(a, b)| a + period - b);
    let min_gap = reduced
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(wrap.filter(|_| reduced.len() > 1))
        .fold(f64::INFINITY, f64::min);
    if min_gap < separation * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!(
            "points are {min_gap}-separated modulo the period, less than δ = {separation}"
        )));
    }
    let norm = h.norm_sqr();
    if norm == 0.0 {
        return Err(Error::Domain("sampling ratio of the zero function".into()));
    }
    let spectrum = h.spectrum();
    let sum: f64 = points
        .iter()
        .map(|&d| {
            spectrum
                .iter()
                .map(|&(nu, c)| c * Complex64::from_polar(1.0, 2.0 * PI * nu * d))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();
    Ok(sum / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_bins() {
        let g = Grid::new(4.0, 16).unwrap();
        assert_eq!(g.signed_bin(9), -7);
        assert_eq!(g.slot(-7), Some(9));
        assert_eq!(g.slot(8), Some(8));
        assert_eq!(g.slot(-8), None);
        assert_eq!(g.bin_of(1.25).unwrap(), 5);
        assert!(matches!(g.bin_of(1.3), Err(Error::OffGrid { .. })));
        assert_eq!(g.bins_in(0.0, 1.0).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(unit_block_len(&g), 5);
    }

    #[test]
    fn pure_tone() {
        let grid = Grid::new(1.0, 32).unwrap();
        let f = synthesize(&[vec![c(1.0, 0.0)]], &Sequence::from_i64(&[5]).unwrap(), &grid).unwrap();
        for (x, z) in grid.points().zip(f.samples()) {
            assert!((z - Complex64::from_polar(1.0, 2.0 * PI * 5.0 * x)).norm() < 1e-12);
        }
        assert!((f.norm_sqr_samples() - 1.0).abs() < 1e-12);
        assert_eq!(spectral_support(&f, 1e-12), vec![5]);
    }

    #[test]
    fn zero_function_has_empty_support() {
        let grid = Grid::new(1.0, 8).unwrap();
        let f = BandFunction::from_samples(grid, vec![c(0.0, 0.0); 8], FrequencySupport::unit()).unwrap();
        assert!(spectral_support(&f, 1e-8).is_empty());
        assert!(bernstein_ratio(&f).is_err());
    }

    #[test]
    fn orthogonal_blocks_add_norms() {
        let grid = Grid::new(2.0, 64).unwrap();
        let lambdas = Sequence::from_i64(&[3, 9]).unwrap();
        let blocks = vec![
            vec![c(1.0, 0.5), c(0.0, -1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0), c(0.3, 0.3)],
        ];
        let f = synthesize(&blocks, &lambdas, &grid).unwrap();
        let expect: f64 = blocks.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() * grid.period();
        assert!((f.norm_sqr_samples() - expect).abs() < 1e-10 * expect);
        assert!((f.norm_sqr() - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn synthesize_rejects_bad_inputs() {
        let grid = Grid::new(1.0, 8).unwrap();
        let one = vec![vec![c(1.0, 0.0)]];
        assert!(matches!(
            synthesize(&one, &Sequence::from_i64(&[4]).unwrap(), &grid),
            Err(Error::Nyquist { .. })
        ));
        let grid = Grid::new(2.0, 64).unwrap();
        assert!(matches!(
            synthesize(&one, &Sequence::from_reals(vec![1.2]).unwrap(), &grid),
            Err(Error::OffGrid { .. })
        ));
        assert!(synthesize(&[vec![c(1.0, 0.0); 4]], &Sequence::from_i64(&[1]).unwrap(), &grid).is_err());
    }

    #[test]
    fn leakage_is_rejected() {
        let grid = Grid::new(1.0, 16).unwrap();
        let samples: Vec<Complex64> = grid
            .points()
            .map(|x| Complex64::from_polar(1.0, 2.0 * PI * 3.0 * x))
            .collect();
        assert!(matches!(
            BandFunction::from_samples(grid, samples, FrequencySupport::unit()),
            Err(Error::Leakage { .. })
        ));
    }

    #[test]
    fn poisson_examples() {
        let grid = Grid::new(4.0, 32).unwrap();
        let f = BandFunction::from_bins(grid, [(0, c(1.0, 2.0)), (3, c(0.5, 0.0))], FrequencySupport::unit()).unwrap();
        let p = poisson_transform(&f);
        assert_eq!(p.coefficients()[0], c(1.0, 2.0));
        assert!((p.coefficients()[3] - c(0.5 * (-0.75f64).exp(), 0.0)).norm() < 1e-15);
        assert!(p.norm_sqr() <= f.norm_sqr());
        assert!((p.norm_sqr_samples() - p.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn poisson_of_unit_indicator_spectrum() {
        // ĝ = 1 on [0, 1]: ‖Pg‖² / ‖g‖² → ∫₀¹ e^{-2ξ} dξ = (1 − e^{-2}) / 2.
        let period = 512.0;
        let grid = Grid::new(period, 2048).unwrap();
        let entries = grid.bins_in(0.0, 1.0).map(|b| (b, c(1.0, 0.0)));
        let g = BandFunction::from_bins(grid, entries, FrequencySupport::unit()).unwrap();
        let ratio = poisson_transform(&g).norm_sqr() / g.norm_sqr();
        let exact = (1.0 - (-2.0f64).exp()) / 2.0;
        // Riemann sum with both endpoints: error O(1/T).
        assert!((ratio - exact).abs() < 1.0 / period, "{ratio} vs {exact}");
    }

    #[test]
    fn bernstein_examples() {
        let grid = Grid::new(1.0, 16).unwrap();
        let tone = BandFunction::from_bins(grid, [(1, c(1.0, 0.0))], FrequencySupport::unit()).unwrap();
        assert!((bernstein_ratio(&tone).unwrap() - 2.0 * PI).abs() < 1e-12);
        let constant = BandFunction::from_bins(grid, [(0, c(3.0, 0.0))], FrequencySupport::unit()).unwrap();
        assert_eq!(bernstein_ratio(&constant).unwrap(), 0.0);
        let d = tone.derivative();
        assert!((d.norm_sqr_samples().sqrt() / tone.norm_sqr_samples().sqrt() - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn sampling_identity_and_subsets() {
        let grid = Grid::new(8.0, 64).unwrap();
        let entries: Vec<(i64, Complex64)> = (0..8).map(|b| (b, c(1.0 / (1.0 + b as f64), b as f64 * 0.1))).collect();
        let h = BandFunction::from_bins(grid, entries, FrequencySupport::unit()).unwrap();
        let full: Vec<f64> = (0..8).map(|d| d as f64).collect();
        assert!((plancherel_polya_ratio(&h, &full, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let part = [0.0, 2.0, 5.0];
        assert!(plancherel_polya_ratio(&h, &part, 1.0).unwrap() <= 1.0);
        assert!(plancherel_polya_ratio(&h, &full, 0.0).is_err());
        assert!(plancherel_polya_ratio(&h, &[0.0, 8.0], 1.0).is_err());
    }

    #[test]
    fn binary_and_csv_forms() {
        let grid = Grid::new(2.0, 16).unwrap();
        let f =
            BandFunction::from_bins(grid, [(1, c(0.25, -1.0)), (2, c(0.0, 0.5))], FrequencySupport::unit()).unwrap();
        let back = BandFunction::from_bytes(&f.to_bytes(), FrequencySupport::unit()).unwrap();
        assert_eq!(back.samples(), f.samples());
        let csv = f.to_csv();
        assert!(csv.starts_with("2.0,16\n"));
        assert_eq!(csv.lines().count(), 17);
    }

    #[test]
    fn eval_matches_samples() {
        let grid = Grid::new(2.0, 32).unwrap();
        let f =
            BandFunction::from_bins(grid, [(1, c(0.25, -1.0)), (2, c(0.0, 0.5))], FrequencySupport::unit()).unwrap();
        for (x, z) in grid.points().zip(f.samples()) {
            assert!((f.eval(x) - z).norm() < 1e-12);
        }
    }
}
