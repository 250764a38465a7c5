//! Gram and concentration forms, and the constants they certify.
//!
//! All forms are assembled from closed-form interval integrals
//! ([`crate::kernel::exp_integral`]), so their eigenvalues are limited only
//! by the conditioning of the dense eigensolver.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel;
use crate::linalg::HermitianForm;
use crate::sequences::{Sequence, TailSchedule};
use crate::sets::ThickSet;
use crate::synthesis::{self, BandFunction, FrequencySupport, Grid};

/// Below this the concentration form is treated as singular.
pub const DEGENERACY_THRESHOLD: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationEstimate {
    pub lambda_min: f64,
    /// `1 / lambda_min`.
    pub constant_c: f64,
    pub residual: f64,
    pub dimension: usize,
    pub discretization: String,
}

/// `G[n][m] = (1/|W|) ∫_E e^{2πi(ν_m − ν_n)x} dx` over the intervals of `E`
/// in its window `W`, so that `a* G a = (1/|W|) ∫_E |Σ a_n e^{2πiν_n x}|² dx`.
pub fn gram_on_window(set: &ThickSet, freqs: &[f64], provenance: impl Into<String>) -> Result<HermitianForm> {
    if set.measure() <= 0.0 {
        return Err(Error::Domain("set must have positive measure".into()));
    }
    let scale = 1.0 / set.window_len();
    let intervals = set.intervals();
    Ok(HermitianForm::from_upper(freqs.len(), provenance, |n, m| {
        kernel::exp_integral_union(freqs[m] - freqs[n], intervals) * scale
    }))
}

/// Gram matrix of `(e^{2πiλ_n x})` restricted to `E ⊂ 𝕋 = [0, 1]`.
pub fn gram_matrix(set: &ThickSet, lambdas: &Sequence) -> Result<HermitianForm> {
    let (w0, w1) = set.window();
    if w0 != 0.0 || w1 != 1.0 {
        return Err(Error::Domain(format!(
            "the torus model needs window [0, 1], got [{w0}, {w1}]"
        )));
    }
    gram_on_window(
        set,
        &lambdas.to_f64(),
        format!("gram: |E| = {}, {} frequencies", set.measure(), lambdas.len()),
    )
}

fn estimate(form: &HermitianForm, discretization: String) -> Result<ConcentrationEstimate> {
    let d = form.decompose()?;
    let lambda_min = d.min();
    Ok(ConcentrationEstimate {
        lambda_min,
        constant_c: 1.0 / lambda_min,
        residual: d.residual,
        dimension: form.dimension(),
        discretization,
    })
}

/// Smallest eigenvalue of [`gram_matrix`]: the best `c` in
/// `c Σ|a_n|² ≤ ∫_E |Σ a_n e^{2πiλ_n x}|² dx` on this truncation.
pub fn nazarov_constant(set: &ThickSet, lambdas: &Sequence) -> Result<ConcentrationEstimate> {
    let form = gram_matrix(set, lambdas)?;
    estimate(&form, format!("torus, {} exponentials", lambdas.len()))
}

/// Grid bins in the support, ascending.
fn support_bins(support: &FrequencySupport, grid: &Grid) -> Result<Vec<i64>> {
    if let FrequencySupport::Profile(p) = support {
        for lambda in p.base.to_f64() {
            grid.bin_of(lambda)?;
        }
    }
    let bins = support.bins(grid);
    if bins.is_empty() {
        return Err(Error::Domain("support contains no grid frequencies".into()));
    }
    Ok(bins)
}

/// `E` as intervals of the grid window `[0, T]`.
fn set_on_grid(set: &ThickSet, grid: &Grid) -> Result<Vec<(f64, f64)>> {
    let t = grid.period();
    if !set.periodic() && set.window() != (0.0, t) {
        return Err(Error::Domain(format!(
            "non-periodic set must live on the grid window [0, {t}]"
        )));
    }
    Ok(set.intervals_in(0.0, t))
}

/// Compression of multiplication by `χ_E` to the span of the grid
/// exponentials with frequencies in `support`, normalised by `1/T`.
pub fn concentration_form(
    set: &ThickSet,
    support: &FrequencySupport,
    grid: &Grid,
) -> Result<(HermitianForm, Vec<i64>)> {
    let bins = support_bins(support, grid)?;
    let intervals = set_on_grid(set, grid)?;
    let freqs: Vec<f64> = bins.iter().map(|&b| grid.frequency(b)).collect();
    let scale = 1.0 / grid.period();
    let form = HermitianForm::from_upper(freqs.len(), "concentration", |n, m| {
        kernel::exp_integral_union(freqs[m] - freqs[n], &intervals) * scale
    });
    Ok((form, bins))
}

/// Best discretised constant in `∫|f|² ≤ C ∫_E |f|²` over grid functions
/// with spectrum in `support`.
pub fn ls_constant(set: &ThickSet, support: &FrequencySupport, grid: &Grid) -> Result<ConcentrationEstimate> {
    let (form, bins) = concentration_form(set, support, grid)?;
    let est = estimate(&form, format!("period {}, {} bins", grid.period(), bins.len()))?;
    if est.lambda_min < DEGENERACY_THRESHOLD {
        return Err(Error::Degenerate {
            lambda_min: est.lambda_min,
        });
    }
    Ok(est)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaTerms {
    /// `∫_{I∩E} |Σ f_n e^{2πiλ_n x}|²`.
    pub lhs: f64,
    /// `∫_I Σ |f_n|²`.
    pub term_density: f64,
    /// `∫_I Σ (|f_n|² + |f_n′|²)`.
    pub term_sobolev: f64,
}

impl LemmaTerms {
    /// `(lhs + C₂ L^{-1/2} term_sobolev) / term_density`; `None` when the
    /// density term vanishes.
    pub fn margin(&self, c2: f64, level: usize) -> Option<f64> {
        (self.term_density > 0.0)
            .then(|| (self.lhs + c2 * (level as f64).powf(-0.5) * self.term_sobolev) / self.term_density)
    }
}

/// The three integrals of the local estimate on an interval `I` of length
/// `1/L`. Each `f_n` must have spectrum in `[0, 1]`; `gamma` is the declared
/// thickness and `|E ∩ I| ≥ γ/L` is checked.
pub fn lemma_main_report(
    functions: &[BandFunction],
    lambdas: &Sequence,
    set: &ThickSet,
    interval: (f64, f64),
    level: usize,
    gamma: f64,
) -> Result<LemmaTerms> {
    if functions.len() != lambdas.len() {
        return Err(Error::Domain(format!(
            "{} functions for {} frequencies",
            functions.len(),
            lambdas.len()
        )));
    }
    if level == 0 {
        return Err(Error::Domain("L must be at least 1".into()));
    }
    let (a, b) = interval;
    if ((b - a) - 1.0 / level as f64).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "|I| = {} but 1/L = {}",
            b - a,
            1.0 / level as f64
        )));
    }
    if let Some(i) = functions.iter().position(|f| !f.support().within_unit()) {
        return Err(Error::Precondition(format!("f_{i} is not supported in [0, 1]")));
    }
    let local = set.intervals_in(a, b);
    let local_measure: f64 = local.iter().map(|(x, y)| y - x).sum();
    if local_measure < gamma / level as f64 - crate::sets::MEASURE_TOLERANCE {
        return Err(Error::Precondition(format!(
            "|E ∩ I| = {local_measure} < γ/L = {}",
            gamma / level as f64
        )));
    }

    let mut freqs = Vec::new();
    let mut coeffs = Vec::new();
    let mut term_density = 0.0;
    let mut term_sobolev = 0.0;
    for (n, f) in functions.iter().enumerate() {
        let lambda = lambdas.get_f64(n);
        for (nu, c) in f.spectrum() {
            freqs.push(lambda + nu);
            coeffs.push(c);
        }
        let own = f.energy_on(&[(a, b)]);
        term_density += own;
        term_sobolev += own + f.derivative().energy_on(&[(a, b)]);
    }
    Ok(LemmaTerms {
        lhs: kernel::energy(&freqs, &coeffs, &local),
        term_density,
        term_sobolev,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitCheck {
    /// `‖Fχ_E‖ / ‖F‖`.
    pub ratio: f64,
    /// Same ratio for the head `f₁ = Σ_{n < M(L)}`; `None` if `f₁ = 0`.
    pub ratio_head: Option<f64>,
    /// Same ratio for the tail `f₂ = Σ_{n ≥ M(L)}`; `None` if `f₂ = 0`.
    pub ratio_tail: Option<f64>,
    pub norm_head: f64,
    pub norm_tail: f64,
}

fn concentration_ratio(f: &BandFunction, intervals: &[(f64, f64)]) -> Option<f64> {
    let total = f.norm_sqr();
    (total > 0.0).then(|| (f.energy_on(intervals) / total).sqrt())
}

/// Synthesises `F = Σ_n f_n e^{2πiλ_n x}` over one grid period, splits it as
/// `f₁ + f₂` with `f₁` the first `M(L)` terms (`n = 0, …, M(L)−1`), and
/// reports how much of each lives on `E`.
pub fn theorem_split_check(
    coefficients: &[Vec<Complex64>],
    lambdas: &Sequence,
    schedule: &TailSchedule,
    level: usize,
    set: &ThickSet,
    grid: &Grid,
) -> Result<SplitCheck> {
    if let Some(i) = lambdas.to_f64().iter().position(|&l| l <= 0.0) {
        return Err(Error::Precondition(format!(
            "frequencies must be positive; λ_{i} = {}",
            lambdas.get_f64(i)
        )));
    }
    let split = schedule.at(level).unwrap_or(usize::MAX).min(lambdas.len());
    let intervals = set_on_grid(set, grid)?;

    let whole = synthesis::synthesize(coefficients, lambdas, grid)?;
    let head = synthesis::synthesize(&coefficients[..split], &lambdas.take(split), grid)?;
    let tail = synthesis::synthesize(&coefficients[split..], &lambdas.skip(split), grid)?;

    let ratio = concentration_ratio(&whole, &intervals).ok_or_else(|| Error::Domain("F is identically zero".into()))?;
    Ok(SplitCheck {
        ratio,
        ratio_head: concentration_ratio(&head, &intervals),
        ratio_tail: concentration_ratio(&tail, &intervals),
        norm_head: head.norm_sqr().sqrt(),
        norm_tail: tail.norm_sqr().sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn torus(intervals: Vec<(f64, f64)>) -> ThickSet {
        ThickSet::new(intervals, (0.0, 1.0), true).unwrap()
    }

    #[test]
    fn full_torus_is_identity() {
        let lambdas = Sequence::from_i64(&[0, 3, 7, 20]).unwrap();
        let g = gram_matrix(&ThickSet::full((0.0, 1.0), true).unwrap(), &lambdas).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g.entries()[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn half_torus_two_by_two() {
        let g = gram_matrix(&torus(vec![(0.0, 0.5)]), &Sequence::from_i64(&[0, 1]).unwrap()).unwrap();
        let e = g.entries();
        assert!((e[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((e[(0, 1)] - Complex64::new(0.0, 1.0 / PI)).norm() < 1e-14);
        assert!((e[(1, 0)] - Complex64::new(0.0, -1.0 / PI)).norm() < 1e-14);
        let est = nazarov_constant(&torus(vec![(0.0, 0.5)]), &Sequence::from_i64(&[0, 1]).unwrap()).unwrap();
        assert!((est.lambda_min - (0.5 - 1.0 / PI)).abs() < 1e-12);
    }

    #[test]
    fn empty_set_rejected() {
        let empty = ThickSet::new(vec![], (0.0, 1.0), true).unwrap();
        assert!(gram_matrix(&empty, &Sequence::from_i64(&[0]).unwrap()).is_err());
    }

    #[test]
    fn ls_full_window_is_one() {
        let grid = Grid::new(4.0, 64).unwrap();
        let set = ThickSet::full((0.0, 1.0), true).unwrap();
        let est = ls_constant(&set, &FrequencySupport::unit(), &grid).unwrap();
        assert!((est.constant_c - 1.0).abs() < 1e-12);
        assert_eq!(est.dimension, 5);
    }

    #[test]
    fn ls_degenerate_for_tiny_set() {
        // Many bins, almost no set: the form is numerically singular.
        let grid = Grid::new(64.0, 512).unwrap();
        let set = ThickSet::new(vec![(0.0, 1e-3)], (0.0, 64.0), false).unwrap();
        let res = ls_constant(&set, &FrequencySupport::Interval(0.0, 2.0), &grid);
        assert!(matches!(res, Err(Error::Degenerate { .. })), "{res:?}");
    }

    #[test]
    fn lemma_trivial_cases() {
        let grid = Grid::new(1.0, 16).unwrap();
        let zero = BandFunction::from_bins(grid, [], FrequencySupport::unit()).unwrap();
        let lambdas = Sequence::from_i64(&[4, 16]).unwrap();
        let set = ThickSet::periodic_pattern(1.0, 0.0, 0.5).unwrap();
        let r = lemma_main_report(&[zero.clone(), zero], &lambdas, &set, (0.0, 0.25), 4, 0.5).unwrap();
        assert_eq!((r.lhs, r.term_density, r.term_sobolev), (0.0, 0.0, 0.0));

        let one = BandFunction::from_bins(grid, [(0, Complex64::new(1.0, 0.0))], FrequencySupport::unit()).unwrap();
        let full = ThickSet::full((0.0, 1.0), true).unwrap();
        let r = lemma_main_report(&[one], &Sequence::from_i64(&[4]).unwrap(), &full, (0.25, 0.5), 4, 1.0).unwrap();
        assert!((r.lhs - r.term_density).abs() < 1e-15);
        assert!((r.term_density - 0.25).abs() < 1e-15);
        assert!((r.term_sobolev - 0.25).abs() < 1e-15);
    }

    #[test]
    fn lemma_checks_interval_length() {
        let grid = Grid::new(1.0, 16).unwrap();
        let one = BandFunction::from_bins(grid, [(0, Complex64::new(1.0, 0.0))], FrequencySupport::unit()).unwrap();
        let full = ThickSet::full((0.0, 1.0), true).unwrap();
        let lambdas = Sequence::from_i64(&[4]).unwrap();
        assert!(lemma_main_report(&[one], &lambdas, &full, (0.0, 0.3), 4, 1.0).is_err());
    }

    #[test]
    fn split_check_basics() {
        let grid = Grid::new(1.0, 64).unwrap();
        let lambdas = Sequence::from_i64(&[4, 16]).unwrap();
        let coeffs = vec![
            vec![Complex64::new(1.0, 0.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0)],
        ];
        let schedule = TailSchedule::constant(1).unwrap();
        let full = ThickSet::full((0.0, 1.0), true).unwrap();
        let r = theorem_split_check(&coeffs, &lambdas, &schedule, 1, &full, &grid).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!((r.ratio_head.unwrap() - 1.0).abs() < 1e-12);

        let half = ThickSet::periodic_pattern(1.0, 0.0, 0.5).unwrap();
        let tone = vec![vec![Complex64::new(1.0, 0.0)]];
        let r = theorem_split_check(&tone, &Sequence::from_i64(&[4]).unwrap(), &schedule, 1, &half, &grid).unwrap();
        assert!((r.ratio * r.ratio - 0.5).abs() < 1e-12);
        assert!(r.ratio_tail.is_none());

        let neg = Sequence::from_i64(&[-4, 16]).unwrap();
        assert!(matches!(
            theorem_split_check(&coeffs, &neg, &schedule, 1, &half, &grid),
            Err(Error::Precondition(_))
        ));
    }
}
