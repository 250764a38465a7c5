//! The separation condition on `Λ`, the weight `ω` built on it, and the
//! Carleman–Denjoy moment sequence of `W(ξ) = e^{ξ / log(e + ξ)}`.
//!
//! Logarithms are natural throughout, so sequences must lie above `e`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::Sequence;

/// A polynomial on `[lo, hi]`, coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

/// Coefficients of `p(a + b t)`.
fn compose_affine(p: &[f64], a: f64, b: f64) -> Vec<f64> {
    // Horner in polynomial arithmetic.
    let mut out = vec![0.0; p.len()];
    for &coef in p.iter().rev() {
        let mut next = vec![0.0; p.len()];
        for (k, &o) in out.iter().enumerate() {
            next[k] += o * a;
            if k + 1 < next.len() {
                next[k + 1] += o * b;
            }
        }
        next[0] += coef;
        out = next;
    }
    out
}

/// `max |p(t)|` over `[lo, hi]` for `deg p ≤ 2`.
fn max_abs_quadratic(c: &[f64], lo: f64, hi: f64) -> f64 {
    let mut best = poly_eval(c, lo).abs().max(poly_eval(c, hi).abs());
    if c.len() == 3 && c[2] != 0.0 {
        let vertex = -c[1] / (2.0 * c[2]);
        if vertex > lo && vertex < hi {
            best = best.max(poly_eval(c, vertex).abs());
        }
    }
    best
}

/// Piecewise-cubic `C¹` bump: `1` on `[−1/2, 1/2]`, a cubic smoothstep down
/// to `0` at `±1`, and `0` outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction {
    pieces: Vec<Piece>,
}

impl Default for BumpFunction {
    fn default() -> Self {
        Self::smoothstep()
    }
}

impl BumpFunction {
    pub fn smoothstep() -> Self {
        let s = [0.0, 0.0, 3.0, -2.0];
        BumpFunction {
            pieces: vec![
                Piece {
                    lo: -1.0,
                    hi: -0.5,
                    coeffs: compose_affine(&s, 2.0, 2.0),
                },
                Piece {
                    lo: -0.5,
                    hi: 0.5,
                    coeffs: vec![1.0],
                },
                Piece {
                    lo: 0.5,
                    hi: 1.0,
                    coeffs: compose_affine(&s, 2.0, -2.0),
                },
            ],
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| t >= p.lo && t <= p.hi)
            .map_or(0.0, |p| poly_eval(&p.coeffs, t))
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| t >= p.lo && t <= p.hi)
            .map_or(0.0, |p| poly_eval(&poly_derivative(&p.coeffs), t))
    }

    /// `max |φ′|` over `[lo, hi]`, exact from the pieces.
    pub fn max_slope_on(&self, lo: f64, hi: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.hi > lo && p.lo < hi)
            .map(|p| max_abs_quadratic(&poly_derivative(&p.coeffs), p.lo.max(lo), p.hi.min(hi)))
            .fold(0.0, f64::max)
    }

    /// `‖φ′‖_∞`.
    pub fn lipschitz(&self) -> f64 {
        self.max_slope_on(-1.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// Entry `i` is the condition between terms `i` and `i+1` (0-based).
    pub holds: Vec<bool>,
    pub partial_sum: f64,
}

impl SeparationReport {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }

    /// 0-based position of the first failing pair.
    pub fn first_failure(&self) -> Option<usize> {
        self.holds.iter().position(|&h| !h)
    }
}

fn check_above_e(values: &[f64]) -> Result<()> {
    match values.iter().position(|&v| !(v > E)) {
        Some(i) => Err(Error::Domain(format!("term {i} = {} is not above e", values[i]))),
        None => Ok(()),
    }
}

/// `λ_n (1 + 1/log λ_n) < λ_{n+1} (1 − 1/log λ_{n+1})` for consecutive pairs
/// among the first `count` terms, and `Σ_{n ≤ count} 1/log² λ_n`.
pub fn separation_condition(seq: &Sequence, count: usize) -> Result<SeparationReport> {
    if count > seq.len() {
        return Err(Error::Domain(format!(
            "asked for {count} terms of a {}-term sequence",
            seq.len()
        )));
    }
    let values = seq.take(count).to_f64();
    check_above_e(&values)?;
    let holds = values
        .windows(2)
        .map(|w| w[0] * (1.0 + 1.0 / w[0].ln()) < w[1] * (1.0 - 1.0 / w[1].ln()))
        .collect();
    let partial_sum = values.iter().map(|v| v.ln().powi(-2)).sum();
    Ok(SeparationReport { holds, partial_sum })
}

/// `ω(x) = Σ_n β_n φ((x − λ_n)/β_n)` with `β_n = λ_n / log λ_n`.
#[derive(Clone, Debug)]
pub struct OmegaWeight {
    centers: Vec<f64>,
    widths: Vec<f64>,
    phi: BumpFunction,
}

impl OmegaWeight {
    /// Fails if a term is not above `e` or two summand supports overlap.
    pub fn new(seq: &Sequence, phi: BumpFunction) -> Result<Self> {
        let centers = seq.to_f64();
        check_above_e(&centers)?;
        let widths: Vec<f64> = centers.iter().map(|l| l / l.ln()).collect();
        for i in 1..centers.len() {
            if centers[i - 1] + widths[i - 1] >= centers[i] - widths[i] {
                return Err(Error::Precondition(format!(
                    "summand supports {} and {i} overlap",
                    i - 1
                )));
            }
        }
        Ok(OmegaWeight { centers, widths, phi })
    }

    pub fn eval(&self, x: f64) -> f64 {
        // Supports are disjoint and ordered, so only the summand whose
        // support reaches past x from the left can be active.
        let i = self.centers.iter().zip(&self.widths).position(|(c, w)| x <= c + w);
        match i {
            Some(i) if x >= self.centers[i] - self.widths[i] => {
                self.widths[i] * self.phi.eval((x - self.centers[i]) / self.widths[i])
            }
            _ => 0.0,
        }
    }

    /// `ω′` (one-sided at piece breakpoints).
    pub fn derivative(&self, x: f64) -> f64 {
        match self.centers.iter().zip(&self.widths).position(|(c, w)| x <= c + w) {
            Some(i) if x >= self.centers[i] - self.widths[i] => {
                self.phi.derivative((x - self.centers[i]) / self.widths[i])
            }
            _ => 0.0,
        }
    }

    /// Exact Lipschitz constant of `ω` on `[a, b]`.
    pub fn lipschitz_on(&self, a: f64, b: f64) -> f64 {
        self.centers
            .iter()
            .zip(&self.widths)
            .filter(|(c, w)| *c + *w > a && *c - *w < b)
            .map(|(c, w)| self.phi.max_slope_on((a - c) / w, (b - c) / w))
            .fold(0.0, f64::max)
    }

    /// `∫_a^b ω(x)/x² dx` for `a > 0`, in closed form piece by piece.
    ///
    /// On a summand, substituting `x = β t` turns `β φ((x−λ)/β) / x²` into
    /// `φ(t − log λ) / t²`, a polynomial over `t²`.
    pub fn weighted_integral(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for (&c, &w) in self.centers.iter().zip(&self.widths) {
            let shift = c / w;
            for piece in self.phi.pieces() {
                let lo = (c + w * piece.lo).max(a);
                let hi = (c + w * piece.hi).min(b);
                if hi <= lo {
                    continue;
                }
                let q = compose_affine(&piece.coeffs, -shift, 1.0);
                let (ta, tb) = (lo / w, hi / w);
                total += q
                    .iter()
                    .enumerate()
                    .map(|(k, &qk)| {
                        qk * match k {
                            0 => 1.0 / ta - 1.0 / tb,
                            1 => (tb / ta).ln(),
                            _ => (tb.powi(k as i32 - 1) - ta.powi(k as i32 - 1)) / (k as f64 - 1.0),
                        }
                    })
                    .sum::<f64>();
            }
        }
        total
    }
}

/// Value of the active summand of `ω` at `x`.
pub fn omega_weight(x: f64, seq: &Sequence, phi: &BumpFunction) -> Result<f64> {
    Ok(OmegaWeight::new(seq, phi.clone())?.eval(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaDiagnostics {
    pub lipschitz_bound: f64,
    pub tail_integral: f64,
    pub domination_constant: f64,
}

fn majorant_exponent(x: f64) -> f64 {
    x / (E + x).ln()
}

/// Points per spectral interval when measuring the domination constant.
const DOMINATION_SAMPLES: usize = 65;

/// Lipschitz constant of `ω` on `[1, T]`, `∫_1^T ω/x²`, and the smallest `C`
/// with `x / log(e + x) ≤ C + ω(x)` sampled over `Σ ∩ [0, T]`, where
/// `Σ = ∪ [λ_n, λ_n + 1]`. With no terms, `Σ` is replaced by `[0, T]`.
pub fn omega_diagnostics(seq: &Sequence, phi: &BumpFunction, t_max: f64) -> Result<OmegaDiagnostics> {
    if !(t_max > 1.0) {
        return Err(Error::Domain(format!("T must exceed 1, got {t_max}")));
    }
    let omega = OmegaWeight::new(seq, phi.clone())?;
    let domination_constant = if seq.is_empty() {
        majorant_exponent(t_max)
    } else {
        omega
            .centers
            .iter()
            .filter(|&&c| c <= t_max)
            .flat_map(|&c| {
                let hi = (c + 1.0).min(t_max);
                (0..DOMINATION_SAMPLES).map(move |i| c + (hi - c) * i as f64 / (DOMINATION_SAMPLES - 1) as f64)
            })
            .map(|x| majorant_exponent(x) - omega.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    };
    Ok(OmegaDiagnostics {
        lipschitz_bound: omega.lipschitz_on(1.0, t_max),
        tail_integral: omega.weighted_integral(1.0, t_max),
        domination_constant,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiAnalyticityReport {
    /// `log M_n` for `n = 0..=N` (the `M_n` themselves overflow quickly).
    pub log_m_values: Vec<f64>,
    /// Maximiser `ξ_n` of `ξ^n / W(ξ)`.
    pub argmax: Vec<f64>,
    /// `μ_n = M_{n−1}/M_n` for `n = 1..=N` (entry `n − 1`).
    pub mu_values: Vec<f64>,
    /// `Σ_{k ≤ n} μ_k` for `n = 1..=N`.
    pub partial_sums: Vec<f64>,
    /// `(T, ∫_1^T log W(t)/t² dt)`.
    pub integral_proxy: Vec<(f64, f64)>,
}

impl QuasiAnalyticityReport {
    /// `2 log M_n ≤ log M_{n−1} + log M_{n+1}` up to `tol` relative.
    pub fn log_convex(&self, tol: f64) -> bool {
        self.log_m_values
            .windows(3)
            .all(|w| 2.0 * w[1] <= w[0] + w[2] + tol * w[1].abs().max(1.0))
    }

    pub fn m_non_decreasing(&self) -> bool {
        self.log_m_values.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn mu_non_increasing(&self, tol: f64) -> bool {
        self.mu_values.windows(2).all(|w| w[1] <= w[0] * (1.0 + tol))
    }

    pub fn partial_sums_increasing(&self) -> bool {
        self.partial_sums.windows(2).all(|w| w[1] > w[0])
    }

    /// `S(n)` for 1-based `n`.
    pub fn partial_sum(&self, n: usize) -> f64 {
        self.partial_sums[n - 1]
    }
}

/// `log(ξ^n / W(ξ)) = n log ξ − ξ / log(e + ξ)`.
fn moment_objective(n: usize, xi: f64) -> f64 {
    n as f64 * xi.ln() - majorant_exponent(xi)
}

/// `d/dξ` of [`moment_objective`], multiplied by `ξ`.
fn scaled_slope(n: usize, xi: f64) -> f64 {
    let l = (E + xi).ln();
    let g = 1.0 / l - xi / ((E + xi) * l * l);
    n as f64 - xi * g
}

/// `(log M_n, ξ_n)` with `M_n = sup_{ξ ≥ 1} ξ^n / W(ξ)`.
///
/// `ξ · d/dξ` of the objective is `n − ξ g′(ξ)` with `g(ξ) = ξ/log(e+ξ)`,
/// which decreases in `ξ`; its root is found by bisection on `log ξ`.
pub fn log_moment(n: usize) -> Result<(f64, f64)> {
    if scaled_slope(n, 1.0) <= 0.0 {
        return Ok((moment_objective(n, 1.0), 1.0));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while scaled_slope(n, hi.exp()) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 700.0 {
            return Err(Error::Numerical(format!(
                "no sign change for n = {n} in log ξ ∈ [{lo}, {hi}]"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if scaled_slope(n, mid.exp()) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
    }
    let xi = (0.5 * (lo + hi)).exp();
    Ok((moment_objective(n, xi), xi))
}

/// `∫_1^T dξ / (ξ log(e + ξ))`, by composite Simpson in `s = log ξ`.
pub fn majorant_integral(t: f64) -> f64 {
    if t <= 1.0 {
        return 0.0;
    }
    let end = t.ln();
    let panels = ((end / 1e-2).ceil() as usize).max(2) & !1usize;
    let panels = panels.max(2);
    let h = end / panels as f64;
    let f = |s: f64| 1.0 / (E + s.exp()).ln();
    let mut sum = f(0.0) + f(end);
    for i in 1..panels {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

/// Moments, ratios and partial sums up to `N`, with the integral proxy at
/// `T = 10, 100, …` up to and including `T_max`.
pub fn carleman_denjoy_partial(count: usize, t_max: f64) -> Result<QuasiAnalyticityReport> {
    if count == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let (log_m_values, argmax): (Vec<f64>, Vec<f64>) = (0..=count)
        .map(log_moment)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let mu_values: Vec<f64> = log_m_values.windows(2).map(|w| (w[0] - w[1]).exp()).collect();
    let partial_sums = mu_values
        .iter()
        .scan(0.0, |acc, &mu| {
            *acc += mu;
            Some(*acc)
        })
        .collect();
    let mut ts = Vec::new();
    let mut t = 10.0;
    while t < t_max {
        ts.push(t);
        t *= 10.0;
    }
    if t_max > 1.0 {
        ts.push(t_max);
    }
    let integral_proxy = ts.into_iter().map(|t| (t, majorant_integral(t))).collect();
    Ok(QuasiAnalyticityReport {
        log_m_values,
        argmax,
        mu_values,
        partial_sums,
        integral_proxy,
    })
}
