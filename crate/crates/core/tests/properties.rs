use std::f64::consts::PI;

use lacuna::concentration::{self, gram_on_window, ls_constant, nazarov_constant};
use lacuna::kernel::exp_integral;
use lacuna::sequences::{
    build_counterexample, build_greedy, max_block_representations, strong_zygmund_profile, zygmund_constant, Sequence,
    TailSchedule,
};
use lacuna::sets::{good_fraction_constant, partition_good_bad, thickness, ThickSet};
use lacuna::synthesis::{
    bernstein_ratio, poisson_transform, spectral_support, synthesize, unit_block_len, BandFunction, FrequencySupport,
    Grid,
};
use lacuna::uniqueness::{omega_diagnostics, BumpFunction, OmegaWeight};
use num_complex::Complex64;
use proptest::prelude::*;

fn increasing_reals(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..20.0, 2..max_len).prop_map(|gaps| {
        gaps.iter()
            .scan(0.0, |acc, g| {
                *acc += g;
                Some(*acc)
            })
            .collect()
    })
}

/// Disjoint intervals in `[0, 1]` from sorted cut points.
fn torus_set() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(0.0f64..1.0, 2..12).prop_map(|mut cuts| {
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.chunks_exact(2)
            .filter(|c| c[1] > c[0])
            .map(|c| (c[0], c[1]))
            .collect()
    })
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zygmund_invariant_under_reflection(values in increasing_reals(14), threshold in 1.0f64..6.0) {
        let seq = Sequence::from_reals(values.clone()).unwrap();
        let reflected: Vec<f64> = values.iter().rev().map(|v| -v).collect();
        let reflected = Sequence::from_reals(reflected).unwrap();
        prop_assert_eq!(
            zygmund_constant(&seq, threshold).unwrap().constant,
            zygmund_constant(&reflected, threshold).unwrap().constant
        );
    }

    #[test]
    fn zygmund_monotone_in_threshold(values in increasing_reals(14), a in 1.0f64..5.0, extra in 0.0f64..5.0) {
        let seq = Sequence::from_reals(values).unwrap();
        let low = zygmund_constant(&seq, a).unwrap().constant;
        let high = zygmund_constant(&seq, a + extra).unwrap().constant;
        prop_assert!(low <= high);
    }

    #[test]
    fn thickness_monotone_under_inclusion(base in torus_set(), extra in torus_set(), delta in 0.05f64..1.0) {
        let small = ThickSet::new(base.clone(), (0.0, 1.0), true).unwrap();
        let mut union: Vec<(f64, f64)> = base.into_iter().chain(extra).collect();
        union.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in union {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        let big = ThickSet::new(merged, (0.0, 1.0), true).unwrap();
        prop_assert!(thickness(&small, delta).unwrap() <= thickness(&big, delta).unwrap() + 1e-12);
    }

    #[test]
    fn gram_is_psd(intervals in torus_set(), lambdas in prop::collection::btree_set(-30i64..30, 1..10)) {
        prop_assume!(!intervals.is_empty());
        let set = ThickSet::new(intervals, (0.0, 1.0), true).unwrap();
        let seq = Sequence::from_i64(&lambdas.into_iter().collect::<Vec<_>>()).unwrap();
        let est = nazarov_constant(&set, &seq).unwrap();
        prop_assert!(est.lambda_min > -1e-12);
        prop_assert!(est.lambda_min <= 1.0 + 1e-12);
    }

    #[test]
    fn plancherel_on_band_functions(coeffs in prop::collection::vec(complex(), 1..9)) {
        let grid = Grid::new(8.0, 64).unwrap();
        let f = BandFunction::from_bins(
            grid,
            coeffs.iter().enumerate().map(|(j, &c)| (j as i64, c)),
            FrequencySupport::unit(),
        ).unwrap();
        let from_coeffs = grid.period() * coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>();
        prop_assert!((f.norm_sqr_samples() - from_coeffs).abs() <= 1e-10 * from_coeffs.max(1e-300));
        prop_assert!((f.norm_sqr() - from_coeffs).abs() <= 1e-10 * from_coeffs.max(1e-300));
    }

    #[test]
    fn modulation_shifts_spectrum(coeffs in prop::collection::vec(complex(), 1..5), lambda in 1i64..20) {
        let grid = Grid::new(4.0, 256).unwrap();
        let base = BandFunction::from_bins(
            grid,
            coeffs.iter().enumerate().map(|(j, &c)| (j as i64, c)),
            FrequencySupport::unit(),
        ).unwrap();
        let seq = Sequence::from_i64(&[lambda]).unwrap();
        let f = synthesize(std::slice::from_ref(&coeffs), &seq, &grid).unwrap();
        let shift = lambda * 4;
        for (j, c) in coeffs.iter().enumerate() {
            let slot = grid.slot(j as i64 + shift).unwrap();
            prop_assert!((f.coefficients()[slot] - c).norm() < 1e-12);
            prop_assert!((base.coefficients()[j] - c).norm() < 1e-12);
        }
        let moved: Vec<i64> = spectral_support(&base, 0.0).iter().map(|b| b + shift).collect();
        prop_assert_eq!(spectral_support(&f, 0.0), moved);
    }

    #[test]
    fn poisson_contracts_and_commutes_with_modulation(coeffs in prop::collection::vec(complex(), 1..4), lambda in 1i64..10) {
        let grid = Grid::new(2.0, 128).unwrap();
        let g = BandFunction::from_bins(
            grid,
            coeffs.iter().enumerate().map(|(j, &c)| (j as i64, c)),
            FrequencySupport::unit(),
        ).unwrap();
        let pg = poisson_transform(&g);
        prop_assert!(pg.norm_sqr() <= g.norm_sqr() * (1.0 + 1e-15));

        let seq = Sequence::from_i64(&[lambda]).unwrap();
        let modulated = synthesize(std::slice::from_ref(&coeffs), &seq, &grid).unwrap();
        let pm = poisson_transform(&modulated);
        for (j, c) in coeffs.iter().enumerate() {
            let bin = j as i64 + 2 * lambda;
            let xi = grid.frequency(bin);
            let expect = c * (-xi).exp();
            prop_assert!((pm.coefficients()[grid.slot(bin).unwrap()] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn bernstein_inequality(coeffs in prop::collection::vec(complex(), 1..6)) {
        let grid = Grid::new(5.0, 64).unwrap();
        prop_assume!(coeffs.iter().any(|c| c.norm_sqr() > 0.0));
        let f = BandFunction::from_bins(
            grid,
            coeffs.iter().enumerate().map(|(j, &c)| (j as i64, c)),
            FrequencySupport::unit(),
        ).unwrap();
        prop_assert!(bernstein_ratio(&f).unwrap() <= 2.0 * PI * (1.0 + 1e-12));
    }
}

/// Adaptive Simpson, used only to cross-check closed forms.
fn adaptive_simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> Complex64,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
        let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[test]
fn gram_entries_match_adaptive_quadrature() {
    let set = ThickSet::new(vec![(0.05, 0.2), (0.33, 0.61), (0.8, 0.97)], (0.0, 1.0), true).unwrap();
    let lambdas = [0.0, 1.0, 3.0, 8.0, 21.0, 55.0];
    let form = gram_on_window(&set, &lambdas, "quad").unwrap();
    for n in 0..lambdas.len() {
        for m in 0..lambdas.len() {
            let d = lambdas[m] - lambdas[n];
            let quad: Complex64 = set
                .intervals()
                .iter()
                .map(|&(a, b)| adaptive_simpson(&|x| Complex64::from_polar(1.0, 2.0 * PI * d * x), a, b, 1e-13))
                .sum();
            assert!((form.entries()[(n, m)] - quad).norm() < 1e-9, "({n}, {m})");
        }
    }
    assert!((exp_integral(2.0, 0.0, 0.5)).norm() < 1e-16);
}

#[test]
fn nazarov_monotone_on_nested_sets() {
    let lambdas = Sequence::from_i64(&[1, 3, 7, 15, 31]).unwrap();
    let mut intervals = vec![(0.1, 0.2)];
    let mut last = 0.0;
    for extra in [(0.3, 0.35), (0.5, 0.7), (0.75, 0.9), (0.0, 0.05)] {
        intervals.push(extra);
        let set = ThickSet::new(intervals.clone(), (0.0, 1.0), true).unwrap();
        let est = nazarov_constant(&set, &lambdas).unwrap();
        assert!(est.lambda_min >= last - 1e-12);
        last = est.lambda_min;
    }
}

#[test]
fn gram_is_scale_covariant() {
    let s = 2.0;
    let lambdas = [0.0, 1.0, 4.0, 9.0];
    let set = ThickSet::new(vec![(0.1, 0.3), (0.55, 0.8)], (0.0, 1.0), true).unwrap();
    let scaled = ThickSet::new(vec![(0.05, 0.15), (0.275, 0.4)], (0.0, 1.0 / s), true).unwrap();
    let freqs_scaled: Vec<f64> = lambdas.iter().map(|l| l * s).collect();
    let a = gram_on_window(&set, &lambdas, "E").unwrap();
    let b = gram_on_window(&scaled, &freqs_scaled, "E/s").unwrap();
    for (x, y) in a.entries().iter().zip(b.entries().iter()) {
        assert!((x - y).norm() < 1e-14);
    }
}

#[test]
fn ls_constant_classical_setting() {
    let grid = Grid::new(8.0, 64).unwrap();
    let unit = FrequencySupport::unit();
    let full = ThickSet::full((0.0, 1.0), true).unwrap();
    assert!((ls_constant(&full, &unit, &grid).unwrap().constant_c - 1.0).abs() < 1e-12);
    for gamma in [0.1, 0.4, 0.9] {
        let set = ThickSet::periodic_pattern(1.0, 0.0, gamma).unwrap();
        assert!((thickness(&set, 1.0).unwrap() - gamma).abs() < 1e-12);
        let c = ls_constant(&set, &unit, &grid).unwrap().constant_c;
        assert!(c.is_finite() && c > 1.0, "γ={gamma}: C={c}");
    }
}

#[test]
fn enlarging_profile_cannot_decrease_constant() {
    let grid = Grid::new(4.0, 2048).unwrap();
    let set = ThickSet::periodic_pattern(1.0, 0.1, 0.5).unwrap();
    let mut last = 0.0;
    for k in 1..=4 {
        let lambdas: Vec<i64> = (1..=k).map(|j| 4i64.pow(j)).collect();
        let mut profile_seq = vec![0i64];
        profile_seq.extend(lambdas);
        let support = FrequencySupport::Profile(
            lacuna::synthesis::SpectralProfile::unit(Sequence::from_i64(&profile_seq).unwrap()).unwrap(),
        );
        let c = ls_constant(&set, &support, &grid).unwrap().constant_c;
        assert!(c >= last - 1e-9, "k={k}: {c} < {last}");
        last = c;
    }
}

#[test]
fn greedy_tails_have_no_near_coincidences() {
    let schedule = TailSchedule::from_breakpoints(&[(1, 1), (2, 20), (3, 60)], None).unwrap();
    let g = build_greedy(120, &schedule).unwrap();
    assert!(g.bound_holds());
    let reports = strong_zygmund_profile(&g.sequence, &schedule, &[1, 2, 3]).unwrap();
    for r in reports {
        assert_eq!(r.constant, 1.0, "level {}", r.parameter);
    }
}

#[test]
fn counterexample_block_representations_stay_bounded() {
    for k in [8, 12, 16, 24] {
        let seq = build_counterexample(k).unwrap();
        for n in 0..(k as u32 - 2) {
            let count = max_block_representations(&seq, n).unwrap();
            assert!(count <= 5, "K={k}, block {n}: {count}");
        }
    }
}

#[test]
fn counterexample_is_not_strong() {
    let k = 24;
    let seq = build_counterexample(k).unwrap();
    let schedule = TailSchedule::constant(1).unwrap();
    let levels: Vec<usize> = (1..=k / 2).collect();
    for r in strong_zygmund_profile(&seq, &schedule, &levels).unwrap() {
        assert!(r.constant >= r.parameter, "L={}: {}", r.parameter, r.constant);
    }
}

#[test]
fn partition_bound_and_good_union_thickness() {
    let sets = [
        ThickSet::periodic_pattern(1.0, 0.0, 0.5).unwrap(),
        ThickSet::new(vec![(0.0, 0.1), (0.3, 0.45), (0.7, 0.8)], (0.0, 1.0), true).unwrap(),
        ThickSet::new(vec![(0.05, 0.3), (0.9, 1.2), (1.5, 1.9)], (0.0, 2.0), true).unwrap(),
    ];
    for set in &sets {
        let delta = set.window_len();
        let gamma = thickness(set, delta).unwrap();
        for level in [2, 4, 8, 16] {
            let r = partition_good_bad(set, delta, level, gamma).unwrap();
            assert!(r.bound_holds(), "γ={gamma}, L={level}");
            for b in &r.blocks {
                assert_eq!(b.good.len() + b.bad.len(), r.subintervals_per_block());
            }
            let xi = r.good_union(set).unwrap();
            // 2Δ exceeds one period; probe the periodic extension directly.
            let xi_gamma = (0..=400)
                .map(|i| {
                    let t = i as f64 * delta / 400.0;
                    xi.measure_in(t, t + 2.0 * delta) / (2.0 * delta)
                })
                .fold(f64::INFINITY, f64::min);
            assert!(xi_gamma >= good_fraction_constant(gamma) / 2.0 - 1e-12);
        }
    }
}

#[test]
fn omega_is_lipschitz_under_finite_differences() {
    let seq = Sequence::from_reals((1..=5).map(|n| 4f64.powi(n)).collect()).unwrap();
    let phi = BumpFunction::smoothstep();
    let omega = OmegaWeight::new(&seq, phi.clone()).unwrap();
    let bound = phi.lipschitz();
    let h = 1e-4;
    let mut x = 1.0;
    let mut worst: f64 = 0.0;
    while x < 1100.0 {
        worst = worst.max((omega.eval(x + h) - omega.eval(x)).abs() / h);
        x += h;
    }
    assert!(worst <= bound + 1e-6, "{worst}");
}

#[test]
fn domination_constant_does_not_blow_up() {
    let seq = Sequence::from_reals((1..=20).map(|n| 4f64.powi(n)).collect()).unwrap();
    let phi = BumpFunction::smoothstep();
    let t = 4f64.powi(12);
    let a = omega_diagnostics(&seq, &phi, t).unwrap().domination_constant;
    let b = omega_diagnostics(&seq, &phi, 4.0 * t).unwrap().domination_constant;
    assert!(a.is_finite() && b.is_finite());
    assert!((b - a).abs() <= 1.0, "{a} vs {b}");
}

#[test]
fn synthesized_spectrum_stays_in_profile() {
    let grid = Grid::new(2.0, 512).unwrap();
    let seq = Sequence::from_i64(&[4, 16, 64]).unwrap();
    let len = unit_block_len(&grid);
    let blocks: Vec<Vec<Complex64>> = (0..3)
        .map(|n| {
            (0..len)
                .map(|j| Complex64::new((n * 7 + j) as f64 % 3.0 - 1.0, 0.5))
                .collect()
        })
        .collect();
    let f = synthesize(&blocks, &seq, &grid).unwrap();
    assert!(f.leakage() < 1e-8);
    for bin in spectral_support(&f, 1e-14) {
        assert!(f.support().contains(grid.frequency(bin)));
    }
    let _ = concentration::DEGENERACY_THRESHOLD;
}
