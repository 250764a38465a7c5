//! Closed-form integrals of complex exponentials over unions of intervals.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `∫_a^b e^{2πi d x} dx`, written as `e^{iπd(a+b)} sin(πd(b−a)) / (πd)` so
/// that it stays accurate as `d → 0`.
pub fn exp_integral(d: f64, a: f64, b: f64) -> Complex64 {
    let len = b - a;
    let z = PI * d * len;
    let sinc = if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    };
    Complex64::from_polar(len * sinc, PI * d * (a + b))
}

/// `∫_E e^{2πi d x} dx` for `E` a list of intervals.
pub fn exp_integral_union(d: f64, intervals: &[(f64, f64)]) -> Complex64 {
    intervals.iter().map(|&(a, b)| exp_integral(d, a, b)).sum()
}

/// `∫_E |Σ_a c_a e^{2πi ν_a x}|² dx` evaluated exactly as a quadratic form.
pub fn energy(freqs: &[f64], coeffs: &[Complex64], intervals: &[(f64, f64)]) -> f64 {
    debug_assert_eq!(freqs.len(), coeffs.len());
    let mut total = 0.0;
    for a in 0..freqs.len() {
        if coeffs[a] == Complex64::new(0.0, 0.0) {
            continue;
        }
        total += coeffs[a].norm_sqr() * exp_integral_union(0.0, intervals).re;
        for b in (a + 1)..freqs.len() {
            if coeffs[b] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let k = exp_integral_union(freqs[a] - freqs[b], intervals);
            total += 2.0 * (coeffs[a] * coeffs[b].conj() * k).re;
        }
    }
    total.max(0.0)
}
