//! Scalar special functions: gamma, Pochhammer symbols, q-shifted factorials
//! and a compensated accumulator.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Lanczos parameters, g = 7 with nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Relative size below which a factor `1 - a q^k` is treated as exactly one.
pub const QPOCH_CUTOFF: f64 = 1e-17;

/// Principal-ish branch of `ln Γ(z)` for complex `z`.
///
/// The Lanczos series is used on `Re z >= 1/2`; smaller real parts are shifted
/// upward with `Γ(z) = Γ(z + k) / (z (z+1) ... (z+k-1))`, so no reflection
/// formula is involved. The imaginary part is only defined modulo `2π`, which
/// is irrelevant for `|Γ(z)|`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let shift = (0.5 - z.re).ceil();
        let k = shift as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..k {
            acc += (z + j as f64).ln();
        }
        return ln_gamma_complex(z + shift) - acc;
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln |Γ(z)|`.
pub fn ln_abs_gamma_complex(z: Complex64) -> f64 {
    ln_gamma_complex(z).re
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

pub fn factorial(n: usize) -> f64 {
    pochhammer(1.0, n)
}

/// Finite q-shifted factorial `(a; q)_n`.
pub fn qpoch(a: f64, q: f64, n: usize) -> f64 {
    let mut p = 1.0;
    let mut t = a;
    for _ in 0..n {
        p *= 1.0 - t;
        t *= q;
    }
    p
}

/// Infinite product `(a; q)_∞` truncated once `|a q^k| < QPOCH_CUTOFF`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QProduct {
    pub value: f64,
    /// Number of factors actually multiplied.
    pub terms: usize,
}

pub fn qpoch_inf(a: f64, q: f64) -> QProduct {
    debug_assert!((0.0..1.0).contains(&q));
    let mut value = 1.0;
    let mut t = a;
    let mut terms = 0;
    while t.abs() >= QPOCH_CUTOFF {
        value *= 1.0 - t;
        t *= q;
        terms += 1;
    }
    QProduct { value, terms }
}

/// Complex `(a; q)_∞` with the same truncation rule.
pub fn qpoch_inf_complex(a: Complex64, q: f64) -> Complex64 {
    let mut value = Complex64::new(1.0, 0.0);
    let mut t = a;
    while t.norm() >= QPOCH_CUTOFF {
        value *= 1.0 - t;
        t *= q;
    }
    value
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_log_gamma_matches_real_gamma_on_axis() {
        for &x in &[0.5, 1.0, 1.5, 2.3, 7.25, 20.0, -0.5, -1.5, 0.1] {
            let lg = ln_abs_gamma_complex(Complex64::new(x, 0.0));
            let reference = gamma(x).abs().ln();
            assert!((lg - reference).abs() < 1e-12 * (1.0 + reference.abs()), "x={x}");
        }
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for &y in &[0.05, 0.4, 1.0, 3.0, 12.0, 40.0] {
            let lg = 2.0 * ln_abs_gamma_complex(Complex64::new(0.0, y));
            let exact = (PI / (y * (PI * y).sinh())).ln();
            assert!((lg - exact).abs() < 1e-12 * (1.0 + exact.abs()), "y={y}: {lg} vs {exact}");
        }
        // |Γ(1/2 + iy)|² = π / cosh πy
        for &y in &[0.0, 0.7, 5.0, 25.0] {
            let lg = 2.0 * ln_abs_gamma_complex(Complex64::new(0.5, y));
            let exact = (PI / (PI * y).cosh()).ln();
            assert!((lg - exact).abs() < 1e-12 * (1.0 + exact.abs()), "y={y}");
        }
    }

    #[test]
    fn qpoch_truncation() {
        let p = qpoch_inf(0.5, 0.5);
        // (1/2; 1/2)_∞ = 0.288788095086602421...
        assert!((p.value - 0.288_788_095_086_602_4).abs() < 1e-15);
        assert!(p.terms > 50);
        assert_eq!(qpoch_inf(0.0, 0.3).terms, 0);
        assert_eq!(qpoch(0.3, 0.5, 0), 1.0);
        assert!((qpoch(0.5, 0.5, 2) - 0.375).abs() < 1e-16);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }
}
