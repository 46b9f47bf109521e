//! Askey–Wilson divided difference and averaging operators on the
//! trigonometric lattice `x = (z + 1/z)/2` and on the hyperbolic lattice
//! `x = sinh xi`, plus forward/backward differences.
//!
//! The two `D_q` normalizations are kept apart; nothing here converts one
//! into the other.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Imaginary parts below this (relative) are discarded by the real wrappers.
pub const IMAG_TOL: f64 = 1e-12;

/// `f̆(z) = f((z + 1/z)/2)`, possibly continued off the unit circle.
pub struct ZParametrizedFn<F> {
    pub eval: F,
    pub symmetric: bool,
}

impl<F: Fn(Complex64) -> Complex64> ZParametrizedFn<F> {
    pub fn new(eval: F, symmetric: bool) -> Self {
        ZParametrizedFn { eval, symmetric }
    }

    pub fn at(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    /// Checks `f̆(z) = f̆(1/z)` on the given sample points.
    pub fn check_symmetry(&self, samples: &[Complex64]) -> bool {
        samples.iter().all(|&z| {
            let a = self.at(z);
            let b = self.at(z.inv());
            (a - b).norm() <= 1e-12 * (1.0 + a.norm())
        })
    }
}

/// Lift a function of `x` to its z-form.
pub fn z_form<G>(g: G) -> ZParametrizedFn<impl Fn(Complex64) -> Complex64>
where
    G: Fn(Complex64) -> Complex64,
{
    ZParametrizedFn::new(move |z: Complex64| g(0.5 * (z + z.inv())), true)
}

/// `f̆(e^xi) = f(sinh xi)`, defined for positive arguments.
pub struct SinhParametrizedFn<F> {
    pub eval: F,
}

impl<F: Fn(f64) -> f64> SinhParametrizedFn<F> {
    pub fn new(eval: F) -> Self {
        SinhParametrizedFn { eval }
    }

    pub fn at(&self, u: f64) -> f64 {
        (self.eval)(u)
    }
}

pub fn sinh_form<G: Fn(f64) -> f64>(g: G) -> SinhParametrizedFn<impl Fn(f64) -> f64> {
    SinhParametrizedFn::new(move |u: f64| g(0.5 * (u - 1.0 / u)))
}

fn e_breve(z: Complex64) -> Complex64 {
    0.5 * (z + z.inv())
}

/// `D_q` at a point `z` of the complex plane.
pub fn aw_dq_z<F: Fn(Complex64) -> Complex64>(f: &ZParametrizedFn<F>, z: Complex64, q: f64) -> Result<Complex64> {
    let s = q.sqrt();
    let den = e_breve(z * s) - e_breve(z / s);
    let scale = (z.norm() + z.inv().norm()) * (1.0 / s - s);
    if den.norm() <= 1e-14 * scale {
        return Err(Error::DenominatorVanishes { re: z.re, im: z.im });
    }
    Ok((f.at(z * s) - f.at(z / s)) / den)
}

/// `A_q` at a point `z`.
pub fn aw_aq_z<F: Fn(Complex64) -> Complex64>(f: &ZParametrizedFn<F>, z: Complex64, q: f64) -> Complex64 {
    let s = q.sqrt();
    0.5 * (f.at(z * s) + f.at(z / s))
}

fn real_part(v: Complex64) -> Result<f64> {
    if v.im.abs() <= IMAG_TOL * (1.0 + v.re.abs()) {
        Ok(v.re)
    } else {
        Err(Error::Unsupported(format!(
            "operator value {} + {}i is not real; input is not a real symmetric function",
            v.re, v.im
        )))
    }
}

fn unit_point(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x.clamp(-1.0, 1.0).acos())
}

/// `(D_q f)(x)` for `x` in `(-1, 1)`, `z = e^{i theta}`.
pub fn aw_dq<F: Fn(Complex64) -> Complex64>(f: &ZParametrizedFn<F>, x: f64, q: f64) -> Result<f64> {
    real_part(aw_dq_z(f, unit_point(x), q)?)
}

/// `(A_q f)(x)` for `x` in `[-1, 1]`.
pub fn aw_aq<F: Fn(Complex64) -> Complex64>(f: &ZParametrizedFn<F>, x: f64, q: f64) -> Result<f64> {
    real_part(aw_aq_z(f, unit_point(x), q))
}

/// Hyperbolic `D_q` at `u = e^xi > 0`.
pub fn sinh_dq_u<F: Fn(f64) -> f64>(f: &SinhParametrizedFn<F>, u: f64, q: f64) -> f64 {
    let s = q.sqrt();
    (f.at(s * u) - f.at(u / s)) / ((s - 1.0 / s) * 0.5 * (u + 1.0 / u))
}

/// Hyperbolic `A_q` at `u = e^xi > 0`.
pub fn sinh_aq_u<F: Fn(f64) -> f64>(f: &SinhParametrizedFn<F>, u: f64, q: f64) -> f64 {
    let s = q.sqrt();
    0.5 * (f.at(s * u) + f.at(u / s))
}

/// `u = e^xi` with `sinh xi = x`.
pub fn sinh_u(x: f64) -> f64 {
    if x >= 0.0 {
        x + x.hypot(1.0)
    } else {
        1.0 / (x.hypot(1.0) - x)
    }
}

pub fn sinh_dq<F: Fn(f64) -> f64>(f: &SinhParametrizedFn<F>, x: f64, q: f64) -> f64 {
    sinh_dq_u(f, sinh_u(x), q)
}

pub fn sinh_aq<F: Fn(f64) -> f64>(f: &SinhParametrizedFn<F>, x: f64, q: f64) -> f64 {
    sinh_aq_u(f, sinh_u(x), q)
}

/// `f(x+1) - f(x)`
pub fn delta<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    f(x + 1.0) - f(x)
}

/// `f(x) - f(x-1)`
pub fn nabla<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    f(x) - f(x - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrences::FamilySpec;

    #[test]
    fn dq_on_low_degree() {
        let one = z_form(|_x| Complex64::new(1.0, 0.0));
        let id = z_form(|x| x);
        let sq = z_form(|x| x * x);
        for &x in &[-0.7, 0.1, 0.3, 0.95] {
            assert!(aw_dq(&one, x, 0.3).unwrap().abs() < 1e-15);
            assert!((aw_dq(&id, x, 0.3).unwrap() - 1.0).abs() < 1e-14);
            assert!((aw_aq(&one, x, 0.3).unwrap() - 1.0).abs() < 1e-15);
        }
        let v = aw_dq(&sq, 0.3, 0.25).unwrap();
        assert!((v - 0.75).abs() < 1e-14, "{v}");
        let q: f64 = 0.25;
        let a = aw_aq(&id, 0.3, q).unwrap();
        assert!((a - 0.5 * (q.sqrt() + 1.0 / q.sqrt()) * 0.3).abs() < 1e-14);
    }

    #[test]
    fn aq_tends_to_identity_as_q_to_one() {
        let id = z_form(|x| x);
        let x = 0.4;
        let errs: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&q| (aw_aq(&id, x, q).unwrap() - x).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 1e-6);
    }

    #[test]
    fn vanishing_denominator_reported() {
        let id = z_form(|x| x);
        assert!(matches!(
            aw_dq_z(&id, Complex64::new(1.0, 0.0), 0.5),
            Err(Error::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn sinh_lowering_examples() {
        let q = 0.5;
        let h = FamilySpec::q_inv_hermite(q, 0.7).unwrap();
        let h1 = sinh_form(|x| h.eval_standard(1, x));
        assert!(sinh_dq(&sinh_form(|_| 1.0), 0.3, q).abs() < 1e-15);
        for &x in &[-2.0, 0.0, 0.7, 5.0] {
            assert!((sinh_dq(&h1, x, q) - 2.0).abs() < 1e-13);
        }
        let h2 = sinh_form(|x| h.eval_standard(2, x));
        let expected = 3.0 * 2f64.sqrt() * 1.4;
        assert!((sinh_dq(&h2, 0.7, q) - expected).abs() < 1e-12);
    }

    #[test]
    fn lattice_differences() {
        let f = |x: f64| x * x;
        assert_eq!(delta(f, 3.0), 7.0);
        assert_eq!(nabla(f, 3.0), 5.0);
        assert_eq!(delta(|_| 4.0, 1.5), 0.0);
    }
}
