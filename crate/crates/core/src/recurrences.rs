//! Orthogonal-polynomial families: recurrence coefficients, normalizations,
//! measures and evaluators.
//!
//! Monic polynomials obey `x p_n = p_{n+1} + alpha_n p_n + beta_n p_{n-1}`;
//! the orthonormal form is `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}`.
//! Every family also carries its standard normalization through the leading
//! coefficient `k_n`, so `standard_n = k_n * monic_n` exactly.

use crate::error::{out_of_range, Error, Result};
use crate::special::{factorial, gamma, ln_gamma, pochhammer, qpoch, qpoch_inf, qpoch_inf_complex};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    Laguerre,
    Meixner,
    MeixnerPollaczek,
    Ultraspherical,
    QUltraspherical,
    ChebyshevU,
    AlSalamChihara,
    QInvHermite,
    ContinuousDualHahn,
}

/// Parameter record shared by all families; only the fields owned by the
/// selected family are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub nu: f64,
    pub q: f64,
    pub t1: f64,
    pub t2: f64,
    pub lambda_mp: f64,
    pub phi: f64,
    pub a_ext: f64,
    pub cdh_a: f64,
    pub cdh_b: f64,
    pub cdh_c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    ContinuousDensity,
    DiscreteLattice,
    DiscreteBilateral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Support {
    /// `lo`/`hi` may be infinite.
    Interval { lo: f64, hi: f64 },
    /// `start, start+1, start+2, ...`
    Lattice { start: f64 },
    /// `x_k = (q^{-k}/a - a q^k)/2`, `k` in `Z`.
    QLattice { a: f64, q: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureDescriptor {
    pub kind: MeasureKind,
    pub support: Support,
    pub total_mass: f64,
    /// Number of factors kept in the infinite products entering `total_mass`.
    pub qpoch_terms: Option<usize>,
}

/// Tabulated monic coefficients. `beta[0]` is unused and stored as zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonicCoeffs {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

/// Tabulated orthonormal coefficients. `a[0]` is unused and stored as zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalCoeffs {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

impl MonicCoeffs {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Monic `p_n(x)`; needs `n <= len()`.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        eval_poly(self, n, x)
    }
}

impl OrthonormalCoeffs {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

pub fn monic_to_orthonormal(monic: &MonicCoeffs) -> Result<OrthonormalCoeffs> {
    let mut a = Vec::with_capacity(monic.beta.len());
    for (n, &bn) in monic.beta.iter().enumerate() {
        if n == 0 {
            a.push(0.0);
        } else if bn > 0.0 {
            a.push(bn.sqrt());
        } else {
            return Err(Error::NonpositiveBeta(n));
        }
    }
    Ok(OrthonormalCoeffs {
        b: monic.alpha.clone(),
        a,
    })
}

pub fn orthonormal_to_monic(coeffs: &OrthonormalCoeffs) -> MonicCoeffs {
    MonicCoeffs {
        alpha: coeffs.b.clone(),
        beta: coeffs
            .a
            .iter()
            .enumerate()
            .map(|(n, &a)| if n == 0 { 0.0 } else { a * a })
            .collect(),
    }
}

/// Forward recurrence for a monic family, generic over real and complex
/// arguments.
pub fn eval_monic_with<T, FA, FB>(alpha: FA, beta: FB, n: usize, x: T) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Mul<f64, Output = T> + From<f64>,
    FA: Fn(usize) -> f64,
    FB: Fn(usize) -> f64,
{
    let mut prev = T::from(0.0);
    let mut cur = T::from(1.0);
    for k in 0..n {
        let next = (x - T::from(alpha(k))) * cur - prev * beta(k);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn eval_poly(coeffs: &MonicCoeffs, n: usize, x: f64) -> f64 {
    eval_monic_with(|k| coeffs.alpha[k], |k| coeffs.beta[k], n, x)
}

/// Like [`eval_poly`] but refuses results that overflowed.
pub fn eval_poly_checked(coeffs: &MonicCoeffs, n: usize, x: f64) -> Result<f64> {
    let v = eval_poly(coeffs, n, x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(n))
    }
}

/// `mantissa * 2^exp2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scaled {
    pub mantissa: f64,
    pub exp2: i64,
}

impl Scaled {
    pub fn to_f64(self) -> f64 {
        let e = self.exp2.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        libm::ldexp(self.mantissa, e)
    }

    pub fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }
}

/// Overflow-guarded monic evaluation carrying an explicit binary exponent.
pub fn eval_poly_scaled(coeffs: &MonicCoeffs, n: usize, x: f64) -> Scaled {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut exp2: i64 = 0;
    for k in 0..n {
        let next = (x - coeffs.alpha[k]) * cur - coeffs.beta[k] * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e150 || (m < 1e-150 && m > 0.0) {
            let (_, e) = libm::frexp(m);
            cur = libm::ldexp(cur, -e);
            prev = libm::ldexp(prev, -e);
            exp2 += e as i64;
        }
    }
    if cur == 0.0 {
        return Scaled {
            mantissa: 0.0,
            exp2: 0,
        };
    }
    let (m, e) = libm::frexp(cur);
    Scaled {
        mantissa: m,
        exp2: exp2 + e as i64,
    }
}

/// Monic `p_n`, `p_n'`, `p_n''` from the recurrence differentiated term by term.
pub fn eval_with_derivatives(coeffs: &MonicCoeffs, n: usize, x: f64) -> (f64, f64, f64) {
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    let (mut s0, mut s1) = (0.0, 0.0);
    for k in 0..n {
        let t = x - coeffs.alpha[k];
        let b = coeffs.beta[k];
        let p2 = t * p1 - b * p0;
        let d2 = p1 + t * d1 - b * d0;
        let s2 = 2.0 * d1 + t * s1 - b * s0;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        s0 = s1;
        s1 = s2;
    }
    (p1, d1, s1)
}

/// Orthonormal forward recurrence, `p_0 = 1/sqrt(mass)`.
pub fn eval_orthonormal_with<T>(coeffs: &OrthonormalCoeffs, mass: f64, n: usize, x: T) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Mul<f64, Output = T> + From<f64>,
{
    let mut prev = T::from(0.0);
    let mut cur = T::from(1.0 / mass.sqrt());
    for k in 0..n {
        let next = ((x - T::from(coeffs.b[k])) * cur - prev * coeffs.a[k]) * (1.0 / coeffs.a[k + 1]);
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub params: FamilyParams,
}

/// Construct a validated family.
pub fn family_coeffs(id: FamilyId, params: FamilyParams) -> Result<FamilySpec> {
    FamilySpec::new(id, params)
}

/// Norm of the standard-normalization polynomial of degree `n`.
pub fn norm_hn(spec: &FamilySpec, n: usize) -> f64 {
    spec.norm(n)
}

fn check(ok: bool, field: &'static str, value: f64, expected: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(out_of_range(field, value, expected))
    }
}

fn check_q(q: f64) -> Result<()> {
    check(q > 0.0 && q < 1.0, "q", q, "(0, 1)")
}

impl FamilySpec {
    pub fn new(id: FamilyId, params: FamilyParams) -> Result<Self> {
        let p = &params;
        match id {
            FamilyId::Laguerre => check(p.alpha > -1.0, "alpha", p.alpha, "(-1, inf)")?,
            FamilyId::Meixner => {
                check(p.beta > 0.0, "beta", p.beta, "(0, inf)")?;
                check(p.c > 0.0 && p.c < 1.0, "c", p.c, "(0, 1)")?;
            }
            FamilyId::MeixnerPollaczek => {
                check(p.lambda_mp > 0.0, "lambda", p.lambda_mp, "(0, inf)")?;
                check(p.phi > 0.0 && p.phi < PI, "phi", p.phi, "(0, pi)")?;
            }
            FamilyId::Ultraspherical => check(p.nu > -0.5, "nu", p.nu, "(-1/2, inf)")?,
            FamilyId::QUltraspherical => {
                check_q(p.q)?;
                check(p.beta.abs() < 1.0, "beta", p.beta, "(-1, 1)")?;
            }
            FamilyId::ChebyshevU => {}
            FamilyId::AlSalamChihara => {
                check_q(p.q)?;
                check(p.t1.abs() < 1.0 && p.t1 != 0.0, "t1", p.t1, "0 < |t1| < 1")?;
                check(p.t2.abs() < 1.0, "t2", p.t2, "(-1, 1)")?;
            }
            FamilyId::QInvHermite => {
                check_q(p.q)?;
                check(p.a_ext > p.q && p.a_ext < 1.0, "a", p.a_ext, "(q, 1)")?;
            }
            FamilyId::ContinuousDualHahn => {
                check(p.cdh_a.is_finite(), "a", p.cdh_a, "finite")?;
                check(p.cdh_b > 0.0, "b", p.cdh_b, "(0, inf)")?;
                check(p.cdh_c > 0.0, "c", p.cdh_c, "(0, inf)")?;
                let spec = FamilySpec { id, params };
                let horizon = 3 + (p.cdh_a.abs() + p.cdh_b + p.cdh_c).ceil() as usize;
                for n in 1..=horizon {
                    if spec.beta_n(n) < 0.0 {
                        return Err(Error::NonpositiveBeta(n));
                    }
                }
            }
        }
        Ok(FamilySpec { id, params })
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        Self::new(FamilyId::Laguerre, FamilyParams { alpha, ..Default::default() })
    }

    pub fn meixner(beta: f64, c: f64) -> Result<Self> {
        Self::new(FamilyId::Meixner, FamilyParams { beta, c, ..Default::default() })
    }

    pub fn meixner_pollaczek(lambda: f64, phi: f64) -> Result<Self> {
        Self::new(
            FamilyId::MeixnerPollaczek,
            FamilyParams { lambda_mp: lambda, phi, ..Default::default() },
        )
    }

    pub fn ultraspherical(nu: f64) -> Result<Self> {
        Self::new(FamilyId::Ultraspherical, FamilyParams { nu, ..Default::default() })
    }

    pub fn q_ultraspherical(beta: f64, q: f64) -> Result<Self> {
        Self::new(FamilyId::QUltraspherical, FamilyParams { beta, q, ..Default::default() })
    }

    pub fn chebyshev_u() -> Self {
        FamilySpec { id: FamilyId::ChebyshevU, params: FamilyParams::default() }
    }

    pub fn al_salam_chihara(t1: f64, t2: f64, q: f64) -> Result<Self> {
        Self::new(FamilyId::AlSalamChihara, FamilyParams { t1, t2, q, ..Default::default() })
    }

    pub fn q_inv_hermite(q: f64, a: f64) -> Result<Self> {
        Self::new(FamilyId::QInvHermite, FamilyParams { q, a_ext: a, ..Default::default() })
    }

    pub fn continuous_dual_hahn(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(
            FamilyId::ContinuousDualHahn,
            FamilyParams { cdh_a: a, cdh_b: b, cdh_c: c, ..Default::default() },
        )
    }

    /// Monic diagonal coefficient `alpha_n`.
    pub fn alpha_n(&self, n: usize) -> f64 {
        let p = &self.params;
        let nf = n as f64;
        match self.id {
            FamilyId::Laguerre => 2.0 * nf + p.alpha + 1.0,
            FamilyId::Meixner => (nf + p.c * (nf + p.beta)) / (1.0 - p.c),
            FamilyId::MeixnerPollaczek => -(nf + p.lambda_mp) / p.phi.tan(),
            FamilyId::Ultraspherical | FamilyId::QUltraspherical | FamilyId::ChebyshevU | FamilyId::QInvHermite => 0.0,
            FamilyId::AlSalamChihara => 0.5 * (p.t1 + p.t2) * p.q.powi(n as i32),
            FamilyId::ContinuousDualHahn => {
                let (a, b, c) = (p.cdh_a, p.cdh_b, p.cdh_c);
                (nf + a + b) * (nf + a + c) + nf * (nf + b + c - 1.0) - a * a
            }
        }
    }

    /// Monic off-diagonal coefficient `beta_n`; zero at `n = 0`.
    pub fn beta_n(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let p = &self.params;
        let nf = n as f64;
        match self.id {
            FamilyId::Laguerre => nf * (nf + p.alpha),
            FamilyId::Meixner => p.c * nf * (nf + p.beta - 1.0) / ((1.0 - p.c) * (1.0 - p.c)),
            FamilyId::MeixnerPollaczek => {
                let s = p.phi.sin();
                nf * (nf + 2.0 * p.lambda_mp - 1.0) / (4.0 * s * s)
            }
            FamilyId::Ultraspherical => {
                if n == 1 && p.nu == 0.0 {
                    0.5
                } else {
                    nf * (nf + 2.0 * p.nu - 1.0) / (4.0 * (nf + p.nu) * (nf + p.nu - 1.0))
                }
            }
            FamilyId::QUltraspherical => {
                let (q, b) = (p.q, p.beta);
                let qn = q.powi(n as i32);
                let qn1 = qn / q;
                (1.0 - qn) * (1.0 - b * b * qn1) / (4.0 * (1.0 - b * qn) * (1.0 - b * qn1))
            }
            FamilyId::ChebyshevU => 0.25,
            FamilyId::AlSalamChihara => {
                let qn = p.q.powi(n as i32);
                0.25 * (1.0 - qn) * (1.0 - p.t1 * p.t2 * qn / p.q)
            }
            FamilyId::QInvHermite => {
                let qn = p.q.powi(n as i32);
                0.25 * (1.0 - qn) / qn
            }
            FamilyId::ContinuousDualHahn => {
                let (a, b, c) = (p.cdh_a, p.cdh_b, p.cdh_c);
                let m = nf - 1.0;
                (m + a + b) * (m + a + c) * nf * (nf + b + c - 1.0)
            }
        }
    }

    /// Orthonormal off-diagonal `a_n`, computed from the closed form.
    pub fn a_n(&self, n: usize) -> f64 {
        self.beta_n(n).max(0.0).sqrt()
    }

    /// `lambda_n` in `T p_n = lambda_n p_n`, for families with a known operator.
    pub fn eigenvalue(&self, n: usize) -> Option<f64> {
        let p = &self.params;
        let nf = n as f64;
        match self.id {
            FamilyId::Laguerre => Some(-nf),
            FamilyId::Meixner => Some(nf * (p.c - 1.0) / (p.beta * p.c)),
            FamilyId::Ultraspherical => Some(-nf * (nf + 2.0 * p.nu)),
            FamilyId::ChebyshevU => Some(-nf * (nf + 2.0)),
            FamilyId::QUltraspherical => {
                let q = p.q;
                let qn = q.powi(n as i32);
                Some(-4.0 * q / qn * (1.0 - qn) * (1.0 - p.beta * p.beta * qn) / ((1.0 - q) * (1.0 - q)))
            }
            FamilyId::QInvHermite => {
                let q = p.q;
                Some(-4.0 * q * (1.0 - q.powi(n as i32)) / ((1.0 - q) * (1.0 - q)))
            }
            _ => None,
        }
    }

    /// Leading coefficient `k_n` of the standard normalization.
    pub fn leading(&self, n: usize) -> f64 {
        let p = &self.params;
        match self.id {
            FamilyId::Laguerre => {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                s / factorial(n)
            }
            FamilyId::Meixner => ((p.c - 1.0) / p.c).powi(n as i32) / pochhammer(p.beta, n),
            FamilyId::MeixnerPollaczek => (2.0 * p.phi.sin()).powi(n as i32) / factorial(n),
            FamilyId::Ultraspherical => {
                if p.nu == 0.0 {
                    if n == 0 {
                        1.0
                    } else {
                        2f64.powi(n as i32 - 1)
                    }
                } else {
                    2f64.powi(n as i32) * pochhammer(p.nu, n) / factorial(n)
                }
            }
            FamilyId::QUltraspherical => 2f64.powi(n as i32) * qpoch(p.beta, p.q, n) / qpoch(p.q, p.q, n),
            FamilyId::ChebyshevU | FamilyId::QInvHermite => 2f64.powi(n as i32),
            FamilyId::AlSalamChihara => (2.0 * p.t1).powi(n as i32) / qpoch(p.t1 * p.t2, p.q, n),
            FamilyId::ContinuousDualHahn => {
                if n % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    pub fn measure(&self) -> MeasureDescriptor {
        let p = &self.params;
        use MeasureKind::*;
        let interval = |lo: f64, hi: f64| Support::Interval { lo, hi };
        let (kind, support, total_mass, qpoch_terms) = match self.id {
            FamilyId::Laguerre => (ContinuousDensity, interval(0.0, f64::INFINITY), gamma(p.alpha + 1.0), None),
            FamilyId::Meixner => (
                DiscreteLattice,
                Support::Lattice { start: 0.0 },
                (1.0 - p.c).powf(-p.beta),
                None,
            ),
            FamilyId::MeixnerPollaczek => (
                ContinuousDensity,
                interval(f64::NEG_INFINITY, f64::INFINITY),
                (ln_gamma(2.0 * p.lambda_mp) - 2.0 * p.lambda_mp * (2.0 * p.phi.sin()).ln()).exp(),
                None,
            ),
            FamilyId::Ultraspherical => (
                ContinuousDensity,
                interval(-1.0, 1.0),
                PI.sqrt() * (ln_gamma(p.nu + 0.5) - ln_gamma(p.nu + 1.0)).exp(),
                None,
            ),
            FamilyId::ChebyshevU => (ContinuousDensity, interval(-1.0, 1.0), PI / 2.0, None),
            FamilyId::QUltraspherical => {
                let (q, b) = (p.q, p.beta);
                let f = [qpoch_inf(b, q), qpoch_inf(q * b, q), qpoch_inf(q, q), qpoch_inf(b * b, q)];
                let terms = f.iter().map(|x| x.terms).max();
                (
                    ContinuousDensity,
                    interval(-1.0, 1.0),
                    2.0 * PI * f[0].value * f[1].value / (f[2].value * f[3].value),
                    terms,
                )
            }
            FamilyId::AlSalamChihara => {
                let f = [qpoch_inf(p.q, p.q), qpoch_inf(p.t1 * p.t2, p.q)];
                (
                    ContinuousDensity,
                    interval(-1.0, 1.0),
                    2.0 * PI / (f[0].value * f[1].value),
                    f.iter().map(|x| x.terms).max(),
                )
            }
            FamilyId::QInvHermite => (
                DiscreteBilateral,
                Support::QLattice { a: p.a_ext, q: p.q },
                1.0,
                Some(qhermite_mass_denominator(p.a_ext, p.q).1),
            ),
            FamilyId::ContinuousDualHahn => (ContinuousDensity, interval(0.0, f64::INFINITY), 1.0, None),
        };
        MeasureDescriptor {
            kind,
            support,
            total_mass,
            qpoch_terms,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.measure().total_mass
    }

    /// Norm `h_n` of the standard polynomial `k_n p_n`.
    pub fn norm(&self, n: usize) -> f64 {
        let p = &self.params;
        let nf = n as f64;
        match self.id {
            FamilyId::Laguerre => (ln_gamma(p.alpha + nf + 1.0) - ln_gamma(nf + 1.0)).exp(),
            FamilyId::Meixner => {
                p.c.powi(-(n as i32)) * factorial(n) / (pochhammer(p.beta, n) * (1.0 - p.c).powf(p.beta))
            }
            FamilyId::AlSalamChihara => {
                let tt = p.t1 * p.t2;
                2.0 * PI * qpoch(p.q, p.q, n) * p.t1.powi(2 * n as i32)
                    / (qpoch_inf(p.q, p.q).value * qpoch_inf(tt, p.q).value * qpoch(tt, p.q, n))
            }
            FamilyId::QInvHermite => p.q.powf(-nf * (nf + 1.0) / 2.0) * qpoch(p.q, p.q, n),
            FamilyId::ContinuousDualHahn => {
                let (a, b, c) = (p.cdh_a, p.cdh_b, p.cdh_c);
                factorial(n) * pochhammer(a + b, n) * pochhammer(a + c, n) * pochhammer(b + c, n)
            }
            _ => self.norm_from_recurrence(n),
        }
    }

    /// `k_n^2 * mu_0 * beta_1 ... beta_n`, valid for every family.
    pub fn norm_from_recurrence(&self, n: usize) -> f64 {
        let k = self.leading(n);
        k * k * self.monic_norm(n)
    }

    /// Squared norm of the monic polynomial, `mu_0 * beta_1 ... beta_n`.
    pub fn monic_norm(&self, n: usize) -> f64 {
        (1..=n).fold(self.total_mass(), |acc, j| acc * self.beta_n(j))
    }

    pub fn monic(&self, len: usize) -> MonicCoeffs {
        MonicCoeffs {
            alpha: (0..len).map(|n| self.alpha_n(n)).collect(),
            beta: (0..len).map(|n| self.beta_n(n)).collect(),
        }
    }

    /// Orthonormal coefficients of length `len` (`a` gets one extra entry so
    /// that degree `len` polynomials can be evaluated).
    pub fn orthonormal(&self, len: usize) -> OrthonormalCoeffs {
        OrthonormalCoeffs {
            b: (0..len).map(|n| self.alpha_n(n)).collect(),
            a: (0..=len).map(|n| if n == 0 { 0.0 } else { self.a_n(n) }).collect(),
        }
    }

    pub fn eval_monic(&self, n: usize, x: f64) -> f64 {
        eval_monic_with(|k| self.alpha_n(k), |k| self.beta_n(k), n, x)
    }

    pub fn eval_monic_complex(&self, n: usize, x: Complex64) -> Complex64 {
        eval_monic_with(|k| self.alpha_n(k), |k| self.beta_n(k), n, x)
    }

    /// Orthonormal polynomial with positive leading coefficient.
    pub fn eval_orthonormal(&self, n: usize, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = 1.0 / self.total_mass().sqrt();
        for k in 0..n {
            let next = ((x - self.alpha_n(k)) * cur - self.a_n(k) * prev) / self.a_n(k + 1);
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn eval_orthonormal_complex(&self, n: usize, x: Complex64) -> Complex64 {
        let mut prev = Complex64::new(0.0, 0.0);
        let mut cur = Complex64::new(1.0 / self.total_mass().sqrt(), 0.0);
        for k in 0..n {
            let next = ((x - self.alpha_n(k)) * cur - prev * self.a_n(k)) / self.a_n(k + 1);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Standard-normalization polynomial `k_n p_n(x)`.
    pub fn eval_standard(&self, n: usize, x: f64) -> f64 {
        self.leading(n) * self.eval_monic(n, x)
    }

    /// `k_n p_n / sqrt(h_n)`: unit norm, sign of the standard polynomial.
    pub fn eval_standard_orthonormal(&self, n: usize, x: f64) -> f64 {
        self.leading(n).signum() * self.eval_orthonormal(n, x)
    }

    /// Weight at `x`: a density for continuous families, a point mass for
    /// lattice families (zero off the lattice).
    pub fn density(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.id {
            FamilyId::Laguerre => {
                if x <= 0.0 {
                    if x == 0.0 && p.alpha == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (p.alpha * x.ln() - x).exp()
                }
            }
            FamilyId::Meixner => {
                let k = x.round();
                if k < 0.0 || (x - k).abs() > 1e-9 {
                    return 0.0;
                }
                let k = k as usize;
                pochhammer(p.beta, k) * p.c.powi(k as i32) / factorial(k)
            }
            FamilyId::MeixnerPollaczek => {
                let lg = crate::special::ln_abs_gamma_complex(Complex64::new(p.lambda_mp, x));
                ((2.0 * p.phi - PI) * x + 2.0 * lg).exp() / (2.0 * PI)
            }
            FamilyId::Ultraspherical => {
                if x.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - x * x).powf(p.nu - 0.5)
                }
            }
            FamilyId::ChebyshevU => {
                if x.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - x * x).sqrt()
                }
            }
            FamilyId::QUltraspherical => {
                if x.abs() >= 1.0 {
                    return 0.0;
                }
                let z = Complex64::from_polar(1.0, x.acos());
                q_ultraspherical_weight_z(z, p.beta, p.q).re
            }
            FamilyId::AlSalamChihara => {
                if x.abs() >= 1.0 {
                    return 0.0;
                }
                let z = Complex64::from_polar(1.0, x.acos());
                asc_weight_z(z, p.t1, p.t2, p.q).re
            }
            FamilyId::QInvHermite => {
                let (a, q) = (p.a_ext, p.q);
                // invert x = (q^{-k}/a - a q^k)/2 for u = q^{-k}/a
                let u = x + (x * x + 1.0).sqrt();
                let k = ((u * a).ln() / -q.ln()).round();
                if (qhermite_point(k as i64, a, q) - x).abs() > 1e-9 * (1.0 + x.abs()) {
                    return 0.0;
                }
                qhermite_mass(k as i64, a, q)
            }
            FamilyId::ContinuousDualHahn => {
                if x <= 0.0 {
                    return 0.0;
                }
                let y = x.sqrt();
                cdh_density_y(y, p.cdh_a, p.cdh_b, p.cdh_c) / (2.0 * y)
            }
        }
    }
}

/// Normalized density in `y` of the continuous part of the continuous dual
/// Hahn measure (the measure in `x = y^2` is this times `dy`).
pub fn cdh_density_y(y: f64, a: f64, b: f64, c: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    use crate::special::ln_abs_gamma_complex as lg;
    let num = lg(Complex64::new(a, y)) + lg(Complex64::new(b, y)) + lg(Complex64::new(c, y));
    let den = lg(Complex64::new(0.0, 2.0 * y));
    let norm = ln_gamma(a + b) + ln_gamma(a + c) + ln_gamma(b + c);
    let sign = gamma(a + b).signum() * gamma(a + c).signum();
    sign * (2.0 * (num - den) - norm).exp() / (2.0 * PI)
}

/// `(z^2, z^-2; q)_inf / (beta z^2, beta z^-2; q)_inf * 2i/(z - 1/z)`, the
/// q-ultraspherical weight continued off the unit circle.
pub fn q_ultraspherical_weight_z(z: Complex64, beta: f64, q: f64) -> Complex64 {
    let z2 = z * z;
    let iz2 = z2.inv();
    let num = qpoch_inf_complex(z2, q) * qpoch_inf_complex(iz2, q);
    let den = qpoch_inf_complex(z2 * beta, q) * qpoch_inf_complex(iz2 * beta, q);
    num / den * Complex64::new(0.0, 2.0) / (z - z.inv())
}

/// Al-Salam–Chihara weight continued off the unit circle.
pub fn asc_weight_z(z: Complex64, t1: f64, t2: f64, q: f64) -> Complex64 {
    let z2 = z * z;
    let iz = z.inv();
    let num = qpoch_inf_complex(z2, q) * qpoch_inf_complex(z2.inv(), q);
    let den = qpoch_inf_complex(z * t1, q)
        * qpoch_inf_complex(iz * t1, q)
        * qpoch_inf_complex(z * t2, q)
        * qpoch_inf_complex(iz * t2, q);
    num / den * Complex64::new(0.0, 2.0) / (z - iz)
}

/// Lattice point `x_k(a) = (q^{-k}/a - a q^k)/2`.
pub fn qhermite_point(k: i64, a: f64, q: f64) -> f64 {
    let qk = q.powi(k as i32);
    0.5 * (1.0 / (qk * a) - a * qk)
}

/// `(-a^2, -q/a^2, q; q)_inf` and the number of factors kept.
pub fn qhermite_mass_denominator(a: f64, q: f64) -> (f64, usize) {
    let f = [qpoch_inf(-a * a, q), qpoch_inf(-q / (a * a), q), qpoch_inf(q, q)];
    (f[0].value * f[1].value * f[2].value, f.iter().map(|x| x.terms).max().unwrap_or(0))
}

/// Mass of the extremal measure at `x_k(a)`.
pub fn qhermite_mass(k: i64, a: f64, q: f64) -> f64 {
    let kf = k as f64;
    let ln = 4.0 * kf * a.ln() + kf * (2.0 * kf - 1.0) * q.ln();
    let a2q2k = a * a * q.powi(2 * k as i32);
    ln.exp() * (1.0 + a2q2k) / qhermite_mass_denominator(a, q).0
}
