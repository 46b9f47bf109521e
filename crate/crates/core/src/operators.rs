//! Explicit tridiagonal representations of the operator catalog.
//!
//! Every builder returns a [`JacobiOperator`] whose entries are the matrix of
//! the operator itself (eigenvalue variable `E`) in the standard orthonormal
//! basis of its family. Off-diagonal entries keep the sign produced by that
//! basis; only `|coupling|` matters for the spectrum.
//!
//! Two affine maps hang off each operator:
//! * `spectral_map` links `E` to the variable of an identified classical
//!   family (identity when nothing is identified);
//! * `recurrence_map` links `E` to the variable in which the associated monic
//!   recurrence is usually written, starting at row `recurrence_offset`.

use crate::error::{out_of_range, Error, Result};
use crate::jacobi::JacobiSource;
use crate::recurrences::{FamilyId, FamilySpec, MonicCoeffs, OrthonormalCoeffs};
use serde::{Deserialize, Serialize};

/// `E = sigma * x + tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub sigma: f64,
    pub tau: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { sigma: 1.0, tau: 0.0 };

    pub fn new(sigma: f64, tau: f64) -> Self {
        AffineMap { sigma, tau }
    }

    /// `E` from `x`.
    pub fn apply(&self, x: f64) -> f64 {
        self.sigma * x + self.tau
    }

    /// `x` from `E`.
    pub fn invert(&self, e: f64) -> f64 {
        (e - self.tau) / self.sigma
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    /// `x^2 f'' + (alpha+2) x f' - x^2 f'` on Laguerre polynomials, constants
    /// removed.
    LaguerreTl { alpha: f64 },
    /// Second-order Meixner difference operator, constants removed.
    MeixnerTm { beta: f64, c: f64 },
    /// `T + gamma x` for a family with `T p_n = lambda_n p_n`.
    LinearPotential { family: FamilySpec, gamma: f64, xi: f64, eta: f64 },
    /// `T_L + gamma x`.
    LaguerreS { alpha: f64, gamma: f64 },
    /// `T_M + (1-c) gamma x / (c beta (beta+1))`.
    MeixnerS { beta: f64, c: f64, gamma: f64 },
    /// `(1/w) D_q [w(x; q^{1/2} t1, q^{3/2} t2) D_q]` on Al-Salam–Chihara
    /// polynomials.
    AscL { t1: f64, t2: f64, q: f64 },
    /// q^{-1}-Hermite operator plus `gamma x`, on the extremal measure with
    /// parameter `a`.
    QHermitePotential { q: f64, gamma: f64, a: f64 },
}

impl Model {
    pub fn tag(&self) -> &'static str {
        match self {
            Model::LaguerreTl { .. } => "laguerre-tl",
            Model::MeixnerTm { .. } => "meixner-tm",
            Model::LinearPotential { family, .. } => match family.id {
                FamilyId::Laguerre => "linpot-laguerre",
                FamilyId::Ultraspherical => "linpot-ultra",
                FamilyId::QUltraspherical => "linpot-qultra",
                FamilyId::ChebyshevU => "linpot-chebu",
                _ => "linpot",
            },
            Model::LaguerreS { .. } => "laguerre-s",
            Model::MeixnerS { .. } => "meixner-s",
            Model::AscL { .. } => "asc-l",
            Model::QHermitePotential { .. } => "qhermite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiOperator {
    pub model: Model,
    pub basis: FamilySpec,
    pub spectral_map: AffineMap,
    pub recurrence_map: AffineMap,
    pub recurrence_offset: usize,
    pub provenance: String,
    /// Row `n` corresponds to basis polynomial `n + 1`.
    pub modded_out_constants: bool,
}

/// Result of matching an operator with a classical family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModelId {
    ContinuousDualHahn { a: f64, b: f64, c: f64, map: AffineMap },
    MeixnerPollaczek { lambda: f64, phi: f64, map: AffineMap },
    Meixner { beta: f64, c: f64, map: AffineMap },
    Laguerre { alpha: f64, map: AffineMap },
    Unknown,
}

impl ModelId {
    pub fn map(&self) -> Option<AffineMap> {
        match *self {
            ModelId::ContinuousDualHahn { map, .. }
            | ModelId::MeixnerPollaczek { map, .. }
            | ModelId::Meixner { map, .. }
            | ModelId::Laguerre { map, .. } => Some(map),
            ModelId::Unknown => None,
        }
    }

    /// The identified family, if any.
    pub fn family(&self) -> Option<FamilySpec> {
        match *self {
            ModelId::ContinuousDualHahn { a, b, c, .. } => FamilySpec::continuous_dual_hahn(a, b, c).ok(),
            ModelId::MeixnerPollaczek { lambda, phi, .. } => FamilySpec::meixner_pollaczek(lambda, phi).ok(),
            ModelId::Meixner { beta, c, .. } => FamilySpec::meixner(beta, c).ok(),
            ModelId::Laguerre { alpha, .. } => FamilySpec::laguerre(alpha).ok(),
            ModelId::Unknown => None,
        }
    }
}

fn meixner_k(beta: f64, c: f64) -> f64 {
    c * beta * (beta + 1.0)
}

impl JacobiOperator {
    /// Diagonal entry `b_n`.
    pub fn diag(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.model {
            Model::LaguerreTl { alpha } => -(nf + 1.0) * (2.0 * nf + alpha + 2.0),
            Model::MeixnerTm { beta, c } => {
                -((nf + 1.0) * (nf + beta + 1.0) + nf * (nf + 1.0) * c) / meixner_k(beta, c)
            }
            Model::LinearPotential { family, gamma, .. } => {
                family.eigenvalue(n).unwrap_or(f64::NAN) + gamma * family.alpha_n(n)
            }
            Model::LaguerreS { alpha, gamma } => gamma * (2.0 * nf + alpha + 1.0) - nf * (alpha + 2.0 * nf),
            Model::MeixnerS { beta, c, gamma } => {
                -(nf * (nf + beta) + nf * (nf - 1.0) * c - gamma * nf - c * gamma * (beta + nf)) / meixner_k(beta, c)
            }
            Model::AscL { t1, t2, q } => {
                let qm = q.powi(n as i32);
                -4.0 * q / qm * (1.0 - qm) * (1.0 - t1 * t2 * qm + t2 * t2 * (q - qm)) / ((1.0 - q) * (1.0 - q))
            }
            Model::QHermitePotential { q, .. } => -4.0 * q * (1.0 - q.powi(n as i32)) / ((1.0 - q) * (1.0 - q)),
        }
    }

    /// Signed entry between rows `n-1` and `n` (`n >= 1`).
    pub fn coupling(&self, n: usize) -> f64 {
        assert!(n >= 1, "coupling index starts at 1");
        let nf = n as f64;
        match self.model {
            Model::LaguerreTl { alpha } => nf * ((nf + 1.0) * (nf + alpha + 1.0)).sqrt(),
            Model::MeixnerTm { beta, c } => nf * (c * (nf + 1.0) * (beta + nf)).sqrt() / meixner_k(beta, c),
            Model::LinearPotential { family, gamma, .. } => gamma * family.a_n(n),
            Model::LaguerreS { alpha, gamma } => (nf - 1.0 - gamma) * (nf * (nf + alpha)).sqrt(),
            Model::MeixnerS { beta, c, gamma } => {
                (nf - 1.0 - gamma) * (c * nf * (nf + beta - 1.0)).sqrt() / meixner_k(beta, c)
            }
            Model::AscL { t1, t2, q } => asc_upper(t1, t2, q, n - 1),
            Model::QHermitePotential { q, gamma, .. } => {
                0.5 * gamma * q.powf(-0.5 * nf) * (1.0 - q.powi(n as i32)).sqrt()
            }
        }
    }

    /// Orthonormal coefficients (`b`, `|a|`) of the first `len` rows.
    pub fn coeffs(&self, len: usize) -> OrthonormalCoeffs {
        OrthonormalCoeffs {
            b: (0..len).map(|n| self.diag(n)).collect(),
            a: (0..=len).map(|n| if n == 0 { 0.0 } else { self.coupling(n).abs() }).collect(),
        }
    }

    /// Recurrence entries in the variable of `recurrence_map`, starting at
    /// row `recurrence_offset`: `(diag, coupling)` for local index `k`.
    pub fn recurrence_entry(&self, k: usize) -> (f64, f64) {
        let m = self.recurrence_map;
        let n = k + self.recurrence_offset;
        let d = m.invert(self.diag(n));
        let a = if k == 0 { 0.0 } else { self.coupling(n) / m.sigma };
        (d, a)
    }

    /// Orthonormal form of the associated recurrence (`|a|`).
    pub fn recurrence_coeffs(&self, len: usize) -> OrthonormalCoeffs {
        OrthonormalCoeffs {
            b: (0..len).map(|k| self.recurrence_entry(k).0).collect(),
            a: (0..=len).map(|k| self.recurrence_entry(k).1.abs()).collect(),
        }
    }

    /// Monic form of the associated recurrence.
    pub fn recurrence_monic(&self, len: usize) -> MonicCoeffs {
        MonicCoeffs {
            alpha: (0..len).map(|k| self.recurrence_entry(k).0).collect(),
            beta: (0..len).map(|k| self.recurrence_entry(k).1.powi(2)).collect(),
        }
    }

    /// Coefficients fed to the determinacy tests: the associated recurrence
    /// after its last vanishing coupling below `len`.
    pub fn determinacy_coeffs(&self, len: usize) -> OrthonormalCoeffs {
        let full = self.recurrence_coeffs(len + 1);
        let start = (1..=len).rev().find(|&k| full.a[k] == 0.0).unwrap_or(0);
        OrthonormalCoeffs {
            b: full.b[start..len].to_vec(),
            a: std::iter::once(0.0).chain(full.a[start + 1..=len].iter().copied()).collect(),
        }
    }

    /// First index `n >= 1` below `len` whose coupling vanishes.
    pub fn first_zero_coupling(&self, len: usize) -> Option<usize> {
        (1..len).find(|&n| self.coupling(n) == 0.0)
    }

    pub fn identify(&self) -> ModelId {
        identify_model(self)
    }
}

impl JacobiSource for JacobiOperator {
    fn diag(&self, n: usize) -> f64 {
        JacobiOperator::diag(self, n)
    }

    fn coupling(&self, n: usize) -> f64 {
        JacobiOperator::coupling(self, n)
    }
}

/// Entry between rows `m` and `m+1` of the Al-Salam–Chihara operator.
fn asc_upper(t1: f64, t2: f64, q: f64, m: usize) -> f64 {
    let qm = q.powi(m as i32);
    4.0 * t2 * q / qm * (1.0 - qm) * ((1.0 - qm * q) * (1.0 - t1 * t2 * qm)).sqrt() / ((1.0 - q) * (1.0 - q))
}

/// Entry between rows `m` and `m-1`, written from the lower-diagonal formula.
fn asc_lower(t1: f64, t2: f64, q: f64, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let qm = q.powi(m as i32);
    4.0 * t2 * q * q / qm * (1.0 - qm / q) * ((1.0 - qm) * (1.0 - t1 * t2 * qm / q)).sqrt() / ((1.0 - q) * (1.0 - q))
}

fn finite(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(out_of_range(field, v, "finite"))
    }
}

fn laguerre_cdh_map(alpha: f64) -> AffineMap {
    AffineMap::new(-1.0, -0.25 * (alpha + 1.0) * (alpha + 1.0))
}

pub fn build_laguerre_tl(alpha: f64) -> Result<JacobiOperator> {
    let basis = FamilySpec::laguerre(alpha)?;
    let mut op = JacobiOperator {
        model: Model::LaguerreTl { alpha },
        basis,
        spectral_map: AffineMap::IDENTITY,
        recurrence_map: AffineMap::IDENTITY,
        recurrence_offset: 0,
        provenance: "Laguerre second-order operator x^2 y'' + (alpha+2) x y' - x^2 y', constants removed".into(),
        modded_out_constants: true,
    };
    op.spectral_map = identify_model(&op).map().unwrap_or(AffineMap::IDENTITY);
    Ok(op)
}

pub fn build_meixner_tm(beta: f64, c: f64) -> Result<JacobiOperator> {
    let basis = FamilySpec::meixner(beta, c)?;
    Ok(JacobiOperator {
        model: Model::MeixnerTm { beta, c },
        basis,
        spectral_map: AffineMap::IDENTITY,
        recurrence_map: AffineMap::new(-1.0 / meixner_k(beta, c), 0.0),
        recurrence_offset: 0,
        provenance: "Meixner second-order difference operator, constants removed; birth-death recurrence in x = -c beta (beta+1) E"
            .into(),
        modded_out_constants: true,
    })
}

/// `T + gamma x` in the orthonormal basis of `family`, with the associated
/// recurrence written in `x` where `E = xi (x - eta)`.
pub fn build_linear_potential(family: FamilySpec, gamma: f64, xi: f64, eta: f64) -> Result<JacobiOperator> {
    if family.eigenvalue(0).is_none() {
        return Err(Error::Unsupported(format!(
            "{:?} has no second-order operator with polynomial eigenfunctions",
            family.id
        )));
    }
    finite("gamma", gamma)?;
    finite("eta", eta)?;
    finite("xi", xi)?;
    if gamma == 0.0 {
        return Err(out_of_range("gamma", gamma, "nonzero"));
    }
    if xi == 0.0 {
        return Err(Error::ZeroXi);
    }
    let mut op = JacobiOperator {
        model: Model::LinearPotential { family, gamma, xi, eta },
        basis: family,
        spectral_map: AffineMap::IDENTITY,
        recurrence_map: AffineMap::new(xi, -xi * eta),
        recurrence_offset: 0,
        provenance: format!("{:?} operator plus linear potential gamma x", family.id),
        modded_out_constants: false,
    };
    op.spectral_map = identify_model(&op).map().unwrap_or(AffineMap::IDENTITY);
    Ok(op)
}

/// Checked builder: integer `gamma >= 0` makes the matrix split and is
/// reported as [`Error::ReducibleAt`].
pub fn build_laguerre_s(alpha: f64, gamma: f64) -> Result<JacobiOperator> {
    let op = build_laguerre_s_unchecked(alpha, gamma)?;
    if gamma >= 0.0 && gamma.fract() == 0.0 {
        return Err(Error::ReducibleAt(gamma as usize + 1));
    }
    Ok(op)
}

/// Same entries without the reducibility check; zero couplings are left in
/// place for block analysis.
pub fn build_laguerre_s_unchecked(alpha: f64, gamma: f64) -> Result<JacobiOperator> {
    let basis = FamilySpec::laguerre(alpha)?;
    finite("gamma", gamma)?;
    let mut op = JacobiOperator {
        model: Model::LaguerreS { alpha, gamma },
        basis,
        spectral_map: AffineMap::IDENTITY,
        recurrence_map: AffineMap::IDENTITY,
        recurrence_offset: 0,
        provenance: "Laguerre operator T_L plus linear potential gamma x, no constants removed".into(),
        modded_out_constants: false,
    };
    op.spectral_map = identify_model(&op).map().unwrap_or(AffineMap::IDENTITY);
    Ok(op)
}

/// Requires `gamma < 0`, the range in which the recurrence is a genuine
/// orthonormal one.
pub fn build_meixner_s(beta: f64, c: f64, gamma: f64) -> Result<JacobiOperator> {
    if !(gamma < 0.0) {
        return Err(out_of_range("gamma", gamma, "(-inf, 0)"));
    }
    build_meixner_s_unchecked(beta, c, gamma)
}

pub fn build_meixner_s_unchecked(beta: f64, c: f64, gamma: f64) -> Result<JacobiOperator> {
    let basis = FamilySpec::meixner(beta, c)?;
    finite("gamma", gamma)?;
    Ok(JacobiOperator {
        model: Model::MeixnerS { beta, c, gamma },
        basis,
        spectral_map: AffineMap::IDENTITY,
        recurrence_map: AffineMap::IDENTITY,
        recurrence_offset: 0,
        provenance: "Meixner difference operator plus linear potential (1-c) gamma x / (c beta (beta+1))".into(),
        modded_out_constants: false,
    })
}

/// Row 0 of this operator vanishes identically (constants are annihilated);
/// the associated recurrence starts at row 1 with `E = -4 x / (1-q)^2`.
pub fn build_asc_l(t1: f64, t2: f64, q: f64) -> Result<JacobiOperator> {
    let basis = FamilySpec::al_salam_chihara(t1, t2, q)?;
    if t2 == 0.0 {
        return Err(out_of_range("t2", t2, "nonzero with |t2| < 1"));
    }
    for m in 0..=40 {
        let up = asc_upper(t1, t2, q, m);
        let down = asc_lower(t1, t2, q, m + 1);
        if (up - down).abs() > 1e-12 * (1.0 + up.abs()) {
            return Err(Error::Unsupported(format!(
                "off-diagonal formulas disagree at row {m}: {up} vs {down}"
            )));
        }
    }
    Ok(JacobiOperator {
        model: Model::AscL { t1, t2, q },
        basis,
        spectral_map: AffineMap::IDENTITY,
        recurrence_map: AffineMap::new(-4.0 / ((1.0 - q) * (1.0 - q)), 0.0),
        recurrence_offset: 1,
        provenance: "Al-Salam-Chihara second-order q-difference operator in the orthonormal basis".into(),
        modded_out_constants: false,
    })
}

pub fn build_qhermite_potential(q: f64, gamma: f64, a: f64) -> Result<JacobiOperator> {
    let basis = FamilySpec::q_inv_hermite(q, a)?;
    finite("gamma", gamma)?;
    if gamma == 0.0 {
        return Err(out_of_range("gamma", gamma, "nonzero"));
    }
    Ok(JacobiOperator {
        model: Model::QHermitePotential { q, gamma, a },
        basis,
        spectral_map: AffineMap::IDENTITY,
        recurrence_map: AffineMap::IDENTITY,
        recurrence_offset: 0,
        provenance: "q^{-1}-Hermite second-order operator plus linear potential gamma x".into(),
        modded_out_constants: false,
    })
}

const GAMMA_TOL: f64 = 1e-14;

/// Match an operator with a classical family through `E = sigma x + tau`.
pub fn identify_model(op: &JacobiOperator) -> ModelId {
    match op.model {
        Model::LaguerreTl { alpha } => ModelId::ContinuousDualHahn {
            a: 0.5 * (1.0 - alpha),
            b: 0.5 * (1.0 + alpha),
            c: 0.5 * (3.0 + alpha),
            map: laguerre_cdh_map(alpha),
        },
        Model::LaguerreS { alpha, gamma } => {
            let b = 0.5 * (alpha + 1.0);
            ModelId::ContinuousDualHahn {
                a: -gamma - b,
                b,
                c: b,
                map: laguerre_cdh_map(alpha),
            }
        }
        Model::LinearPotential { family, gamma, .. } if family.id == FamilyId::Laguerre => {
            let alpha = family.params.alpha;
            let lambda = 0.5 * (alpha + 1.0);
            if (gamma - 0.25).abs() <= GAMMA_TOL {
                ModelId::Laguerre {
                    alpha,
                    map: AffineMap::new(-0.25, lambda),
                }
            } else if gamma > 0.25 {
                let cos_phi = (1.0 - 2.0 * gamma) / (2.0 * gamma);
                let phi = cos_phi.acos();
                ModelId::MeixnerPollaczek {
                    lambda,
                    phi,
                    map: AffineMap::new((4.0 * gamma - 1.0).sqrt(), lambda),
                }
            } else if gamma > 0.0 {
                let s = ((1.0 - 2.0 * gamma) - (1.0 - 4.0 * gamma).sqrt()) / (2.0 * gamma);
                let beta = alpha + 1.0;
                ModelId::Meixner {
                    beta,
                    c: s * s,
                    map: AffineMap::new(-(1.0 - s) / (1.0 + s), beta * s / (1.0 + s)),
                }
            } else {
                ModelId::Unknown
            }
        }
        _ => ModelId::Unknown,
    }
}

/// Birth, death and absorption rates with `alpha_n = b_n + d_n + c_n` and
/// `beta_n = d_n b_{n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirthDeath {
    pub birth: Vec<f64>,
    pub death: Vec<f64>,
    pub absorption: Vec<f64>,
}

/// Check a candidate factorization over the length of `monic`.
pub fn validate_bd(monic: &MonicCoeffs, rates: &BirthDeath) -> Result<()> {
    let len = monic.len();
    let tol = |x: f64| 1e-12 * (1.0 + x.abs());
    if rates.birth.len() < len || rates.death.len() < len {
        return Err(Error::NotBD("rate sequences shorter than the recurrence".into()));
    }
    let c = |n: usize| rates.absorption.get(n).copied().unwrap_or(0.0);
    if rates.death[0] < 0.0 {
        return Err(Error::NotBD("d_0 < 0".into()));
    }
    for n in 0..len {
        let (b, d) = (rates.birth[n], rates.death[n]);
        if (monic.alpha[n] - (b + d + c(n))).abs() > tol(monic.alpha[n]) {
            return Err(Error::NotBD(format!("alpha_{n} != b_{n} + d_{n} + c_{n}")));
        }
        if n >= 1 {
            if !(rates.birth[n - 1] > 0.0) || !(d > 0.0) {
                return Err(Error::NotBD(format!("rates not positive at {n}")));
            }
            if (monic.beta[n] - d * rates.birth[n - 1]).abs() > tol(monic.beta[n]) {
                return Err(Error::NotBD(format!("beta_{n} != d_{n} b_{}", n - 1)));
            }
        }
    }
    Ok(())
}

/// Solve for rates with `d_0 = 0` (optionally with absorption rates) and
/// validate them.
pub fn bd_decompose(monic: &MonicCoeffs, absorption: Option<&[f64]>) -> Result<BirthDeath> {
    let len = monic.len();
    let c = |n: usize| absorption.and_then(|a| a.get(n).copied()).unwrap_or(0.0);
    let mut birth = Vec::with_capacity(len);
    let mut death = Vec::with_capacity(len);
    for n in 0..len {
        let d = if n == 0 {
            0.0
        } else {
            let prev: f64 = birth[n - 1];
            if !(prev > 0.0) {
                return Err(Error::NotBD(format!("birth rate b_{} is not positive", n - 1)));
            }
            monic.beta[n] / prev
        };
        death.push(d);
        birth.push(monic.alpha[n] - d - c(n));
    }
    let rates = BirthDeath {
        birth,
        death,
        absorption: (0..len).map(c).collect(),
    };
    validate_bd(monic, &rates)?;
    Ok(rates)
}

/// Absorption rates `lambda_n / gamma` of a linear-potential operator built
/// with `xi = gamma`.
pub fn absorption_rates(op: &JacobiOperator, len: usize) -> Option<Vec<f64>> {
    match op.model {
        Model::LinearPotential { family, gamma, xi, .. } if xi == gamma => {
            Some((0..len).map(|n| family.eigenvalue(n).unwrap_or(f64::NAN) / gamma).collect())
        }
        _ => None,
    }
}
