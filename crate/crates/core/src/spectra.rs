//! Spectral classification of Jacobi operators: moment-problem determinacy
//! scans, zero bounds, truncated spectra and the closed-form discrete
//! eigenvalues of the Laguerre-based models.

use crate::error::{out_of_range, Result};
use crate::jacobi::truncate_blocks;
use crate::operators::{JacobiOperator, Model, ModelId};
use crate::recurrences::{qhermite_mass, qhermite_mass_denominator, qhermite_point, FamilySpec, OrthonormalCoeffs};
use serde::{Deserialize, Serialize};

/// Smallest scan length accepted by [`determinacy`].
pub const MIN_SCAN: usize = 100;
/// Default scan length used by [`spectrum_report`].
pub const DEFAULT_SCAN: usize = 200;
/// A polynomial tail `t_n ~ n^d` is treated as non-summable when
/// `d >= -1 - POLY_DEGREE_SLACK`.
pub const POLY_DEGREE_SLACK: f64 = 0.05;
/// An exponential tail `t_n ~ e^{r n}` is treated as summable when
/// `r < -EXP_RATE_FLOOR`.
pub const EXP_RATE_FLOOR: f64 = 1e-3;
/// Relative slack allowed in the non-increasing tail certificate.
pub const MONOTONE_SLACK: f64 = 1e-12;
/// Number of Meixner lattice eigenvalues listed in a report.
pub const MEIXNER_LISTED: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeterminacyStatus {
    #[serde(rename = "DeterminateBy_i")]
    DeterminateByI,
    #[serde(rename = "DeterminateBy_ii")]
    DeterminateByIi,
    #[serde(rename = "DeterminateBy_iii")]
    DeterminateByIii,
    DeterminateByCarleman,
    Inconclusive,
}

/// Least-squares description of a positive sequence over the tail of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum TailGrowth {
    /// `t_n ~ n^degree`.
    Polynomial { degree: f64, rss: f64 },
    /// `t_n ~ exp(rate n)`.
    Exponential { rate: f64, rss: f64 },
    /// Every tail term is zero.
    Vanishing,
}

impl TailGrowth {
    /// Whether a series with this tail behaviour diverges.
    pub fn divergent(&self) -> bool {
        match *self {
            TailGrowth::Polynomial { degree, .. } => degree >= -1.0 - POLY_DEGREE_SLACK,
            TailGrowth::Exponential { rate, .. } => rate >= -EXP_RATE_FLOOR,
            TailGrowth::Vanishing => false,
        }
    }
}

/// Scan of a series criterion (`sum |b_{n+1}|/(a_{n+1}a_{n+2})` or `sum 1/a_n`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeriesScan {
    pub partial_sum: f64,
    pub terms: usize,
    pub tail: TailGrowth,
    pub divergent: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BoundCertificate {
    /// The tail of the sequence is non-increasing.
    NonIncreasingTail,
    /// The positive increments of the tail form a summable series.
    SummableIncrements,
    None,
}

/// Scan of `a_n +- b_n + a_{n+1}` for the one-sided bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundScan {
    /// Largest value seen over the scan.
    pub c: f64,
    pub last: f64,
    pub certificate: BoundCertificate,
}

impl BoundScan {
    pub fn holds(&self) -> bool {
        self.c.is_finite() && self.certificate != BoundCertificate::None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeterminacyWitness {
    pub scan_n: usize,
    pub series_i: SeriesScan,
    pub bound_ii: BoundScan,
    pub bound_iii: BoundScan,
    pub carleman: SeriesScan,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminacyVerdict {
    pub status: DeterminacyStatus,
    pub witness: DeterminacyWitness,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (my + slope * (x - mx));
            r * r
        })
        .sum();
    (slope, rss)
}

/// Classify the growth of `terms[k]`, indexed by `n = first + k`, over the
/// last half of the slice. Zero terms are dropped; the fit with the smaller
/// residual wins.
pub fn classify_tail(terms: &[f64], first: usize) -> TailGrowth {
    let half = terms.len() / 2;
    let pts: Vec<(f64, f64)> = terms[half..]
        .iter()
        .enumerate()
        .filter(|(_, t)| t.abs() > 0.0 && t.is_finite())
        .map(|(k, t)| ((first + half + k) as f64, t.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return TailGrowth::Vanishing;
    }
    let ns: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let logn: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (rate, rss_e) = least_squares(&ns, &ys);
    let (degree, rss_p) = least_squares(&logn, &ys);
    if rss_p <= rss_e {
        TailGrowth::Polynomial { degree, rss: rss_p }
    } else {
        TailGrowth::Exponential { rate, rss: rss_e }
    }
}

fn series_scan(terms: &[f64], first: usize) -> SeriesScan {
    let partial_sum = terms.iter().map(|t| t.abs()).sum();
    let tail = classify_tail(terms, first);
    SeriesScan { partial_sum, terms: terms.len(), tail, divergent: tail.divergent() }
}

fn bound_scan(s: &[f64]) -> BoundScan {
    let c = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = *s.last().unwrap_or(&f64::NAN);
    let half = s.len() / 2;
    let tail = &s[half..];
    let non_increasing = tail
        .windows(2)
        .all(|w| w[1] <= w[0] + MONOTONE_SLACK * (1.0 + w[0].abs()));
    let certificate = if non_increasing {
        BoundCertificate::NonIncreasingTail
    } else {
        let inc: Vec<f64> = s.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
        if classify_tail(&inc, 1).divergent() {
            BoundCertificate::None
        } else {
            BoundCertificate::SummableIncrements
        }
    };
    BoundScan { c, last, certificate }
}

/// Scan the sufficient determinacy conditions on the first `scan_n` rows of
/// `coeffs` (which needs `b.len() >= scan_n + 1` and `a.len() >= scan_n + 2`).
///
/// Conditions are tried in the order: upper bound, lower bound, the
/// `|b|/(a a)` series, Carleman. Indeterminacy is never asserted.
pub fn determinacy(coeffs: &OrthonormalCoeffs, scan_n: usize) -> DeterminacyVerdict {
    let scan_n = scan_n
        .max(MIN_SCAN)
        .min(coeffs.b.len().saturating_sub(1))
        .min(coeffs.a.len().saturating_sub(2));
    let a = &coeffs.a;
    let b = &coeffs.b;
    let s_i: Vec<f64> = (0..scan_n).map(|n| b[n + 1].abs() / (a[n + 1] * a[n + 2])).collect();
    let plus: Vec<f64> = (0..scan_n).map(|n| a[n] + b[n] + a[n + 1]).collect();
    let minus: Vec<f64> = (0..scan_n).map(|n| a[n] - b[n] + a[n + 1]).collect();
    let carl: Vec<f64> = (1..=scan_n).map(|n| 1.0 / a[n]).collect();

    let witness = DeterminacyWitness {
        scan_n,
        series_i: series_scan(&s_i, 0),
        bound_ii: bound_scan(&plus),
        bound_iii: bound_scan(&minus),
        carleman: series_scan(&carl, 1),
    };
    let status = if witness.bound_ii.holds() {
        DeterminacyStatus::DeterminateByIi
    } else if witness.bound_iii.holds() {
        DeterminacyStatus::DeterminateByIii
    } else if witness.series_i.divergent {
        DeterminacyStatus::DeterminateByI
    } else if witness.carleman.divergent {
        DeterminacyStatus::DeterminateByCarleman
    } else {
        DeterminacyStatus::Inconclusive
    };
    DeterminacyVerdict { status, witness }
}

/// Interval `(A, B)` containing every zero of `p_n`, from
/// `x_j, y_j = (b_j + b_{j-1})/2 +- sqrt((b_j - b_{j-1})^2 + 16 a_j^2)/2`,
/// `1 <= j < n`. For `n == 1` the single zero `b_0` is returned twice.
pub fn zero_bounds(coeffs: &OrthonormalCoeffs, n: usize) -> (f64, f64) {
    if n <= 1 {
        return (coeffs.b[0], coeffs.b[0]);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 1..n {
        let (bj, bp, aj) = (coeffs.b[j], coeffs.b[j - 1], coeffs.a[j]);
        let mid = 0.5 * (bj + bp);
        let rad = 0.5 * ((bj - bp).powi(2) + 16.0 * aj * aj).sqrt();
        hi = hi.max(mid + rad);
        lo = lo.min(mid - rad);
    }
    (lo, hi)
}

/// Closed-form discrete eigenvalues of the Laguerre models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscreteSpectrum {
    /// `E_0 > E_1 > ...`.
    pub values: Vec<f64>,
    /// The extra point carried by the removed constants (no potential only).
    pub null_space_origin: Option<f64>,
}

/// Without a potential: `{0}` and `E_k = (k+1)(k-alpha)` for
/// `k + (1-alpha)/2 < 0`. With `gamma`: `E_k = (k-gamma)(k-gamma-alpha-1)` for
/// `k - gamma - (1+alpha)/2 < 0`.
pub fn cdh_discrete_eigs(alpha: f64, gamma: Option<f64>) -> Result<DiscreteSpectrum> {
    if !(alpha > -1.0) {
        return Err(out_of_range("alpha", alpha, "alpha > -1"));
    }
    let mut values = Vec::new();
    match gamma {
        None => {
            let mut k = 0.0;
            while k + 0.5 * (1.0 - alpha) < 0.0 {
                values.push((k + 1.0) * (k - alpha));
                k += 1.0;
            }
            Ok(DiscreteSpectrum { values, null_space_origin: Some(0.0) })
        }
        Some(g) => {
            if !g.is_finite() {
                return Err(out_of_range("gamma", g, "finite"));
            }
            let mut k = 0.0;
            while k - g - 0.5 * (1.0 + alpha) < 0.0 {
                values.push((k - g) * (k - g - alpha - 1.0));
                k += 1.0;
            }
            Ok(DiscreteSpectrum { values, null_space_origin: None })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumReport {
    pub model: String,
    pub provenance: String,
    pub trunc_size: usize,
    pub eigenvalues_desc: Vec<f64>,
    /// First row of each irreducible block of the truncation.
    pub block_starts: Vec<usize>,
    pub zero_bound_interval: (f64, f64),
    pub predicted_discrete: Option<Vec<f64>>,
    pub null_space_origin: Option<f64>,
    pub continuous_edge: Option<f64>,
    pub determinacy: DeterminacyVerdict,
    pub spectral_map_applied: bool,
}

/// Eigenvalues of the `n x n` truncation, descending, merged over its
/// irreducible blocks.
pub fn truncated_eigenvalues(op: &JacobiOperator, n: usize) -> (Vec<f64>, Vec<usize>) {
    let blocks = truncate_blocks(op, n);
    let starts = blocks.iter().map(|b| b.0).collect();
    let mut eig: Vec<f64> = blocks.iter().flat_map(|(_, t)| t.eigenvalues()).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    (eig, starts)
}

pub fn spectrum_report(op: &JacobiOperator, n: usize) -> Result<SpectrumReport> {
    if n < 2 {
        return Err(out_of_range("N", n as f64, "N >= 2"));
    }
    let (eigenvalues_desc, block_starts) = truncated_eigenvalues(op, n);
    let zero_bound_interval = zero_bounds(&op.coeffs(n), n);
    let scan = DEFAULT_SCAN.max(n.min(400));
    let det = determinacy(&op.determinacy_coeffs(scan + 2), scan);

    let id = op.identify();
    let (predicted, null_space, edge) = match id {
        ModelId::ContinuousDualHahn { map, .. } => {
            let ds = match op.model {
                Model::LaguerreTl { alpha } => Some(cdh_discrete_eigs(alpha, None)?),
                Model::LaguerreS { alpha, gamma } => Some(cdh_discrete_eigs(alpha, Some(gamma))?),
                _ => None,
            };
            match ds {
                Some(d) => (Some(d.values), d.null_space_origin, Some(map.tau)),
                None => (None, None, Some(map.tau)),
            }
        }
        ModelId::Laguerre { map, .. } => (None, None, Some(map.tau)),
        ModelId::Meixner { map, .. } => (
            Some((0..MEIXNER_LISTED).map(|k| map.apply(k as f64)).collect()),
            None,
            None,
        ),
        ModelId::MeixnerPollaczek { .. } | ModelId::Unknown => (None, None, None),
    };
    Ok(SpectrumReport {
        model: op.model.tag().to_string(),
        provenance: op.provenance.clone(),
        trunc_size: n,
        eigenvalues_desc,
        block_starts,
        zero_bound_interval,
        predicted_discrete: predicted,
        null_space_origin: null_space,
        continuous_edge: edge,
        determinacy: det,
        spectral_map_applied: id.map().is_some(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub k: i64,
    pub x: f64,
    pub mass: f64,
    /// `ln(mass)`, finite where `mass` underflows.
    pub ln_mass: f64,
}

/// Support points and masses of the extremal q^{-1}-Hermite measure with
/// parameter `a`, for `-K <= k <= K`.
pub fn qhermite_support(a: f64, q: f64, k_max: usize) -> Result<Vec<LatticePoint>> {
    FamilySpec::q_inv_hermite(q, a)?;
    if !(q < a && a < 1.0) {
        return Err(out_of_range("a", a, "q < a < 1"));
    }
    let k_max = k_max as i64;
    let ln_den = qhermite_mass_denominator(a, q).0.ln();
    Ok((-k_max..=k_max)
        .map(|k| {
            let kf = k as f64;
            let ln_mass = 4.0 * kf * a.ln() + kf * (2.0 * kf - 1.0) * q.ln()
                + (a * a * q.powi(2 * k as i32)).ln_1p()
                - ln_den;
            LatticePoint { k, x: qhermite_point(k, a, q), mass: qhermite_mass(k, a, q), ln_mass }
        })
        .collect())
}
