//! Independent matrix elements `<phi_m, T phi_n>` computed from the analytic
//! definition of each operator: Gauss quadrature with structural derivative
//! formulas for differential operators, lattice sums for difference
//! operators, and a periodic midpoint rule in `theta` for Askey–Wilson
//! operators. Nothing here reads the closed-form entries of `operators`.

use crate::error::{Error, Result};
use crate::jacobi::{golub_welsch, QuadratureRule};
use crate::operators::{JacobiOperator, Model};
use crate::qcalculus::{aw_dq_z, sinh_aq_u, sinh_dq_u, z_form, SinhParametrizedFn};
use crate::recurrences::{
    asc_weight_z, cdh_density_y, eval_with_derivatives, q_ultraspherical_weight_z, qhermite_mass, qhermite_point,
    FamilyId, FamilySpec,
};
use crate::special::{compensated_sum, factorial, gamma, pochhammer, CompensatedSum};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative agreement required between two quadrature orders.
pub const ORDER_TOL: f64 = 1e-10;
/// Relative size below which lattice-sum terms count as tail.
pub const TAIL_TOL: f64 = 1e-18;
const MAX_THETA_NODES: usize = 1 << 16;
const MAX_LATTICE: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LaguerreModel {
    Tl,
    S { gamma: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MeixnerModel {
    Tm,
    S { gamma: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub model: String,
    pub provenance: String,
    pub max_tridiag_residual: f64,
    pub max_symmetry_defect: f64,
    pub max_off_tridiag_leak: f64,
    /// Operator rows `0..indices_checked` were compared.
    pub indices_checked: usize,
    pub pairs_checked: usize,
    /// Largest quadrature order (or lattice / node count) used.
    pub quadrature_order: usize,
    pub tol: f64,
    pub passed: bool,
}

fn agree(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= ORDER_TOL * (scale + a.abs().max(b.abs()))
}

/// Gauss rule with `n` nodes for the measure of `family`.
pub fn gauss_rule(family: &FamilySpec, n: usize) -> QuadratureRule {
    golub_welsch(&family.orthonormal(n), n, family.total_mass())
}

/// Evaluate `f` with two Gauss orders and insist they agree.
fn gauss_checked<F: Fn(&QuadratureRule) -> f64>(family: &FamilySpec, order: usize, f: F) -> Result<(f64, usize)> {
    let lo = f(&gauss_rule(family, order));
    let hi_order = order + order / 2 + 4;
    let hi = f(&gauss_rule(family, hi_order));
    if !agree(lo, hi, 1.0) {
        return Err(Error::QuadratureOrderInsufficient((lo - hi).abs()));
    }
    Ok((hi, hi_order))
}

fn laguerre_std(alpha: f64, n: isize, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    FamilySpec::laguerre(alpha).expect("alpha checked by caller").eval_standard(n as usize, x)
}

fn laguerre_norm(alpha: f64, n: usize) -> f64 {
    (crate::special::ln_gamma(alpha + n as f64 + 1.0) - crate::special::ln_gamma(n as f64 + 1.0)).exp()
}

/// `<L_m, T L_n> / sqrt(h_m h_n)` in the weight `x^alpha e^{-x}`, basis
/// indices (no removal of constants). Derivatives come from
/// `d/dx L_n^{(alpha)} = -L_{n-1}^{(alpha+1)}`.
pub fn oracle_element_laguerre(m: usize, n: usize, alpha: f64, model: LaguerreModel) -> Result<f64> {
    let family = FamilySpec::laguerre(alpha)?;
    let t_apply = |x: f64| {
        let ni = n as isize;
        let f = laguerre_std(alpha, ni, x);
        let f1 = -laguerre_std(alpha + 1.0, ni - 1, x);
        let f2 = laguerre_std(alpha + 2.0, ni - 2, x);
        let tl = x * x * f2 + (alpha + 2.0) * x * f1 - x * x * f1;
        match model {
            LaguerreModel::Tl => tl,
            LaguerreModel::S { gamma } => tl + gamma * x * f,
        }
    };
    let order = m + n + 6;
    let (v, _) = gauss_checked(&family, order, |r| r.integrate(|x| laguerre_std(alpha, m as isize, x) * t_apply(x)))?;
    Ok(v / (laguerre_norm(alpha, m) * laguerre_norm(alpha, n)).sqrt())
}

fn meixner_norm(beta: f64, c: f64, n: usize) -> f64 {
    c.powi(-(n as i32)) * factorial(n) / (pochhammer(beta, n) * (1.0 - c).powf(beta))
}

/// Sum `sum_x w(x) g(x)` over `x = 0, 1, ...` with the Meixner weight until
/// the tail is negligible.
fn meixner_sum<G: Fn(f64) -> f64>(beta: f64, c: f64, g: G) -> Result<(f64, usize)> {
    let mut acc = CompensatedSum::new();
    let mut abs_acc = 0.0;
    let mut w = 1.0;
    let mut small_run = 0;
    for x in 0..MAX_LATTICE {
        let xf = x as f64;
        let term = w * g(xf);
        acc.add(term);
        abs_acc += term.abs();
        // the weight ratio c (beta+x)/(x+1) must have dropped below one
        // before a small term can be trusted as tail
        let decreasing = c * (beta + xf) < xf + 1.0;
        if decreasing && term.abs() <= TAIL_TOL * abs_acc {
            small_run += 1;
            if small_run >= 8 {
                return Ok((acc.value(), x + 1));
            }
        } else {
            small_run = 0;
        }
        w *= c * (beta + xf) / (xf + 1.0);
    }
    Err(Error::TailNotConverged)
}

/// `<M_m, T M_n> / sqrt(h_m h_n)` over the Meixner weight, basis indices.
///
/// `T_M f(x) = (x!/(c^x (beta)_x)) nabla((beta+2)_x c^x/x! Delta f)(x)`; the two
/// weight ratios are `(beta+x)(beta+x+1)/(beta(beta+1))` and
/// `x(beta+x)/(c beta(beta+1))`.
pub fn oracle_element_meixner(m: usize, n: usize, beta: f64, c: f64, model: MeixnerModel) -> Result<f64> {
    meixner_element(m, n, beta, c, model).map(|(v, _)| v)
}

fn meixner_element(m: usize, n: usize, beta: f64, c: f64, model: MeixnerModel) -> Result<(f64, usize)> {
    let family = FamilySpec::meixner(beta, c)?;
    let k = c * beta * (beta + 1.0);
    let f = |x: f64| family.eval_standard(n, x);
    let t_apply = |x: f64| {
        let fwd = crate::qcalculus::delta(f, x);
        let bwd = if x == 0.0 { 0.0 } else { crate::qcalculus::nabla(f, x) };
        let tm = (beta + x) * (beta + x + 1.0) / (beta * (beta + 1.0)) * fwd - x * (beta + x) / k * bwd;
        match model {
            MeixnerModel::Tm => tm,
            MeixnerModel::S { gamma } => tm + (1.0 - c) * gamma / k * x * f(x),
        }
    };
    let (v, terms) = meixner_sum(beta, c, |x| family.eval_standard(m, x) * t_apply(x))?;
    Ok((v / (meixner_norm(beta, c, m) * meixner_norm(beta, c, n)).sqrt(), terms))
}

/// `(pi/K) sum f(theta_j)` on midpoints `theta_j = (j + 1/2) pi / K`, doubling
/// `K` until two successive values agree.
pub fn theta_integral<F: Fn(f64) -> f64>(f: F) -> Result<(f64, usize)> {
    // also returns the integral of |f|, the scale for the stopping test
    let rule = |k: usize| {
        let h = PI / k as f64;
        let vals: Vec<f64> = (0..k).map(|j| f((j as f64 + 0.5) * h)).collect();
        (h * compensated_sum(vals.iter().copied()), h * vals.iter().map(|v| v.abs()).sum::<f64>())
    };
    let mut k = 64;
    let (mut prev, _) = rule(k);
    while k < MAX_THETA_NODES {
        k *= 2;
        let (cur, mag) = rule(k);
        if (cur - prev).abs() <= 1e-13 * (1.0 + mag) {
            return Ok((cur, k));
        }
        prev = cur;
    }
    Err(Error::QuadratureOrderInsufficient(prev))
}

/// `int_{-1}^{1} f(x) D_q[ W D_q g ](x) dx` where `W` is a weight given on
/// the z-plane (already carrying `2i/(z - 1/z)`), `f` and `g` are polynomial
/// in `x` and evaluated at complex arguments.
///
/// With `z = e^{i theta}` the Askey–Wilson denominator is
/// `(q^{1/2} - q^{-1/2}) i sin(theta)`, which cancels `dx = sin(theta) d theta`.
pub fn aw_sandwich<F, G, W>(f: F, g: G, weight: W, q: f64) -> Result<(f64, usize)>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
    W: Fn(Complex64) -> Complex64,
{
    let s = q.sqrt();
    let gz = z_form(&g);
    let inner = |z: Complex64| -> Complex64 {
        let d = aw_dq_z(&gz, z, q).unwrap_or(Complex64::new(f64::NAN, 0.0));
        weight(z) * d
    };
    let den = Complex64::new(0.0, s - 1.0 / s);
    theta_integral(|theta| {
        let z = Complex64::from_polar(1.0, theta);
        let num = inner(z * s) - inner(z / s);
        (f(Complex64::new(theta.cos(), 0.0)) * num / den).re
    })
}

/// `int_{-1}^{1} f(x) w(x) dx` with `w` given on the z-plane.
pub fn weighted_theta_integral<F, W>(f: F, weight: W) -> Result<(f64, usize)>
where
    F: Fn(f64) -> f64,
    W: Fn(Complex64) -> Complex64,
{
    theta_integral(|theta| {
        let z = Complex64::from_polar(1.0, theta);
        f(theta.cos()) * (weight(z) * theta.sin()).re
    })
}

/// Standard ASC polynomials divided by `sqrt(h_n)`, evaluated at complex `x`.
fn orthonormal_standard_complex(family: &FamilySpec, n: usize, x: Complex64) -> Complex64 {
    family.eval_orthonormal_complex(n, x) * family.leading(n).signum()
}

/// Elements of `T + gamma x` for the continuous linear-potential families
/// and of the Al-Salam–Chihara operator, orthonormal basis indices.
pub fn oracle_element_continuous(op: &JacobiOperator, m: usize, n: usize) -> Result<(f64, usize)> {
    match op.model {
        Model::LinearPotential { family, gamma, .. } => match family.id {
            FamilyId::QUltraspherical => {
                let (beta, q) = (family.params.beta, family.params.q);
                let fm = |x: Complex64| family.eval_orthonormal_complex(m, x);
                let gn = |x: Complex64| family.eval_orthonormal_complex(n, x);
                let (t, k1) = aw_sandwich(fm, gn, |z| q_ultraspherical_weight_z(z, q * beta, q), q)?;
                let (x, k2) = weighted_theta_integral(
                    |x| x * family.eval_orthonormal(m, x) * family.eval_orthonormal(n, x),
                    |z| q_ultraspherical_weight_z(z, beta, q),
                )?;
                Ok((t + gamma * x, k1.max(k2)))
            }
            FamilyId::Laguerre | FamilyId::Ultraspherical | FamilyId::ChebyshevU => {
                let len = m.max(n) + 1;
                let monic = family.monic(len);
                let scale = |k: usize| 1.0 / family.monic_norm(k).sqrt();
                let p = &family.params;
                let (sm, sn) = (scale(m), scale(n));
                let integrand = |x: f64| {
                    let (f, f1, f2) = eval_with_derivatives(&monic, n, x);
                    let t = match family.id {
                        FamilyId::Laguerre => x * f2 + (p.alpha + 1.0 - x) * f1,
                        FamilyId::Ultraspherical => (1.0 - x * x) * f2 - (2.0 * p.nu + 1.0) * x * f1,
                        _ => (1.0 - x * x) * f2 - 3.0 * x * f1,
                    };
                    sm * eval_with_derivatives(&monic, m, x).0 * sn * (t + gamma * x * f)
                };
                gauss_checked(&family, m + n + 6, |r| r.integrate(integrand))
            }
            other => Err(Error::Unsupported(format!("no oracle for {other:?}"))),
        },
        Model::AscL { t1, t2, q } => {
            let fam = op.basis;
            let s = q.sqrt();
            aw_sandwich(
                |x| orthonormal_standard_complex(&fam, m, x),
                |x| orthonormal_standard_complex(&fam, n, x),
                |z| asc_weight_z(z, s * t1, q * s * t2, q),
                q,
            )
        }
        _ => Err(Error::Unsupported("not a continuous-weight model".into())),
    }
}

/// `q^{n(n+1)/4} h_n(x|q) / sqrt((q;q)_n)`.
fn qhermite_orthonormal(family: &FamilySpec, n: usize, x: f64) -> f64 {
    let q = family.params.q;
    let nf = n as f64;
    q.powf(nf * (nf + 1.0) / 4.0) * family.eval_standard(n, x) / crate::special::qpoch(q, q, n).sqrt()
}

/// Sum `sum_k mu_k g(x_k)` over the bilateral lattice until both tails are
/// negligible.
pub fn qhermite_lattice_sum<G: Fn(f64) -> f64>(a: f64, q: f64, g: G) -> Result<(f64, usize)> {
    let mut acc = CompensatedSum::new();
    let mut abs_acc = 0.0;
    let term = |k: i64| {
        let mass = qhermite_mass(k, a, q);
        if mass == 0.0 {
            0.0
        } else {
            mass * g(qhermite_point(k, a, q))
        }
    };
    let t0 = term(0);
    acc.add(t0);
    abs_acc += t0.abs();
    let mut k = 1;
    let mut small_run = 0;
    while (k as usize) < MAX_LATTICE {
        let (tp, tm) = (term(k), term(-k));
        if !tp.is_finite() || !tm.is_finite() {
            return Err(Error::TailNotConverged);
        }
        acc.add(tp);
        acc.add(tm);
        abs_acc += tp.abs() + tm.abs();
        if tp.abs() + tm.abs() <= TAIL_TOL * abs_acc {
            small_run += 1;
            if small_run >= 3 {
                return Ok((acc.value(), 2 * k as usize + 1));
            }
        } else {
            small_run = 0;
        }
        k += 1;
    }
    Err(Error::TailNotConverged)
}

/// `<h~_m, (T_H + gamma x) h~_n>` on the extremal measure with parameter `a`,
/// `T_H y = q^{1/2}(1+2x^2) D_q^2 y + 4q/(q-1) x A_q D_q y` in the
/// `x = sinh(xi)` parametrization.
pub fn oracle_element_qhermite(m: usize, n: usize, q: f64, gamma: f64, a: f64) -> Result<(f64, usize)> {
    let family = FamilySpec::q_inv_hermite(q, a)?;
    let f = SinhParametrizedFn::new(|u: f64| qhermite_orthonormal(&family, n, 0.5 * (u - 1.0 / u)));
    let df = SinhParametrizedFn::new(|u: f64| sinh_dq_u(&f, u, q));
    let t_apply = |k: i64| {
        let u = q.powi(-(k as i32)) / a;
        let x = 0.5 * (u - 1.0 / u);
        let d2 = sinh_dq_u(&df, u, q);
        let ad = sinh_aq_u(&df, u, q);
        q.sqrt() * (1.0 + 2.0 * x * x) * d2 + 4.0 * q / (q - 1.0) * x * ad + gamma * x * f.at(u)
    };
    // lattice sum by index so that T is evaluated exactly on u_k = q^{-k}/a
    let mut acc = CompensatedSum::new();
    let mut abs_acc = 0.0;
    let mut small_run = 0;
    let mut k: i64 = 0;
    loop {
        let ks: Vec<i64> = if k == 0 { vec![0] } else { vec![k, -k] };
        let mut step = 0.0;
        for &kk in &ks {
            let mass = qhermite_mass(kk, a, q);
            if mass == 0.0 {
                continue;
            }
            let x = qhermite_point(kk, a, q);
            let t = mass * qhermite_orthonormal(&family, m, x) * t_apply(kk);
            if !t.is_finite() {
                return Err(Error::TailNotConverged);
            }
            acc.add(t);
            step += t.abs();
        }
        abs_acc += step;
        if k > 0 && step <= TAIL_TOL * abs_acc {
            small_run += 1;
            if small_run >= 3 {
                return Ok((acc.value(), 2 * k as usize + 1));
            }
        } else {
            small_run = 0;
        }
        k += 1;
        if k as usize > MAX_LATTICE {
            return Err(Error::TailNotConverged);
        }
    }
}

/// Gram matrix of `h~_0..h~_{n-1}` under the extremal measure.
pub fn qhermite_gram(n: usize, q: f64, a: f64) -> Result<Vec<Vec<f64>>> {
    let family = FamilySpec::q_inv_hermite(q, a)?;
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let (v, _) = qhermite_lattice_sum(a, q, |x| {
                qhermite_orthonormal(&family, i, x) * qhermite_orthonormal(&family, j, x)
            })?;
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// Oracle value of operator entry `(m, n)` (operator rows) and the order used.
pub fn oracle_element(op: &JacobiOperator, m: usize, n: usize) -> Result<(f64, usize)> {
    let shift = usize::from(op.modded_out_constants);
    let (bm, bn) = (m + shift, n + shift);
    match op.model {
        Model::LaguerreTl { alpha } => {
            Ok((oracle_element_laguerre(bm, bn, alpha, LaguerreModel::Tl)?, bm + bn + 6))
        }
        Model::LaguerreS { alpha, gamma } => Ok((
            oracle_element_laguerre(bm, bn, alpha, LaguerreModel::S { gamma })?,
            bm + bn + 6,
        )),
        Model::MeixnerTm { beta, c } => meixner_element(bm, bn, beta, c, MeixnerModel::Tm),
        Model::MeixnerS { beta, c, gamma } => meixner_element(bm, bn, beta, c, MeixnerModel::S { gamma }),
        Model::LinearPotential { .. } | Model::AscL { .. } => oracle_element_continuous(op, bm, bn),
        Model::QHermitePotential { q, gamma, a } => oracle_element_qhermite(bm, bn, q, gamma, a),
    }
}

fn closed_form(op: &JacobiOperator, m: usize, n: usize) -> f64 {
    match m.abs_diff(n) {
        0 => op.diag(m),
        1 => op.coupling(m.max(n)),
        _ => 0.0,
    }
}

/// Compare every closed-form entry with `|m - n| <= 2` on rows `0..n_rows`
/// (plus a fixed random sample of far pairs) against the oracle.
pub fn verify_tridiagonal(op: &JacobiOperator, n_rows: usize, tol: f64) -> Result<VerificationReport> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for m in 0..n_rows {
        for n in m..(m + 3).min(n_rows) {
            pairs.push((m, n));
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    if n_rows > 3 {
        for _ in 0..n_rows {
            let m = rng.random_range(0..n_rows - 3);
            let n = rng.random_range(m + 3..n_rows);
            pairs.push((m, n));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let scale = |m: usize, n: usize| 1.0 + op.diag(m).abs().max(op.diag(n).abs());
    let mut report = VerificationReport {
        model: op.model.tag().into(),
        provenance: op.provenance.clone(),
        max_tridiag_residual: 0.0,
        max_symmetry_defect: 0.0,
        max_off_tridiag_leak: 0.0,
        indices_checked: n_rows,
        pairs_checked: pairs.len(),
        quadrature_order: 0,
        tol,
        passed: false,
    };
    for &(m, n) in &pairs {
        let (v, order) = oracle_element(op, m, n)?;
        report.quadrature_order = report.quadrature_order.max(order);
        let s = scale(m, n);
        let diff = (v - closed_form(op, m, n)).abs() / s;
        if m.abs_diff(n) <= 1 {
            report.max_tridiag_residual = report.max_tridiag_residual.max(diff);
        } else {
            report.max_off_tridiag_leak = report.max_off_tridiag_leak.max(v.abs() / s);
        }
        if m != n {
            let (w, _) = oracle_element(op, n, m)?;
            report.max_symmetry_defect = report.max_symmetry_defect.max((v - w).abs() / s);
        }
    }
    report.passed =
        report.max_tridiag_residual < tol && report.max_off_tridiag_leak < tol && report.max_symmetry_defect < tol;
    Ok(report)
}

/// `|Gamma(a+iy) Gamma(b+iy) Gamma(c+iy) / Gamma(2iy)|^2`.
pub fn cdh_weight(y: f64, a: f64, b: f64, c: f64) -> f64 {
    use crate::special::ln_abs_gamma_complex as lg;
    if y == 0.0 {
        return 0.0;
    }
    let v = lg(Complex64::new(a, y)) + lg(Complex64::new(b, y)) + lg(Complex64::new(c, y))
        - lg(Complex64::new(0.0, 2.0 * y));
    (2.0 * v).exp()
}

/// Indices `k = 0..=M` of the discrete masses, `M = max{k : k + a < 0}`.
pub fn cdh_mass_count(a: f64) -> Option<usize> {
    if a >= 0.0 {
        None
    } else {
        Some((-a).ceil() as usize - 1)
    }
}

/// Mass attached to `x = -(a+k)^2`, already divided by the left-hand
/// normalization so that the total measure is probability-like.
pub fn cdh_discrete_mass(k: usize, a: f64, b: f64, c: f64) -> f64 {
    let pre = gamma(b - a) * gamma(c - a) / (gamma(-2.0 * a) * gamma(b + c));
    let num = pochhammer(2.0 * a, k) * pochhammer(a + 1.0, k) * pochhammer(a + b, k) * pochhammer(a + c, k);
    let den = factorial(k) * pochhammer(a, k) * pochhammer(a - b + 1.0, k) * pochhammer(a - c + 1.0, k);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    pre * sign * num / den
}

/// Composite Gauss–Legendre integral of `f` over `[0, inf)` in unit panels,
/// stopping once a panel contributes below `1e-16` of the running total.
fn half_line_integral<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    let legendre = FamilySpec::ultraspherical(0.5).expect("valid parameter");
    let rule = gauss_rule(&legendre, 24);
    let mut acc = CompensatedSum::new();
    let mut abs_acc = 0.0;
    for panel in 0..4000 {
        let lo = panel as f64;
        let part = 0.5 * rule.integrate(|t| f(lo + 0.5 * (t + 1.0)));
        acc.add(part);
        abs_acc += part.abs();
        if panel > 4 && part.abs() <= 1e-16 * abs_acc {
            return Ok(acc.value());
        }
    }
    Err(Error::TailNotConverged)
}

/// Relative residual of the continuous dual Hahn orthogonality relation for
/// `S_m`, `S_n`: continuous part on `y in [0, inf)` plus the discrete masses.
pub fn cdh_orthogonality_check(m: usize, n: usize, a: f64, b: f64, c: f64) -> Result<f64> {
    let family = FamilySpec::continuous_dual_hahn(a, b, c)?;
    let s = |k: usize, x: f64| family.eval_standard(k, x);
    let cont = half_line_integral(|y| s(m, y * y) * s(n, y * y) * cdh_density_y(y, a, b, c))?;
    let mut disc = 0.0;
    if let Some(top) = cdh_mass_count(a) {
        for k in 0..=top {
            let x = -(a + k as f64).powi(2);
            disc += s(m, x) * s(n, x) * cdh_discrete_mass(k, a, b, c);
        }
    }
    let norm = |k: usize| factorial(k) * pochhammer(a + b, k) * pochhammer(a + c, k) * pochhammer(b + c, k);
    let rhs = if m == n { norm(n) } else { 0.0 };
    Ok((cont + disc - rhs).abs() / (norm(m) * norm(n)).sqrt())
}

/// Operators whose quadratic forms have a definite sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PositivityModel {
    /// `-(1/w) D_q [w(x; q beta) D_q]` on the q-ultraspherical weight.
    QUltraspherical { beta: f64, q: f64 },
    /// The Laguerre operator `T_L`, expected negative semidefinite.
    LaguerreTl { alpha: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub min_quotient: f64,
    pub max_quotient: f64,
    pub trials: usize,
}

/// Rayleigh quotients `<f, A f> / <f, f>` for random polynomials of degree at
/// most 10; a zero vector counts as quotient 0.
pub fn positivity_check(model: PositivityModel, trials: usize, seed: u64) -> Result<PositivityReport> {
    const DEG: usize = 10;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = PositivityReport {
        min_quotient: f64::INFINITY,
        max_quotient: f64::NEG_INFINITY,
        trials,
    };
    for t in 0..trials {
        let deg = rng.random_range(0..=DEG);
        let coef: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
        let quotient = if t == 0 {
            0.0
        } else {
            rayleigh(model, &coef)?
        };
        report.min_quotient = report.min_quotient.min(quotient);
        report.max_quotient = report.max_quotient.max(quotient);
    }
    Ok(report)
}

/// Power-basis polynomial with coefficients `coef` (ascending).
fn horner<T>(coef: &[f64], x: T) -> T
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Add<f64, Output = T> + From<f64>,
{
    coef.iter().rev().fold(T::from(0.0), |acc, &c| acc * x + c)
}

fn rayleigh(model: PositivityModel, coef: &[f64]) -> Result<f64> {
    match model {
        PositivityModel::QUltraspherical { beta, q } => {
            let f = |x: Complex64| horner(coef, x);
            let (num, _) = aw_sandwich(f, f, |z| q_ultraspherical_weight_z(z, q * beta, q), q)?;
            let (den, _) = weighted_theta_integral(|x| horner(coef, x).powi(2), |z| {
                q_ultraspherical_weight_z(z, beta, q)
            })?;
            Ok(if den == 0.0 { 0.0 } else { -num / den })
        }
        PositivityModel::LaguerreTl { alpha } => {
            let family = FamilySpec::laguerre(alpha)?;
            let d1: Vec<f64> = coef.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
            let d2: Vec<f64> = d1.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
            let rule = gauss_rule(&family, coef.len() + 4);
            let num = rule.integrate(|x| {
                let (f, f1, f2) = (horner(coef, x), horner(&d1, x), horner(&d2, x));
                f * (x * x * f2 + (alpha + 2.0) * x * f1 - x * x * f1)
            });
            let den = rule.integrate(|x| horner(coef, x).powi(2));
            Ok(if den == 0.0 { 0.0 } else { num / den })
        }
    }
}
