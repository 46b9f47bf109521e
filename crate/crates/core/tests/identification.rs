use jmatrix::operators::*;
use jmatrix::recurrences::FamilySpec;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// Max relative gap between the operator's coefficients and those of the
/// identified family pushed through `E = sigma x + tau`.
fn mapped_gap(op: &JacobiOperator, len: usize) -> f64 {
    let id = op.identify();
    let map = id.map().expect("identified");
    let fam = id.family().expect("valid family").orthonormal(len);
    let own = op.coeffs(len);
    let mut worst = 0.0f64;
    for n in 0..len {
        worst = worst.max(rel(own.b[n], map.apply(fam.b[n])));
        if n >= 1 {
            worst = worst.max(rel(own.a[n], map.sigma.abs() * fam.a[n]));
        }
    }
    worst
}

#[test]
fn laguerre_tl_matches_cdh_recurrence() {
    for alpha in [-0.5, 0.0, 1.3, 2.0] {
        let op = build_laguerre_tl(alpha).unwrap();
        let monic = op.recurrence_monic(41);
        for m in 0..=40 {
            let mf = m as f64;
            let a = -(mf + 1.0) * (2.0 * mf + alpha + 2.0);
            assert!(rel(monic.alpha[m], a) < 1e-12, "alpha={alpha} m={m}");
            if m >= 1 {
                let b = mf * mf * (mf + 1.0) * (mf + alpha + 1.0);
                assert!(rel(monic.beta[m], b) < 1e-12, "alpha={alpha} m={m}");
            }
        }
        assert!(mapped_gap(&op, 41) < 1e-12);
    }
}

#[test]
fn laguerre_tl_at_zero_is_cdh_half_half_three_halves() {
    let op = build_laguerre_tl(0.0).unwrap();
    match op.identify() {
        ModelId::ContinuousDualHahn { a, b, c, map } => {
            assert_eq!((a, b, c), (0.5, 0.5, 1.5));
            assert_eq!(map.tau, -0.25);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn laguerre_s_matches_its_cdh_subfamily() {
    for (alpha, gamma) in [(0.5, 0.3), (0.0, -0.2), (1.3, 0.7), (2.0, 1.5)] {
        let op = build_laguerre_s(alpha, gamma).unwrap();
        assert!(mapped_gap(&op, 41) < 1e-12, "alpha={alpha} gamma={gamma}");
    }
}

#[test]
fn linear_potential_three_regimes() {
    for alpha in [0.0, 1.5] {
        let lag = FamilySpec::laguerre(alpha).unwrap();
        let lambda = 0.5 * (alpha + 1.0);

        let op = build_linear_potential(lag, 0.25, 1.0, 0.0).unwrap();
        match op.identify() {
            ModelId::Laguerre { alpha: a, .. } => assert_eq!(a, alpha),
            other => panic!("{other:?}"),
        }
        assert!(mapped_gap(&op, 41) < 1e-12);

        let op = build_linear_potential(lag, 0.5, 1.0, 0.0).unwrap();
        match op.identify() {
            ModelId::MeixnerPollaczek { lambda: l, phi, .. } => {
                assert!((l - lambda).abs() < 1e-15);
                assert!((phi - PI / 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(mapped_gap(&op, 41) < 1e-12);

        let op = build_linear_potential(lag, 2.0 / 9.0, 1.0, 0.0).unwrap();
        match op.identify() {
            ModelId::Meixner { beta, c, .. } => {
                assert!((beta - (alpha + 1.0)).abs() < 1e-15);
                assert!((c - 0.25).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(mapped_gap(&op, 41) < 1e-12);
    }
}

#[test]
fn unidentified_models_report_unknown() {
    let op = build_linear_potential(FamilySpec::ultraspherical(0.7).unwrap(), 0.3, 1.0, 0.0).unwrap();
    assert_eq!(op.identify(), ModelId::Unknown);
    assert!(build_meixner_tm(2.0, 0.3).unwrap().identify().map().is_none());
}

#[test]
fn ultraspherical_potential_coefficients() {
    let (nu, gamma, xi) = (0.7, 0.3, 1.7);
    let op = build_linear_potential(FamilySpec::ultraspherical(nu).unwrap(), gamma, xi, 0.0).unwrap();
    let r = op.recurrence_coeffs(30);
    for n in 1..30 {
        let nf = n as f64;
        assert!(rel(r.b[n], -nf * (nf + 2.0 * nu) / xi) < 1e-13);
        let a2 = gamma * gamma * nf * (nf + 2.0 * nu - 1.0) / (4.0 * xi * xi * (nf + nu) * (nf + nu - 1.0));
        assert!(rel(r.a[n] * r.a[n], a2) < 1e-13, "n={n}");
    }
}

#[test]
fn asc_recurrence_matches_monic_form() {
    let (t1, t2, q): (f64, f64, f64) = (0.3, 0.4, 0.5);
    let op = build_asc_l(t1, t2, q).unwrap();
    let monic = op.recurrence_monic(30);
    for n in 0..29 {
        let qn = q.powi(n as i32);
        let a = qn.recip() * (1.0 - qn * q) * (1.0 - t1 * t2 * qn * q + t2 * t2 * q * (1.0 - qn));
        assert!(rel(monic.alpha[n], a) < 1e-12, "n={n}");
        if n >= 1 {
            let b = t2 * t2 * q * q / (qn * qn) * (1.0 - qn * q) * (1.0 - qn).powi(2) * (1.0 - t1 * t2 * qn);
            assert!(rel(monic.beta[n], b) < 1e-12, "n={n}");
        }
    }
}

#[test]
fn meixner_tm_gives_birth_death_polynomials() {
    let (beta, c) = (1.0, 0.5);
    let op = build_meixner_tm(beta, c).unwrap();
    let monic = op.recurrence_monic(30);
    assert!((monic.alpha[0] - 2.0).abs() < 1e-14);
    let bd = bd_decompose(&monic, None).unwrap();
    for n in 0..29 {
        let nf = n as f64;
        assert!(rel(bd.birth[n], (nf + 1.0) * (beta + nf + 1.0)) < 1e-12);
        assert!(rel(bd.death[n], c * nf * (nf + 1.0)) < 1e-12);
    }
}

#[test]
fn laguerre_birth_death_rates_validate() {
    let monic = FamilySpec::laguerre(0.4).unwrap().monic(30);
    let bd = bd_decompose(&monic, None).unwrap();
    for n in 0..29 {
        assert!(rel(bd.birth[n], n as f64 + 1.4) < 1e-12);
        assert!(rel(bd.death[n], n as f64) < 1e-12);
    }
    validate_bd(&monic, &bd).unwrap();
}

#[test]
fn asc_upper_and_lower_couplings_agree() {
    // the builder rejects parameters where the two off-diagonal formulas differ for m <= 40
    for t1 in [-0.8, -0.3, 0.1, 0.4, 0.9] {
        for t2 in [-0.7, -0.1, 0.2, 0.6, 0.95] {
            for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
                build_asc_l(t1, t2, q).unwrap_or_else(|e| panic!("t1={t1} t2={t2} q={q}: {e}"));
            }
        }
    }
}
