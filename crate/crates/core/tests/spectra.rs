use jmatrix::jacobi::SymTridiagonal;
use jmatrix::operators::*;
use jmatrix::recurrences::{FamilySpec, OrthonormalCoeffs};
use jmatrix::spectra::*;

fn models() -> Vec<JacobiOperator> {
    vec![
        build_laguerre_tl(0.5).unwrap(),
        build_laguerre_tl(2.0).unwrap(),
        build_meixner_tm(2.0, 0.3).unwrap(),
        build_linear_potential(FamilySpec::laguerre(0.5).unwrap(), 0.5, 1.0, 0.0).unwrap(),
        build_linear_potential(FamilySpec::laguerre(1.5).unwrap(), 2.0 / 9.0, 1.0, 0.0).unwrap(),
        build_linear_potential(FamilySpec::ultraspherical(0.7).unwrap(), 0.3, 1.0, 0.0).unwrap(),
        build_linear_potential(FamilySpec::q_ultraspherical(0.5, 0.5).unwrap(), 0.3, 1.0, 0.0).unwrap(),
        build_linear_potential(FamilySpec::chebyshev_u(), 0.3, 1.0, 0.0).unwrap(),
        build_laguerre_s(0.5, 0.3).unwrap(),
        build_laguerre_s_unchecked(0.0, 1.0).unwrap(),
        build_meixner_s(2.0, 0.3, -0.7).unwrap(),
        build_asc_l(0.3, 0.4, 0.5).unwrap(),
        build_qhermite_potential(0.5, 2.0, 0.7).unwrap(),
    ]
}

fn section(c: &OrthonormalCoeffs, n: usize) -> SymTridiagonal {
    SymTridiagonal::new_unchecked(c.b[..n].to_vec(), c.a[1..n].to_vec())
}

#[test]
fn laguerre_tl_isolated_eigenvalue_converges() {
    let op = build_laguerre_tl(2.0).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for n in [100, 200, 400] {
        let r = spectrum_report(&op, n).unwrap();
        let top = r.eigenvalues_desc[0];
        assert!(top > prev && top < -2.0, "N={n}: {top}");
        prev = top;
        assert_eq!(r.continuous_edge, Some(-2.25));
        assert_eq!(r.predicted_discrete, Some(vec![-2.0]));
        assert_eq!(r.null_space_origin, Some(0.0));
    }
    assert!((prev + 2.0).abs() < 5e-2);
}

#[test]
fn laguerre_s_discrete_eigenvalues_are_reached() {
    let op = build_laguerre_s_unchecked(0.0, 1.0).unwrap();
    for n in [100, 200, 400] {
        let r = spectrum_report(&op, n).unwrap();
        assert!((r.eigenvalues_desc[0] - 2.0).abs() < 5e-2);
        assert!(r.eigenvalues_desc[1].abs() < 5e-2);
        assert_eq!(r.continuous_edge, Some(-0.25));
        assert_eq!(r.predicted_discrete, Some(vec![2.0, 0.0]));
        assert_eq!(r.block_starts, vec![0, 2]);
    }
}

#[test]
fn laguerre_s_without_potential_has_eigenvalue_zero() {
    let d = cdh_discrete_eigs(0.5, Some(0.0)).unwrap();
    assert_eq!(d.values, vec![0.0]);
}

#[test]
fn predicted_eigenvalues_lie_above_the_edge() {
    for alpha in [-0.5, 0.0, 0.7, 2.0] {
        for gamma in [-0.5, 0.0, 0.4, 1.0, 2.3, 4.0] {
            if gamma <= -(alpha + 1.0) / 2.0 {
                continue;
            }
            let edge = -0.25 * (alpha + 1.0) * (alpha + 1.0);
            let top = gamma * (gamma + alpha + 1.0);
            for e in cdh_discrete_eigs(alpha, Some(gamma)).unwrap().values {
                assert!(e > edge && e <= top + 1e-12, "alpha={alpha} gamma={gamma} e={e}");
            }
        }
    }
    let d = cdh_discrete_eigs(-0.5, None).unwrap();
    assert!(d.values.is_empty());
    let d = cdh_discrete_eigs(5.0, None).unwrap();
    assert_eq!(d.values, vec![-5.0, -8.0]);
    assert!(d.values.iter().all(|&e| e > -9.0));
}

#[test]
fn truncations_strictly_interlace() {
    // isolated eigenvalues converge geometrically, so neighbouring sections may
    // agree to rounding; strictness is only asserted beyond that level
    for op in models() {
        for n in [3, 6, 9, 30] {
            let (small, _) = truncated_eigenvalues(&op, n);
            let (big, starts) = truncated_eigenvalues(&op, n + 1);
            if starts.len() > 1 {
                // reducible sections share eigenvalues of the leading blocks
                continue;
            }
            let eps = 1e-13 * big.iter().fold(1.0f64, |m, e| m.max(e.abs()));
            for k in 0..n {
                assert!(big[k] > small[k] - eps && small[k] > big[k + 1] - eps, "{} N={n} k={k}", op.model.tag());
            }
            assert!(big[0] > small[0] - eps && big[n] < small[n - 1]);
        }
    }
}

#[test]
fn truncation_eigenvalues_lie_within_zero_bounds() {
    for op in models() {
        for n in [2, 5, 20, 60, 120, 200] {
            let (eig, _) = truncated_eigenvalues(&op, n);
            let (lo, hi) = zero_bounds(&op.coeffs(n), n);
            let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
            for e in &eig {
                assert!(*e >= lo - slack && *e <= hi + slack, "{} N={n}: {e} not in [{lo}, {hi}]", op.model.tag());
            }
        }
    }
}

#[test]
fn chebyshev_zero_bounds_are_exact() {
    for n in [2, 3, 10, 100] {
        assert_eq!(zero_bounds(&FamilySpec::chebyshev_u().orthonormal(n), n), (-1.0, 1.0));
    }
}

#[test]
fn qhermite_largest_zero_bound() {
    let (q, gamma) = (0.5f64, 2.0);
    let op = build_qhermite_potential(q, gamma, 0.7).unwrap();
    let (_, hi) = zero_bounds(&op.coeffs(2), 2);
    assert!(hi < 3.4641);
    for n in 1..=40 {
        let (eig, _) = truncated_eigenvalues(&op, n);
        let bound = gamma * q.powf(-(n as f64) / 2.0) * (1.0 - q.powi(n as i32)).sqrt();
        assert!(eig[0] < bound, "N={n}: {} vs {bound}", eig[0]);
        let low = -bound - 4.0 * q / ((1.0 - q) * (1.0 - q));
        assert!(eig[n - 1] > low, "N={n}");
    }
}

#[test]
fn ultraspherical_largest_zero_bound_and_smallest_zero_tracking() {
    let (nu, gamma, xi) = (0.7, 0.3, 1.0);
    let op = build_linear_potential(FamilySpec::ultraspherical(nu).unwrap(), gamma, xi, 0.0).unwrap();
    let c = op.recurrence_coeffs(401);
    let a_inf = gamma / (2.0 * xi);
    let cap = 2.0 * c.a[1].max(a_inf);
    let mut b0 = 0.0;
    for n in [100, 200, 300, 400] {
        let eig = section(&c, n).eigenvalues();
        assert!(eig[0] < cap);
        let (_, hi) = zero_bounds(&c, n);
        assert!(hi <= cap + 1e-12);
        let gap = (eig[n - 1] - c.b[n - 1]).abs();
        if n == 100 {
            b0 = gap;
        } else {
            assert!(gap <= 2.0 * b0, "N={n}: {gap} vs {b0}");
        }
    }
}

#[test]
fn q_ultraspherical_largest_zero_bound() {
    let (gamma, xi) = (0.3, 1.0);
    for (beta, q) in [(0.2, 0.5), (0.3, 0.5), (0.7, 0.5), (0.9, 0.3)] {
        let fam = FamilySpec::q_ultraspherical(beta, q).unwrap();
        let op = build_linear_potential(fam, gamma, xi, 0.0).unwrap();
        let c = op.recurrence_coeffs(201);
        let increasing = c.a[1..201].windows(2).all(|w| w[1] >= w[0]);
        let decreasing = c.a[1..201].windows(2).all(|w| w[1] <= w[0]);
        let a = if beta < q {
            assert!(increasing, "beta={beta} q={q}");
            gamma / (2.0 * xi)
        } else {
            assert!(decreasing, "beta={beta} q={q}");
            c.a[1]
        };
        for n in [10, 50, 200] {
            let eig = section(&c, n).eigenvalues();
            assert!(eig[0] < 2.0 * a, "beta={beta} N={n}");
            assert!(eig[n - 1] > c.b[n] - 2.0 * a);
        }
    }
}

#[test]
fn determinacy_of_birth_death_polynomials() {
    let op = build_meixner_tm(2.0, 0.3).unwrap();
    let v = determinacy(&op.determinacy_coeffs(202), 200);
    assert_eq!(v.status, DeterminacyStatus::DeterminateByIii);
    assert_eq!(v.witness.bound_iii.certificate, BoundCertificate::NonIncreasingTail);
}

#[test]
fn determinacy_of_meixner_potential_polynomials() {
    let op = build_meixner_s(2.0, 0.3, -0.7).unwrap();
    let v = determinacy(&op.determinacy_coeffs(202), 200);
    assert_eq!(v.status, DeterminacyStatus::DeterminateByIi);
}

#[test]
fn determinacy_of_chebyshev() {
    let v = determinacy(&FamilySpec::chebyshev_u().orthonormal(300), 200);
    assert_eq!(v.status, DeterminacyStatus::DeterminateByIi);
    assert!(v.witness.bound_ii.c <= 1.0 + 1e-15);
}

#[test]
fn qhermite_potential_is_inconclusive() {
    let op = build_qhermite_potential(0.5, 2.0, 0.7).unwrap();
    let v = determinacy(&op.determinacy_coeffs(202), 200);
    assert_eq!(v.status, DeterminacyStatus::Inconclusive);
    assert!(!v.witness.carleman.divergent);
    assert!(matches!(v.witness.carleman.tail, TailGrowth::Exponential { rate, .. } if rate < 0.0));
}

#[test]
fn asc_recurrence_is_inconclusive() {
    let op = build_asc_l(0.3, 0.4, 0.5).unwrap();
    let v = determinacy(&op.determinacy_coeffs(202), 200);
    assert!(!v.witness.carleman.divergent);
    assert_eq!(v.status, DeterminacyStatus::Inconclusive, "{:?}", v.witness);
}

#[test]
fn unbounded_below_potentials_use_the_upper_bound() {
    let op = build_linear_potential(FamilySpec::ultraspherical(0.7).unwrap(), 0.3, 1.0, 0.0).unwrap();
    let v = determinacy(&op.determinacy_coeffs(202), 200);
    assert_eq!(v.status, DeterminacyStatus::DeterminateByIi);
    assert!(v.witness.series_i.divergent);
}

#[test]
fn qhermite_support_is_normalized() {
    for a in [0.6, 0.7, 0.9] {
        let pts = qhermite_support(a, 0.5, 60).unwrap();
        assert_eq!(pts.len(), 121);
        assert!(pts.iter().all(|p| p.ln_mass.is_finite() && p.mass >= 0.0));
        assert!(pts.iter().filter(|p| p.k.abs() <= 20).all(|p| p.mass > 0.0));
        assert!(pts.windows(2).all(|w| w[1].x > w[0].x));
        let total: f64 = pts.iter().map(|p| p.mass).sum();
        assert!((total - 1.0).abs() < 1e-10, "a={a}: {total}");
    }
    let p = qhermite_support(0.7, 0.5, 0).unwrap();
    assert!((p[0].x - 0.364_285_714_285_714_3).abs() < 1e-15);
}

#[test]
fn reports_without_identification_are_complete() {
    let op = build_linear_potential(FamilySpec::ultraspherical(0.7).unwrap(), 0.3, 1.0, 0.0).unwrap();
    let r = spectrum_report(&op, 50).unwrap();
    assert!(r.predicted_discrete.is_none() && r.continuous_edge.is_none() && !r.spectral_map_applied);
    assert_eq!(r.eigenvalues_desc.len(), 50);
    assert!(spectrum_report(&op, 1).is_err());
}
