//! Symmetric tridiagonal matrices: truncation of Jacobi operators, Sturm
//! bisection eigenvalues, implicit QL for first eigenvector components and
//! Golub–Welsch quadrature.

use crate::error::{Error, Result};
use crate::recurrences::OrthonormalCoeffs;
use serde::{Deserialize, Serialize};

/// `diag[i] = b_i`, `offdiag[i]` couples rows `i` and `i+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

/// Anything that can hand out Jacobi-matrix entries on demand.
pub trait JacobiSource {
    fn diag(&self, n: usize) -> f64;
    /// Signed coupling between rows `n-1` and `n` (`n >= 1`).
    fn coupling(&self, n: usize) -> f64;
}

impl JacobiSource for OrthonormalCoeffs {
    fn diag(&self, n: usize) -> f64 {
        self.b[n]
    }

    fn coupling(&self, n: usize) -> f64 {
        self.a[n]
    }
}

impl SymTridiagonal {
    /// Strict constructor: every off-diagonal entry must be positive.
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        assert_eq!(offdiag.len() + 1, diag.len().max(1), "offdiag must have N-1 entries");
        if let Some(i) = offdiag.iter().position(|&a| !(a > 0.0)) {
            return Err(Error::NonpositiveOffdiagonal(i + 1));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    /// Accepts zero (or negative) couplings; only `|a|` enters the spectrum.
    pub fn new_unchecked(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(offdiag.len() + 1, diag.len().max(1), "offdiag must have N-1 entries");
        SymTridiagonal { diag, offdiag }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let m = self.offdiag.iter().fold(1.0f64, |m, &a| m.max(a * a));
        f64::MIN_POSITIVE * m
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.n() {
            let a2 = if i > 0 { self.offdiag[i - 1] * self.offdiag[i - 1] } else { 0.0 };
            d = (self.diag[i] - lambda) - if i > 0 { a2 / d } else { 0.0 };
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `(det, d det/d lambda) / det` via the pivot recurrence; used for a
    /// final Newton correction.
    fn log_derivative(&self, lambda: f64) -> f64 {
        let mut d = 1.0;
        let mut dd = 0.0;
        let mut acc = 0.0;
        for i in 0..self.n() {
            let (nd, ndd) = if i == 0 {
                (self.diag[0] - lambda, -1.0)
            } else {
                let a2 = self.offdiag[i - 1] * self.offdiag[i - 1];
                (self.diag[i] - lambda - a2 / d, -1.0 + a2 * dd / (d * d))
            };
            d = nd;
            dd = ndd;
            acc += dd / d;
        }
        acc
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn kth_eigenvalue(&self, k: usize) -> f64 {
        if self.n() == 1 {
            return self.diag[0];
        }
        let (glo, ghi) = self.gershgorin();
        let pad = f64::EPSILON * (glo.abs().max(ghi.abs()) + 1.0);
        let (mut lo, mut hi) = (glo - pad, ghi + pad);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        let ld = self.log_derivative(x);
        if ld.is_finite() && ld != 0.0 {
            let step = x - 1.0 / ld;
            if step > lo && step < hi {
                x = step;
            }
        }
        x
    }

    /// All eigenvalues, largest first.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n();
        (0..n).rev().map(|k| self.kth_eigenvalue(k)).collect()
    }

    /// Implicit QL with Wilkinson shifts. Returns eigenvalues (ascending) and
    /// the matching first components of the normalized eigenvectors.
    pub fn eigen_ql(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        let mut d = self.diag.clone();
        let mut e: Vec<f64> = self.offdiag.iter().map(|a| a.abs()).collect();
        e.push(0.0);
        let mut z = vec![0.0; n];
        if n > 0 {
            z[0] = 1.0;
        }
        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > 200 {
                    break;
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut i = m;
                let mut early = false;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        early = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    let f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if early {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        (idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i]).collect())
    }

    /// Split at vanishing couplings. Returns `(first row, block)` pairs.
    pub fn split_blocks(&self) -> Vec<(usize, SymTridiagonal)> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 0..self.n() {
            let last = i + 1 == self.n() || self.offdiag[i] == 0.0;
            if last {
                out.push((
                    start,
                    SymTridiagonal {
                        diag: self.diag[start..=i].to_vec(),
                        offdiag: self.offdiag[start..i].to_vec(),
                    },
                ));
                start = i + 1;
            }
        }
        out
    }
}

/// Eigenvalues in descending order.
pub fn eigenvalues(t: &SymTridiagonal) -> Vec<f64> {
    t.eigenvalues()
}

/// Leading `n x n` section with off-diagonals `|coupling|`; fails when a
/// coupling vanishes.
pub fn truncate<S: JacobiSource + ?Sized>(op: &S, n: usize) -> Result<SymTridiagonal> {
    assert!(n >= 1, "truncation size must be positive");
    let diag: Vec<f64> = (0..n).map(|i| op.diag(i)).collect();
    let offdiag: Vec<f64> = (1..n).map(|i| op.coupling(i).abs()).collect();
    SymTridiagonal::new(diag, offdiag)
}

/// Leading section split into irreducible blocks at zero couplings.
pub fn truncate_blocks<S: JacobiSource + ?Sized>(op: &S, n: usize) -> Vec<(usize, SymTridiagonal)> {
    assert!(n >= 1, "truncation size must be positive");
    let diag: Vec<f64> = (0..n).map(|i| op.diag(i)).collect();
    let offdiag: Vec<f64> = (1..n).map(|i| op.coupling(i).abs()).collect();
    SymTridiagonal::new_unchecked(diag, offdiag).split_blocks()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub total_mass: f64,
}

impl QuadratureRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        crate::special::compensated_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss rule with `n` nodes for the measure whose orthonormal recurrence is
/// `coeffs` and whose total mass is `total_mass`.
pub fn golub_welsch(coeffs: &OrthonormalCoeffs, n: usize, total_mass: f64) -> QuadratureRule {
    assert!(total_mass > 0.0, "total mass must be positive");
    let t = truncate(coeffs, n).expect("orthonormal coefficients have positive a_n");
    let (nodes, first) = t.eigen_ql();
    let weights = first.iter().map(|v| total_mass * v * v).collect();
    QuadratureRule {
        nodes,
        weights,
        total_mass,
    }
}
