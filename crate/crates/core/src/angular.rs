//! Reducible angular-momentum coherent states on a degenerate shell.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock1d::map_rows;
use crate::specfun::{make_quadrature, sqrt_binomial_weight, QuadratureKind};

/// Euler-angle label `(θ̄, φ̄, ψ̄)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EulerAngles {
    theta_bar: f64,
    phi_bar: f64,
    psi_bar: f64,
}

impl EulerAngles {
    /// `θ̄` must lie in `[0, π]`; `φ̄` and `ψ̄` are wrapped into `[0, 2π)`.
    pub fn new(theta_bar: f64, phi_bar: f64, psi_bar: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta_bar) {
            return Err(Error::domain(format!("θ̄ must lie in [0, π], got {theta_bar}")));
        }
        if !(phi_bar.is_finite() && psi_bar.is_finite()) {
            return Err(Error::domain("φ̄ and ψ̄ must be finite"));
        }
        Ok(EulerAngles { theta_bar, phi_bar: wrap(phi_bar), psi_bar: wrap(psi_bar) })
    }

    pub const ZERO: EulerAngles = EulerAngles { theta_bar: 0.0, phi_bar: 0.0, psi_bar: 0.0 };

    pub fn theta_bar(&self) -> f64 {
        self.theta_bar
    }

    pub fn phi_bar(&self) -> f64 {
        self.phi_bar
    }

    pub fn psi_bar(&self) -> f64 {
        self.psi_bar
    }
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Coefficients on one shell, stored at flat index `ℓ² + (m + ℓ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellExpansion {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl ShellExpansion {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize, m: i32) -> Option<Complex64> {
        if l > self.n || m.unsigned_abs() as usize > l {
            return None;
        }
        Some(self.coeffs[l * l + (m + l as i32) as usize])
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Half-angle data reused across a shell.
struct HalfAngles {
    sin: f64,
    cos: f64,
}

fn coefficient(l: usize, m: i32, h: &HalfAngles, omega: &EulerAngles) -> Complex64 {
    let w = sqrt_binomial_weight(l, m).expect("|m| ≤ ℓ by construction");
    let li = l as i32;
    let mag = w * h.sin.powi(li - m) * h.cos.powi(li + m) * ((2 * l + 1) as f64).sqrt();
    let arg = -(m as f64 * omega.phi_bar + l as f64 * omega.psi_bar);
    Complex64::from_polar(mag, arg)
}

fn shell_coeffs(n: usize, omega: &EulerAngles) -> Vec<Complex64> {
    let half = 0.5 * omega.theta_bar;
    let h = HalfAngles { sin: half.sin(), cos: half.cos() };
    let mut out = Vec::with_capacity((n + 1) * (n + 1));
    for l in 0..=n {
        let li = l as i32;
        for m in -li..=li {
            out.push(coefficient(l, m, &h, omega));
        }
    }
    out
}

/// The shell-`n` coherent state. Its squared norm is `(n+1)²`, not 1.
pub fn angular_cs(n: usize, omega: &EulerAngles) -> ShellExpansion {
    ShellExpansion { n, coeffs: shell_coeffs(n, omega) }
}

pub fn shell_norm_squared(n: usize, omega: &EulerAngles) -> f64 {
    angular_cs(n, omega).norm_squared()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngularResolutionReport {
    pub n: usize,
    pub dimension: usize,
    pub nodes: [usize; 3],
    /// `max |G − I|` over all entries.
    pub max_deviation: f64,
    /// Numerical rank of `G`.
    pub rank: usize,
    #[serde(skip)]
    pub gram: DMatrix<Complex64>,
}

/// Smallest node count that integrates the shell-`n` Gram integrand exactly
/// in each Euler angle.
pub fn exactness_threshold(n: usize) -> usize {
    2 * n + 1
}

/// Gram matrix `G = ∫ c c† dΩ̄` over the normalized measure
/// `sin θ̄ dθ̄ dφ̄ dψ̄ / 8π²`, by Gauss-Legendre in `cos θ̄` and trapezoid
/// rules in `φ̄`, `ψ̄`.
pub fn angular_resolution_check(
    n: usize,
    theta_nodes: usize,
    phi_nodes: usize,
    psi_nodes: usize,
) -> Result<AngularResolutionReport> {
    let need = exactness_threshold(n);
    for (name, got) in [("θ̄", theta_nodes), ("φ̄", phi_nodes), ("ψ̄", psi_nodes)] {
        if got < need {
            return Err(Error::config(format!(
                "{name} quadrature needs at least {need} nodes for shell {n}, got {got}"
            )));
        }
    }
    let gram = gram_matrix(n, theta_nodes, phi_nodes, psi_nodes)?;
    let dim = gram.nrows();
    let mut max_deviation = 0.0f64;
    for a in 0..dim {
        for b in 0..dim {
            let target = if a == b { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((gram[(a, b)] - target).norm());
        }
    }
    let sv = gram.clone().singular_values();
    let top = sv.max();
    let rank = sv.iter().filter(|&&s| s > 1e-8 * top).count();
    Ok(AngularResolutionReport {
        n,
        dimension: dim,
        nodes: [theta_nodes, phi_nodes, psi_nodes],
        max_deviation,
        rank,
        gram,
    })
}

/// The integrand factorizes as `A_{ℓm}(θ̄) A_{ℓ'm'}(θ̄) e^{−i(m−m')φ̄} e^{−i(ℓ−ℓ')ψ̄}`,
/// so each rule is applied to its own factor and the results multiplied.
fn gram_matrix(n: usize, theta_nodes: usize, phi_nodes: usize, psi_nodes: usize) -> Result<DMatrix<Complex64>> {
    let xs = make_quadrature(QuadratureKind::GaussLegendre { a: -1.0, b: 1.0 }, theta_nodes)?;
    let phis = make_quadrature(QuadratureKind::Trapezoid { start: 0.0, period: TAU }, phi_nodes)?;
    let psis = make_quadrature(QuadratureKind::Trapezoid { start: 0.0, period: TAU }, psi_nodes)?;
    let dim = (n + 1) * (n + 1);
    let labels: Vec<(usize, i32)> = (0..=n)
        .flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m)))
        .collect();

    // Σ_j w_j e^{−ikx_j} for every frequency k that occurs
    let phase_sums = |rule: &crate::specfun::QuadratureRule, kmax: i32| -> Vec<Complex64> {
        (-kmax..=kmax)
            .map(|k| rule.iter().map(|(x, w)| Complex64::from_polar(w, -(k as f64) * x)).sum())
            .collect()
    };
    let kphi = 2 * n as i32;
    let kpsi = n as i32;
    let phi_sum = phase_sums(&phis, kphi);
    let psi_sum = phase_sums(&psis, kpsi);

    let partials = map_rows(xs.len(), |i| {
        let (x, wx) = (xs.nodes[i], xs.weights[i]);
        let label = EulerAngles { theta_bar: x.clamp(-1.0, 1.0).acos(), phi_bar: 0.0, psi_bar: 0.0 };
        let a: Vec<f64> = shell_coeffs(n, &label).iter().map(|c| c.re).collect();
        let mut t = DMatrix::<f64>::zeros(dim, dim);
        for p in 0..dim {
            let ap = wx * a[p];
            for q in 0..dim {
                t[(p, q)] = ap * a[q];
            }
        }
        Ok(t)
    })?;
    let mut theta_part = DMatrix::<f64>::zeros(dim, dim);
    for p in &partials {
        theta_part += p;
    }
    let norm = 1.0 / (8.0 * PI * PI);
    Ok(DMatrix::from_fn(dim, dim, |p, q| {
        let (l, m) = labels[p];
        let (lp, mp) = labels[q];
        let f = phi_sum[(m - mp + kphi) as usize] * psi_sum[(l as i32 - lp as i32 + kpsi) as usize];
        f * theta_part[(p, q)] * norm
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_coefficient_at_n0() {
        let s = angular_cs(0, &EulerAngles::new(1.0, 2.0, 3.0).unwrap());
        assert_eq!(s.coeffs().len(), 1);
        assert!((s.coeffs()[0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn pole_reduction() {
        let om = EulerAngles::new(0.0, 0.7, 1.9).unwrap();
        let s = angular_cs(2, &om);
        let mut nonzero = 0;
        for l in 0..=2usize {
            for m in -(l as i32)..=l as i32 {
                let c = s.coeff(l, m).unwrap();
                if m < l as i32 {
                    assert_eq!(c.norm(), 0.0);
                } else {
                    nonzero += 1;
                    let want = Complex64::from_polar(((2 * l + 1) as f64).sqrt(), -(l as f64) * (0.7 + 1.9));
                    assert!((c - want).norm() < 1e-14);
                }
            }
        }
        assert_eq!(nonzero, 3);
    }

    #[test]
    fn shell_norms() {
        assert!((shell_norm_squared(1, &EulerAngles::new(0.4, 0.1, 0.2).unwrap()) - 4.0).abs() < 1e-12);
        let om = EulerAngles::new(PI / 3.0, 1.0, 2.0).unwrap();
        assert!((shell_norm_squared(3, &om) - 16.0).abs() < 1e-12);
        // brute-force sum straight from the binomial definition
        let (sh, ch) = ((PI / 6.0).sin(), (PI / 6.0).cos());
        let mut brute = 0.0;
        for l in 0..=3i32 {
            for m in -l..=l {
                let mut binom = 1.0;
                for k in 0..(l + m) {
                    binom *= (2 * l - k) as f64 / (k + 1) as f64;
                }
                brute += binom * sh.powi(2 * (l - m)) * ch.powi(2 * (l + m)) * (2 * l + 1) as f64;
            }
        }
        assert!((brute - 16.0).abs() < 1e-12);
    }

    #[test]
    fn wrapping_and_domain() {
        let a = angular_cs(3, &EulerAngles::new(1.1, 0.5, 2.0).unwrap());
        let b = angular_cs(3, &EulerAngles::new(1.1, 0.5 + TAU, 2.0).unwrap());
        assert_eq!(a, b);
        assert!(EulerAngles::new(-0.1, 0.0, 0.0).is_err());
        assert!(EulerAngles::new(3.2, 0.0, 0.0).is_err());
        let w = EulerAngles::new(0.0, -1e-300, -1.0).unwrap();
        assert!(w.phi_bar() >= 0.0 && w.phi_bar() < TAU);
        assert!((w.psi_bar() - (TAU - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn gram_is_identity() {
        let r0 = angular_resolution_check(0, 1, 1, 1).unwrap();
        assert!(r0.max_deviation < 1e-15);
        let r3 = angular_resolution_check(3, 8, 8, 8).unwrap();
        assert!(r3.max_deviation <= 1e-12, "{}", r3.max_deviation);
        assert_eq!(r3.rank, 16);
    }

    #[test]
    fn below_threshold_is_config_error() {
        assert!(matches!(angular_resolution_check(5, 11, 11, 4), Err(Error::Config(_))));
        assert!(matches!(angular_resolution_check(2, 4, 5, 5), Err(Error::Config(_))));
    }

    #[test]
    fn threshold_is_sharp() {
        // one node short in φ̄ aliases m − m' = ±2n onto zero frequency
        let n = 2;
        let ok = angular_resolution_check(n, 5, 5, 5).unwrap();
        assert!(ok.max_deviation < 1e-12);
        let g = gram_matrix(n, 5, 4, 5).unwrap();
        let corner = g[(n * n, n * n + 2 * n)];
        assert!(corner.norm() > 1e-3, "{corner}");
    }
}
