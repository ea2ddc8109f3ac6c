//! Special functions for hydrogen bound states: log-factorials, angular
//! binomial weights, spherical harmonics and the terminating confluent
//! hypergeometric series behind the radial eigenfunctions.
//!
//! Lengths are in Bohr radii (units with ω = 1). The shell index `n` is
//! 0-based throughout: shell `n` is the textbook principal quantum number
//! `n + 1`.

pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use quadrature::{make_quadrature, HalfLineRule, QuadratureKind, QuadratureRule, MAX_LAGUERRE_NODES, MAX_LEGENDRE_NODES};

/// Label `(n, ℓ, m)` of a bound state, with `0 ≤ ℓ ≤ n` and `|m| ≤ ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    n: usize,
    l: usize,
    m: i32,
}

impl BasisIndex {
    pub fn new(n: usize, l: usize, m: i32) -> Result<Self> {
        if l > n {
            return Err(Error::domain(format!("ℓ = {l} exceeds shell index n = {n}")));
        }
        if m.unsigned_abs() as usize > l {
            return Err(Error::domain(format!("|m| = {} exceeds ℓ = {l}", m.abs())));
        }
        Ok(BasisIndex { n, l, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Traditional principal quantum number, `n + 1`.
    pub fn principal(&self) -> usize {
        self.n + 1
    }

    /// Position within its shell: `ℓ² + (m + ℓ)`.
    pub fn shell_offset(&self) -> usize {
        self.l * self.l + (self.m + self.l as i32) as usize
    }

    /// Position in the concatenation of shells `0..=n`.
    pub fn flat_index(&self) -> usize {
        shells_dimension_below(self.n) + self.shell_offset()
    }

    /// All labels of shells `0..=n_max` in storage order.
    pub fn enumerate(n_max: usize) -> impl Iterator<Item = BasisIndex> {
        (0..=n_max).flat_map(|n| {
            (0..=n).flat_map(move |l| (-(l as i32)..=l as i32).map(move |m| BasisIndex { n, l, m }))
        })
    }
}

/// `Σ_{k<n} (k+1)²`, the number of states in shells below `n`.
pub fn shells_dimension_below(n: usize) -> usize {
    n * (n + 1) * (2 * n + 1) / 6
}

const EXACT_FACTORIALS: usize = 21;

fn small_factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// `ln k!` for a non-negative `k`.
pub(crate) fn ln_factorial(k: usize) -> f64 {
    if k < EXACT_FACTORIALS {
        return (small_factorial(k) as f64).ln();
    }
    ln_gamma_large(k as f64 + 1.0)
}

/// Stirling series for `ln Γ(x)`, accurate to well below 1e-15 relative for x ≥ 20.
fn ln_gamma_large(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// `ln Γ(x)` for real `x > 0`, used for fractional moments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln Γ needs a positive finite argument, got {x}")));
    }
    // shift up with the recurrence Γ(x+1) = x Γ(x)
    let mut shift = 0.0;
    let mut y = x;
    while y < 20.0 {
        shift += y.ln();
        y += 1.0;
    }
    Ok(ln_gamma_large(y) - shift)
}

/// `ln k!`; negative arguments are a domain error.
pub fn log_factorial(k: i64) -> Result<f64> {
    if k < 0 {
        return Err(Error::domain(format!("factorial of negative integer {k}")));
    }
    Ok(ln_factorial(k as usize))
}

fn check_lm(l: usize, m: i32) -> Result<()> {
    if m.unsigned_abs() as usize > l {
        Err(Error::domain(format!("|m| = {} exceeds ℓ = {l}", m.abs())))
    } else {
        Ok(())
    }
}

fn check_nl(n: usize, l: usize) -> Result<()> {
    if l > n {
        Err(Error::domain(format!("ℓ = {l} exceeds shell index n = {n}")))
    } else {
        Ok(())
    }
}

/// `[(2ℓ)! / ((ℓ+m)!(ℓ−m)!)]^{1/2}`.
pub fn sqrt_binomial_weight(l: usize, m: i32) -> Result<f64> {
    check_lm(l, m)?;
    let a = l - m.unsigned_abs() as usize;
    let b = l + m.unsigned_abs() as usize;
    Ok((0.5 * (ln_factorial(2 * l) - ln_factorial(a) - ln_factorial(b))).exp())
}

/// Orthonormal associated Legendre factor `Ȳ_ℓ^{|m|}(θ)` such that
/// `Y_{ℓm} = Ȳ e^{imφ}` for `m ≥ 0`, Condon-Shortley phase included.
fn normalized_legendre(l: usize, m: usize, x: f64, sin_theta: f64) -> f64 {
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sin_theta;
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut p_prev = pmm;
    let mut p = (2.0 * mf + 3.0).sqrt() * x * pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lp = lf - 1.0;
        let b = ((lp * lp - mf * mf) / (4.0 * lp * lp - 1.0)).sqrt();
        let next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
    }
    p
}

/// Orthonormal spherical harmonic `Y_{ℓm}(θ, φ)` with the Condon-Shortley phase.
pub fn spherical_harmonic(l: usize, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    check_lm(l, m)?;
    if !(-1e-12..=PI + 1e-12).contains(&theta) {
        return Err(Error::domain(format!("polar angle {theta} outside [0, π]")));
    }
    let (s, c) = theta.sin_cos();
    Ok(spherical_harmonic_cs(l, m, c, s.abs(), phi))
}

/// Same as [`spherical_harmonic`] from `cos θ`, `sin θ`, without checks.
pub(crate) fn spherical_harmonic_cs(l: usize, m: i32, cos_t: f64, sin_t: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    let p = normalized_legendre(l, am, cos_t, sin_t);
    let (sp, cp) = (am as f64 * phi).sin_cos();
    let y = Complex64::new(p * cp, p * sp);
    if m >= 0 {
        y
    } else if am.is_multiple_of(2) {
        y.conj()
    } else {
        -y.conj()
    }
}

/// Every `Y_{ℓm}(θ, φ)` for `ℓ ≤ l_max`, stored at `ℓ² + m + ℓ`.
pub(crate) fn spherical_harmonics_table(l_max: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let (s, c) = theta.sin_cos();
    let mut out = Vec::with_capacity((l_max + 1) * (l_max + 1));
    for l in 0..=l_max {
        for m in -(l as i32)..=l as i32 {
            out.push(spherical_harmonic_cs(l, m, c, s.abs(), phi));
        }
    }
    out
}

#[cfg(test)]
/// Coefficients `a_j` of the terminating series `F(−n+ℓ, 2ℓ+2, z) = Σ a_j z^j`.
fn confluent_terms(n: usize, l: usize) -> impl Iterator<Item = f64> {
    let len = n - l;
    let lf = l as f64;
    let nf = n as f64;
    (0..=len).scan(1.0, move |a, j| {
        if j > 0 {
            let jf = j as f64;
            *a *= (lf - nf + jf - 1.0) / ((2.0 * lf + 1.0 + jf) * jf);
        }
        Some(*a)
    })
}

/// `F(−n+ℓ, 2ℓ+2, z)`, a polynomial of degree `n − ℓ`, summed term by term.
pub fn confluent_polynomial(n: usize, l: usize, z: f64) -> Result<f64> {
    check_nl(n, l)?;
    Ok(confluent_value(n, l, z))
}

fn confluent_value(n: usize, l: usize, z: f64) -> f64 {
    let alpha = (2 * l + 1) as f64;
    laguerre(n - l, alpha, z) / binomial(n - l + 2 * l + 1, n - l)
}

/// `(F, dF/dz)` of the terminating series, via `d/dz L_k^α = −L_{k−1}^{α+1}`.
fn confluent_with_derivative(n: usize, l: usize, z: f64) -> (f64, f64) {
    let k = n - l;
    let alpha = (2 * l + 1) as f64;
    let scale = binomial(k + 2 * l + 1, k);
    let value = laguerre(k, alpha, z) / scale;
    let deriv = if k == 0 { 0.0 } else { -laguerre(k - 1, alpha + 1.0, z) / scale };
    (value, deriv)
}

/// Generalized Laguerre `L_k^α(z)` by the forward three-term recurrence.
/// Summing the power series instead loses ~6 digits by n = 16.
fn laguerre(k: usize, alpha: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - z;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - z) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn ln_radial_normalization(n: usize, l: usize) -> f64 {
    let nf = n as f64;
    -ln_factorial(2 * l + 1)
        + 0.5 * (ln_factorial(n + l + 1) - (2.0 * (nf + 1.0)).ln() - ln_factorial(n - l))
        + 1.5 * (2.0 / (nf + 1.0)).ln()
}

/// Normalization constant of the radial eigenfunction of shell `n`, angular momentum `ℓ`.
pub fn radial_normalization(n: usize, l: usize) -> Result<f64> {
    check_nl(n, l)?;
    Ok(ln_radial_normalization(n, l).exp())
}

/// Radial eigenfunction `u(r)` of shell `n`, normalized under `∫ u² r² dr = 1`.
pub fn radial_eigenfunction(n: usize, l: usize, r: f64) -> Result<f64> {
    check_nl(n, l)?;
    if !(r >= 0.0) {
        return Err(Error::domain(format!("radius must be non-negative, got {r}")));
    }
    Ok(radial_value(n, l, r))
}

/// `N z^ℓ e^{-z/2}` with `z = 2r/(n+1)`; combined in log space for large ℓ.
fn radial_envelope(n: usize, l: usize, z: f64) -> f64 {
    if z == 0.0 {
        return if l == 0 { ln_radial_normalization(n, 0).exp() } else { 0.0 };
    }
    (ln_radial_normalization(n, l) + l as f64 * z.ln() - 0.5 * z).exp()
}

pub(crate) fn radial_value(n: usize, l: usize, r: f64) -> f64 {
    let z = 2.0 * r / (n as f64 + 1.0);
    radial_envelope(n, l, z) * confluent_value(n, l, z)
}

/// Reduced radial function `χ = r u(r)` and its derivative `dχ/dr`,
/// differentiated term by term (no finite differences).
pub fn reduced_radial_with_slope(n: usize, l: usize, r: f64) -> Result<(f64, f64)> {
    check_nl(n, l)?;
    if !(r >= 0.0) {
        return Err(Error::domain(format!("radius must be non-negative, got {r}")));
    }
    Ok(reduced_radial_unchecked(n, l, r))
}

pub(crate) fn reduced_radial_unchecked(n: usize, l: usize, r: f64) -> (f64, f64) {
    let z = 2.0 * r / (n as f64 + 1.0);
    let env = radial_envelope(n, l, z);
    let (f, df) = confluent_with_derivative(n, l, z);
    // χ' = u + r u' and r d/dr = z d/dz
    let slope = env * ((1.0 + l as f64) * f + z * df - 0.5 * z * f);
    (r * env * f, slope)
}

/// Harmonic-oscillator eigenfunction `h_n(x)` (mass = ω = ħ = 1).
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn basis_index_validates() {
        assert!(BasisIndex::new(2, 3, 0).is_err());
        assert!(BasisIndex::new(2, 1, -2).is_err());
        let idx = BasisIndex::new(2, 1, -1).unwrap();
        assert_eq!(idx.principal(), 3);
        assert_eq!(idx.shell_offset(), 1);
        assert_eq!(idx.flat_index(), 1 + 4 + 1);
    }

    #[test]
    fn enumeration_matches_flat_index() {
        for (i, idx) in BasisIndex::enumerate(5).enumerate() {
            assert_eq!(idx.flat_index(), i);
        }
        assert_eq!(BasisIndex::enumerate(5).count(), shells_dimension_below(6));
    }

    #[test]
    fn log_factorial_examples() {
        assert_eq!(log_factorial(0).unwrap(), 0.0);
        assert!(close(log_factorial(5).unwrap(), 4.787491742782046, 1e-15));
        assert!(close(log_factorial(20).unwrap(), (2432902008176640000f64).ln(), 1e-15));
        assert!(matches!(log_factorial(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn log_factorial_against_log_sum() {
        let mut acc = 0.0f64;
        for k in 1..=300i64 {
            acc += (k as f64).ln();
            let got = log_factorial(k).unwrap();
            assert!((got - acc).abs() <= 1e-14 * acc.max(1.0), "k={k}: {got} vs {acc}");
        }
    }

    #[test]
    fn ln_gamma_half_integers() {
        // Γ(1/2) = √π
        assert!(close(ln_gamma(0.5).unwrap(), 0.5 * PI.ln(), 1e-14));
        assert!(close(ln_gamma(6.0).unwrap(), 120f64.ln(), 1e-14));
        assert!(ln_gamma(0.0).is_err());
    }

    #[test]
    fn binomial_weight_examples() {
        assert_eq!(sqrt_binomial_weight(0, 0).unwrap(), 1.0);
        assert!(close(sqrt_binomial_weight(1, 0).unwrap(), 2f64.sqrt(), 1e-15));
        assert!(close(sqrt_binomial_weight(2, 2).unwrap(), 1.0, 1e-15));
        assert!(sqrt_binomial_weight(1, 2).is_err());
    }

    #[test]
    fn binomial_weight_symmetry_and_partition() {
        for l in 0..=12usize {
            for m in -(l as i32)..=l as i32 {
                assert_eq!(sqrt_binomial_weight(l, m).unwrap(), sqrt_binomial_weight(l, -m).unwrap());
            }
            for k in 0..50 {
                let tb = PI * k as f64 / 49.0;
                let (s, c) = (0.5 * tb).sin_cos();
                let total: f64 = (-(l as i32)..=l as i32)
                    .map(|m| {
                        let w = sqrt_binomial_weight(l, m).unwrap();
                        w * w * s.powi(2 * (l as i32 - m)) * c.powi(2 * (l as i32 + m))
                    })
                    .sum();
                assert!((total - 1.0).abs() < 1e-12, "l={l} θ̄={tb}: {total}");
            }
        }
    }

    #[test]
    fn spherical_harmonic_examples() {
        let y00 = spherical_harmonic(0, 0, 1.1, 2.3).unwrap();
        assert!((y00.re - 0.28209479177387814).abs() < 1e-15 && y00.im == 0.0);
        let y10 = spherical_harmonic(1, 0, 0.0, 0.0).unwrap();
        assert!((y10.re - 0.4886025119029199).abs() < 1e-15);
        let y11 = spherical_harmonic(1, 1, PI / 2.0, 0.0).unwrap();
        assert!((y11.re + 0.3454941494713355).abs() < 1e-15);
        assert!(spherical_harmonic(1, 2, 0.0, 0.0).is_err());
        assert!(spherical_harmonic(1, 0, 4.0, 0.0).is_err());
    }

    #[test]
    fn spherical_harmonic_closed_forms() {
        // Y_{2,±1} = ∓ √(15/8π) sinθ cosθ e^{±iφ}
        let (t, p): (f64, f64) = (0.7, 1.3);
        let amp = (15.0 / (8.0 * PI)).sqrt() * t.sin() * t.cos();
        let y21 = spherical_harmonic(2, 1, t, p).unwrap();
        let y2m1 = spherical_harmonic(2, -1, t, p).unwrap();
        assert!((y21 - Complex64::from_polar(-amp, p)).norm() < 1e-15);
        assert!((y2m1 - Complex64::from_polar(amp, -p)).norm() < 1e-15);
        // Y_{3,0} = √(7/16π)(5cos³θ − 3cosθ)
        let c = t.cos();
        let y30 = (7.0 / (16.0 * PI)).sqrt() * (5.0 * c * c * c - 3.0 * c);
        assert!((spherical_harmonic(3, 0, t, p).unwrap().re - y30).abs() < 1e-15);
    }

    #[test]
    fn spherical_harmonics_orthonormal() {
        let lmax = 6usize;
        let gl = make_quadrature(QuadratureKind::GaussLegendre { a: -1.0, b: 1.0 }, lmax + 1).unwrap();
        let tr = make_quadrature(QuadratureKind::Trapezoid { start: 0.0, period: 2.0 * PI }, 2 * lmax + 1)
            .unwrap();
        let dim = (lmax + 1) * (lmax + 1);
        let mut gram = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (x, wx) in gl.iter() {
            for (phi, wp) in tr.iter() {
                let ys = spherical_harmonics_table(lmax, x.acos(), phi);
                for i in 0..dim {
                    for j in 0..dim {
                        gram[i * dim + j] += wx * wp * ys[i].conj() * ys[j];
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * dim + j] - target).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn confluent_examples() {
        assert_eq!(confluent_polynomial(0, 0, 3.7).unwrap(), 1.0);
        assert!(confluent_polynomial(1, 0, 2.0).unwrap().abs() < 1e-15);
        assert!((confluent_polynomial(2, 0, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(confluent_polynomial(1, 2, 1.0).is_err());
    }

    #[test]
    fn recurrence_matches_power_series() {
        for n in 0..8 {
            for l in 0..=n {
                for &z in &[0.0f64, 0.3, 1.7, 5.0, 11.0] {
                    let series: f64 = confluent_terms(n, l).enumerate().map(|(j, a)| a * z.powi(j as i32)).sum();
                    let scale = confluent_terms(n, l).map(|a| (a * z.powi(n as i32)).abs()).fold(1.0, f64::max);
                    assert!((confluent_value(n, l, z) - series).abs() < 1e-13 * scale, "{n} {l} {z}");
                }
            }
        }
    }

    #[test]
    fn confluent_has_exact_degree() {
        // on unit spacing the d-th forward difference of a degree-d polynomial
        // is constant and nonzero, the (d+1)-th vanishes
        for n in 0..=8usize {
            for l in 0..=n {
                let d = n - l;
                let mut diffs: Vec<f64> = (0..d + 3).map(|k| confluent_value(n, l, k as f64)).collect();
                let scale = diffs.iter().fold(1.0f64, |a, v| a.max(v.abs()));
                for _ in 0..d {
                    diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
                }
                assert!((diffs[0] - diffs[1]).abs() <= 1e-9 * scale, "n={n} l={l}");
                assert!(diffs[0].abs() > 1e-9 * scale, "degree too low n={n} l={l}");
                let next: Vec<f64> = diffs.windows(2).map(|w| w[1] - w[0]).collect();
                assert!(next.iter().all(|v| v.abs() <= 1e-9 * scale), "n={n} l={l}: {next:?}");
            }
        }
    }

    #[test]
    fn radial_normalization_examples() {
        assert!((radial_normalization(0, 0).unwrap() - 2.0).abs() < 1e-15);
        assert!((radial_normalization(1, 0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((radial_normalization(1, 1).unwrap() - 1.5f64.sqrt() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn radial_eigenfunction_spot_values() {
        assert!((radial_eigenfunction(0, 0, 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(radial_eigenfunction(1, 0, 2.0).unwrap().abs() < 1e-15);
        assert!(radial_eigenfunction(1, 1, 0.0).unwrap() == 0.0);
        assert!(radial_eigenfunction(0, 0, -1.0).is_err());
        // textbook 2p: r e^{-r/2} / (2√6)
        let r: f64 = 1.7;
        let want = r * (-r / 2.0).exp() / (2.0 * 6f64.sqrt());
        assert!((radial_eigenfunction(1, 1, r).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn ground_state_normalized_by_laguerre() {
        let q = make_quadrature(QuadratureKind::GaussLaguerre, 64).unwrap();
        // r = t/2, e^{-2r} = e^{-t}: ∫ 4 r² e^{-2r} dr = ∫ 4 (t/2)² e^{-t} dt / 2
        let v = q.integrate(|t| 4.0 * (t / 2.0).powi(2) / 2.0);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn radial_orthonormality() {
        let rule = quadrature::laguerre_log_weights(96).unwrap();
        for l in 0..=8usize {
            for n in l..=8 {
                for np in l..=8 {
                    // exact rule for this pair: fold the pair's own exponential
                    let alpha = 1.0 / (n as f64 + 1.0) + 1.0 / (np as f64 + 1.0);
                    let val: f64 = rule
                        .0
                        .iter()
                        .zip(&rule.1)
                        .map(|(&t, &lw)| {
                            let r = t / alpha;
                            (lw + t).exp() / alpha * radial_value(n, l, r) * radial_value(np, l, r) * r * r
                        })
                        .sum();
                    let want = if n == np { 1.0 } else { 0.0 };
                    assert!((val - want).abs() < 1e-10, "l={l} n={n} n'={np}: {val}");
                }
            }
        }
    }

    #[test]
    fn reduced_slope_matches_closed_form() {
        // χ_1s = 2 r e^{-r}, χ' = 2(1 - r) e^{-r}
        for &r in &[0.0, 0.3, 1.0, 4.5] {
            let (chi, d) = reduced_radial_with_slope(0, 0, r).unwrap();
            assert!((chi - 2.0 * r * (-r).exp()).abs() < 1e-15);
            assert!((d - 2.0 * (1.0 - r) * (-r).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn reduced_slope_matches_difference_quotient() {
        for n in 0..6usize {
            for l in 0..=n {
                for &r in &[0.4, 2.0, 7.5] {
                    let h = 1e-5;
                    let (_, d) = reduced_radial_unchecked(n, l, r);
                    let fd = (reduced_radial_unchecked(n, l, r + h).0 - reduced_radial_unchecked(n, l, r - h).0)
                        / (2.0 * h);
                    assert!((d - fd).abs() < 1e-8, "n={n} l={l} r={r}: {d} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn hermite_functions_orthonormal() {
        let q = make_quadrature(QuadratureKind::GaussLegendre { a: -12.0, b: 12.0 }, 200).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let v = q.integrate(|x| hermite_function(a, x) * hermite_function(b, x));
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12, "{a},{b}: {v}");
            }
        }
    }
}
