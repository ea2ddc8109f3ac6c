//! Hydrogen-atom coherent states: shells of the spectrum `−ω/(n+1)²`
//! dressed with the angular states of [`crate::angular`].

use num_complex::Complex64;
use serde::Serialize;

use crate::angular::{angular_cs, angular_resolution_check, EulerAngles};
use crate::error::{Error, Result};
use crate::fock1d::{radial_amplitudes, resolution_check_1d, PhaseAverage, SpectrumKind, TAIL_TOL};
use crate::phase::PhaseArg;
use crate::specfun::{shells_dimension_below, BasisIndex};
use crate::weights::WeightFamily;

/// Five real labels `(s, γ, θ̄, φ̄, ψ̄)`. At `s = 0` every `Ω̄` names the same ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HydrogenLabel {
    pub s: f64,
    pub gamma: f64,
    pub omega_bar: EulerAngles,
}

impl HydrogenLabel {
    pub fn new(s: f64, gamma: f64, omega_bar: EulerAngles) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::domain(format!("s must be finite and ≥ 0, got {s}")));
        }
        if !gamma.is_finite() {
            return Err(Error::domain("γ must be finite"));
        }
        Ok(HydrogenLabel { s, gamma, omega_bar })
    }
}

/// Coefficients over shells `0..=n_max`, stored in [`BasisIndex::flat_index`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct HydrogenExpansion {
    n_max: usize,
    coeffs: Vec<Complex64>,
    family: String,
    label: Option<HydrogenLabel>,
}

impl HydrogenExpansion {
    /// An arbitrary superposition; `coeffs` must cover shells `0..=n_max` exactly.
    pub fn from_coeffs(n_max: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let want = shells_dimension_below(n_max + 1);
        if coeffs.len() != want {
            return Err(Error::config(format!(
                "{} coefficients given, shells 0..={n_max} need {want}",
                coeffs.len()
            )));
        }
        Ok(HydrogenExpansion { n_max, coeffs, family: String::new(), label: None })
    }

    /// The eigenstate `|n+1 ℓ m⟩` embedded in shells `0..=n_max`.
    pub fn eigenstate(idx: BasisIndex, n_max: usize) -> Result<Self> {
        if idx.n() > n_max {
            return Err(Error::domain(format!("shell {} lies above n_max = {n_max}", idx.n())));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); shells_dimension_below(n_max + 1)];
        coeffs[idx.flat_index()] = Complex64::new(1.0, 0.0);
        Self::from_coeffs(n_max, coeffs)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: BasisIndex) -> Option<Complex64> {
        self.coeffs.get(idx.flat_index()).copied()
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn label(&self) -> Option<HydrogenLabel> {
        self.label
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_{ℓ,m} |c_{nℓm}|²` for each shell.
    pub fn shell_weights(&self) -> Vec<f64> {
        (0..=self.n_max)
            .map(|n| self.shell(n).iter().map(|c| c.norm_sqr()).sum())
            .collect()
    }

    pub fn shell(&self, n: usize) -> &[Complex64] {
        let start = shells_dimension_below(n);
        &self.coeffs[start..start + (n + 1) * (n + 1)]
    }

    /// `a·self + b·other`, both on the same truncation.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.n_max != other.n_max {
            return Err(Error::config("superposed expansions must share n_max"));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + b * y).collect();
        Self::from_coeffs(self.n_max, coeffs)
    }
}

/// `E_n = −ω/(n+1)²`.
pub fn hydrogen_spectrum(omega: f64, n: usize) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("ω must be positive and finite, got {omega}")));
    }
    Ok(-omega / ((n + 1) * (n + 1)) as f64)
}

fn build(label: &HydrogenLabel, gamma: PhaseArg, family: &WeightFamily, n_max: usize) -> Result<HydrogenExpansion> {
    if n_max > 200 {
        return Err(Error::config(format!("n_max = {n_max} is beyond the supported range")));
    }
    let amps = radial_amplitudes(label.s * label.s, family, n_max)?;
    let mut coeffs = Vec::with_capacity(shells_dimension_below(n_max + 1));
    for (n, &a) in amps.iter().enumerate() {
        let radial = a * (gamma / ((n + 1) * (n + 1)) as f64).cis();
        coeffs.extend(angular_cs(n, &label.omega_bar).coeffs().iter().map(|c| radial * c));
    }
    Ok(HydrogenExpansion { n_max, coeffs, family: family.name().to_string(), label: Some(*label) })
}

/// The coherent state at `label`, checked against the tail rule on the
/// last shell's weight.
pub fn hydrogen_cs(label: &HydrogenLabel, family: &WeightFamily, n_max: usize) -> Result<HydrogenExpansion> {
    let x = hydrogen_cs_truncated(label, family, n_max)?;
    if label.s > 0.0 {
        let total = x.norm_squared();
        let tail = x.shell_weights()[n_max] / total;
        if tail > TAIL_TOL {
            return Err(Error::Truncation { n_max, tail, bound: TAIL_TOL });
        }
    }
    Ok(x)
}

/// [`hydrogen_cs`] without the tail check.
pub fn hydrogen_cs_truncated(label: &HydrogenLabel, family: &WeightFamily, n_max: usize) -> Result<HydrogenExpansion> {
    build(label, PhaseArg::new(label.gamma), family, n_max)
}

/// `c_{nℓm} ↦ e^{iωt/(n+1)²} c_{nℓm}`.
pub fn evolve_hydrogen(x: &HydrogenExpansion, omega: f64, t: f64) -> HydrogenExpansion {
    let wt = PhaseArg::product(omega, t);
    let mut out = x.clone();
    for n in 0..=x.n_max {
        let phase = (wt / ((n + 1) * (n + 1)) as f64).cis();
        let start = shells_dimension_below(n);
        for c in &mut out.coeffs[start..start + (n + 1) * (n + 1)] {
            *c *= phase;
        }
    }
    out
}

/// Largest coefficient gap between the evolved state and the state at
/// `γ + ωt`, with `γ + ωt` carried exactly.
pub fn hydrogen_stability_residual(
    label: &HydrogenLabel,
    family: &WeightFamily,
    omega: f64,
    t: f64,
    n_max: usize,
) -> Result<f64> {
    let start = hydrogen_cs_truncated(label, family, n_max)?;
    let evolved = evolve_hydrogen(&start, omega, t);
    let shifted = build(label, PhaseArg::new(label.gamma) + PhaseArg::product(omega, t), family, n_max)?;
    Ok(evolved
        .coeffs
        .iter()
        .zip(&shifted.coeffs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Closed shell weight `M²(s²) s^{2n} (n+1)² / ρ_n`.
pub fn closed_shell_weight(s: f64, family: &WeightFamily, n: usize) -> Result<f64> {
    let a = radial_amplitudes(s * s, family, n)?[n];
    Ok(a * a * ((n + 1) * (n + 1)) as f64)
}

/// `√(M²(s²) Σ_{n ≤ n_max} s^{2n}(n+1)²/ρ_n)`, cross-checked against the
/// coefficient sum of the constructed state.
pub fn state_norm(label: &HydrogenLabel, family: &WeightFamily, n_max: usize) -> Result<f64> {
    let x = hydrogen_cs(label, family, n_max)?;
    let closed: f64 = radial_amplitudes(label.s * label.s, family, n_max)?
        .iter()
        .enumerate()
        .map(|(n, a)| a * a * ((n + 1) * (n + 1)) as f64)
        .sum();
    let brute = x.norm_squared();
    if (closed - brute).abs() > 1e-10 * closed.max(1.0) {
        return Err(Error::Numerical(format!(
            "closed norm² {closed} disagrees with coefficient sum {brute}"
        )));
    }
    Ok(closed.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HydrogenResolutionReport {
    pub n_max: usize,
    pub dimension: usize,
    pub gamma_window: f64,
    pub max_diag_deviation: f64,
    pub max_off_diagonal: f64,
    /// Worst entry of `G − I` for the angular Gram over shells `≤ n_max`.
    pub angular_deviation: f64,
    /// `max |R_{nn'}|/√(ρ_n ρ_n') / (Γ|Δ_{nn'}|)` over shell pairs.
    pub certificate: Option<f64>,
    pub bound_violations: usize,
}

/// Resolution of unity in the `(n, ℓ, m)` basis, assembled from three
/// separately computed factors: the angular Gram by exact quadrature, the
/// `γ` average `sinc(ΓΔ)` in closed form, and the radial moments by
/// quadrature. The full operator is formed and inspected entry by entry.
pub fn hydrogen_resolution_check(
    family: &WeightFamily,
    n_max: usize,
    radial_nodes: usize,
    gamma_window: f64,
    angular_nodes: [usize; 3],
) -> Result<HydrogenResolutionReport> {
    let angular = angular_resolution_check(n_max, angular_nodes[0], angular_nodes[1], angular_nodes[2])?;
    let shells = resolution_check_1d(
        family,
        SpectrumKind::InverseSquare,
        PhaseAverage::Window { gamma: gamma_window },
        n_max,
        radial_nodes,
    )?;
    let basis: Vec<BasisIndex> = BasisIndex::enumerate(n_max).collect();
    let mut report = HydrogenResolutionReport {
        n_max,
        dimension: basis.len(),
        gamma_window,
        max_diag_deviation: 0.0,
        max_off_diagonal: 0.0,
        angular_deviation: angular.max_deviation,
        certificate: shells.certificate,
        bound_violations: 0,
    };
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let g = angular.gram[(a.shell_offset(), b.shell_offset())];
            let value = g * shells.operator[a.n()][b.n()];
            if i == j {
                report.max_diag_deviation = report.max_diag_deviation.max((value - 1.0).norm());
                continue;
            }
            report.max_off_diagonal = report.max_off_diagonal.max(value.norm());
            let env = shells.envelope[a.n()][b.n()];
            if a.n() != b.n() && value.norm() > env * g.norm() * (1.0 + 1e-12) {
                report.bound_violations += 1;
            }
        }
    }
    Ok(report)
}
