//! Coherent states of a single degree of freedom.
//!
//! Three families share the shape `c_n = M(u) u^{n/2} e^{i φ_n} / √ρ_n`:
//! the oscillator states (`ρ_n = n!`, `φ_n = n arg z`), the moment-weighted
//! states on the covering space (`φ_n = nθ`) and the degenerate-spectrum
//! states (`φ_n = γ/(n+1)²`). Time evolution is diagonal, so every check
//! here reduces to phase bookkeeping plus one radial integral per matrix
//! element.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::PhaseArg;
use crate::specfun::ln_factorial;
use crate::weights::WeightFamily;

/// A constructor output is adequate when `|c_{n_max}|² ≤ TAIL_TOL · Σ|c_n|²`.
pub const TAIL_TOL: f64 = 1e-16;

/// Label of a one-dimensional coherent state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FockLabel {
    /// `z = re + i·im`, oscillator states with `ρ_n = n!`.
    Oscillator { re: f64, im: f64 },
    /// Polar label `(r, θ)` with θ on the covering space.
    Generalized { r: f64, theta: f64 },
    /// `(s, γ)` for the spectrum `−ω/(n+1)²`.
    Degenerate { s: f64, gamma: f64 },
}

/// Truncated expansion `Σ_{n ≤ n_max} c_n |n⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockExpansion {
    coeffs: Vec<Complex64>,
    label: FockLabel,
    family: String,
    /// Total evolution time applied since construction.
    elapsed: f64,
}

impl FockExpansion {
    pub fn from_coeffs(coeffs: Vec<Complex64>, label: FockLabel, family: impl Into<String>) -> Self {
        FockExpansion { coeffs, label, family: family.into(), elapsed: 0.0 }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn label(&self) -> FockLabel {
        self.label
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `|c_{n_max}|² / Σ|c_n|²`.
    pub fn tail_weight(&self) -> f64 {
        let total = self.norm_squared();
        if total == 0.0 {
            0.0
        } else {
            self.coeffs[self.n_max()].norm_sqr() / total
        }
    }

    fn ensure_adequate(self) -> Result<Self> {
        let vacuum = match self.label {
            FockLabel::Oscillator { re, im } => re == 0.0 && im == 0.0,
            FockLabel::Generalized { r, .. } => r == 0.0,
            FockLabel::Degenerate { s, .. } => s == 0.0,
        };
        if vacuum {
            return Ok(self);
        }
        let tail = self.tail_weight();
        if tail > TAIL_TOL {
            return Err(Error::Truncation { n_max: self.n_max(), tail, bound: TAIL_TOL });
        }
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    /// `E_n = ω n`.
    Oscillator,
    /// `E_n = −ω/(n+1)²`.
    InverseSquare,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub omega: f64,
}

impl Spectrum {
    pub fn new(kind: SpectrumKind, omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain(format!("ω must be positive and finite, got {omega}")));
        }
        Ok(Spectrum { kind, omega })
    }

    pub fn energy(&self, n: usize) -> f64 {
        match self.kind {
            SpectrumKind::Oscillator => self.omega * n as f64,
            SpectrumKind::InverseSquare => -self.omega / ((n + 1) * (n + 1)) as f64,
        }
    }

    /// `−E_n t` as an exact phase argument.
    pub(crate) fn evolution_phase(&self, n: usize, t: f64) -> PhaseArg {
        let wt = PhaseArg::product(self.omega, t);
        match self.kind {
            SpectrumKind::Oscillator => wt.scale(-(n as f64)),
            SpectrumKind::InverseSquare => wt / ((n + 1) * (n + 1)) as f64,
        }
    }
}

fn check_truncation(n_max: usize) -> Result<()> {
    if n_max > 100_000 {
        return Err(Error::config(format!("n_max = {n_max} is unreasonably large")));
    }
    Ok(())
}

fn oscillator_coeffs(z: Complex64, n_max: usize) -> Vec<Complex64> {
    let r = z.norm();
    if r == 0.0 {
        let mut c = vec![Complex64::new(0.0, 0.0); n_max + 1];
        c[0] = Complex64::new(1.0, 0.0);
        return c;
    }
    let ln_r = r.ln();
    let arg = PhaseArg::new(z.arg());
    (0..=n_max)
        .map(|n| {
            let mag = (-0.5 * r * r + n as f64 * ln_r - 0.5 * ln_factorial(n)).exp();
            mag * arg.scale(n as f64).cis()
        })
        .collect()
}

/// Oscillator coherent state `e^{−|z|²/2} Σ zⁿ/√n! |n⟩`, checked for tail adequacy.
pub fn oscillator_cs(z: Complex64, n_max: usize) -> Result<FockExpansion> {
    oscillator_cs_truncated(z, n_max)?.ensure_adequate()
}

/// Same as [`oscillator_cs`] without the tail check; the norm falls short of 1
/// by the discarded tail.
pub fn oscillator_cs_truncated(z: Complex64, n_max: usize) -> Result<FockExpansion> {
    check_truncation(n_max)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("oscillator label must be finite"));
    }
    Ok(FockExpansion::from_coeffs(
        oscillator_coeffs(z, n_max),
        FockLabel::Oscillator { re: z.re, im: z.im },
        "exponential",
    ))
}

/// `M(u) u^{n/2} / √ρ_n` for `n = 0..=n_max`.
pub(crate) fn radial_amplitudes(u: f64, family: &WeightFamily, n_max: usize) -> Result<Vec<f64>> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::domain(format!("radial label must be finite and ≥ 0, got u = {u}")));
    }
    let ln_m2 = family.m_squared(u)?.ln();
    let ln_u = u.ln();
    (0..=n_max)
        .map(|n| {
            let ln_rho = family.log_moment(n)?;
            let pow = if n == 0 { 0.0 } else { n as f64 * ln_u };
            Ok((0.5 * (ln_m2 + pow - ln_rho)).exp())
        })
        .collect()
}

fn generalized_coeffs(r: f64, theta: PhaseArg, family: &WeightFamily, n_max: usize) -> Result<Vec<Complex64>> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("r must be ≥ 0, got {r}")));
    }
    let amps = radial_amplitudes(r * r, family, n_max)?;
    Ok(amps
        .iter()
        .enumerate()
        .map(|(n, &a)| a * theta.scale(n as f64).cis())
        .collect())
}

fn degenerate_coeffs(s: f64, gamma: PhaseArg, family: &WeightFamily, n_max: usize) -> Result<Vec<Complex64>> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("s must be ≥ 0, got {s}")));
    }
    let amps = radial_amplitudes(s * s, family, n_max)?;
    Ok(amps
        .iter()
        .enumerate()
        .map(|(n, &a)| a * (gamma / ((n + 1) * (n + 1)) as f64).cis())
        .collect())
}

/// `|r, θ⟩ = M(r²) Σ rⁿ e^{inθ}/√ρ_n |n⟩`, checked for tail adequacy.
pub fn generalized_cs(r: f64, theta: f64, family: &WeightFamily, n_max: usize) -> Result<FockExpansion> {
    generalized_cs_truncated(r, theta, family, n_max)?.ensure_adequate()
}

pub fn generalized_cs_truncated(r: f64, theta: f64, family: &WeightFamily, n_max: usize) -> Result<FockExpansion> {
    check_truncation(n_max)?;
    let coeffs = generalized_coeffs(r, PhaseArg::new(theta), family, n_max)?;
    Ok(FockExpansion::from_coeffs(coeffs, FockLabel::Generalized { r, theta }, family.name()))
}

/// `|s, γ⟩ = M(s²) Σ sⁿ e^{iγ/(n+1)²}/√ρ_n |n⟩`, checked for tail adequacy.
pub fn degen_cs(s: f64, gamma: f64, family: &WeightFamily, n_max: usize) -> Result<FockExpansion> {
    degen_cs_truncated(s, gamma, family, n_max)?.ensure_adequate()
}

pub fn degen_cs_truncated(s: f64, gamma: f64, family: &WeightFamily, n_max: usize) -> Result<FockExpansion> {
    check_truncation(n_max)?;
    let coeffs = degenerate_coeffs(s, PhaseArg::new(gamma), family, n_max)?;
    Ok(FockExpansion::from_coeffs(coeffs, FockLabel::Degenerate { s, gamma }, family.name()))
}

/// Smallest `n_max ≤ limit` whose constructor output passes the tail rule.
pub fn adequate_n_max(label: FockLabel, family: &WeightFamily, limit: usize) -> Result<usize> {
    for n_max in 0..=limit {
        let x = build_truncated(label, PhaseShift::None, family, n_max)?;
        if x.tail_weight() <= TAIL_TOL {
            return Ok(n_max);
        }
    }
    Err(Error::config(format!("no n_max ≤ {limit} meets the tail rule for {label:?}")))
}

/// `⟨a|b⟩`, the shorter expansion padded with zeros.
pub fn overlap(a: &FockExpansion, b: &FockExpansion) -> Complex64 {
    a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.conj() * y).sum()
}

/// `c_n ↦ e^{−i E_n t} c_n`.
pub fn evolve_spectral(x: &FockExpansion, spec: &Spectrum, t: f64) -> FockExpansion {
    let coeffs = x
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| c * spec.evolution_phase(n, t).cis())
        .collect();
    FockExpansion { coeffs, label: x.label, family: x.family.clone(), elapsed: x.elapsed + t }
}

enum PhaseShift {
    None,
    By(PhaseArg),
}

fn build_truncated(label: FockLabel, shift: PhaseShift, family: &WeightFamily, n_max: usize) -> Result<FockExpansion> {
    let delta = match shift {
        PhaseShift::None => PhaseArg::ZERO,
        PhaseShift::By(d) => d,
    };
    match label {
        FockLabel::Oscillator { re, im } => {
            let z = Complex64::new(re, im);
            let z = if delta == PhaseArg::ZERO { z } else { z * delta.cis() };
            oscillator_cs_truncated(z, n_max)
        }
        FockLabel::Generalized { r, theta } => {
            let coeffs = generalized_coeffs(r, PhaseArg::new(theta) + delta, family, n_max)?;
            Ok(FockExpansion::from_coeffs(coeffs, label, family.name()))
        }
        FockLabel::Degenerate { s, gamma } => {
            let coeffs = degenerate_coeffs(s, PhaseArg::new(gamma) + delta, family, n_max)?;
            Ok(FockExpansion::from_coeffs(coeffs, label, family.name()))
        }
    }
}

/// Maximum coefficient deviation between the evolved state and the state
/// at the shifted label (`z → e^{−iωt}z`, `θ → θ − ωt`, `γ → γ + ωt`).
///
/// Raw coefficients are compared, with no global-phase alignment. The
/// shifted label is carried as an exact sum, so large `ωt` does not round
/// the original label away.
pub fn stability_residual(label: FockLabel, family: &WeightFamily, spec: &Spectrum, t: f64, n_max: usize) -> Result<f64> {
    let shift = match (label, spec.kind) {
        (FockLabel::Oscillator { .. } | FockLabel::Generalized { .. }, SpectrumKind::Oscillator) => {
            -PhaseArg::product(spec.omega, t)
        }
        (FockLabel::Degenerate { .. }, SpectrumKind::InverseSquare) => PhaseArg::product(spec.omega, t),
        (label, kind) => {
            return Err(Error::config(format!("spectrum {kind:?} does not act as a label shift on {label:?}")))
        }
    };
    let start = build_truncated(label, PhaseShift::None, family, n_max)?;
    let evolved = evolve_spectral(&start, spec, t);
    let shifted = build_truncated(label, PhaseShift::By(shift), family, n_max)?;
    Ok(evolved
        .coeffs
        .iter()
        .zip(&shifted.coeffs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// How the phase label is averaged in the resolution of unity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PhaseAverage {
    /// Exact average over one period (integer frequencies only).
    Period,
    /// `(1/2Γ) ∫_{−Γ}^{Γ}`, evaluated in closed form as `sinc(ΓΔ)`.
    Window { gamma: f64 },
}

/// `sin x / x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn phase_frequency(kind: SpectrumKind, n: usize) -> f64 {
    match kind {
        SpectrumKind::Oscillator => n as f64,
        SpectrumKind::InverseSquare => 1.0 / ((n + 1) * (n + 1)) as f64,
    }
}

/// Averaged phase factor between basis states `n` and `n'`, and the
/// frequency gap `Δ` behind it.
pub(crate) fn phase_average(kind: SpectrumKind, avg: PhaseAverage, n: usize, np: usize) -> Result<(f64, f64)> {
    let delta = phase_frequency(kind, n) - phase_frequency(kind, np);
    match avg {
        PhaseAverage::Period => match kind {
            SpectrumKind::Oscillator => Ok((if n == np { 1.0 } else { 0.0 }, delta)),
            SpectrumKind::InverseSquare => Err(Error::config(
                "frequencies 1/(n+1)² share no common period; use a Γ window",
            )),
        },
        PhaseAverage::Window { gamma } => {
            if !(gamma > 0.0 && gamma.is_finite()) {
                return Err(Error::config(format!("Γ window must be positive, got {gamma}")));
            }
            Ok((if n == np { 1.0 } else { sinc(gamma * delta) }, delta))
        }
    }
}

/// Outcome of a resolution-of-unity check over a truncated basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolutionReport {
    pub n_max: usize,
    pub max_diag_deviation: f64,
    pub max_off_diagonal: f64,
    /// `max_{n≠n'} |R_{nn'}|/√(ρ_n ρ_n') / (Γ|Δ_{nn'}|)` for windowed averages.
    pub certificate: Option<f64>,
    /// Off-diagonal entries exceeding their own sinc-envelope bound.
    pub bound_violations: usize,
    /// `O_{nn'}`, row-major.
    pub operator: Vec<Vec<f64>>,
    /// Per-entry sinc envelope `|R_{nn'}|/√(ρ_n ρ_n') / (Γ|Δ|)`; infinite where
    /// no envelope applies.
    #[serde(skip)]
    pub envelope: Vec<Vec<f64>>,
}

/// Builds `O_{nn'} = ∫ ⟨n|x⟩⟨x|n'⟩ dν` over `n, n' ≤ n_max`.
///
/// The phase average is closed-form; the radial factor
/// `∫ ρ(u) u^{(n+n')/2} du` is computed by quadrature with `radial_nodes`
/// nodes of the family's rule.
pub fn resolution_check_1d(
    family: &WeightFamily,
    kind: SpectrumKind,
    avg: PhaseAverage,
    n_max: usize,
    radial_nodes: usize,
) -> Result<ResolutionReport> {
    let log_moments: Vec<f64> = (0..=n_max).map(|n| family.log_moment(n)).collect::<Result<_>>()?;
    let row = |n: usize| -> Result<Vec<(f64, f64)>> {
        (0..=n_max)
            .map(|np| {
                let (phase, delta) = phase_average(kind, avg, n, np)?;
                if phase == 0.0 && n != np {
                    return Ok((0.0, f64::INFINITY));
                }
                let radial = family.radial_factor(n, np, radial_nodes)?;
                let scaled = radial * (-0.5 * (log_moments[n] + log_moments[np])).exp();
                let envelope = match avg {
                    PhaseAverage::Window { gamma } if n != np => scaled.abs() / (gamma * delta.abs()),
                    _ => f64::INFINITY,
                };
                Ok((scaled * phase, envelope))
            })
            .collect()
    };
    let rows: Vec<Vec<(f64, f64)>> = map_rows(n_max + 1, row)?;

    let mut report = ResolutionReport {
        n_max,
        max_diag_deviation: 0.0,
        max_off_diagonal: 0.0,
        certificate: None,
        bound_violations: 0,
        operator: Vec::with_capacity(n_max + 1),
        envelope: Vec::with_capacity(n_max + 1),
    };
    for (n, row) in rows.iter().enumerate() {
        for (np, &(value, envelope)) in row.iter().enumerate() {
            if n == np {
                report.max_diag_deviation = report.max_diag_deviation.max((value - 1.0).abs());
            } else {
                report.max_off_diagonal = report.max_off_diagonal.max(value.abs());
                if envelope.is_finite() {
                    report.certificate = Some(report.certificate.unwrap_or(0.0).max(envelope));
                    if value.abs() > envelope * (1.0 + 1e-12) {
                        report.bound_violations += 1;
                    }
                }
            }
        }
        report.operator.push(row.iter().map(|p| p.0).collect());
        report.envelope.push(row.iter().map(|p| p.1).collect());
    }
    Ok(report)
}

/// Evaluates `f(i)` for `i < count`, in parallel when enabled; output order is fixed.
pub(crate) fn map_rows<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}
