//! Configuration-space values, radial moments and density exports.

use std::f64::consts::TAU;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::angular::{angular_cs, EulerAngles};
use crate::error::{Error, Result};
use crate::fock1d::{evolve_spectral, map_rows, FockExpansion, Spectrum};
use crate::hydrogen::{evolve_hydrogen, HydrogenExpansion};
use crate::specfun::{
    hermite_function, make_quadrature, radial_eigenfunction, radial_value, reduced_radial_unchecked,
    spherical_harmonic, spherical_harmonics_table, BasisIndex, HalfLineRule, QuadratureKind,
    MAX_LAGUERRE_NODES,
};

/// Sampling grid in spherical coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    r: Vec<f64>,
    theta: Vec<f64>,
    phi: Vec<f64>,
}

impl GridSpec {
    /// Each axis must be nonempty and strictly increasing, with `r > 0`,
    /// `θ ∈ [0, π]` and `φ ∈ [0, 2π)`.
    pub fn new(r: Vec<f64>, theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        check_axis("r", &r, |v| v > 0.0 && v.is_finite())?;
        check_axis("θ", &theta, |v| (0.0..=std::f64::consts::PI).contains(&v))?;
        check_axis("φ", &phi, |v| (0.0..TAU).contains(&v))?;
        Ok(GridSpec { r, theta, phi })
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn len(&self) -> usize {
        self.r.len() * self.theta.len() * self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_axis(name: &str, values: &[f64], in_range: impl Fn(f64) -> bool) -> Result<()> {
    if values.is_empty() {
        return Err(Error::config(format!("{name} axis is empty")));
    }
    if let Some(v) = values.iter().find(|&&v| !in_range(v)) {
        return Err(Error::config(format!("{name} value {v} is out of range")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config(format!("{name} axis must be strictly increasing")));
    }
    Ok(())
}

fn check_point(r: f64, theta: f64, phi: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("radius must be finite and ≥ 0, got {r}")));
    }
    if !(theta.is_finite() && phi.is_finite()) {
        return Err(Error::domain("angles must be finite"));
    }
    Ok(())
}

/// `u_{n+1}^ℓ(r) Y_{ℓm}(θ, φ)`.
pub fn eval_eigenstate(idx: BasisIndex, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
    check_point(r, theta, phi)?;
    Ok(radial_eigenfunction(idx.n(), idx.l(), r)? * spherical_harmonic(idx.l(), idx.m(), theta, phi)?)
}

/// The shell-`n` angular coherent state in position space.
pub fn eval_angular_cs_position(n: usize, omega: &EulerAngles, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
    check_point(r, theta, phi)?;
    let c = angular_cs(n, omega);
    let y = spherical_harmonics_table(n, theta, phi);
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..=n {
        let u = radial_value(n, l, r);
        let base = l * l;
        for k in 0..=2 * l {
            sum += c.coeffs()[base + k] * u * y[base + k];
        }
    }
    Ok(sum)
}

/// Radial values `u_{n+1}^ℓ(r)` for all `ℓ ≤ n ≤ n_max`, at `n(n+1)/2 + ℓ`.
fn radial_table(n_max: usize, r: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity((n_max + 1) * (n_max + 2) / 2);
    for n in 0..=n_max {
        for l in 0..=n {
            out.push(radial_value(n, l, r));
        }
    }
    out
}

fn combine(x: &HydrogenExpansion, radial: &[f64], y: &[Complex64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut flat = 0;
    for n in 0..=x.n_max() {
        let row = n * (n + 1) / 2;
        for l in 0..=n {
            let u = radial[row + l];
            let base = l * l;
            for k in 0..=2 * l {
                sum += x.coeffs()[flat] * u * y[base + k];
                flat += 1;
            }
        }
    }
    sum
}

/// `Σ c_{nℓm} u_{n+1}^ℓ(r) Y_{ℓm}(θ, φ)`.
pub fn eval_hydrogen_cs_position(x: &HydrogenExpansion, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
    check_point(r, theta, phi)?;
    let radial = radial_table(x.n_max(), r);
    let y = spherical_harmonics_table(x.n_max(), theta, phi);
    Ok(combine(x, &radial, &y))
}

/// `∫|ψ|² d³r` on a position grid: composite Gauss-Legendre in `r`,
/// Gauss-Legendre in `cos θ`, trapezoid in `φ`. Only the radial sum is
/// inexact; see [`radial_panel_rule`].
pub fn position_norm_squared(x: &HydrogenExpansion) -> Result<f64> {
    position_norm_squared_with(x, x.n_max() + 12)
}

/// As [`position_norm_squared`] with `panel_nodes` Gauss points per radial panel.
pub fn position_norm_squared_with(x: &HydrogenExpansion, panel_nodes: usize) -> Result<f64> {
    let n_max = x.n_max();
    let (r_nodes, r_weights) = radial_panel_rule(n_max, panel_nodes)?;
    let cos_rule = make_quadrature(QuadratureKind::GaussLegendre { a: -1.0, b: 1.0 }, n_max + 2)?;
    let phi_rule = make_quadrature(QuadratureKind::Trapezoid { start: 0.0, period: TAU }, 2 * n_max + 2)?;
    let y_tables: Vec<Vec<Vec<Complex64>>> = cos_rule
        .nodes
        .iter()
        .map(|&c| {
            let theta = c.clamp(-1.0, 1.0).acos();
            phi_rule.nodes.iter().map(|&p| spherical_harmonics_table(n_max, theta, p)).collect()
        })
        .collect();
    let shells = map_rows(r_nodes.len(), |i| {
        let r = r_nodes[i];
        let table = radial_table(n_max, r);
        let mut shell = 0.0;
        for (a, wc) in cos_rule.weights.iter().enumerate() {
            for (b, wp) in phi_rule.weights.iter().enumerate() {
                shell += wc * wp * combine(x, &table, &y_tables[a][b]).norm_sqr();
            }
        }
        Ok(r_weights[i] * r * r * shell)
    })?;
    Ok(shells.iter().sum())
}

/// Gauss-Legendre panels `[0,1], [1,2], [2,4], …` out to where the outermost
/// shell's density has dropped below `e^{-60}` of its peak. A single Laguerre
/// rule cannot track both `e^{-2r}` and `e^{-2r/(n+1)}` once `n` is large.
pub fn radial_panel_rule(n_max: usize, panel_nodes: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = n_max as f64 + 1.0;
    let cutoff = 4.0 * k * k + 60.0 * k;
    let mut edges = vec![0.0, 1.0];
    while *edges.last().unwrap() < cutoff {
        edges.push(2.0 * edges.last().unwrap());
    }
    let (mut nodes, mut weights) = (Vec::new(), Vec::new());
    for w in edges.windows(2) {
        let q = make_quadrature(QuadratureKind::GaussLegendre { a: w[0], b: w[1] }, panel_nodes)?;
        nodes.extend(q.nodes);
        weights.extend(q.weights);
    }
    Ok((nodes, weights))
}

/// `∫₀^∞ f(r) g(r) dr` for two radial channel functions of shells `n`, `n'`,
/// with the Laguerre scale matched to the pair so the rule is exact.
fn pair_integral(n: usize, np: usize, extra_degree: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    let alpha = 1.0 / (n as f64 + 1.0) + 1.0 / (np as f64 + 1.0);
    let degree = n + np + 2 + extra_degree;
    let nodes = (degree / 2 + 2).min(MAX_LAGUERRE_NODES);
    Ok(HalfLineRule::new(nodes, alpha)?.integrate(f))
}

/// Per-`ℓ` matrices `K_ℓ[n][n'] = ∫ f(χ_{nℓ}, χ_{n'ℓ}, r) dr`, indexed from `n = ℓ`.
fn channel_matrices(
    n_max: usize,
    extra_degree: usize,
    f: impl Fn((f64, f64), (f64, f64), f64) -> f64 + Sync + Send,
) -> Result<Vec<Vec<Vec<f64>>>> {
    map_rows(n_max + 1, |l| {
        (l..=n_max)
            .map(|n| {
                (l..=n_max)
                    .map(|np| {
                        pair_integral(n, np, extra_degree, |r| {
                            f(reduced_radial_unchecked(n, l, r), reduced_radial_unchecked(np, l, r), r)
                        })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()
    })
}

/// `∫ u_{n+1}^ℓ u_{n'+1}^ℓ r² dr` for `ℓ ≤ n, n' ≤ n_max`, indexed from `n = ℓ`.
pub fn radial_gram(l: usize, n_max: usize) -> Result<Vec<Vec<f64>>> {
    if l > n_max {
        return Err(Error::domain(format!("ℓ = {l} exceeds n_max = {n_max}")));
    }
    (l..=n_max)
        .map(|n| {
            (l..=n_max)
                .map(|np| {
                    pair_integral(n, np, 0, |r| {
                        reduced_radial_unchecked(n, l, r).0 * reduced_radial_unchecked(np, l, r).0
                    })
                })
                .collect()
        })
        .collect()
}

/// `Σ_{ℓ,m} Σ_{n,n'} conj(c_{nℓm}) c_{n'ℓm} K_ℓ[n][n']`.
fn channel_form(x: &HydrogenExpansion, k: &[Vec<Vec<f64>>]) -> Complex64 {
    let n_max = x.n_max();
    let mut total = Complex64::new(0.0, 0.0);
    for (l, kl) in k.iter().enumerate() {
        for m in -(l as i32)..=l as i32 {
            let c: Vec<Complex64> = (l..=n_max)
                .map(|n| x.coeff(BasisIndex::new(n, l, m).expect("valid label")).unwrap_or_default())
                .collect();
            for (i, ci) in c.iter().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    total += ci.conj() * cj * kl[i][j];
                }
            }
        }
    }
    total
}

fn nonzero_norm(x: &HydrogenExpansion) -> Result<f64> {
    let norm = x.norm_squared();
    if !(norm > 0.0) {
        return Err(Error::domain("expectation values need a nonzero state"));
    }
    Ok(norm)
}

/// `⟨r^k⟩` for `k ≥ −1`, normalized by the state's own norm².
pub fn radial_expectation(x: &HydrogenExpansion, k: i32) -> Result<f64> {
    if k < -1 {
        return Err(Error::domain(format!("⟨r^k⟩ is only supported for k ≥ −1, got {k}")));
    }
    let norm = nonzero_norm(x)?;
    let mats = channel_matrices(x.n_max(), k.max(0) as usize, |(a, _), (b, _), r| a * b * r.powi(k))?;
    Ok(channel_form(x, &mats).re / norm)
}

/// Ingredients of the radial uncertainty product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialMoments {
    pub r: f64,
    pub r2: f64,
    pub p: f64,
    pub p2: f64,
}

impl RadialMoments {
    pub fn variance_r(&self) -> f64 {
        self.r2 - self.r * self.r
    }

    pub fn variance_p(&self) -> f64 {
        self.p2 - self.p * self.p
    }

    pub fn product(&self) -> f64 {
        self.variance_r() * self.variance_p()
    }
}

/// `⟨r⟩`, `⟨r²⟩`, `⟨p_r⟩`, `⟨p_r²⟩` with `p_r = −i(∂_r + 1/r)`.
///
/// On a channel with reduced function `χ = r ψ`, `⟨p_r⟩ = Im ∫ χ̄ χ' dr`
/// and `⟨p_r²⟩ = ∫ |χ'|² dr`; `χ'` is the analytic series derivative.
pub fn radial_moments(x: &HydrogenExpansion) -> Result<RadialMoments> {
    let norm = nonzero_norm(x)?;
    let n_max = x.n_max();
    let r1 = channel_matrices(n_max, 1, |(a, _), (b, _), r| a * b * r)?;
    let r2 = channel_matrices(n_max, 2, |(a, _), (b, _), r| a * b * r * r)?;
    let p1 = channel_matrices(n_max, 0, |(a, _), (_, db), _| a * db)?;
    let p2 = channel_matrices(n_max, 0, |(_, da), (_, db), _| da * db)?;
    Ok(RadialMoments {
        r: channel_form(x, &r1).re / norm,
        r2: channel_form(x, &r2).re / norm,
        p: channel_form(x, &p1).im / norm,
        p2: channel_form(x, &p2).re / norm,
    })
}

/// `⟨(r − ⟨r⟩)²⟩ ⟨(p_r − ⟨p_r⟩)²⟩` in units with ħ = 1.
pub fn radial_uncertainty_product(x: &HydrogenExpansion) -> Result<f64> {
    Ok(radial_moments(x)?.product())
}

/// One row of a density export.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityRow {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub re_psi: f64,
    pub im_psi: f64,
    pub density: f64,
}

pub const DENSITY_HEADER: [&str; 7] = ["t", "r", "theta", "phi", "re_psi", "im_psi", "density"];

/// Samples `ψ(t)` on `grid` for each time, with evolution applied as a
/// `γ` shift. Rows are ordered by `t`, then `r`, `θ`, `φ`.
pub fn export_density_grid(x: &HydrogenExpansion, omega: f64, grid: &GridSpec, times: &[f64]) -> Result<Vec<DensityRow>> {
    let y_tables: Vec<Vec<Vec<Complex64>>> = grid
        .theta
        .iter()
        .map(|&th| grid.phi.iter().map(|&p| spherical_harmonics_table(x.n_max(), th, p)).collect())
        .collect();
    let mut rows = Vec::with_capacity(grid.len() * times.len());
    for &t in times {
        if !t.is_finite() {
            return Err(Error::config(format!("time {t} is not finite")));
        }
        let state = evolve_hydrogen(x, omega, t);
        let blocks = map_rows(grid.r.len(), |i| {
            let r = grid.r[i];
            let radial = radial_table(x.n_max(), r);
            let mut block = Vec::with_capacity(grid.theta.len() * grid.phi.len());
            for (a, &theta) in grid.theta.iter().enumerate() {
                for (b, &phi) in grid.phi.iter().enumerate() {
                    let psi = combine(&state, &radial, &y_tables[a][b]);
                    block.push(DensityRow {
                        t,
                        r,
                        theta,
                        phi,
                        re_psi: psi.re,
                        im_psi: psi.im,
                        density: psi.norm_sqr(),
                    });
                }
            }
            Ok(block)
        })?;
        rows.extend(blocks.into_iter().flatten());
    }
    Ok(rows)
}

/// One row of a one-dimensional export in the oscillator picture.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineRow {
    pub t: f64,
    pub x: f64,
    pub re_psi: f64,
    pub im_psi: f64,
    pub density: f64,
}

pub const LINE_HEADER: [&str; 5] = ["t", "x", "re_psi", "im_psi", "density"];

/// `ψ(x, t) = Σ c_n e^{−iE_n t} h_n(x)` on Hermite functions.
pub fn export_fock_density(state: &FockExpansion, spec: &Spectrum, xs: &[f64], times: &[f64]) -> Result<Vec<LineRow>> {
    if let Some(v) = xs.iter().find(|v| !v.is_finite()) {
        return Err(Error::config(format!("sample point {v} is not finite")));
    }
    let table: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| (0..=state.n_max()).map(|n| hermite_function(n, x)).collect())
        .collect();
    let mut rows = Vec::with_capacity(xs.len() * times.len());
    for &t in times {
        let evolved = evolve_spectral(state, spec, t);
        for (&x, h) in xs.iter().zip(&table) {
            let psi: Complex64 = evolved.coeffs().iter().zip(h).map(|(c, v)| c * v).sum();
            rows.push(LineRow { t, x, re_psi: psi.re, im_psi: psi.im, density: psi.norm_sqr() });
        }
    }
    Ok(rows)
}

/// Formats with 17 significant digits so values round-trip exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a header line and one record per row.
pub fn write_csv<W: Write, const K: usize>(
    out: W,
    header: [&str; K],
    rows: impl IntoIterator<Item = [f64; K]>,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_f64(*v)))?;
    }
    w.flush()?;
    Ok(())
}

impl DensityRow {
    pub fn fields(&self) -> [f64; 7] {
        [self.t, self.r, self.theta, self.phi, self.re_psi, self.im_psi, self.density]
    }
}

impl LineRow {
    pub fn fields(&self) -> [f64; 5] {
        [self.t, self.x, self.re_psi, self.im_psi, self.density]
    }
}

/// Writes `rows` to `path` as CSV, reporting failures with the path attached.
pub fn save_density_csv(rows: &[DensityRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    write_csv(BufWriter::new(file), DENSITY_HEADER, rows.iter().map(DensityRow::fields)).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydrogen::{hydrogen_cs_truncated, HydrogenLabel};
    use crate::weights::WeightFamily;
    use std::f64::consts::PI;

    fn ground(n_max: usize) -> HydrogenExpansion {
        HydrogenExpansion::eigenstate(BasisIndex::new(0, 0, 0).unwrap(), n_max).unwrap()
    }

    #[test]
    fn eigenstate_spot_values() {
        let g = eval_eigenstate(BasisIndex::new(0, 0, 0).unwrap(), 0.0, 0.3, 0.1).unwrap();
        assert!((g.re - 0.5641895835477563).abs() < 1e-15 && g.im == 0.0);
        let node = eval_eigenstate(BasisIndex::new(1, 0, 0).unwrap(), 2.0, 1.0, 1.0).unwrap();
        assert!(node.norm() < 1e-15);
        assert!(eval_eigenstate(BasisIndex::new(0, 0, 0).unwrap(), -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn eigenstates_normalized_in_space() {
        for idx in BasisIndex::enumerate(4) {
            let x = HydrogenExpansion::eigenstate(idx, 4).unwrap();
            let v = position_norm_squared(&x).unwrap();
            assert!((v - 1.0).abs() < 1e-9, "{idx:?}: {v}");
        }
    }

    #[test]
    fn angular_state_in_space() {
        let om = EulerAngles::new(0.9, 0.4, 2.2).unwrap();
        let r = 1.3;
        let a = eval_angular_cs_position(0, &om, r, 0.7, 0.2).unwrap();
        let want = radial_value(0, 0, r) / (4.0 * PI).sqrt();
        assert!((a - want).norm() < 1e-15);

        // at the pole only m = 0 harmonics survive, and θ̄ = 0 leaves only m = ℓ
        let pole = eval_angular_cs_position(1, &EulerAngles::ZERO, r, 0.0, 0.0).unwrap();
        let want = radial_value(1, 0, r) / (4.0 * PI).sqrt();
        assert!((pole - want).norm() < 1e-15);

        for n in 0..=3 {
            let coeffs = angular_cs(n, &om);
            let mut full = vec![Complex64::new(0.0, 0.0); crate::specfun::shells_dimension_below(n + 1)];
            let start = crate::specfun::shells_dimension_below(n);
            full[start..].copy_from_slice(coeffs.coeffs());
            let x = HydrogenExpansion::from_coeffs(n, full).unwrap();
            let v = position_norm_squared(&x).unwrap();
            assert!((v - ((n + 1) * (n + 1)) as f64).abs() < 1e-8, "{n}: {v}");
            let p = eval_hydrogen_cs_position(&x, 0.8, 1.0, 2.0).unwrap();
            let q = eval_angular_cs_position(n, &om, 0.8, 1.0, 2.0).unwrap();
            assert!((p - q).norm() < 1e-14);
        }
    }

    #[test]
    fn radial_gram_is_identity() {
        for l in 0..=8 {
            let g = radial_gram(l, 8).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-12, "ℓ={l} ({i},{j}): {v}");
                }
            }
        }
    }

    #[test]
    fn ground_state_moments() {
        let g = ground(3);
        assert!((radial_expectation(&g, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((radial_expectation(&g, 1).unwrap() - 1.5).abs() < 1e-12);
        assert!((radial_expectation(&g, 2).unwrap() - 3.0).abs() < 1e-12);
        assert!((radial_expectation(&g, -1).unwrap() - 1.0).abs() < 1e-12);
        assert!(radial_expectation(&g, -2).is_err());
        let m = radial_moments(&g).unwrap();
        assert!(m.p.abs() < 1e-14);
        assert!((m.p2 - 1.0).abs() < 1e-12);
        assert!((m.product() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn excited_state_moments() {
        // ⟨r⟩ = (3N² − ℓ(ℓ+1))/2 and ⟨1/r⟩ = 1/N² for principal number N
        for idx in BasisIndex::enumerate(4).filter(|b| b.m() == 0) {
            let x = HydrogenExpansion::eigenstate(idx, 4).unwrap();
            let big_n = idx.principal() as f64;
            let l = idx.l() as f64;
            let r = radial_expectation(&x, 1).unwrap();
            assert!((r - (3.0 * big_n * big_n - l * (l + 1.0)) / 2.0).abs() < 1e-10);
            let inv = radial_expectation(&x, -1).unwrap();
            assert!((inv - 1.0 / (big_n * big_n)).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_state_parseval() {
        let e = WeightFamily::exponential();
        let l = HydrogenLabel::new(1.0, 0.3, EulerAngles::new(0.5, 1.0, 2.0).unwrap()).unwrap();
        let x = hydrogen_cs_truncated(&l, &e, 6).unwrap();
        let v = position_norm_squared(&x).unwrap();
        assert!((v - x.norm_squared()).abs() < 1e-8 * x.norm_squared(), "{v} vs {}", x.norm_squared());
        let u = radial_uncertainty_product(&x).unwrap();
        assert!(u >= 0.25, "{u}");
    }

    #[test]
    fn ground_density_rows() {
        let g = ground(0);
        let grid = GridSpec::new(vec![0.5, 1.0, 2.0], vec![0.3], vec![0.0]).unwrap();
        let rows = export_density_grid(&g, 1.0, &grid, &[0.0]).unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            let want = (-2.0 * row.r).exp() / PI;
            assert!((row.density - want).abs() < 1e-15);
        }
        assert!(GridSpec::new(vec![1.0, 0.5], vec![0.0], vec![0.0]).is_err());
        assert!(GridSpec::new(vec![1.0], vec![4.0], vec![0.0]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let rows = [[0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0, -0.0, std::f64::consts::E]];
        let mut buf = Vec::new();
        write_csv(&mut buf, DENSITY_HEADER, rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,r,theta,phi,re_psi,im_psi,density");
        let back: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        for (a, b) in back.iter().zip(rows[0]) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
