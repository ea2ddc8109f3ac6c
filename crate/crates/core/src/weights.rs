//! Moment-weight families `ρ(u)` on `[0, ∞)`.
//!
//! A family fixes the moments `ρ_n = ∫ uⁿ ρ(u) du`, the normalization
//! `M²(u) = 1 / Σ uⁿ/ρ_n` and the measure density `k = ρ / M²` of the
//! states built from it.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{ln_factorial, ln_gamma, make_quadrature, QuadratureKind, QuadratureRule};

/// Terms kept in normalization series when no closed form exists.
pub const DEFAULT_SERIES_TERMS: usize = 64;

/// Relative size of the last series term below which a sum counts as converged.
pub const SERIES_TAIL_TOL: f64 = 1e-14;

const DEFAULT_MOMENT_NODES: usize = 64;
const TABLE_NODES: usize = 12;
const TABLE_CHECK_NODES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    /// `ρ(u) = e^{-u}`, `ρ_n = n!`.
    Exponential,
    /// `ρ(u) = e^{-√u}/2`, `ρ_n = (2n+1)!`.
    SqrtExponential,
    Tabulated(Table),
}

/// `ρ` sampled on a grid, interpolated log-linearly where positive.
#[derive(Clone, Debug, PartialEq)]
struct Table {
    grid: Vec<f64>,
    rho: Vec<f64>,
}

impl Table {
    fn value(&self, u: f64) -> f64 {
        let g = &self.grid;
        if u < g[0] || u > g[g.len() - 1] {
            return 0.0;
        }
        let i = match g.binary_search_by(|x| x.total_cmp(&u)) {
            Ok(i) => return self.rho[i],
            Err(i) => i - 1,
        };
        self.interpolate(i, u)
    }

    fn interpolate(&self, i: usize, u: f64) -> f64 {
        let (u0, u1) = (self.grid[i], self.grid[i + 1]);
        let (r0, r1) = (self.rho[i], self.rho[i + 1]);
        let s = (u - u0) / (u1 - u0);
        if r0 > 0.0 && r1 > 0.0 {
            (r0.ln() * (1.0 - s) + r1.ln() * s).exp()
        } else {
            r0 * (1.0 - s) + r1 * s
        }
    }

    /// `∫ f(u) ρ(u) du` with a Gauss-Legendre rule on every grid segment.
    fn integrate<F: FnMut(f64) -> f64>(&self, unit: &QuadratureRule, mut f: F) -> f64 {
        let mut total = 0.0;
        for i in 0..self.grid.len() - 1 {
            let (a, b) = (self.grid[i], self.grid[i + 1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in unit.iter() {
                let u = mid + half * x;
                total += half * w * f(u) * self.interpolate(i, u);
            }
        }
        total
    }
}

/// On-disk form of a tabulated weight, as read by `hcs moments`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CustomFamilyFile {
    pub name: String,
    pub grid_u: Vec<f64>,
    pub rho: Vec<f64>,
    /// Number of moments `ρ_0..=ρ_{n_max}` to compute.
    pub n_max: usize,
    /// Optional declared moment table; validated against quadrature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightFamily {
    name: String,
    shape: Shape,
    /// `ln ρ_n` for tabulated families, computed once at construction.
    table_log_moments: Vec<f64>,
    /// Declared moments that replace the closed form or the computed table.
    declared: Option<Vec<f64>>,
}

/// The two families with closed-form moments.
pub fn builtin_family(name: &str) -> Result<WeightFamily> {
    let shape = match name {
        "exponential" => Shape::Exponential,
        "sqrt-exponential" => Shape::SqrtExponential,
        other => {
            return Err(Error::config(format!(
                "unknown weight family '{other}' (expected exponential or sqrt-exponential)"
            )))
        }
    };
    Ok(WeightFamily { name: name.to_string(), shape, table_log_moments: Vec::new(), declared: None })
}

impl WeightFamily {
    pub fn exponential() -> Self {
        builtin_family("exponential").expect("builtin")
    }

    pub fn sqrt_exponential() -> Self {
        builtin_family("sqrt-exponential").expect("builtin")
    }

    /// Builds a tabulated family and computes `ρ_0..=ρ_{n_max}` numerically.
    pub fn from_custom(spec: &CustomFamilyFile) -> Result<Self> {
        let grid = &spec.grid_u;
        if grid.len() < 2 || grid.len() != spec.rho.len() {
            return Err(Error::config(format!(
                "custom family '{}': grid_u and rho need equal length ≥ 2 (got {} and {})",
                spec.name,
                grid.len(),
                spec.rho.len()
            )));
        }
        if grid[0] < 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|u| !u.is_finite()) {
            return Err(Error::config(format!(
                "custom family '{}': grid_u must be finite, non-negative and strictly increasing",
                spec.name
            )));
        }
        if spec.rho.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::config(format!("custom family '{}': rho must be finite and ≥ 0", spec.name)));
        }
        let table = Table { grid: grid.clone(), rho: spec.rho.clone() };
        let unit = unit_legendre(TABLE_NODES)?;
        let mut logs = Vec::with_capacity(spec.n_max + 1);
        for n in 0..=spec.n_max {
            let v = table.integrate(&unit, |u| u.powi(n as i32));
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Numerical(format!(
                    "custom family '{}': moment {n} is not positive ({v})",
                    spec.name
                )));
            }
            logs.push(v.ln());
        }
        let family = WeightFamily {
            name: spec.name.clone(),
            shape: Shape::Tabulated(table),
            table_log_moments: logs,
            declared: None,
        };
        match &spec.moments {
            Some(m) => family.with_moment_table(m.clone()),
            None => Ok(family),
        }
    }

    pub fn load_custom(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let spec: CustomFamilyFile = serde_json::from_str(&text)
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        Self::from_custom(&spec)
    }

    /// Replaces the moments by a declared table (e.g. one read from disk).
    ///
    /// `validate` compares the table against quadrature, so a wrong entry
    /// shows up as a failed moment check.
    pub fn with_moment_table(mut self, moments: Vec<f64>) -> Result<Self> {
        if moments.is_empty() || moments.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::config(format!("family '{}': declared moments must be positive", self.name)));
        }
        self.declared = Some(moments);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.shape, Shape::Tabulated(_))
    }

    /// Largest `n` with a known moment, `None` when unbounded.
    pub fn max_moment_index(&self) -> Option<usize> {
        match (&self.shape, &self.declared) {
            (Shape::Tabulated(_), Some(d)) => Some(d.len().min(self.table_log_moments.len()) - 1),
            (Shape::Tabulated(_), None) => Some(self.table_log_moments.len() - 1),
            _ => None,
        }
    }

    pub fn rho(&self, u: f64) -> f64 {
        if u < 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Exponential => (-u).exp(),
            Shape::SqrtExponential => 0.5 * (-u.sqrt()).exp(),
            Shape::Tabulated(t) => t.value(u),
        }
    }

    /// `ln ρ_n`.
    pub fn log_moment(&self, n: usize) -> Result<f64> {
        if let Some(d) = &self.declared {
            if let Some(v) = d.get(n) {
                return Ok(v.ln());
            }
        }
        match &self.shape {
            Shape::Exponential => Ok(ln_factorial(n)),
            Shape::SqrtExponential => Ok(ln_factorial(2 * n + 1)),
            Shape::Tabulated(_) => self.table_log_moments.get(n).copied().ok_or_else(|| {
                Error::config(format!(
                    "family '{}' has moments only up to n = {}",
                    self.name,
                    self.table_log_moments.len() - 1
                ))
            }),
        }
    }

    /// `ρ_n`.
    pub fn moment(&self, n: usize) -> Result<f64> {
        self.log_moment(n).map(f64::exp)
    }

    /// Closed-form `M²(u)`, when the family has one and no declared table.
    pub fn closed_form_m_squared(&self, u: f64) -> Option<f64> {
        if self.declared.is_some() {
            return None;
        }
        match self.shape {
            Shape::Exponential => Some((-u).exp()),
            Shape::SqrtExponential => {
                let x = u.sqrt();
                if x == 0.0 {
                    Some(1.0)
                } else {
                    // x / sinh x without overflow
                    let e = (-2.0 * x).exp();
                    Some(2.0 * x * (-x).exp() / (1.0 - e))
                }
            }
            Shape::Tabulated(_) => None,
        }
    }

    /// Number of series terms used when `M²` has no closed form.
    pub fn series_terms(&self) -> usize {
        self.max_moment_index().unwrap_or(DEFAULT_SERIES_TERMS)
    }

    /// `M²(u)`: the closed form when available, else the truncated series.
    pub fn m_squared(&self, u: f64) -> Result<f64> {
        match self.closed_form_m_squared(u) {
            Some(v) => Ok(v),
            None => {
                let m = self.normalization_m(u, self.series_terms())?;
                Ok(m * m)
            }
        }
    }

    /// `[Σ_{n≤n_max} uⁿ/ρ_n]^{-1/2}`, refusing sums whose last term is not negligible.
    pub fn normalization_m(&self, u: f64, n_max: usize) -> Result<f64> {
        let (sum, last) = self.series(u, n_max)?;
        if last > SERIES_TAIL_TOL * sum {
            return Err(Error::Truncation { n_max, tail: last / sum, bound: SERIES_TAIL_TOL });
        }
        Ok(sum.powf(-0.5))
    }

    /// `(Σ_{n≤n_max} uⁿ/ρ_n, last term)`, each term formed in log space.
    pub(crate) fn series(&self, u: f64, n_max: usize) -> Result<(f64, f64)> {
        if !(u >= 0.0 && u.is_finite()) {
            return Err(Error::domain(format!("normalization argument must be finite and ≥ 0, got {u}")));
        }
        let mut sum = 0.0;
        let mut last = 0.0;
        let lnu = u.ln();
        for n in 0..=n_max {
            let term = if n == 0 {
                (-self.log_moment(0)?).exp()
            } else if u == 0.0 {
                0.0
            } else {
                (n as f64 * lnu - self.log_moment(n)?).exp()
            };
            sum += term;
            last = term;
        }
        Ok((sum, last))
    }

    /// `k(u) = ρ(u) / M²(u)`.
    pub fn k_weight(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(Error::domain(format!("k(u) needs u ≥ 0, got {u}")));
        }
        if self.declared.is_none() {
            match self.shape {
                Shape::Exponential => return Ok(1.0),
                // e^{-√u} sinh√u / (2√u) = (1 − e^{-2√u}) / (4√u)
                Shape::SqrtExponential => {
                    let x = u.sqrt();
                    return Ok(if x == 0.0 { 0.5 } else { -(-2.0 * x).exp_m1() / (4.0 * x) });
                }
                Shape::Tabulated(_) => {}
            }
        }
        let m2 = self.m_squared(u)?;
        if m2 <= 0.0 {
            return Err(Error::Singularity(format!("M²({u}) vanishes for family '{}'", self.name)));
        }
        Ok(self.rho(u) / m2)
    }

    /// `∫₀^∞ f(u) ρ(u) du` by a rule matched to the family.
    ///
    /// The exponential family uses Gauss-Laguerre directly; the
    /// sqrt-exponential one substitutes `u = x²`, turning the weight into
    /// `x e^{-x}`; tabulated families integrate segment by segment.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, nodes: usize, mut f: F) -> Result<f64> {
        match &self.shape {
            Shape::Exponential => {
                let q = make_quadrature(QuadratureKind::GaussLaguerre, nodes)?;
                Ok(q.integrate(f))
            }
            Shape::SqrtExponential => {
                let q = make_quadrature(QuadratureKind::GaussLaguerre, nodes)?;
                Ok(q.integrate(|x| x * f(x * x)))
            }
            Shape::Tabulated(t) => {
                let unit = unit_legendre(nodes.clamp(2, 64))?;
                Ok(t.integrate(&unit, f))
            }
        }
    }

    /// `ρ_n` recomputed by quadrature, independent of the stored moments.
    pub fn quadrature_moment(&self, n: usize, nodes: usize) -> Result<f64> {
        let v = self.integrate(nodes, |u| u.powi(n as i32))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Numerical(format!(
                "family '{}': quadrature moment {n} with {nodes} nodes is {v}",
                self.name
            )));
        }
        Ok(v)
    }

    /// `∫ k M² u^{(n+n')/2} du = ∫ ρ(u) u^{(n+n')/2} du`.
    ///
    /// Odd `n + n'` gives a half-integer power; for the exponential family
    /// the `√u` is absorbed into a generalized Laguerre weight so the rule
    /// stays exact.
    pub fn radial_factor(&self, n: usize, np: usize, nodes: usize) -> Result<f64> {
        let half = 0.5 * (n + np) as f64;
        if (n + np).is_multiple_of(2) {
            let p = ((n + np) / 2) as i32;
            return self.integrate(nodes, |u| u.powi(p));
        }
        if matches!(self.shape, Shape::Exponential) {
            let q = make_quadrature(QuadratureKind::GeneralizedLaguerre { alpha: 0.5 }, nodes)?;
            let p = ((n + np - 1) / 2) as i32;
            return Ok(q.integrate(|u| u.powi(p)));
        }
        self.integrate(nodes, |u| u.powf(half))
    }

    /// Closed-form half-integer moment, for the built-ins only.
    pub fn fractional_moment(&self, p: f64) -> Option<f64> {
        if self.declared.is_some() {
            return None;
        }
        match self.shape {
            Shape::Exponential => ln_gamma(p + 1.0).ok().map(f64::exp),
            Shape::SqrtExponential => ln_gamma(2.0 * p + 2.0).ok().map(f64::exp),
            Shape::Tabulated(_) => None,
        }
    }

    fn check_grid(&self) -> Vec<f64> {
        let (lo, hi): (f64, f64) = match &self.shape {
            Shape::Tabulated(t) => (t.grid[0].max(1e-3), t.grid[t.grid.len() - 1].min(20.0)),
            _ => (1e-3, 20.0),
        };
        let count = 50;
        (0..count)
            .map(|i| {
                let s = i as f64 / (count - 1) as f64;
                (lo.ln() * (1.0 - s) + hi.ln() * s).exp()
            })
            .collect()
    }

    /// Consistency checks of the triple `(ρ, ρ_n, M²)`; failures are entries, not errors.
    pub fn validate(&self, n_max: usize, tol: f64) -> ValidationReport {
        let mut checks = Vec::new();
        let nodes = DEFAULT_MOMENT_NODES.max(n_max + 2).min(crate::specfun::quadrature::MAX_LAGUERRE_NODES);
        let nodes = if self.is_tabulated() { TABLE_CHECK_NODES } else { nodes };

        // (a) stored moments against quadrature
        let mut moments = CheckResult::new("moments", tol);
        let mut moment_rows = Vec::new();
        for n in 0..=n_max {
            let row = match (self.moment(n), self.quadrature_moment(n, nodes)) {
                (Ok(stored), Ok(quad)) => {
                    let dev = ((quad - stored) / stored).abs();
                    moments.record(dev, n);
                    MomentRow { n, stored, quadrature: quad, relative_deviation: dev, passed: dev <= tol }
                }
                (a, b) => {
                    let msg = a.err().or(b.err()).map(|e| e.to_string()).unwrap_or_default();
                    moments.fail(n, msg);
                    MomentRow { n, stored: f64::NAN, quadrature: f64::NAN, relative_deviation: f64::INFINITY, passed: false }
                }
            };
            moment_rows.push(row);
        }
        if let Some(first) = moment_rows.iter().find(|r| !r.passed) {
            moments.detail = format!("first failing moment at n = {}", first.n);
        }
        checks.push(moments);

        // (b) ρ = M² k on a log-spaced grid
        // Tabulated families only know finitely many moments, so M² is
        // defined only where the series has converged; points beyond are
        // reported, not failed.
        let mut factor = CheckResult::new("factorization", 1e-10_f64.max(tol));
        let mut unconverged: Option<f64> = None;
        for (i, &u) in self.check_grid().iter().enumerate() {
            let rho = self.rho(u);
            match (self.m_squared(u), self.k_weight(u)) {
                (Ok(m2), Ok(k)) => {
                    let dev = if rho == 0.0 { (m2 * k).abs() } else { ((m2 * k - rho) / rho).abs() };
                    factor.record(dev, i);
                }
                (Err(Error::Truncation { .. }), _) if self.is_tabulated() => {
                    unconverged.get_or_insert(u);
                }
                (a, b) => factor.fail(i, a.err().or(b.err()).map(|e| e.to_string()).unwrap_or_default()),
            }
        }
        if let Some(u) = unconverged {
            factor.detail = format!("normalization series not converged from u = {u:.4} on; checked below");
        }
        checks.push(factor);

        // (c) positivity of moments, ρ and k
        let mut positivity = CheckResult::new("positivity", 0.0);
        for n in 0..=n_max {
            match self.moment(n) {
                Ok(v) if v > 0.0 => {}
                _ => positivity.fail(n, format!("ρ_{n} not positive")),
            }
        }
        for (i, &u) in self.check_grid().iter().enumerate() {
            let k_negative = match self.k_weight(u) {
                Ok(k) => k < 0.0,
                Err(Error::Truncation { .. }) => false,
                Err(_) => true,
            };
            if self.rho(u) < 0.0 || k_negative {
                positivity.fail(i, format!("negative weight at u = {u}"));
            }
        }
        checks.push(positivity);

        // (d) closed-form M² against the moment series
        if self.closed_form_m_squared(1.0).is_some() {
            let mut norm = CheckResult::new("normalization", 1e-10_f64.max(tol));
            for (i, &u) in self.check_grid().iter().enumerate() {
                match self.series(u, DEFAULT_SERIES_TERMS) {
                    Ok((sum, _)) => {
                        let m2 = self.closed_form_m_squared(u).unwrap_or(f64::NAN);
                        norm.record((m2 * sum - 1.0).abs(), i);
                    }
                    Err(e) => norm.fail(i, e.to_string()),
                }
            }
            checks.push(norm);
        }

        // (e) log-convexity: ρ_n² ≤ ρ_{n-1} ρ_{n+1}
        let mut convex = CheckResult::new("log_convexity", 1e-12);
        for n in 1..n_max {
            if let (Ok(a), Ok(b), Ok(c)) = (self.log_moment(n - 1), self.log_moment(n), self.log_moment(n + 1)) {
                let excess = (2.0 * b - a - c).max(0.0);
                convex.record(excess, n);
            }
        }
        checks.push(convex);

        ValidationReport { family: self.name.clone(), n_max, tol, moments: moment_rows, checks }
    }
}

fn unit_legendre(m: usize) -> Result<QuadratureRule> {
    make_quadrature(QuadratureKind::GaussLegendre { a: -1.0, b: 1.0 }, m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    pub bound: f64,
    pub worst_index: Option<usize>,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, bound: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: true,
            max_deviation: 0.0,
            bound,
            worst_index: None,
            detail: String::new(),
        }
    }

    fn record(&mut self, dev: f64, index: usize) {
        if !(dev <= self.max_deviation) {
            self.max_deviation = dev;
            self.worst_index = Some(index);
        }
        if !(dev <= self.bound) {
            self.passed = false;
        }
    }

    fn fail(&mut self, index: usize, msg: String) {
        self.passed = false;
        self.max_deviation = f64::INFINITY;
        self.worst_index.get_or_insert(index);
        if self.detail.is_empty() {
            self.detail = msg;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub stored: f64,
    pub quadrature: f64,
    pub relative_deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub family: String,
    pub n_max: usize,
    pub tol: f64,
    pub moments: Vec<MomentRow>,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exponential_table(n_max: usize) -> CustomFamilyFile {
        let grid: Vec<f64> = (0..=4000).map(|i| i as f64 * 0.025).collect();
        CustomFamilyFile {
            name: "tab-exp".into(),
            rho: grid.iter().map(|u| (-u).exp()).collect(),
            grid_u: grid,
            n_max,
            moments: None,
        }
    }

    #[test]
    fn builtin_moments() {
        let e = WeightFamily::exponential();
        let s = WeightFamily::sqrt_exponential();
        assert!((e.moment(4).unwrap() - 24.0).abs() < 1e-12);
        assert!((e.moment(0).unwrap() - 1.0).abs() < 1e-15);
        assert!((e.moment(5).unwrap() - 120.0).abs() < 1e-12);
        assert!((s.moment(2).unwrap() - 120.0).abs() < 1e-12);
        assert!((s.moment(3).unwrap() - 5040.0).abs() < 1e-9);
        assert!(matches!(builtin_family("gaussian"), Err(Error::Config(_))));
    }

    #[test]
    fn sqrt_exponential_m_squared() {
        let s = WeightFamily::sqrt_exponential();
        let want = 2.0 / 2f64.sinh();
        assert!((s.m_squared(4.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.5514411295435664).abs() < 1e-15);
        assert_eq!(s.m_squared(0.0).unwrap(), 1.0);
        // large arguments neither overflow nor produce NaN
        assert!(s.m_squared(1.0e4).unwrap() > 0.0);
        assert_eq!(s.m_squared(1.0e6).unwrap(), 0.0);
    }

    #[test]
    fn normalization_examples() {
        let e = WeightFamily::exponential();
        let s = WeightFamily::sqrt_exponential();
        assert_eq!(e.normalization_m(0.0, 64).unwrap(), 1.0);
        assert!((e.normalization_m(4.0, 64).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        let want = (1.0 / 1f64.sinh()).sqrt();
        assert!((s.normalization_m(1.0, 64).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.9224522362915717).abs() < 1e-15);
        assert!(matches!(e.normalization_m(100.0, 64), Err(Error::Truncation { .. })));
    }

    #[test]
    fn k_weight_examples() {
        let e = WeightFamily::exponential();
        let s = WeightFamily::sqrt_exponential();
        assert_eq!(e.k_weight(0.0).unwrap(), 1.0);
        assert_eq!(e.k_weight(3.3).unwrap(), 1.0);
        let want = 0.5 * (-1.0f64).exp() * 1f64.sinh();
        assert!((s.k_weight(1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.2162).abs() < 1e-4);
        assert!(e.k_weight(-1.0).is_err());
    }

    #[test]
    fn quadrature_moments_match_closed_forms() {
        for fam in [WeightFamily::exponential(), WeightFamily::sqrt_exponential()] {
            for n in 0..=12 {
                let q = fam.quadrature_moment(n, 64).unwrap();
                let c = fam.moment(n).unwrap();
                assert!(((q - c) / c).abs() <= 1e-9, "{} n={n}", fam.name());
            }
        }
    }

    #[test]
    fn moment_ratios_nondecreasing() {
        for fam in [WeightFamily::exponential(), WeightFamily::sqrt_exponential()] {
            let ratios: Vec<f64> =
                (0..=11).map(|n| fam.moment(n + 1).unwrap() / fam.moment(n).unwrap()).collect();
            assert!(ratios.windows(2).all(|w| w[1] >= w[0]), "{}", fam.name());
        }
    }

    #[test]
    fn validation_passes_for_builtins() {
        for fam in [WeightFamily::exponential(), WeightFamily::sqrt_exponential()] {
            let rep = fam.validate(10, 1e-9);
            assert!(rep.all_passed(), "{:#?}", rep.failed().collect::<Vec<_>>());
        }
    }

    #[test]
    fn corrupted_moment_fails_at_three() {
        let mut table: Vec<f64> = (0..=10).map(|n| WeightFamily::exponential().moment(n).unwrap()).collect();
        table[3] *= 1.01;
        let fam = WeightFamily::exponential().with_moment_table(table).unwrap();
        let rep = fam.validate(10, 1e-9);
        let moments = rep.checks.iter().find(|c| c.name == "moments").unwrap();
        assert!(!moments.passed);
        assert_eq!(moments.worst_index, Some(3));
        assert!(rep.moments.iter().filter(|r| !r.passed).map(|r| r.n).eq([3]));
    }

    #[test]
    fn series_self_consistency() {
        for fam in [WeightFamily::exponential(), WeightFamily::sqrt_exponential()] {
            for &u in &[0.0, 0.5, 3.0, 12.0] {
                let m = fam.normalization_m(u, 64).unwrap();
                let (sum, _) = fam.series(u, 64).unwrap();
                assert!((m * m * sum - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn tabulated_exponential_reproduces_factorials() {
        let fam = WeightFamily::from_custom(&exponential_table(12)).unwrap();
        for n in 0..=12 {
            let got = fam.moment(n).unwrap();
            let want = WeightFamily::exponential().moment(n).unwrap();
            assert!(((got - want) / want).abs() < 1e-10, "n={n}: {got} vs {want}");
        }
        let rep = fam.validate(12, 1e-9);
        assert!(rep.all_passed(), "{:#?}", rep.failed().collect::<Vec<_>>());
        assert_eq!(fam.max_moment_index(), Some(12));
        assert!(fam.moment(13).is_err());
        assert!((fam.rho(1.0125) - (-1.0125f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn tabulated_rejects_bad_grids() {
        let mut spec = exponential_table(4);
        spec.grid_u[3] = spec.grid_u[2];
        assert!(matches!(WeightFamily::from_custom(&spec), Err(Error::Config(_))));
        let mut spec = exponential_table(4);
        spec.rho.pop();
        assert!(WeightFamily::from_custom(&spec).is_err());
    }

    #[test]
    fn half_integer_radial_factor_converges() {
        let e = WeightFamily::exponential();
        let want = e.fractional_moment(1.5).unwrap();
        let got = e.radial_factor(1, 2, 64).unwrap();
        assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
        let s = WeightFamily::sqrt_exponential();
        let want = s.fractional_moment(1.5).unwrap();
        let got = s.radial_factor(1, 2, 64).unwrap();
        assert!(((got - want) / want).abs() < 1e-12);
    }
}
