//! Gauss-Legendre, Gauss-Laguerre and periodic trapezoid rules.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest Gauss-Laguerre rule we build; beyond it `L_{m+1}` at the last
/// node starts to approach the f64 range.
pub const MAX_LAGUERRE_NODES: usize = 160;
pub const MAX_LEGENDRE_NODES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum QuadratureKind {
    /// Weight 1 on `[a, b]`.
    GaussLegendre { a: f64, b: f64 },
    /// Weight `e^{-u}` on `[0, ∞)`.
    GaussLaguerre,
    /// Weight `u^α e^{-u}` on `[0, ∞)`, `α > -1`.
    GeneralizedLaguerre { alpha: f64 },
    /// Uniform nodes over one period `[start, start + period)`.
    Trapezoid { start: f64, period: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ), summed in node order.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

pub fn make_quadrature(kind: QuadratureKind, m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::config("a quadrature rule needs at least one node"));
    }
    let (nodes, weights) = match kind {
        QuadratureKind::GaussLegendre { a, b } => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::config(format!("invalid Gauss-Legendre interval [{a}, {b}]")));
            }
            if m > MAX_LEGENDRE_NODES {
                return Err(Error::config(format!(
                    "Gauss-Legendre supports at most {MAX_LEGENDRE_NODES} nodes, got {m}"
                )));
            }
            let (x, w) = legendre_unit(m);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            (
                x.iter().map(|&t| mid + half * t).collect(),
                w.iter().map(|&v| half * v).collect(),
            )
        }
        QuadratureKind::GaussLaguerre => {
            if m > MAX_LAGUERRE_NODES {
                return Err(Error::config(format!(
                    "Gauss-Laguerre supports at most {MAX_LAGUERRE_NODES} nodes, got {m}"
                )));
            }
            let (x, lw) = laguerre_log_weights(m)?;
            (x, lw.into_iter().map(f64::exp).collect())
        }
        QuadratureKind::GeneralizedLaguerre { alpha } => {
            if !(alpha > -1.0 && alpha.is_finite()) {
                return Err(Error::config(format!("generalized Laguerre needs α > -1, got {alpha}")));
            }
            if m > MAX_LAGUERRE_NODES {
                return Err(Error::config(format!(
                    "Gauss-Laguerre supports at most {MAX_LAGUERRE_NODES} nodes, got {m}"
                )));
            }
            let (x, lw) = generalized_laguerre_log_weights(m, alpha)?;
            (x, lw.into_iter().map(f64::exp).collect())
        }
        QuadratureKind::Trapezoid { start, period } => {
            if !(start.is_finite() && period.is_finite() && period > 0.0) {
                return Err(Error::config(format!("invalid trapezoid period {period}")));
            }
            let h = period / m as f64;
            ((0..m).map(|j| start + h * j as f64).collect(), vec![h; m])
        }
    };
    Ok(QuadratureRule { kind, nodes, weights })
}

/// Nodes and weights on [-1, 1], ascending.
fn legendre_unit(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Minimal double-double arithmetic for the Laguerre recurrence, whose
/// alternating terms lose ~log10(m) digits near the smallest roots in f64.
mod dd {
    pub type Dd = (f64, f64);

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        (s, lo - (s - hi))
    }

    pub fn add(a: Dd, b: Dd) -> Dd {
        let (s, e) = two_sum(a.0, b.0);
        renorm(s, e + a.1 + b.1)
    }

    pub fn mul(a: Dd, b: Dd) -> Dd {
        let p = a.0 * b.0;
        let e = a.0.mul_add(b.0, -p);
        renorm(p, e + a.0 * b.1 + a.1 * b.0)
    }

    pub fn mul_f(a: Dd, b: f64) -> Dd {
        mul(a, (b, 0.0))
    }

    pub fn div_f(a: Dd, b: f64) -> Dd {
        let q = a.0 / b;
        let p = q * b;
        let e = q.mul_add(b, -p);
        renorm(q, ((a.0 - p) - e + a.1) / b)
    }
}

/// `(L^α_k(x), L^α_{k-1}(x))` by the three-term recurrence in double-double.
fn laguerre_pair(k: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev: dd::Dd = (0.0, 0.0);
    let mut cur: dd::Dd = (1.0, 0.0);
    for j in 0..k {
        let jf = j as f64;
        let coef = dd::add((2.0 * jf + 1.0, 0.0), dd::add((alpha, 0.0), (-x, 0.0)));
        let a = dd::mul(coef, cur);
        let b = dd::mul_f(prev, -(jf + alpha));
        let next = dd::div_f(dd::add(a, b), jf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur.0 + cur.1, prev.0 + prev.1)
}

pub(crate) fn laguerre_log_weights(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    generalized_laguerre_log_weights(m, 0.0)
}

/// Gauss-Laguerre nodes and natural-log weights for the weight `u^α e^{-u}`.
///
/// Rules are memoized per `(m, α)`; building one costs an eigensolve plus a
/// double-double Newton polish.
pub(crate) fn generalized_laguerre_log_weights(m: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    type Cache = Mutex<HashMap<(usize, u64), Arc<(Vec<f64>, Vec<f64>)>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (m, alpha.to_bits());
    if let Some(hit) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok((hit.0.clone(), hit.1.clone()));
    }
    let built = build_laguerre(m, alpha)?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, Arc::new(built.clone()));
    Ok(built)
}

/// Golub-Welsch eigenvalues seed a Newton polish on `L^α_m`; weights come
/// from `w = Γ(m+α+1) x / (m! ((m+1) L^α_{m+1}(x))²)`, evaluated in log space.
fn build_laguerre(m: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let jacobi = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0 + alpha
        } else if i + 1 == j || j + 1 == i {
            let k = i.max(j) as f64;
            (k * (k + alpha)).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mf = m as f64;
    let log_norm = super::ln_gamma(mf + alpha + 1.0)? - super::ln_factorial(m);
    let mut log_weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (lm, lm1) = laguerre_pair(m, alpha, *x);
            let deriv = (mf * lm - (mf + alpha) * lm1) / *x;
            let dx = lm / deriv;
            *x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        let (lnext, _) = laguerre_pair(m + 1, alpha, *x);
        if !(x.is_finite() && *x > 0.0 && lnext.is_finite() && lnext != 0.0) {
            return Err(Error::Numerical(format!("Gauss-Laguerre node construction failed for m = {m}")));
        }
        log_weights.push(log_norm + x.ln() - 2.0 * ((mf + 1.0).ln() + lnext.abs().ln()));
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Numerical(format!("Gauss-Laguerre nodes not distinct for m = {m}")));
    }
    Ok((nodes, log_weights))
}

/// Gauss-Laguerre rule for plain integrals `∫₀^∞ g(r) dr`.
///
/// With `t = α r` the exponential weight is folded back into the weights,
/// so `∫ g ≈ Σ Wᵢ g(rᵢ)` with `rᵢ = tᵢ/α` and `Wᵢ = wᵢ e^{tᵢ}/α`. Exact when
/// `g(r) e^{α r}` is a polynomial of degree `< 2m` in `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLineRule {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HalfLineRule {
    pub fn new(m: usize, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::config(format!("half-line scale must be positive, got {alpha}")));
        }
        if m == 0 || m > MAX_LAGUERRE_NODES {
            return Err(Error::config(format!(
                "half-line rule needs 1..={MAX_LAGUERRE_NODES} nodes, got {m}"
            )));
        }
        let (t, lw) = laguerre_log_weights(m)?;
        let nodes = t.iter().map(|&ti| ti / alpha).collect();
        let weights = t.iter().zip(&lw).map(|(&ti, &l)| (l + ti).exp() / alpha).collect();
        Ok(HalfLineRule { alpha, nodes, weights })
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * g(r))
            .sum()
    }
}
