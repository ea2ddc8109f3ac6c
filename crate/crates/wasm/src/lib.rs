//! Browser bindings: a density slice, the return-probability trace and the
//! shell distribution of a hydrogen coherent state.
//!
//! The `*_impl` functions hold the logic and run natively; the exported
//! wrappers only turn errors into JS exceptions.

use std::f64::consts::PI;

use hcs_core::angular::EulerAngles;
use hcs_core::hydrogen::{evolve_hydrogen, hydrogen_cs_truncated, HydrogenExpansion, HydrogenLabel};
use hcs_core::position::eval_hydrogen_cs_position;
use hcs_core::weights::builtin_family;
use wasm_bindgen::prelude::*;

/// Largest truncation the page may ask for; the slice cost grows like n⁴.
pub const MAX_N: usize = 16;
pub const MAX_RESOLUTION: usize = 400;

#[allow(clippy::too_many_arguments)]
fn state(family: &str, n_max: usize, s: f64, gamma: f64, theta_bar: f64, phi_bar: f64, psi_bar: f64) -> Result<HydrogenExpansion, String> {
    if n_max > MAX_N {
        return Err(format!("n_max is capped at {MAX_N} here"));
    }
    let family = builtin_family(family).map_err(|e| e.to_string())?;
    let omega = EulerAngles::new(theta_bar, phi_bar, psi_bar).map_err(|e| e.to_string())?;
    let label = HydrogenLabel::new(s, gamma, omega).map_err(|e| e.to_string())?;
    hydrogen_cs_truncated(&label, &family, n_max).map_err(|e| e.to_string())
}

/// Normalized `|ψ(t)|²` on the `y = 0` plane, `res × res` points over
/// `[−extent, extent]²`, row-major with `z` descending (row 0 is the top).
#[allow(clippy::too_many_arguments)]
pub fn density_slice_impl(
    family: &str,
    n_max: usize,
    s: f64,
    gamma: f64,
    theta_bar: f64,
    phi_bar: f64,
    psi_bar: f64,
    t: f64,
    extent: f64,
    res: usize,
) -> Result<Vec<f64>, String> {
    if !(extent > 0.0 && extent.is_finite()) || !(2..=MAX_RESOLUTION).contains(&res) {
        return Err(format!("need extent > 0 and 2 ≤ res ≤ {MAX_RESOLUTION}"));
    }
    let x0 = state(family, n_max, s, gamma, theta_bar, phi_bar, psi_bar)?;
    let norm = x0.norm_squared();
    let x = evolve_hydrogen(&x0, 1.0, t);
    let step = 2.0 * extent / (res - 1) as f64;
    let mut out = Vec::with_capacity(res * res);
    for i in 0..res {
        let z = extent - i as f64 * step;
        for j in 0..res {
            let xc = -extent + j as f64 * step;
            let r = xc.hypot(z);
            let theta = xc.abs().atan2(z);
            let phi = if xc < 0.0 { PI } else { 0.0 };
            let psi = eval_hydrogen_cs_position(&x, r, theta, phi).map_err(|e| e.to_string())?;
            out.push(psi.norm_sqr() / norm);
        }
    }
    Ok(out)
}

/// `|⟨ψ(0)|ψ(t)⟩|² / ‖ψ‖⁴` at `steps` evenly spaced times in `[0, t_max]`, with `ω = 1`.
#[allow(clippy::too_many_arguments)]
pub fn autocorrelation_impl(
    family: &str,
    n_max: usize,
    s: f64,
    gamma: f64,
    theta_bar: f64,
    phi_bar: f64,
    psi_bar: f64,
    t_max: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    if !(t_max > 0.0 && t_max.is_finite()) || !(2..=100_000).contains(&steps) {
        return Err("need t_max > 0 and 2 ≤ steps ≤ 100000".into());
    }
    let x = state(family, n_max, s, gamma, theta_bar, phi_bar, psi_bar)?;
    let norm = x.norm_squared();
    // only shell weights matter: each shell picks up one phase
    let weights = x.shell_weights();
    Ok((0..steps)
        .map(|k| {
            let t = t_max * k as f64 / (steps - 1) as f64;
            let (re, im) = weights.iter().enumerate().fold((0.0, 0.0), |(re, im), (n, w)| {
                let (sn, cs) = (t / ((n + 1) * (n + 1)) as f64).sin_cos();
                (re + w * cs, im + w * sn)
            });
            (re * re + im * im) / (norm * norm)
        })
        .collect())
}

/// Probability of each shell `0..=n_max` (principal number `n + 1`).
pub fn shell_weights_impl(family: &str, n_max: usize, s: f64) -> Result<Vec<f64>, String> {
    let x = state(family, n_max, s, 0.0, 0.0, 0.0, 0.0)?;
    let norm = x.norm_squared();
    if norm == 0.0 {
        return Err("state has zero norm".into());
    }
    Ok(x.shell_weights().into_iter().map(|w| w / norm).collect())
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn density_slice(
    family: &str,
    n_max: usize,
    s: f64,
    gamma: f64,
    theta_bar: f64,
    phi_bar: f64,
    psi_bar: f64,
    t: f64,
    extent: f64,
    res: usize,
) -> Result<Vec<f64>, JsError> {
    density_slice_impl(family, n_max, s, gamma, theta_bar, phi_bar, psi_bar, t, extent, res).map_err(|e| JsError::new(&e))
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn autocorrelation(
    family: &str,
    n_max: usize,
    s: f64,
    gamma: f64,
    theta_bar: f64,
    phi_bar: f64,
    psi_bar: f64,
    t_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    autocorrelation_impl(family, n_max, s, gamma, theta_bar, phi_bar, psi_bar, t_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn shell_weights(family: &str, n_max: usize, s: f64) -> Result<Vec<f64>, JsError> {
    shell_weights_impl(family, n_max, s).map_err(|e| JsError::new(&e))
}
