//! The fixed registry of invariants run by `hcs verify`.

use std::f64::consts::{PI, TAU};

use hcs_core::angular::{angular_resolution_check, shell_norm_squared, EulerAngles};
use hcs_core::fock1d::{resolution_check_1d, stability_residual, FockLabel, PhaseAverage, Spectrum, SpectrumKind};
use hcs_core::hydrogen::{
    hydrogen_cs_truncated, hydrogen_resolution_check, hydrogen_stability_residual, HydrogenExpansion, HydrogenLabel,
};
use hcs_core::position::{position_norm_squared, radial_expectation, radial_gram, radial_moments};
use hcs_core::specfun::BasisIndex;
use hcs_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;

/// How `measured` is compared with `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Outcome {
    fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Outcome {
            name: name.into(),
            measured,
            bound,
            relation: Relation::AtMost,
            pass: measured <= bound,
            detail: None,
        }
    }

    fn at_least(name: &str, measured: f64, bound: f64) -> Self {
        Outcome {
            name: name.into(),
            measured,
            bound,
            relation: Relation::AtLeast,
            pass: measured >= bound,
            detail: None,
        }
    }

    fn errored(name: &str, err: &Error) -> Self {
        Outcome {
            name: name.into(),
            measured: f64::NAN,
            bound: f64::NAN,
            relation: Relation::AtMost,
            pass: false,
            detail: Some(err.to_string()),
        }
    }
}

type CheckFn = fn(&RunConfig, &mut ChaCha8Rng) -> Result<Vec<Outcome>>;

/// Name and body of every check, in report order.
pub const REGISTRY: &[(&str, CheckFn)] = &[
    ("family", family_checks),
    ("fock.resolution.periodic", fock_periodic),
    ("fock.resolution.window", fock_window),
    ("angular.resolution", angular_resolution),
    ("angular.shell_norm", angular_shell_norm),
    ("stability.fock", stability_fock),
    ("stability.hydrogen", stability_hydrogen),
    ("hydrogen.resolution", hydrogen_resolution),
    ("radial.orthonormality", radial_orthonormality),
    ("position.parseval", position_parseval),
    ("position.ground_moments", ground_moments),
    ("uncertainty", uncertainty),
];

/// Outcome of one registry entry; errors are kept so the caller can map
/// them to exit codes.
pub struct EntryResult {
    pub outcomes: Vec<Outcome>,
    pub error: Option<Error>,
}

/// Runs every check, in parallel, each with its own random stream derived
/// from the seed. Output order follows [`REGISTRY`].
pub fn run_all(cfg: &RunConfig) -> Vec<EntryResult> {
    REGISTRY
        .par_iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            match check(cfg, &mut rng) {
                Ok(outcomes) => EntryResult { outcomes, error: None },
                Err(e) => EntryResult { outcomes: vec![Outcome::errored(name, &e)], error: Some(e) },
            }
        })
        .collect()
}

fn random_euler(rng: &mut ChaCha8Rng) -> EulerAngles {
    EulerAngles::new(rng.random_range(0.0..=PI), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU))
        .expect("sampled in range")
}

fn random_label(rng: &mut ChaCha8Rng, s_max: f64) -> HydrogenLabel {
    let s = rng.random_range(0.0..s_max);
    let gamma = rng.random_range(-50.0..50.0);
    HydrogenLabel::new(s, gamma, random_euler(rng)).expect("sampled in range")
}

fn family_checks(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let report = cfg.family.validate(cfg.n_max, cfg.tol);
    Ok(report
        .checks
        .iter()
        .map(|c| Outcome {
            name: format!("family.{}", c.name),
            measured: c.max_deviation,
            bound: c.bound,
            relation: Relation::AtMost,
            pass: c.passed,
            detail: match (c.worst_index, c.detail.is_empty()) {
                (Some(i), true) if !c.passed => Some(format!("worst at n = {i}")),
                (Some(i), false) => Some(format!("worst at n = {i}: {}", c.detail)),
                (None, false) => Some(c.detail.clone()),
                _ => None,
            },
        })
        .collect())
}

fn fock_periodic(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let rep = resolution_check_1d(&cfg.family, SpectrumKind::Oscillator, PhaseAverage::Period, cfg.n_max, cfg.radial_nodes)?;
    Ok(vec![
        Outcome::at_most("fock.resolution.periodic.diagonal", rep.max_diag_deviation, 1e-10),
        Outcome::at_most("fock.resolution.periodic.off_diagonal", rep.max_off_diagonal, 0.0),
    ])
}

fn fock_window(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut certs = Vec::new();
    let mut violations = 0;
    let mut diag: f64 = 0.0;
    for k in 0..3 {
        let gamma = cfg.gamma_window * 10f64.powi(k);
        let rep = resolution_check_1d(
            &cfg.family,
            SpectrumKind::InverseSquare,
            PhaseAverage::Window { gamma },
            cfg.n_max,
            cfg.radial_nodes,
        )?;
        violations += rep.bound_violations;
        diag = diag.max(rep.max_diag_deviation);
        certs.push(rep.certificate);
    }
    let mut outcomes = vec![
        Outcome::at_most("fock.resolution.window.diagonal", diag, 1e-10),
        Outcome::at_most("fock.resolution.window.bound_violations", violations as f64, 0.0),
    ];
    // no shell pairs at n_max = 0, so nothing to scale
    if let [Some(a), Some(b), Some(c)] = certs[..] {
        let dev = ((a / b) / 10.0 - 1.0).abs().max(((b / c) / 10.0 - 1.0).abs());
        outcomes.push(Outcome::at_most("fock.resolution.window.certificate_scaling", dev, 0.01));
    }
    Ok(outcomes)
}

fn angular_resolution(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let [a, b, c] = cfg.angular_nodes;
    let mut dev: f64 = 0.0;
    let mut rank_gap = 0usize;
    for n in 0..=cfg.n_max {
        let rep = angular_resolution_check(n, a, b, c)?;
        dev = dev.max(rep.max_deviation);
        rank_gap = rank_gap.max(rep.dimension.abs_diff(rep.rank));
    }
    Ok(vec![
        Outcome::at_most("angular.resolution.identity", dev, 1e-12),
        Outcome::at_most("angular.resolution.rank_gap", rank_gap as f64, 0.0),
    ])
}

fn angular_shell_norm(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut dev: f64 = 0.0;
    for _ in 0..cfg.samples {
        let om = random_euler(rng);
        for n in 0..=cfg.n_max {
            let want = ((n + 1) * (n + 1)) as f64;
            dev = dev.max((shell_norm_squared(n, &om) - want).abs() / want);
        }
    }
    Ok(vec![Outcome::at_most("angular.shell_norm", dev, 1e-12)])
}

fn stability_fock(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let osc = Spectrum::new(SpectrumKind::Oscillator, cfg.omega)?;
    let inv = Spectrum::new(SpectrumKind::InverseSquare, cfg.omega)?;
    let mut worst: f64 = 0.0;
    for i in 0..cfg.samples {
        let t = rng.random_range(-1e3..1e3);
        let (a, b) = (rng.random_range(0.0..1.5), rng.random_range(-50.0..50.0));
        let (label, spec) = match i % 3 {
            0 => (FockLabel::Oscillator { re: a, im: b / 50.0 }, &osc),
            1 => (FockLabel::Generalized { r: a, theta: b }, &osc),
            _ => (FockLabel::Degenerate { s: a, gamma: b }, &inv),
        };
        worst = worst.max(stability_residual(label, &cfg.family, spec, t, cfg.n_max)?);
    }
    let s = cfg.label.s;
    let configured = stability_residual(
        FockLabel::Degenerate { s, gamma: cfg.label.gamma },
        &cfg.family,
        &inv,
        1.0,
        cfg.n_max,
    )?;
    Ok(vec![Outcome::at_most("stability.fock", worst.max(configured), 5e-15)])
}

fn stability_hydrogen(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut worst = hydrogen_stability_residual(&cfg.label, &cfg.family, cfg.omega, 1.0, cfg.n_max)?;
    for _ in 0..cfg.samples {
        let label = random_label(rng, 2.0);
        let t = rng.random_range(-1e3..1e3);
        worst = worst.max(hydrogen_stability_residual(&label, &cfg.family, cfg.omega, t, cfg.n_max)?);
    }
    Ok(vec![Outcome::at_most("stability.hydrogen", worst, 5e-15)])
}

fn hydrogen_resolution(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let rep = hydrogen_resolution_check(&cfg.family, cfg.n_max, cfg.radial_nodes, cfg.gamma_window, cfg.angular_nodes)?;
    Ok(vec![
        Outcome::at_most("hydrogen.resolution.diagonal", rep.max_diag_deviation, 1e-10),
        Outcome::at_most("hydrogen.resolution.bound_violations", rep.bound_violations as f64, 0.0),
    ])
}

fn radial_orthonormality(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let mut dev: f64 = 0.0;
    for l in 0..=cfg.n_max {
        for (i, row) in radial_gram(l, cfg.n_max)?.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                dev = dev.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok(vec![Outcome::at_most("radial.orthonormality", dev, 1e-10)])
}

fn parseval_deviation(x: &HydrogenExpansion) -> Result<f64> {
    let coeff = x.norm_squared();
    Ok((position_norm_squared(x)? - coeff).abs() / coeff)
}

fn position_parseval(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let own = hydrogen_cs_truncated(&cfg.label, &cfg.family, cfg.n_max)?;
    let other = hydrogen_cs_truncated(&random_label(rng, 1.5), &cfg.family, cfg.n_max)?;
    let dev = parseval_deviation(&own)?.max(parseval_deviation(&other)?);
    Ok(vec![Outcome::at_most("position.parseval", dev, 1e-8)])
}

fn ground_moments(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let g = HydrogenExpansion::eigenstate(BasisIndex::new(0, 0, 0)?, cfg.n_max)?;
    let dev = (radial_expectation(&g, 1)? - 1.5).abs().max((radial_expectation(&g, 2)? - 3.0).abs());
    Ok(vec![Outcome::at_most("position.ground_moments", dev, 1e-10)])
}

fn uncertainty(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Outcome>> {
    let g = HydrogenExpansion::eigenstate(BasisIndex::new(0, 0, 0)?, cfg.n_max)?;
    let ground = (radial_moments(&g)?.product() - 0.75).abs();
    let mut floor = radial_moments(&hydrogen_cs_truncated(&cfg.label, &cfg.family, cfg.n_max)?)?.product();
    for _ in 0..cfg.samples {
        let x = hydrogen_cs_truncated(&random_label(rng, 1.5), &cfg.family, cfg.n_max)?;
        floor = floor.min(radial_moments(&x)?.product());
    }
    Ok(vec![
        Outcome::at_most("uncertainty.ground", ground, 1e-9),
        Outcome::at_least("uncertainty.floor", floor, 0.25),
    ])
}
