//! Run configuration: one optional JSON file plus command-line overrides.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use hcs_core::angular::{exactness_threshold, EulerAngles};
use hcs_core::hydrogen::HydrogenLabel;
use hcs_core::position::GridSpec;
use hcs_core::specfun::MAX_LAGUERRE_NODES;
use hcs_core::weights::{builtin_family, WeightFamily};
use serde::Deserialize;

use crate::CliError;

/// Flags shared by every subcommand. Any flag given here wins over the file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// JSON configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Highest shell index kept in every expansion
    #[arg(long)]
    pub n_max: Option<usize>,
    /// exponential, sqrt-exponential, or a path to a custom family JSON file
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_bar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_bar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub psi_bar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Half-width Γ of the γ averaging window
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_window: Option<f64>,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for the randomized sweeps
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<String>,
    pub n_max: Option<usize>,
    pub s: Option<f64>,
    pub gamma: Option<f64>,
    pub theta_bar: Option<f64>,
    pub phi_bar: Option<f64>,
    pub psi_bar: Option<f64>,
    pub omega: Option<f64>,
    pub gamma_window: Option<f64>,
    pub radial_nodes: Option<usize>,
    /// `[θ̄, φ̄, ψ̄]` node counts for the angular Gram check.
    pub angular_nodes: Option<[usize; 3]>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Random configurations per sweep.
    pub samples: Option<usize>,
    /// Relative tolerance of the moment checks.
    pub tol: Option<f64>,
    /// Replaces the family's moments `ρ_0, ρ_1, …` with a declared table.
    pub moment_table: Option<Vec<f64>>,
    pub grid: Option<GridFile>,
    pub times: Option<Vec<f64>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

pub const DEFAULT_N_MAX: usize = 8;
pub const DEFAULT_RADIAL_NODES: usize = 64;
pub const DEFAULT_GAMMA_WINDOW: f64 = 1e5;
pub const DEFAULT_SAMPLES: usize = 20;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Everything a command needs, validated.
#[derive(Debug)]
pub struct RunConfig {
    pub family: WeightFamily,
    pub n_max: usize,
    pub label: HydrogenLabel,
    pub omega: f64,
    pub gamma_window: f64,
    pub radial_nodes: usize,
    pub angular_nodes: [usize; 3],
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub grid: GridSpec,
    /// Sample times; `None` lets each command pick its own default.
    pub times: Option<Vec<f64>>,
}

fn read_file(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_family(spec: &str) -> Result<WeightFamily, String> {
    match builtin_family(spec) {
        Ok(f) => Ok(f),
        Err(_) if spec.ends_with(".json") || Path::new(spec).is_file() => {
            WeightFamily::load_custom(Path::new(spec)).map_err(|e| e.to_string())
        }
        Err(e) => Err(e.to_string()),
    }
}

impl RunConfig {
    /// Merges file and flags, then checks every field; all problems are
    /// reported together.
    pub fn resolve(flags: &Overrides) -> Result<RunConfig, CliError> {
        let mut problems = Vec::new();
        let file = match &flags.config {
            Some(p) => read_file(p).unwrap_or_else(|e| {
                problems.push(e);
                ConfigFile::default()
            }),
            None => ConfigFile::default(),
        };

        let family_spec = flags.family.clone().or(file.family).unwrap_or_else(|| "exponential".into());
        let family = match load_family(&family_spec) {
            Ok(f) => match file.moment_table {
                Some(t) => f.with_moment_table(t).map_err(|e| problems.push(e.to_string())).ok(),
                None => Some(f),
            },
            Err(e) => {
                problems.push(e);
                None
            }
        };

        let explicit_n_max = flags.n_max.or(file.n_max);
        let n_max = explicit_n_max
            .or_else(|| family.as_ref().and_then(|f| f.max_moment_index()))
            .unwrap_or(DEFAULT_N_MAX);
        if n_max > 60 {
            problems.push(format!("n_max = {n_max} is above the supported 60"));
        }
        if let Some(limit) = family.as_ref().and_then(|f| f.max_moment_index()) {
            if n_max > limit {
                problems.push(format!("n_max = {n_max} exceeds the family's {limit} available moments"));
            }
        }

        let s = flags.s.or(file.s).unwrap_or(0.0);
        let gamma = flags.gamma.or(file.gamma).unwrap_or(0.0);
        let theta_bar = flags.theta_bar.or(file.theta_bar).unwrap_or(0.0);
        let phi_bar = flags.phi_bar.or(file.phi_bar).unwrap_or(0.0);
        let psi_bar = flags.psi_bar.or(file.psi_bar).unwrap_or(0.0);
        if !(s >= 0.0 && s.is_finite()) {
            problems.push(format!("s must be finite and ≥ 0, got {s}"));
        }
        if !(0.0..=PI).contains(&theta_bar) {
            problems.push(format!("θ̄ must lie in [0, π], got {theta_bar}"));
        }
        let label = EulerAngles::new(theta_bar.clamp(0.0, PI), phi_bar, psi_bar)
            .and_then(|om| HydrogenLabel::new(s.max(0.0), gamma, om));
        let label = match label {
            Ok(l) => Some(l),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        };

        let omega = flags.omega.or(file.omega).unwrap_or(1.0);
        if !(omega > 0.0 && omega.is_finite()) {
            problems.push(format!("ω must be positive, got {omega}"));
        }
        let gamma_window = flags.gamma_window.or(file.gamma_window).unwrap_or(DEFAULT_GAMMA_WINDOW);
        if !(gamma_window > 0.0 && gamma_window.is_finite()) {
            problems.push(format!("Γ window must be positive, got {gamma_window}"));
        }
        let radial_nodes = file.radial_nodes.unwrap_or(DEFAULT_RADIAL_NODES);
        if !(1..=MAX_LAGUERRE_NODES).contains(&radial_nodes) {
            problems.push(format!("radial_nodes must lie in 1..={MAX_LAGUERRE_NODES}, got {radial_nodes}"));
        }
        let need = exactness_threshold(n_max);
        let angular_nodes = file.angular_nodes.unwrap_or([need; 3]);
        for (name, k) in ["θ̄", "φ̄", "ψ̄"].iter().zip(angular_nodes) {
            if k < need {
                problems.push(format!("{name} nodes = {k} are below the exactness threshold {need} for n_max = {n_max}"));
            }
        }
        let samples = file.samples.unwrap_or(DEFAULT_SAMPLES);
        if !(1..=10_000).contains(&samples) {
            problems.push(format!("samples must lie in 1..=10000, got {samples}"));
        }
        let tol = file.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            problems.push(format!("tol must lie in (0, 1), got {tol}"));
        }
        let grid = match file.grid {
            Some(g) => GridSpec::new(g.r, g.theta, g.phi),
            None => GridSpec::new(vec![0.5, 1.0, 2.0, 4.0, 8.0], vec![0.0, PI / 2.0], vec![0.0]),
        };
        let grid = grid.map_err(|e| problems.push(format!("grid: {e}"))).ok();
        let times = file.times;
        if times.as_ref().is_some_and(|t| t.is_empty() || t.iter().any(|t| !t.is_finite())) {
            problems.push("times must be a nonempty list of finite values".into());
        }

        if !problems.is_empty() {
            return Err(CliError::config(problems.join("\n")));
        }
        Ok(RunConfig {
            family: family.expect("checked"),
            n_max,
            label: label.expect("checked"),
            omega,
            gamma_window,
            radial_nodes,
            angular_nodes,
            out: flags.out.clone().or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            samples,
            tol,
            grid: grid.expect("checked"),
            times,
        })
    }
}
