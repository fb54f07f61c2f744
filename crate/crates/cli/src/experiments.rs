//! Simulation orchestration and the two built-in reference runs.

use std::fs;
use std::path::Path;

use padic_nagumo::solver::{
    euler_run, existence_time, gaussian_profile, monitor_g, picard_solve, ExistenceEstimate,
    Method, Trajectory,
};
use padic_nagumo::wavelets::{blowup_weight_build_kind, ode_blowup_time, pairing_g, WeightKind};
use padic_nagumo::RadialField;
use serde::Serialize;

use crate::config::{parse_config, InitialDatum, RunConfig};
use crate::error::{CliError, Result};
use crate::export::{export_csv, export_json, export_png, HeatMap};

/// Pure diffusion from a Gaussian bell.
pub const FIG1_LEFT: &str = "\
p = 3
alpha = 0.2
gamma = 1
beta = 0
pd_terms =
reaction = off
initial = gauss:4:100
j_min = -20
j_max = 20
dt = 0.001
t_end = 3
save_every = 10
method = euler-kochubei
out_dir = fig1-left
";

/// Diffusion, cubic reaction and `D^{0.1} u³` from the same bell.
pub const FIG1_RIGHT: &str = "\
p = 3
alpha = 0.2
gamma = 1
beta = 0.7
m = 3
pd_terms = 1:0.1
reaction = on
initial = gauss:4:100
j_min = -20
j_max = 20
dt = 0.001
t_end = 0.3
save_every = 1
method = euler-kochubei
out_dir = fig1-right
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    Left,
    Right,
}

pub fn figure1_config(panel: Panel) -> RunConfig {
    let text = match panel {
        Panel::Left => FIG1_LEFT,
        Panel::Right => FIG1_RIGHT,
    };
    parse_config(text).expect("built-in configuration is valid")
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketSummary {
    pub t_lo: f64,
    pub t_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OdeReport {
    pub weight: WeightKind,
    pub r: i64,
    pub g0: f64,
    /// `None` when the comparison solution stays bounded.
    pub blowup_time: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonitorSummary {
    pub frames: usize,
    pub violations: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub times: Vec<f64>,
    pub sup_norm: Vec<f64>,
    pub l2_norm: Vec<f64>,
    pub hs_norm: Vec<f64>,
    pub mass: Vec<f64>,
    #[serde(rename = "G_value")]
    pub g_value: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BracketSummary>,
    pub error_budget: f64,
    pub sup_norm_monotone: bool,
    pub comparison_ode: Vec<OdeReport>,
    pub g_monitor: Option<MonitorSummary>,
    pub existence: Option<ExistenceEstimate>,
    pub picard_residuals: Vec<f64>,
    pub params: RunConfig,
}

pub struct Outcome {
    pub trajectory: Trajectory,
    pub summary: Summary,
    pub heatmap: HeatMap,
}

pub fn initial_field(cfg: &RunConfig) -> Result<RadialField> {
    let (p, a, b) = (cfg.params.p, cfg.solver.j_min, cfg.solver.j_max);
    Ok(match cfg.initial {
        InitialDatum::Gauss { amplitude, width } => gaussian_profile(p, a, b, amplitude, width)?,
        InitialDatum::Ball { k } => {
            RadialField::from_profile(p, a, b, |j| if j <= k { 1.0 } else { 0.0 })?
        }
    })
}

pub fn run_simulation(cfg: &RunConfig) -> Result<Outcome> {
    let params = &cfg.params;
    let u0 = initial_field(cfg)?;
    // Weights need an odd prime; for p = 2 G is simply not recorded.
    let weight =
        blowup_weight_build_kind(params.p, cfg.weight_r, params.alpha, cfg.weight_kind).ok();

    let trajectory = match cfg.solver.method {
        Method::Picard => picard_solve(&u0, params, &cfg.solver)?,
        _ => euler_run(&u0, params, &cfg.solver, weight.as_ref())?,
    };

    let mut comparison_ode = Vec::new();
    if params.reaction && params.p.get() != 2 {
        let cmp = params.comparison(cfg.weight_r);
        for kind in [WeightKind::SignedSquare, WeightKind::Modulus] {
            let w = blowup_weight_build_kind(params.p, cfg.weight_r, params.alpha, kind)?;
            let g0 = pairing_g(&u0, &w)?;
            let t = ode_blowup_time(g0, &cmp, cfg.solver.blowup_threshold, cfg.solver.dt);
            comparison_ode.push(OdeReport {
                weight: kind,
                r: cfg.weight_r,
                g0,
                blowup_time: t.is_finite().then_some(t),
            });
        }
    }

    let g_monitor = match &weight {
        Some(w) if trajectory.g_value.is_some() => {
            let m = monitor_g(&trajectory, w, params)?;
            Some(MonitorSummary {
                frames: m.defect.len(),
                violations: m.violations,
                tolerance: m.tolerance,
            })
        }
        _ => None,
    };

    let f0_norm = trajectory.hs_norm.first().copied().unwrap_or(0.0);
    let existence = if f0_norm > 0.0 {
        existence_time(f0_norm, f0_norm, params).ok()
    } else {
        None
    };

    let summary = Summary {
        times: trajectory.times.clone(),
        sup_norm: trajectory.sup_norm.clone(),
        l2_norm: trajectory.l2_norm.clone(),
        hs_norm: trajectory.hs_norm.clone(),
        mass: trajectory.mass.clone(),
        g_value: trajectory.g_value.clone(),
        blowup: trajectory.blowup.map(|b| BracketSummary {
            t_lo: b.t_lo,
            t_hi: b.t_hi,
        }),
        error_budget: trajectory.error_budget,
        sup_norm_monotone: trajectory.sup_norm.windows(2).all(|w| w[1] <= w[0]),
        comparison_ode,
        g_monitor,
        existence,
        picard_residuals: trajectory.residuals.clone(),
        params: cfg.clone(),
    };
    let heatmap = HeatMap::from_trajectory(&trajectory, cfg.solver.j_min, cfg.solver.j_max);
    Ok(Outcome {
        trajectory,
        summary,
        heatmap,
    })
}

/// Writes `heatmap.csv`, `heatmap.png` and `summary.json` into `dir`.
pub fn write_outputs(outcome: &Outcome, cfg: &RunConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    export_csv(&outcome.heatmap, &dir.join("heatmap.csv"))?;
    if outcome.heatmap.cols() > 0 {
        export_png(
            &outcome.heatmap,
            &dir.join("heatmap.png"),
            cfg.solver.blowup_threshold,
            cfg.png_scale,
        )?;
    }
    export_json(&outcome.summary, &dir.join("summary.json"))
}
