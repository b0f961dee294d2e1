use rayon::prelude::*;
use serde_json::Value;

use fastlight_core::medium;
use fastlight_core::noise;
use fastlight_core::pipeline::config::{load_scenario, load_sweep, parse_override};
use fastlight_core::pipeline::scenario::PreparedScenario;
use fastlight_core::pipeline::table::{to_csv_string, FlaggedRow, ResultTable};
use fastlight_core::sensitivity::{self, Branch};
use fastlight_core::{run_scenario, run_sweep, Error, Result, ScenarioConfig, VERSION};

use crate::output::write_output;
use crate::{Command, Common};

pub fn run(cmd: &Command) -> Result<()> {
    let common = match cmd {
        Command::Dispersion { common, .. }
        | Command::TuneCad { common, .. }
        | Command::Scenario { common }
        | Command::Fig3 { common, .. }
        | Command::Noise { common, .. }
        | Command::Sweep { common } => common,
    };
    let pool = thread_pool(common.jobs)?;
    let text = pool.install(|| produce(cmd, common))?;
    write_output(&common.out, text.as_bytes())
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(config_error("--jobs", "must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| config_error("--jobs", e.to_string()))
}

fn config_error(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn overrides(common: &Common) -> Result<Vec<(String, Value)>> {
    let mut out = common
        .overrides
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bw) = common.band_hz {
        let v =
            serde_json::Number::from_f64(bw).ok_or_else(|| config_error("--band-hz", "must be finite"))?;
        out.push(("bandwidth_hz".into(), Value::Number(v)));
    }
    if common.flat_index {
        out.push(("flat_index".into(), Value::Bool(true)));
    }
    Ok(out)
}

fn scenario(common: &Common) -> Result<ScenarioConfig> {
    load_scenario(common.config.as_deref(), &overrides(common)?)
}

fn provenance(generator: &str, hash: String, axis: &str) -> Vec<(String, String)> {
    vec![
        ("tool".into(), format!("fastlight {VERSION}")),
        ("generator".into(), generator.into()),
        ("config_hash".into(), hash),
        ("axis".into(), axis.into()),
    ]
}

fn produce(cmd: &Command, common: &Common) -> Result<String> {
    match cmd {
        Command::Dispersion { points, span, .. } => dispersion(common, *points, *span),
        Command::TuneCad { target, knob, .. } => tune_cad(common, *target, *knob),
        Command::Scenario { .. } => Ok(run_scenario(&scenario(common)?)?.to_text()),
        Command::Fig3 {
            range, samples, q, ..
        } => fig3(common, *range, *samples, *q),
        Command::Noise { enhancement, .. } => noise_report(common, *enhancement),
        Command::Sweep { .. } => {
            let path = common
                .config
                .as_deref()
                .ok_or_else(|| config_error("--config", "sweep needs a sweep document"))?;
            let spec = load_sweep(path, &overrides(common)?)?;
            to_csv_string(&run_sweep(&spec)?)
        }
    }
}

fn dispersion(common: &Common, points: usize, span: f64) -> Result<String> {
    if points < 2 {
        return Err(config_error("--points", "need at least two points"));
    }
    if !(span > 0.0 && span.is_finite()) {
        return Err(config_error("--span", "must be positive"));
    }
    let cfg = scenario(common)?;
    let p = PreparedScenario::new(&cfg)?.medium;
    let (lo, hi) = (
        p.center() - span * p.pump_separation,
        p.center() + span * p.pump_separation,
    );
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|k| if k + 1 == points { hi } else { lo + step * k as f64 })
        .collect();
    let rows: Vec<Result<Vec<f64>>> = grid
        .par_iter()
        .map(|&w| {
            let s = medium::sample(w, &p)?;
            Ok(vec![
                s.omega,
                s.chi_re,
                s.chi_im,
                s.n,
                s.gain,
                s.dn_domega,
                s.d2n_domega2,
                s.n_g,
            ])
        })
        .collect();
    let columns = [
        "omega",
        "chi_re",
        "chi_im",
        "n",
        "gain",
        "dn_domega",
        "d2n_domega2",
        "n_g",
    ];
    let mut table = ResultTable::new(columns.iter().map(|c| c.to_string()).collect());
    table.provenance = provenance("dispersion", cfg.digest(), "omega");
    for (w, row) in grid.iter().zip(rows) {
        match row {
            Ok(r) => table.rows.push(r),
            Err(e) => table.flagged.push(FlaggedRow {
                axis_value: *w,
                label: e.to_string(),
            }),
        }
    }
    to_csv_string(&table)
}

fn tune_cad(common: &Common, target: Option<f64>, knob: Option<medium::TuningKnob>) -> Result<String> {
    let cfg = scenario(common)?;
    let target = target
        .or(cfg.cad_target_slope)
        .ok_or_else(|| config_error("cad_target_slope", "no target slope given"))?;
    let knob = knob.unwrap_or(cfg.cad_knob);
    let p = medium::tune_to_cad(&cfg.medium, target, knob).map_err(|e| e.in_stage("tune_to_cad"))?;
    let s = medium::sample(p.center(), &p).map_err(|e| e.in_stage("medium"))?;
    let columns = [
        "target_slope",
        "center_slope",
        "group_index",
        "pump_separation",
        "omega1_rabi",
        "omega2_rabi",
        "omega_res1",
        "gamma",
        "coupling_A",
    ];
    let mut table = ResultTable::new(columns.iter().map(|c| c.to_string()).collect());
    table.provenance = provenance("tune-cad", cfg.digest(), "target_slope");
    table.rows.push(vec![
        target,
        s.dn_domega,
        s.n_g,
        p.pump_separation,
        p.omega1_rabi,
        p.omega2_rabi,
        p.omega_res1,
        p.gamma,
        p.coupling_a,
    ]);
    to_csv_string(&table)
}

fn fig3(common: &Common, range: (f64, f64), samples: usize, q: Option<f64>) -> Result<String> {
    let cfg = scenario(common)?;
    let q = match q {
        Some(q) => q,
        None => run_scenario(&cfg)?.q,
    };
    let curve = sensitivity::figure3_curve(q, range, samples)?;
    let mut table = ResultTable::new(vec!["n_g_over_n0".into(), "eta".into(), "branch".into()]);
    table.provenance = provenance("fig3", cfg.digest(), "n_g_over_n0");
    table.provenance.push(("Q".into(), format!("{q:.16e}")));
    if let Ok(bound) = sensitivity::eta_max(q) {
        table.provenance.push(("eta_max".into(), format!("{bound:.16e}")));
    }
    table
        .provenance
        .push(("branch".into(), "1 = upper, -1 = lower".into()));
    for pt in curve {
        let code = match pt.branch {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        };
        match pt.eta {
            Ok(eta) => table.rows.push(vec![pt.ratio, eta, code]),
            Err(e) => table.flagged.push(FlaggedRow {
                axis_value: pt.ratio,
                label: e.to_string(),
            }),
        }
    }
    to_csv_string(&table)
}

fn noise_report(common: &Common, enhancement: Option<f64>) -> Result<String> {
    let cfg = scenario(common)?;
    let d = &cfg.detection;
    let delta_f = noise::beat_uncertainty(d).map_err(|e| e.in_stage("noise"))?;
    let s = noise::sensing_uncertainty(delta_f, cfg.cavity.n0, cfg.perturbation.sigma, enhancement)
        .map_err(|e| e.in_stage("noise"))?;
    let mut out = String::new();
    out.push_str(&format!("delta_f: {delta_f:.16e}\n"));
    out.push_str(&format!(
        "delta_f_sqrt_tau: {:.16e}\n",
        delta_f * d.integration_time_s.sqrt()
    ));
    out.push_str(&format!("delta_S_literal: {:.16e}\n", s.literal));
    match s.enhanced {
        Some(x) => out.push_str(&format!("delta_S_enhanced: {x:.16e}\n")),
        None => out.push_str("delta_S_enhanced: unavailable\n"),
    }
    Ok(out)
}
