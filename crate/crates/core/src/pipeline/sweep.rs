//! One-dimensional parameter sweeps.
//!
//! Rows may be evaluated in parallel; results are assembled in axis order,
//! so the table (and its CSV bytes) depend only on the [`SweepSpec`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::medium::{self, RamanMediumParams};
use crate::pipeline::config::{with_field, SweepSpec};
use crate::pipeline::scenario::PreparedScenario;
use crate::pipeline::table::{FlaggedRow, ResultTable};

/// Where an output column comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Medium sample at the probe frequency.
    Sample,
    /// Full scenario report.
    Report,
}

/// Every output field a sweep can request.
pub const OUTPUT_FIELDS: &[(&str, Source)] = &[
    ("omega", Source::Sample),
    ("chi_re", Source::Sample),
    ("chi_im", Source::Sample),
    ("n", Source::Sample),
    ("gain", Source::Sample),
    ("dn_domega", Source::Sample),
    ("d2n_domega2", Source::Sample),
    ("n_g", Source::Sample),
    ("xi", Source::Report),
    ("n_tilde", Source::Report),
    ("Q", Source::Report),
    ("f_frac", Source::Report),
    ("n_dd", Source::Report),
    ("eta", Source::Report),
    ("eta_max", Source::Report),
    ("beat0", Source::Report),
    ("beat_first_order", Source::Report),
    ("beat_second_order", Source::Report),
    ("beat_oracle", Source::Report),
    ("omega_reference", Source::Report),
    ("omega_test", Source::Report),
    ("chamber_n_g", Source::Report),
    ("delta_f", Source::Report),
    ("delta_S_literal", Source::Report),
    ("delta_S_enhanced", Source::Report),
    ("tuned_separation", Source::Report),
    ("tuned_rabi", Source::Report),
];

fn source_of(name: &str) -> Source {
    OUTPUT_FIELDS
        .iter()
        .find(|(f, _)| *f == name)
        .map(|(_, s)| *s)
        .expect("validated output name")
}

/// True when the swept field can change the tuned medium.
fn axis_affects_tuning(axis: &str) -> bool {
    axis.starts_with("medium.") || axis == "cad_target_slope"
}

fn evaluate_row(spec: &SweepSpec, value: f64, shared: Option<&RamanMediumParams>) -> Result<Vec<f64>> {
    let cfg = with_field(&spec.base, &spec.axis, value)?;
    let prepared = match shared {
        Some(m) => PreparedScenario::with_tuned_medium(&cfg, *m)?,
        None => PreparedScenario::new(&cfg)?,
    };
    let needs_sample = spec.outputs.iter().any(|o| source_of(o) == Source::Sample);
    let needs_report = spec.outputs.iter().any(|o| source_of(o) == Source::Report);
    let sample = if needs_sample {
        let probe = cfg.probe_omega.unwrap_or_else(|| prepared.medium.center());
        Some(medium::sample(probe, &prepared.medium).map_err(|e| e.in_stage("medium"))?)
    } else {
        None
    };
    let report = if needs_report {
        Some(prepared.report()?)
    } else {
        None
    };

    let mut row = Vec::with_capacity(spec.outputs.len() + 1);
    row.push(value);
    for name in &spec.outputs {
        let v = match source_of(name) {
            Source::Sample => {
                let s = sample.as_ref().expect("sample computed");
                match name.as_str() {
                    "omega" => s.omega,
                    "chi_re" => s.chi_re,
                    "chi_im" => s.chi_im,
                    "n" => s.n,
                    "gain" => s.gain,
                    "dn_domega" => s.dn_domega,
                    "d2n_domega2" => s.d2n_domega2,
                    _ => s.n_g,
                }
            }
            Source::Report => report
                .as_ref()
                .expect("report computed")
                .field(name)
                .ok_or_else(|| Error::config(name.clone(), "unavailable for this scenario"))?,
        };
        if !v.is_finite() {
            return Err(Error::config(name.clone(), "non-finite value"));
        }
        row.push(v);
    }
    Ok(row)
}

/// Evaluates every axis value. Failing rows are recorded in
/// [`ResultTable::flagged`] instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let shared = if axis_affects_tuning(&spec.axis) {
        None
    } else {
        Some(PreparedScenario::new(&spec.base)?.medium)
    };
    let results: Vec<Result<Vec<f64>>> = spec
        .values
        .par_iter()
        .map(|&v| evaluate_row(spec, v, shared.as_ref()))
        .collect();

    let mut columns = vec![spec.axis.clone()];
    columns.extend(spec.outputs.iter().cloned());
    let mut table = ResultTable::new(columns);
    table.provenance = vec![
        ("tool".into(), format!("fastlight-core {}", crate::VERSION)),
        ("generator".into(), "sweep".into()),
        ("config_hash".into(), spec.digest()),
        ("axis".into(), spec.axis.clone()),
    ];
    for (value, res) in spec.values.iter().zip(results) {
        match res {
            Ok(row) => table.rows.push(row),
            Err(e) => table.flagged.push(FlaggedRow {
                axis_value: *value,
                label: e.to_string(),
            }),
        }
    }
    Ok(table)
}
