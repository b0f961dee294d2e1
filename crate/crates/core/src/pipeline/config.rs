//! Scenario and sweep configuration.
//!
//! Configs are TOML or JSON documents whose keys mirror the struct fields.
//! Resolution order is built-in default, then the file, then `key=value`
//! overrides addressed by dotted path. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::cavity::{CavityConfig, PerturbationModel};
use crate::constants::DEFAULT_BANDWIDTH_HZ;
use crate::error::{Error, Result};
use crate::medium::{RamanMediumParams, TuningKnob};
use crate::noise::DetectionParams;

/// Which quantity plays the fractional bandwidth `f` in `Q = f·n″·ω₀²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FracMode {
    /// `f = 2π·bandwidth_hz / ω₀`.
    #[default]
    Bandwidth,
    /// `f = |Δω₀| / ω₀`, the perturbation-induced fractional shift.
    Perturbation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub medium: RamanMediumParams,
    pub cavity: CavityConfig,
    pub perturbation: PerturbationModel,
    pub detection: DetectionParams,
    /// Evaluation band for the second-order dispersion, Hz.
    #[serde(default = "default_bandwidth")]
    pub bandwidth_hz: f64,
    /// When set, the medium is first tuned to this centre slope, rad⁻¹·s.
    #[serde(
        default,
        deserialize_with = "optional_number",
        skip_serializing_if = "Option::is_none"
    )]
    pub cad_target_slope: Option<f64>,
    #[serde(default)]
    pub cad_knob: TuningKnob,
    #[serde(default)]
    pub f_mode: FracMode,
    /// Debug switch: replace the medium by a dispersionless index n₀.
    #[serde(default)]
    pub flat_index: bool,
    /// Probe frequency for the medium-sample outputs of a sweep, rad/s.
    /// Defaults to the doublet midpoint.
    #[serde(
        default,
        deserialize_with = "optional_number",
        skip_serializing_if = "Option::is_none"
    )]
    pub probe_omega: Option<f64>,
}

fn default_bandwidth() -> f64 {
    DEFAULT_BANDWIDTH_HZ
}

/// Accepts a number, or the string `"none"` for an absent value.
fn optional_number<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Num(x)) => Ok(Some(x)),
        Some(Raw::Text(s)) if s.eq_ignore_ascii_case("none") => Ok(None),
        Some(Raw::Text(s)) => Err(serde::de::Error::custom(format!(
            "expected a number or \"none\", got {s:?}"
        ))),
    }
}

/// Carrier at which the three headline dispersion numbers are mutually
/// consistent: η_max = 2/√(2π·10⁶·n″·ω₀) with n″ = 4.1e-38 and η_max = 8e7.
pub const DEFAULT_CARRIER: f64 = 2.43e15;

impl Default for ScenarioConfig {
    /// Headline scenario: a symmetric doublet with Γ = 10¹² rad/s whose
    /// pump strength is chosen so that, once the separation is tuned to a
    /// centre slope of −3.1e-16 s, the 1 MHz band maximum of |∂²n/∂ω²|
    /// lands near 4.1e-38 s².
    fn default() -> Self {
        let separation = 4.8e12;
        ScenarioConfig {
            medium: RamanMediumParams {
                coupling_a: 1e-9,
                omega1_rabi: 1.730189e9,
                omega2_rabi: 1.730189e9,
                omega_res1: DEFAULT_CARRIER + 0.5 * separation,
                pump_separation: separation,
                gamma: 1e12,
            },
            cavity: CavityConfig::matched(DEFAULT_CARRIER, 1.0, 258_011, 1e5),
            perturbation: PerturbationModel {
                sigma: 1e-6,
                delta_s: 1e-4,
            },
            detection: DetectionParams {
                photon_rate: 1e15,
                quantum_eff: 0.8,
                cavity_linewidth_hz: 1e5,
                integration_time_s: 1.0,
            },
            bandwidth_hz: DEFAULT_BANDWIDTH_HZ,
            cad_target_slope: Some(-3.1e-16),
            cad_knob: TuningKnob::Separation,
            f_mode: FracMode::Bandwidth,
            flat_index: false,
            probe_omega: None,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.medium.validate()?;
        self.cavity.validate()?;
        self.perturbation.validate(self.cavity.n0)?;
        self.detection.validate()?;
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return Err(Error::invalid("bandwidth_hz", "must be positive and finite"));
        }
        if let Some(s) = self.cad_target_slope {
            if !(s < 0.0 && s.is_finite()) {
                return Err(Error::invalid("cad_target_slope", "must be negative and finite"));
            }
        }
        if let Some(w) = self.probe_omega {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid("probe_omega", "must be positive and finite"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        digest_of(self)
    }
}

pub(crate) fn digest_of<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).expect("config serialises");
    hex::encode(Sha256::digest(json.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    Float,
    Integer,
    Bool,
    /// Float that may also be `none`.
    OptionalFloat,
    Choice(&'static [&'static str]),
}

impl KeyKind {
    pub fn is_numeric(self) -> bool {
        matches!(self, KeyKind::Float | KeyKind::Integer | KeyKind::OptionalFloat)
    }
}

pub struct KeySpec {
    pub path: &'static str,
    pub kind: KeyKind,
    pub help: &'static str,
}

macro_rules! key {
    ($path:literal, $kind:expr, $help:literal) => {
        KeySpec {
            path: $path,
            kind: $kind,
            help: $help,
        }
    };
}

/// Every scenario key, in schema order.
pub const SCENARIO_KEYS: &[KeySpec] = &[
    key!(
        "medium.coupling_A",
        KeyKind::Float,
        "susceptibility amplitude A, s"
    ),
    key!(
        "medium.omega1_rabi",
        KeyKind::Float,
        "first pump Rabi frequency, rad/s"
    ),
    key!(
        "medium.omega2_rabi",
        KeyKind::Float,
        "second pump Rabi frequency, rad/s"
    ),
    key!(
        "medium.omega_res1",
        KeyKind::Float,
        "first gain-line frequency, rad/s"
    ),
    key!(
        "medium.pump_separation",
        KeyKind::Float,
        "gain-line separation, rad/s"
    ),
    key!("medium.gamma", KeyKind::Float, "Raman linewidth Gamma, rad/s"),
    key!("cavity.length_L", KeyKind::Float, "mirror separation, m"),
    key!("cavity.mode_index", KeyKind::Integer, "longitudinal mode number"),
    key!(
        "cavity.linewidth_hz",
        KeyKind::Float,
        "cavity resonance linewidth, Hz"
    ),
    key!("cavity.n0", KeyKind::Float, "mean index of both chambers"),
    key!(
        "cavity.omega0",
        KeyKind::Float,
        "carrier angular frequency, rad/s"
    ),
    key!("perturbation.sigma", KeyKind::Float, "dn/dS of the test chamber"),
    key!("perturbation.delta_S", KeyKind::Float, "applied perturbation"),
    key!(
        "detection.photon_rate",
        KeyKind::Float,
        "photon rate at the detector, 1/s"
    ),
    key!(
        "detection.quantum_eff",
        KeyKind::Float,
        "detector quantum efficiency"
    ),
    key!(
        "detection.cavity_linewidth_hz",
        KeyKind::Float,
        "linewidth entering the noise floor, Hz"
    ),
    key!(
        "detection.integration_time_s",
        KeyKind::Float,
        "integration time, s"
    ),
    key!(
        "bandwidth_hz",
        KeyKind::Float,
        "band for the second-order dispersion, Hz"
    ),
    key!(
        "cad_target_slope",
        KeyKind::OptionalFloat,
        "centre slope to tune to, s (or none)"
    ),
    key!(
        "cad_knob",
        KeyKind::Choice(&["separation", "rabi_scale"]),
        "parameter adjusted by tuning"
    ),
    key!(
        "f_mode",
        KeyKind::Choice(&["bandwidth", "perturbation"]),
        "source of f in Q"
    ),
    key!("flat_index", KeyKind::Bool, "replace the medium by a flat index"),
    key!(
        "probe_omega",
        KeyKind::OptionalFloat,
        "probe frequency for medium outputs, rad/s"
    ),
];

pub fn scenario_key(path: &str) -> Option<&'static KeySpec> {
    SCENARIO_KEYS.iter().find(|k| k.path == path)
}

/// Parses a TOML or JSON document into a JSON tree, by file extension
/// (anything other than `.json` is read as TOML).
pub fn parse_document(text: &str, path: &Path) -> Result<Value> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        serde_json::from_str(text).map_err(|e| Error::config(path.display().to_string(), e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| Error::config(path.display().to_string(), e.to_string()))
    }
}

pub fn read_document(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text, path)
}

/// Splits `key=value`, interpreting the value as bool, integer, float,
/// or otherwise a string.
pub fn parse_override(raw: &str) -> Result<(String, Value)> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| Error::config(raw, "override must have the form key=value"))?;
    let key = key.trim().to_string();
    let value = value.trim();
    let parsed = if let Ok(b) = value.parse::<bool>() {
        Value::Bool(b)
    } else if let Ok(i) = value.parse::<i64>() {
        Value::from(i)
    } else if let Ok(x) = value.parse::<f64>() {
        serde_json::Number::from_f64(x)
            .map(Value::Number)
            .ok_or_else(|| Error::config(&key, format!("non-finite value {value}")))?
    } else {
        Value::String(value.to_string())
    };
    Ok((key, parsed))
}

/// Recursively overlays `top` onto `base`.
pub fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Sets the leaf at dotted `path`, creating intermediate tables.
pub fn set_path(tree: &mut Value, path: &str, value: Value) {
    let mut node = tree;
    let mut parts = path.split('.').peekable();
    while let Some(part) = parts.next() {
        if !node.is_object() {
            *node = Value::Object(Map::new());
        }
        let map = node.as_object_mut().expect("object");
        if parts.peek().is_none() {
            map.insert(part.to_string(), value);
            return;
        }
        node = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
}

fn leaf_paths(tree: &Value, prefix: &str, out: &mut Vec<String>) {
    match tree {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                if v.is_object() {
                    leaf_paths(v, &path, out);
                } else {
                    out.push(path);
                }
            }
        }
        _ => out.push(prefix.to_string()),
    }
}

/// Rejects any leaf in `tree` that is not a known scenario key.
fn check_scenario_keys(tree: &Value, prefix: &str) -> Result<()> {
    let mut paths = Vec::new();
    leaf_paths(tree, "", &mut paths);
    for p in paths {
        if scenario_key(&p).is_none() {
            let shown = if prefix.is_empty() {
                p
            } else {
                format!("{prefix}.{p}")
            };
            return Err(Error::config(shown, "unknown config key"));
        }
    }
    Ok(())
}

fn from_tree<T: for<'de> Deserialize<'de>>(tree: Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(tree).map_err(|e| {
        let inner = e.path().to_string();
        let key = match (prefix.is_empty(), inner.as_str()) {
            (true, _) => inner.clone(),
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        Error::config(key, e.into_inner().to_string())
    })
}

fn default_tree() -> Value {
    serde_json::to_value(ScenarioConfig::default()).expect("default serialises")
}

/// Builds a scenario from an optional document tree and overrides.
pub fn resolve_scenario(file: Option<Value>, overrides: &[(String, Value)]) -> Result<ScenarioConfig> {
    let mut tree = default_tree();
    if let Some(file) = file {
        if !file.is_object() {
            return Err(Error::config("<root>", "config document must be a table"));
        }
        check_scenario_keys(&file, "")?;
        merge(&mut tree, file);
    }
    for (key, value) in overrides {
        if scenario_key(key).is_none() {
            return Err(Error::config(key.clone(), "unknown config key"));
        }
        set_path(&mut tree, key, value.clone());
    }
    let cfg: ScenarioConfig = from_tree(tree, "")?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_scenario(path: Option<&Path>, overrides: &[(String, Value)]) -> Result<ScenarioConfig> {
    let file = path.map(read_document).transpose()?;
    resolve_scenario(file, overrides)
}

/// A one-dimensional parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    /// Dotted path of the swept scenario field.
    pub axis: String,
    pub values: Vec<f64>,
    /// Columns to report, see [`crate::pipeline::sweep::OUTPUT_FIELDS`].
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate().map_err(|e| e.in_stage("base"))?;
        match scenario_key(&self.axis) {
            Some(k) if k.kind.is_numeric() => {}
            Some(_) => {
                return Err(Error::config(
                    "axis",
                    format!("`{}` is not a numeric field", self.axis),
                ))
            }
            None => return Err(Error::config("axis", format!("unknown field `{}`", self.axis))),
        }
        if self.values.is_empty() {
            return Err(Error::config("values", "at least one value is required"));
        }
        if let Some(bad) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::config("values", format!("non-finite value {bad}")));
        }
        if scenario_key(&self.axis).map(|k| k.kind) == Some(KeyKind::Integer)
            && self.values.iter().any(|v| v.fract() != 0.0 || *v < 0.0)
        {
            return Err(Error::config(
                "values",
                format!("`{}` takes non-negative integers", self.axis),
            ));
        }
        for name in &self.outputs {
            if !crate::pipeline::sweep::OUTPUT_FIELDS
                .iter()
                .any(|(f, _)| f == name)
            {
                return Err(Error::config("outputs", format!("unknown output field `{name}`")));
            }
        }
        Ok(())
    }

    pub fn digest(&self) -> String {
        digest_of(self)
    }
}

/// Builds a sweep from a document tree. The `base` table is laid over the
/// built-in default scenario; overrides address base fields without the
/// `base.` prefix.
pub fn resolve_sweep(file: Value, overrides: &[(String, Value)]) -> Result<SweepSpec> {
    let Value::Object(mut top) = file else {
        return Err(Error::config("<root>", "sweep document must be a table"));
    };
    for key in top.keys() {
        if !matches!(key.as_str(), "base" | "axis" | "values" | "outputs") {
            return Err(Error::config(key.clone(), "unknown sweep key"));
        }
    }
    let mut base = default_tree();
    if let Some(b) = top.remove("base") {
        if !b.is_object() {
            return Err(Error::config("base", "must be a table"));
        }
        check_scenario_keys(&b, "base")?;
        merge(&mut base, b);
    }
    for (key, value) in overrides {
        let key = key.strip_prefix("base.").unwrap_or(key);
        if scenario_key(key).is_none() {
            return Err(Error::config(key.to_string(), "unknown config key"));
        }
        set_path(&mut base, key, value.clone());
    }
    if let Some(v) = top.get_mut("values") {
        if v.is_object() {
            *v = expand_range(v)?;
        }
    }
    top.insert("base".into(), base);
    let spec: SweepSpec = from_tree(Value::Object(top), "")?;
    spec.validate()?;
    Ok(spec)
}

/// Expands `{ start, stop, num }` into `num` evenly spaced values, both
/// ends included.
fn expand_range(v: &Value) -> Result<Value> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Range {
        start: f64,
        stop: f64,
        num: usize,
    }
    let r: Range = from_tree(v.clone(), "values")?;
    let values: Vec<f64> = match r.num {
        0 => Vec::new(),
        1 => vec![r.start],
        n => {
            let step = (r.stop - r.start) / (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k + 1 == n {
                        r.stop
                    } else {
                        r.start + step * k as f64
                    }
                })
                .collect()
        }
    };
    serde_json::to_value(values).map_err(|e| Error::config("values", e.to_string()))
}

pub fn load_sweep(path: &Path, overrides: &[(String, Value)]) -> Result<SweepSpec> {
    resolve_sweep(read_document(path)?, overrides)
}

/// Scenario with one numeric field replaced.
pub fn with_field(base: &ScenarioConfig, path: &str, value: f64) -> Result<ScenarioConfig> {
    let spec = scenario_key(path).ok_or_else(|| Error::config(path, "unknown config key"))?;
    let v = match spec.kind {
        KeyKind::Integer if value.fract() == 0.0 && value >= 0.0 => Value::from(value as u64),
        KeyKind::Float | KeyKind::OptionalFloat => serde_json::Number::from_f64(value)
            .map(Value::Number)
            .ok_or_else(|| Error::config(path, "non-finite value"))?,
        _ => {
            return Err(Error::config(
                path,
                format!("cannot assign {value} to this field"),
            ))
        }
    };
    let mut tree = serde_json::to_value(base).expect("config serialises");
    set_path(&mut tree, path, v);
    from_tree(tree, "")
}
