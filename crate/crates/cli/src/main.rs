//! `fastlight`: command-line front end to the fast-light interferometer model.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fastlight_core::pipeline::config::SCENARIO_KEYS;
use fastlight_core::pipeline::sweep::OUTPUT_FIELDS;
use fastlight_core::TuningKnob;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

fn scenario_keys_help() -> String {
    let mut s = String::from("Config keys (set with --set KEY=VALUE or in the --config file):\n");
    for k in SCENARIO_KEYS {
        s.push_str(&format!("  {:<34} {}\n", k.path, k.help));
    }
    s
}

fn sweep_keys_help() -> String {
    let mut s = String::from(
        "Sweep document keys: base (scenario table), axis (dotted scenario key), \
         values (list, or table with start/stop/num), outputs (list).\n\n",
    );
    s.push_str(&scenario_keys_help());
    s.push_str("\nOutput fields:\n  ");
    s.push_str(
        &OUTPUT_FIELDS
            .iter()
            .map(|(f, _)| *f)
            .collect::<Vec<_>>()
            .join(", "),
    );
    s.push('\n');
    s
}

#[derive(Parser, Debug)]
#[command(name = "fastlight", version, about = "Fast-light cavity sensitivity model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// TOML or JSON config file (`.json` selects JSON).
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file, or `-` for standard output.
    #[arg(long, value_name = "PATH|-", default_value = "-")]
    pub out: String,
    /// Dotted-key override, applied after the config file. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads for row evaluation.
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Shorthand for `--set bandwidth_hz=F`.
    #[arg(long, value_name = "F")]
    pub band_hz: Option<f64>,
    /// Shorthand for `--set flat_index=true`: a dispersionless medium.
    #[arg(long)]
    pub flat_index: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Medium response (χ, n, gain, derivatives) on a frequency grid, as CSV.
    #[command(after_help = scenario_keys_help())]
    Dispersion {
        #[command(flatten)]
        common: Common,
        /// Number of grid points.
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Half-width of the grid in units of the line separation.
        #[arg(long, default_value_t = 5.0)]
        span: f64,
    },
    /// Tune the pumps to a centre slope and print the tuned medium, as CSV.
    #[command(name = "tune-cad", after_help = scenario_keys_help())]
    TuneCad {
        #[command(flatten)]
        common: Common,
        /// Target centre slope, s. Defaults to `cad_target_slope`.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<f64>,
        /// Parameter to adjust. Defaults to `cad_knob`.
        #[arg(long, value_parser = parse_knob)]
        knob: Option<TuningKnob>,
    },
    /// Full single-scenario report as `key: value` lines.
    #[command(after_help = scenario_keys_help())]
    Scenario {
        #[command(flatten)]
        common: Common,
    },
    /// Enhancement factor against n_g/n0, as CSV.
    #[command(after_help = scenario_keys_help())]
    Fig3 {
        #[command(flatten)]
        common: Common,
        /// Range of n_g/n0 as `LO,HI`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0,1")]
        range: (f64, f64),
        /// Number of samples, both ends included.
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// Use this Q instead of the one derived from the scenario.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
    },
    /// Beat-frequency and sensing uncertainty as `key: value` lines.
    #[command(after_help = scenario_keys_help())]
    Noise {
        #[command(flatten)]
        common: Common,
        /// Enhancement factor dividing the sensing uncertainty.
        #[arg(long)]
        enhancement: Option<f64>,
    },
    /// One-dimensional parameter sweep described by `--config`, as CSV.
    #[command(after_help = sweep_keys_help())]
    Sweep {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_knob(s: &str) -> Result<TuningKnob, String> {
    match s {
        "separation" => Ok(TuningKnob::Separation),
        "rabi_scale" => Ok(TuningKnob::RabiScale),
        _ => Err(format!("expected `separation` or `rabi_scale`, got `{s}`")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { EXIT_NUMERIC } else { EXIT_CONFIG })
        }
    }
}
