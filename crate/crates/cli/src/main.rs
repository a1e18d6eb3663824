//! `effham`: synthesis, propagation, speed reports and scenarios from the
//! command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numeric failure, 3 I/O error.
//! Errors go to standard error as `ERROR <code>: <message>`.

mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use effham::bounds::report_path;
use effham::checks::{run_invariant_suite, DEFAULT_SEED};
use effham::io::{
    parse_json, read_sampled_path, read_text, sampled_path_csv, speed_report_csv, to_json,
    write_atomic, write_files, SampledPathFile, ScenarioOutput, SynthesisFile,
};
use effham::linalg::C64;
use effham::propagate::{propagate, PropagationOptions};
use effham::scenarios::{
    run_brachistochrone, run_figure1, run_optical, run_pauli, Figure1Config, OpticalConfig,
    PauliConfig,
};
use effham::synthesis::{gauge_fix, synthesize, GParameter};
use effham::trajectory::{preset, sample};
use effham::{Error, Result};

use parse::{
    parse_bender, parse_complex, parse_hamiltonian, parse_linear, parse_number, parse_state,
    parse_vec3, profile,
};

#[derive(Parser, Debug)]
#[command(name = "effham", version, about = "Efficient Hamiltonians and quantum speed limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the efficient Hamiltonian family for a state trajectory.
    Synthesize(SynthesizeArgs),
    /// Integrate the Schrödinger equation for a (possibly non-Hermitian) Hamiltonian.
    Propagate(PropagateArgs),
    /// Speed, norms and efficiency along a sampled state path.
    Bounds(BoundsArgs),
    /// Run a named experiment and write its report and CSV series.
    Scenario(ScenarioArgs),
    /// Run the invariant suite and print a pass/fail table.
    Check,
}

#[derive(Args, Debug)]
struct SynthesizeArgs {
    /// `greatcircle` or a SampledPath JSON file.
    #[arg(long)]
    trajectory: String,
    /// Constant coupling, e.g. `-0.8+0i`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "g_series")]
    g: Option<String>,
    /// JSON array of `[re, im]` values, one per sample.
    #[arg(long)]
    g_series: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    step: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct PropagateArgs {
    /// `sigma_x|sigma_y|sigma_z|berry:q=<expr>|bender:s=<v>,alpha=<v>` or a JSON file.
    #[arg(long)]
    hamiltonian: String,
    /// `up`, `down` or comma-separated components.
    #[arg(long, allow_hyphen_values = true)]
    initial: String,
    #[arg(long, allow_hyphen_values = true)]
    t0: String,
    #[arg(long, allow_hyphen_values = true)]
    t1: String,
    #[arg(long, default_value = "1e-3", allow_hyphen_values = true)]
    step: String,
    #[arg(long)]
    renormalize: bool,
    /// Defaults to csv for `.csv` outputs, json otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    hamiltonian: String,
    /// SampledPath JSON file.
    #[arg(long)]
    state_path: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScenarioName {
    Figure1,
    Optical,
    Pauli,
    Brach,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    #[arg(long, value_enum)]
    name: ScenarioName,
    /// `key=value`; repeat for several (`g` and `state` may repeat for figure1).
    #[arg(long = "param", allow_hyphen_values = true)]
    params: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    ChecksFailed(usize),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_io() => 3,
            CliError::Lib(e) if e.is_numeric() => 2,
            CliError::Lib(_) => 1,
            CliError::ChecksFailed(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::ChecksFailed(n) => format!("{n} checks failed"),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn positive(s: &str, what: &str) -> Result<f64> {
    let v = parse_number(s, what)?;
    if v <= 0.0 {
        return Err(invalid(format!("{what} must be positive, got {v}")));
    }
    Ok(v)
}

fn synthesize_cmd(a: &SynthesizeArgs) -> Result<()> {
    let g_const = a.g.as_deref().map(parse_complex).transpose()?;
    let from_file = preset(&a.trajectory).is_err();
    if from_file && !parse::looks_like_file(&a.trajectory) {
        return Err(invalid(format!("unknown trajectory '{}' (preset: greatcircle; or a .json file)", a.trajectory)));
    }
    let path = if from_file {
        if a.t0.is_some() || a.t1.is_some() || a.step.is_some() {
            return Err(invalid("--t0/--t1/--step apply to trajectory presets; a trajectory file carries its own grid"));
        }
        read_sampled_path(Path::new(&a.trajectory))?
    } else {
        let t0 = a.t0.as_deref().map_or(Ok(0.0), |s| parse_number(s, "--t0"))?;
        let t1 = a.t1.as_deref().map_or(Ok(3.0), |s| parse_number(s, "--t1"))?;
        let step = a.step.as_deref().map_or(Ok(1e-3), |s| positive(s, "--step"))?;
        if t1 <= t0 {
            return Err(invalid(format!("--t1 ({t1}) must exceed --t0 ({t0})")));
        }
        sample(preset(&a.trajectory)?.as_ref(), t0, t1, step)?
    };
    let g = match (g_const, &a.g_series) {
        (Some(g), None) => GParameter::Constant(g),
        (None, Some(file)) => {
            let values: Vec<[f64; 2]> = parse_json(&read_text(file)?, &file.display().to_string())?;
            GParameter::Series(values.into_iter().map(|[re, im]| C64::new(re, im)).collect())
        }
        _ => return Err(invalid("give exactly one of --g or --g-series")),
    };
    let result = synthesize(&gauge_fix(&path)?, &g)?;
    emit(a.out.as_deref(), &to_json(&SynthesisFile::from(&result))?)
}

fn propagate_cmd(a: &PropagateArgs) -> Result<()> {
    let psi0 = parse_state(&a.initial)?;
    let t0 = parse_number(&a.t0, "--t0")?;
    let t1 = parse_number(&a.t1, "--t1")?;
    let step = positive(&a.step, "--step")?;
    if t1 <= t0 {
        return Err(invalid(format!("--t1 ({t1}) must exceed --t0 ({t0})")));
    }
    let format = a.format.unwrap_or(match a.out.as_ref().and_then(|p| p.extension()) {
        Some(ext) if ext == "csv" => Format::Csv,
        _ => Format::Json,
    });
    let h = parse_hamiltonian(&a.hamiltonian)?;
    let opts = PropagationOptions { step, renormalize: a.renormalize, record_every: 1 };
    let path = propagate(&h, &psi0, t0, t1, &opts)?;
    let text = match format {
        Format::Json => to_json(&SampledPathFile::from_path(&path))?,
        Format::Csv => sampled_path_csv(&path),
    };
    emit(a.out.as_deref(), &text)
}

fn bounds_cmd(a: &BoundsArgs) -> Result<()> {
    let h = parse_hamiltonian(&a.hamiltonian)?;
    let path = read_sampled_path(&a.state_path)?;
    let rows = report_path(&h, &path)?;
    emit(a.out.as_deref(), &speed_report_csv(&rows))
}

fn split_params(params: &[String]) -> Result<Vec<(&str, &str)>> {
    params
        .iter()
        .map(|p| p.split_once('=').ok_or_else(|| invalid(format!("--param expects key=value, got '{p}'"))))
        .collect()
}

fn scenario_files(a: &ScenarioArgs) -> Result<Vec<(String, String)>> {
    let params = split_params(&a.params)?;
    match a.name {
        ScenarioName::Figure1 => {
            let mut cfg = Figure1Config::default();
            let (mut gs, mut states) = (Vec::new(), Vec::new());
            for (k, v) in params {
                match k {
                    "g" => gs.push(parse_complex(v)?),
                    "state" => states.push(parse_state(v)?),
                    "t_end" => cfg.t_end = positive(v, k)?,
                    "step" => cfg.step = positive(v, k)?,
                    other => return Err(invalid(format!("unknown figure1 parameter '{other}'"))),
                }
            }
            if !gs.is_empty() {
                cfg.g_values = gs;
            }
            if !states.is_empty() {
                cfg.initial_states = states;
            }
            run_figure1(&cfg)?.files()
        }
        ScenarioName::Optical => {
            let mut cfg = OpticalConfig::linear_ramp();
            for (k, v) in params {
                match k {
                    "q" => {
                        cfg.q_profile = profile(parse_linear(v, "z")?);
                        cfg.q_label = format!("q = {v}");
                    }
                    "z0" => cfg.z_range.0 = parse_number(v, k)?,
                    "z1" => cfg.z_range.1 = parse_number(v, k)?,
                    "samples" => {
                        cfg.samples = v.parse().map_err(|_| invalid(format!("samples: '{v}' is not a count")))?
                    }
                    "step" => cfg.step = positive(v, k)?,
                    "propagate" if v == "none" => cfg.propagate_from = None,
                    "propagate" => cfg.propagate_from = Some(parse_state(v)?),
                    other => return Err(invalid(format!("unknown optical parameter '{other}'"))),
                }
            }
            run_optical(&cfg)?.files()
        }
        ScenarioName::Pauli => {
            let mut cfg = PauliConfig { alpha: [1.0, 0.0, 0.0], beta: [0.0, 1.0, 0.0] };
            for (k, v) in params {
                match k {
                    "alpha" => cfg.alpha = parse_vec3(v, k)?,
                    "beta" => cfg.beta = parse_vec3(v, k)?,
                    other => return Err(invalid(format!("unknown pauli parameter '{other}'"))),
                }
            }
            run_pauli(&cfg)?.files()
        }
        ScenarioName::Brach => {
            let (physical, rest): (Vec<_>, Vec<_>) =
                params.into_iter().partition(|(k, _)| matches!(*k, "s" | "alpha" | "r" | "chi"));
            let mut cfg = if physical.is_empty() {
                effham::scenarios::BrachistochroneConfig::canonical(1.0, 0.5)
            } else {
                parse_bender(&physical)?
            };
            for (k, v) in rest {
                match k {
                    "delta_e" if v == "none" => cfg.sweep_delta_e = None,
                    "delta_e" => cfg.sweep_delta_e = Some(positive(v, k)?),
                    "points" => {
                        cfg.sweep_points = v.parse().map_err(|_| invalid(format!("points: '{v}' is not a count")))?
                    }
                    "alpha_max" => cfg.sweep_alpha_max = positive(v, k)?,
                    "t_end" => cfg.t_end = positive(v, k)?,
                    "step" => cfg.step = positive(v, k)?,
                    other => return Err(invalid(format!("unknown brach parameter '{other}'"))),
                }
            }
            run_brachistochrone(&cfg)?.files()
        }
    }
}

fn scenario_cmd(a: &ScenarioArgs) -> Result<()> {
    let files = scenario_files(a)?;
    write_files(&a.out, &files)
}

fn check_cmd() -> std::result::Result<(), CliError> {
    let seed = match std::env::var("EFFHAM_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| invalid(format!("EFFHAM_SEED: '{s}' is not an unsigned integer")))?,
        Err(_) => DEFAULT_SEED,
    };
    let checks = run_invariant_suite(seed)?;
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    println!("seed {seed}");
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("{status}  {:<width$}  {:>12.3e}  (limit {:.3e})", c.name, c.value, c.limit);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> std::result::Result<(), CliError> {
    match &cli.command {
        Command::Synthesize(a) => synthesize_cmd(a)?,
        Command::Propagate(a) => propagate_cmd(a)?,
        Command::Bounds(a) => bounds_cmd(a)?,
        Command::Scenario(a) => scenario_cmd(a)?,
        Command::Check => check_cmd()?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("ERROR 1: {first}");
            for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
                eprintln!("{line}");
            }
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ERROR {}: {}", e.code(), e.message());
            ExitCode::from(e.code())
        }
    }
}
