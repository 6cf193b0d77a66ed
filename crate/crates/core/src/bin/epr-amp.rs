use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use epr_amp::scenario::{self, Scenario, TimeSeries};
use epr_amp::Error;

/// Batch runner for EPR-light amplifier scenarios.
#[derive(Parser)]
#[command(name = "epr-amp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its time series.
    Run {
        config: PathBuf,
        /// CSV path; overrides `output.path`. Without either, CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario against the Fock oracle and check the configured tolerances.
    Compare {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario once per value of a dotted config parameter.
    Sweep {
        config: PathBuf,
        /// Dotted path into the config, e.g. `amplifier.pq.k`.
        #[arg(long)]
        param: String,
        /// Comma-separated values; each is read as JSON, else as a string.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_TOLERANCE: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Config { .. } | Error::InvalidArgument(_) | Error::InvalidTransform(_) => EXIT_VALIDATION,
        Error::Capacity { .. } | Error::NotConverged(_) => EXIT_CAPACITY,
        _ => EXIT_RUNTIME,
    }
}

fn read_config(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        path: String::new(),
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config {
        path: String::new(),
        message: e.to_string(),
    })
}

fn output_path(out: Option<PathBuf>, s: &Scenario) -> Option<PathBuf> {
    out.or_else(|| s.output.as_ref().map(|o| o.path.clone()))
}

fn emit(path: Option<&Path>, series: &TimeSeries, summary: &Value) -> Result<(), Error> {
    match path {
        Some(p) => {
            let side = scenario::write_outputs(p, series, summary)?;
            eprintln!("wrote {} and {}", p.display(), side.display());
        }
        None => print!("{}", series.to_csv()),
    }
    Ok(())
}

fn run(config: &Path, out: Option<PathBuf>) -> Result<u8, Error> {
    let s = scenario::parse_value(read_config(config)?)?;
    let series = scenario::run_scenario(&s)?;
    let summary = series.summary("run", &s, None);
    emit(output_path(out, &s).as_deref(), &series, &summary)?;
    Ok(0)
}

fn compare(config: &Path, out: Option<PathBuf>) -> Result<u8, Error> {
    let s = scenario::parse_value(read_config(config)?)?;
    let (series, report) = scenario::compare_oracle(&s)?;
    let summary = series.summary("compare", &s, Some(&report));
    emit(output_path(out, &s).as_deref(), &series, &summary)?;
    let d = &report.max_deviation;
    eprintln!(
        "max |engine - oracle|: n1 {:e}, n2 {:e}, var_q {:e}, var_p {:e} (tolerance {:e})",
        d.n1, d.n2, d.var_q, d.var_p, report.tolerance
    );
    eprintln!(
        "max convergence delta (D={} vs D={}): {:e} (tolerance {:e})",
        s.oracle.dim,
        s.oracle.dim + epr_amp::fock::CONVERGENCE_STEP,
        report.max_convergence_delta,
        report.convergence_tol
    );
    Ok(if !report.converged {
        eprintln!("FAIL: truncation not converged");
        EXIT_CAPACITY
    } else if !report.within_tolerance {
        eprintln!("FAIL: deviation above tolerance");
        EXIT_TOLERANCE
    } else {
        eprintln!("PASS");
        0
    })
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

fn sweep(config: &Path, param: &str, values: &[String], out: Option<PathBuf>) -> Result<u8, Error> {
    let base = read_config(config)?;
    let mut scenarios = Vec::with_capacity(values.len());
    for raw in values {
        let v = parse_value(raw.trim());
        let mut doc = base.clone();
        scenario::set_param(&mut doc, param, v.clone())?;
        scenarios.push((v, scenario::parse_value(doc)?));
    }
    let out = match out.or_else(|| scenarios.first().and_then(|(_, s)| output_path(None, s))) {
        Some(p) => p,
        None => {
            return Err(Error::Config {
                path: "output.path".into(),
                message: "sweep needs --out or output.path".into(),
            })
        }
    };
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    let mut runs = Vec::with_capacity(scenarios.len());
    for (i, (v, s)) in scenarios.iter().enumerate() {
        let series = scenario::run_scenario(s)?;
        let summary = series.summary("sweep", s, None);
        let csv = out.with_file_name(format!("{stem}_{i}.csv"));
        scenario::write_outputs(&csv, &series, &summary)?;
        runs.push(json!({
            "value": v,
            "csv": csv.file_name().map(|f| f.to_string_lossy().into_owned()),
            "final": summary["final"],
            "oracle": summary["oracle"],
        }));
    }
    let side = scenario::sidecar_path(&out);
    scenario::write_json(
        &side,
        &json!({ "command": "sweep", "param": param, "runs": runs }),
    )?;
    eprintln!("wrote {} runs and {}", runs.len(), side.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => run(&config, out),
        Command::Compare { config, out } => compare(&config, out),
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => sweep(&config, &param, &values, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
