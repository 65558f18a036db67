use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pdem::ambiguity::Preset;
use pdem::catalog::{self, Potential};
use pdem::interval::Grid;
use pdem::report::{fmt_f64, spectrum_report, sweep, sweep_csv, AmbiguityLabel, LevelCount};
use pdem::verify::{verify_entry, Tolerances, VerifyReport};
use pdem::wavefunctions::{sample_normalized, StateModel};
use pdem::Error;

#[derive(Parser)]
#[command(name = "pdem", version, about = "Deformed shape-invariant potentials with position-dependent mass")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the entries, their validity ranges and the excluded potentials.
    Catalog,
    /// Closed-form, chain and oracle energies for one entry.
    Spectrum {
        #[arg(long)]
        potential: String,
        /// Comma-separated `name=value` pairs; omitted names take defaults.
        #[arg(long, default_value = "")]
        params: String,
        /// A count, or `auto` for the counting rule (at most 16).
        #[arg(long, default_value = "auto")]
        n_levels: String,
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value = "bdd")]
        preset: String,
    },
    /// Normalized closed-form samples of one level as CSV.
    Wavefunction {
        #[arg(long)]
        potential: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// Written to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite; exit 0 iff every check passes.
    Verify {
        /// An entry name or `all`.
        #[arg(long)]
        potential: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value = "bdd")]
        preset: String,
        /// Relative tolerance for the oracle energies.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Bound-state counts and energies across a parameter range as CSV.
    Sweep {
        #[arg(long)]
        potential: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value = "alpha")]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Range(_) | Error::Index { .. } | Error::NotFound { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, Failure> {
    let mut out = BTreeMap::new();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("expected name=value, got `{pair}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("`{}` is not a number", v.trim())))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn potential(name: &str, params: &str) -> Result<Potential, Failure> {
    Ok(Potential::from_params(name, &parse_params(params)?)?)
}

fn catalog_text() -> String {
    let listing = catalog::list();
    let mut out = String::new();
    for e in listing.entries {
        let _ = writeln!(out, "{} ({})", e.name, e.title);
        let _ = writeln!(out, "  domain:         {}", e.domain);
        let _ = writeln!(out, "  V_eff:          {}", e.v_eff);
        let _ = writeln!(out, "  superpotential: {}", e.superpotential);
        let _ = writeln!(out, "  deforming:      {}", e.deforming);
        let _ = writeln!(out, "  ranges:         {}", e.ranges);
        let _ = writeln!(out, "  counting:       {}", e.counting);
        let defaults: Vec<String> =
            e.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
        let _ = writeln!(out, "  defaults:       {}", defaults.join(","));
    }
    out.push_str("excluded:\n");
    for x in listing.exclusions {
        let _ = writeln!(out, "  {} ({}): {}", x.name, x.title, x.reason);
    }
    out
}

fn wavefunction_csv(p: &Potential, n: usize, samples: usize) -> Result<String, Failure> {
    if !p.bound_state_count().admits(n) {
        return Err(Error::Index { n, count: p.bound_state_count().levels(usize::MAX) }.into());
    }
    if samples < 2 {
        return Err(Failure::Usage("--samples must be at least 2".into()));
    }
    let span = p.oracle_grid(None)?;
    let grid = Grid::new(span.x1(), span.x2(), samples + 2)?;
    let model = StateModel::for_potential(p, n)?;
    let psi = sample_normalized(&model, &grid)?;
    let df = p.deforming();
    let mut out = String::from("x,psi,f,v_eff\n");
    for (i, x) in grid.nodes().into_iter().enumerate().skip(1).take(samples) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(x),
            fmt_f64(psi[i]),
            fmt_f64(df.f(x)?),
            fmt_f64(p.v_eff(x))
        );
    }
    Ok(out)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Catalog => {
            emit(&catalog_text());
            Ok(true)
        }
        Command::Spectrum { potential: name, params, n_levels, oracle, format, preset } => {
            let p = potential(&name, &params)?;
            let preset: Preset = preset.parse()?;
            let count: LevelCount = n_levels.parse()?;
            let report = spectrum_report(&p, AmbiguityLabel::Preset(preset), count, oracle)?;
            match format {
                Format::Json => emit(&(report.to_json()? + "\n")),
                Format::Csv => emit(&report.to_csv()),
            }
            Ok(true)
        }
        Command::Wavefunction { potential: name, params, n, samples, out } => {
            let p = potential(&name, &params)?;
            let csv = wavefunction_csv(&p, n, samples)?;
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?,
                None => emit(&csv),
            }
            Ok(true)
        }
        Command::Verify { potential: name, params, preset, tol } => {
            let preset: Preset = preset.parse()?;
            let tol = Tolerances { oracle: tol, ..Tolerances::default() };
            let entries = if name == "all" {
                if !params.is_empty() {
                    return Err(Failure::Usage("--params cannot be combined with --potential all".into()));
                }
                catalog::defaults()
            } else {
                vec![potential(&name, &params)?]
            };
            let reports = entries
                .iter()
                .map(|p| verify_entry(p, &preset.params(), &tol))
                .collect::<pdem::Result<Vec<VerifyReport>>>()?;
            let pass = reports.iter().all(|r| r.pass);
            if reports.len() == 1 {
                emit(&(json(&reports[0])? + "\n"));
            } else {
                emit(&(json(&reports)? + "\n"));
            }
            Ok(pass)
        }
        Command::Sweep { potential: name, params, param, from, to, steps } => {
            let p = potential(&name, &params)?;
            let rows = sweep(&p, &param, from, to, steps)?;
            emit(&sweep_csv(&param, &rows));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
