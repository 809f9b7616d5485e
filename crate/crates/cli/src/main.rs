//! `liestat`: geometry reports and classification of left-invariant
//! statistical structures.

mod classify_cmd;
mod format;
mod models_cmd;
mod report;
mod spec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use liestat::classify::{Family, GridAxis};

const RANK_TOL_ENV: &str = "LIESTAT_RANK_TOL";

#[derive(Debug)]
pub enum CliError {
    /// Malformed input (exit 2).
    Input(String),
    /// Well-formed input violating a mathematical invariant (exit 3).
    Validation(String),
    /// Output produced, but a rank decision was ambiguous (exit 4).
    Numeric(String),
}

impl CliError {
    pub fn from_core(e: liestat::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "liestat", version, about = "Left-invariant statistical geometry on Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry report for a JSON group spec.
    Report {
        spec: PathBuf,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
        /// Append the conjugate-symmetric kernel.
        #[arg(long)]
        classify: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flatness tolerance for the Hessian curvature.
        #[arg(long)]
        flat_tol: Option<f64>,
    },
    /// Kernel dimension of conjugate-symmetric structures on frame families.
    Classify(ClassifyArgs),
    /// Normal and Student-t Fisher geometry.
    Models {
        #[arg(value_parser = ["normal", "t"])]
        model: String,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Unimodular Milnor frame `(c1, c2, c3)`.
    #[arg(long, conflicts_with_all = ["nonunimodular", "product"])]
    milnor: bool,
    #[arg(long, num_args = 3, value_names = ["C1", "C2", "C3"], allow_negative_numbers = true)]
    c: Option<Vec<f64>>,
    /// Normalized non-unimodular frame `(xi, eta)`.
    #[arg(long, conflicts_with = "product")]
    nonunimodular: bool,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Product of the 2-dimensional solvable group with the line.
    #[arg(long)]
    product: bool,
    #[arg(long)]
    nu2: Option<f64>,
    /// Sweep a grid instead of a single point.
    #[arg(long)]
    sweep: bool,
    /// `lo:hi:step`; once for all axes or once per parameter.
    #[arg(long, allow_hyphen_values = true)]
    grid: Vec<String>,
    #[arg(long)]
    show_basis: bool,
    #[arg(long)]
    json: bool,
}

fn rank_tol_from_env() -> Result<Option<f64>, CliError> {
    match std::env::var(RANK_TOL_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(Some(v)),
            _ => Err(CliError::Input(format!("{RANK_TOL_ENV}: expected a positive number, got `{s}`"))),
        },
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).or_else(|e| {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    Ok(())
                } else {
                    Err(CliError::Input(format!("cannot write output: {e}")))
                }
            })
        }
    }
}

fn cmd_report(
    path: &PathBuf,
    json: bool,
    classify: bool,
    out: Option<&PathBuf>,
    flat_tol: Option<f64>,
) -> Result<(), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut loaded = spec::GroupSpec::parse(&text)?.load(rank_tol_from_env()?)?;
    if let Some(t) = flat_tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Input(format!("--flat-tol: expected a positive number, got {t}")));
        }
        loaded.flat_tol = t;
    }
    let rep = report::build(&loaded, classify)?;
    emit(&if json { to_json(&rep) } else { report::to_text(&rep) }, out)?;
    match &rep.classification {
        Some(c) if c.ambiguous => Err(CliError::Numeric(
            "a singular value lies within a factor 10 of the rank threshold; kernel dimension is ambiguous".into(),
        )),
        _ => Ok(()),
    }
}

fn cmd_classify(a: &ClassifyArgs) -> Result<(), CliError> {
    let family = match (a.milnor, a.nonunimodular, a.product) {
        (true, false, false) => Family::Milnor,
        (false, true, false) => Family::NonUnimodular,
        (false, false, true) => Family::Product,
        _ => return Err(CliError::Input("choose one of --milnor, --nonunimodular, --product".into())),
    };
    let mut axes: Vec<GridAxis> = a.grid.iter().map(|s| classify_cmd::parse_axis(s)).collect::<Result<_, _>>()?;
    if a.sweep && axes.is_empty() {
        return Err(CliError::Input("--sweep needs at least one --grid lo:hi:step".into()));
    }
    let point_given = a.c.is_some() || a.xi.is_some() || a.eta.is_some() || a.nu2.is_some();
    if !axes.is_empty() && point_given {
        return Err(CliError::Input("give either a grid or a single parameter point, not both".into()));
    }
    let missing = |flag: &str| CliError::Input(format!("missing {flag}"));
    if axes.is_empty() {
        let point: Vec<f64> = match family {
            Family::Milnor => a.c.clone().ok_or_else(|| missing("--c C1 C2 C3"))?,
            Family::NonUnimodular => {
                vec![a.xi.ok_or_else(|| missing("--xi"))?, a.eta.ok_or_else(|| missing("--eta"))?]
            }
            Family::Product => vec![a.nu2.ok_or_else(|| missing("--nu2"))?],
        };
        axes = point.into_iter().map(GridAxis::point).collect();
    } else if (a.c.is_some() && family != Family::Milnor)
        || ((a.xi.is_some() || a.eta.is_some()) && family != Family::NonUnimodular)
    {
        return Err(CliError::Input("parameter flags do not match the family".into()));
    }
    let single = !a.sweep && a.grid.is_empty();
    let out = classify_cmd::run(
        family,
        &axes,
        rank_tol_from_env()?.unwrap_or(liestat::classify::DEFAULT_RANK_TOL),
        a.show_basis,
    )?;
    if single {
        if let Some(e) = &out.rows[0].error {
            // a lone invalid point is a parameter error, not a sweep row
            return Err(CliError::Input(e.clone()));
        }
    }
    emit(&if a.json { to_json(&out) } else { classify_cmd::to_text(&out) }, None)?;
    if out.any_ambiguous() {
        return Err(CliError::Numeric("rank decision within a factor 10 of the threshold at some grid point".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Report { spec, json, classify, out, flat_tol } => {
            cmd_report(&spec, json, classify, out.as_ref(), flat_tol)
        }
        Command::Classify(args) => cmd_classify(&args),
        Command::Models { model, nu, alpha, json } => {
            let o = models_cmd::run(&model, nu, alpha)?;
            emit(&if json { to_json(&o) } else { models_cmd::to_text(&o) }, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("liestat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
