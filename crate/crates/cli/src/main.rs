//! `tristeer` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 invalid state, 4 threshold search
//! failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tristeer::states::{ghz, load_state, w_state, NoisyFamily, PureState};
use tristeer::steering::{
    default_criteria, detect_with_criteria, reproduce_tables, threshold, ThresholdResult,
    TABLE_CELLS,
};
use tristeer::witness::CriterionId;
use tristeer::{Error, Scenario, SteeringReport, ThreeQubitState};

const EXIT_USAGE: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_THRESHOLD: u8 = 4;

#[derive(Parser)]
#[command(name = "tristeer", version, about = "Tripartite steering detection from three-qubit density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the steering criteria for one scenario on a state.
    Analyze(AnalyzeArgs),
    /// Critical white-noise parameter at which a criterion starts to fire.
    Threshold(ThresholdArgs),
    /// Threshold tables for the built-in GHZ and W families.
    Tables(TablesArgs),
    /// Check that a state file holds a valid density matrix.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Ghz,
    W,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON state file.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Built-in target state.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Clone, Copy)]
enum MuArg {
    Auto,
    Value(f64),
}

impl FromStr for MuArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(MuArg::Auto);
        }
        s.parse::<f64>()
            .map(MuArg::Value)
            .map_err(|_| format!("expected 'auto' or a number, got '{s}'"))
    }
}

#[derive(Clone, Copy)]
enum CriterionArg {
    All,
    One(CriterionId),
}

impl FromStr for CriterionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(CriterionArg::All);
        }
        s.parse().map(CriterionArg::One).map_err(|e: Error| e.to_string())
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    /// GHZ amplitude on |000⟩ (built-in ghz only).
    #[arg(long)]
    a: Option<f64>,
    /// Weight of white noise mixed into the built-in state.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Mixing weight of the mapped state, or 'auto' for the scenario's bound.
    #[arg(long, default_value = "auto")]
    mu: MuArg,
    /// {a-to-bc,ab-to-c}:{steering,genuine}
    #[arg(long)]
    scenario: Scenario,
    /// Criterion id, or 'all' for every criterion suited to the scenario.
    #[arg(long, default_value = "all")]
    criterion: CriterionArg,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    source: Source,
    /// GHZ amplitude on |000⟩ (built-in ghz only).
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    scenario: Scenario,
    /// Criterion id, or 'all' for every criterion suited to the scenario.
    #[arg(long)]
    criterion: CriterionArg,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NeverFires { .. } | Error::AlwaysFires { .. } | Error::NonMonotone { .. } => EXIT_THRESHOLD,
            Error::DimensionMismatch { .. }
            | Error::NonFinite { .. }
            | Error::NotHermitian(_)
            | Error::InvalidState { .. }
            | Error::Parse(_) => EXIT_INVALID,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn builtin_pure(which: Builtin, a: Option<f64>) -> Result<(String, PureState), Failure> {
    match (which, a) {
        (Builtin::Ghz, None) => Ok(("ghz".into(), ghz(std::f64::consts::FRAC_1_SQRT_2)?)),
        (Builtin::Ghz, Some(a)) => Ok((format!("ghz(a={a})"), ghz(a)?)),
        (Builtin::W, None) => Ok(("w".into(), w_state())),
        (Builtin::W, Some(_)) => Err(usage("--a applies only to --builtin ghz")),
    }
}

fn load(path: &Path) -> Result<ThreeQubitState, Failure> {
    load_state(path).map_err(|e| match e {
        Error::Io(io) => usage(format!("cannot read {}: {io}", path.display())),
        other => {
            let f = Failure::from(other);
            Failure {
                code: f.code,
                message: format!("{}: {}", path.display(), f.message),
            }
        }
    })
}

fn file_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "state".into())
}

fn analyze(args: &AnalyzeArgs) -> Result<String, Failure> {
    let rho = match (&args.source.state, args.source.builtin) {
        (Some(path), _) => {
            if args.a.is_some() || args.noise != 0.0 {
                return Err(usage("--a and --noise apply only to --builtin states"));
            }
            let rho = load(path)?;
            if rho.label().is_some() {
                rho
            } else {
                rho.with_label(file_label(path))
            }
        }
        (None, Some(which)) => {
            let (label, pure) = builtin_pure(which, args.a)?;
            if !(0.0..=1.0).contains(&args.noise) {
                return Err(usage(format!("--noise {} is outside [0, 1]", args.noise)));
            }
            NoisyFamily::from_pure(label, &pure).at(1.0 - args.noise)?
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    let mu = match args.mu {
        MuArg::Auto => None,
        MuArg::Value(v) => Some(v),
    };
    let criteria: Vec<CriterionId> = match args.criterion {
        CriterionArg::All => default_criteria(args.scenario).to_vec(),
        CriterionArg::One(id) => vec![id],
    };
    let report = detect_with_criteria(&rho, args.scenario, mu, &criteria)?;
    Ok(match args.format {
        Format::Text => report_text(&report),
        Format::Json => report.to_json() + "\n",
        Format::Csv => report_csv(&report),
    })
}

fn report_text(r: &SteeringReport) -> String {
    let mut s = String::new();
    if let Some(label) = &r.label {
        let _ = writeln!(s, "state:    {label}");
    }
    let _ = writeln!(s, "scenario: {}", r.scenario);
    let _ = writeln!(
        s,
        "mu:       {:.6} ({})",
        r.mu,
        if r.certified { "certified" } else { "uncertified" }
    );
    let _ = writeln!(s, "verdict:  {}", r.verdict());
    if !r.criteria.is_empty() {
        let _ = writeln!(s, "criteria:");
        for v in &r.criteria {
            let _ = writeln!(
                s,
                "  {:<10} lhs {:>12.6e}  rhs {:>12.6e}  margin {:>+13.6e}  {:<12}  {}",
                v.id.as_str(),
                v.lhs,
                v.rhs,
                v.margin,
                if v.detected { "detected" } else { "not detected" },
                v.detail
            );
        }
    }
    let _ = writeln!(s, "conclusions:");
    for (scenario, c) in &r.conclusions {
        let _ = writeln!(s, "  {:<18} {c}", scenario.to_string());
    }
    if !r.notes.is_empty() {
        let _ = writeln!(s, "notes:");
        for n in &r.notes {
            let _ = writeln!(s, "  - {n}");
        }
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn report_csv(r: &SteeringReport) -> String {
    let mut s = String::from("scenario,mu,certified,criterion,lhs,rhs,margin,detected,verdict\n");
    for v in &r.criteria {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.scenario,
            r.mu,
            r.certified,
            v.id.as_str(),
            v.lhs,
            v.rhs,
            v.margin,
            v.detected,
            r.verdict()
        );
    }
    s
}

fn threshold_cmd(args: &ThresholdArgs) -> Result<String, Failure> {
    let family = match (&args.source.state, args.source.builtin) {
        (Some(path), _) => {
            if args.a.is_some() {
                return Err(usage("--a applies only to --builtin ghz"));
            }
            let rho = load(path)?;
            let label = rho.label().map(str::to_owned).unwrap_or_else(|| file_label(path));
            NoisyFamily::from_state(label, rho)
        }
        (None, Some(which)) => {
            let (label, pure) = builtin_pure(which, args.a)?;
            NoisyFamily::from_pure(label, &pure)
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    let criteria: Vec<CriterionId> = match args.criterion {
        CriterionArg::All => default_criteria(args.scenario).to_vec(),
        CriterionArg::One(id) => vec![id],
    };
    if criteria.is_empty() {
        return Err(usage(format!("no criterion can certify {}", args.scenario)));
    }
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for &c in &criteria {
        match threshold(&family, args.scenario, c, args.tol) {
            Ok(r) => results.push(r),
            Err(e) => {
                let f = Failure::from(e);
                // usage errors such as a bad tolerance apply to every criterion
                if f.code == EXIT_USAGE {
                    return Err(f);
                }
                failures.push(Failure {
                    code: f.code,
                    message: format!("{c}: {}", f.message),
                });
            }
        }
    }
    // with 'all', criteria that cannot bracket a threshold are skipped
    if results.is_empty() {
        let code = failures[0].code;
        let message = failures.into_iter().map(|f| f.message).collect::<Vec<_>>().join("; ");
        return Err(Failure { code, message });
    }
    for f in &failures {
        eprintln!("skipped {}", f.message);
    }
    Ok(thresholds_out(&results, args.format))
}

fn thresholds_out(results: &[ThresholdResult], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(results).expect("results serialize") + "\n",
        Format::Csv => {
            let mut s = String::from("family,scenario,criterion,p_critical,tolerance\n");
            for r in results {
                let _ = writeln!(
                    s,
                    "{},{},{},{:.9},{:e}",
                    csv_field(&r.family),
                    r.scenario,
                    r.criterion,
                    r.p_critical,
                    r.tolerance
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in results {
                let _ = writeln!(
                    s,
                    "{:<10} {:<18} {:<10} p_critical = {:.6} (± {:e}, bracket [{:.9}, {:.9}])",
                    r.family,
                    r.scenario.to_string(),
                    r.criterion.as_str(),
                    r.p_critical,
                    r.tolerance,
                    r.p_low,
                    r.p_high
                );
            }
            s
        }
    }
}

fn tables(args: &TablesArgs) -> Result<String, Failure> {
    let results = reproduce_tables(args.tol, true)?;
    let columns = [
        Scenario::A_TO_BC_STEERING,
        Scenario::A_TO_BC_GENUINE,
        Scenario::AB_TO_C_STEERING,
    ];
    let rows: Vec<(String, Vec<f64>)> = ["ghz", "w"]
        .iter()
        .map(|fam| {
            let values = columns
                .iter()
                .map(|&col| {
                    results
                        .iter()
                        .find(|r| r.family == *fam && r.scenario == col)
                        .map(|r| r.p_critical)
                        .expect("every table cell is computed")
                })
                .collect();
            (fam.to_string(), values)
        })
        .collect();
    Ok(match args.format {
        Format::Json => serde_json::to_string_pretty(&results).expect("results serialize") + "\n",
        Format::Csv => {
            let mut s = String::from("family");
            for c in columns {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
            for (fam, values) in &rows {
                s.push_str(fam);
                for v in values {
                    let _ = write!(s, ",{v:.3}");
                }
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let mut s = format!("{:<8}", "family");
            for c in columns {
                let _ = write!(s, " {:>18}", c.to_string());
            }
            s.push('\n');
            for (fam, values) in &rows {
                let _ = write!(s, "{fam:<8}");
                for v in values {
                    let _ = write!(s, " {v:>18.3}");
                }
                s.push('\n');
            }
            s.push_str("criteria:");
            for (fam, scenario, criterion) in TABLE_CELLS {
                let fam = fam.family();
                let _ = write!(s, " {}/{scenario}={criterion}", fam.label());
            }
            s.push('\n');
            s
        }
    })
}

fn validate(args: &ValidateArgs) -> Result<String, Failure> {
    let rho = load(&args.state)?;
    let label = rho.label().map(str::to_owned).unwrap_or_else(|| file_label(&args.state));
    Ok(match args.format {
        Format::Json => {
            serde_json::to_string_pretty(&serde_json::json!({ "state": label, "valid": true })).expect("json")
                + "\n"
        }
        Format::Csv => format!("state,valid\n{},true\n", csv_field(&label)),
        Format::Text => format!("{label}: valid density matrix\n"),
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Threshold(a) => threshold_cmd(a),
        Command::Tables(a) => tables(a),
        Command::Validate(a) => validate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
