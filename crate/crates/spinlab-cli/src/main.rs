//! Command-line front end: run the full audit, ad-hoc bracket calculations,
//! precession simulations, the oscillator spectrum solve, and the exclusion
//! derivation.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 input or parse error, 3 semantic
//! error (undefined names, invalid parameter combinations), 4 numerical
//! failure (divergence, non-convergence, boundary validation).

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinlab::algebra::{anti_bracket, poisson_bracket, PhasePolynomial};
use spinlab::audit::{run_audit, AuditOptions};
use spinlab::config::{parse_run_config, RunConfig};
use spinlab::dynamics::{self, closed_form_precession, integrate_flow, DynamicsError};
use spinlab::operator::{exclusion_singlet, LadderSource};
use spinlab::parser::{self, canonical_text, ParseErrorKind};
use spinlab::spectrum::{numeric_spectrum, SpectrumError};
use spinlab::spin::SpinSet;
use spinlab::CanonicalVariable;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spinlab",
    version,
    about = "Exact spin algebra audit, precession dynamics, and the internal-energy spectrum",
    long_about = "Builds the classical spin functions on the planar phase space, verifies \
                  every algebraic identity exactly, simulates the precession, solves the \
                  internal-energy eigenproblem, and derives the exclusion singlet.\n\n\
                  Expressions use `k` for the structure scale (the one symbol allowed \
                  negative exponents), `i` for the imaginary unit, and variables x, y, px, \
                  py with an optional particle index (x2, py3, ...; index defaults to 1).\n\n\
                  Defaults assume the unit system charge = mass = light_speed = 1 with \
                  field_b3 = 1 and lande_g = 2, so the precession rate omega1 is 1; the \
                  spectrum solve defaults to mass = omega = hbar = 1, half_width 8 and a \
                  128-point grid. Override any of these in the --config file."
)]
struct Cli {
    /// Config file (INI-style sections [physical], [simulate], [spectrum], [audit]).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Overrides the structure-scale value from the config.
    #[arg(
        long,
        global = true,
        value_name = "VALUE",
        allow_negative_numbers = true
    )]
    kappa: Option<f64>,

    /// Output path; stdout when omitted (simulate summaries move to stderr
    /// while the CSV occupies stdout).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format where a command supports more than one.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity check and write the claim-by-claim report.
    Audit,
    /// Compute a bracket of two expressions in the scope of a definitions file.
    Bracket(BracketArgs),
    /// Integrate the precession flow and compare against the closed form.
    Simulate(SimulateArgs),
    /// Solve the oscillator eigenproblem for the lowest levels.
    Spectrum,
    /// Derive the exchange-antisymmetric singlet under both ladder sources.
    Exclusion,
}

#[derive(Args)]
struct BracketArgs {
    /// Expression file with `name := expression` lines.
    expr_file: PathBuf,
    /// Left-hand expression (may reference names from the file).
    lhs: String,
    /// Right-hand expression.
    rhs: String,
    /// Which bracket to apply.
    #[arg(long, value_enum, default_value_t = BracketMode::Poisson)]
    mode: BracketMode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BracketMode {
    Poisson,
    Anti,
}

#[derive(Args)]
struct SimulateArgs {
    /// Simulation end time; overrides the config.
    #[arg(long)]
    t_end: Option<f64>,
    /// Integration step; overrides the config.
    #[arg(long)]
    dt: Option<f64>,
}

enum CliError {
    Io(String),
    Input(String),
    Semantic(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Input(m) | CliError::Semantic(m) | CliError::Numeric(m) => {
                m
            }
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::InvalidConfig(_) => CliError::Semantic(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Diverged { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Semantic(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinlab: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = load_config(cli.config.as_deref())?;
    if let Some(kappa) = cli.kappa {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(CliError::Semantic(format!(
                "--kappa must be positive and finite, got {kappa}"
            )));
        }
        config.physical.kappa_value = kappa;
    }

    match cli.command {
        Command::Audit => cmd_audit(&config, cli.format, cli.out.as_deref()),
        Command::Bracket(args) => cmd_bracket(&args, cli.out.as_deref()),
        Command::Simulate(args) => cmd_simulate(&config, &args, cli.out.as_deref()),
        Command::Spectrum => cmd_spectrum(&config, cli.format, cli.out.as_deref()),
        Command::Exclusion => cmd_exclusion(cli.out.as_deref()),
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_run_config(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn cmd_audit(
    config: &RunConfig,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let report = run_audit(&AuditOptions::from(config))?;
    let rendered = match format.unwrap_or(Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Markdown => report.to_markdown(),
        Format::Csv => {
            return Err(CliError::Input(
                "audit supports --format json or markdown".into(),
            ))
        }
    };
    write_output(out, &rendered)
}

fn cmd_bracket(args: &BracketArgs, out: Option<&Path>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.expr_file)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.expr_file.display())))?;
    let defs = parser::parse_definitions(&text).map_err(|e| {
        if e.is_undefined_name() {
            CliError::Semantic(format!("{}: {e}", args.expr_file.display()))
        } else {
            CliError::Input(format!("{}: {e}", args.expr_file.display()))
        }
    })?;
    let parse_side = |label: &str, src: &str| -> Result<PhasePolynomial, CliError> {
        parser::parse_with_env(src, defs.env()).map_err(|e| {
            let message = format!("{label} expression: {e}");
            match e.kind {
                ParseErrorKind::UndefinedName(_) => CliError::Semantic(message),
                _ => CliError::Input(message),
            }
        })
    };
    let lhs = parse_side("left", &args.lhs)?;
    let rhs = parse_side("right", &args.rhs)?;
    let result = match args.mode {
        BracketMode::Poisson => poisson_bracket(&lhs, &rhs),
        BracketMode::Anti => anti_bracket(&lhs, &rhs),
    };
    write_output(out, &(canonical_text(&result) + "\n"))
}

fn cmd_simulate(
    config: &RunConfig,
    args: &SimulateArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    config.physical.validate()?;
    let dt = args.dt.unwrap_or(config.simulate.dt);
    let t_end = args.t_end.unwrap_or(config.simulate.t_end);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Semantic(format!(
            "dt must be positive and finite, got {dt}"
        )));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(CliError::Semantic(format!(
            "t_end must be nonnegative and finite, got {t_end}"
        )));
    }
    let steps = (t_end / dt).round() as usize;

    let set = SpinSet::new(1);
    let h = dynamics::hamiltonian(&config.physical, &set);
    let initial = BTreeMap::from([
        (CanonicalVariable::x(1), config.simulate.x),
        (CanonicalVariable::y(1), config.simulate.y),
        (CanonicalVariable::px(1), config.simulate.px),
        (CanonicalVariable::py(1), config.simulate.py),
    ]);
    let trajectory = integrate_flow(&h, &initial, dt, steps, &set, config.physical.kappa_value)?;

    // Summary: worst deviation from the closed form and conservation drift.
    let omega1 = config.physical.omega1();
    let [s1_0, s2_0, s3_0, s0_0] = trajectory.s_values[0];
    let scale = 1.0f64.max((s1_0 * s1_0 + s2_0 * s2_0 + s3_0 * s3_0).sqrt());
    let mut deviation = 0.0f64;
    let mut drift3 = 0.0f64;
    let mut drift0 = 0.0f64;
    for (idx, t) in trajectory.times.iter().enumerate() {
        let (c1, c2, c3) = closed_form_precession(s1_0, s2_0, s3_0, omega1, *t);
        let [n1, n2, n3, n0] = trajectory.s_values[idx];
        deviation = deviation
            .max((n1 - c1).abs())
            .max((n2 - c2).abs())
            .max((n3 - c3).abs());
        drift3 = drift3.max((n3 - s3_0).abs());
        drift0 = drift0.max((n0 - s0_0).abs());
    }
    let summary = format!(
        "steps={} dt={} omega1={} max_closed_form_deviation={:.3e} rel={:.3e} \
         s3_drift={:.3e} s0_drift={:.3e}",
        steps,
        dt,
        omega1,
        deviation,
        deviation / scale,
        drift3 / 1.0f64.max(s3_0.abs()),
        drift0 / 1.0f64.max(s0_0.abs()),
    );

    let mut csv = Vec::new();
    trajectory
        .write_csv(1, &mut csv)
        .map_err(|e| CliError::Io(e.to_string()))?;
    let csv = String::from_utf8(csv).expect("csv is utf-8");

    match out {
        Some(path) => {
            std::fs::write(path, csv)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            println!("{summary}");
        }
        None => {
            print!("{csv}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_spectrum(
    config: &RunConfig,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let result = numeric_spectrum(&config.spectrum)?;
    let rendered = match format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&result).expect("spectrum serializes") + "\n",
        Format::Csv => {
            let mut buffer = Vec::new();
            result
                .write_csv(&mut buffer)
                .map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(buffer).expect("csv is utf-8")
        }
        Format::Markdown => {
            return Err(CliError::Input(
                "spectrum supports --format json or csv".into(),
            ))
        }
    };
    write_output(out, &rendered)
}

fn cmd_exclusion(out: Option<&Path>) -> Result<(), CliError> {
    let mut entries = Vec::new();
    for source in [LadderSource::FromSpinFunctions, LadderSource::PaperEq24] {
        let outcome = exclusion_singlet(source)
            .map_err(|e| CliError::Numeric(format!("exclusion derivation failed: {e}")))?;
        let unit: Vec<f64> = outcome.singlet.unit().iter().map(|z| z.re).collect();
        let partner_unit: Vec<f64> = outcome
            .rejected_partner
            .unit()
            .iter()
            .map(|z| z.re)
            .collect();
        entries.push(serde_json::json!({
            "ladderSource": source,
            "jointDimension": outcome.joint_dimension,
            "totalAxisOperator": outcome.total_s3.to_json(),
            "singlet": {
                "exact": outcome.singlet.to_text(),
                "unit": unit,
            },
            "rejected": {
                "exact": outcome.rejected_partner.to_text(),
                "unit": partner_unit,
                "reason": outcome.rejected_reason,
            },
        }));
    }
    let body = serde_json::to_string_pretty(&serde_json::json!({
        "schemaVersion": spinlab::audit::SCHEMA_VERSION,
        "derivations": entries,
    }))
    .expect("exclusion serializes");
    write_output(out, &(body + "\n"))
}
