//! Command-line interface. Every command is a thin wrapper over the
//! library: validate flags, call the corresponding function, emit CSV or
//! JSON deterministically.
//!
//! Exit codes: 0 success, 1 oracle falsification, 2 validation error,
//! 3 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use micromacro::crosscheck::cross_check;
use micromacro::domain::{
    AmplifierParams, Channel, MeasurementSettings, PhasePoint, PolarizationAngle,
};
use micromacro::fock_oracle::ORACLE_GAIN_CEILING;
use micromacro::inequality::{chsh_parameter, optimal_settings, witness_parameter, TestResult};
use micromacro::output::{contour_csv, fig3_csv, format_f64, json_document, sweep_csv};
use micromacro::phase_space::correlator_injected;
use micromacro::sweep::{evaluate_grid, extract_contour, figure3_dataset, SweepGrid, TestKind};

const EXIT_FALSIFIED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "micromacro",
    version,
    about = "Hybrid micro-macro entanglement tests: CHSH parameter, loss-corrected witness, \
             phase-space sweeps, and Fock-space cross-checks"
)]
struct Cli {
    /// Optional JSON file supplying defaults for g, eta, p, tol and format;
    /// explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Interpret angle flags as degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,

    /// Output file; stdout when omitted.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the qubit-CV correlator at one phase-space point.
    Correlator(CorrelatorArgs),
    /// Evaluate the CHSH-based parameter B (optimal settings by default).
    Chsh(TestArgs),
    /// Evaluate the loss-corrected witness W (optimal settings by default).
    Witness(TestArgs),
    /// Evaluate a rectangular (eta, g) grid of test quantities.
    Sweep(SweepArgs),
    /// Extract the parameter = 2 threshold contour over an (eta, g) grid.
    Contour(ContourArgs),
    /// CHSH decay against the mean number of lost photons, per gain.
    Fig3(Fig3Args),
    /// Compare the closed forms against the Fock-space oracle.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct CorrelatorArgs {
    /// Nonlinear gain g (>= 0).
    #[arg(long)]
    g: Option<f64>,
    /// Detection efficiency eta ((0, 1]).
    #[arg(long)]
    eta: Option<f64>,
    /// Injection efficiency p ([0, 1]).
    #[arg(long)]
    p: Option<f64>,
    /// Quadrature X of the measured point (finite).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x: f64,
    /// Quadrature P of the measured point (finite).
    #[arg(long = "p-quad", default_value_t = 0.0, allow_hyphen_values = true)]
    p_quad: f64,
    /// Multiphoton-mode polarization angle chi (radians unless --degrees).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    chi: f64,
    /// Single-photon-mode polarization angle phi (radians unless --degrees).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
}

#[derive(Args)]
struct TestArgs {
    /// Nonlinear gain g (>= 0).
    #[arg(long)]
    g: Option<f64>,
    /// Detection efficiency eta ((0, 1]).
    #[arg(long)]
    eta: Option<f64>,
    /// Injection efficiency p ([0, 1]).
    #[arg(long)]
    p: Option<f64>,
    /// Override the canonical chi (radians unless --degrees).
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<f64>,
    /// Override the canonical chi' (radians unless --degrees).
    #[arg(long = "chi-prime", allow_hyphen_values = true)]
    chi_prime: Option<f64>,
    /// Override the canonical phi (radians unless --degrees).
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Override the canonical phi' (radians unless --degrees).
    #[arg(long = "phi-prime", allow_hyphen_values = true)]
    phi_prime: Option<f64>,
    /// Override X of the unprimed point (finite; default origin).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Override P of the unprimed point (finite; default origin).
    #[arg(long = "p-quad", allow_hyphen_values = true)]
    p_quad: Option<f64>,
    /// Override X of the primed point (finite; default origin).
    #[arg(long = "x-prime", allow_hyphen_values = true)]
    x_prime: Option<f64>,
    /// Override P of the primed point (finite; default origin).
    #[arg(long = "p-quad-prime", allow_hyphen_values = true)]
    p_quad_prime: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Lower end of the eta axis ((0, 1]).
    #[arg(long, default_value_t = 0.5)]
    eta_min: f64,
    /// Upper end of the eta axis ((0, 1]).
    #[arg(long, default_value_t = 1.0)]
    eta_max: f64,
    /// Number of eta samples (>= 2).
    #[arg(long, default_value_t = 26)]
    eta_steps: usize,
    /// Lower end of the gain axis (>= 0).
    #[arg(long, default_value_t = 0.0)]
    g_min: f64,
    /// Upper end of the gain axis (>= 0).
    #[arg(long, default_value_t = 2.0)]
    g_max: f64,
    /// Number of gain samples (>= 2).
    #[arg(long, default_value_t = 21)]
    g_steps: usize,
    /// Injection efficiency p ([0, 1]).
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct ContourArgs {
    #[command(flatten)]
    grid: SweepArgs,
    /// Which test boundary to trace.
    #[arg(long, value_enum)]
    test: ContourKind,
    /// Bisection tolerance in g (> 0).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ContourKind {
    Chsh,
    Witness,
}

#[derive(Args)]
struct Fig3Args {
    /// Comma-separated gains, e.g. 0.1,0.5,1.0,1.5 (each >= 0).
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.5, 1.0, 1.5])]
    gains: Vec<f64>,
    /// Lower end of the eta sampling ((0, 1]).
    #[arg(long, default_value_t = 0.4)]
    eta_min: f64,
    /// Upper end of the eta sampling ((0, 1]).
    #[arg(long, default_value_t = 1.0)]
    eta_max: f64,
    /// Number of eta samples (>= 2).
    #[arg(long, default_value_t = 121)]
    eta_steps: usize,
    /// Injection efficiency p ([0, 1]).
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct OracleArgs {
    /// Nonlinear gain g (>= 0, at most the oracle ceiling).
    #[arg(long)]
    g: Option<f64>,
    /// Detection efficiency eta ((0, 1]).
    #[arg(long)]
    eta: Option<f64>,
    /// Falsification tolerance (> 0).
    #[arg(long)]
    tol: Option<f64>,
    /// Number of randomized (point, chi, phi) tuples (>= 1).
    #[arg(long, default_value_t = 10)]
    tuples: usize,
    /// RNG seed for the tuple draw.
    #[arg(long, default_value_t = 20260810)]
    seed: u64,
}

/// Defaults loadable from a JSON config file; explicit flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDefaults {
    g: Option<f64>,
    eta: Option<f64>,
    p: Option<f64>,
    tol: Option<f64>,
    format: Option<String>,
}

struct Effective {
    defaults: FileDefaults,
    degrees: bool,
}

impl Effective {
    fn g(&self, flag: Option<f64>) -> f64 {
        flag.or(self.defaults.g).unwrap_or(0.0)
    }
    fn eta(&self, flag: Option<f64>) -> f64 {
        flag.or(self.defaults.eta).unwrap_or(1.0)
    }
    fn p(&self, flag: Option<f64>) -> f64 {
        flag.or(self.defaults.p).unwrap_or(1.0)
    }
    fn tol(&self, flag: Option<f64>) -> f64 {
        flag.or(self.defaults.tol).unwrap_or(1e-9)
    }
    fn angle(&self, value: f64) -> f64 {
        if self.degrees {
            value.to_radians()
        } else {
            value
        }
    }
    fn format(&self, flag: Option<OutputFormat>) -> OutputFormat {
        flag.unwrap_or(match self.defaults.format.as_deref() {
            Some("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        })
    }
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(String),
    Falsified,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
            CliError::Falsified => EXIT_FALSIFIED,
        }
    }
}

fn validation<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

#[derive(Serialize)]
struct CorrelatorRecord {
    x: f64,
    p_quad: f64,
    chi: f64,
    phi: f64,
    g: f64,
    eta: f64,
    p: f64,
    value: f64,
}

#[derive(Serialize)]
struct TestRecord {
    test: &'static str,
    g: f64,
    eta: f64,
    p: f64,
    chi: f64,
    chi_prime: f64,
    phi: f64,
    phi_prime: f64,
    x: f64,
    p_quad: f64,
    x_prime: f64,
    p_quad_prime: f64,
    value: f64,
    violated: bool,
    margin: f64,
}

fn run_correlator(
    args: &CorrelatorArgs,
    eff: &Effective,
    format: OutputFormat,
) -> Result<String, CliError> {
    let g = eff.g(args.g);
    let eta = eff.eta(args.eta);
    let p = eff.p(args.p);
    let params = AmplifierParams::new(g, p).map_err(validation)?;
    let channel = Channel::new(eta).map_err(validation)?;
    let point = PhasePoint::new(args.x, args.p_quad).map_err(validation)?;
    let chi = PolarizationAngle::new(eff.angle(args.chi)).map_err(validation)?;
    let phi = PolarizationAngle::new(eff.angle(args.phi)).map_err(validation)?;
    let value = correlator_injected(point, chi, phi, &params, &channel).value();
    let record = CorrelatorRecord {
        x: args.x,
        p_quad: args.p_quad,
        chi: chi.radians(),
        phi: phi.radians(),
        g,
        eta,
        p,
        value,
    };
    Ok(match format {
        OutputFormat::Json => json_document(&record, &[value]),
        OutputFormat::Csv => format!(
            "x,p_quad,chi,phi,g,eta,p,value\n{},{},{},{},{},{},{},{}\n",
            format_f64(record.x),
            format_f64(record.p_quad),
            format_f64(record.chi),
            format_f64(record.phi),
            format_f64(record.g),
            format_f64(record.eta),
            format_f64(record.p),
            format_f64(record.value),
        ),
    })
}

fn build_settings(args: &TestArgs, eff: &Effective) -> Result<MeasurementSettings, CliError> {
    let mut s = optimal_settings();
    let angle = |v: f64| PolarizationAngle::new(eff.angle(v)).map_err(validation);
    if let Some(v) = args.chi {
        s.chi = angle(v)?;
    }
    if let Some(v) = args.chi_prime {
        s.chi_prime = angle(v)?;
    }
    if let Some(v) = args.phi {
        s.phi = angle(v)?;
    }
    if let Some(v) = args.phi_prime {
        s.phi_prime = angle(v)?;
    }
    if args.x.is_some() || args.p_quad.is_some() {
        s.alpha = PhasePoint::new(args.x.unwrap_or(0.0), args.p_quad.unwrap_or(0.0))
            .map_err(validation)?;
    }
    if args.x_prime.is_some() || args.p_quad_prime.is_some() {
        s.alpha_prime = PhasePoint::new(
            args.x_prime.unwrap_or(0.0),
            args.p_quad_prime.unwrap_or(0.0),
        )
        .map_err(validation)?;
    }
    Ok(s)
}

fn run_test(
    args: &TestArgs,
    eff: &Effective,
    format: OutputFormat,
    witness: bool,
) -> Result<String, CliError> {
    let g = eff.g(args.g);
    let eta = eff.eta(args.eta);
    let p = eff.p(args.p);
    let params = AmplifierParams::new(g, p).map_err(validation)?;
    let channel = Channel::new(eta).map_err(validation)?;
    let settings = build_settings(args, eff)?;
    let result: TestResult = if witness {
        witness_parameter(&settings, &params, &channel)
    } else {
        chsh_parameter(&settings, &params, &channel)
    };
    let record = TestRecord {
        test: if witness { "witness" } else { "chsh" },
        g,
        eta,
        p,
        chi: settings.chi.radians(),
        chi_prime: settings.chi_prime.radians(),
        phi: settings.phi.radians(),
        phi_prime: settings.phi_prime.radians(),
        x: settings.alpha.x(),
        p_quad: settings.alpha.p(),
        x_prime: settings.alpha_prime.x(),
        p_quad_prime: settings.alpha_prime.p(),
        value: result.value,
        violated: result.violated,
        margin: result.margin,
    };
    Ok(match format {
        OutputFormat::Json => json_document(&record, &[result.value]),
        OutputFormat::Csv => format!(
            "test,g,eta,p,chi,chi_prime,phi,phi_prime,x,p_quad,x_prime,p_quad_prime,value,violated,margin\n\
             {},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            record.test,
            format_f64(record.g),
            format_f64(record.eta),
            format_f64(record.p),
            format_f64(record.chi),
            format_f64(record.chi_prime),
            format_f64(record.phi),
            format_f64(record.phi_prime),
            format_f64(record.x),
            format_f64(record.p_quad),
            format_f64(record.x_prime),
            format_f64(record.p_quad_prime),
            format_f64(record.value),
            record.violated,
            format_f64(record.margin),
        ),
    })
}

fn build_grid(args: &SweepArgs, eff: &Effective) -> Result<SweepGrid, CliError> {
    SweepGrid::linspace(
        (args.eta_min, args.eta_max, args.eta_steps),
        (args.g_min, args.g_max, args.g_steps),
        eff.p(args.p),
    )
    .map_err(validation)
}

#[derive(Serialize)]
struct GridEcho {
    eta_min: f64,
    eta_max: f64,
    eta_steps: usize,
    g_min: f64,
    g_max: f64,
    g_steps: usize,
    p: f64,
}

fn grid_echo(args: &SweepArgs, eff: &Effective) -> GridEcho {
    GridEcho {
        eta_min: args.eta_min,
        eta_max: args.eta_max,
        eta_steps: args.eta_steps,
        g_min: args.g_min,
        g_max: args.g_max,
        g_steps: args.g_steps,
        p: eff.p(args.p),
    }
}

fn run_sweep(args: &SweepArgs, eff: &Effective, format: OutputFormat) -> Result<String, CliError> {
    let grid = build_grid(args, eff)?;
    let records = evaluate_grid(&grid);
    Ok(match format {
        OutputFormat::Csv => sweep_csv(&records),
        OutputFormat::Json => json_document(&grid_echo(args, eff), &records),
    })
}

fn run_contour(
    args: &ContourArgs,
    eff: &Effective,
    format: OutputFormat,
) -> Result<String, CliError> {
    let grid = build_grid(&args.grid, eff)?;
    let tol = eff.tol(args.tol);
    if tol <= 0.0 || !tol.is_finite() {
        return Err(CliError::Validation(format!(
            "tol: bisection tolerance must be positive, got {tol}"
        )));
    }
    let kind = match args.test {
        ContourKind::Chsh => TestKind::Chsh,
        ContourKind::Witness => TestKind::Witness,
    };
    let contour = extract_contour(&grid, kind, tol);
    if contour.is_empty() {
        eprintln!("no crossing: the parameter never reaches 2 on this grid");
    }
    Ok(match format {
        OutputFormat::Csv => contour_csv(&contour),
        OutputFormat::Json => json_document(&grid_echo(&args.grid, eff), &contour.vertices),
    })
}

#[derive(Serialize)]
struct Fig3Echo {
    gains: Vec<f64>,
    eta_min: f64,
    eta_max: f64,
    eta_steps: usize,
    p: f64,
}

fn run_fig3(args: &Fig3Args, eff: &Effective, format: OutputFormat) -> Result<String, CliError> {
    if args.eta_steps < 2 {
        return Err(CliError::Validation(
            "eta_steps: need at least two samples".into(),
        ));
    }
    let etas: Vec<f64> = (0..args.eta_steps)
        .map(|i| {
            args.eta_min + (args.eta_max - args.eta_min) * i as f64 / (args.eta_steps - 1) as f64
        })
        .collect();
    let p = eff.p(args.p);
    let rows = figure3_dataset(&args.gains, &etas, p).map_err(validation)?;
    Ok(match format {
        OutputFormat::Csv => fig3_csv(&rows),
        OutputFormat::Json => json_document(
            &Fig3Echo {
                gains: args.gains.clone(),
                eta_min: args.eta_min,
                eta_max: args.eta_max,
                eta_steps: args.eta_steps,
                p,
            },
            &rows,
        ),
    })
}

fn run_oracle_check(
    args: &OracleArgs,
    eff: &Effective,
    format: OutputFormat,
    output: &Option<PathBuf>,
) -> Result<(), CliError> {
    let g = eff.g(args.g);
    let eta = eff.eta(args.eta);
    let tol = args.tol.or(eff.defaults.tol).unwrap_or(1e-6);
    if g > ORACLE_GAIN_CEILING {
        return Err(CliError::Validation(format!(
            "g: above oracle ceiling {ORACLE_GAIN_CEILING}, got {g}"
        )));
    }
    if args.tuples == 0 {
        return Err(CliError::Validation("tuples: need at least one".into()));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(CliError::Validation(format!(
            "tol: must be positive, got {tol}"
        )));
    }
    let params = AmplifierParams::new(g, 1.0).map_err(validation)?;
    let channel = Channel::new(eta).map_err(validation)?;
    let report = cross_check(&params, &channel, args.tuples, args.seed)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let text = match format {
        OutputFormat::Json => json_document(&report, &report.quantities),
        OutputFormat::Csv => {
            let mut t = String::from("quantity,max_abs_discrepancy,samples\n");
            for q in &report.quantities {
                t.push_str(&format!(
                    "{},{},{}\n",
                    q.quantity,
                    format_f64(q.max_abs_discrepancy),
                    q.samples
                ));
            }
            t
        }
    };
    emit(output, &text)?;
    if report.passes(tol) {
        Ok(())
    } else {
        eprintln!(
            "falsified: max discrepancy {} exceeds tolerance {}",
            format_f64(report.max_discrepancy()),
            format_f64(tol)
        );
        Err(CliError::Falsified)
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let defaults = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<FileDefaults>(&text)
                .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?
        }
        None => FileDefaults::default(),
    };
    let eff = Effective {
        defaults,
        degrees: cli.degrees,
    };
    let format = eff.format(cli.format);
    match &cli.command {
        Command::Correlator(args) => emit(&cli.output, &run_correlator(args, &eff, format)?),
        Command::Chsh(args) => emit(&cli.output, &run_test(args, &eff, format, false)?),
        Command::Witness(args) => emit(&cli.output, &run_test(args, &eff, format, true)?),
        Command::Sweep(args) => emit(&cli.output, &run_sweep(args, &eff, format)?),
        Command::Contour(args) => emit(&cli.output, &run_contour(args, &eff, format)?),
        Command::Fig3(args) => emit(&cli.output, &run_fig3(args, &eff, format)?),
        Command::OracleCheck(args) => run_oracle_check(args, &eff, format, &cli.output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Validation(msg) => eprintln!("error: {msg}"),
                CliError::Io(msg) => eprintln!("i/o error: {msg}"),
                CliError::Falsified => {}
            }
            ExitCode::from(e.code())
        }
    }
}
