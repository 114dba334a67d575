//! Command-line front end.
//!
//! Exit codes: `0` success, `2` invalid arguments or domain, `3` solver
//! non-convergence or enumeration cap.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::measure::{
    check_compatibility_resolved, classify_boundedness, default_field, MeasureTable,
};
use crate::padic::{
    eval_expr, hensel_lift, parse_rational, PadicError, PadicPoly, Prime, DEFAULT_PRECISION,
};
use crate::solver::{
    analyze_quartic_branch, certify, solve_ti_from, solve_ti_unique, solve_z0_equal_1_branch,
    BoundaryField, FieldVector, GibbsCertificate,
};
use crate::tree::{ModelParams, Region, SpinConfiguration, TreeVolume, DEFAULT_ENUMERATION_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Highest precision used when a report needs more digits than requested.
const MAX_RETRY_PRECISION: u32 = 1024;

#[derive(Debug, Parser)]
#[command(
    name = "padic-sos",
    version,
    about = "p-adic SOS model on a Cayley tree"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Relative precision in base-p digits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Largest number of configurations enumerated in one sum.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// TOML file with default values for the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Raw p-adic calculation.
    Padic {
        #[command(subcommand)]
        command: PadicCommand,
    },
    /// Solve the boundary-law equations.
    Solve {
        #[command(subcommand)]
        command: SolveCommand,
    },
    /// Certify uniqueness or a phase transition; θ may be a comma list.
    Certify(ModelArgs),
    /// Finite-volume measures.
    Measure {
        #[command(subcommand)]
        command: MeasureCommand,
    },
    /// Boundedness classification.
    Classify {
        #[command(subcommand)]
        command: ClassifyCommand,
    },
}

#[derive(Debug, Subcommand)]
enum PadicCommand {
    /// Evaluate an expression with + - * / ^, sqrt, exp and log.
    Eval {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Lift a root of a polynomial from an approximation.
    Hensel {
        #[arg(long)]
        p: Option<u64>,
        /// Coefficients from the constant term up, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        a0: String,
        #[arg(long, default_value_t = 0)]
        index: u32,
    },
}

#[derive(Debug, Subcommand)]
enum SolveCommand {
    /// Contraction solver for p ∤ m + 1.
    Ti {
        #[command(flatten)]
        model: ModelArgs,
        /// Free start components z_0..z_{m-1}, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
    },
    /// Both branches of the three-state model (m = 2).
    ThreeState {
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Debug, Subcommand)]
enum MeasureCommand {
    /// μ^(n) on one configuration, or the full table.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Configuration on V_n, comma separated, breadth-first.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Brute-force compatibility between levels n-1 and n.
    CheckCompat {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        measure: MeasureArgs,
    },
}

#[derive(Debug, Subcommand)]
enum ClassifyCommand {
    Boundedness {
        #[command(flatten)]
        model: ModelArgs,
        /// Free field components; defaults to a solved field.
        #[arg(long, allow_hyphen_values = true)]
        field: Option<String>,
        /// Levels to measure, comma separated.
        #[arg(long)]
        levels: Option<String>,
    },
}

#[derive(Debug, Clone, Args)]
struct ModelArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    /// θ = exp_p(J) as an exact rational in E_p.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "coupling")]
    theta: Option<String>,
    /// Coupling J as an exact rational in the exp_p domain.
    #[arg(long, allow_hyphen_values = true)]
    coupling: Option<String>,
}

#[derive(Debug, Clone, Args)]
struct MeasureArgs {
    /// Level n.
    #[arg(long)]
    level: Option<u32>,
    /// Free field components z_0..z_{m-1}; defaults to a solved field.
    #[arg(long, allow_hyphen_values = true)]
    field: Option<String>,
}

/// Values readable from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    p: Option<u64>,
    k: Option<u32>,
    m: Option<u32>,
    theta: Option<String>,
    coupling: Option<String>,
    precision: Option<u32>,
    level: Option<u32>,
    format: Option<Format>,
    cap: Option<u64>,
    output: Option<PathBuf>,
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone)]
struct Settings {
    format: Format,
    precision: u32,
    cap: u64,
    output: Option<PathBuf>,
    config: ConfigFile,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_limit() {
            Failure::Limit(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Self {
        Error::from(e).into()
    }
}

impl From<crate::tree::TreeError> for Failure {
    fn from(e: crate::tree::TreeError) -> Self {
        Error::from(e).into()
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Report {
    json: Value,
    text: String,
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// exit code. Reports go to `out` unless `--output` names a file; errors go
/// to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli) {
        Ok((settings, report)) => match emit(&settings, &report, out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_INVALID
            }
        },
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Limit(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_LIMIT
        }
    }
}

fn emit(settings: &Settings, report: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    let body = match settings.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => report.text.clone(),
    };
    match &settings.output {
        Some(path) => std::fs::write(path, body),
        None => out.write_all(body.as_bytes()),
    }
}

fn load_config(path: Option<&Path>) -> CliResult<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| Failure::Invalid(format!("bad config {}: {e}", path.display())))
}

fn execute(cli: Cli) -> CliResult<(Settings, Report)> {
    let config = load_config(cli.config.as_deref())?;
    let settings = Settings {
        format: cli.format.or(config.format).unwrap_or(Format::Json),
        precision: cli
            .precision
            .or(config.precision)
            .unwrap_or(DEFAULT_PRECISION),
        cap: cli.cap.or(config.cap).unwrap_or(DEFAULT_ENUMERATION_CAP),
        output: cli.output.clone().or(config.output.clone()),
        config,
    };
    if settings.precision == 0 {
        return Err(Failure::Invalid("precision must be at least 1".into()));
    }
    let report = match cli.command {
        Command::Padic { command } => padic_command(&settings, command)?,
        Command::Solve { command } => match command {
            SolveCommand::Ti { model, start } => solve_ti_command(&settings, &model, start)?,
            SolveCommand::ThreeState { model } => three_state_command(&settings, &model)?,
        },
        Command::Certify(model) => certify_command(&settings, &model)?,
        Command::Measure { command } => match command {
            MeasureCommand::Eval {
                model,
                measure,
                sigma,
            } => measure_eval_command(&settings, &model, &measure, sigma)?,
            MeasureCommand::CheckCompat { model, measure } => {
                check_compat_command(&settings, &model, &measure)?
            }
        },
        Command::Classify { command } => match command {
            ClassifyCommand::Boundedness {
                model,
                field,
                levels,
            } => boundedness_command(&settings, &model, field, levels)?,
        },
    };
    Ok((settings, report))
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| Failure::Invalid(format!("missing --{flag}")))
}

fn prime(value: Option<u64>, settings: &Settings) -> CliResult<Prime> {
    Ok(Prime::new(require(value.or(settings.config.p), "p")?)?)
}

fn rational(s: &str, what: &str) -> CliResult<BigRational> {
    parse_rational(s).map_err(|e| Failure::Invalid(format!("{what}: {e}")))
}

/// One parameter set per comma-separated θ (or J) value.
fn model_params(settings: &Settings, model: &ModelArgs) -> CliResult<Vec<ModelParams>> {
    let cfg = &settings.config;
    let p = prime(model.p, settings)?;
    let k = require(model.k.or(cfg.k), "k")?;
    let m = require(model.m.or(cfg.m), "m")?;
    let theta = model.theta.clone().or_else(|| cfg.theta.clone());
    let coupling = model.coupling.clone().or_else(|| cfg.coupling.clone());
    let n = settings.precision;
    match (theta, coupling) {
        (Some(t), None) => t
            .split(',')
            .map(|t| {
                Ok(ModelParams::from_theta_rational(
                    p,
                    k,
                    m,
                    &rational(t, "theta")?,
                    n,
                )?)
            })
            .collect(),
        (None, Some(j)) => j
            .split(',')
            .map(|j| {
                Ok(ModelParams::from_coupling_rational(
                    p,
                    k,
                    m,
                    &rational(j, "coupling")?,
                    n,
                )?)
            })
            .collect(),
        (Some(_), Some(_)) => Err(Failure::Invalid(
            "give exactly one of --theta and --coupling".into(),
        )),
        (None, None) => Err(Failure::Invalid("missing --theta or --coupling".into())),
    }
}

fn single_params(settings: &Settings, model: &ModelArgs) -> CliResult<ModelParams> {
    let mut all = model_params(settings, model)?;
    if all.len() != 1 {
        return Err(Failure::Invalid(
            "this command takes a single θ or J".into(),
        ));
    }
    Ok(all.remove(0))
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn params_json(params: &ModelParams) -> Value {
    json!({
        "p": params.p.get(),
        "k": params.k,
        "m": params.m,
        "theta": to_json(&params.theta),
        "coupling": to_json(&params.coupling),
        "precision": params.precision,
    })
}

fn padic_command(settings: &Settings, command: PadicCommand) -> CliResult<Report> {
    let n = settings.precision;
    match command {
        PadicCommand::Eval { p, expr } => {
            let p = prime(p, settings)?;
            let x = eval_expr(&expr, p, n)?;
            let flags = x.domain_flags();
            let text = format!(
                "{x}\nvaluation {}  precision {}  digits {:?}\n",
                x.valuation(),
                x.precision(),
                x.digits()
            );
            Ok(Report {
                json: json!({
                    "expr": expr,
                    "value": to_json(&x),
                    "display": x.to_string(),
                    "flags": to_json(&flags),
                }),
                text,
            })
        }
        PadicCommand::Hensel { p, poly, a0, index } => {
            let p = prime(p, settings)?;
            let coefficients = poly
                .split(',')
                .map(|c| eval_expr(c, p, n))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let f = PadicPoly::new(p, coefficients)?;
            let a0 = eval_expr(&a0, p, n)?;
            let root = hensel_lift(&f, &a0, index)?;
            let residual = f.eval(&root)?;
            Ok(Report {
                text: format!("root {root}\nf(root) = {residual}\n"),
                json: json!({
                    "root": to_json(&root),
                    "display": root.to_string(),
                    "residual": to_json(&residual),
                    "index": index,
                }),
            })
        }
    }
}

fn parse_free(s: &str, params: &ModelParams) -> Result<FieldVector, Error> {
    let free = s
        .split(',')
        .map(|c| eval_expr(c, params.p, params.precision))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if free.len() != params.m as usize {
        return Err(Error::InvalidField(format!(
            "expected {} free components z_0..z_{}, got {}",
            params.m,
            params.m - 1,
            free.len()
        )));
    }
    FieldVector::from_free(free)
}

fn field_text(z: &FieldVector) -> String {
    z.components()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("  z_{i} = {c}\n"))
        .collect()
}

fn solve_ti_command(
    settings: &Settings,
    model: &ModelArgs,
    start: Option<String>,
) -> CliResult<Report> {
    let params = single_params(settings, model)?;
    let sol = match start {
        Some(s) => solve_ti_from(&params, &parse_free(&s, &params)?)?,
        None => solve_ti_unique(&params)?,
    };
    Ok(Report {
        text: format!(
            "fixed point after {} iterations{}\n{}",
            sol.iterations,
            if sol.z.is_symmetric() {
                " (symmetric)"
            } else {
                ""
            },
            field_text(&sol.z)
        ),
        json: json!({
            "params": params_json(&params),
            "solution": to_json(&sol.z),
            "iterations": sol.iterations,
            "symmetric": sol.z.is_symmetric(),
        }),
    })
}

fn three_state_command(settings: &Settings, model: &ModelArgs) -> CliResult<Report> {
    let mut model = model.clone();
    if model.m.or(settings.config.m).is_some_and(|m| m != 2) {
        return Err(Failure::Invalid(
            "the three-state solver needs m = 2".into(),
        ));
    }
    model.m = Some(2);
    let params = single_params(settings, &model)?;
    let branch = solve_z0_equal_1_branch(&params)?;
    let quartic = if params.k == 2 && params.p.get() != 2 {
        Some(analyze_quartic_branch(&params)?)
    } else {
        None
    };
    let mut text = format!("z_0 = 1 branch: {} solution(s)\n", branch.solutions.len());
    for s in &branch.solutions {
        text.push_str(&field_text(&s.z));
    }
    if let Some(q) = &quartic {
        text.push_str(&format!(
            "z_0 != 1 branch: {} solution(s); sqrt(D) exists: {}\n",
            q.solutions.len(),
            q.d.exists
        ));
        for s in &q.solutions {
            text.push_str(&field_text(&s.z));
        }
    }
    Ok(Report {
        json: json!({
            "params": params_json(&params),
            "z0_equal_1": to_json(&branch),
            "z0_not_1": quartic.as_ref().map(to_json),
        }),
        text,
    })
}

fn certificate_text(c: &GibbsCertificate) -> String {
    let mut s = format!(
        "p = {}, k = {}, m = {}, theta = {}\nverdict: {}\nboundedness: {}\nsolutions: {}\n",
        c.p,
        c.k,
        c.m,
        c.theta,
        c.verdict,
        to_json(&c.boundedness).as_str().unwrap_or_default(),
        c.solutions.len()
    );
    for (i, sol) in c.solutions.iter().enumerate() {
        s.push_str(&format!("solution {}:\n", i + 1));
        s.push_str(&field_text(&sol.z));
    }
    for note in &c.notes {
        s.push_str(&format!("note: {note}\n"));
    }
    s
}

fn certify_command(settings: &Settings, model: &ModelArgs) -> CliResult<Report> {
    let all = model_params(settings, model)?;
    let results: Vec<Result<GibbsCertificate, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = all
            .iter()
            .map(|p| scope.spawn(move || certify(p)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("certification thread panicked"))
            .collect()
    });
    let certs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let text = certs
        .iter()
        .map(certificate_text)
        .collect::<Vec<_>>()
        .join("\n");
    let json = if certs.len() == 1 {
        to_json(&certs[0])
    } else {
        to_json(&certs)
    };
    Ok(Report { json, text })
}

/// Field at a given parameter precision: the supplied components, or a
/// solved field.
fn field_at(free: Option<&str>, params: &ModelParams) -> Result<(BoundaryField, String), Error> {
    match free {
        Some(s) => Ok((
            BoundaryField::translation_invariant(parse_free(s, params)?),
            "supplied".into(),
        )),
        None => default_field(params),
    }
}

fn parse_sigma(s: &str, volume: &TreeVolume) -> CliResult<SpinConfiguration> {
    let spins = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Failure::Invalid(format!("bad spin {t:?}: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if spins.len() != volume.len() {
        return Err(Failure::Invalid(format!(
            "configuration has {} spins, V_{} has {} vertices",
            spins.len(),
            volume.radius(),
            volume.len()
        )));
    }
    Ok(SpinConfiguration {
        radius: volume.radius(),
        region: Region::Ball,
        spins,
    })
}

fn level(settings: &Settings, measure: &MeasureArgs) -> CliResult<u32> {
    require(measure.level.or(settings.config.level), "level")
}

fn measure_eval_command(
    settings: &Settings,
    model: &ModelArgs,
    measure: &MeasureArgs,
    sigma: Option<String>,
) -> CliResult<Report> {
    let params = single_params(settings, model)?;
    let n = level(settings, measure)?;
    let volume = TreeVolume::new(params.k, n)?;
    let (field, source) = field_at(measure.field.as_deref(), &params)?;
    let table = MeasureTable::new(&field, &volume, &params, settings.cap)?;
    match sigma {
        Some(s) => {
            let sigma = parse_sigma(&s, &volume)?;
            let mu = table.get(&sigma)?;
            Ok(Report {
                text: format!("mu^({n}) = {mu}\nZ_{n} = {}\n", table.partition),
                json: json!({
                    "params": params_json(&params),
                    "level": n,
                    "field_source": source,
                    "sigma": sigma.spins,
                    "mu": to_json(mu),
                    "partition": to_json(&table.partition),
                }),
            })
        }
        None => Ok(Report {
            text: format!(
                "Z_{n} = {}\n{} configurations, valuations of mu in {:?}\n",
                table.partition,
                table.values.len(),
                table.valuation_range()
            ),
            json: json!({
                "params": params_json(&params),
                "level": n,
                "field_source": source,
                "table": to_json(&table),
            }),
        }),
    }
}

fn check_compat_command(
    settings: &Settings,
    model: &ModelArgs,
    measure: &MeasureArgs,
) -> CliResult<Report> {
    let params = single_params(settings, model)?;
    let n = level(settings, measure)?;
    let (_, source) = field_at(measure.field.as_deref(), &params)?;
    let free = measure.field.as_deref();
    let report =
        check_compatibility_resolved(&params, n, settings.cap, |p| Ok(field_at(free, p)?.0))?;
    Ok(Report {
        text: format!(
            "compatibility at n = {n}: {} (residual valuation {}, threshold {})\n",
            if report.passed { "pass" } else { "fail" },
            report.residual_valuation,
            report.threshold
        ),
        json: json!({
            "params": params_json(&params),
            "field_source": source,
            "report": to_json(&report),
        }),
    })
}

fn boundedness_command(
    settings: &Settings,
    model: &ModelArgs,
    field: Option<String>,
    levels: Option<String>,
) -> CliResult<Report> {
    let params = single_params(settings, model)?;
    let levels = match levels {
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Failure::Invalid(format!("bad level {t:?}: {e}")))
            })
            .collect::<CliResult<Vec<_>>>()?,
        None => vec![1, 2],
    };
    // Valuations do not depend on the working precision once Z_n is
    // resolved, so retry at higher precision when it vanishes.
    let mut work = params.clone();
    let report = loop {
        let supplied = match &field {
            Some(s) => Some(BoundaryField::translation_invariant(parse_free(s, &work)?)),
            None => None,
        };
        match classify_boundedness(&work, supplied.as_ref(), &levels, settings.cap) {
            Err(Error::Padic(PadicError::PrecisionExhausted { .. }))
                if work.precision < MAX_RETRY_PRECISION =>
            {
                work = work.with_precision((work.precision * 2).min(MAX_RETRY_PRECISION))?;
            }
            other => break other?,
        }
    };
    let mut text = format!(
        "class: {}\n",
        to_json(&report.class).as_str().unwrap_or_default()
    );
    for l in &report.levels {
        text.push_str(&format!(
            "n = {}: v(Z_n) = {}, v(mu) in {:?}, bound exponent {}, holds: {}\n",
            l.n, l.partition_valuation, l.mu_valuation, l.bound_exponent, l.bound_holds
        ));
    }
    Ok(Report {
        json: json!({
            "params": params_json(&params),
            "report": to_json(&report),
        }),
        text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn padic_eval_sqrt_seven() {
        let (code, out, _) = run_str(&[
            "padic-sos",
            "padic",
            "eval",
            "--p",
            "3",
            "--expr",
            "sqrt(7)",
            "--precision",
            "8",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"]["digits"][0], 1);
        assert_eq!(v["value"]["digits"][1], 1);
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = run_str(&[
            "padic-sos",
            "certify",
            "--p",
            "3",
            "--k",
            "2",
            "--m",
            "2",
            "--theta",
            "2",
        ]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("E_3"), "{err}");
        let (code, _, _) = run_str(&["padic-sos", "bogus"]);
        assert_eq!(code, EXIT_INVALID);
        let (code, _, err) = run_str(&[
            "padic-sos",
            "measure",
            "eval",
            "--p",
            "3",
            "--k",
            "2",
            "--m",
            "1",
            "--theta",
            "4",
            "--level",
            "2",
            "--cap",
            "10",
        ]);
        assert_eq!(code, EXIT_LIMIT, "{err}");
    }
}
