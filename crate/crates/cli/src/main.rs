//! `z2asym` command-line front end.
//!
//! Payloads go to stdout, diagnostics to stderr. Exit codes: 0 on success,
//! 1 when a verification fails, 2 on bad arguments or invalid input.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use z2asym::bloch::{make_state, Axis, BlochState};
use z2asym::monotones::{monotone_pair, monotone_profile, MonotoneName, MonotonePair, MonotoneProfile};
use z2asym::oracle::{closure_boundary_probe, oracle_agreement, search_channel, OracleConfig, OracleResult};
use z2asym::order::{can_convert, compare, downward_closure_section, ComparabilityResult, ConversionVerdict};
use z2asym::relations::{
    constraint_report, cross_section, pure_b_tuple, sample_joint_region, ConstraintReport, CrossSectionSpec,
};
use z2asym::section::CrossSection;
use z2asym::suites::{run_all, run_suite, Suite, SuiteParams, SuiteReport};
use z2asym::{Error, Execution, SamplerConfig};

use output::{Csv, Record};

#[derive(Parser)]
#[command(name = "z2asym", version, about = "Qubit about-face asymmetry: monotones, conversion, regions, verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OracleArgs {
    /// Azimuth resolution used by boundary probes.
    #[arg(long, default_value_t = 64)]
    theta_grid: usize,
    #[arg(long, default_value_t = 64)]
    uv_grid: usize,
    #[arg(long, default_value_t = 3)]
    refine: usize,
    #[arg(long, default_value_t = 1e-3)]
    hit_tol: f64,
}

impl OracleArgs {
    fn config(&self, seed: u64) -> OracleConfig {
        OracleConfig {
            theta_grid_n: self.theta_grid,
            uv_grid_n: self.uv_grid,
            refine_steps: self.refine,
            hit_tol: self.hit_tol,
            seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Six-value monotone profile and constraint report of a state.
    Monotones {
        #[arg(num_args = 3, required = true, allow_negative_numbers = true, value_names = ["RX", "RY", "RZ"])]
        state: Vec<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Conversion verdict for `SOURCE -- TARGET`.
    Convert {
        #[arg(num_args = 3, required = true, allow_negative_numbers = true, value_names = ["SX", "SY", "SZ"])]
        source: Vec<f64>,
        /// Target state; `--` before the three components is accepted too.
        #[arg(long, num_args = 3, required = true, allow_negative_numbers = true)]
        target: Vec<f64>,
        #[arg(long, default_value = "x", allow_hyphen_values = true)]
        axis: String,
        /// Also search the covariant family for an explicit channel.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        grid: OracleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Region data: a monotone cross-section, a joint-region sample or a
    /// downward-closure section.
    Region {
        /// Fixed monotone, e.g. `Ax=0.5`.
        #[arg(long, group = "mode")]
        cross_section: Option<String>,
        /// Comma-separated monotones, e.g. `Bx,By,Bz`.
        #[arg(long, group = "mode")]
        subset: Option<String>,
        /// Source state `rx,ry,rz` whose closure is sliced.
        #[arg(long, group = "mode", allow_hyphen_values = true)]
        closure: Option<String>,
        #[arg(long, default_value = "x", allow_hyphen_values = true)]
        axis: String,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Probes the analytic closure boundary of a state with the channel search.
    Closure {
        #[arg(num_args = 3, required = true, allow_negative_numbers = true, value_names = ["RX", "RY", "RZ"])]
        state: Vec<f64>,
        #[arg(long, default_value = "x", allow_hyphen_values = true)]
        axis: String,
        #[arg(long, default_value_t = 16)]
        points: usize,
        #[arg(long, default_value_t = 0.01)]
        margin: f64,
        #[command(flatten)]
        grid: OracleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Runs verification suites; exits 1 if any check fails.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Oracle pairs per axis.
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0.02)]
        margin: f64,
        #[command(flatten)]
        grid: OracleArgs,
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Channel search for `SOURCE -- TARGET`, or an agreement run over
    /// random pairs when no states are given.
    Oracle {
        #[arg(num_args = 3, allow_negative_numbers = true, value_names = ["SX", "SY", "SZ"])]
        source: Vec<f64>,
        #[arg(long, num_args = 3, allow_negative_numbers = true, requires = "source")]
        target: Vec<f64>,
        #[arg(long, default_value = "x", allow_hyphen_values = true)]
        axis: String,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0.02)]
        margin: f64,
        #[command(flatten)]
        grid: OracleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Monotones { .. } => "monotones",
            Command::Convert { .. } => "convert",
            Command::Region { .. } => "region",
            Command::Closure { .. } => "closure",
            Command::Verify { .. } => "verify",
            Command::Oracle { .. } => "oracle",
        }
    }
}

/// Failure modes of a command, mapped to exit codes.
enum Failure {
    Usage(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(Record, bool), Failure>;

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn state(v: &[f64]) -> Result<BlochState, Failure> {
    match v {
        [x, y, z] => Ok(make_state(*x, *y, *z)?),
        _ => Err(Failure::Usage(format!("expected three Bloch components, got {}", v.len()))),
    }
}

fn parse_triple(s: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let vals: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| Failure::Usage(format!("{p:?} is not a number"))))
        .collect::<Result<_, _>>()?;
    vals.try_into().map_err(|_| Failure::Usage(format!("expected three comma-separated numbers, got {s:?}")))
}

fn parse_axis(s: &str) -> Result<Axis, Failure> {
    match s.to_ascii_lowercase().as_str() {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        "z" => Ok(Axis::Z),
        _ => {
            let [x, y, z] = parse_triple(s)?;
            Ok(Axis::normalized(x, y, z)?)
        }
    }
}

fn json_only(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("{command} emits JSON only")));
    }
    Ok(())
}

#[derive(Serialize)]
struct MonotonesPayload {
    state: BlochState,
    profile: MonotoneProfile,
    /// Pure-state B tag, when the state is pure.
    pure_tag: Option<String>,
    report: ConstraintReport,
}

fn cmd_monotones(v: &[f64], format: Format) -> Outcome {
    let s = state(v)?;
    let profile = monotone_profile(&s);
    let payload = MonotonesPayload {
        state: s,
        profile,
        pure_tag: pure_b_tuple(&s).ok().map(|t| t.label().to_string()),
        report: constraint_report(&s),
    };
    let record = match format {
        Format::Json => Record::json("monotones", &payload),
        Format::Csv => {
            let mut csv = Csv::new(["rx", "ry", "rz", "Ax", "Bx", "Ay", "By", "Az", "Bz"]);
            let mut row: Vec<f64> = s.as_array().to_vec();
            row.extend(profile.as_array());
            csv.push_numbers(&row);
            Record::Csv(csv)
        }
    };
    Ok((record, true))
}

#[derive(Serialize)]
struct ConvertPayload {
    source: BlochState,
    target: BlochState,
    axis: Axis,
    source_pair: MonotonePair,
    target_pair: MonotonePair,
    verdict: ConversionVerdict,
    comparability: ComparabilityResult,
    oracle: Option<OracleResult>,
}

fn cmd_convert(source: &[f64], target: &[f64], axis: &str, oracle: Option<OracleConfig>, format: Format) -> Outcome {
    json_only(format, "convert")?;
    let (s, t, ax) = (state(source)?, state(target)?, parse_axis(axis)?);
    let found = oracle.map(|c| search_channel(&s, &t, &ax, &c)).transpose()?;
    let payload = ConvertPayload {
        source: s,
        target: t,
        axis: ax,
        source_pair: monotone_pair(&s, &ax),
        target_pair: monotone_pair(&t, &ax),
        verdict: can_convert(&s, &t, &ax),
        comparability: compare(&s, &t, &ax),
        oracle: found,
    };
    Ok((Record::json("convert", &payload), true))
}

fn section_record(command: &str, sec: &CrossSection, format: Format) -> Record {
    match format {
        Format::Json => Record::json(command, sec),
        Format::Csv => {
            let [l0, l1] = &sec.labels;
            let mut csv = Csv::new(["kind", l0.as_str(), l1.as_str(), "member", "boundary"]);
            for p in &sec.points {
                let b = p.boundary.map_or("", |b| b.label());
                csv.push(["grid".into(), output::num(p.c0), output::num(p.c1), p.member.to_string(), b.into()]);
            }
            for curve in &sec.boundaries {
                for q in &curve.points {
                    let row =
                        ["curve".into(), output::num(q[0]), output::num(q[1]), String::new(), curve.id.label().into()];
                    csv.push(row);
                }
            }
            Record::Csv(csv)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_region(
    cross: Option<&str>,
    subset: Option<&str>,
    closure: Option<&str>,
    axis: &str,
    grid: usize,
    samples: usize,
    seed: u64,
    format: Format,
) -> Outcome {
    if let Some(spec) = cross {
        let (name, value) =
            spec.split_once('=').ok_or_else(|| Failure::Usage(format!("expected NAME=VALUE, got {spec:?}")))?;
        let fixed_monotone: MonotoneName = name.trim().parse()?;
        let fixed_value: f64 =
            value.trim().parse().map_err(|_| Failure::Usage(format!("{value:?} is not a number")))?;
        let sec = cross_section(&CrossSectionSpec { fixed_monotone, fixed_value, grid_n: grid })?;
        return Ok((section_record("region", &sec, format), true));
    }
    if let Some(list) = subset {
        let names: Vec<MonotoneName> = list.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
        let sample = sample_joint_region(&names, samples, &SamplerConfig::uniform_ball(seed), Execution::Parallel)?;
        let record = match format {
            Format::Json => Record::json("region", &sample),
            Format::Csv => {
                let mut header: Vec<String> = ["rx", "ry", "rz"].map(String::from).to_vec();
                header.extend(names.iter().map(|n| n.label()));
                header.extend(["min_margin", "max_equality_residual", "pass"].map(String::from));
                let mut csv = Csv::new(header);
                for r in &sample.rows {
                    let mut row: Vec<String> = r.state.as_array().iter().map(|v| output::num(*v)).collect();
                    row.extend(r.values.iter().map(|v| output::num(*v)));
                    row.push(output::num(r.report.min_margin()));
                    row.push(output::num(r.report.max_equality_residual()));
                    row.push(r.pass.to_string());
                    csv.push(row);
                }
                Record::Csv(csv)
            }
        };
        return Ok((record, true));
    }
    if let Some(src) = closure {
        let [x, y, z] = parse_triple(src)?;
        let sec = downward_closure_section(&make_state(x, y, z)?, &parse_axis(axis)?, grid)?;
        return Ok((section_record("region", &sec, format), true));
    }
    Err(Failure::Usage("region needs one of --cross-section, --subset or --closure".into()))
}

fn cmd_closure(
    v: &[f64],
    axis: &str,
    points: usize,
    margin: f64,
    config: OracleConfig,
    ex: Execution,
    format: Format,
) -> Outcome {
    let rep = closure_boundary_probe(&state(v)?, &parse_axis(axis)?, points, margin, &config, ex)?;
    let pass = rep.pass();
    let record = match format {
        Format::Json => Record::json("closure", &rep),
        Format::Csv => {
            let mut csv =
                Csv::new(["surface", "x", "y", "z", "boundary_distance", "ix", "iy", "iz", "inflated_distance"]);
            for p in &rep.probes {
                let mut row = vec![if p.on_cylinder { "cylinder" } else { "spheroid" }.to_string()];
                row.extend(p.point.iter().map(|v| output::num(*v)));
                row.push(output::num(p.boundary_distance));
                match p.inflated {
                    Some(q) => row.extend(q.iter().map(|v| output::num(*v))),
                    None => row.extend([String::new(), String::new(), String::new()]),
                }
                row.push(p.inflated_distance.map(output::num).unwrap_or_default());
                csv.push(row);
            }
            Record::Csv(csv)
        }
    };
    Ok((record, pass))
}

#[derive(Serialize)]
struct VerifyPayload {
    pass: bool,
    params: SuiteParams,
    reports: Vec<SuiteReport>,
}

fn cmd_verify(suite: &str, params: SuiteParams, format: Format) -> Outcome {
    let reports = if suite == "all" {
        run_all(&params)?
    } else {
        let s: Suite = suite.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
        vec![run_suite(s, &params)?]
    };
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        eprintln!("{} {}", if r.pass { "pass" } else { "FAIL" }, r.suite);
    }
    let record = match format {
        Format::Json => Record::json("verify", &VerifyPayload { pass, params, reports }),
        Format::Csv => {
            let mut csv = Csv::new(["suite", "check", "value", "relation", "limit", "pass"]);
            for r in &reports {
                for c in &r.checks {
                    csv.push([
                        r.suite.label().into(),
                        c.name.clone(),
                        output::num(c.value),
                        c.relation.into(),
                        output::num(c.limit),
                        c.pass.to_string(),
                    ]);
                }
            }
            Record::Csv(csv)
        }
    };
    Ok((record, pass))
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    source: &[f64],
    target: &[f64],
    axis: &str,
    pairs: usize,
    margin: f64,
    config: OracleConfig,
    ex: Execution,
    format: Format,
) -> Outcome {
    json_only(format, "oracle")?;
    let ax = parse_axis(axis)?;
    if source.is_empty() {
        let rep = oracle_agreement(pairs, &config, margin, &ax, &SamplerConfig::uniform_ball(config.seed), ex)?;
        let pass = rep.pass();
        return Ok((Record::json("oracle", &rep), pass));
    }
    if target.is_empty() {
        return Err(Failure::Usage("oracle with a source state needs a target (`-- TX TY TZ`)".into()));
    }
    let found = search_channel(&state(source)?, &state(target)?, &ax, &config)?;
    Ok((Record::json("oracle", &found), true))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Monotones { state, format } => cmd_monotones(&state, format),
        Command::Convert { source, target, axis, oracle, grid, seed, format } => {
            cmd_convert(&source, &target, &axis, oracle.then(|| grid.config(seed)), format)
        }
        Command::Region { cross_section, subset, closure, axis, grid, samples, seed, format } => cmd_region(
            cross_section.as_deref(),
            subset.as_deref(),
            closure.as_deref(),
            &axis,
            grid,
            samples,
            seed,
            format,
        ),
        Command::Closure { state, axis, points, margin, grid, seed, sequential, format } => {
            cmd_closure(&state, &axis, points, margin, grid.config(seed), exec(sequential), format)
        }
        Command::Verify { suite, n, seed, pairs, margin, grid, sequential, format } => {
            let params = SuiteParams { n, seed, pairs, margin, oracle: grid.config(seed), exec: exec(sequential) };
            cmd_verify(&suite, params, format)
        }
        Command::Oracle { source, target, axis, pairs, margin, grid, seed, sequential, format } => {
            cmd_oracle(&source, &target, &axis, pairs, margin, grid.config(seed), exec(sequential), format)
        }
    }
}

/// Rewrites `A B C -- D E F` into `A B C --target D E F` so that options may
/// follow the target.
fn rewrite_separator(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    for a in args {
        if a == "--" && out.len() > 1 {
            out.push("--target".to_string());
        } else {
            out.push(a);
        }
    }
    out
}

fn main() -> ExitCode {
    let args = rewrite_separator(std::env::args().collect());
    let command_hint = args.get(1).cloned().unwrap_or_default();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let msg = e.to_string();
            output::emit_error(&command_hint, "Usage", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    let name = cli.command.name();
    match run(cli.command) {
        Ok((record, pass)) => {
            if let Err(e) = record.write(std::io::stdout().lock()) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
                eprintln!("error: failed to write output: {e}");
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            output::emit_error(name, "Usage", &msg);
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            output::emit_error(name, e.kind(), &e.to_string());
            ExitCode::from(2)
        }
    }
}
