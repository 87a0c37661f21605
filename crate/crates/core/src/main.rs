use std::io::Read;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use superprolong::prolong::DepthConstraint;
use superprolong::report::{self, render_records, render_table, RunReport, RunSettings};
use superprolong::scenarios::{self, ScenarioSpec, Status};

/// Environment variable holding the number of worker threads.
const WORKERS_ENV: &str = "SUPERPROLONG_WORKERS";

#[derive(Parser)]
#[command(
    name = "superprolong",
    version,
    about = "Prolongs graded Lie superalgebras of vector fields over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prolong one scenario and check its claims.
    Run(RunArgs),
    /// Run every required scenario and the presentation checks.
    VerifyAll(VerifyArgs),
    /// List the bundled scenarios.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the fixture text of a bundled scenario.
    ShowFixture { name: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constraint {
    AllJ,
    J1Only,
}

impl From<Constraint> for DepthConstraint {
    fn from(c: Constraint) -> Self {
        match c {
            Constraint::AllJ => DepthConstraint::AllJ,
            Constraint::J1Only => DepthConstraint::J1Only,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Bundled scenario name.
    #[arg(required_unless_present = "file")]
    scenario: Option<String>,
    /// Read the fixture from a file instead.
    #[arg(long, conflicts_with = "scenario")]
    file: Option<std::path::PathBuf>,
    /// Heights of the even variables, comma separated.
    #[arg(long = "N", value_delimiter = ',')]
    heights: Option<Vec<u32>>,
    /// Stop prolonging after this degree.
    #[arg(long)]
    cap: Option<i64>,
    #[arg(long, value_enum)]
    depth_constraint: Option<Constraint>,
    /// Focus on one case of the fixture.
    #[arg(long)]
    partial: Option<String>,
    /// Characteristic, for fixtures that do not pin it.
    #[arg(long)]
    prime_override: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Include wall-clock timings; output is then no longer reproducible.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also attempt the optional scenarios.
    #[arg(long)]
    include_optional: bool,
    /// Wall-clock budget in seconds for each optional scenario.
    #[arg(long, default_value_t = 60)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn render(r: &RunReport, format: Format, timings: bool) -> String {
    match format {
        Format::Table => render_table(r, timings),
        Format::Records => render_records(r, timings),
    }
}

fn exit_of(r: &RunReport) -> u8 {
    if r.all_match() {
        0
    } else {
        1
    }
}

fn load(args: &RunArgs) -> Result<ScenarioSpec, String> {
    let mut spec = match (&args.scenario, &args.file) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("fixture");
            scenarios::parse_spec(name, &text).map_err(|e| e.to_string())?
        }
        (Some(name), None) => scenarios::load(name).map_err(|e| e.to_string())?,
        (None, None) => unreachable!("clap requires one"),
    };
    if let Some(p) = args.prime_override {
        if spec.prime_pinned && p != spec.prime {
            return Err(format!(
                "{}: characteristic is pinned to {}, refusing --prime-override {p}",
                spec.name, spec.prime
            ));
        }
        spec.prime = p;
    }
    Ok(spec)
}

fn run_cmd(args: &RunArgs) -> u8 {
    let spec = match load(args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let settings = RunSettings {
        heights: args.heights.clone(),
        cap: args.cap,
        constraint: args.depth_constraint.map(Into::into),
        partial: args.partial.clone(),
    };
    match report::run(&spec, &settings) {
        Ok(r) => {
            print!("{}", render(&r, args.format, args.timings));
            exit_of(&r)
        }
        Err(e) => {
            eprintln!("error: {}: {e}", spec.name);
            2
        }
    }
}

type Outcome = Result<RunReport, String>;

fn run_named(name: &str) -> Outcome {
    let spec = scenarios::load(name).map_err(|e| e.to_string())?;
    report::run(&spec, &RunSettings::default()).map_err(|e| format!("{name}: {e}"))
}

enum Optional {
    Finished { code: Option<i32>, stdout: String },
    OutOfBudget,
    Failed(String),
}

/// Runs `run <name>` in a child process, so that an exhausted budget or
/// memory does not take the caller down.
fn run_isolated(name: &str, format: Format, budget: Duration) -> Optional {
    let exe = match std::env::current_exe() {
        Ok(e) => e,
        Err(e) => return Optional::Failed(e.to_string()),
    };
    let fmt = match format {
        Format::Table => "table",
        Format::Records => "records",
    };
    let mut child = match std::process::Command::new(exe)
        .args(["run", name, "--format", fmt])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::null())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return Optional::Failed(e.to_string()),
    };
    let mut out = child.stdout.take().expect("piped");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = out.read_to_string(&mut s);
        s
    });
    let start = Instant::now();
    loop {
        match child.try_wait() {
            Ok(Some(status)) => {
                let stdout = reader.join().unwrap_or_default();
                return Optional::Finished {
                    code: status.code(),
                    stdout,
                };
            }
            Ok(None) if start.elapsed() >= budget => {
                let _ = child.kill();
                let _ = child.wait();
                return Optional::OutOfBudget;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(50)),
            Err(e) => return Optional::Failed(e.to_string()),
        }
    }
}

fn verify_all(args: &VerifyArgs) -> u8 {
    let specs = match scenarios::names()
        .into_iter()
        .map(|n| scenarios::load(n).map(|s| (n, s.status)))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let required: Vec<&'static str> = specs
        .iter()
        .filter(|(_, s)| *s == Status::Required)
        .map(|(n, _)| *n)
        .collect();
    let optional: Vec<&'static str> = specs
        .iter()
        .filter(|(_, s)| *s == Status::Optional)
        .map(|(n, _)| *n)
        .collect();
    let outcomes: Vec<(&str, Outcome)> = required.par_iter().map(|n| (*n, run_named(n))).collect();

    let mut code = 0u8;
    let mut summary = Vec::new();
    for (name, o) in &outcomes {
        match o {
            Ok(r) => {
                print!("{}", render(r, args.format, false));
                code = code.max(exit_of(r));
                summary.push(format!(
                    "{name:<18} {:>3} match {:>3} mismatch {:>3} unchecked",
                    r.count(report::Verdict::Match),
                    r.count(report::Verdict::Mismatch),
                    r.count(report::Verdict::Unchecked)
                ));
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = 2;
                summary.push(format!("{name:<18} error"));
            }
        }
    }
    let pres = superprolong::presentations::verify_suite();
    for line in &pres.lines {
        summary.push(line.clone());
    }
    if !pres.ok {
        code = code.max(1);
    }
    if args.include_optional {
        for name in optional {
            let line = match run_isolated(name, args.format, Duration::from_secs(args.budget)) {
                Optional::Finished { code, stdout } => {
                    print!("{stdout}");
                    match code {
                        Some(0) => "optional, all match".to_string(),
                        Some(1) => "optional, mismatch".to_string(),
                        Some(c) => format!("optional, exit status {c}"),
                        None => "optional, terminated by a signal".to_string(),
                    }
                }
                Optional::OutOfBudget => format!("optional, budget of {}s exhausted", args.budget),
                Optional::Failed(e) => format!("optional, error: {e}"),
            };
            summary.push(format!("{name:<18} {line}"));
        }
    }
    if args.format == Format::Table {
        println!("== summary");
        for s in summary {
            println!("  {s}");
        }
    }
    code
}

fn catalog(format: Format) -> u8 {
    let entries = match scenarios::catalog() {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    for e in entries {
        match format {
            Format::Table => {
                let status = match e.status {
                    Status::Required => "required",
                    Status::Optional => "optional",
                };
                println!("{:<18} {:<9} {}", e.name, status, e.title);
            }
            Format::Records => println!("{}", serde_json::to_string(&e).expect("serializable")),
        }
    }
    0
}

fn init_workers() -> Result<(), String> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err(format!("{WORKERS_ENV} must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_workers() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let code = match &cli.command {
        Command::Run(a) => run_cmd(a),
        Command::VerifyAll(a) => verify_all(a),
        Command::Catalog { format } => catalog(*format),
        Command::ShowFixture { name } => match scenarios::source(name) {
            Ok(s) => {
                print!("{s}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
    };
    ExitCode::from(code)
}
