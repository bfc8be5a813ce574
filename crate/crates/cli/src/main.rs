//! `cube`: analyze Boolean functions, sweep families, run the verification
//! batteries and search for worst-case constants.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 capacity error.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cube_analysis::inequality::{self, InequalityId, InequalityReport, DEFAULT_S0};
use cube_analysis::verify::{self, Fault, Suite, VerifyConfig};
use cube_analysis::zoo::{self, Family};
use cube_analysis::{BooleanFunction, Error};

use config::Defaults;

/// Largest dimension accepted by `search`.
const SEARCH_MAX_DIM: usize = 12;
/// Largest dimension for the closed-form tribes sweep.
const CLOSED_FORM_MAX_N: usize = 1 << 20;

#[derive(Parser)]
#[command(name = "cube", version, about = "Influences and Talagrand-type inequalities on the discrete cube")]
struct Cli {
    /// Defaults file with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Influence profile and every applicable inequality report for one function.
    Analyze(AnalyzeArgs),
    /// One CSV row per n for a metric over a family.
    Sweep(SweepArgs),
    /// Run the verification batteries.
    Verify(VerifyArgs),
    /// Search for the largest lhs/rhs ratio of an inequality.
    Search(SearchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Args)]
struct Output {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Family spec such as `dictator:i=1`, `tribes:k=2,m=2`, `majority`.
    #[arg(long, conflicts_with = "table")]
    family: Option<String>,
    /// Truth-table file (`n=<k>` then 2^k characters from {0,1}).
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s0: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Increment between consecutive n (default 1).
    #[arg(long)]
    step: Option<usize>,
    /// Double n at each step instead of adding `step`.
    #[arg(long)]
    geometric: bool,
    /// tribes-closed-form, kkl, poincare, talagrand1, talagrand2 or pair-influence.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    s0: Option<f64>,
    /// Seeds random families that do not carry their own seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// identities, inequalities, gaussian or all.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Deliberately break a battery (`corrupt-table`) to exercise failure reporting.
    #[arg(long)]
    inject_fault: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchArgs {
    /// poincare, talagrand1, talagrand2 or kkl.
    #[arg(long)]
    inequality: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    s0: Option<f64>,
    /// File for the best truth table (defaults to `<out>.table` when `--out` is set).
    #[arg(long)]
    witness: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(PathBuf, io::Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Core(Error::Capacity { .. }) => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(path, e) => eprintln!("error: {}: {e}", path.display()),
                Failure::Verification => {}
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let defaults = match &cli.config {
        Some(path) => Defaults::parse(&read(path)?)?,
        None => Defaults::default(),
    };
    match cli.command {
        Command::Analyze(a) => analyze(a, &defaults),
        Command::Sweep(a) => sweep(a, &defaults),
        Command::Verify(a) => verify_cmd(a, &defaults),
        Command::Search(a) => search(a, &defaults),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn emit(output: &Output, text: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(path.clone(), e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
        }
    }
}

fn format_of(output: &Output, defaults: &Defaults, default: Format) -> CliResult<Format> {
    Ok(defaults.pick_or(output.format, "format", default)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Stable report CSV contract; later columns may only be appended.
const REPORT_COLUMNS: &[&str] = &["name", "n", "param_s0", "lhs", "rhs", "ratio"];

fn report_row(r: &InequalityReport) -> Vec<String> {
    vec![
        r.name.clone(),
        r.n.to_string(),
        r.param("s0").map(|v| v.to_string()).unwrap_or_default(),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.ratio.map(|v| v.to_string()).unwrap_or_default(),
    ]
}

fn analyze(a: AnalyzeArgs, defaults: &Defaults) -> CliResult<()> {
    let s0 = defaults.pick_or(a.s0, "s0", DEFAULT_S0)?;
    let n = defaults.pick(a.n, "n")?;
    let (label, f) = match (&a.table, defaults.pick(a.family.clone(), "family")?) {
        (Some(path), _) => (path.display().to_string(), BooleanFunction::parse(&read(path)?)?),
        (None, Some(spec)) => {
            let family: Family = spec.parse()?;
            (family.to_string(), family.build(n)?)
        }
        (None, None) => return Err(Failure::Usage("analyze needs --family or --table".into())),
    };
    let real = f.to_real();
    let mut reports = vec![
        inequality::poincare_report(&real),
        inequality::talagrand1_report(&real),
        inequality::talagrand2_report(&real, s0)?,
    ];
    if f.dim() >= 2 {
        reports.push(inequality::kkl_report(&f)?);
    }
    match format_of(&a.output, defaults, Format::Json)? {
        Format::Csv => {
            let rows: Vec<_> = reports.iter().map(report_row).collect();
            emit(&a.output, &csv_text(REPORT_COLUMNS, &rows))
        }
        Format::Json | Format::Text => {
            let profile = f.influence_profile();
            let alternative = if f.dim() >= 2 {
                serde_json::to_value(inequality::corollary_alternative_report(&f, s0)?)
                    .expect("reports serialize")
            } else {
                Value::Null
            };
            let bundle = json!({
                "function": label,
                "n": f.dim(),
                "s0": s0,
                "mean": f.mean(),
                "variance": f.variance(),
                "influences": profile.first(),
                "total_influence": profile.first().iter().sum::<f64>(),
                "pair_influences": profile.pair_matrix(),
                "reports": reports,
                "alternative": alternative,
            });
            emit(&a.output, &pretty(&bundle))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Metric {
    TribesClosedForm,
    Kkl,
    Poincare,
    Talagrand1,
    Talagrand2,
    PairInfluence,
}

impl Metric {
    fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "tribes-closed-form" => Metric::TribesClosedForm,
            "kkl" => Metric::Kkl,
            "poincare" => Metric::Poincare,
            "talagrand1" => Metric::Talagrand1,
            "talagrand2" => Metric::Talagrand2,
            "pair-influence" => Metric::PairInfluence,
            other => {
                return Err(Failure::Usage(format!(
                    "unknown metric {other:?} (expected tribes-closed-form, kkl, poincare, \
                     talagrand1, talagrand2 or pair-influence)"
                )))
            }
        })
    }
}

/// Sweep CSV contract; later columns may only be appended.
const SWEEP_COLUMNS: &[&str] = &[
    "name", "n", "param_s0", "lhs", "rhs", "ratio", "family", "k", "m",
];

fn sweep(a: SweepArgs, defaults: &Defaults) -> CliResult<()> {
    let metric = Metric::parse(
        &defaults
            .pick(a.metric.clone(), "metric")?
            .ok_or_else(|| Failure::Usage("sweep needs --metric".into()))?,
    )?;
    let s0 = defaults.pick_or(a.s0, "s0", DEFAULT_S0)?;
    let seed = defaults.pick_or(a.seed, "seed", 1)?;
    let n_min = defaults
        .pick(a.n_min, "n-min")?
        .ok_or_else(|| Failure::Usage("sweep needs --n-min".into()))?;
    let n_max = defaults
        .pick(a.n_max, "n-max")?
        .ok_or_else(|| Failure::Usage("sweep needs --n-max".into()))?;
    let step = defaults.pick_or(a.step, "step", 1)?;
    let geometric = a.geometric || defaults.pick_or(None, "geometric", false)?;
    if n_min == 0 || n_min > n_max || step == 0 {
        return Err(Failure::Usage(
            "sweep needs 1 <= n-min <= n-max and step >= 1".into(),
        ));
    }
    let limit = match metric {
        Metric::TribesClosedForm => CLOSED_FORM_MAX_N,
        _ => cube_analysis::MAX_DIM,
    };
    if n_max > limit {
        return Err(Error::Capacity {
            what: "sweep dimension",
            requested: n_max,
            limit,
        }
        .into());
    }
    let family = match defaults.pick(a.family.clone(), "family")? {
        Some(spec) => Some(spec.parse::<Family>()?),
        None => None,
    };
    let mut ns = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        ns.push(n);
        n = if geometric { n * 2 } else { n + step };
    }
    let mut rows = Vec::with_capacity(ns.len());
    for n in ns {
        rows.push(sweep_row(metric, family.as_ref(), n, s0, seed)?);
    }
    emit(&a.output, &csv_text(SWEEP_COLUMNS, &rows))
}

fn sweep_row(
    metric: Metric,
    family: Option<&Family>,
    n: usize,
    s0: f64,
    seed: u64,
) -> CliResult<Vec<String>> {
    let name = |s: &str| s.to_string();
    match metric {
        Metric::TribesClosedForm => {
            let (k, m) = zoo::tribes_auto_params(n)?;
            let influence = zoo::tribes_influence_closed_form(k, m);
            let scale = (n as f64).log2() / n as f64;
            Ok(vec![
                name("tribes-closed-form"),
                n.to_string(),
                String::new(),
                influence.to_string(),
                scale.to_string(),
                (influence / scale).to_string(),
                Family::TribesAuto.to_string(),
                k.to_string(),
                m.to_string(),
            ])
        }
        Metric::PairInfluence => {
            let (f, k, m) = zoo::tribes_auto(n)?;
            if m < 2 {
                return Err(Error::Domain(format!(
                    "tribes-auto at n={n} has a single block; no pair in distinct blocks"
                ))
                .into());
            }
            let pair = f.pair_influence(1, k + 1)?;
            let scale = ((n as f64).log2() / n as f64).powi(2);
            Ok(vec![
                name("pair-influence"),
                n.to_string(),
                String::new(),
                pair.to_string(),
                scale.to_string(),
                (pair / scale).to_string(),
                Family::TribesAuto.to_string(),
                k.to_string(),
                m.to_string(),
            ])
        }
        _ => {
            let family = family
                .cloned()
                .unwrap_or(Family::Random { p: 0.5, seed });
            let f = family.build(Some(n))?;
            let real = f.to_real();
            let report = match metric {
                Metric::Kkl => inequality::kkl_report(&f)?,
                Metric::Poincare => inequality::poincare_report(&real),
                Metric::Talagrand1 => inequality::talagrand1_report(&real),
                _ => inequality::talagrand2_report(&real, s0)?,
            };
            let (k, m) = match family {
                Family::Tribes { k, m } => (k.to_string(), m.to_string()),
                _ => (String::new(), String::new()),
            };
            let mut row = report_row(&report);
            row.extend([family.to_string(), k, m]);
            Ok(row)
        }
    }
}

fn verify_cmd(a: VerifyArgs, defaults: &Defaults) -> CliResult<()> {
    let suite: Suite = defaults.pick_or(a.suite.clone(), "suite", "all".into())?.parse()?;
    let mut config = VerifyConfig::new(
        suite,
        defaults.pick_or(a.n_max, "n-max", 10)?,
        defaults.pick_or(a.seed, "seed", 1)?,
    );
    if let Some(fault) = &a.inject_fault {
        config.fault = Some(fault.parse::<Fault>()?);
    }
    let summary = verify::run(&config)?;
    let text = match format_of(&a.output, defaults, Format::Text)? {
        Format::Json => {
            pretty(&serde_json::to_value(&summary).expect("summaries serialize"))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = summary
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.suite.to_string(),
                        c.name.clone(),
                        c.cases.to_string(),
                        c.failures.to_string(),
                        c.worst_residual.to_string(),
                        c.tolerance.to_string(),
                    ]
                })
                .collect();
            csv_text(
                &["suite", "check", "cases", "failures", "worst_residual", "tolerance"],
                &rows,
            )
        }
        Format::Text => summary.render(),
    };
    emit(&a.output, &text)?;
    if !summary.passed {
        if a.output.out.is_some() {
            eprint!("{}", summary.render());
        }
        return Err(Failure::Verification);
    }
    Ok(())
}

fn search(a: SearchArgs, defaults: &Defaults) -> CliResult<()> {
    let name = defaults
        .pick(a.inequality.clone(), "inequality")?
        .ok_or_else(|| Failure::Usage("search needs --inequality".into()))?;
    let s0 = defaults.pick_or(a.s0, "s0", DEFAULT_S0)?;
    let id = InequalityId::parse(&name, s0)?;
    let n = defaults
        .pick(a.n, "n")?
        .ok_or_else(|| Failure::Usage("search needs --n".into()))?;
    if n > SEARCH_MAX_DIM {
        return Err(Error::Capacity {
            what: "search dimension",
            requested: n,
            limit: SEARCH_MAX_DIM,
        }
        .into());
    }
    let budget = defaults.pick_or(a.budget, "budget", 10_000)?;
    let seed = defaults.pick_or(a.seed, "seed", 1)?;
    let report = inequality::constant_search(id, n, budget, seed)?;
    let witness = a
        .witness
        .clone()
        .or_else(|| a.output.out.as_ref().map(|p| p.with_extension("table")));
    if let Some(path) = &witness {
        fs::write(path, report.best.to_text()).map_err(|e| Failure::Io(path.clone(), e))?;
    }
    let text = match format_of(&a.output, defaults, Format::Json)? {
        Format::Csv => csv_text(REPORT_COLUMNS, &[report_row(&id.report(&report.best)?)]),
        _ => pretty(&serde_json::to_value(&report).expect("reports serialize")),
    };
    emit(&a.output, &text)
}
