use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pathart::bench::{render_table, run_bench, BenchSpec, TableFormat};
use pathart::oracle::{run_oracle, OracleError, OracleMode, EXHAUSTIVE_LIMIT};
use pathart::search::{expand_valid, find_first_valid, SearchConfig, SearchError};
use pathart::suite::{generate_with_rejects, GenError, GenOptions, GenReport, Method, MethodKind};
use pathart::{eval_condition, parse_condition, parse_domain, InputBox, PathCondition};

#[derive(Parser)]
#[command(name = "pathart", version, about = "Generate test data satisfying a path condition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one test suite.
    Gen(GenArgs),
    /// Run repeated trials of several methods and tabulate suite lengths.
    Bench(BenchArgs),
    /// Count satisfying points by enumeration or sampling.
    Oracle(OracleArgs),
    /// Run the grid search once and list the valid cells it finds.
    Validcells(ValidcellsArgs),
}

#[derive(Args)]
struct Input {
    /// Path condition text.
    #[arg(long, conflicts_with = "condition_file", required_unless_present = "condition_file")]
    condition: Option<String>,
    /// File holding the path condition.
    #[arg(long)]
    condition_file: Option<PathBuf>,
    /// Domain specification, e.g. "x:int:0..15;y:int:0..15".
    #[arg(long, conflicts_with = "domain_file", required_unless_present = "domain_file")]
    domain: Option<String>,
    /// File holding the domain specification.
    #[arg(long)]
    domain_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Knobs {
    /// Expansion probes per neighbor cell.
    #[arg(long, default_value_t = 1)]
    samples_per_cell: u32,
    /// Fraction of a neighbor cell probed during expansion.
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    /// Finest search resolution (defaults to the starting resolution).
    #[arg(long)]
    n_max: Option<u32>,
    /// Cap on condition evaluations spent by the search.
    #[arg(long, default_value_t = 1_000_000)]
    probe_budget: u64,
    /// Probe each neighbor cell at most once during expansion.
    #[arg(long)]
    no_retest: bool,
}

impl Knobs {
    fn config(&self, n: u32) -> SearchConfig {
        SearchConfig {
            n0: n,
            n_max: self.n_max.unwrap_or(n),
            samples_per_cell: self.samples_per_cell,
            beta: self.beta,
            probe_budget: self.probe_budget,
            retest: !self.no_retest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rt,
    Prt,
    Art,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
    Markdown,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Grid resolution for prt and art.
    #[arg(long, visible_alias = "k")]
    n: Option<u32>,
    #[arg(long)]
    requested: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long, default_value_t = 1000)]
    cap_factor: u64,
    /// Write accepted points here, one per line.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write rejected points here, one per line.
    #[arg(long)]
    dump_rejects: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_delimiter = ',', default_value = "rt,prt,art")]
    methods: Vec<MethodArg>,
    #[arg(long, visible_alias = "k", value_delimiter = ',', default_value = "4,5,6")]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "100,500,1000,2000,5000,10000")]
    requested: Vec<u64>,
    #[arg(long, default_value_t = 30)]
    trials: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    knobs: Knobs,
    #[arg(long, default_value_t = 1000)]
    cap_factor: u64,
    /// Worker threads (0 uses every core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: Input,
    /// Also report which cells of this grid hold a satisfying point.
    #[arg(long)]
    n: Option<u32>,
    /// Sample this many uniform points instead of enumerating.
    #[arg(long)]
    montecarlo: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest box enumerated exhaustively.
    #[arg(long, default_value_t = EXHAUSTIVE_LIMIT)]
    limit: u64,
}

#[derive(Args)]
struct ValidcellsArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    knobs: Knobs,
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code, kind, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure::new(2, "input", message)
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure::input(format!("{}: {e}", path.display()))
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Exhausted { .. } => Failure::new(3, "exhausted", e.to_string()),
            SearchError::InvalidSeed => Failure::new(5, "invariant", e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        match e {
            GenError::UnsatProven => Failure::new(3, "unsat", e.to_string()),
            GenError::AcceptanceTooLow { .. } => Failure::new(4, "acceptance_cap", e.to_string()),
            GenError::Search(s) => s.into(),
            _ => Failure::input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Validcells(a) => cmd_validcells(a),
    };
    match result {
        Ok(text) => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                eprintln!("error\tcode=2\tkind=output\tmessage={e}");
                ExitCode::from(2)
            }
            _ => ExitCode::SUCCESS,
        },
        Err(f) => {
            let message = f.message.replace('\n', " ");
            eprintln!("error\tcode={}\tkind={}\tmessage={}", f.code, f.kind, message);
            ExitCode::from(f.code)
        }
    }
}

fn load(input: &Input) -> Result<(PathCondition, InputBox), Failure> {
    let condition = match (&input.condition, &input.condition_file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => fs::read_to_string(path).map_err(|e| Failure::io(path, e))?,
        (None, None) => return Err(Failure::input("no condition given")),
    };
    let domain = match (&input.domain, &input.domain_file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => fs::read_to_string(path).map_err(|e| Failure::io(path, e))?,
        (None, None) => return Err(Failure::input("no domain given")),
    };
    let pc = parse_condition(&condition).map_err(|e| Failure::new(2, "parse", format!("condition: {e}")))?;
    let bx = parse_domain(domain.trim()).map_err(|e| Failure::new(2, "parse", format!("domain: {e}")))?;
    if let Some(v) = pc.free_vars().into_iter().find(|v| bx.index_of(v).is_none()) {
        return Err(Failure::input(format!("variable `{v}` is not declared in the domain")));
    }
    Ok((pc, bx))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, Failure> {
    fs::File::create(path).map(BufWriter::new).map_err(|e| Failure::io(path, e))
}

fn describe(method: &Method) -> String {
    match method {
        Method::Rt => "rt".to_string(),
        Method::Prt { k } => format!("prt k={k}"),
        Method::Art(c) => format!(
            "art n={} n_max={} samples_per_cell={} beta={} retest={} probe_budget={}",
            c.n0, c.n_max, c.samples_per_cell, c.beta, c.retest, c.probe_budget
        ),
    }
}

fn cmd_gen(a: GenArgs) -> Result<String, Failure> {
    let mut out = String::new();
    let (pc, bx) = load(&a.input)?;
    let need_n = || a.n.ok_or_else(|| Failure::input("--n (or --k) is required for prt and art"));
    let method = match a.method {
        MethodArg::Rt => Method::Rt,
        MethodArg::Prt => Method::Prt { k: need_n()? },
        MethodArg::Art => Method::Art(a.knobs.config(need_n()?)),
    };
    let mut rejects = a.dump_rejects.as_deref().map(create).transpose()?;
    let mut write_err = None;
    let report = generate_with_rejects(
        &method,
        &pc,
        &bx,
        a.requested,
        a.seed,
        GenOptions { cap_factor: a.cap_factor },
        &mut |p| {
            if let Some(w) = rejects.as_mut() {
                if let Err(e) = writeln!(w, "{}", bx.format_point(p)) {
                    write_err.get_or_insert(e);
                }
            }
        },
    )?;
    if let (Some(e), Some(path)) = (write_err, &a.dump_rejects) {
        return Err(Failure::io(path, e));
    }
    if let (Some(mut w), Some(path)) = (rejects, &a.dump_rejects) {
        w.flush().map_err(|e| Failure::io(path, e))?;
    }
    verify(&report, &pc, &bx)?;
    print_summary(&mut out, &report, &bx);
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        for p in &report.accepted {
            writeln!(w, "{}", bx.format_point(p)).map_err(|e| Failure::io(path, e))?;
        }
        w.flush().map_err(|e| Failure::io(path, e))?;
    }
    Ok(out)
}

fn verify(report: &GenReport, pc: &PathCondition, bx: &InputBox) -> Result<(), Failure> {
    let sound = report.accepted.len() as u64 == report.requested
        && report.rejected + report.requested == report.generated_total
        && report.accepted.iter().all(|p| bx.contains(p) && eval_condition(pc, &bx.bind(p)).unwrap_or(false));
    if sound {
        Ok(())
    } else {
        Err(Failure::new(5, "invariant", "generated suite failed its consistency check"))
    }
}

fn print_summary(out: &mut String, r: &GenReport, bx: &InputBox) {
    say!(out, "method: {}", describe(&r.method));
    say!(out, "seed: {}", r.seed);
    say!(out, "requested: {}", r.requested);
    say!(out, "generated_total: {}", r.generated_total);
    say!(out, "rejected: {}", r.rejected);
    say!(out, "search_probes: {}", r.search_probes);
    if let Some(grid) = &r.grid {
        say!(out, "cells: {} of {}", r.cells.len(), grid.cell_count());
    }
    if r.truncated {
        say!(out, "note: probe budget ran out during expansion");
    }
    say!(out, "domain: {bx}");
}

fn cmd_bench(a: BenchArgs) -> Result<String, Failure> {
    let mut out = String::new();
    let (pc, bx) = load(&a.input)?;
    let spec = BenchSpec {
        methods: a
            .methods
            .iter()
            .map(|m| match m {
                MethodArg::Rt => MethodKind::Rt,
                MethodArg::Prt => MethodKind::Prt,
                MethodArg::Art => MethodKind::Art,
            })
            .collect(),
        ns: a.n.clone(),
        requested: a.requested.clone(),
        trials: a.trials,
        base_seed: a.seed,
        search: a.knobs.config(1),
        n_max: a.knobs.n_max,
        cap_factor: a.cap_factor,
        jobs: a.jobs,
    };
    let rows = run_bench(&pc, &bx, &spec).map_err(|e| Failure::input(e.to_string()))?;
    let format = match a.format {
        FormatArg::Csv => TableFormat::Csv,
        FormatArg::Tsv => TableFormat::Tsv,
        FormatArg::Markdown => TableFormat::Markdown,
    };
    let table = render_table(&rows, format);
    for row in rows.iter().filter(|r| r.note.is_some()) {
        let n = row.n.map_or_else(|| "-".to_string(), |n| n.to_string());
        eprintln!("note: {} n={} requested={}: {}", row.method, n, row.requested, row.note.as_deref().unwrap_or(""));
    }
    match &a.out {
        Some(path) => fs::write(path, table).map(|()| out).map_err(|e| Failure::io(path, e)),
        None => {
            out.push_str(&table);
            Ok(out)
        }
    }
}

fn cmd_oracle(a: OracleArgs) -> Result<String, Failure> {
    let mut out = String::new();
    let (pc, bx) = load(&a.input)?;
    let mode = match a.montecarlo {
        Some(samples) => OracleMode::MonteCarlo { samples, seed: a.seed },
        None => OracleMode::Exhaustive { limit: a.limit },
    };
    let r = run_oracle(&pc, &bx, a.n, mode).map_err(|e| match e {
        OracleError::TooLarge { .. } | OracleError::RealDomain => {
            Failure::input(format!("{e}; rerun with --montecarlo <N>"))
        }
        _ => Failure::input(e.to_string()),
    })?;
    match r.mode {
        OracleMode::Exhaustive { .. } => say!(out, "mode: exhaustive"),
        OracleMode::MonteCarlo { samples, seed } => say!(out, "mode: montecarlo samples={samples} seed={seed}"),
    }
    say!(out, "points: {}", r.total);
    say!(out, "satisfying: {}", r.satisfying);
    say!(out, "fraction: {:.4}", r.fraction);
    say!(out, "rejection: {:.4}", 1.0 - r.fraction);
    if let Some((lo, hi)) = r.wilson {
        say!(out, "wilson95: {lo:.4}..{hi:.4}");
    }
    if let Some(map) = &r.cells {
        say!(out, "cells (n={}):", map.grid.n());
        for c in map.grid.cells() {
            let label = map.grid.label(&c).map_or_else(String::new, |l| format!("D_{l} "));
            let state = if map.is_valid(&c) { "valid" } else { "empty" };
            say!(out, "  {label}{c} {state}");
        }
    }
    Ok(out)
}

fn cmd_validcells(a: ValidcellsArgs) -> Result<String, Failure> {
    let mut out = String::new();
    let (pc, bx) = load(&a.input)?;
    let cfg = a.knobs.config(a.n);
    let mut rng = pathart::sample::stream(a.seed);
    let first = find_first_valid(&pc, &bx, &cfg, &mut rng)?;
    let remaining = cfg.probe_budget - first.probes;
    let region = if remaining == 0 {
        None
    } else {
        let cfg = SearchConfig { probe_budget: remaining, ..cfg.clone() };
        Some(expand_valid(&pc, &bx, &first.grid, &first.cell, &first.witness, &cfg, &mut rng)?)
    };
    let grid = &first.grid;
    say!(out, "seed: {}", a.seed);
    say!(out, "grid: n={} cells={}", grid.n(), grid.cell_count());
    let mut cells: Vec<_> = match &region {
        Some(r) => r.cells.iter().map(|(c, w)| (c.clone(), w.clone())).collect(),
        None => vec![(first.cell.clone(), first.witness.clone())],
    };
    cells.sort_by_key(|(c, _)| grid.label(c).unwrap_or(0));
    let expand = region.as_ref().map_or(0, |r| r.probes_used);
    say!(out, "probes: {} search + {} expansion", first.probes, expand);
    if region.as_ref().is_none_or(|r| r.truncated) {
        say!(out, "note: probe budget ran out during expansion");
    }
    say!(out, "valid: {}", cells.len());
    for (c, w) in &cells {
        let label = grid.label(c).map_or_else(String::new, |l| format!("D_{l} "));
        say!(out, "  {label}{c} witness {}", bx.format_point(w));
    }
    Ok(out)
}
