//! Command-line surface for the zero-pattern analysis library.
//!
//! Exit codes: 0 = result found, 2 = not found within the cutoff, 3 = no
//! product in the class exists, 1 = usage or parse error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sia_core::classes;
use sia_core::families;
use sia_core::indices::{self, IndexResult, MatrixClass};
use sia_core::io::{self, MatrixSetDoc};
use sia_core::pattern::MatrixSet;
use sia_core::reductions;
use sia_core::search::{self, SearchOptions, SearchSummary};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (matrix-set schema 1)");

type CliResult<T> = Result<T, String>;

#[derive(Parser)]
#[command(name = "sia", version = VERSION, about = "Zero-pattern classes and shortest-product indices of stochastic matrix sets")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Clone)]
struct RunConfig {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    /// Worker threads for the search; defaults to SIA_WORKERS or the
    /// available parallelism
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for randomized sampling modes. Every current command is fully
    /// deterministic; the seed is recorded for reproducible pipelines.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Entries at or below this value count as zero when reading numeric
    /// matrices
    #[arg(long, global = true, default_value_t = 0.0)]
    tolerance: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Class memberships of every matrix in a matrix-set file
    Classify {
        /// Matrix-set JSON file
        file: PathBuf,
    },
    /// Shortest-product index of a matrix set
    Index {
        /// Matrix-set JSON file
        file: PathBuf,
        /// Class to search for
        #[arg(long, value_enum, default_value_t = ClassArg::Sia)]
        class: ClassArg,
        /// Largest product length to explore
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cutoff: Option<u64>,
    },
    /// Exhaustive maximum SIA-index over automaton sets of one dimension
    Search {
        /// Dimension; may be repeated to sweep several dimensions
        #[arg(long = "n", required = true)]
        dims: Vec<usize>,
        /// Matrices per set
        #[arg(long = "m", default_value_t = 2)]
        set_size: usize,
        /// Restrict to initially connected sets
        #[arg(long)]
        ic: bool,
        /// Enumerate one representative per relabeling class
        #[arg(long)]
        canonical: bool,
        /// SIA-index cutoff per set (default: the cubic bound)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cutoff: Option<u64>,
        /// Largest universe size the run may enumerate
        #[arg(long, default_value_t = search::DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        /// Extremal examples kept per summary
        #[arg(long, default_value_t = search::DEFAULT_MAX_EXAMPLES)]
        max_examples: usize,
        /// Write the (n, max_index, 2n) growth-curve CSV to this file
        #[arg(long)]
        growth_out: Option<PathBuf>,
        /// Dump extremal example sets as matrix-set JSON files into this
        /// directory
        #[arg(long)]
        dump_extremal: Option<PathBuf>,
    },
    /// Emit a named matrix family as matrix-set JSON
    Family {
        #[arg(long, value_enum)]
        name: FamilyArg,
        #[arg(long = "n")]
        n: usize,
        /// Output file (stdout when absent)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Encode a hardness-reduction instance as a matrix set
    Reduce {
        #[arg(long, value_enum)]
        kind: ReduceKind,
        /// 3sat: DIMACS CNF file; setcover: JSON {"universe": n, "sets": [[..]]}
        file: PathBuf,
        /// Output file (stdout when absent)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Pc,
    Scr,
    Sar,
    Sia,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cerny,
    Wielandt,
    Line,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    #[value(name = "3sat")]
    ThreeSat,
    Setcover,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let config = cli.config.clone();
    match cli.command {
        Command::Classify { file } => cmd_classify(&file, &config),
        Command::Index { file, class, cutoff } => cmd_index(&file, class, cutoff, &config),
        Command::Search {
            dims,
            set_size,
            ic,
            canonical,
            cutoff,
            budget,
            max_examples,
            growth_out,
            dump_extremal,
        } => cmd_search(
            &dims,
            set_size,
            ic,
            canonical,
            cutoff,
            budget,
            max_examples,
            growth_out.as_deref(),
            dump_extremal.as_deref(),
            &config,
        ),
        Command::Family { name, n, out } => cmd_family(name, n, out.as_deref()),
        Command::Reduce { kind, file, out } => cmd_reduce(kind, &file, out.as_deref()),
    }
}

fn load_matrix_set(path: &Path, tolerance: f64) -> CliResult<MatrixSet> {
    if !tolerance.is_finite() || tolerance < 0.0 {
        return Err(format!("zero tolerance must be a nonnegative number, got {tolerance}"));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let doc = io::parse_matrix_set_doc(&text).map_err(|e| e.to_string())?;
    doc.to_matrix_set(tolerance).map_err(|e| e.to_string())
}

fn write_or_print(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn cmd_classify(file: &Path, config: &RunConfig) -> CliResult<ExitCode> {
    let set = load_matrix_set(file, config.tolerance)?;
    let mut reports = Vec::with_capacity(set.len());
    for i in 0..set.len() {
        let report = classes::classify(set.pattern(i)).map_err(|e| e.to_string())?;
        reports.push((set.label(i).to_string(), report));
    }
    match config.output {
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = reports
                .iter()
                .map(|(label, r)| {
                    serde_json::json!({
                        "label": label,
                        "is_positive_column": r.is_positive_column,
                        "is_scrambling": r.is_scrambling,
                        "is_sarymsakov": r.is_sarymsakov,
                        "is_sia": r.is_sia,
                        "sia_witness_power": r.sia_witness_power,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        }
        OutputFormat::Csv => {
            println!("label,is_positive_column,is_scrambling,is_sarymsakov,is_sia,sia_witness_power");
            for (label, r) in &reports {
                println!(
                    "{label},{},{},{},{},{}",
                    r.is_positive_column,
                    r.is_scrambling,
                    r.is_sarymsakov,
                    r.is_sia,
                    r.sia_witness_power.map_or(String::new(), |p| p.to_string())
                );
            }
        }
        OutputFormat::Text => {
            for (label, r) in &reports {
                let power = match r.sia_witness_power {
                    Some(p) => format!(" (positive column at power {p})"),
                    None => String::new(),
                };
                println!(
                    "{label}: positive-column={} scrambling={} sarymsakov={} sia={}{power}",
                    r.is_positive_column, r.is_scrambling, r.is_sarymsakov, r.is_sia
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn compute_index(set: &MatrixSet, class: MatrixClass, cutoff: Option<u64>) -> CliResult<IndexResult> {
    let result = match class {
        MatrixClass::Sia => indices::sia_index(set, cutoff),
        other => {
            let cutoff = cutoff.unwrap_or_else(|| indices::default_bfs_cutoff(set.n()));
            indices::class_index_bfs(set, other, cutoff)
        }
    };
    result.map_err(|e| e.to_string())
}

fn cmd_index(
    file: &Path,
    class: ClassArg,
    cutoff: Option<u64>,
    config: &RunConfig,
) -> CliResult<ExitCode> {
    let set = load_matrix_set(file, config.tolerance)?;
    let classes = match class {
        ClassArg::Pc => vec![MatrixClass::PositiveColumn],
        ClassArg::Scr => vec![MatrixClass::Scrambling],
        ClassArg::Sar => vec![MatrixClass::Sarymsakov],
        ClassArg::Sia => vec![MatrixClass::Sia],
        ClassArg::All => vec![
            MatrixClass::Sia,
            MatrixClass::Sarymsakov,
            MatrixClass::Scrambling,
            MatrixClass::PositiveColumn,
        ],
    };
    let mut results = Vec::with_capacity(classes.len());
    for c in classes {
        results.push(compute_index(&set, c, cutoff)?);
    }
    match config.output {
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "class": r.class.to_string(),
                        "value": r.value,
                        "witness": r.witness.as_ref().map(|w| w.render(set.labels())),
                        "witness_symbols": r.witness.as_ref().map(|w| w.symbols().to_vec()),
                        "explored_up_to": r.explored_up_to,
                        "no_product": r.no_product,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        }
        OutputFormat::Csv => {
            println!("class,value,witness,explored_up_to,no_product");
            for r in &results {
                println!(
                    "{},{},{},{},{}",
                    r.class,
                    r.value.map_or(String::new(), |v| v.to_string()),
                    r.witness.as_ref().map_or(String::new(), |w| w.render(set.labels())),
                    r.explored_up_to,
                    r.no_product
                );
            }
        }
        OutputFormat::Text => {
            for r in &results {
                match (&r.value, &r.witness) {
                    (Some(v), Some(w)) => {
                        println!("{}-index = {v} (witness {})", r.class, w.render(set.labels()));
                    }
                    _ if r.no_product => {
                        println!("{}-index: no product in the class exists", r.class);
                    }
                    _ => {
                        println!(
                            "{}-index: not found within cutoff {}",
                            r.class, r.explored_up_to
                        );
                    }
                }
            }
        }
    }
    if results.iter().any(|r| r.no_product) {
        Ok(ExitCode::from(3))
    } else if results.iter().any(|r| r.value.is_none()) {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn worker_count(config: &RunConfig) -> usize {
    if let Some(w) = config.workers {
        return w.max(1);
    }
    if let Ok(value) = std::env::var("SIA_WORKERS") {
        if let Ok(w) = value.parse::<usize>() {
            return w.max(1);
        }
    }
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    dims: &[usize],
    set_size: usize,
    ic: bool,
    canonical: bool,
    cutoff: Option<u64>,
    budget: u64,
    max_examples: usize,
    growth_out: Option<&Path>,
    dump_extremal: Option<&Path>,
    config: &RunConfig,
) -> CliResult<ExitCode> {
    let workers = worker_count(config);
    let mut summaries: Vec<SearchSummary> = Vec::with_capacity(dims.len());
    for &n in dims {
        let opts = SearchOptions {
            ic_only: ic,
            canonical,
            cutoff,
            workers,
            budget,
            max_examples,
            ..SearchOptions::new(n, set_size)
        };
        summaries.push(search::max_sia_index(&opts).map_err(|e| e.to_string())?);
    }
    match config.output {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&summaries).unwrap());
        }
        OutputFormat::Csv => {
            println!("{}", SearchSummary::csv_header());
            for s in &summaries {
                println!("{}", s.csv_row());
            }
        }
        OutputFormat::Text => {
            for s in &summaries {
                println!(
                    "n={} m={} ic={} canonical={}: max SIA-index {} over {} sets \
                     ({} extremal classes) in {} ms",
                    s.n,
                    s.set_size,
                    s.ic_only,
                    s.canonical,
                    s.max_index,
                    s.enumerated,
                    s.extremal_count,
                    s.wall_time_ms
                );
            }
            println!("{}", SearchSummary::csv_header());
            for s in &summaries {
                println!("{}", s.csv_row());
            }
        }
    }
    if let Some(path) = growth_out {
        std::fs::write(path, search::emit_growth_curve(&summaries))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if let Some(dir) = dump_extremal {
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        for s in &summaries {
            for (i, ex) in s.extremal_examples.iter().enumerate() {
                let path = dir.join(format!("extremal_n{}_m{}_{}.json", s.n, s.set_size, i));
                std::fs::write(&path, ex.set.to_json_string())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_family(name: FamilyArg, n: usize, out: Option<&Path>) -> CliResult<ExitCode> {
    let set = match name {
        FamilyArg::Cerny => {
            if n < 2 {
                return Err("the Černý family needs --n 2 or larger".into());
            }
            families::cerny_set(n)
        }
        FamilyArg::Wielandt => {
            if n < 3 {
                return Err("the Wielandt family needs --n 3 or larger".into());
            }
            families::wielandt_set(n)
        }
        FamilyArg::Line => {
            if n < 2 {
                return Err("the line automaton needs --n 2 or larger".into());
            }
            MatrixSet::new(vec![families::line_automaton(n)]).map_err(|e| e.to_string())?
        }
    };
    write_or_print(out, &MatrixSetDoc::from_set(&set).to_json_string())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(kind: ReduceKind, file: &Path, out: Option<&Path>) -> CliResult<ExitCode> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let doc = match kind {
        ReduceKind::ThreeSat => {
            let formula = io::parse_dimacs(&text).map_err(|e| e.to_string())?;
            let (set, threshold) = reductions::encode_3sat(&formula);
            let mut doc = MatrixSetDoc::from_set_uniform(&set).map_err(|e| e.to_string())?;
            doc.threshold = Some(threshold);
            eprintln!(
                "encoded {} variables, {} clauses as {} matrices of dimension {}; \
                 satisfiable iff the SIA-index is at most {threshold}",
                formula.variable_count(),
                formula.clauses().len(),
                set.len(),
                set.n()
            );
            doc
        }
        ReduceKind::Setcover => {
            let cover = io::parse_set_cover_doc(&text)
                .and_then(|d| d.to_instance())
                .map_err(|e| e.to_string())?;
            let set = reductions::encode_set_cover(&cover);
            eprintln!(
                "encoded a universe of {} elements and {} sets as {} matrices of dimension {}; \
                 the SIA-index equals the minimum cover size",
                cover.universe_size(),
                cover.family().len(),
                set.len(),
                set.n()
            );
            MatrixSetDoc::from_set_uniform(&set).map_err(|e| e.to_string())?
        }
    };
    write_or_print(out, &doc.to_json_string())?;
    Ok(ExitCode::SUCCESS)
}
