//! `follab`: command-line front end for level-tree foliations.
//!
//! Exit status 0 means success, 1 invalid input, 2 a mathematical check that
//! failed (invalid or non-admissible tree, violated bound, rejected
//! certificate).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use follab_core::accounting::{
    check_certificate, is_vacuous, load_knot_table, product_lower_bound, product_report,
    product_report_tsv, schubert_sum, AccountingCertificate, TangleProductParams,
};
use follab_core::census::{max_saddle_census_with, CensusOptions, CensusProgress};
use follab_core::moves::{
    eliminate_all, eliminate_outermost, finger_move, reduce_five, split_outermost,
    EliminationStrategy, Orientation, ThroughSide,
};
use follab_core::predicates::is_admissible;
use follab_core::{dot, validate, Error, LevelTree};

const CACHE_ENV: &str = "FOLLAB_CACHE_DIR";

#[derive(Parser)]
#[command(name = "follab", version, about = "Level trees of Morse foliations on marked spheres")]
struct Cli {
    /// Print JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural validity of a foliation file.
    Validate { file: PathBuf },
    /// Check admissibility (exit 2 if not admissible).
    Check { file: PathBuf },
    /// Exhaustive saddle-count census for k marks.
    Census(CensusArgs),
    /// Apply a saddle-creating move.
    #[command(subcommand)]
    Move(MoveCommand),
    /// Cancel saddles through their outermost edges.
    Eliminate(EliminateArgs),
    /// Five-saddle reduction at a non-standard saddle.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        saddle: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bound on the bridge number of an n-strand tangle product.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        beta1: u64,
        #[arg(long)]
        beta2: u64,
    },
    /// Bridge number of a connected sum.
    Schubert {
        #[arg(long)]
        beta1: u64,
        #[arg(long)]
        beta2: u64,
    },
    /// Verify an accounting certificate (exit 2 if rejected).
    Certify { file: PathBuf },
    /// Bound table over all pairs of a knot table.
    Products {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        n: u64,
    },
    /// Graphviz drawing of a foliation.
    Dot { file: PathBuf },
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    k: usize,
    /// Levels enumerated past the 5k-8 bound.
    #[arg(long, default_value_t = 1)]
    probe: usize,
    /// Identify a tree with its flip.
    #[arg(long)]
    mod_flip: bool,
    /// Write every saddle-maximal class as a foliation file here.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Stop after examining this many candidate trees.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    max_seconds: Option<u64>,
}

#[derive(Subcommand)]
enum MoveCommand {
    /// Push a mark through a new saddle.
    Finger {
        file: PathBuf,
        #[arg(long)]
        edge: String,
        /// Index of the mark on the edge, from the bottom.
        #[arg(long, default_value_t = 0)]
        mark: usize,
        #[arg(long, value_enum, default_value_t = OrientationArg::PushDown)]
        orientation: OrientationArg,
        /// Defaults to the side that matches the orientation.
        #[arg(long, value_enum)]
        through: Option<ThroughArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split an outermost edge's marks between three new edges.
    Split {
        file: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        below: usize,
        #[arg(long)]
        cap: usize,
        #[arg(long)]
        keep: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EliminateArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::MinCost)]
    strategy: StrategyArg,
    /// Cancel only this saddle (requires --edge).
    #[arg(long, requires = "edge")]
    saddle: Option<String>,
    /// Outermost edge of --saddle.
    #[arg(long, requires = "saddle")]
    edge: Option<String>,
    /// Where to write the resulting tree.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    PushDown,
    PushUp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThroughArg {
    Join,
    Pair,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    MinCost,
}

/// Failure of a subcommand, mapped onto the exit status.
enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Validate { file } => {
            let report = validate(&read_tree(file)?);
            emit(json, &report, || format!("{report}\n"));
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Check { file } => {
            let report = is_admissible(&read_tree(file)?)?;
            emit(json, &report, || report.to_string());
            if report.admissible {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Census(args) => census(json, args),
        Command::Move(MoveCommand::Finger {
            file,
            edge,
            mark,
            orientation,
            through,
            out,
        }) => {
            let orientation = match orientation {
                OrientationArg::PushDown => Orientation::PushDown,
                OrientationArg::PushUp => Orientation::PushUp,
            };
            let through = match (through, orientation) {
                (Some(ThroughArg::Join), _) | (None, Orientation::PushDown) => {
                    ThroughSide::ContinuationOnJoin
                }
                (Some(ThroughArg::Pair), _) | (None, Orientation::PushUp) => {
                    ThroughSide::ContinuationOnPair
                }
            };
            let tree = finger_move(&read_tree(file)?, edge, *mark, orientation, through)?;
            write_tree(&tree, out.as_deref())
        }
        Command::Move(MoveCommand::Split {
            file,
            edge,
            below,
            cap,
            keep,
            out,
        }) => {
            let tree = split_outermost(&read_tree(file)?, edge, *below, *cap, *keep)?;
            write_tree(&tree, out.as_deref())
        }
        Command::Eliminate(args) => eliminate(json, args),
        Command::Reduce { file, saddle, out } => {
            let tree = reduce_five(&read_tree(file)?, saddle)?;
            write_tree(&tree, out.as_deref())
        }
        Command::Bound { n, beta1, beta2 } => {
            let params = TangleProductParams::new(*n, *beta1, *beta2)?;
            let bound = product_lower_bound(params);
            let value = json!({
                "n": n, "beta1": beta1, "beta2": beta2,
                "lower_bound": bound, "vacuous": is_vacuous(bound),
            });
            emit(json, &value, || {
                if is_vacuous(bound) {
                    format!("{bound}\n(vacuous: below 1)\n")
                } else {
                    format!("{bound}\n")
                }
            });
            Ok(())
        }
        Command::Schubert { beta1, beta2 } => {
            TangleProductParams::new(1, *beta1, *beta2)?;
            let value = schubert_sum(*beta1, *beta2);
            emit(json, &json!({ "beta1": beta1, "beta2": beta2, "schubert": value }), || {
                format!("{value}\n")
            });
            Ok(())
        }
        Command::Certify { file } => {
            let cert = AccountingCertificate::from_json(&read_text(file)?)?;
            let report = check_certificate(&cert);
            emit(json, &report, || report.to_string());
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Products { table, n } => {
            let rows = product_report(&load_knot_table(table)?, *n)?;
            emit(json, &rows, || product_report_tsv(&rows));
            Ok(())
        }
        Command::Dot { file } => {
            print!("{}", dot::to_dot(&read_tree(file)?)?);
            Ok(())
        }
    }
}

fn census(json: bool, args: &CensusArgs) -> Outcome {
    let options = CensusOptions {
        threads: args.threads,
        max_nodes: args.max_nodes,
        max_duration: args.max_seconds.map(Duration::from_secs),
        mod_flip: args.mod_flip,
        chunk: 0,
    };
    let cache = std::env::var_os(CACHE_ENV).map(|dir| {
        let flip = if args.mod_flip { "-flip" } else { "" };
        PathBuf::from(dir).join(format!("census-k{}-p{}{flip}.json", args.k, args.probe))
    });
    let resume = match &cache {
        Some(path) if path.exists() => {
            let progress: CensusProgress = serde_json::from_str(&read_text(path)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            eprintln!("resuming from {}", path.display());
            Some(progress)
        }
        _ => None,
    };

    let (report, enumeration) = match max_saddle_census_with(args.k, args.probe, &options, resume) {
        Ok(done) => done,
        Err(Error::ResourceCapExceeded(progress)) => {
            let Some(path) = cache else {
                return Err(Failure::Input(format!(
                    "resource cap reached after {} candidates; set {CACHE_ENV} to keep resumable state",
                    progress.nodes_examined
                )));
            };
            if let Some(dir) = path.parent() {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
            }
            let state = serde_json::to_string(&progress).map_err(Error::from)?;
            fs::write(&path, state).map_err(|e| io_failure(&path, e))?;
            return Err(Failure::Input(format!(
                "resource cap reached after {} candidates; progress saved to {}, rerun to resume",
                progress.nodes_examined,
                path.display()
            )));
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = &cache {
        if path.exists() {
            fs::remove_file(path).map_err(|e| io_failure(path, e))?;
        }
    }

    if let Some(dir) = &args.witness_dir {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        for (i, class) in enumeration.extremal().enumerate() {
            let path = dir.join(format!("k{}_s{}_{i}.json", args.k, class.s));
            fs::write(&path, class.tree.to_json() + "\n").map_err(|e| io_failure(&path, e))?;
        }
    }

    emit(json, &report, || report.to_string());
    if report.bound_respected {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn eliminate(json: bool, args: &EliminateArgs) -> Outcome {
    let tree = read_tree(&args.file)?;
    let (result, ledger) = match (&args.saddle, &args.edge) {
        (Some(saddle), Some(edge)) => {
            let (result, cost) = eliminate_outermost(&tree, saddle, edge)?;
            let mut ledger = follab_core::moves::EliminationLedger::default();
            ledger.push(saddle.clone(), cost);
            (result, ledger)
        }
        _ => {
            let StrategyArg::MinCost = args.strategy;
            eliminate_all(&tree, EliminationStrategy::MinCostOutermost)?
        }
    };
    if let Some(path) = &args.out {
        fs::write(path, result.to_json() + "\n").map_err(|e| io_failure(path, e))?;
    }
    if json {
        let value = match &args.out {
            Some(_) => json!({ "ledger": ledger }),
            None => json!({ "ledger": ledger, "tree": result }),
        };
        print_json(&value);
    } else {
        println!("{:>4}  {:<16} {:>5}", "step", "saddle", "cost");
        for (i, step) in ledger.steps.iter().enumerate() {
            println!("{i:>4}  {:<16} {:>5}", step.saddle, step.cost);
        }
        println!("total cost: {}", ledger.total_cost);
        if let (Some(lo), Some(hi)) = (ledger.min_step_cost(), ledger.max_step_cost()) {
            println!("per-step cost: min {lo}, max {hi}");
        }
        if args.out.is_none() {
            println!("{}", result.to_json());
        }
    }
    Ok(())
}

fn emit<T: serde::Serialize + ?Sized>(json: bool, value: &T, human: impl FnOnce() -> String) {
    if json {
        print_json(value);
    } else {
        print!("{}", human());
    }
}

fn print_json<T: serde::Serialize + ?Sized>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn read_tree(path: &Path) -> Result<LevelTree, Failure> {
    LevelTree::from_json(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_tree(tree: &LevelTree, out: Option<&Path>) -> Outcome {
    let text = tree.to_json() + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
