//! `mpl` — finite abstractions and reachability for max-plus linear
//! systems, working on the JSON formats of the core library.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal invariant violation.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use mpl_core::abstraction::TransitionSystem;
use mpl_core::bench::bench_run;
use mpl_core::instance::{random_row_finite, BenchConfig};
use mpl_core::io;
use mpl_core::pwa::{generate_partition, generate_pwa};
use mpl_core::reach::{
    backward_reach_with, forward_reach_with, image_mpl_with, preimage_mpl_with, DbmUnion,
    ImageBackend,
};

#[derive(Parser)]
#[command(
    name = "mpl",
    version,
    about = "Tropical abstractions of max-plus linear systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the PWA regions (the disjoint partition by default)
    Pwa {
        /// System matrix JSON file
        matrix: PathBuf,
        /// Keep the covering regions instead of the disjoint partition
        #[arg(long)]
        no_partition: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build the abstract transition system
    Abstract {
        matrix: PathBuf,
        /// Write the transition system as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the transition graph as GraphViz DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Image of a state set under the system
    Image(ImageArgs),
    /// Inverse image of a state set under the system
    Preimage(ImageArgs),
    /// Forward or backward reach sets, one JSON document per step
    Reach {
        matrix: PathBuf,
        /// Initial (forward) or final (backward) state set
        set: PathBuf,
        #[arg(long, conflicts_with = "backward")]
        forward: bool,
        #[arg(long)]
        backward: bool,
        /// Horizon N
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Use the lifting oracle instead of the direct routines
        #[arg(long)]
        oracle: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the random-instance benchmark and report CSV
    Bench {
        /// Dimensions: a range "3..8" (inclusive) or a list "3,5,7"
        #[arg(long, default_value = "3..8")]
        dims: String,
        #[arg(long, default_value_t = 10)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reach horizon N
        #[arg(long, default_value_t = 10)]
        steps: u32,
        #[arg(long, default_value_t = 2)]
        finite_per_row: usize,
        #[arg(long, default_value_t = 1)]
        value_min: i64,
        #[arg(long, default_value_t = 100)]
        value_max: i64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Emit one random row-finite instance
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u32,
        #[arg(long, default_value_t = 2)]
        finite_per_row: usize,
        #[arg(long, default_value_t = 1)]
        value_min: i64,
        #[arg(long, default_value_t = 100)]
        value_max: i64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ImageArgs {
    matrix: PathBuf,
    /// State set: a DBM document or a union document
    set: PathBuf,
    /// Use the lifting oracle instead of the direct routines
    #[arg(long)]
    oracle: bool,
    /// Emit parts as computed, without forcing canonical form
    #[arg(long)]
    raw: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

enum CliError {
    Core(mpl_core::Error),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<mpl_core::Error> for CliError {
    fn from(e: mpl_core::Error) -> Self {
        CliError::Core(e)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn backend(oracle: bool) -> ImageBackend {
    if oracle {
        ImageBackend::LiftingOracle
    } else {
        ImageBackend::Direct
    }
}

/// Parse "3..8" (inclusive), "3,5,7" or "6".
fn parse_dims(arg: &str) -> Result<Vec<usize>, CliError> {
    let bad = |m: &str| CliError::Io(format!("invalid --dims \"{arg}\": {m}"));
    if let Some((lo, hi)) = arg.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| bad("expected a number before .."))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| bad("expected a number after .."))?;
        if lo > hi {
            return Err(bad("empty range"));
        }
        return Ok((lo..=hi).collect());
    }
    arg.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| bad("expected numbers separated by commas"))
        })
        .collect()
}

fn union_to_output(union: &DbmUnion, raw: bool) -> String {
    if raw {
        io::union_to_json(union)
    } else {
        let canonical =
            DbmUnion::from_zones(union.n(), union.parts().iter().map(|d| d.canonical_form()));
        io::union_to_json(&canonical)
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Pwa {
            matrix,
            no_partition,
            out,
        } => {
            let m = io::parse_matrix(&read(&matrix)?)?;
            let system = if no_partition {
                generate_pwa(&m)?
            } else {
                generate_partition(&m)?
            };
            emit(out.as_deref(), &(io::pwa_to_json(&system) + "\n"))
        }
        Command::Abstract { matrix, json, dot } => {
            let m = io::parse_matrix(&read(&matrix)?)?;
            let partition = generate_partition(&m)?;
            let ts = TransitionSystem::build(&partition)?;
            if json.is_none() && dot.is_none() {
                return emit(None, &(ts.to_json() + "\n"));
            }
            if let Some(path) = json {
                emit(Some(&path), &(ts.to_json() + "\n"))?;
            }
            if let Some(path) = dot {
                emit(Some(&path), &ts.to_dot())?;
            }
            Ok(())
        }
        Command::Image(args) => {
            let m = io::parse_matrix(&read(&args.matrix)?)?;
            let set = io::parse_union(&read(&args.set)?)?;
            let partition = generate_partition(&m)?;
            let mut parts = Vec::new();
            for part in set.parts() {
                parts.extend(
                    image_mpl_with(part, &partition, backend(args.oracle))?
                        .parts()
                        .to_vec(),
                );
            }
            let union = DbmUnion::from_zones(set.n(), parts);
            emit(
                args.out.as_deref(),
                &(union_to_output(&union, args.raw) + "\n"),
            )
        }
        Command::Preimage(args) => {
            let m = io::parse_matrix(&read(&args.matrix)?)?;
            let set = io::parse_union(&read(&args.set)?)?;
            let partition = generate_partition(&m)?;
            let mut parts = Vec::new();
            for part in set.parts() {
                parts.extend(
                    preimage_mpl_with(part, &partition, backend(args.oracle))?
                        .parts()
                        .to_vec(),
                );
            }
            let union = DbmUnion::from_zones(set.n(), parts);
            emit(
                args.out.as_deref(),
                &(union_to_output(&union, args.raw) + "\n"),
            )
        }
        Command::Reach {
            matrix,
            set,
            forward,
            backward,
            steps,
            oracle,
            out,
        } => {
            if forward == backward {
                return Err(CliError::Io(
                    "reach needs exactly one of --forward or --backward".into(),
                ));
            }
            let m = io::parse_matrix(&read(&matrix)?)?;
            let set = io::parse_union(&read(&set)?)?;
            let partition = generate_partition(&m)?;
            let sets = if forward {
                forward_reach_with(&set, &partition, steps, backend(oracle))?
            } else {
                backward_reach_with(&set, &partition, steps, backend(oracle))?
            };
            let mut text = String::new();
            for (idx, step) in sets.iter().enumerate() {
                let k = if forward {
                    idx as i64 + 1
                } else {
                    -(idx as i64 + 1)
                };
                text.push_str(&io::reach_step_to_json(k, step));
                text.push('\n');
            }
            emit(out.as_deref(), &text)
        }
        Command::Bench {
            dims,
            trials,
            seed,
            steps,
            finite_per_row,
            value_min,
            value_max,
            out,
        } => {
            let cfg = BenchConfig {
                dims: parse_dims(&dims)?,
                trials,
                finite_per_row,
                value_range: (value_min, value_max),
                seed,
                horizon: steps,
            };
            let report = bench_run(&cfg)?;
            emit(out.as_deref(), &report.to_csv())
        }
        Command::Gen {
            n,
            seed,
            trial,
            finite_per_row,
            value_min,
            value_max,
            out,
        } => {
            let cfg = BenchConfig {
                dims: vec![n],
                finite_per_row,
                value_range: (value_min, value_max),
                seed,
                ..BenchConfig::default()
            };
            let matrix = random_row_finite(n, &cfg, trial)?;
            emit(out.as_deref(), &(io::matrix_to_json(&matrix) + "\n"))
        }
    }
}
