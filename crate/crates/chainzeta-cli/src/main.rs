//! Command line front end: generate random DAGs, precompute transform
//! caches, apply zeta/moebius transforms to vectors, run self-checks and
//! benchmark the pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure (bad input
//! data, cycles, mismatched sizes, corrupt caches), 3 I/O failure.

mod bench;
mod verify;

use chainzeta::io::{self, IoError, VectorData, VectorFormat};
use chainzeta::{
    antichain_partition, build_dag, compute_niv, decompose, decompose_explicit, decompose_path_cover,
    generate_erdos_renyi, moebius_fast, moebius_parallel_timed, parallelism_report, zeta_fast,
    zeta_parallel_timed, ChainDecomposition, ChainError, Dag, DagError, LevelTiming, ParallelOptions,
    TransformError,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "chainzeta", version, about = "Zeta and moebius transforms on posets via chain decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformKind {
    Zeta,
    Moebius,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Binary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Decomposition {
    /// Minimum chain count via matching on the transitive closure.
    Minimal,
    /// Path cover on direct edges; possibly more chains, far cheaper.
    PathCover,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random DAG and write it as an edge list.
    Gen {
        /// Number of vertices.
        n: usize,
        /// Target average total degree.
        #[arg(long, default_value_t = 4.0)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output edge-list path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Read an edge list, build the chain decomposition, niv matrix and
    /// level schedule, and write them to a binary cache.
    Precompute {
        /// Input edge-list path.
        input: PathBuf,
        /// Output cache path.
        #[arg(long)]
        cache: PathBuf,
        /// Inject an explicit decomposition: one chain per line, vertex
        /// labels from top to bottom.
        #[arg(long)]
        chains: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Decomposition::Minimal)]
        decomposition: Decomposition,
        /// Print the mapping from 1-based vector line numbers to vertex
        /// labels.
        #[arg(long)]
        print_labels: bool,
        /// Also print the work/depth report of the level schedule.
        #[arg(long)]
        verbose: bool,
    },
    /// Apply a transform to a vector file using a precomputed cache.
    Transform {
        kind: TransformKind,
        #[arg(long)]
        cache: PathBuf,
        /// Input vector path (text or binary, sniffed).
        #[arg(long)]
        vector: PathBuf,
        /// Output vector path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "CHAINZETA_THREADS", default_value_t = 1)]
        threads: usize,
        /// Output encoding.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print per-level timings.
        #[arg(long)]
        verbose: bool,
    },
    /// Run the self-check suites; optionally validate a graph or cache file.
    Verify {
        /// Edge-list or cache file to validate in addition to the built-in
        /// checks; caches are recognized by their magic bytes.
        input: Option<PathBuf>,
        /// Edge-list file a cache must belong to.
        #[arg(long)]
        source: Option<PathBuf>,
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Largest random instance.
        #[arg(long, default_value_t = 120)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the pipeline over a parameter grid and write one CSV row per
    /// phase (decompose, niv, zeta, moebius).
    Bench {
        /// Vertex counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Average degrees, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "4")]
        delta: Vec<f64>,
        /// Seeds, comma separated; one pipeline run per seed.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        /// Worker counts for the transform phases, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1", env = "CHAINZETA_THREADS")]
        threads: Vec<usize>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Decomposition::PathCover)]
        decomposition: Decomposition,
        /// Print one progress line per configuration.
        #[arg(long)]
        verbose: bool,
    },
}

enum CliError {
    Validation(String),
    Io(String),
}

impl From<DagError> for CliError {
    fn from(e: DagError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when downstream closes the pipe, like standard filters.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen { n, delta, seed, out } => cmd_gen(n, delta, seed, &out),
        Command::Precompute { input, cache, chains, decomposition, print_labels, verbose } => {
            cmd_precompute(&input, &cache, chains.as_deref(), decomposition, print_labels, verbose)
        }
        Command::Transform { kind, cache, vector, out, threads, format, verbose } => {
            cmd_transform(kind, &cache, &vector, &out, threads, format, verbose)
        }
        Command::Verify { input, source, trials, max_n, seed } => {
            verify::run(input.as_deref(), source.as_deref(), trials, max_n, seed)
        }
        Command::Bench { n, delta, seeds, threads, out, decomposition, verbose } => {
            bench::run(&bench::Grid { n, delta, seeds, threads, decomposition, verbose }, &out)
        }
    }
}

fn cmd_gen(n: usize, delta: f64, seed: u64, out: &Path) -> Result<(), CliError> {
    let d = generate_erdos_renyi(n, delta, seed)?;
    io::write_edge_list(&d, out)?;
    println!("wrote {}: n={} edges={}", out.display(), d.n(), d.edge_count());
    Ok(())
}

/// Builds the decomposition a precompute or bench run asked for.
fn decompose_as(d: &Dag, decomposition: Decomposition) -> ChainDecomposition {
    match decomposition {
        Decomposition::Minimal => decompose(d),
        Decomposition::PathCover => decompose_path_cover(d),
    }
}

fn cmd_precompute(
    input: &Path,
    cache: &Path,
    chains: Option<&Path>,
    decomposition: Decomposition,
    print_labels: bool,
    verbose: bool,
) -> Result<(), CliError> {
    let (bytes, source_hash) = io::read_and_hash(input)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Validation(format!("{}: not UTF-8", input.display())))?;
    let (edges, vertices) = io::parse_edge_list(&text, &input.display().to_string())?;
    let d = build_dag(&edges, &vertices)?;

    let cd = match chains {
        Some(path) => {
            let listed = io::read_chains_file(path)?;
            let resolved = resolve_chains(&d, &listed)?;
            decompose_explicit(&d, &resolved)?
        }
        None => decompose_as(&d, decomposition),
    };
    let nm = compute_niv(&d, &cd);
    let ap = antichain_partition(&d);
    io::write_cache(cache, source_hash, d.labels(), &cd, &nm, &ap)?;
    println!(
        "k={} ell={} q={} nnz={} edges={}",
        cd.k(),
        ap.len(),
        cd.longest_chain(),
        nm.nnz(),
        d.edge_count()
    );
    if verbose {
        let report = parallelism_report(&nm, &cd, &ap);
        println!(
            "work={} zeta_depth<={} moebius_depth<={} zeta_parallelism>={:.1} moebius_parallelism>={:.1}",
            report.work,
            report.zeta_depth_bound,
            report.moebius_depth_bound,
            report.zeta_avg_parallelism_lb,
            report.moebius_avg_parallelism_lb
        );
    }
    if print_labels {
        for (v, label) in d.labels().iter().enumerate() {
            println!("{} {label}", v + 1);
        }
    }
    Ok(())
}

/// Maps chain files of vertex labels to internal indices.
fn resolve_chains(d: &Dag, listed: &[Vec<String>]) -> Result<Vec<Vec<u32>>, CliError> {
    let mut index = std::collections::HashMap::new();
    for (v, label) in d.labels().iter().enumerate() {
        index.insert(label.as_str(), v as u32);
    }
    listed
        .iter()
        .map(|chain| {
            chain
                .iter()
                .map(|label| {
                    index
                        .get(label.as_str())
                        .copied()
                        .ok_or_else(|| CliError::Validation(format!("chain vertex {label:?} is not in the graph")))
                })
                .collect()
        })
        .collect()
}

fn print_level_timings(timings: &[LevelTiming]) {
    for t in timings {
        println!("level {:>4}: width {:>8} in {:?}", t.level, t.width, t.elapsed);
    }
}

fn cmd_transform(
    kind: TransformKind,
    cache: &Path,
    vector: &Path,
    out: &Path,
    threads: usize,
    format: Format,
    verbose: bool,
) -> Result<(), CliError> {
    let pre = io::read_cache(cache)?;
    let data = io::read_vector(vector)?;
    let t0 = Instant::now();
    let result = match data {
        VectorData::Int(x) => VectorData::Int(apply(kind, &pre, &x, threads, verbose)?),
        VectorData::Float(x) => VectorData::Float(apply(kind, &pre, &x, threads, verbose)?),
    };
    let elapsed = t0.elapsed();
    let format = match format {
        Format::Text => VectorFormat::Text,
        Format::Binary => VectorFormat::Binary,
    };
    io::write_vector(&result, format, out)?;
    println!(
        "{} of {} values with {} thread(s) in {:?} -> {}",
        match kind {
            TransformKind::Zeta => "zeta",
            TransformKind::Moebius => "moebius",
        },
        result.len(),
        threads,
        elapsed,
        out.display()
    );
    Ok(())
}

fn apply<T: chainzeta::Ring + Send + Sync>(
    kind: TransformKind,
    pre: &io::Precomputed,
    x: &[T],
    threads: usize,
    verbose: bool,
) -> Result<Vec<T>, CliError> {
    let y = if threads <= 1 && !verbose {
        match kind {
            TransformKind::Zeta => zeta_fast(&pre.nm, &pre.cd, x)?,
            TransformKind::Moebius => moebius_fast(&pre.nm, &pre.cd, x)?,
        }
    } else {
        let opts = ParallelOptions::with_threads(threads);
        let (y, timings) = match kind {
            TransformKind::Zeta => zeta_parallel_timed(&pre.nm, &pre.cd, &pre.ap, x, &opts)?,
            TransformKind::Moebius => moebius_parallel_timed(&pre.nm, &pre.cd, &pre.ap, x, &opts)?,
        };
        if verbose {
            print_level_timings(&timings);
        }
        y
    };
    Ok(y)
}
