//! Benchmark harness: run the pipeline over a parameter grid and emit one
//! CSV row per phase. All columns except the wall-time ones (including the
//! derived speedup) are deterministic for a fixed (n, delta, seed, threads).

use crate::{decompose_as, CliError, Decomposition};
use chainzeta::{
    antichain_partition, compute_niv, generate_erdos_renyi, moebius_fast, moebius_parallel, operation_count,
    zeta_fast, zeta_parallel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

pub struct Grid {
    pub n: Vec<usize>,
    pub delta: Vec<f64>,
    pub seeds: Vec<u64>,
    pub threads: Vec<usize>,
    pub decomposition: Decomposition,
    pub verbose: bool,
}

const HEADER: &str = "version,n,delta,seed,k,ell,nnz,edges,phase,threads,wall_time_seconds,ops,speedup";

struct Row {
    phase: &'static str,
    threads: usize,
    wall: f64,
    ops: u64,
    speedup: f64,
}

pub fn run(grid: &Grid, out: &Path) -> Result<(), CliError> {
    let file = std::fs::File::create(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let mut w = std::io::BufWriter::new(file);
    let wrap = |e: std::io::Error| CliError::Io(format!("{}: {e}", out.display()));
    writeln!(w, "{HEADER}").map_err(wrap)?;
    for &n in &grid.n {
        for &delta in &grid.delta {
            for &seed in &grid.seeds {
                let (stats, rows) = run_one(grid, n, delta, seed)?;
                for row in rows {
                    writeln!(
                        w,
                        "v1,{n},{delta},{seed},{},{},{},{},{},{},{:.6},{},{:.4}",
                        stats.k, stats.ell, stats.nnz, stats.edges, row.phase, row.threads, row.wall,
                        row.ops, row.speedup,
                    )
                    .map_err(wrap)?;
                }
            }
        }
    }
    w.flush().map_err(wrap)?;
    println!("wrote {}", out.display());
    Ok(())
}

struct Stats {
    k: usize,
    ell: usize,
    nnz: u64,
    edges: usize,
}

/// One pipeline run. Transform phases repeat per worker count; speedup is
/// relative to the threads=1 run when the list has one, otherwise to the
/// first listed worker count. Precompute rows always report speedup 1.
fn run_one(grid: &Grid, n: usize, delta: f64, seed: u64) -> Result<(Stats, Vec<Row>), CliError> {
    if grid.verbose {
        eprintln!("bench: n={n} delta={delta} seed={seed}");
    }
    let d = generate_erdos_renyi(n, delta, seed)?;

    let t = Instant::now();
    let cd = decompose_as(&d, grid.decomposition);
    let decompose_wall = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let nm = compute_niv(&d, &cd);
    let ap = antichain_partition(&d);
    let niv_wall = t.elapsed().as_secs_f64();

    let ops = operation_count(&nm, &cd).fast_ops;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();

    let mut measured: Vec<(usize, f64, f64)> = Vec::new();
    for &threads in &grid.threads {
        let t = Instant::now();
        let g = if threads <= 1 {
            zeta_fast(&nm, &cd, &x)?
        } else {
            zeta_parallel(&nm, &cd, &ap, &x, threads)?
        };
        let zeta_wall = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let f = if threads <= 1 {
            moebius_fast(&nm, &cd, &g)?
        } else {
            moebius_parallel(&nm, &cd, &ap, &g, threads)?
        };
        let moebius_wall = t.elapsed().as_secs_f64();
        debug_assert_eq!(f, x);
        measured.push((threads, zeta_wall, moebius_wall));
    }

    let mut rows = vec![
        Row { phase: "decompose", threads: 1, wall: decompose_wall, ops: 0, speedup: 1.0 },
        Row { phase: "niv", threads: 1, wall: niv_wall, ops: 0, speedup: 1.0 },
    ];
    if let Some(&(_, zeta_base, moebius_base)) =
        measured.iter().find(|&&(t, _, _)| t <= 1).or_else(|| measured.first())
    {
        for &(threads, zeta_wall, moebius_wall) in &measured {
            rows.push(Row { phase: "zeta", threads, wall: zeta_wall, ops, speedup: zeta_base / zeta_wall });
            rows.push(Row {
                phase: "moebius",
                threads,
                wall: moebius_wall,
                ops,
                speedup: moebius_base / moebius_wall,
            });
        }
    }
    let stats = Stats { k: cd.k(), ell: ap.len(), nnz: nm.nnz(), edges: d.edge_count() };
    Ok((stats, rows))
}
