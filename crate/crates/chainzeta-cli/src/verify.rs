//! Self-check suites behind `chainzeta verify`: a hand-checkable 12-vertex
//! worked example, randomized oracle equivalence at desk scale, a cache
//! round trip, and optional validation of a user-supplied graph or cache.
//! The first failing check reports its counterexample and stops.

use crate::CliError;
use chainzeta::io;
use chainzeta::{
    antichain_partition, build_dag, compute_niv, decompose, decompose_explicit, decompose_path_cover,
    generate_erdos_renyi, moebius_fast, moebius_fast_counted, moebius_naive, moebius_parallel,
    reachability_set, schedule_is_valid, transitive_closure, width_bruteforce, zeta_fast, zeta_fast_counted,
    zeta_naive, zeta_naive_counted, zeta_parallel, ChainDecomposition, ClosureMatrix, Dag, NivMap,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

const EXAMPLE_EDGES: [(u32, u32); 17] = [
    (1, 3),
    (1, 4),
    (1, 6),
    (2, 4),
    (2, 5),
    (3, 7),
    (3, 8),
    (4, 7),
    (4, 9),
    (5, 10),
    (6, 8),
    (6, 9),
    (7, 10),
    (8, 11),
    (9, 12),
    (10, 11),
    (10, 12),
];

/// A width-4 decomposition of the example, by vertex label.
const EXAMPLE_CHAINS: [&[u32]; 4] = [&[2, 4, 9, 12], &[1, 3, 7], &[5, 10], &[6, 8, 11]];

pub fn run(
    input: Option<&Path>,
    source: Option<&Path>,
    trials: u64,
    max_n: usize,
    seed: u64,
) -> Result<(), CliError> {
    check("worked example", worked_example())?;
    check("random instances", random_suite(trials, max_n, seed))?;
    check("cache round trip", cache_round_trip(seed))?;
    if let Some(path) = input {
        check("input file", validate_input(path, source))?;
    }
    println!("all checks passed");
    Ok(())
}

fn check(name: &str, result: Result<String, String>) -> Result<(), CliError> {
    match result {
        Ok(detail) => {
            println!("ok - {name}: {detail}");
            Ok(())
        }
        Err(message) => {
            println!("FAIL - {name}: {message}");
            Err(CliError::Validation(format!("{name}: {message}")))
        }
    }
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn example_dag() -> Result<Dag, String> {
    let edges: Vec<(String, String)> =
        EXAMPLE_EDGES.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    build_dag::<String>(&edges, &[]).map_err(|e| format!("building the example failed: {e}"))
}

fn worked_example() -> Result<String, String> {
    let d = example_dag()?;
    let closure = transitive_closure(&d);
    ensure(closure.nnz() == 52, || format!("closure nonzeros = {}, want 52", closure.nnz()))?;
    ensure(decompose(&d).k() == 4, || "minimal decomposition must use 4 chains".into())?;
    let ap = antichain_partition(&d);
    ensure(ap.len() == 5, || format!("antichain count = {}, want 5", ap.len()))?;

    let chains: Vec<Vec<u32>> = EXAMPLE_CHAINS.iter().map(|c| c.iter().map(|&v| v - 1).collect()).collect();
    let cd = decompose_explicit(&d, &chains).map_err(|e| e.to_string())?;
    let nm = compute_niv(&d, &cd);
    ensure(nm.nnz() == 32, || format!("niv nonzeros = {}, want 32", nm.nnz()))?;
    ensure(cd.longest_chain() == 4, || "longest chain of the decomposition must be 4".into())?;

    let x: Vec<i64> = (1..=12).collect();
    let (g, zeta_ops) = zeta_fast_counted(&nm, &cd, &x).map_err(|e| e.to_string())?;
    let (f, moebius_ops) = moebius_fast_counted(&nm, &cd, &g).map_err(|e| e.to_string())?;
    ensure(f == x, || "moebius does not invert zeta on the example".into())?;
    ensure(zeta_ops == 28 && moebius_ops == 28, || {
        format!("fast op counts = ({zeta_ops}, {moebius_ops}), want (28, 28)")
    })?;
    let (_, naive_ops) = zeta_naive_counted(&closure, &x).map_err(|e| e.to_string())?;
    ensure(naive_ops == closure.nnz() - 12, || {
        format!("naive op count {} must equal closure nonzeros minus n", naive_ops)
    })?;
    ensure(zeta_ops < naive_ops, || "fast transform must beat the naive count".into())?;

    let ones = vec![1i64; 12];
    let sizes = zeta_fast(&nm, &cd, &ones).map_err(|e| e.to_string())?;
    for v in 0..12 {
        ensure(sizes[v] == closure.row(v).len() as i64, || {
            format!("zeta of all-ones at vertex {} is {}, want the down-set size", v + 1, sizes[v])
        })?;
    }
    Ok(format!("k=4 ell=5 nnz=32 fast_ops={zeta_ops} naive_ops={naive_ops}"))
}

/// One comparable pair: the niv entry for (chain, vertex) must be the
/// highest chain element in the vertex's down-set.
fn check_niv_rows(closure: &ClosureMatrix, cd: &ChainDecomposition, nm: &NivMap) -> Result<(), String> {
    for x in 0..closure.n() {
        let mut expect: Vec<(u32, u32)> = Vec::new();
        for (c, chain) in cd.chains().iter().enumerate() {
            if let Some(&top) = chain.iter().find(|&&v| closure.le(v, x as u32)) {
                if c + 1 != cd.id_of(x) as usize {
                    expect.push((c as u32 + 1, top));
                }
            }
        }
        let got: Vec<(u32, u32)> = nm.row(x).collect();
        if got != expect {
            return Err(format!("niv row {x} is {got:?}, want {expect:?}"));
        }
    }
    Ok(())
}

fn random_suite(trials: u64, max_n: usize, seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let n = rng.gen_range(1..=max_n.max(1));
        let delta = [0.5f64, 1.0, 2.0, 4.0, 6.0][t as usize % 5].min((n - 1) as f64);
        let inst_seed = seed.wrapping_mul(1_000_003).wrapping_add(t);
        let at = || format!("(n={n} delta={delta} seed={inst_seed})");
        let d = generate_erdos_renyi(n, delta, inst_seed).map_err(|e| format!("{e} {}", at()))?;

        let closure = transitive_closure(&d);
        let cd_min = decompose(&d);
        let cd = decompose_path_cover(&d);
        ensure(cd_min.k() <= cd.k(), || format!("matching on the closure used more chains {}", at()))?;
        if n <= 20 {
            let width = width_bruteforce(&d).map_err(|e| e.to_string())?;
            ensure(cd_min.k() == width, || {
                format!("minimal decomposition has {} chains, width is {width} {}", cd_min.k(), at())
            })?;
        }

        let nm = compute_niv(&d, &cd);
        check_niv_rows(&closure, &cd, &nm).map_err(|m| format!("{m} {}", at()))?;

        let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();
        let g = zeta_fast(&nm, &cd, &x).map_err(|e| e.to_string())?;
        let gn = zeta_naive(&closure, &x).map_err(|e| e.to_string())?;
        ensure(g == gn, || format!("zeta disagrees with the naive transform {}", at()))?;
        let f = moebius_fast(&nm, &cd, &x).map_err(|e| e.to_string())?;
        let fnv = moebius_naive(&closure, &x).map_err(|e| e.to_string())?;
        ensure(f == fnv, || format!("moebius disagrees with the naive transform {}", at()))?;
        let back = moebius_fast(&nm, &cd, &g).map_err(|e| e.to_string())?;
        ensure(back == x, || format!("moebius(zeta) is not the identity {}", at()))?;

        let mut disjoint = vec![false; n];
        for v in 0..n {
            let rs = reachability_set(&nm, &cd, v);
            for &w in &rs {
                ensure(!disjoint[w as usize], || format!("chain walks overlap at vertex {v} {}", at()))?;
                disjoint[w as usize] = true;
            }
            let mut sorted = rs;
            sorted.sort_unstable();
            ensure(sorted == closure.row(v), || format!("down-set of {v} is wrong {}", at()))?;
            for w in sorted {
                disjoint[w as usize] = false;
            }
        }

        let ap = antichain_partition(&d);
        ensure(schedule_is_valid(&nm, &cd, &ap), || format!("level schedule breaks a dependency {}", at()))?;
        for threads in [2usize, 4] {
            let gp = zeta_parallel(&nm, &cd, &ap, &x, threads).map_err(|e| e.to_string())?;
            ensure(gp == g, || format!("parallel zeta differs at {threads} threads {}", at()))?;
            let fp = moebius_parallel(&nm, &cd, &ap, &g, threads).map_err(|e| e.to_string())?;
            ensure(fp == x, || format!("parallel moebius differs at {threads} threads {}", at()))?;
        }
    }
    Ok(format!("{trials} instances with n up to {max_n}"))
}

fn cache_round_trip(seed: u64) -> Result<String, String> {
    let d = generate_erdos_renyi(1000, 4.0, seed).map_err(|e| e.to_string())?;
    let cd = decompose_path_cover(&d);
    let nm = compute_niv(&d, &cd);
    let ap = antichain_partition(&d);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let graph = dir.path().join("graph.txt");
    io::write_edge_list(&d, &graph).map_err(|e| e.to_string())?;
    let (_, hash) = io::read_and_hash(&graph).map_err(|e| e.to_string())?;
    let cache = dir.path().join("graph.cache");
    io::write_cache(&cache, hash, d.labels(), &cd, &nm, &ap).map_err(|e| e.to_string())?;
    let pre = io::read_cache(&cache).map_err(|e| e.to_string())?;
    ensure(pre.source_hash == hash, || "source hash did not round-trip".into())?;
    ensure(pre.labels == d.labels(), || "labels did not round-trip".into())?;
    ensure(pre.cd.next() == cd.next() && pre.cd.chains() == cd.chains(), || {
        "decomposition did not round-trip".into()
    })?;
    for v in 0..d.n() {
        ensure(pre.nm.row(v).eq(nm.row(v)), || format!("niv row {v} did not round-trip"))?;
        ensure(pre.ap.level_of(v) == ap.level_of(v), || format!("level of {v} did not round-trip"))?;
    }
    Ok("write, hash and reload agree".into())
}

/// Validates a user-supplied file: caches get a hash and structure check
/// (plus source binding when given), edge lists get the full pipeline.
fn validate_input(path: &Path, source: Option<&Path>) -> Result<String, String> {
    let mut head = [0u8; 8];
    {
        use std::io::Read;
        let mut f = std::fs::File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let _ = f.read(&mut head).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if &head == io::CACHE_MAGIC {
        let pre = io::read_cache(path).map_err(|e| e.to_string())?;
        if let Some(src) = source {
            let (_, hash) = io::read_and_hash(src).map_err(|e| e.to_string())?;
            ensure(hash == pre.source_hash, || io::IoError::SourceHashMismatch.to_string())?;
        }
        return Ok(format!(
            "cache is sound: n={} k={} levels={} nnz={}",
            pre.cd.n(),
            pre.cd.k(),
            pre.ap.len(),
            pre.nm.nnz()
        ));
    }

    let (edges, vertices) = io::read_edge_list(path).map_err(|e| e.to_string())?;
    let d = build_dag(&edges, &vertices).map_err(|e| e.to_string())?;
    let cd = decompose_path_cover(&d);
    let nm = compute_niv(&d, &cd);
    let ap = antichain_partition(&d);
    ensure(schedule_is_valid(&nm, &cd, &ap), || "level schedule breaks a dependency".into())?;
    let x: Vec<i64> = (0..d.n() as i64).map(|i| i % 97 - 48).collect();
    let g = zeta_fast(&nm, &cd, &x).map_err(|e| e.to_string())?;
    let f = moebius_fast(&nm, &cd, &g).map_err(|e| e.to_string())?;
    ensure(f == x, || "moebius does not invert zeta on this graph".into())?;
    if d.n() <= 2000 {
        let closure = transitive_closure(&d);
        check_niv_rows(&closure, &cd, &nm)?;
        let gn = zeta_naive(&closure, &x).map_err(|e| e.to_string())?;
        ensure(g == gn, || "zeta disagrees with the naive transform".into())?;
    }
    Ok(format!("graph is sound: n={} edges={} k={} levels={}", d.n(), d.edge_count(), cd.k(), ap.len()))
}
