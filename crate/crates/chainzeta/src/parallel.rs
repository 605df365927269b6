//! Level-synchronous parallel execution of both transforms.
//!
//! Vertices are partitioned into antichains by longest chain below each
//! vertex. All dependencies of a vertex (its chain successor and all its
//! nearest-in-chain entries) are strictly smaller in the order, hence in a
//! strictly earlier level, so the levels run bottom-up with one barrier
//! between consecutive levels and no locks. Per-vertex arithmetic order is
//! identical to the sequential kernels, so results are bit-identical for
//! any thread count, floats included.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::chain::ChainDecomposition;
use crate::dag::Dag;
use crate::niv::NivMap;
use crate::transform::{Ring, TransformError};

/// Partition of the vertices into antichain levels, bottom-up: level 0
/// holds the minimal elements, and every successor of a level-`i` vertex
/// lies in some level `< i`. The level count equals the longest chain in
/// the poset, which is the minimum over all antichain partitions.
pub struct AntichainPartition {
    levels: Vec<Vec<u32>>,
    level_of: Vec<u32>,
}

impl AntichainPartition {
    pub fn n(&self) -> usize {
        self.level_of.len()
    }

    /// Number of levels, i.e. the longest chain vertex count.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Levels bottom-up; each level lists its vertices ascending.
    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    /// 0-based level of vertex `v`.
    pub fn level_of(&self, v: usize) -> u32 {
        self.level_of[v]
    }

    pub(crate) fn from_level_of(level_of: Vec<u32>) -> Self {
        let count = level_of.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut levels = vec![Vec::new(); count];
        for (v, &l) in level_of.iter().enumerate() {
            levels[l as usize].push(v as u32);
        }
        AntichainPartition { levels, level_of }
    }
}

/// Minimal antichain partition: each vertex's level is the length of the
/// longest chain hanging below it, so vertices whose successors are all
/// stripped land in the next level. `O(n + |E|)`.
pub fn antichain_partition(d: &Dag) -> AntichainPartition {
    let n = d.n();
    let mut level_of = vec![0u32; n];
    for v in (0..n).rev() {
        let mut lvl = 0;
        for &w in d.successors(v) {
            lvl = lvl.max(level_of[w as usize] + 1);
        }
        level_of[v] = lvl;
    }
    AntichainPartition::from_level_of(level_of)
}

/// True iff every dependency of every vertex sits in a strictly earlier
/// level: the no-data-race condition of the level schedule.
pub fn schedule_is_valid(nm: &NivMap, cd: &ChainDecomposition, ap: &AntichainPartition) -> bool {
    let n = nm.n();
    (0..n).all(|v| {
        let lv = ap.level_of(v);
        let nx = cd.next()[v] as usize;
        (nx == v || ap.level_of(nx) < lv) && nm.row_vertices(v).iter().all(|&w| ap.level_of(w as usize) < lv)
    })
}

/// Tuning knobs for the parallel transforms.
#[derive(Clone, Copy, Debug)]
pub struct ParallelOptions {
    pub threads: usize,
    /// Levels smaller than this run on the calling thread; the barrier
    /// would cost more than the work saves.
    pub sequential_level_cutoff: usize,
}

impl Default for ParallelOptions {
    fn default() -> Self {
        let threads = std::thread::available_parallelism().map_or(1, |p| p.get());
        ParallelOptions { threads, sequential_level_cutoff: 256 }
    }
}

impl ParallelOptions {
    pub fn with_threads(threads: usize) -> Self {
        ParallelOptions { threads: threads.max(1), ..Default::default() }
    }
}

/// Wall time of one barrier-delimited step; `width` is the number of
/// vertices the step touched.
#[derive(Clone, Copy, Debug)]
pub struct LevelTiming {
    pub level: usize,
    pub width: usize,
    pub elapsed: Duration,
}

/// One pool per worker count, shared by all transform calls.
fn pool_for(threads: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut pools = pools.lock().expect("thread pool registry poisoned");
    pools
        .entry(threads)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("failed to build worker pool"),
            )
        })
        .clone()
}

/// Raw shared output buffer. Writers within one level touch pairwise
/// distinct indices and read only slots finalized before the level's
/// barrier, which is exactly the schedule validity condition.
struct SharedSlice<T> {
    ptr: *mut T,
}

unsafe impl<T: Send + Sync> Send for SharedSlice<T> {}
unsafe impl<T: Send + Sync> Sync for SharedSlice<T> {}

impl<T: Copy> SharedSlice<T> {
    fn new(s: &mut [T]) -> Self {
        SharedSlice { ptr: s.as_mut_ptr() }
    }

    /// Safety: no concurrent writer to `i` in the same level.
    unsafe fn write(&self, i: usize, v: T) {
        *self.ptr.add(i) = v;
    }

    /// Safety: `i` was written before the last barrier.
    unsafe fn read(&self, i: usize) -> T {
        *self.ptr.add(i)
    }
}

fn run_levels<F, G>(ap: &AntichainPartition, opts: &ParallelOptions, process: F, mut observe: G)
where
    F: Fn(usize) + Send + Sync,
    G: FnMut(usize, usize, Duration),
{
    let threads = opts.threads.max(1);
    let pool = if threads > 1 { Some(pool_for(threads)) } else { None };
    for (li, level) in ap.levels().iter().enumerate() {
        let start = Instant::now();
        match &pool {
            Some(pool) if level.len() >= opts.sequential_level_cutoff => {
                let chunk = level.len().div_ceil(threads);
                pool.install(|| {
                    level.par_chunks(chunk).for_each(|part| part.iter().for_each(|&v| process(v as usize)));
                });
            }
            _ => level.iter().for_each(|&v| process(v as usize)),
        }
        observe(li, level.len(), start.elapsed());
    }
}

fn zeta_levelwise<T, G>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    ap: &AntichainPartition,
    x: &[T],
    opts: &ParallelOptions,
    observe: G,
) -> Result<Vec<T>, TransformError>
where
    T: Ring + Send + Sync,
    G: FnMut(usize, usize, Duration),
{
    let n = nm.n();
    if x.len() != n {
        return Err(TransformError::LengthMismatch { expected: n, found: x.len() });
    }
    assert_eq!(ap.n(), n, "partition and niv map disagree on n");
    let next = cd.next();
    let mut suffix = vec![T::ZERO; n];
    let mut y = vec![T::ZERO; n];
    {
        let sfx = SharedSlice::new(&mut suffix);
        let out = SharedSlice::new(&mut y);
        run_levels(
            ap,
            opts,
            |i| unsafe {
                let nx = next[i] as usize;
                let s = if nx == i { x[i] } else { x[i] + sfx.read(nx) };
                sfx.write(i, s);
                let mut acc = s;
                for &v in nm.row_vertices(i) {
                    acc = acc + sfx.read(v as usize);
                }
                out.write(i, acc);
            },
            observe,
        );
    }
    Ok(y)
}

fn moebius_levelwise<T, G>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    ap: &AntichainPartition,
    x: &[T],
    opts: &ParallelOptions,
    mut observe: G,
) -> Result<Vec<T>, TransformError>
where
    T: Ring + Send + Sync,
    G: FnMut(usize, usize, Duration),
{
    let n = nm.n();
    if x.len() != n {
        return Err(TransformError::LengthMismatch { expected: n, found: x.len() });
    }
    assert_eq!(ap.n(), n, "partition and niv map disagree on n");
    let next = cd.next();
    let mut yp = vec![T::ZERO; n];
    {
        let acc_out = SharedSlice::new(&mut yp);
        run_levels(
            ap,
            opts,
            |i| unsafe {
                let mut acc = x[i];
                for &v in nm.row_vertices(i) {
                    acc = acc - acc_out.read(v as usize);
                }
                acc_out.write(i, acc);
            },
            &mut observe,
        );
    }
    // Chain differences: depth 1, no cross dependencies at all.
    let start = Instant::now();
    let mut y = vec![T::ZERO; n];
    let threads = opts.threads.max(1);
    let diff = |(i, slot): (usize, &mut T)| {
        let nx = next[i] as usize;
        *slot = if nx == i { yp[i] } else { yp[i] - yp[nx] };
    };
    if threads > 1 && n >= opts.sequential_level_cutoff {
        let chunk = n.div_ceil(threads);
        pool_for(threads).install(|| {
            y.par_chunks_mut(chunk).enumerate().for_each(|(ci, part)| {
                part.iter_mut().enumerate().for_each(|(off, slot)| diff((ci * chunk + off, slot)));
            });
        });
    } else {
        y.iter_mut().enumerate().for_each(|(i, slot)| diff((i, slot)));
    }
    observe(ap.len(), n, start.elapsed());
    Ok(y)
}

/// Level-synchronous zeta transform; output is bit-identical to
/// [`crate::zeta_fast`] for every thread count.
pub fn zeta_parallel<T: Ring + Send + Sync>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    ap: &AntichainPartition,
    x: &[T],
    threads: usize,
) -> Result<Vec<T>, TransformError> {
    zeta_levelwise(nm, cd, ap, x, &ParallelOptions::with_threads(threads), |_, _, _| {})
}

/// [`zeta_parallel`] with explicit options, reporting per-level wall time.
pub fn zeta_parallel_timed<T: Ring + Send + Sync>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    ap: &AntichainPartition,
    x: &[T],
    opts: &ParallelOptions,
) -> Result<(Vec<T>, Vec<LevelTiming>), TransformError> {
    let mut timings = Vec::with_capacity(ap.len());
    let y = zeta_levelwise(nm, cd, ap, x, opts, |level, width, elapsed| {
        timings.push(LevelTiming { level, width, elapsed });
    })?;
    Ok((y, timings))
}

/// Level-synchronous moebius transform; output is bit-identical to
/// [`crate::moebius_fast`] for every thread count.
pub fn moebius_parallel<T: Ring + Send + Sync>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    ap: &AntichainPartition,
    x: &[T],
    threads: usize,
) -> Result<Vec<T>, TransformError> {
    moebius_levelwise(nm, cd, ap, x, &ParallelOptions::with_threads(threads), |_, _, _| {})
}

/// [`moebius_parallel`] with explicit options; the trailing timing entry
/// (level index = level count) is the chain-difference pass.
pub fn moebius_parallel_timed<T: Ring + Send + Sync>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    ap: &AntichainPartition,
    x: &[T],
    opts: &ParallelOptions,
) -> Result<(Vec<T>, Vec<LevelTiming>), TransformError> {
    let mut timings = Vec::with_capacity(ap.len() + 1);
    let y = moebius_levelwise(nm, cd, ap, x, opts, |level, width, elapsed| {
        timings.push(LevelTiming { level, width, elapsed });
    })?;
    Ok((y, timings))
}

/// Work/depth figures of the level schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParallelismReport {
    /// Ring operations per transform: `nnz - k`.
    pub work: u64,
    /// Zeta depth bound: longest chain plus a log-depth tail for the row
    /// reductions.
    pub zeta_depth_bound: u64,
    /// Moebius depth bound: levels times chain count, plus the final
    /// depth-1 difference pass.
    pub moebius_depth_bound: u64,
    pub zeta_avg_parallelism_lb: f64,
    pub moebius_avg_parallelism_lb: f64,
}

pub fn parallelism_report(nm: &NivMap, cd: &ChainDecomposition, ap: &AntichainPartition) -> ParallelismReport {
    let work = nm.nnz() - cd.k() as u64;
    let k = cd.k() as u64;
    let ceil_log2_k = if k <= 1 { 0 } else { (k - 1).ilog2() as u64 + 1 };
    let zeta_depth_bound = cd.longest_chain() as u64 + ceil_log2_k;
    let moebius_depth_bound = ap.len() as u64 * k + 1;
    ParallelismReport {
        work,
        zeta_depth_bound,
        moebius_depth_bound,
        zeta_avg_parallelism_lb: work as f64 / zeta_depth_bound as f64,
        moebius_avg_parallelism_lb: work as f64 / moebius_depth_bound as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{decompose, decompose_path_cover};
    use crate::dag::{build_dag, transitive_closure};
    use crate::generate::generate_erdos_renyi;
    use crate::niv::compute_niv;
    use crate::transform::{moebius_fast, zeta_fast};

    fn edges(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn check_partition(d: &Dag, ap: &AntichainPartition) {
        let closure = transitive_closure(d);
        let mut seen = vec![false; d.n()];
        for level in ap.levels() {
            for &v in level {
                assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
            for (a, &u) in level.iter().enumerate() {
                for &v in &level[a + 1..] {
                    assert!(!closure.le(u, v) && !closure.le(v, u), "level not an antichain");
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
        for v in 0..d.n() {
            for &w in d.successors(v) {
                assert!(ap.level_of(w as usize) < ap.level_of(v));
            }
        }
    }

    /// Longest chain counted from the maximal side; independent of the
    /// sink-side recursion inside antichain_partition.
    fn longest_chain_from_sources(d: &Dag) -> usize {
        let n = d.n();
        let mut depth = vec![1u32; n];
        for v in 0..n {
            for &w in d.successors(v) {
                depth[w as usize] = depth[w as usize].max(depth[v] + 1);
            }
        }
        depth.iter().copied().max().unwrap_or(0) as usize
    }

    #[test]
    fn diamond_partition() {
        let d = build_dag(&edges(&[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]), &[]).unwrap();
        let ap = antichain_partition(&d);
        check_partition(&d, &ap);
        assert_eq!(ap.len(), 3);
        assert_eq!(ap.levels()[0], vec![3]);
        assert_eq!(ap.levels()[1], vec![1, 2]);
        assert_eq!(ap.levels()[2], vec![0]);
    }

    #[test]
    fn partition_is_minimal_on_random_dags() {
        for seed in 0..25u64 {
            let d = generate_erdos_renyi(120, 3.0, seed).unwrap();
            let ap = antichain_partition(&d);
            check_partition(&d, &ap);
            assert_eq!(ap.len(), longest_chain_from_sources(&d));
        }
    }

    #[test]
    fn schedule_validity_holds() {
        for seed in 30..40u64 {
            let d = generate_erdos_renyi(150, 4.0, seed).unwrap();
            let ap = antichain_partition(&d);
            for cd in [decompose(&d), decompose_path_cover(&d)] {
                let nm = compute_niv(&d, &cd);
                assert!(schedule_is_valid(&nm, &cd, &ap));
            }
        }
    }

    #[test]
    fn parallel_matches_sequential_bit_for_bit() {
        for seed in 50..56u64 {
            let d = generate_erdos_renyi(400, 4.0, seed).unwrap();
            let cd = decompose_path_cover(&d);
            let nm = compute_niv(&d, &cd);
            let ap = antichain_partition(&d);
            let x: Vec<i64> = (0..d.n() as i64).map(|i| (i * 31 + 7) % 2001 - 1000).collect();
            let zs = zeta_fast(&nm, &cd, &x).unwrap();
            let ms = moebius_fast(&nm, &cd, &x).unwrap();
            for threads in [1usize, 2, 4, 8] {
                // Cutoff 1 forces the parallel path even on small levels.
                let opts = ParallelOptions { threads, sequential_level_cutoff: 1 };
                let (zp, zt) = zeta_parallel_timed(&nm, &cd, &ap, &x, &opts).unwrap();
                assert_eq!(zp, zs);
                assert_eq!(zt.len(), ap.len());
                let (mp, mt) = moebius_parallel_timed(&nm, &cd, &ap, &x, &opts).unwrap();
                assert_eq!(mp, ms);
                assert_eq!(mt.len(), ap.len() + 1);
                assert_eq!(zeta_parallel(&nm, &cd, &ap, &x, threads).unwrap(), zs);
                assert_eq!(moebius_parallel(&nm, &cd, &ap, &x, threads).unwrap(), ms);
            }
        }
    }

    #[test]
    fn float_results_are_bit_identical_across_thread_counts() {
        let d = generate_erdos_renyi(300, 4.0, 77).unwrap();
        let cd = decompose_path_cover(&d);
        let nm = compute_niv(&d, &cd);
        let ap = antichain_partition(&d);
        let x: Vec<f64> = (0..d.n()).map(|i| ((i * 7919 % 1000) as f64) * 0.1 - 50.0).collect();
        let base = zeta_fast(&nm, &cd, &x).unwrap();
        for threads in [2usize, 4] {
            let opts = ParallelOptions { threads, sequential_level_cutoff: 1 };
            let (y, _) = zeta_parallel_timed(&nm, &cd, &ap, &x, &opts).unwrap();
            let same = y.iter().zip(&base).all(|(a, b)| a.to_bits() == b.to_bits());
            assert!(same, "float results drifted across schedules");
        }
    }

    #[test]
    fn report_matches_formulas() {
        let d = build_dag(&edges(&[("a", "b"), ("b", "c"), ("c", "d")]), &[]).unwrap();
        let cd = decompose(&d);
        let nm = compute_niv(&d, &cd);
        let ap = antichain_partition(&d);
        let r = parallelism_report(&nm, &cd, &ap);
        // A chain has no parallelism: W = n-1, depth = n.
        assert_eq!(r.work, 3);
        assert_eq!(r.zeta_depth_bound, 4);
        assert_eq!(r.moebius_depth_bound, 5);
    }

    #[test]
    fn zero_threads_clamps_to_one() {
        let d = generate_erdos_renyi(50, 2.0, 5).unwrap();
        let cd = decompose(&d);
        let nm = compute_niv(&d, &cd);
        let ap = antichain_partition(&d);
        let x: Vec<i64> = vec![1; 50];
        assert_eq!(zeta_parallel(&nm, &cd, &ap, &x, 0).unwrap(), zeta_fast(&nm, &cd, &x).unwrap());
    }
}
