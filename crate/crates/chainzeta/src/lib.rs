//! Zeta and Moebius transforms on arbitrary finite posets.
//!
//! A poset is given as the reachability order of a DAG. After a one-time
//! precomputation (chain decomposition plus a sparse "nearest in chain"
//! map), both transforms run in `O(nnz)` ring operations where `nnz` is
//! bounded by `n * k` for a decomposition into `k` chains, independent of
//! the size of the transitive closure.
//!
//! Pipeline:
//!
//! 1. [`build_dag`] or [`generate_erdos_renyi`] produce a [`Dag`] whose
//!    vertex numbering is a descending topological order: every edge goes
//!    from a lower index to a higher index, and the order relation is
//!    `y <= x` iff `y` is reachable from `x`.
//! 2. [`decompose`] (or [`decompose_path_cover`], [`decompose_explicit`])
//!    partitions the vertices into chains.
//! 3. [`compute_niv`] builds the per-vertex map of chain-wise nearest
//!    smaller elements that drives both fast transforms.
//! 4. [`zeta_fast`] / [`moebius_fast`] evaluate the transforms; the
//!    `parallel` module evaluates them level-synchronously over an
//!    antichain partition with identical results.

pub mod chain;
pub mod dag;
pub mod generate;
pub mod io;
pub mod niv;
pub mod parallel;
pub mod transform;

mod matching;

pub use chain::{decompose, decompose_explicit, decompose_path_cover, ChainDecomposition, ChainError};
pub use dag::{build_dag, transitive_closure, transitive_reduction, width_bruteforce, ClosureMatrix, Dag, DagError};
pub use generate::generate_erdos_renyi;
pub use niv::{compute_niv, reachability_set, NivMap};
pub use parallel::{
    antichain_partition, moebius_parallel, moebius_parallel_timed, parallelism_report, schedule_is_valid,
    zeta_parallel, zeta_parallel_timed, AntichainPartition, LevelTiming, ParallelOptions, ParallelismReport,
};
pub use transform::{
    factor_matrices, moebius_fast, moebius_fast_counted, moebius_function, moebius_naive,
    moebius_naive_counted, operation_count, zeta_fast, zeta_fast_counted, zeta_naive, zeta_naive_counted,
    FactorMatrices, MoebiusMatrix, OperationCounts, Ring, TransformError,
};
