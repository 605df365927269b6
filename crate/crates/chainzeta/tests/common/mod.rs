//! Shared reference fixture: a 12-vertex poset small enough to check every
//! matrix entry by hand, yet wide enough (k = 4) to exercise multi-chain
//! merging, and deep enough (longest chain 5) to exercise level scheduling.
//!
//! Vertices are labeled "1".."12" and the numbering assigns index v to label
//! v+1, so all constants below use 1-based labels and tests subtract 1.

use chainzeta::{build_dag, decompose_explicit, ChainDecomposition, Dag};

pub const EDGES: [(u32, u32); 17] = [
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

pub const N: usize = 12;

/// A minimum chain decomposition (width 4), listed top-to-bottom.
pub const CHAINS: [&[u32]; 4] = [&[2, 4, 9, 12], &[1, 3, 7], &[5, 10], &[6, 8, 11]];

/// Rows of the zeta matrix: sorted down-sets, 52 entries in total.
pub const ZETA_ROWS: [&[u32]; 12] = [
    &[1, 3, 4, 6, 7, 8, 9, 10, 11, 12],
    &[2, 4, 5, 7, 9, 10, 11, 12],
    &[3, 7, 8, 10, 11, 12],
    &[4, 7, 9, 10, 11, 12],
    &[5, 10, 11, 12],
    &[6, 8, 9, 11, 12],
    &[7, 10, 11, 12],
    &[8, 11],
    &[9, 12],
    &[10, 11, 12],
    &[11],
    &[12],
];

/// Rows of the Moebius matrix: (column, coefficient) pairs.
pub const MOEBIUS_ROWS: [&[(u32, i64)]; 12] = [
    &[(1, 1), (3, -1), (4, -1), (6, -1), (7, 1), (8, 1), (9, 1)],
    &[(2, 1), (4, -1), (5, -1), (10, 1)],
    &[(3, 1), (7, -1), (8, -1), (11, 1)],
    &[(4, 1), (7, -1), (9, -1), (12, 1)],
    &[(5, 1), (10, -1)],
    &[(6, 1), (8, -1), (9, -1)],
    &[(7, 1), (10, -1)],
    &[(8, 1), (11, -1)],
    &[(9, 1), (12, -1)],
    &[(10, 1), (11, -1), (12, -1)],
    &[(11, 1)],
    &[(12, 1)],
];

/// Rows of the niv map under [`CHAINS`]: one entry per chain that meets the
/// vertex's down-set, giving the top element of the intersection. Includes
/// the own-chain entry (always the vertex itself); 32 entries in total.
pub const NIV_ROWS: [&[(u32, u32)]; 12] = [
    &[(1, 4), (2, 1), (3, 10), (4, 6)],
    &[(1, 2), (2, 7), (3, 5), (4, 11)],
    &[(1, 12), (2, 3), (3, 10), (4, 8)],
    &[(1, 4), (2, 7), (3, 10), (4, 11)],
    &[(1, 12), (3, 5), (4, 11)],
    &[(1, 9), (4, 6)],
    &[(1, 12), (2, 7), (3, 10), (4, 11)],
    &[(4, 8)],
    &[(1, 9)],
    &[(1, 12), (3, 10), (4, 11)],
    &[(4, 11)],
    &[(1, 12)],
];

pub const WIDTH: usize = 4;
pub const LONGEST_CHAIN_IN_DECOMPOSITION: usize = 4;
pub const LONGEST_CHAIN_IN_POSET: usize = 5;
pub const NIV_NNZ: usize = 32;
pub const FAST_OP_COUNT: usize = 28;

/// Documented operation count for one direct multiply by the zeta matrix on
/// this example. The zeta matrix has 52 nonzeros over 12 rows, which costs
/// 52 - 12 = 40 additions, yet the figure circulated with this example is 39.
pub const DOCUMENTED_NAIVE_OP_COUNT: usize = 39;

pub fn edge_labels() -> Vec<(String, String)> {
    EDGES
        .iter()
        .map(|&(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

pub fn dag() -> Dag {
    let d = build_dag::<String>(&edge_labels(), &[]).unwrap();
    assert_eq!(d.n(), N);
    for v in 0..N {
        assert_eq!(d.label(v), (v + 1).to_string(), "labels must map to index + 1");
    }
    d
}

/// The reference decomposition with chain ids matching [`CHAINS`] order.
pub fn decomposition(d: &Dag) -> ChainDecomposition {
    let chains: Vec<Vec<u32>> = CHAINS
        .iter()
        .map(|c| c.iter().map(|&v| v - 1).collect())
        .collect();
    decompose_explicit(d, &chains).unwrap()
}
