//! Chain-wise nearest smaller elements.
//!
//! For vertex `x` and chain `c`, the entry is the largest element of chain
//! `c` that lies in the down-set of `x`; under the descending numbering
//! that is the smallest index of `down(x)` on chain `c`. The down-set of
//! `x` is then exactly the disjoint union, over the chains it touches, of
//! the chain walk starting at that entry. The entry of `x` on its own chain
//! is always `x` and is kept implicit.

use crate::chain::ChainDecomposition;
use crate::dag::Dag;

/// Sparse nearest-in-chain map in packed row form.
///
/// Row `x` stores `(chain, vertex)` pairs sorted by chain id, excluding the
/// implicit `(id(x), x)` entry. [`NivMap::nnz`] counts that implicit
/// diagonal, so the fast transforms cost exactly `nnz - k` ring operations.
pub struct NivMap {
    row_offsets: Vec<usize>,
    entry_chains: Vec<u32>,
    entry_vertices: Vec<u32>,
}

impl NivMap {
    pub fn n(&self) -> usize {
        self.row_offsets.len() - 1
    }

    /// Stored entries of row `x` as `(chain id, vertex)`, ascending by
    /// chain id. The implicit own-chain entry is not included.
    pub fn row(&self, x: usize) -> impl Iterator<Item = (u32, u32)> + '_ {
        let r = self.row_offsets[x]..self.row_offsets[x + 1];
        self.entry_chains[r.clone()].iter().copied().zip(self.entry_vertices[r].iter().copied())
    }

    /// Vertex components of row `x`, the only part the transforms touch.
    pub fn row_vertices(&self, x: usize) -> &[u32] {
        &self.entry_vertices[self.row_offsets[x]..self.row_offsets[x + 1]]
    }

    /// Stored entry count, diagonal excluded.
    pub fn stored_entries(&self) -> usize {
        self.entry_vertices.len()
    }

    /// Number of nonzeros including the implicit diagonal, i.e.
    /// `stored_entries() + n`.
    pub fn nnz(&self) -> u64 {
        self.entry_vertices.len() as u64 + self.n() as u64
    }

    pub(crate) fn from_parts(row_offsets: Vec<usize>, entry_chains: Vec<u32>, entry_vertices: Vec<u32>) -> Self {
        debug_assert_eq!(entry_chains.len(), entry_vertices.len());
        debug_assert_eq!(*row_offsets.last().unwrap_or(&0), entry_vertices.len());
        NivMap { row_offsets, entry_chains, entry_vertices }
    }

    pub(crate) fn raw_parts(&self) -> (&[usize], &[u32], &[u32]) {
        (&self.row_offsets, &self.entry_chains, &self.entry_vertices)
    }
}

/// Builds the nearest-in-chain map in one descending sweep.
///
/// Row `x` is the entry-wise minimum of the rows of its direct successors,
/// each extended by the successor itself. A successor `w` whose own-chain
/// entry cannot improve the accumulator (`w >= current entry for id(w)`)
/// is skipped whole: its row is already dominated. Cost is
/// `O(|E| + sum of merged row lengths)`, bounded by `O(|E| + |E_red| * k)`.
pub fn compute_niv(d: &Dag, cd: &ChainDecomposition) -> NivMap {
    let n = d.n();
    assert_eq!(cd.n(), n, "decomposition and DAG disagree on n");
    let k = cd.k();
    let absent = n as u32;

    // scratch[c] = current minimum vertex of chain c, indexed by chain id.
    let mut scratch = vec![absent; k + 1];
    let mut touched: Vec<u32> = Vec::new();

    // Rows are produced for x = n-1 first, so collect them back-to-front
    // and reverse into forward CSR at the end.
    let mut rev_chains: Vec<u32> = Vec::new();
    let mut rev_vertices: Vec<u32> = Vec::new();
    let mut spans: Vec<(usize, usize)> = vec![(0, 0); n];

    for x in (0..n).rev() {
        debug_assert!(touched.is_empty());
        for &w in d.successors(x) {
            let cw = cd.id_of(w as usize) as usize;
            if w >= scratch[cw] {
                continue; // dominated: every entry of w's row is too
            }
            if scratch[cw] == absent {
                touched.push(cw as u32);
            }
            scratch[cw] = w;
            let (start, len) = spans[w as usize];
            for e in start..start + len {
                let c = rev_chains[e] as usize;
                let p = rev_vertices[e];
                if p < scratch[c] {
                    if scratch[c] == absent {
                        touched.push(c as u32);
                    }
                    scratch[c] = p;
                }
            }
        }
        touched.sort_unstable();
        let own = cd.id_of(x);
        let start = rev_chains.len();
        for &c in &touched {
            if c != own {
                rev_chains.push(c);
                rev_vertices.push(scratch[c as usize]);
            }
            scratch[c as usize] = absent;
        }
        spans[x] = (start, rev_chains.len() - start);
        touched.clear();
    }

    let total = rev_chains.len();
    let mut row_offsets = Vec::with_capacity(n + 1);
    let mut entry_chains = Vec::with_capacity(total);
    let mut entry_vertices = Vec::with_capacity(total);
    row_offsets.push(0);
    for x in 0..n {
        let (start, len) = spans[x];
        entry_chains.extend_from_slice(&rev_chains[start..start + len]);
        entry_vertices.extend_from_slice(&rev_vertices[start..start + len]);
        row_offsets.push(entry_chains.len());
    }
    NivMap::from_parts(row_offsets, entry_chains, entry_vertices)
}

/// Enumerates the down-set of `x` as the disjoint chain walks rooted at the
/// entries of row `x` (own chain first, then stored entries in row order).
/// Each walk follows `next` to the chain minimum. Output is not sorted.
pub fn reachability_set(nm: &NivMap, cd: &ChainDecomposition, x: usize) -> Vec<u32> {
    let next = cd.next();
    let mut out = Vec::new();
    let walk = |from: u32, out: &mut Vec<u32>| {
        let mut v = from;
        loop {
            out.push(v);
            if next[v as usize] == v {
                break;
            }
            v = next[v as usize];
        }
    };
    walk(x as u32, &mut out);
    for &v in nm.row_vertices(x) {
        walk(v, &mut out);
    }
    out
}
