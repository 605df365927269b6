//! Chain decompositions of the vertex set.
//!
//! A decomposition is stored as a successor map: `next[x]` is the next
//! smaller vertex on the chain of `x`, with `next[x] == x` at the chain's
//! minimum. Chains are numbered `1..=k` in order of their first (largest)
//! vertex. Both transforms accept any decomposition; fewer chains only
//! tightens the `O(n * k)` bounds.

use thiserror::Error;

use crate::dag::{transitive_closure, Dag};
use crate::matching::{hopcroft_karp, UNMATCHED};

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("vertices {first:?} and {second:?} share a chain but are incomparable")]
    NotAChain { first: String, second: String },
    #[error("vertex {label:?} appears in more than one chain")]
    DuplicateVertex { label: String },
    #[error("{missing} vertices missing from the chain partition, e.g. {sample:?}")]
    MissingVertex { missing: usize, sample: String },
    #[error("chain entry {index} is out of range for n = {n}")]
    VertexOutOfRange { index: u32, n: usize },
}

/// A partition of the vertices into chains.
#[derive(Clone, Debug)]
pub struct ChainDecomposition {
    next: Vec<u32>,
    id: Vec<u32>,
    chains: Vec<Vec<u32>>,
    q: usize,
}

impl ChainDecomposition {
    /// Rebuilds the chain lists and ids from a successor map.
    /// `next[x] == x` terminates a chain; otherwise `next[x] > x`.
    pub(crate) fn from_next(next: Vec<u32>) -> Self {
        let n = next.len();
        let mut pointed = vec![false; n];
        for (x, &nx) in next.iter().enumerate() {
            debug_assert!(nx as usize == x || nx as usize > x);
            if nx as usize != x {
                pointed[nx as usize] = true;
            }
        }
        let mut id = vec![0u32; n];
        let mut chains = Vec::new();
        let mut q = 0;
        for head in 0..n {
            if pointed[head] {
                continue;
            }
            let c = chains.len() as u32 + 1;
            let mut chain = Vec::new();
            let mut v = head;
            loop {
                id[v] = c;
                chain.push(v as u32);
                if next[v] as usize == v {
                    break;
                }
                v = next[v] as usize;
            }
            q = q.max(chain.len());
            chains.push(chain);
        }
        debug_assert_eq!(chains.iter().map(Vec::len).sum::<usize>(), n);
        ChainDecomposition { next, id, chains, q }
    }

    /// Rebuilds a decomposition from stored `next` and `id` arrays,
    /// preserving the stored chain numbering. Validates the path structure
    /// so corrupted input cannot yield an inconsistent decomposition.
    pub(crate) fn from_next_and_id(next: Vec<u32>, id: Vec<u32>) -> Result<Self, String> {
        let n = next.len();
        if id.len() != n {
            return Err("next and id arrays disagree on n".into());
        }
        let k = id.iter().copied().max().unwrap_or(0) as usize;
        if n > 0 && id.iter().any(|&c| c == 0) {
            return Err("chain id zero".into());
        }
        let mut pointed = vec![false; n];
        for (x, &nx) in next.iter().enumerate() {
            let nx = nx as usize;
            if nx >= n || (nx != x && nx <= x) {
                return Err(format!("bad next pointer at vertex {x}"));
            }
            if nx != x {
                if pointed[nx] {
                    return Err(format!("vertex {nx} has two chain predecessors"));
                }
                pointed[nx] = true;
                if id[nx] != id[x] {
                    return Err(format!("chain id changes along next at vertex {x}"));
                }
            }
        }
        let mut chains: Vec<Vec<u32>> = vec![Vec::new(); k];
        let mut q = 0;
        for head in 0..n {
            if pointed[head] {
                continue;
            }
            let chain = &mut chains[id[head] as usize - 1];
            if !chain.is_empty() {
                return Err(format!("chain id {} has two heads", id[head]));
            }
            let mut v = head;
            loop {
                chain.push(v as u32);
                if next[v] as usize == v {
                    break;
                }
                v = next[v] as usize;
            }
            q = q.max(chain.len());
        }
        if chains.iter().any(Vec::is_empty) {
            return Err("chain id range has gaps".into());
        }
        Ok(ChainDecomposition { next, id, chains, q })
    }

    pub fn n(&self) -> usize {
        self.next.len()
    }

    /// Number of chains.
    pub fn k(&self) -> usize {
        self.chains.len()
    }

    /// Length of the longest chain in the decomposition.
    pub fn longest_chain(&self) -> usize {
        self.q
    }

    /// Next smaller vertex on the chain of `x`; `x` itself at the minimum.
    pub fn next(&self) -> &[u32] {
        &self.next
    }

    /// Chain id of `x`, in `1..=k`.
    pub fn id_of(&self, x: usize) -> u32 {
        self.id[x]
    }

    /// Chains in id order; each lists its vertices by ascending index,
    /// i.e. from the chain's largest element down to its smallest.
    pub fn chains(&self) -> &[Vec<u32>] {
        &self.chains
    }
}

fn decomposition_from_matching(match_l: Vec<u32>) -> ChainDecomposition {
    let next: Vec<u32> = match_l
        .into_iter()
        .enumerate()
        .map(|(x, m)| if m == UNMATCHED { x as u32 } else { m })
        .collect();
    ChainDecomposition::from_next(next)
}

/// Minimum chain decomposition (Dilworth: `k` equals the poset width).
///
/// Runs maximum matching on the split graph of the transitive closure, so
/// it materializes the closure first; use [`decompose_path_cover`] when the
/// closure is too large.
pub fn decompose(d: &Dag) -> ChainDecomposition {
    let n = d.n();
    let closure = transitive_closure(d);
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(closure.nnz() as usize - n);
    offsets.push(0);
    for v in 0..n {
        targets.extend_from_slice(&closure.row(v)[1..]);
        offsets.push(targets.len());
    }
    decomposition_from_matching(hopcroft_karp(n, n, &offsets, &targets))
}

/// Chain decomposition from a minimum path cover of the direct edges.
///
/// Matching runs on the input adjacency itself, so no closure is built and
/// the cost is `O(|E| * sqrt(n))`. The chain count can exceed the poset
/// width, which weakens no correctness property of the transforms.
pub fn decompose_path_cover(d: &Dag) -> ChainDecomposition {
    let n = d.n();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for v in 0..n {
        offsets.push(offsets[v] + d.successors(v).len());
    }
    let targets: Vec<u32> = d.edges().map(|(_, t)| t).collect();
    decomposition_from_matching(hopcroft_karp(n, n, &offsets, &targets))
}

/// Validates a user-supplied chain partition and turns it into a
/// [`ChainDecomposition`]. Each inner list is sorted into descending poset
/// order first, so listing order does not matter; chain ids follow input
/// order. Fails if the lists are not disjoint chains covering every vertex.
pub fn decompose_explicit(d: &Dag, chains: &[Vec<u32>]) -> Result<ChainDecomposition, ChainError> {
    let n = d.n();
    let closure = transitive_closure(d);
    let mut next: Vec<u32> = (0..n as u32).collect();
    let mut id = vec![0u32; n];
    let mut sorted_chains = Vec::with_capacity(chains.len());
    let mut covered = 0usize;
    for (ci, chain) in chains.iter().enumerate() {
        let mut chain = chain.clone();
        for &v in &chain {
            if v as usize >= n {
                return Err(ChainError::VertexOutOfRange { index: v, n });
            }
        }
        chain.sort_unstable();
        for w in chain.windows(2) {
            if w[0] == w[1] {
                return Err(ChainError::DuplicateVertex { label: d.label(w[0] as usize).to_string() });
            }
            // Ascending index within a chain must mean descending order.
            if !closure.le(w[1], w[0]) {
                return Err(ChainError::NotAChain {
                    first: d.label(w[0] as usize).to_string(),
                    second: d.label(w[1] as usize).to_string(),
                });
            }
        }
        let c = ci as u32 + 1;
        for (pos, &v) in chain.iter().enumerate() {
            if id[v as usize] != 0 {
                return Err(ChainError::DuplicateVertex { label: d.label(v as usize).to_string() });
            }
            id[v as usize] = c;
            next[v as usize] = if pos + 1 < chain.len() { chain[pos + 1] } else { v };
        }
        covered += chain.len();
        sorted_chains.push(chain);
    }
    if covered < n {
        let first_missing = (0..n).find(|&v| id[v] == 0).expect("missing vertex exists");
        return Err(ChainError::MissingVertex {
            missing: n - covered,
            sample: d.label(first_missing).to_string(),
        });
    }
    let q = sorted_chains.iter().map(Vec::len).max().unwrap_or(0);
    Ok(ChainDecomposition { next, id, chains: sorted_chains, q })
}
