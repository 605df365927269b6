//! DAG representation with a canonical descending topological numbering.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

/// Largest `n` accepted by [`width_bruteforce`].
pub const WIDTH_BRUTEFORCE_LIMIT: usize = 24;

#[derive(Debug, Error)]
pub enum DagError {
    #[error("self loop on vertex {label:?}")]
    SelfLoop { label: String },
    #[error("input contains a cycle through {count} vertices ({sample})")]
    Cycle { count: usize, sample: String },
    #[error("invalid argument: {message}")]
    InvalidArgument { message: String },
    #[error("instance too large: n = {n} exceeds limit {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Immutable DAG in packed adjacency form.
///
/// Vertices are numbered `0..n` in a descending topological order: every
/// edge `(u, v)` satisfies `u < v`, and in the induced poset `v <= u` holds
/// iff `v` is reachable from `u`. Index 0 is always a maximal element.
/// Successor lists are sorted ascending and duplicate-free.
#[derive(Clone)]
pub struct Dag {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Vec<String>,
}

impl Dag {
    pub(crate) fn from_parts(offsets: Vec<usize>, targets: Vec<u32>, labels: Vec<String>) -> Self {
        debug_assert_eq!(offsets.len(), labels.len() + 1);
        debug_assert_eq!(*offsets.last().unwrap_or(&0), targets.len());
        Dag { offsets, targets, labels }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Successors of `v`, ascending. All entries are `> v`.
    pub fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Original label of internal vertex `v`.
    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Edges as `(source, target)` index pairs, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| self.successors(u).iter().map(move |&v| (u as u32, v)))
    }

    /// Number of weakly connected components.
    pub fn weak_components(&self) -> usize {
        let n = self.n();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for (u, v) in self.edges() {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv) as usize] = ru.min(rv);
            }
        }
        (0..n as u32).filter(|&v| find(&mut parent, v) == v).count()
    }
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dag")
            .field("n", &self.n())
            .field("edges", &self.edge_count())
            .finish()
    }
}

/// Orders labels so that purely numeric labels sort by value ahead of all
/// other labels, which sort lexicographically. Ties in the topological
/// frontier are broken by this order, making the numbering reproducible.
pub(crate) fn cmp_labels(a: &str, b: &str) -> Ordering {
    let num_a = !a.is_empty() && a.bytes().all(|c| c.is_ascii_digit());
    let num_b = !b.is_empty() && b.bytes().all(|c| c.is_ascii_digit());
    match (num_a, num_b) {
        (true, true) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => a.cmp(b),
    }
}

/// Builds a [`Dag`] from labelled edges plus optional standalone vertices.
///
/// Self loops and cycles are rejected. Duplicate edges collapse. The
/// numbering is the Kahn order that always picks the smallest available
/// label (see [`cmp_labels`]), so a graph whose labels `1..=n` already form
/// a descending topological order is numbered identically to its labels.
pub fn build_dag<S: AsRef<str>>(edges: &[(S, S)], vertices: &[S]) -> Result<Dag, DagError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index = std::collections::HashMap::<String, u32>::new();
    let mut intern = |s: &str, labels: &mut Vec<String>| -> u32 {
        if let Some(&i) = index.get(s) {
            return i;
        }
        let i = labels.len() as u32;
        index.insert(s.to_string(), i);
        labels.push(s.to_string());
        i
    };

    let mut raw_edges = Vec::with_capacity(edges.len());
    for (a, b) in edges {
        let (a, b) = (a.as_ref(), b.as_ref());
        if a == b {
            return Err(DagError::SelfLoop { label: a.to_string() });
        }
        let ia = intern(a, &mut labels);
        let ib = intern(b, &mut labels);
        raw_edges.push((ia, ib));
    }
    for v in vertices {
        intern(v.as_ref(), &mut labels);
    }
    let n = labels.len();

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in &raw_edges {
        adj[a as usize].push(b);
    }
    let mut indeg = vec![0u32; n];
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
        for &t in row.iter() {
            indeg[t as usize] += 1;
        }
    }

    // Rank of each provisional vertex in the global label order; the Kahn
    // frontier is keyed on it so tie-breaking never re-compares strings.
    let mut by_label: Vec<u32> = (0..n as u32).collect();
    by_label.sort_unstable_by(|&x, &y| cmp_labels(&labels[x as usize], &labels[y as usize]));
    let mut rank = vec![0u32; n];
    for (r, &v) in by_label.iter().enumerate() {
        rank[v as usize] = r as u32;
    }

    let mut heap: BinaryHeap<std::cmp::Reverse<(u32, u32)>> = (0..n as u32)
        .filter(|&v| indeg[v as usize] == 0)
        .map(|v| std::cmp::Reverse((rank[v as usize], v)))
        .collect();
    let mut order = Vec::with_capacity(n);
    let mut position = vec![u32::MAX; n];
    while let Some(std::cmp::Reverse((_, v))) = heap.pop() {
        position[v as usize] = order.len() as u32;
        order.push(v);
        for &t in &adj[v as usize] {
            indeg[t as usize] -= 1;
            if indeg[t as usize] == 0 {
                heap.push(std::cmp::Reverse((rank[t as usize], t)));
            }
        }
    }
    if order.len() < n {
        let mut stuck: Vec<&str> = (0..n)
            .filter(|&v| position[v] == u32::MAX)
            .map(|v| labels[v].as_str())
            .collect();
        stuck.sort_unstable_by(|a, b| cmp_labels(a, b));
        let sample = stuck.iter().take(8).cloned().collect::<Vec<_>>().join(", ");
        return Err(DagError::Cycle { count: stuck.len(), sample });
    }

    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(raw_edges.len());
    let mut out_labels = Vec::with_capacity(n);
    offsets.push(0);
    for &v in &order {
        let mut row: Vec<u32> = adj[v as usize].iter().map(|&t| position[t as usize]).collect();
        row.sort_unstable();
        targets.extend_from_slice(&row);
        offsets.push(targets.len());
        out_labels.push(std::mem::take(&mut labels[v as usize]));
    }
    Ok(Dag::from_parts(offsets, targets, out_labels))
}

/// Transitive closure, one sorted row per vertex.
///
/// Row `i` lists the principal down-set of `i` in ascending index order and
/// always starts with `i` itself. Quadratic in the worst case; meant for
/// oracles and diagnostics, not for the fast transform path.
pub struct ClosureMatrix {
    rows: Vec<Vec<u32>>,
}

impl ClosureMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Down-set of `i`: ascending, `row(i)[0] == i`.
    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    /// True iff `j <= i` in the poset, i.e. `j` is reachable from `i`.
    pub fn le(&self, j: u32, i: u32) -> bool {
        self.rows[i as usize].binary_search(&j).is_ok()
    }

    /// Total number of stored entries, diagonal included.
    pub fn nnz(&self) -> u64 {
        self.rows.iter().map(|r| r.len() as u64).sum()
    }
}

/// Computes the transitive closure by a reverse-order walk that unions
/// successor rows. `O(n + sum of row sizes)` space, oracle use only.
pub fn transitive_closure(d: &Dag) -> ClosureMatrix {
    let n = d.n();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut stamp = vec![u32::MAX; n];
    for i in (0..n).rev() {
        let mut row = vec![i as u32];
        stamp[i] = i as u32;
        for &s in d.successors(i) {
            if stamp[s as usize] == i as u32 {
                continue;
            }
            stamp[s as usize] = i as u32;
            row.push(s);
            // rows[s] is complete because s > i.
            for &t in &rows[s as usize] {
                if stamp[t as usize] != i as u32 {
                    stamp[t as usize] = i as u32;
                    row.push(t);
                }
            }
        }
        row.sort_unstable();
        debug_assert_eq!(row[0], i as u32);
        rows[i] = row;
    }
    ClosureMatrix { rows }
}

/// Transitive reduction: keeps exactly the edges `(u, v)` with no other
/// path from `u` to `v`. Labels and numbering are preserved.
pub fn transitive_reduction(d: &Dag) -> Dag {
    let n = d.n();
    // tclos[v] = strict down-set of v, in discovery order; mark is a scratch
    // membership flag over it, cleared after each vertex.
    let mut tclos: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut mark = vec![false; n];
    let mut offsets = vec![0usize; n + 1];
    let mut kept: Vec<Vec<u32>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        for &x in d.successors(i) {
            if mark[x as usize] {
                continue; // reachable through an earlier successor: redundant
            }
            kept[i].push(x);
            mark[x as usize] = true;
            tclos[i].push(x);
            for xi in 0..tclos[x as usize].len() {
                let y = tclos[x as usize][xi];
                if !mark[y as usize] {
                    mark[y as usize] = true;
                    tclos[i].push(y);
                }
            }
        }
        for &y in &tclos[i] {
            mark[y as usize] = false;
        }
    }
    let mut targets = Vec::new();
    for i in 0..n {
        offsets[i] = targets.len();
        targets.extend_from_slice(&kept[i]);
    }
    offsets[n] = targets.len();
    Dag::from_parts(offsets, targets, d.labels().to_vec())
}

/// Maximum antichain size (poset width) by branch-and-bound over the
/// comparability graph. Exponential; rejects `n > 24`.
pub fn width_bruteforce(d: &Dag) -> Result<usize, DagError> {
    let n = d.n();
    if n > WIDTH_BRUTEFORCE_LIMIT {
        return Err(DagError::TooLarge { n, limit: WIDTH_BRUTEFORCE_LIMIT });
    }
    if n == 0 {
        return Ok(0);
    }
    let closure = transitive_closure(d);
    let mut comp = vec![0u32; n];
    for i in 0..n {
        for &j in &closure.row(i)[1..] {
            comp[i] |= 1 << j;
            comp[j as usize] |= 1 << i;
        }
    }

    // Max independent set: branch on a max-degree vertex; once every degree
    // is <= 1 the remainder is isolated vertices plus disjoint edges.
    fn mis(rem: u32, comp: &[u32]) -> u32 {
        if rem == 0 {
            return 0;
        }
        let mut best_v = usize::MAX;
        let mut best_d = 0u32;
        let mut endpoints = 0u32;
        let mut bits = rem;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let dgr = (comp[v] & rem).count_ones();
            if dgr > 0 {
                endpoints += 1;
            }
            if dgr > best_d {
                best_d = dgr;
                best_v = v;
            }
        }
        if best_d <= 1 {
            return rem.count_ones() - endpoints / 2;
        }
        let without = mis(rem & !(1 << best_v), comp);
        let with = 1 + mis(rem & !(1 << best_v) & !comp[best_v], comp);
        without.max(with)
    }
    Ok(mis((1u32 << n) - 1, &comp) as usize)
}
