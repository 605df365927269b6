//! Zeta and Moebius transforms, fast and naive, plus diagnostics.
//!
//! With the descending numbering both transforms are solved by one sweep
//! from index `n - 1` down to `0`. The fast versions touch only the sparse
//! nearest-in-chain rows and perform exactly `nnz - k` ring additions
//! (zeta) or subtractions (moebius); the naive versions walk full closure
//! rows and serve as oracles.

use thiserror::Error;

use crate::chain::ChainDecomposition;
use crate::dag::{transitive_closure, ClosureMatrix, Dag};
use crate::niv::NivMap;

/// Largest `n` accepted by [`moebius_function`].
pub const MOEBIUS_FUNCTION_LIMIT: usize = 2000;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("input vector has length {found}, poset has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("instance too large: n = {n} exceeds limit {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Element type the transforms operate over. Addition and subtraction must
/// be inverse to each other; no other structure is used.
pub trait Ring: Copy + PartialEq + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> {
    const ZERO: Self;
}

impl Ring for i64 {
    const ZERO: Self = 0;
}

impl Ring for f64 {
    const ZERO: Self = 0.0;
}

impl Ring for i32 {
    const ZERO: Self = 0;
}

fn check_len<T>(x: &[T], n: usize) -> Result<(), TransformError> {
    if x.len() != n {
        return Err(TransformError::LengthMismatch { expected: n, found: x.len() });
    }
    Ok(())
}

fn zeta_kernel<T: Ring, const COUNT: bool>(nm: &NivMap, cd: &ChainDecomposition, x: &[T]) -> (Vec<T>, u64) {
    let n = x.len();
    let next = cd.next();
    // suffix[i] = sum of x over the chain tail starting at i.
    let mut suffix = vec![T::ZERO; n];
    let mut y = vec![T::ZERO; n];
    let mut ops = 0u64;
    for i in (0..n).rev() {
        let nx = next[i] as usize;
        let s = if nx == i {
            x[i]
        } else {
            if COUNT {
                ops += 1;
            }
            x[i] + suffix[nx]
        };
        suffix[i] = s;
        let row = nm.row_vertices(i);
        let mut acc = s;
        for &v in row {
            acc = acc + suffix[v as usize];
        }
        if COUNT {
            ops += row.len() as u64;
        }
        y[i] = acc;
    }
    (y, ops)
}

fn moebius_kernel<T: Ring, const COUNT: bool>(nm: &NivMap, cd: &ChainDecomposition, x: &[T]) -> (Vec<T>, u64) {
    let n = x.len();
    let next = cd.next();
    let mut ops = 0u64;
    // Back-substitution: yp[i] is the moebius transform summed over the
    // chain tail of i; the final pass takes chain differences.
    let mut yp = vec![T::ZERO; n];
    for i in (0..n).rev() {
        let row = nm.row_vertices(i);
        let mut acc = x[i];
        for &v in row {
            acc = acc - yp[v as usize];
        }
        if COUNT {
            ops += row.len() as u64;
        }
        yp[i] = acc;
    }
    let mut y = vec![T::ZERO; n];
    for i in 0..n {
        let nx = next[i] as usize;
        y[i] = if nx == i {
            yp[i]
        } else {
            if COUNT {
                ops += 1;
            }
            yp[i] - yp[nx]
        };
    }
    (y, ops)
}

/// Fast zeta transform: `y[i] = sum of x over the down-set of i`.
pub fn zeta_fast<T: Ring>(nm: &NivMap, cd: &ChainDecomposition, x: &[T]) -> Result<Vec<T>, TransformError> {
    check_len(x, nm.n())?;
    Ok(zeta_kernel::<T, false>(nm, cd, x).0)
}

/// [`zeta_fast`] plus the number of ring additions actually performed,
/// which always equals `nnz - k`.
pub fn zeta_fast_counted<T: Ring>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    x: &[T],
) -> Result<(Vec<T>, u64), TransformError> {
    check_len(x, nm.n())?;
    Ok(zeta_kernel::<T, true>(nm, cd, x))
}

/// Fast moebius transform, the exact inverse of [`zeta_fast`].
pub fn moebius_fast<T: Ring>(nm: &NivMap, cd: &ChainDecomposition, x: &[T]) -> Result<Vec<T>, TransformError> {
    check_len(x, nm.n())?;
    Ok(moebius_kernel::<T, false>(nm, cd, x).0)
}

/// [`moebius_fast`] plus the number of ring subtractions performed,
/// which always equals `nnz - k`.
pub fn moebius_fast_counted<T: Ring>(
    nm: &NivMap,
    cd: &ChainDecomposition,
    x: &[T],
) -> Result<(Vec<T>, u64), TransformError> {
    check_len(x, nm.n())?;
    Ok(moebius_kernel::<T, true>(nm, cd, x))
}

/// Oracle zeta transform over explicit closure rows.
pub fn zeta_naive<T: Ring>(closure: &ClosureMatrix, x: &[T]) -> Result<Vec<T>, TransformError> {
    Ok(zeta_naive_counted(closure, x)?.0)
}

/// [`zeta_naive`] plus its addition count: row length minus one per vertex.
pub fn zeta_naive_counted<T: Ring>(closure: &ClosureMatrix, x: &[T]) -> Result<(Vec<T>, u64), TransformError> {
    let n = closure.n();
    check_len(x, n)?;
    let mut ops = 0u64;
    let mut y = vec![T::ZERO; n];
    for i in 0..n {
        let row = closure.row(i);
        let mut acc = x[i];
        for &v in &row[1..] {
            acc = acc + x[v as usize];
        }
        ops += row.len() as u64 - 1;
        y[i] = acc;
    }
    Ok((y, ops))
}

/// Oracle moebius transform by back-substitution over closure rows.
pub fn moebius_naive<T: Ring>(closure: &ClosureMatrix, x: &[T]) -> Result<Vec<T>, TransformError> {
    Ok(moebius_naive_counted(closure, x)?.0)
}

/// [`moebius_naive`] plus its subtraction count.
pub fn moebius_naive_counted<T: Ring>(closure: &ClosureMatrix, x: &[T]) -> Result<(Vec<T>, u64), TransformError> {
    let n = closure.n();
    check_len(x, n)?;
    let mut ops = 0u64;
    let mut y = vec![T::ZERO; n];
    for i in (0..n).rev() {
        let row = closure.row(i);
        let mut acc = x[i];
        for &v in &row[1..] {
            acc = acc - y[v as usize];
        }
        ops += row.len() as u64 - 1;
        y[i] = acc;
    }
    Ok((y, ops))
}

/// Sparse moebius function matrix: `row(i)` holds the nonzero values
/// `mu(x_j, x_i)` for `x_j` in the down-set of `x_i`, ascending in `j`.
pub struct MoebiusMatrix {
    rows: Vec<Vec<(u32, i64)>>,
}

impl MoebiusMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Nonzero `(j, mu(x_j, x_i))` pairs of row `i`, ascending in `j`.
    pub fn row(&self, i: usize) -> &[(u32, i64)] {
        &self.rows[i]
    }

    /// `mu(x_j, x_i)`, zero when `x_j` is not below `x_i`.
    pub fn coeff(&self, i: usize, j: u32) -> i64 {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => self.rows[i][pos].1,
            Err(_) => 0,
        }
    }
}

/// Moebius function of the whole poset via the dual recursion
/// `mu(x_j, x_i) = -sum of mu(z, x_i) over x_j < z <= x_i`, one row per
/// fixed upper argument. Rejects `n > 2000`: cost grows with
/// `sum over rows of |down-set| * |nonzero support|`.
pub fn moebius_function(d: &Dag) -> Result<MoebiusMatrix, TransformError> {
    let n = d.n();
    if n > MOEBIUS_FUNCTION_LIMIT {
        return Err(TransformError::TooLarge { n, limit: MOEBIUS_FUNCTION_LIMIT });
    }
    let closure = transitive_closure(d);
    // Bit matrix of the closure: below[i] has bit j set iff x_j <= x_i.
    let words = n.div_ceil(64);
    let mut below = vec![0u64; n * words];
    for i in 0..n {
        for &j in closure.row(i) {
            below[i * words + (j as usize >> 6)] |= 1u64 << (j & 63);
        }
    }
    let is_below = |j: u32, i: u32| below[i as usize * words + (j as usize >> 6)] >> (j & 63) & 1 == 1;

    let mut rows: Vec<Vec<(u32, i64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let r = closure.row(i);
        let mut row: Vec<(u32, i64)> = vec![(i as u32, 1)];
        for &j in &r[1..] {
            // All strictly-between elements already carry their value, and
            // only nonzero values contribute.
            let mut sum = 0i64;
            for &(z, val) in &row {
                if is_below(j, z) {
                    sum += val;
                }
            }
            if sum != 0 {
                row.push((j, -sum));
            }
        }
        rows.push(row);
    }
    Ok(MoebiusMatrix { rows })
}

/// Operation counts for a precomputed instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperationCounts {
    /// Ring operations of either fast transform: `nnz - k`.
    pub fast_ops: u64,
    /// Ring operations of the naive transforms: closure size minus `n`.
    pub naive_ops: u64,
    pub k: usize,
    pub nnz: u64,
}

/// Computes both cost figures without materializing the closure: the size
/// of each down-set is the sum of chain tail lengths over the row entries.
pub fn operation_count(nm: &NivMap, cd: &ChainDecomposition) -> OperationCounts {
    let n = nm.n();
    let next = cd.next();
    // tail[v] = number of chain elements from v down to its chain minimum.
    let mut tail = vec![0u64; n];
    for v in (0..n).rev() {
        let nx = next[v] as usize;
        tail[v] = if nx == v { 1 } else { 1 + tail[nx] };
    }
    let mut naive_ops = 0u64;
    for i in 0..n {
        let mut down = tail[i];
        for &v in nm.row_vertices(i) {
            down += tail[v as usize];
        }
        naive_ops += down - 1;
    }
    OperationCounts {
        fast_ops: nm.nnz() - cd.k() as u64,
        naive_ops,
        k: cd.k(),
        nnz: nm.nnz(),
    }
}

/// Triplet dump of the structural factorization behind the fast zeta
/// transform: `Z = U * V` and `V = Pt * B * P` with all values one.
/// Intended for inspection and tests at small `n`; the fast path never
/// materializes any of these.
pub struct FactorMatrices {
    pub n: usize,
    /// Ones of `U`: diagonal plus one entry per stored nearest-in-chain
    /// element, row-major sorted.
    pub u_entries: Vec<(u32, u32)>,
    /// Ones of `V`: `(u, v)` for every `v` on the chain of `u` at or below
    /// `u`, row-major sorted.
    pub v_entries: Vec<(u32, u32)>,
    /// Ones of `B = P * V * Pt`: a block of ones above the diagonal per
    /// chain, row-major sorted.
    pub b_entries: Vec<(u32, u32)>,
    /// `position[v]` = row of `v` after the chain-major permutation `P`,
    /// i.e. `B[position[u]][position[v]] = V[u][v]`.
    pub position: Vec<u32>,
}

pub fn factor_matrices(nm: &NivMap, cd: &ChainDecomposition) -> FactorMatrices {
    let n = nm.n();
    let next = cd.next();
    let mut u_entries = Vec::with_capacity(nm.stored_entries() + n);
    let mut v_entries = Vec::new();
    for i in 0..n as u32 {
        let start = u_entries.len();
        u_entries.push((i, i));
        for &v in nm.row_vertices(i as usize) {
            u_entries.push((i, v));
        }
        // Stored entries are chain-ordered; U wants column order.
        u_entries[start + 1..].sort_unstable();
        let mut v = i;
        loop {
            v_entries.push((i, v));
            if next[v as usize] == v {
                break;
            }
            v = next[v as usize];
        }
    }
    let mut position = vec![0u32; n];
    let mut b_entries = Vec::with_capacity(v_entries.len());
    let mut base = 0u32;
    for chain in cd.chains() {
        for (off, &v) in chain.iter().enumerate() {
            position[v as usize] = base + off as u32;
        }
        for i in 0..chain.len() as u32 {
            for j in i..chain.len() as u32 {
                b_entries.push((base + i, base + j));
            }
        }
        base += chain.len() as u32;
    }
    FactorMatrices { n, u_entries, v_entries, b_entries, position }
}
