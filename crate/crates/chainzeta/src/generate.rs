//! Seeded random DAG generation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::{Dag, DagError};

/// Samples an Erdos-Renyi DAG: every pair of positions `a < b` carries an
/// edge independently with probability `p = delta / (n - 1)`, so the
/// expected average total degree is `delta`. Positions already form a
/// descending topological order; labels are a seeded random permutation of
/// `1..=n` rendered in decimal.
///
/// Runs in `O(n + |E|)` by skipping over non-edges with geometric jumps.
/// The same `(n, delta, seed)` triple always yields the same graph.
pub fn generate_erdos_renyi(n: usize, delta: f64, seed: u64) -> Result<Dag, DagError> {
    if n == 0 {
        return Err(DagError::InvalidArgument { message: "n must be at least 1".into() });
    }
    if n as u64 > u32::MAX as u64 {
        return Err(DagError::InvalidArgument { message: format!("n = {n} exceeds the u32 vertex limit") });
    }
    if !delta.is_finite() || delta < 0.0 {
        return Err(DagError::InvalidArgument { message: format!("delta = {delta} must be a finite non-negative number") });
    }
    let max_delta = (n - 1) as f64;
    if delta > max_delta {
        return Err(DagError::InvalidArgument {
            message: format!("delta = {delta} exceeds n - 1 = {max_delta}"),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    perm.shuffle(&mut rng);
    let labels: Vec<String> = perm.iter().map(|v| v.to_string()).collect();

    let p = if n > 1 { delta / max_delta } else { 0.0 };
    let mut offsets = vec![0usize; n + 1];
    let mut targets: Vec<u32> = Vec::new();

    if p >= 1.0 {
        targets.reserve(n * (n - 1) / 2);
        for a in 0..n {
            offsets[a] = targets.len();
            targets.extend((a as u32 + 1)..n as u32);
        }
        offsets[n] = targets.len();
        return Ok(Dag::from_parts(offsets, targets, labels));
    }

    // Enumerate candidate pairs (a, b) in lexicographic order and jump
    // geometrically to the next present edge; within a row the targets come
    // out ascending, so the adjacency is born sorted.
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
    if p > 0.0 && n > 1 {
        let ln_q = (1.0 - p).ln();
        let mut a: usize = 0;
        let mut b: usize = 1;
        loop {
            let u: f64 = rng.gen();
            // u in [0, 1) makes 1 - u in (0, 1]; skip is geometric with
            // success probability p, skip = 0 meaning "take this pair".
            let mut skip = ((1.0 - u).ln() / ln_q).floor() as u64;
            loop {
                let row_left = (n - b) as u64;
                if skip < row_left {
                    b += skip as usize;
                    break;
                }
                skip -= row_left;
                a += 1;
                if a >= n - 1 {
                    break;
                }
                b = a + 1;
            }
            if a >= n - 1 {
                break;
            }
            rows[a].push(b as u32);
            b += 1;
            if b >= n {
                a += 1;
                if a >= n - 1 {
                    break;
                }
                b = a + 1;
            }
        }
    }
    let total: usize = rows.iter().map(Vec::len).sum();
    targets.reserve(total);
    for (a, row) in rows.iter().enumerate() {
        offsets[a] = targets.len();
        targets.extend_from_slice(row);
    }
    offsets[n] = targets.len();
    Ok(Dag::from_parts(offsets, targets, labels))
}
