//! Maximum bipartite matching (Hopcroft-Karp), iterative throughout so deep
//! augmenting paths cannot overflow the stack on million-vertex inputs.

pub(crate) const UNMATCHED: u32 = u32::MAX;

/// Maximum matching for a bipartite graph given in packed adjacency form:
/// left vertex `u` is adjacent to `targets[offsets[u]..offsets[u + 1]]` on
/// the right side. Returns the partner of each left vertex (or
/// [`UNMATCHED`]). Deterministic: ties resolve by adjacency order.
/// `O(|E| * sqrt(V))`.
pub(crate) fn hopcroft_karp(n_left: usize, n_right: usize, offsets: &[usize], targets: &[u32]) -> Vec<u32> {
    debug_assert_eq!(offsets.len(), n_left + 1);
    let inf = u32::MAX;
    let mut match_l = vec![UNMATCHED; n_left];
    let mut match_r = vec![UNMATCHED; n_right];
    let mut dist = vec![inf; n_left];
    let mut queue: Vec<u32> = Vec::with_capacity(n_left);
    // Per-phase cursor into each left adjacency row ("current arc").
    let mut cursor = vec![0usize; n_left];
    // DFS stack of left vertices plus the right vertex used to enter each.
    let mut stack: Vec<u32> = Vec::new();
    let mut via: Vec<u32> = Vec::new();

    loop {
        // BFS layering from free left vertices.
        queue.clear();
        for u in 0..n_left {
            if match_l[u] == UNMATCHED {
                dist[u] = 0;
                queue.push(u as u32);
            } else {
                dist[u] = inf;
            }
        }
        let mut free_right_reached = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            for &v in &targets[offsets[u]..offsets[u + 1]] {
                let w = match_r[v as usize];
                if w == UNMATCHED {
                    free_right_reached = true;
                } else if dist[w as usize] == inf {
                    dist[w as usize] = dist[u] + 1;
                    queue.push(w);
                }
            }
        }
        if !free_right_reached {
            break;
        }

        cursor.copy_from_slice(&offsets[..n_left]);
        let mut augmented = 0usize;
        for u0 in 0..n_left {
            if match_l[u0] != UNMATCHED {
                continue;
            }
            stack.clear();
            via.clear();
            stack.push(u0 as u32);
            via.push(UNMATCHED);
            'dfs: while let Some(&u) = stack.last() {
                let u = u as usize;
                while cursor[u] < offsets[u + 1] {
                    let v = targets[cursor[u]];
                    cursor[u] += 1;
                    let w = match_r[v as usize];
                    if w == UNMATCHED {
                        // Augment along the stack: the top pairs with v,
                        // every vertex below reclaims the right vertex it
                        // was entered through.
                        let mut take = v;
                        for i in (0..stack.len()).rev() {
                            let ui = stack[i] as usize;
                            match_l[ui] = take;
                            match_r[take as usize] = ui as u32;
                            take = via[i];
                        }
                        augmented += 1;
                        stack.clear();
                        via.clear();
                        break 'dfs;
                    }
                    if dist[w as usize] == dist[u] + 1 {
                        stack.push(w);
                        via.push(v);
                        continue 'dfs;
                    }
                }
                dist[u] = inf;
                stack.pop();
                via.pop();
            }
        }
        if augmented == 0 {
            break;
        }
    }
    match_l
}
