#![allow(dead_code)]

use cohft_core::graphs::StableGraph;

/// Non-decreasing `n`-tuples with entries in `0..k`.
pub fn multisets(k: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(k: u32, n: usize, lo: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in lo..k {
            cur.push(x);
            go(k, n, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, 0, &mut Vec::new(), &mut out);
    out
}

/// All `n`-tuples of non-negative integers with sum at most `max`.
pub fn exponent_tuples(n: usize, max: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for t in &out {
            let used: u32 = t.iter().sum();
            for b in 0..=(max as u32 - used) {
                let mut t = t.clone();
                t.push(b);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Invariants in `ρ_{b_1} ⊗ ⋯ ⊗ ρ_{b_n}` from weight multiplicities:
/// `#(weight 0) - #(weight 2)`.
pub fn clebsch_gordan_invariants(weights: &[u32]) -> u64 {
    let total: u32 = weights.iter().sum();
    let offset = total as i64;
    let mut counts = vec![0u64; 2 * total as usize + 1];
    counts[offset as usize] = 1;
    for &b in weights {
        let mut next = vec![0u64; counts.len()];
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut w = -(b as i64);
            while w <= b as i64 {
                let j = i as i64 + w;
                if (0..counts.len() as i64).contains(&j) {
                    next[j as usize] += c;
                }
                w += 2;
            }
        }
        counts = next;
    }
    let at = |w: i64| counts.get((offset + w) as usize).copied().unwrap_or(0);
    at(0) - at(2)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Counts triples (vertex permutation, edge permutation, orientation flips)
/// that preserve genera, legs and the incidence of every half-edge.
pub fn brute_force_aut(g: &StableGraph) -> u64 {
    let nv = g.num_vertices();
    let edges = g.edges();
    let ne = edges.len();
    let mut count = 0;
    let edge_perms = permutations(ne);
    for sigma in permutations(nv) {
        if (0..nv).any(|v| g.genera()[sigma[v]] != g.genera()[v]) {
            continue;
        }
        if g.legs().iter().any(|&v| sigma[v] != v) {
            continue;
        }
        for pi in &edge_perms {
            for flips in 0u32..(1 << ne) {
                let ok = (0..ne).all(|e| {
                    let (a, b) = edges[e];
                    let (a, b) = if flips & (1 << e) == 0 { (sigma[a], sigma[b]) } else { (sigma[b], sigma[a]) };
                    edges[pi[e]] == (a, b)
                });
                if ok {
                    count += 1;
                }
            }
        }
    }
    count
}
