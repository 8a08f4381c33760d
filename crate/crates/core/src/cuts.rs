//! Cut computations on general graphs and trees.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::{check_cap, Caps};

/// δ_G(S) for an explicit vertex set.
pub fn cut_size(graph: &Graph, subset: &[usize]) -> Result<usize> {
    graph.cut_size(subset)
}

/// Minimum cut over all `k`-subsets by exhaustive enumeration. Returns the
/// first minimiser in increasing bitmask order.
pub fn min_cut_k_bruteforce(graph: &Graph, k: usize) -> Result<(Vec<usize>, usize)> {
    min_cut_k_bruteforce_capped(graph, k, Caps::from_env().min_cut)
}

pub fn min_cut_k_bruteforce_capped(graph: &Graph, k: usize, cap: usize) -> Result<(Vec<usize>, usize)> {
    let n = graph.n();
    check_cap(n, cap)?;
    if k == 0 || k >= n {
        return Err(Error::OutOfRange { value: k, reason: "k must satisfy 1 <= k <= n-1" });
    }
    let adj = graph.adjacency_masks().expect("cap keeps n within 64");
    let full: u64 = (1u64 << n) - 1;
    let cut_of = |mask: u64| -> usize {
        let mut m = mask;
        let mut c = 0;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            c += (adj[v] & !mask & full).count_ones() as usize;
        }
        c
    };
    let mut mask: u64 = (1u64 << k) - 1;
    let mut best = (mask, cut_of(mask));
    loop {
        // Gosper's hack: next mask with the same popcount.
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
        if mask > full {
            break;
        }
        let cut = cut_of(mask);
        if cut < best.1 {
            best = (mask, cut);
        }
    }
    Ok((bits(best.0), best.1))
}

/// δ_G(k) for every `0 <= k <= n` in one pass over all subsets.
pub fn min_cut_profile_bruteforce(graph: &Graph) -> Result<Vec<usize>> {
    let n = graph.n();
    check_cap(n, Caps::from_env().min_cut)?;
    let adj = graph.adjacency_masks().expect("cap keeps n within 64");
    let deg: Vec<u32> = (0..n).map(|v| graph.degree(v) as u32).collect();
    let size = 1usize << n;
    let mut cut = vec![0u32; size];
    let mut best = vec![usize::MAX; n + 1];
    best[0] = 0;
    for s in 1..size {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let inner = (adj[v] & rest as u64).count_ones();
        cut[s] = cut[rest] + deg[v] - 2 * inner;
        let k = s.count_ones() as usize;
        best[k] = best[k].min(cut[s] as usize);
    }
    Ok(best)
}

pub(crate) fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Parent array and a pre-order of a tree rooted at `root`.
pub(crate) fn rooted_order(tree: &Graph, root: usize) -> (Vec<usize>, Vec<usize>) {
    let n = tree.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in tree.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    (parent, order)
}

/// A vertex whose removal leaves components of at most `n/2` vertices each;
/// the smallest such id.
pub fn center_of_gravity(tree: &Graph) -> Result<usize> {
    tree.require_tree()?;
    let n = tree.n();
    let (parent, order) = rooted_order(tree, 0);
    let mut size = vec![1usize; n];
    let mut heaviest_child = vec![0usize; n];
    for &v in order.iter().rev() {
        if v != 0 {
            let p = parent[v];
            size[p] += size[v];
            heaviest_child[p] = heaviest_child[p].max(size[v]);
        }
    }
    (0..n)
        .find(|&v| 2 * heaviest_child[v].max(n - size[v]) <= n)
        .ok_or(Error::NotATree)
}
