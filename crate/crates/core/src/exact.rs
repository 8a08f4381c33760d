//! Exact solvers used as ground truth.

use num_bigint::BigUint;

use crate::approx::Layout;
use crate::cuts::rooted_order;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Allocation, Instance};
use crate::weight::{fits_u64, Weight};
use crate::{check_cap, Caps};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub optimal_envy: BigUint,
    pub witness: Allocation,
    pub states_explored: u64,
}

/// Minimum envy by dynamic programming over vertex subsets.
///
/// Envy decomposes as `sum_i (h_{i+1} - h_i) * δ(S_i)` where `S_i` is the set
/// of vertices holding the `i` lowest houses, so an optimum is a chain
/// `∅ ⊂ S_1 ⊂ ... ⊂ V` minimising that sum. Among optimal chains the witness
/// uses the lexicographically smallest vertex order.
pub fn solve_exact_dp(instance: &Instance) -> Result<ExactResult> {
    solve_exact_dp_capped(instance, Caps::from_env().dp)
}

pub fn solve_exact_dp_capped(instance: &Instance, cap: usize) -> Result<ExactResult> {
    let n = instance.n();
    check_cap(n, cap)?;
    if n == 0 {
        return Ok(ExactResult {
            optimal_envy: BigUint::default(),
            witness: Allocation::identity(0),
            states_explored: 0,
        });
    }
    if fits_u64(instance.graph().edge_count(), &instance.houses().spread()) {
        subset_dp::<u64>(instance)
    } else {
        subset_dp::<BigUint>(instance)
    }
}

fn subset_dp<W: Weight>(instance: &Instance) -> Result<ExactResult> {
    let graph = instance.graph();
    let n = graph.n();
    let adj = graph.adjacency_masks().expect("cap keeps n within 64");
    let gaps: Vec<W> = instance.houses().gaps().iter().map(W::from_big).collect();
    let full = (1usize << n) - 1;

    let mut cut = vec![0u16; full + 1];
    for s in 1..=full {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let inner = (adj[v] & rest as u64).count_ones() as u16;
        cut[s] = cut[rest] + graph.degree(v) as u16 - 2 * inner;
    }
    let cost = |s: usize| -> W {
        let k = s.count_ones() as usize;
        if k == 0 || k == n {
            W::zero()
        } else {
            gaps[k - 1].scale(cut[s] as usize)
        }
    };

    // g[S]: cheapest way to extend a chain ending in S up to V.
    let mut g: Vec<W> = vec![W::zero(); full + 1];
    let mut states = 0u64;
    for s in (0..full).rev() {
        let mut free = full & !s;
        let mut best: Option<&W> = None;
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            states += 1;
            let cand = &g[s | 1 << v];
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
        let next = best.expect("s is a proper subset").clone();
        g[s] = cost(s).add(&next);
    }

    let mut order = Vec::with_capacity(n);
    let mut s = 0usize;
    while s != full {
        let mut free = full & !s;
        let mut pick = (usize::MAX, None::<&W>);
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            let cand = &g[s | 1 << v];
            if pick.1.is_none_or(|b| cand < b) {
                pick = (v, Some(cand));
            }
        }
        order.push(pick.0);
        s |= 1 << pick.0;
    }
    Ok(ExactResult {
        optimal_envy: g[0].to_big(),
        witness: Allocation::from_order(&order)?,
        states_explored: states,
    })
}

/// Rearranges `perm` into the next lexicographic permutation.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

struct Sweep {
    min: BigUint,
    max: BigUint,
    argmin: Vec<usize>,
    count: u64,
}

fn sweep_all<W: Weight>(instance: &Instance) -> Sweep {
    let n = instance.n();
    let h: Vec<W> = instance.houses().values().iter().map(W::from_big).collect();
    let edges = instance.graph().edges();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(W, Vec<usize>)> = None;
    let mut worst: Option<W> = None;
    let mut count = 0u64;
    loop {
        count += 1;
        let e = edges
            .iter()
            .fold(W::zero(), |acc, &(u, v)| acc.add(&h[perm[u]].absdiff(&h[perm[v]])));
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e.clone(), perm.clone()));
        }
        if worst.as_ref().is_none_or(|w| e > *w) {
            worst = Some(e);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (min, argmin) = best.expect("at least one permutation");
    Sweep { min: min.to_big(), max: worst.expect("at least one permutation").to_big(), argmin, count }
}

fn sweep(instance: &Instance, cap: usize) -> Result<Sweep> {
    check_cap(instance.n(), cap)?;
    Ok(if fits_u64(instance.graph().edge_count(), &instance.houses().spread()) {
        sweep_all::<u64>(instance)
    } else {
        sweep_all::<BigUint>(instance)
    })
}

/// Minimum envy over all `n!` assignments, visited in lexicographic order so
/// the witness is the lexicographically smallest optimal assignment.
pub fn solve_exact_bruteforce(instance: &Instance) -> Result<ExactResult> {
    let s = sweep(instance, Caps::from_env().brute)?;
    Ok(ExactResult { optimal_envy: s.min, witness: Allocation::new(s.argmin)?, states_explored: s.count })
}

/// `(min, max)` envy over all assignments.
pub fn envy_range_bruteforce(instance: &Instance) -> Result<(BigUint, BigUint)> {
    let s = sweep(instance, Caps::from_env().brute)?;
    Ok((s.min, s.max))
}

/// Every distinct value pattern (values read per vertex) whose envy is at
/// most `bound`, found by depth-first search with pruning on partial envy.
/// Each pattern is returned as an allocation that gives equal-valued houses
/// to vertices in increasing vertex order. Stops after `limit` patterns.
pub fn enumerate_value_patterns(instance: &Instance, bound: &BigUint, limit: usize) -> Result<Vec<Allocation>> {
    let n = instance.n();
    check_cap(n, Caps::from_env().min_cut)?;
    let values = instance.houses().values();
    let mut levels: Vec<BigUint> = values.to_vec();
    levels.dedup();
    let mut remaining: Vec<usize> = levels.iter().map(|l| values.iter().filter(|v| *v == l).count()).collect();
    let first_house: Vec<usize> = levels.iter().map(|l| values.iter().position(|v| v == l).unwrap()).collect();

    struct Search<'a> {
        graph: &'a Graph,
        levels: &'a [BigUint],
        bound: &'a BigUint,
        limit: usize,
        level_of: Vec<usize>,
        out: Vec<Vec<usize>>,
    }
    impl Search<'_> {
        fn go(&mut self, v: usize, remaining: &mut [usize], partial: BigUint) {
            if self.out.len() >= self.limit {
                return;
            }
            if v == self.level_of.len() {
                self.out.push(self.level_of.clone());
                return;
            }
            for l in 0..self.levels.len() {
                if remaining[l] == 0 {
                    continue;
                }
                let mut p = partial.clone();
                for &w in self.graph.neighbors(v) {
                    if w < v {
                        p += self.levels[l].absdiff(&self.levels[self.level_of[w]]);
                    }
                }
                if &p > self.bound {
                    continue;
                }
                remaining[l] -= 1;
                self.level_of[v] = l;
                self.go(v + 1, remaining, p);
                remaining[l] += 1;
            }
        }
    }

    let mut search = Search {
        graph: instance.graph(),
        levels: &levels,
        bound,
        limit,
        level_of: vec![0; n],
        out: Vec::new(),
    };
    search.go(0, &mut remaining, BigUint::default());
    search
        .out
        .into_iter()
        .map(|pattern| {
            let mut next = first_house.clone();
            let assignment = pattern
                .iter()
                .map(|&l| {
                    next[l] += 1;
                    next[l] - 1
                })
                .collect();
            Allocation::new(assignment)
        })
        .collect()
}

const INF: u32 = u32::MAX / 4;

/// δ_T(k) for every `0 <= k <= n` by a rooted knapsack over subtree sizes.
///
/// State per vertex: which side of the cut the vertex is on and how many
/// subtree vertices are on the `S` side. Merging children costs
/// `O(size_a * size_b)`, for `O(n^2)` overall.
pub fn tree_min_cut_profile(tree: &Graph) -> Result<Vec<usize>> {
    tree.require_tree()?;
    let n = tree.n();
    let (parent, order) = rooted_order(tree, 0);
    // dp[v][side][c], side 1 means v ∈ S.
    let mut dp: Vec<Option<[Vec<u32>; 2]>> = vec![None; n];
    for &v in order.iter().rev() {
        let mut cur = [vec![0, INF], vec![INF, 0]];
        for &c in tree.neighbors(v) {
            if c == parent[v] || c == v {
                continue;
            }
            let child = dp[c].take().expect("children finish first");
            let (la, lb) = (cur[0].len(), child[0].len());
            let mut next = [vec![INF; la + lb - 1], vec![INF; la + lb - 1]];
            for side in 0..2 {
                for (i, &a) in cur[side].iter().enumerate() {
                    if a >= INF {
                        continue;
                    }
                    for cside in 0..2 {
                        let extra = u32::from(side != cside);
                        for (j, &b) in child[cside].iter().enumerate() {
                            let t = a + b + extra;
                            if t < next[side][i + j] {
                                next[side][i + j] = t;
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        dp[v] = Some(cur);
    }
    let root = dp[0].take().expect("root computed");
    Ok((0..=n).map(|k| root[0][k].min(root[1][k]) as usize).collect())
}

/// δ_T(k) for a single `k` in `1..n`.
pub fn tree_min_cut_k(tree: &Graph, k: usize) -> Result<usize> {
    tree.require_tree()?;
    if k == 0 || k >= tree.n() {
        return Err(Error::OutOfRange { value: k, reason: "k must satisfy 1 <= k <= n-1" });
    }
    Ok(tree_min_cut_profile(tree)?[k])
}

/// Minimum-width layout by dynamic programming over prefix sets:
/// `f(S) = max(δ(S), min_{v ∈ S} f(S \ v))`.
pub fn cutwidth_exact_small(graph: &Graph) -> Result<Layout> {
    let n = graph.n();
    check_cap(n, Caps::from_env().cutwidth)?;
    if n == 0 {
        return Layout::new(graph, Vec::new());
    }
    let adj = graph.adjacency_masks().expect("cap keeps n within 64");
    let full = (1usize << n) - 1;
    let mut cut = vec![0u16; full + 1];
    let mut f = vec![0u16; full + 1];
    for s in 1..=full {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let inner = (adj[v] & rest as u64).count_ones() as u16;
        cut[s] = cut[rest] + graph.degree(v) as u16 - 2 * inner;
        let mut members = s;
        let mut best = u16::MAX;
        while members != 0 {
            let w = members.trailing_zeros() as usize;
            members &= members - 1;
            best = best.min(f[s & !(1 << w)]);
        }
        f[s] = best.max(cut[s]);
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let mut members = s;
        let mut pick = (usize::MAX, u16::MAX);
        while members != 0 {
            let w = members.trailing_zeros() as usize;
            members &= members - 1;
            if f[s & !(1 << w)] < pick.1 {
                pick = (w, f[s & !(1 << w)]);
            }
        }
        order.push(pick.0);
        s &= !(1 << pick.0);
    }
    order.reverse();
    let layout = Layout::new(graph, order)?;
    debug_assert_eq!(layout.width(), f[full] as usize);
    Ok(layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{envy, HouseValues};

    fn inst(graph: Graph, values: &[u64]) -> Instance {
        Instance::new(graph, HouseValues::from_u64s(values).unwrap()).unwrap()
    }

    #[test]
    fn dp_small_cases() {
        let p3 = inst(Graph::path(3), &[0, 1, 5]);
        let r = solve_exact_dp(&p3).unwrap();
        assert_eq!(r.optimal_envy, 5u32.into());
        assert_eq!(envy(&p3, &r.witness).unwrap(), r.optimal_envy);

        let star = inst(Graph::star(3), &[0, 1, 2, 10]);
        assert_eq!(solve_exact_dp(&star).unwrap().optimal_envy, 11u32.into());

        let c4 = inst(Graph::cycle(4).unwrap(), &[0, 1, 2, 3]);
        assert_eq!(solve_exact_dp(&c4).unwrap().optimal_envy, 6u32.into());
        assert_eq!(solve_exact_bruteforce(&c4).unwrap().optimal_envy, 6u32.into());
    }

    #[test]
    fn single_vertex_and_empty() {
        let one = inst(Graph::path(1), &[42]);
        assert_eq!(solve_exact_dp(&one).unwrap().optimal_envy, 0u32.into());
        assert_eq!(solve_exact_bruteforce(&one).unwrap().optimal_envy, 0u32.into());
        let none = inst(Graph::path(0), &[]);
        assert_eq!(solve_exact_dp(&none).unwrap().optimal_envy, 0u32.into());
    }

    #[test]
    fn caps_are_enforced() {
        let big = inst(Graph::path(11), &[0; 11]);
        assert!(matches!(solve_exact_bruteforce(&big), Err(Error::TooLarge { cap: 10, .. })));
        let bigger = inst(Graph::path(23), &[0; 23]);
        assert!(matches!(solve_exact_dp_capped(&bigger, 22), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn big_values_take_the_bignum_path() {
        let huge = BigUint::from(1u8) << 200u32;
        let values = vec![BigUint::from(0u8), BigUint::from(1u8), huge.clone()];
        let i = Instance::new(Graph::path(3), HouseValues::new(values).unwrap()).unwrap();
        assert_eq!(solve_exact_dp(&i).unwrap().optimal_envy, huge.clone());
        assert_eq!(solve_exact_bruteforce(&i).unwrap().optimal_envy, huge);
    }

    #[test]
    fn permutations_in_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn tree_profile_b3() {
        let prof = tree_min_cut_profile(&Graph::complete_binary_tree(3)).unwrap();
        assert_eq!(prof[1..15], [1, 2, 1, 2, 2, 2, 1, 1, 2, 2, 2, 1, 2, 1]);
        assert_eq!(tree_min_cut_k(&Graph::complete_binary_tree(5), 5).unwrap(), 3);
        assert_eq!(tree_min_cut_k(&Graph::cycle(5).unwrap(), 2), Err(Error::NotATree));
    }

    #[test]
    fn cutwidths() {
        assert_eq!(cutwidth_exact_small(&Graph::path(6)).unwrap().width(), 1);
        assert_eq!(cutwidth_exact_small(&Graph::complete(4)).unwrap().width(), 4);
        assert_eq!(cutwidth_exact_small(&Graph::complete(5)).unwrap().width(), 6);
        assert_eq!(cutwidth_exact_small(&Graph::cycle(6).unwrap()).unwrap().width(), 2);
    }

    #[test]
    fn value_patterns_of_a_path() {
        let p = inst(Graph::path(3), &[0, 0, 1]);
        let pats = enumerate_value_patterns(&p, &BigUint::from(1u8), 100).unwrap();
        // Any placement of the single 1 costs at most 2; only endpoints cost 1.
        assert_eq!(pats.len(), 2);
        for a in &pats {
            assert_eq!(envy(&p, a).unwrap(), 1u32.into());
        }
    }
}
