//! Hardness-reduction gadgets built from 3-Partition instances, their YES
//! allocations, and checkers for the supporting cut lemmas.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Allocation, HouseValues, Instance};

/// Items `a_1..a_3m` that should split into `m` triples summing to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePartitionInstance {
    pub items: Vec<u64>,
    pub m: usize,
    pub target: u64,
}

impl ThreePartitionInstance {
    pub fn new(items: Vec<u64>, m: usize, target: u64) -> Result<Self> {
        let tp = ThreePartitionInstance { items, m, target };
        tp.validate()?;
        Ok(tp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::BadParameters("m must be positive".into()));
        }
        if self.items.len() != 3 * self.m {
            return Err(Error::LengthMismatch { expected: 3 * self.m, found: self.items.len() });
        }
        if self.items.contains(&0) {
            return Err(Error::BadParameters("items must be positive".into()));
        }
        let sum: u128 = self.items.iter().map(|&a| a as u128).sum();
        if sum != self.m as u128 * self.target as u128 {
            return Err(Error::BadParameters(format!(
                "items sum to {sum}, expected m*T = {}",
                self.m as u128 * self.target as u128
            )));
        }
        Ok(())
    }

    /// Every item lies strictly between `T/4` and `T/2`.
    pub fn is_strict(&self) -> bool {
        self.items.iter().all(|&a| 4 * a > self.target && 2 * a < self.target)
    }
}

/// `m` disjoint triples of item indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub triplets: Vec<[usize; 3]>,
}

impl PartitionWitness {
    pub fn validate(&self, tp: &ThreePartitionInstance) -> Result<()> {
        if self.triplets.len() != tp.m {
            return Err(Error::InvalidWitness(format!("expected {} triples, got {}", tp.m, self.triplets.len())));
        }
        let mut used = vec![false; tp.items.len()];
        for (j, t) in self.triplets.iter().enumerate() {
            let mut sum = 0u64;
            for &i in t {
                if i >= used.len() || used[i] {
                    return Err(Error::InvalidWitness(format!("item {i} is out of range or reused")));
                }
                used[i] = true;
                sum += tp.items[i];
            }
            if sum != tp.target {
                return Err(Error::InvalidWitness(format!("triple {j} sums to {sum}, not {}", tp.target)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetFamily {
    Depth2,
    Clique,
    Grid,
    Expander,
    Flower,
    BoundedTree,
}

impl GadgetFamily {
    pub fn name(self) -> &'static str {
        match self {
            GadgetFamily::Depth2 => "depth2",
            GadgetFamily::Clique => "clique",
            GadgetFamily::Grid => "grid",
            GadgetFamily::Expander => "expander",
            GadgetFamily::Flower => "flower",
            GadgetFamily::BoundedTree => "bounded-tree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowerKind {
    Small,
    Medium,
    Large,
    Plain,
}

/// Per-vertex structural tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum Role {
    Root,
    Hub { item: usize },
    Filler { item: usize },
    Grid { item: usize, row: usize, col: usize },
    Expander { item: usize },
    TreeNode,
    Pistil { kind: FlowerKind, flower: usize },
    Petal { kind: FlowerKind, flower: usize },
}

#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub instance: Instance,
    pub roles: Vec<Role>,
    pub c: usize,
    pub family: GadgetFamily,
    pub tp: Option<ThreePartitionInstance>,
    /// Vertex set of the component built for each item, in item order.
    pub components: Vec<Vec<usize>>,
    /// Measured `min δ(B)/|B|` per expander component.
    pub measured_expansion: Vec<Ratio<u64>>,
}

fn value_multiset(groups: &[(u64, usize)]) -> HouseValues {
    let mut values = Vec::new();
    for &(v, count) in groups {
        values.extend(std::iter::repeat_n(BigUint::from(v), count));
    }
    HouseValues::from_multiset(values)
}

/// `j` repeated `per_value` times for `j = 1..=m`, plus `zeros` zeros.
fn hub_values(m: usize, per_value: usize, zeros: usize) -> HouseValues {
    let mut groups = vec![(0u64, zeros)];
    groups.extend((1..=m as u64).map(|j| (j, per_value)));
    value_multiset(&groups)
}

fn check_c(c: usize) -> Result<()> {
    if c == 0 {
        Err(Error::BadParameters("C must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Root `r` with one hub per item; hub `i` has `C·a_i − 1` leaf children.
/// Values: `C·T` copies of each `j ∈ [m]` and one 0.
pub fn gen_depth2_tree(tp: &ThreePartitionInstance, c: usize) -> Result<GadgetInstance> {
    tp.validate()?;
    check_c(c)?;
    let mut edges = Vec::new();
    let mut roles = vec![Role::Root];
    let mut components = Vec::new();
    for (item, &a) in tp.items.iter().enumerate() {
        let hub = roles.len();
        roles.push(Role::Hub { item });
        edges.push((0, hub));
        let mut comp = vec![hub];
        for _ in 1..c * a as usize {
            let v = roles.len();
            roles.push(Role::Filler { item });
            edges.push((hub, v));
            comp.push(v);
        }
        components.push(comp);
    }
    let n = roles.len();
    let graph = Graph::new(n, edges)?;
    let houses = hub_values(tp.m, c * tp.target as usize, 1);
    finish(graph, houses, roles, c, GadgetFamily::Depth2, tp, components)
}

/// Root `r` joined to the first vertex of a clique `K_{C·a_i}` per item.
/// Same values as [`gen_depth2_tree`].
pub fn gen_clique(tp: &ThreePartitionInstance, c: usize) -> Result<GadgetInstance> {
    tp.validate()?;
    check_c(c)?;
    let mut edges = Vec::new();
    let mut roles = vec![Role::Root];
    let mut components = Vec::new();
    for (item, &a) in tp.items.iter().enumerate() {
        let start = roles.len();
        let size = c * a as usize;
        roles.push(Role::Hub { item });
        roles.extend(std::iter::repeat_n(Role::Filler { item }, size - 1));
        edges.push((0, start));
        for u in start..start + size {
            for v in u + 1..start + size {
                edges.push((u, v));
            }
        }
        components.push((start..start + size).collect());
    }
    let graph = Graph::new(roles.len(), edges)?;
    let houses = hub_values(tp.m, c * tp.target as usize, 1);
    finish(graph, houses, roles, c, GadgetFamily::Clique, tp, components)
}

/// Depth of the smallest complete binary tree with at least `leaves` leaves.
fn hub_tree_depth(leaves: usize) -> u32 {
    leaves.max(1).next_power_of_two().trailing_zeros()
}

/// Hub tree in heap order on vertices `0..|B_r|`, then one component per
/// item whose `attach` vertex is joined to leaf `i` of the hub tree.
fn attach_to_hub_tree(
    m: usize,
    parts: Vec<(Vec<(usize, usize)>, Vec<Role>, usize)>,
) -> (Vec<(usize, usize)>, Vec<Role>, Vec<Vec<usize>>, usize) {
    let depth = hub_tree_depth(3 * m);
    let hub = Graph::complete_binary_tree(depth);
    let hub_n = hub.n();
    let first_leaf = (1usize << depth) - 1;
    let mut edges = hub.edges().to_vec();
    let mut roles = vec![Role::TreeNode; hub_n];
    let mut components = Vec::new();
    for (i, (local_edges, local_roles, attach)) in parts.into_iter().enumerate() {
        let offset = roles.len();
        edges.extend(local_edges.into_iter().map(|(u, v)| (u + offset, v + offset)));
        edges.push((first_leaf + i, offset + attach));
        components.push((offset..offset + local_roles.len()).collect());
        roles.extend(local_roles);
    }
    (edges, roles, components, hub_n)
}

/// One `C × C·a_i` grid per item (row-major), each joined at its corner
/// `(0, 0)` to a distinct leaf of the hub tree. Values: `C²·T` copies of each
/// `j ∈ [m]` and `|B_r|` zeros.
pub fn gen_grid(tp: &ThreePartitionInstance, c: usize) -> Result<GadgetInstance> {
    tp.validate()?;
    check_c(c)?;
    let parts = tp
        .items
        .iter()
        .enumerate()
        .map(|(item, &a)| {
            let cols = c * a as usize;
            let g = Graph::grid(c, cols);
            let roles = (0..c * cols).map(|v| Role::Grid { item, row: v / cols, col: v % cols }).collect();
            (g.edges().to_vec(), roles, 0)
        })
        .collect();
    let (edges, roles, components, hub_n) = attach_to_hub_tree(tp.m, parts);
    let graph = Graph::new(roles.len(), edges)?;
    let houses = hub_values(tp.m, c * c * tp.target as usize, hub_n);
    finish(graph, houses, roles, c, GadgetFamily::Grid, tp, components)
}

/// Random simple `d`-regular graph by the configuration model, re-pairing
/// until no loop or repeated edge occurs.
pub fn random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) || d >= n {
        return Err(Error::ParityViolation(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: loop {
        points.shuffle(rng);
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return Graph::new(n, edges);
    }
}

const EXPANDER_RETRIES: usize = 50;

/// One seeded random 3-regular graph on `C·a_i` vertices per item, joined at
/// vertex 0 to a distinct leaf of the hub tree. Each component must be
/// connected with `δ(B) >= |B|/100` for every measured `|B| <= half`,
/// otherwise it is resampled. Values: `C·T` copies of each `j ∈ [m]` and
/// `|B_r|` zeros.
pub fn gen_expander(tp: &ThreePartitionInstance, c: usize, seed: u64) -> Result<GadgetInstance> {
    tp.validate()?;
    check_c(c)?;
    for &a in &tp.items {
        let s = c * a as usize;
        if !s.is_multiple_of(2) || s < 6 {
            return Err(Error::ParityViolation(format!("C*a_i = {s} must be even and at least 6")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    let mut measured = Vec::new();
    for (item, &a) in tp.items.iter().enumerate() {
        let s = c * a as usize;
        let mut accepted = None;
        for _ in 0..EXPANDER_RETRIES {
            let g = random_regular(s, 3, &mut rng)?;
            if !g.is_connected() {
                continue;
            }
            let ratio = min_expansion(&g, 20, 2000, rng.gen())?;
            if ratio >= Ratio::new(1, 100) {
                accepted = Some((g, ratio));
                break;
            }
        }
        let (g, ratio) = accepted.ok_or(Error::ExpansionNotCertified { attempts: EXPANDER_RETRIES })?;
        measured.push(ratio);
        parts.push((g.edges().to_vec(), vec![Role::Expander { item }; s], 0));
    }
    let (edges, roles, components, hub_n) = attach_to_hub_tree(tp.m, parts);
    let graph = Graph::new(roles.len(), edges)?;
    let houses = hub_values(tp.m, c * tp.target as usize, hub_n);
    let mut g = finish(graph, houses, roles, c, GadgetFamily::Expander, tp, components)?;
    g.measured_expansion = measured;
    Ok(g)
}

fn finish(
    graph: Graph,
    houses: HouseValues,
    roles: Vec<Role>,
    c: usize,
    family: GadgetFamily,
    tp: &ThreePartitionInstance,
    components: Vec<Vec<usize>>,
) -> Result<GadgetInstance> {
    Ok(GadgetInstance {
        instance: Instance::new(graph, houses)?,
        roles,
        c,
        family,
        tp: Some(tp.clone()),
        components,
        measured_expansion: Vec::new(),
    })
}

/// `min δ(S)/|S|` over nonempty `|S| <= n/2`: exhaustive when
/// `n <= exhaustive_cap`, otherwise over BFS balls, their one-vertex
/// perturbations and uniform random sets.
pub fn min_expansion(graph: &Graph, exhaustive_cap: usize, samples: usize, seed: u64) -> Result<Ratio<u64>> {
    let n = graph.n();
    let half = n / 2;
    if half == 0 {
        return Err(Error::BadParameters("need at least two vertices".into()));
    }
    let mut best: Option<Ratio<u64>> = None;
    let mut consider = |cut: usize, size: usize| {
        let r = Ratio::new(cut as u64, size as u64);
        if best.is_none_or(|b| r < b) {
            best = Some(r);
        }
    };
    if n <= exhaustive_cap.min(30) {
        let adj = graph.adjacency_masks().expect("n <= 30");
        let deg: Vec<u32> = (0..n).map(|v| graph.degree(v) as u32).collect();
        let mut cut = vec![0u32; 1 << n];
        for s in 1usize..1 << n {
            let v = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            cut[s] = cut[rest] + deg[v] - 2 * (adj[v] & rest as u64).count_ones();
            let k = s.count_ones() as usize;
            if k <= half {
                consider(cut[s] as usize, k);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inside = vec![false; n];
        for t in 0..samples {
            inside.iter_mut().for_each(|x| *x = false);
            let size = rng.gen_range(1..=half);
            let members: Vec<usize> = if t % 2 == 0 {
                bfs_ball(graph, rng.gen_range(0..n), size)
            } else {
                rand::seq::index::sample(&mut rng, n, size).into_vec()
            };
            for &v in &members {
                inside[v] = true;
            }
            consider(graph.cut_size_indicator(&inside), members.len());
        }
    }
    Ok(best.expect("at least one subset examined"))
}

fn bfs_ball(graph: &Graph, start: usize, size: usize) -> Vec<usize> {
    let mut seen = vec![false; graph.n()];
    let mut out = vec![start];
    seen[start] = true;
    let mut i = 0;
    while out.len() < size && i < out.len() {
        let v = out[i];
        i += 1;
        for &w in graph.neighbors(v) {
            if !seen[w] && out.len() < size {
                seen[w] = true;
                out.push(w);
            }
        }
    }
    out
}

/// `min δ(S)/|S|` over `|S| <= n/2` for a regular graph.
pub fn check_cheeger_constant(graph: &Graph, exhaustive_cap: usize) -> Result<Ratio<u64>> {
    let d = graph.degree(0);
    if let Some(v) = (0..graph.n()).find(|&v| graph.degree(v) != d) {
        return Err(Error::NotRegular { vertex: v, degree: graph.degree(v), expected: d });
    }
    min_expansion(graph, exhaustive_cap, 20_000, 0)
}

/// Outcome of a cut-lemma audit.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub subsets_checked: u64,
    pub violations: u64,
    pub exhaustive: bool,
    /// Smallest observed `δ(A) − bound(A)`.
    pub min_slack: f64,
}

/// Audits `δ(A) >= min(√|A|, r/2)` on `Grid(r, c)` for nonempty `A` with
/// `|A| <= rc/2`; exhaustive when `rc <= exhaustive_cap`, otherwise `samples`
/// seeded subsets.
pub fn check_grid_cut_lemma(r: usize, c: usize, exhaustive_cap: usize, samples: usize, seed: u64) -> Result<LemmaReport> {
    if r == 0 || r > c {
        return Err(Error::BadParameters(format!("need 1 <= r <= c, got r={r}, c={c}")));
    }
    let g = Graph::grid(r, c);
    let n = r * c;
    let half = n / 2;
    let mut report = LemmaReport { subsets_checked: 0, violations: 0, exhaustive: false, min_slack: f64::INFINITY };
    let mut record = |cut: usize, size: usize| {
        report.subsets_checked += 1;
        // violation iff cut < sqrt(size) and cut < r/2
        if cut * cut < size && 2 * cut < r {
            report.violations += 1;
        }
        let bound = (size as f64).sqrt().min(r as f64 / 2.0);
        report.min_slack = report.min_slack.min(cut as f64 - bound);
    };
    if n <= exhaustive_cap.min(30) {
        let adj = g.adjacency_masks().expect("n <= 30");
        let mut cut = vec![0u32; 1 << n];
        for s in 1usize..1 << n {
            let v = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            cut[s] = cut[rest] + g.degree(v) as u32 - 2 * (adj[v] & rest as u64).count_ones();
            let k = s.count_ones() as usize;
            if k <= half {
                record(cut[s] as usize, k);
            }
        }
        report.exhaustive = true;
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inside = vec![false; n];
        for t in 0..samples {
            inside.iter_mut().for_each(|x| *x = false);
            let size = rng.gen_range(1..=half);
            let members: Vec<usize> = match t % 3 {
                0 => bfs_ball(&g, rng.gen_range(0..n), size),
                1 => {
                    // axis-aligned block clipped to `size` cells in row-major order
                    let (r0, c0) = (rng.gen_range(0..r), rng.gen_range(0..c));
                    let w = rng.gen_range(1..=c - c0);
                    (r0..r)
                        .flat_map(|row| (c0..c0 + w).map(move |col| row * c + col))
                        .take(size)
                        .collect()
                }
                _ => rand::seq::index::sample(&mut rng, n, size).into_vec(),
            };
            for &v in &members {
                inside[v] = true;
            }
            record(g.cut_size_indicator(&inside), members.len());
        }
    }
    Ok(report)
}

/// Flower `F(n, k)`: a pistil joined to the pistils of near-equal odd-sized
/// petal flowers. Vertices are numbered in pre-order with the pistil at 0.
#[derive(Debug, Clone)]
pub struct Flower {
    pub tree: Graph,
    pub pistil: usize,
    pub petal_roots: Vec<usize>,
    pub petal_sizes: Vec<usize>,
    pub n: usize,
    pub k: usize,
}

/// Petal sizes of `F(n, k)` at the top level.
pub fn flower_petal_sizes(n: usize, k: usize) -> Vec<usize> {
    if n <= 1 {
        return Vec::new();
    }
    if n - 1 < k {
        return vec![1; n - 1];
    }
    let d = if n % 2 != k % 2 { k } else { k - 1 };
    let q = (n - 1) / d;
    let base = if q % 2 == 1 { q } else { q - 1 };
    let rem = n - 1 - d * base;
    (0..d).map(|i| if i < rem / 2 { base + 2 } else { base }).collect()
}

pub fn build_flower(n: usize, k: usize) -> Result<Flower> {
    if n == 0 || k < 3 {
        return Err(Error::BadParameters(format!("flower needs n >= 1 and k >= 3, got n={n}, k={k}")));
    }
    let mut edges = Vec::with_capacity(n - 1);
    // (pistil id, size) of flowers still to expand; a flower owns the id
    // block [pistil, pistil + size).
    let mut stack = vec![(0usize, n)];
    let mut top_roots = Vec::new();
    while let Some((pistil, size)) = stack.pop() {
        let mut next = pistil + 1;
        let mut children = Vec::new();
        for s in flower_petal_sizes(size, k) {
            edges.push((pistil, next));
            children.push((next, s));
            next += s;
        }
        if pistil == 0 {
            top_roots = children.iter().map(|&(r, _)| r).collect();
        }
        stack.extend(children);
    }
    Ok(Flower {
        tree: Graph::new(n, edges)?,
        pistil: 0,
        petal_roots: top_roots,
        petal_sizes: flower_petal_sizes(n, k),
        n,
        k,
    })
}

/// Checks the recursive flower conditions at every vertex: children subtree
/// sizes are odd, differ pairwise by at most 2, sum to the subtree size minus
/// one, and number `k` or `k − 1` by parity once the subtree has at least
/// `k + 1` vertices.
pub fn flower_conditions_hold(flower: &Flower) -> bool {
    let tree = &flower.tree;
    let k = flower.k;
    let (parent, order) = crate::cuts::rooted_order(tree, flower.pistil);
    let n = tree.n();
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if v != flower.pistil {
            size[parent[v]] += size[v];
        }
    }
    if tree.max_degree() > k + 1 {
        return false;
    }
    (0..n).all(|v| {
        let kids: Vec<usize> =
            tree.neighbors(v).iter().copied().filter(|&w| parent[w] == v && w != v).map(|w| size[w]).collect();
        let total = size[v] - 1;
        let sum_ok = kids.iter().sum::<usize>() == total;
        let odd_ok = kids.iter().all(|s| s % 2 == 1);
        let spread_ok = match (kids.iter().min(), kids.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo <= 2,
            _ => true,
        };
        let d_ok = if total >= k {
            kids.len() == if size[v] % 2 != k % 2 { k } else { k - 1 }
        } else {
            true
        };
        sum_ok && odd_ok && spread_ok && d_ok
    })
}

/// Audits `δ(A) >= 2` for even-sized nonempty `A` avoiding the pistil.
/// Exhaustive when `n − 1 <= exhaustive_cap`; otherwise `samples` seeded
/// subsets drawn as unions of whole subtrees, trimmed subtrees, and uniform
/// sets.
pub fn check_flower_even_cut(flower: &Flower, exhaustive_cap: usize, samples: usize, seed: u64) -> LemmaReport {
    let g = &flower.tree;
    let n = g.n();
    let mut report = LemmaReport { subsets_checked: 0, violations: 0, exhaustive: false, min_slack: f64::INFINITY };
    let mut record = |cut: usize| {
        report.subsets_checked += 1;
        if cut < 2 {
            report.violations += 1;
        }
        report.min_slack = report.min_slack.min(cut as f64 - 2.0);
    };
    let others: Vec<usize> = (0..n).filter(|&v| v != flower.pistil).collect();
    if others.len() <= exhaustive_cap.min(26) {
        let mut inside = vec![false; n];
        for mask in 1u64..1 << others.len() {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            for (i, &v) in others.iter().enumerate() {
                inside[v] = mask >> i & 1 == 1;
            }
            record(g.cut_size_indicator(&inside));
        }
        report.exhaustive = true;
        return report;
    }
    let (parent, order) = crate::cuts::rooted_order(g, flower.pistil);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subtree = |root: usize| -> Vec<usize> {
        let mut out = vec![root];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            i += 1;
            out.extend(g.neighbors(v).iter().copied().filter(|&w| parent[w] == v && w != v));
        }
        out
    };
    let mut inside = vec![false; n];
    let mut drawn = 0;
    while drawn < samples {
        inside.iter_mut().for_each(|x| *x = false);
        match drawn % 3 {
            0 => {
                for _ in 0..rng.gen_range(1..=3) {
                    for v in subtree(*others.choose(&mut rng).expect("n > 1")) {
                        inside[v] = true;
                    }
                }
            }
            1 => {
                let mut members = subtree(*others.choose(&mut rng).expect("n > 1"));
                let drop = rng.gen_range(0..members.len());
                members.truncate(members.len() - drop);
                for v in members {
                    inside[v] = true;
                }
            }
            _ => {
                let size = rng.gen_range(1..others.len());
                for v in others.choose_multiple(&mut rng, size) {
                    inside[*v] = true;
                }
            }
        }
        let count = inside.iter().filter(|&&x| x).count();
        if count == 0 || count % 2 == 1 {
            // make it even by toggling a non-pistil vertex in a leaf-first order
            if let Some(&v) = order.iter().rev().find(|&&v| v != flower.pistil && !inside[v]) {
                inside[v] = true;
            } else {
                continue;
            }
        }
        record(g.cut_size_indicator(&inside));
        drawn += 1;
    }
    report
}

/// A single flower as an instance with values `0..n`.
pub fn gen_flower_instance(n: usize, k: usize) -> Result<GadgetInstance> {
    let f = build_flower(n, k)?;
    let roles = plain_flower_roles(&f, FlowerKind::Plain, 0);
    let values: Vec<u64> = (0..n as u64).collect();
    Ok(GadgetInstance {
        instance: Instance::new(f.tree, HouseValues::from_u64s(&values)?)?,
        roles,
        c: 1,
        family: GadgetFamily::Flower,
        tp: None,
        components: Vec::new(),
        measured_expansion: Vec::new(),
    })
}

fn plain_flower_roles(f: &Flower, kind: FlowerKind, index: usize) -> Vec<Role> {
    (0..f.n)
        .map(|v| if v == f.pistil { Role::Pistil { kind, flower: index } } else { Role::Petal { kind, flower: index } })
        .collect()
}

/// Options for [`gen_bounded_tree_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedTreeOptions {
    pub small_k: usize,
    pub large_k: usize,
    /// Require every item to be at least 1000, the scale the hardness
    /// argument needs. Desk-scale experiments turn this off.
    pub enforce_scale: bool,
}

impl Default for BoundedTreeOptions {
    fn default() -> Self {
        BoundedTreeOptions { small_k: 99, large_k: 999, enforce_scale: true }
    }
}

/// `s(j) = (64·m·T)^(2j)`, i.e. `(|E| + 1)^(2j)` on the bounded-tree gadget.
pub fn cluster_scale(tp: &ThreePartitionInstance, j: u32) -> BigUint {
    BigUint::from(64 * tp.m as u64 * tp.target).pow(2 * j)
}

/// Cluster values: clusters `1..=4m` hold `T` houses each, cluster `i` valued
/// `Σ_{j=4m+2−i}^{4m} s(j)`; the last cluster holds `60mT` houses valued
/// `Σ_{j=1}^{4m} s(j)`.
pub fn bounded_tree_clusters(tp: &ThreePartitionInstance) -> Vec<(BigUint, usize)> {
    let four_m = 4 * tp.m as u32;
    let s: Vec<BigUint> = (0..=four_m).map(|j| cluster_scale(tp, j)).collect();
    let mut out = Vec::new();
    let mut acc = BigUint::default();
    for i in 1..=four_m {
        if i >= 2 {
            acc += &s[(four_m + 2 - i) as usize];
        }
        out.push((acc.clone(), tp.target as usize));
    }
    acc += &s[1];
    out.push((acc, 60 * tp.m * tp.target as usize));
    out
}

/// Path of `3m` medium flowers `F(T, small_k)` joined pistil to pistil; each
/// medium flower `i` carries a small flower `F(a_i, small_k)`, which carries
/// two large flowers `F(10T, large_k)`.
pub fn gen_bounded_tree_instance(tp: &ThreePartitionInstance, opts: &BoundedTreeOptions) -> Result<GadgetInstance> {
    tp.validate()?;
    if !tp.target.is_multiple_of(2) || tp.items.iter().any(|a| a % 2 != 0) {
        return Err(Error::ParityViolation("every a_i and T must be even".into()));
    }
    if opts.enforce_scale && tp.items.iter().any(|&a| a < 1000) {
        return Err(Error::BadParameters("items below 1000; disable enforce_scale for desk runs".into()));
    }
    let t = tp.target as usize;
    let medium = build_flower(t, opts.small_k)?;
    let large = build_flower(10 * t, opts.large_k)?;
    let mut edges = Vec::new();
    let mut roles = Vec::new();
    let mut components = Vec::new();
    let place = |f: &Flower, kind: FlowerKind, index: usize, roles: &mut Vec<Role>, edges: &mut Vec<(usize, usize)>| {
        let offset = roles.len();
        edges.extend(f.tree.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        roles.extend(plain_flower_roles(f, kind, index));
        offset
    };
    let mut medium_pistils = Vec::new();
    for i in 0..3 * tp.m {
        let p = place(&medium, FlowerKind::Medium, i, &mut roles, &mut edges);
        if let Some(&prev) = medium_pistils.last() {
            edges.push((prev, p));
        }
        medium_pistils.push(p);
    }
    let mut large_index = 0;
    for (i, &a) in tp.items.iter().enumerate() {
        let small = build_flower(a as usize, opts.small_k)?;
        let p = place(&small, FlowerKind::Small, i, &mut roles, &mut edges);
        components.push((p..p + small.n).collect());
        edges.push((medium_pistils[i], p));
        for _ in 0..2 {
            let q = place(&large, FlowerKind::Large, large_index, &mut roles, &mut edges);
            large_index += 1;
            edges.push((p, q));
        }
    }
    let graph = Graph::new(roles.len(), edges)?;
    debug_assert_eq!(graph.n(), 64 * tp.m * t);
    let mut values = Vec::with_capacity(graph.n());
    for (v, count) in bounded_tree_clusters(tp) {
        values.extend(std::iter::repeat_n(v, count));
    }
    let houses = HouseValues::new(values)?;
    Ok(GadgetInstance {
        instance: Instance::new(graph, houses)?,
        roles,
        c: 1,
        family: GadgetFamily::BoundedTree,
        tp: Some(tp.clone()),
        components,
        measured_expansion: Vec::new(),
    })
}

/// `Σ_{j=1}^{3m−1} (j+1)·ℓ_j + 3m·ℓ_{3m} + Σ_{j=1}^{m} (3m+3j)·ℓ_{3m+j}` with
/// `ℓ_j = s(4m + 1 − j)`.
pub fn envy_yes_threshold(tp: &ThreePartitionInstance) -> BigUint {
    let m = tp.m as u32;
    let ell = |j: u32| cluster_scale(tp, 4 * m + 1 - j);
    let mut total = BigUint::default();
    for j in 1..3 * m {
        total += ell(j) * BigUint::from(j + 1);
    }
    total += ell(3 * m) * BigUint::from(3 * m);
    for j in 1..=m {
        total += ell(3 * m + j) * BigUint::from(3 * m + 3 * j);
    }
    total
}

/// The certificate allocation built from a valid partition witness.
///
/// Hub families: every vertex of the components in triple `j` gets value
/// `j + 1`, everything else gets 0. Bounded tree: cluster `i` fills medium
/// flower `i` for `i <= 3m`, cluster `3m + j` fills the small flowers of triple
/// `j`, and the last cluster fills the large flowers.
pub fn yes_allocation(gadget: &GadgetInstance, witness: &PartitionWitness) -> Result<Allocation> {
    let tp = gadget.tp.as_ref().ok_or_else(|| Error::UnsupportedFamily(gadget.family.name().into()))?;
    witness.validate(tp)?;
    let n = gadget.instance.n();
    let mut per_vertex = vec![BigUint::default(); n];
    match gadget.family {
        GadgetFamily::Depth2 | GadgetFamily::Clique | GadgetFamily::Grid | GadgetFamily::Expander => {
            for (j, triple) in witness.triplets.iter().enumerate() {
                for &item in triple {
                    for &v in &gadget.components[item] {
                        per_vertex[v] = BigUint::from(j as u64 + 1);
                    }
                }
            }
        }
        GadgetFamily::BoundedTree => {
            let clusters = bounded_tree_clusters(tp);
            let mut item_triple = vec![0usize; tp.items.len()];
            for (j, triple) in witness.triplets.iter().enumerate() {
                for &item in triple {
                    item_triple[item] = j;
                }
            }
            for (v, role) in gadget.roles.iter().enumerate() {
                let cluster = match *role {
                    Role::Pistil { kind: FlowerKind::Medium, flower } | Role::Petal { kind: FlowerKind::Medium, flower } => flower,
                    Role::Pistil { kind: FlowerKind::Small, flower } | Role::Petal { kind: FlowerKind::Small, flower } => {
                        3 * tp.m + item_triple[flower]
                    }
                    _ => 4 * tp.m,
                };
                per_vertex[v] = clusters[cluster].0.clone();
            }
        }
        GadgetFamily::Flower => return Err(Error::UnsupportedFamily(gadget.family.name().into())),
    }
    Allocation::from_vertex_values(gadget.instance.houses(), &per_vertex)
}

/// `3m²`, the envy bound of the hub-family YES allocations.
pub fn hub_yes_bound(tp: &ThreePartitionInstance) -> u64 {
    3 * (tp.m as u64) * (tp.m as u64)
}
