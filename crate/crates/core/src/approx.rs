//! Approximation algorithms with checkable guarantee certificates.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::cutwidth_exact_small;
use crate::graph::Graph;
use crate::instance::{envy, Allocation, HouseValues, Instance};
use crate::repunit::delta_profile_complete_binary;

/// A vertex ordering σ together with its width, the largest prefix cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    order: Vec<usize>,
    width: usize,
}

impl Layout {
    pub fn new(graph: &Graph, order: Vec<usize>) -> Result<Self> {
        let n = graph.n();
        if order.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: order.len() });
        }
        let alloc = Allocation::from_order(&order)?;
        let width = crate::instance::profile_of(graph, alloc.assignment()).into_iter().max().unwrap_or(0);
        Ok(Layout { order, width })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundName {
    TrickleDown,
    LayoutWidth,
    InOrder,
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundName::TrickleDown => "TrickleDown",
            BoundName::LayoutWidth => "LayoutWidth",
            BoundName::InOrder => "InOrder",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxCertificate {
    pub achieved_envy: BigUint,
    pub guarantee_bound: BigUint,
    pub bound_name: BoundName,
}

impl ApproxCertificate {
    pub fn holds(&self) -> bool {
        self.achieved_envy <= self.guarantee_bound
    }
}

/// `⌈log₂ n⌉`, zero for `n <= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// House index per vertex produced by the TrickleDown recursion: the centre
/// of gravity takes the top index of its range, and the components of the
/// tree minus the centre, ordered by smallest vertex id, take contiguous
/// blocks from the bottom.
pub(crate) fn trickle_assignment(tree: &Graph) -> Result<Vec<usize>> {
    if !tree.is_connected() {
        return Err(Error::Disconnected);
    }
    tree.require_tree()?;
    let n = tree.n();
    let mut assignment = vec![usize::MAX; n];
    let mut removed = vec![false; n];
    let mut mark = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut size = vec![0usize; n];
    let mut stamp = 0usize;
    // (some vertex of the component, lowest house index of its block)
    let mut work: Vec<(usize, usize)> = if n > 0 { vec![(0, 0)] } else { Vec::new() };

    let collect = |start: usize, removed: &[bool], mark: &mut [usize], parent: &mut [usize], stamp: usize| {
        let mut order = vec![start];
        mark[start] = stamp;
        parent[start] = usize::MAX;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in tree.neighbors(v) {
                if !removed[w] && mark[w] != stamp {
                    mark[w] = stamp;
                    parent[w] = v;
                    order.push(w);
                }
            }
        }
        order
    };

    while let Some((start, lo)) = work.pop() {
        stamp += 1;
        let order = collect(start, &removed, &mut mark, &mut parent, stamp);
        let m = order.len();
        let mut heaviest = vec![0usize; m];
        let mut pos = std::collections::HashMap::with_capacity(m);
        for (i, &v) in order.iter().enumerate() {
            pos.insert(v, i);
            size[v] = 1;
        }
        for &v in order.iter().rev() {
            let p = parent[v];
            if p != usize::MAX {
                size[p] += size[v];
                let pi = pos[&p];
                heaviest[pi] = heaviest[pi].max(size[v]);
            }
        }
        let center = order
            .iter()
            .enumerate()
            .filter(|&(i, &v)| 2 * heaviest[i].max(m - size[v]) <= m)
            .map(|(_, &v)| v)
            .min()
            .expect("every tree has a centre of gravity");
        assignment[center] = lo + m - 1;
        removed[center] = true;

        let mut comps: Vec<(usize, usize)> = Vec::new();
        for &w in tree.neighbors(center) {
            if removed[w] {
                continue;
            }
            stamp += 1;
            let comp = collect(w, &removed, &mut mark, &mut parent, stamp);
            let smallest = *comp.iter().min().expect("non-empty");
            comps.push((smallest, comp.len()));
        }
        comps.sort_unstable();
        let mut next = lo;
        for &(smallest, len) in &comps {
            work.push((smallest, next));
            next += len;
        }
    }
    Ok(assignment)
}

/// TrickleDown on a tree, with the certificate `Δ·(h_n − h_1)·⌈log₂ n⌉`.
pub fn trickle_down(tree: &Graph, houses: &HouseValues) -> Result<(Allocation, ApproxCertificate)> {
    if houses.len() != tree.n() {
        return Err(Error::LengthMismatch { expected: tree.n(), found: houses.len() });
    }
    let alloc = Allocation::new(trickle_assignment(tree)?)?;
    let instance = Instance::new(tree.clone(), houses.clone())?;
    let achieved_envy = envy(&instance, &alloc)?;
    let guarantee_bound =
        houses.spread() * BigUint::from(tree.max_degree()) * BigUint::from(ceil_log2(tree.n()));
    Ok((alloc, ApproxCertificate { achieved_envy, guarantee_bound, bound_name: BoundName::TrickleDown }))
}

/// Gives the vertex at layout position `j` the `j`-th lowest house; the
/// certificate is `width(σ)·(h_n − h_1)`.
pub fn layout_allocation(instance: &Instance, layout: &Layout) -> Result<(Allocation, ApproxCertificate)> {
    if layout.order().len() != instance.n() {
        return Err(Error::LengthMismatch { expected: instance.n(), found: layout.order().len() });
    }
    let alloc = Allocation::from_order(layout.order())?;
    let achieved_envy = envy(instance, &alloc)?;
    let guarantee_bound = instance.houses().spread() * BigUint::from(layout.width());
    Ok((alloc, ApproxCertificate { achieved_envy, guarantee_bound, bound_name: BoundName::LayoutWidth }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayoutStrategy {
    BfsOrder,
    DfsOrder,
    TreeTrickleOrder,
    ExactSmall,
}

pub fn heuristic_layout(graph: &Graph, strategy: LayoutStrategy) -> Result<Layout> {
    let n = graph.n();
    let order = match strategy {
        LayoutStrategy::BfsOrder => {
            let mut seen = vec![false; n];
            let mut order = Vec::with_capacity(n);
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                seen[s] = true;
                let mut q = VecDeque::from([s]);
                while let Some(v) = q.pop_front() {
                    order.push(v);
                    for &w in graph.neighbors(v) {
                        if !seen[w] {
                            seen[w] = true;
                            q.push_back(w);
                        }
                    }
                }
            }
            order
        }
        LayoutStrategy::DfsOrder => {
            let mut seen = vec![false; n];
            let mut order = Vec::with_capacity(n);
            for s in 0..n {
                let mut stack = vec![s];
                while let Some(v) = stack.pop() {
                    if seen[v] {
                        continue;
                    }
                    seen[v] = true;
                    order.push(v);
                    stack.extend(graph.neighbors(v).iter().rev().filter(|&&w| !seen[w]));
                }
            }
            order
        }
        LayoutStrategy::TreeTrickleOrder => Allocation::new(trickle_assignment(graph)?)?.holders(),
        LayoutStrategy::ExactSmall => return cutwidth_exact_small(graph),
    };
    Layout::new(graph, order)
}

/// Heap indices of `B_depth` in in-order.
pub fn inorder_sequence(depth: u32) -> Vec<usize> {
    let n = (1usize << (depth + 1)) - 1;
    let mut out = Vec::with_capacity(n);
    let mut stack = Vec::new();
    let mut cur = 0usize;
    loop {
        while cur < n {
            stack.push(cur);
            cur = 2 * cur + 1;
        }
        match stack.pop() {
            Some(v) => {
                out.push(v);
                cur = 2 * v + 2;
            }
            None => break,
        }
    }
    out
}

/// Depth `d` with `2^(d+1) − 1 == len`.
pub fn complete_tree_depth(len: usize) -> Result<u32> {
    let m = len + 1;
    if len == 0 || !m.is_power_of_two() {
        return Err(Error::NotCompleteTreeSize { len });
    }
    Ok(m.trailing_zeros() - 1)
}

/// Sorted houses along the in-order traversal of `B_depth`.
///
/// The certificate is `⌊7·L/2⌋` where `L = Σ_i δ_{B_k}(i)·(h_{i+1} − h_i)`
/// is a lower bound on the optimum.
pub fn inorder_allocation(depth: u32, houses: &HouseValues) -> Result<(Allocation, ApproxCertificate)> {
    let n = houses.len();
    if complete_tree_depth(n)? != depth {
        return Err(Error::NotCompleteTreeSize { len: n });
    }
    let tree = Graph::complete_binary_tree(depth);
    let alloc = Allocation::from_order(&inorder_sequence(depth))?;
    let instance = Instance::new(tree, houses.clone())?;
    let achieved_envy = envy(&instance, &alloc)?;
    let delta = delta_profile_complete_binary(depth);
    let lower = houses
        .gaps()
        .iter()
        .enumerate()
        .fold(BigUint::default(), |acc, (i, gap)| acc + gap * BigUint::from(delta[i + 1]));
    let guarantee_bound = (lower * BigUint::from(7u8)) >> 1u32;
    Ok((alloc, ApproxCertificate { achieved_envy, guarantee_bound, bound_name: BoundName::InOrder }))
}
