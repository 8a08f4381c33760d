//! Repunit representations, elegance, binary runs, and cuts of complete
//! binary trees.
//!
//! A repunit is `2^a − 1`. The elegance of `m` is the fewest signed repunits
//! summing to `m`; it sandwiches the minimum cut of size `m` in a complete
//! binary tree whose size is much larger than `m`.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::tree_min_cut_profile;
use crate::graph::Graph;
use crate::instance::{Allocation, HouseValues, Instance};

/// Signed exponents `a_i`; term `i` contributes `sgn(a_i)·(2^|a_i| − 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepunitRepresentation {
    pub terms: Vec<i32>,
}

impl RepunitRepresentation {
    pub fn value(&self) -> i128 {
        self.terms
            .iter()
            .map(|&a| {
                let r = (1i128 << a.unsigned_abs()) - 1;
                if a < 0 {
                    -r
                } else {
                    r
                }
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EleganceRecord {
    pub m: u64,
    pub elegance: u32,
    pub witness: RepunitRepresentation,
}

fn bitlen(m: u64) -> u32 {
    u64::BITS - m.leading_zeros()
}

/// Breadth-first search from 0 over `[−bound, bound]` with steps
/// `±(2^a − 1)`, `1 <= a <= max_a`. Returns per-state distance (`u8::MAX`
/// when unreached) and the signed exponent of the last step taken.
fn repunit_bfs(bound: i64, max_a: u32, stop_at: Option<i64>) -> (Vec<u8>, Vec<i8>) {
    let width = (2 * bound + 1) as usize;
    let idx = |x: i64| (x + bound) as usize;
    let mut dist = vec![u8::MAX; width];
    let mut step = vec![0i8; width];
    let steps: Vec<(i64, i8)> = (1..=max_a)
        .flat_map(|a| {
            let r = (1i64 << a) - 1;
            [(r, a as i8), (-r, -(a as i8))]
        })
        .collect();
    let mut queue = VecDeque::new();
    dist[idx(0)] = 0;
    queue.push_back(0i64);
    while let Some(x) = queue.pop_front() {
        if Some(x) == stop_at {
            break;
        }
        let d = dist[idx(x)];
        for &(delta, a) in &steps {
            let y = x + delta;
            if y < -bound || y > bound {
                continue;
            }
            let j = idx(y);
            if dist[j] == u8::MAX {
                dist[j] = d + 1;
                step[j] = a;
                queue.push_back(y);
            }
        }
    }
    (dist, step)
}

fn walk_back(m: i64, bound: i64, step: &[i8]) -> RepunitRepresentation {
    let mut terms = Vec::new();
    let mut x = m;
    while x != 0 {
        let a = step[(x + bound) as usize];
        terms.push(a as i32);
        let r = (1i64 << a.unsigned_abs()) - 1;
        x -= if a < 0 { -r } else { r };
    }
    terms.sort_by(|a, b| b.abs().cmp(&a.abs()).then(b.cmp(a)));
    RepunitRepresentation { terms }
}

fn cache() -> &'static RwLock<HashMap<u64, EleganceRecord>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, EleganceRecord>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Elegance of `m` with a witness, searching terms `2^a − 1` with
/// `a <= bitlen(m) + 2` and partial sums within `[−4m, 4m]`. Results are
/// memoised. `m = 0` has elegance 0.
pub fn elegance(m: u64) -> EleganceRecord {
    if let Some(rec) = cache().read().expect("cache lock").get(&m) {
        return rec.clone();
    }
    let rec = if m == 0 {
        EleganceRecord { m, elegance: 0, witness: RepunitRepresentation { terms: vec![] } }
    } else {
        let bound = 4 * m as i64;
        let (dist, step) = repunit_bfs(bound, bitlen(m) + 2, Some(m as i64));
        let witness = walk_back(m as i64, bound, &step);
        EleganceRecord { m, elegance: dist[(m as i64 + bound) as usize] as u32, witness }
    };
    cache().write().expect("cache lock").insert(m, rec.clone());
    rec
}

/// Elegance of every `m` in `1..=upto` from a single search over
/// `[−4·upto, 4·upto]` with terms up to `2^(bitlen(upto)+2) − 1`.
pub struct EleganceTable {
    upto: u64,
    bound: i64,
    dist: Vec<u8>,
    step: Vec<i8>,
}

impl EleganceTable {
    pub fn new(upto: u64) -> Self {
        let bound = 4 * upto.max(1) as i64;
        let (dist, step) = repunit_bfs(bound, bitlen(upto.max(1)) + 2, None);
        EleganceTable { upto, bound, dist, step }
    }

    pub fn upto(&self) -> u64 {
        self.upto
    }

    pub fn elegance(&self, m: u64) -> u32 {
        assert!(m <= self.upto, "m beyond table range");
        self.dist[(m as i64 + self.bound) as usize] as u32
    }

    pub fn record(&self, m: u64) -> EleganceRecord {
        EleganceRecord { m, elegance: self.elegance(m), witness: walk_back(m as i64, self.bound, &self.step) }
    }
}

pub fn elegance_table(upto: u64) -> EleganceTable {
    EleganceTable::new(upto)
}

/// Maximal blocks of equal bits in the binary form of `i` (no leading zeros).
pub fn runs(i: u64) -> u32 {
    // The top bit of i ^ (i >> 1) is set, plus one bit per block boundary.
    (i ^ (i >> 1)).count_ones()
}

/// `2 + 2(r − 1) + ⌊log₂(r − 1)⌋` for `r >= 2`.
pub fn refined_run_bound(r: u32) -> u32 {
    assert!(r >= 2);
    2 + 2 * (r - 1) + (u32::BITS - 1 - (r - 1).leading_zeros())
}

fn delta_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<usize>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<usize>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// δ_{B_depth}(i) for every `0 <= i <= n`, from the tree knapsack DP.
pub fn delta_profile_complete_binary(depth: u32) -> Arc<Vec<usize>> {
    if let Some(p) = delta_cache().read().expect("cache lock").get(&depth) {
        return p.clone();
    }
    let profile = Arc::new(
        tree_min_cut_profile(&Graph::complete_binary_tree(depth)).expect("complete binary trees are trees"),
    );
    delta_cache().write().expect("cache lock").insert(depth, profile.clone());
    profile
}

/// δ_{B_depth}(i) for `1 <= i <= 2^(depth+1) − 2`.
pub fn delta_complete_binary(depth: u32, i: usize) -> Result<usize> {
    let n = (1usize << (depth + 1)) - 1;
    if i == 0 || i >= n {
        return Err(Error::OutOfRange { value: i, reason: "need 1 <= i <= 2^(depth+1) - 2" });
    }
    Ok(delta_profile_complete_binary(depth)[i])
}

/// Edges of `B_depth` crossing the `i`-prefix of the in-order allocation,
/// `runs(min(i, n − i))`.
pub fn inorder_crossings(depth: u32, i: usize) -> u32 {
    let n = (1usize << (depth + 1)) - 1;
    runs(i.min(n - i) as u64)
}

/// Two-valued instance on `B_depth`: `zeros` houses of value 0, the rest 1.
pub fn two_valued_instance(depth: u32, zeros: usize) -> Result<Instance> {
    let n = (1usize << (depth + 1)) - 1;
    if zeros > n {
        return Err(Error::OutOfRange { value: zeros, reason: "more zeros than vertices" });
    }
    let values: Vec<u64> = (0..n).map(|j| u64::from(j >= zeros)).collect();
    Instance::new(Graph::complete_binary_tree(depth), HouseValues::from_u64s(&values)?)
}

/// The pair of instances on `B_depth` with 89 and 94 zeros respectively,
/// the rest ones. No value-agnostic algorithm can be optimal on both.
pub fn value_agnostic_gap_instances(depth: u32) -> Result<(Instance, Instance)> {
    let n = (1usize << (depth + 1)) - 1;
    if n < 128 {
        return Err(Error::TooShallow { depth, min: 128 });
    }
    Ok((two_valued_instance(depth, 89)?, two_valued_instance(depth, 94)?))
}

/// Heap-ordered vertex set of the subtree of `B_depth` rooted at `v`.
pub fn subtree_vertices(depth: u32, v: usize) -> Vec<usize> {
    let n = (1usize << (depth + 1)) - 1;
    let mut out = Vec::new();
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        if x < n {
            out.push(x);
            stack.push(2 * x + 1);
            stack.push(2 * x + 2);
        }
    }
    out.sort_unstable();
    out
}

/// Every vertex set of size `size` in `B_depth` cut by exactly two edges.
/// Such a set is a union of components left after deleting two edges.
pub fn two_edge_cut_sets(depth: u32, size: usize) -> Vec<Vec<usize>> {
    let n = (1usize << (depth + 1)) - 1;
    let sub: Vec<usize> = (0..n).map(|v| (1usize << (depth + 1 - level(v))) - 1).collect();
    let contains = |a: usize, b: usize| {
        // b lies in the subtree of a
        let mut x = b;
        while x > a {
            x = (x - 1) / 2;
        }
        x == a
    };
    let mut out = Vec::new();
    // Edge into child c is identified by c (1..n).
    for c1 in 1..n {
        for c2 in c1 + 1..n {
            let set = if contains(c1, c2) {
                // middle component: subtree(c1) minus subtree(c2)
                if sub[c1] - sub[c2] == size || n - (sub[c1] - sub[c2]) == size {
                    let inner: std::collections::HashSet<usize> = subtree_vertices(depth, c2).into_iter().collect();
                    let mid: Vec<usize> =
                        subtree_vertices(depth, c1).into_iter().filter(|x| !inner.contains(x)).collect();
                    Some(if mid.len() == size { mid } else { complement(n, &mid) })
                } else {
                    None
                }
            } else if sub[c1] + sub[c2] == size || n - sub[c1] - sub[c2] == size {
                let mut both = subtree_vertices(depth, c1);
                both.extend(subtree_vertices(depth, c2));
                both.sort_unstable();
                Some(if both.len() == size { both } else { complement(n, &both) })
            } else {
                None
            };
            if let Some(s) = set {
                out.push(s);
            }
        }
    }
    out
}

fn level(v: usize) -> u32 {
    usize::BITS - 1 - (v + 1).leading_zeros()
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    let inside: std::collections::HashSet<usize> = set.iter().copied().collect();
    (0..n).filter(|x| !inside.contains(x)).collect()
}

/// Global median property on heap-indexed `B_k`: at every internal vertex
/// with value `x`, one child subtree holds only values `<= x` and the other
/// only values `>= x`.
pub fn has_global_median_property(instance: &Instance, alloc: &Allocation) -> Result<bool> {
    let n = instance.n();
    let depth = crate::approx::complete_tree_depth(n)?;
    let h = instance.houses().values();
    let val = |v: usize| &h[alloc.house_of(v)];
    let internal = (1usize << depth) - 1;
    // Subtree minima and maxima, bottom up.
    let mut lo: Vec<&BigUint> = (0..n).map(val).collect();
    let mut hi = lo.clone();
    for v in (0..internal).rev() {
        for c in [2 * v + 1, 2 * v + 2] {
            if lo[c] < lo[v] {
                lo[v] = lo[c];
            }
            if hi[c] > hi[v] {
                hi[v] = hi[c];
            }
        }
    }
    Ok((0..internal).all(|v| {
        let x = val(v);
        let (l, r) = (2 * v + 1, 2 * v + 2);
        (hi[l] <= x && x <= lo[r]) || (hi[r] <= x && x <= lo[l])
    }))
}

/// The instance on `B_3` with seven 0s, three 1s, one 2 and four 3s.
pub fn example_instance() -> Instance {
    let values = [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 3, 3, 3, 3];
    Instance::new(Graph::complete_binary_tree(3), HouseValues::from_u64s(&values).expect("sorted"))
        .expect("15 values on 15 vertices")
}

/// Per-vertex values (heap order) of the best allocation on
/// [`example_instance`] that has the global median property; envy 6.
pub const EXAMPLE_MEDIAN_VALUES: [u64; 15] = [1, 0, 3, 0, 0, 1, 3, 0, 0, 0, 0, 1, 2, 3, 3];

/// Per-vertex values of an allocation on [`example_instance`] with envy 5.
pub const EXAMPLE_IMPROVED_VALUES: [u64; 15] = [2, 0, 3, 0, 0, 1, 3, 0, 0, 0, 0, 1, 1, 3, 3];

pub fn example_allocation(per_vertex: &[u64; 15]) -> Allocation {
    let inst = example_instance();
    let vals: Vec<BigUint> = per_vertex.iter().map(|&v| BigUint::from(v)).collect();
    Allocation::from_vertex_values(inst.houses(), &vals).expect("pattern matches the value multiset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::envy;

    #[test]
    fn table_values() {
        let expect = [1, 2, 1, 2, 3, 2, 1, 2, 3, 2, 3, 2, 3, 2, 1, 2, 3, 2, 3, 4];
        for (m, &e) in (1..=20).zip(expect.iter()) {
            let rec = elegance(m);
            assert_eq!(rec.elegance, e, "m = {m}");
            assert_eq!(rec.witness.value(), m as i128);
            assert_eq!(rec.witness.terms.len() as u32, e);
        }
        assert_eq!(elegance(10).witness.terms, vec![3, 2]);
        assert_eq!(elegance(89).elegance, 3);
        assert_eq!(elegance(94).elegance, 2);
        assert_eq!(elegance(0).elegance, 0);
    }

    #[test]
    fn bulk_table_agrees_on_small_m() {
        let t = elegance_table(300);
        for m in 1..=300 {
            assert_eq!(t.elegance(m), elegance(m).elegance, "m = {m}");
            assert_eq!(t.record(m).witness.value(), m as i128);
        }
    }

    #[test]
    fn run_counts() {
        assert_eq!(runs(3), 1);
        assert_eq!(runs(2), 2);
        assert_eq!(runs(89), 5);
        assert_eq!(runs(1), 1);
        assert_eq!(runs(0b1010), 4);
    }

    #[test]
    fn refined_bound_values() {
        assert_eq!(refined_run_bound(2), 4);
        assert_eq!(refined_run_bound(3), 7);
        assert_eq!(refined_run_bound(5), 12);
    }

    #[test]
    fn deltas() {
        assert_eq!(delta_complete_binary(7, 89).unwrap(), 3);
        assert_eq!(delta_complete_binary(7, 94).unwrap(), 2);
        assert_eq!(delta_complete_binary(3, 5).unwrap(), 2);
        for k in 1..=3 {
            assert_eq!(delta_complete_binary(4, (1 << k) - 1).unwrap(), 1);
        }
        assert!(matches!(delta_complete_binary(3, 15), Err(Error::OutOfRange { .. })));
        assert!(matches!(delta_complete_binary(3, 0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn gap_instances() {
        assert!(matches!(value_agnostic_gap_instances(5), Err(Error::TooShallow { .. })));
        let (a, b) = value_agnostic_gap_instances(7).unwrap();
        assert_eq!(a.houses().values().iter().filter(|v| **v == BigUint::from(0u8)).count(), 89);
        assert_eq!(b.houses().values().iter().filter(|v| **v == BigUint::from(0u8)).count(), 94);
    }

    #[test]
    fn example_allocations() {
        let inst = example_instance();
        let top = example_allocation(&EXAMPLE_MEDIAN_VALUES);
        let bottom = example_allocation(&EXAMPLE_IMPROVED_VALUES);
        assert_eq!(envy(&inst, &top).unwrap(), 6u32.into());
        assert_eq!(envy(&inst, &bottom).unwrap(), 5u32.into());
        assert!(has_global_median_property(&inst, &top).unwrap());
        assert!(!has_global_median_property(&inst, &bottom).unwrap());
    }

    #[test]
    fn subtrees() {
        assert_eq!(subtree_vertices(3, 1), vec![1, 3, 4, 7, 8, 9, 10]);
        assert_eq!(subtree_vertices(2, 6), vec![6]);
    }
}
