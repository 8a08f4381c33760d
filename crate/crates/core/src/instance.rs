//! Instances, allocations and envy evaluation.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Non-decreasing house values `h_1 <= ... <= h_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HouseValues(Vec<BigUint>);

impl HouseValues {
    pub fn new(values: Vec<BigUint>) -> Result<Self> {
        if let Some(index) = (1..values.len()).find(|&i| values[i] < values[i - 1]) {
            return Err(Error::UnsortedValues { index });
        }
        Ok(HouseValues(values))
    }

    /// Sorts the input first; for callers holding an unordered multiset.
    pub fn from_multiset(mut values: Vec<BigUint>) -> Self {
        values.sort();
        HouseValues(values)
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        HouseValues::new(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn values(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &BigUint {
        &self.0[i]
    }

    /// `h_n - h_1`, zero for fewer than two houses.
    pub fn spread(&self) -> BigUint {
        match (self.0.first(), self.0.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => BigUint::zero(),
        }
    }

    /// Gap lengths `h_{i+1} - h_i`, one per smallest subinterval.
    pub fn gaps(&self) -> Vec<BigUint> {
        self.0.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    pub fn into_inner(self) -> Vec<BigUint> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    houses: HouseValues,
    connected: bool,
}

impl Instance {
    pub fn new(graph: Graph, houses: HouseValues) -> Result<Self> {
        if houses.len() != graph.n() {
            return Err(Error::LengthMismatch { expected: graph.n(), found: houses.len() });
        }
        let connected = graph.is_connected();
        Ok(Instance { graph, houses, connected })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn houses(&self) -> &HouseValues {
        &self.houses
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Same graph, different values.
    pub fn with_houses(&self, houses: HouseValues) -> Result<Self> {
        Instance::new(self.graph.clone(), houses)
    }
}

/// Validates raw instance data. Checks run in the order length, edges, sorting.
pub fn validate_instance(n: usize, edges: Vec<(usize, usize)>, values: Vec<BigUint>) -> Result<Instance> {
    if values.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: values.len() });
    }
    let graph = Graph::new(n, edges)?;
    Instance::new(graph, HouseValues::new(values)?)
}

/// Bijection from vertices to house indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    assignment: Vec<usize>,
}

impl Allocation {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let n = assignment.len();
        let mut used = vec![false; n];
        for (vertex, &house) in assignment.iter().enumerate() {
            if house >= n || used[house] {
                return Err(Error::NotABijection { vertex, house });
            }
            used[house] = true;
        }
        Ok(Allocation { assignment })
    }

    pub fn identity(n: usize) -> Self {
        Allocation { assignment: (0..n).collect() }
    }

    /// The vertex at position `j` of `order` receives house `j`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut assignment = vec![usize::MAX; n];
        for (house, &vertex) in order.iter().enumerate() {
            if vertex >= n {
                return Err(Error::VertexOutOfRange { vertex, n });
            }
            if assignment[vertex] != usize::MAX {
                return Err(Error::NotABijection { vertex, house });
            }
            assignment[vertex] = house;
        }
        Ok(Allocation { assignment })
    }

    /// Allocation realising a per-vertex value pattern. Equal values go to
    /// house indices in increasing vertex order.
    pub fn from_vertex_values(houses: &HouseValues, per_vertex: &[BigUint]) -> Result<Self> {
        let n = houses.len();
        if per_vertex.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: per_vertex.len() });
        }
        let mut taken = vec![false; n];
        let mut assignment = Vec::with_capacity(n);
        for (vertex, value) in per_vertex.iter().enumerate() {
            let start = houses.values().partition_point(|h| h < value);
            let house = (start..n)
                .take_while(|&j| houses.get(j) == value)
                .find(|&j| !taken[j])
                .ok_or(Error::NotABijection { vertex, house: start })?;
            taken[house] = true;
            assignment.push(house);
        }
        Ok(Allocation { assignment })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn house_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Inverse map: entry `j` is the vertex holding house `j`.
    pub fn holders(&self) -> Vec<usize> {
        let mut out = vec![0; self.assignment.len()];
        for (v, &h) in self.assignment.iter().enumerate() {
            out[h] = v;
        }
        out
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.assignment.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: self.assignment.len() });
        }
        Ok(())
    }
}

/// Total envy: sum over edges of the absolute value difference.
pub fn envy(instance: &Instance, alloc: &Allocation) -> Result<BigUint> {
    alloc.check_len(instance.n())?;
    let h = instance.houses().values();
    let mut total = BigUint::zero();
    for &(u, v) in instance.graph().edges() {
        let (a, b) = (&h[alloc.house_of(u)], &h[alloc.house_of(v)]);
        if a > b {
            total += a - b;
        } else {
            total += b - a;
        }
    }
    Ok(total)
}

/// Prefix cut counts under an allocation: entry `i` counts edges joining a
/// vertex holding one of houses `0..=i` to a vertex holding a later house.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCutProfile {
    pub cuts: Vec<usize>,
}

impl PrefixCutProfile {
    /// `sum_i cuts[i] * (h_{i+1} - h_i)`.
    pub fn weighted_sum(&self, houses: &HouseValues) -> BigUint {
        self.cuts
            .iter()
            .zip(houses.gaps())
            .fold(BigUint::zero(), |acc, (&c, gap)| acc + gap * BigUint::from(c))
    }
}

pub fn prefix_cut_profile(instance: &Instance, alloc: &Allocation) -> Result<PrefixCutProfile> {
    alloc.check_len(instance.n())?;
    Ok(PrefixCutProfile { cuts: profile_of(instance.graph(), alloc.assignment()) })
}

pub(crate) fn profile_of(graph: &Graph, assignment: &[usize]) -> Vec<usize> {
    let n = graph.n();
    let mut diff = vec![0isize; n + 1];
    for &(u, v) in graph.edges() {
        let (a, b) = (assignment[u].min(assignment[v]), assignment[u].max(assignment[v]));
        diff[a] += 1;
        diff[b] -= 1;
    }
    let mut running = 0isize;
    (0..n.saturating_sub(1))
        .map(|i| {
            running += diff[i];
            running as usize
        })
        .collect()
}
