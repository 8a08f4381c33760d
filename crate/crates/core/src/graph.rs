//! Undirected simple graphs on vertices `0..n`.

use std::collections::{HashSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};

/// An undirected simple graph with derived adjacency lists and maximum degree.
///
/// Construction through [`Graph::new`] rejects self-loops, duplicate edges and
/// out-of-range endpoints, so every `Graph` value satisfies those invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    max_degree: usize,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { edge: idx, vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { edge: idx, u, v });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph { n, edges, adjacency, max_degree })
    }

    /// Builds a graph from edges that are known to be valid.
    pub(crate) fn from_trusted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Graph::new(n, edges).expect("generator produced an invalid graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() == self.n - 1 && self.is_connected()
    }

    pub(crate) fn require_tree(&self) -> Result<()> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(Error::NotATree)
        }
    }

    /// Number of edges with exactly one endpoint in `subset` (the cut size δ(S)).
    pub fn cut_size(&self, subset: &[usize]) -> Result<usize> {
        let mut inside = vec![false; self.n];
        for &v in subset {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            inside[v] = true;
        }
        Ok(self.cut_size_indicator(&inside))
    }

    pub(crate) fn cut_size_indicator(&self, inside: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| inside[u] != inside[v]).count()
    }

    /// Neighbourhood bitmasks, available when the graph fits in a machine word.
    pub(crate) fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.adjacency
                .iter()
                .map(|ns| ns.iter().fold(0u64, |m, &w| m | (1u64 << w)))
                .collect(),
        )
    }

    // --- named families -------------------------------------------------

    pub fn empty(n: usize) -> Self {
        Graph::from_trusted(n, Vec::new())
    }

    pub fn path(n: usize) -> Self {
        Graph::from_trusted(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadParameters(format!("cycle needs n >= 3, got {n}")));
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Ok(Graph::from_trusted(n, edges))
    }

    /// Star with centre `0` and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::from_trusted(leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_trusted(n, edges)
    }

    /// `rows x cols` grid, vertices numbered row-major.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Graph::from_trusted(rows * cols, edges)
    }

    /// Complete binary tree of the given depth in heap order: the children of
    /// `v` are `2v + 1` and `2v + 2`.
    pub fn complete_binary_tree(depth: u32) -> Self {
        let n = (1usize << (depth + 1)) - 1;
        Graph::from_trusted(n, (1..n).map(|v| ((v - 1) / 2, v)).collect())
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::from_trusted(self.n + other.n, edges)
    }

    /// Random recursive tree: vertex `v > 0` attaches to a uniform earlier vertex.
    pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Graph::from_trusted(n, (1..n).map(|v| (rng.gen_range(0..v), v)).collect())
    }

    /// Uniform random labelled tree via a random Prüfer sequence.
    pub fn random_prufer_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        if n <= 2 {
            return Graph::path(n);
        }
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut leaves: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| degree[v] == 1).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = *leaves.iter().next().expect("a leaf always exists");
            leaves.remove(&leaf);
            edges.push((leaf, s));
            degree[s] -= 1;
            if degree[s] == 1 {
                leaves.insert(s);
            }
        }
        let rest: Vec<usize> = leaves.into_iter().collect();
        edges.push((rest[0], rest[1]));
        Graph::from_trusted(n, edges)
    }

    /// Random connected graph: a random tree plus each remaining pair with
    /// probability `p`.
    pub fn random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let tree = Graph::random_tree(n, rng);
        let mut present: HashSet<(usize, usize)> =
            tree.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let mut edges = tree.edges;
        for u in 0..n {
            for v in u + 1..n {
                if !present.contains(&(u, v)) && rng.gen_bool(p) {
                    present.insert((u, v));
                    edges.push((u, v));
                }
            }
        }
        Graph::from_trusted(n, edges)
    }
}
