//! Erdős–Rényi `G(n, 1/2)` sampling and cut-concentration experiments.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{envy, Allocation, HouseValues, Instance};

/// `G(n, 1/2)`: each pair `i < j`, taken in lexicographic order, is an edge
/// with probability 1/2 under a ChaCha8 stream seeded by `seed`.
pub fn sample_gnp_half(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<bool>() {
                edges.push((i, j));
            }
        }
    }
    Graph::from_trusted(n, edges)
}

/// `√(24 ln n / n)`.
pub fn epsilon_threshold(n: usize) -> f64 {
    let n = n as f64;
    (24.0 * n.ln() / n).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub n: usize,
    pub epsilon: f64,
    pub samples: u64,
    /// Extremes of `δ(S) / (|S|(n − |S|)/2)` over the tested sets.
    pub worst_low_ratio: Ratio<u64>,
    pub worst_high_ratio: Ratio<u64>,
    pub violations: u64,
}

struct BitRows {
    words: usize,
    rows: Vec<u64>,
}

impl BitRows {
    fn new(graph: &Graph) -> Self {
        let words = graph.n().div_ceil(64);
        let mut rows = vec![0u64; graph.n() * words];
        for &(u, v) in graph.edges() {
            rows[u * words + v / 64] |= 1 << (v % 64);
            rows[v * words + u / 64] |= 1 << (u % 64);
        }
        BitRows { words, rows }
    }

    fn cut(&self, members: &[usize], mask: &[u64]) -> u64 {
        members
            .iter()
            .map(|&v| {
                let row = &self.rows[v * self.words..(v + 1) * self.words];
                row.iter().zip(mask).map(|(r, m)| (r & !m).count_ones() as u64).sum::<u64>()
            })
            .sum()
    }
}

/// Probes the cut ratio on `subset_samples` random sets, cycling through the
/// sizes `1..=n/2`. A set violates when its ratio leaves `[1 − ε, 1 + ε]`.
pub fn concentration_check(graph: &Graph, epsilon: f64, subset_samples: usize, seed: u64) -> Result<ConcentrationReport> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::BadParameters("need at least two vertices".into()));
    }
    let threshold = epsilon_threshold(n);
    if epsilon < threshold {
        return Err(Error::EpsilonTooSmall { epsilon, threshold });
    }
    let rows = BitRows::new(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = n / 2;
    let mut low: Option<Ratio<u64>> = None;
    let mut high: Option<Ratio<u64>> = None;
    let mut violations = 0;
    let mut mask = vec![0u64; rows.words];
    for t in 0..subset_samples {
        let k = 1 + t % half;
        let members = rand::seq::index::sample(&mut rng, n, k).into_vec();
        mask.iter_mut().for_each(|w| *w = 0);
        for &v in &members {
            mask[v / 64] |= 1 << (v % 64);
        }
        let cut = rows.cut(&members, &mask);
        let ratio = Ratio::new(2 * cut, (k * (n - k)) as u64);
        let r = ratio.to_f64().unwrap_or(f64::NAN);
        if r < 1.0 - epsilon || r > 1.0 + epsilon {
            violations += 1;
        }
        if low.is_none_or(|l| ratio < l) {
            low = Some(ratio);
        }
        if high.is_none_or(|h| ratio > h) {
            high = Some(ratio);
        }
    }
    Ok(ConcentrationReport {
        n,
        epsilon,
        samples: subset_samples as u64,
        worst_low_ratio: low.unwrap_or(Ratio::from_integer(1)),
        worst_high_ratio: high.unwrap_or(Ratio::from_integer(1)),
        violations,
    })
}

/// `Σ_i (h_{i+1} − h_i)·i(n − i)/2`, the expected envy of any allocation on
/// `G(n, 1/2)`.
pub fn expected_envy(houses: &HouseValues) -> f64 {
    let n = houses.len();
    houses
        .gaps()
        .iter()
        .enumerate()
        .map(|(idx, gap)| {
            let i = (idx + 1) as f64;
            gap.to_f64().unwrap_or(f64::INFINITY) * i * (n as f64 - i) / 2.0
        })
        .sum()
}

/// `(1 + ε)/(1 − ε)` at `ε = √(24 ln n / n)`; infinite when `ε >= 1`.
pub fn allocation_envelope(n: usize) -> f64 {
    let eps = epsilon_threshold(n);
    if eps >= 1.0 {
        f64::INFINITY
    } else {
        (1.0 + eps) / (1.0 - eps)
    }
}

/// Largest ratio, over `trials` uniformly random allocations, of envy to the
/// lower bound `(1 − ε)·Σ_i (h_{i+1} − h_i)·i(n − i)/2`. Zero when every value
/// is equal.
pub fn arbitrary_allocation_ratio(graph: &Graph, houses: &HouseValues, trials: usize, seed: u64) -> Result<f64> {
    let n = graph.n();
    let instance = Instance::new(graph.clone(), houses.clone())?;
    let eps = epsilon_threshold(n.max(2));
    let lower = (1.0 - eps) * expected_envy(houses);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut worst = 0.0f64;
    for _ in 0..trials {
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let e = envy(&instance, &Allocation::new(perm.clone())?)?;
        let e = e.to_f64().unwrap_or(f64::INFINITY);
        let ratio = if e == 0.0 { 0.0 } else { e / lower };
        worst = worst.max(ratio);
    }
    Ok(worst)
}

/// One seed of the statistical gate.
#[derive(Debug, Clone, PartialEq)]
pub struct GateAttempt {
    pub seed: u64,
    pub report: ConcentrationReport,
    pub allocation_ratio: f64,
    pub passed: bool,
}

/// Tries seeds `base_seed, base_seed + 1, ...` until one passes (no
/// concentration violation and allocation ratio within the envelope) or
/// `max_seeds` have failed.
pub fn statistical_gate(
    n: usize,
    base_seed: u64,
    max_seeds: usize,
    subset_samples: usize,
    trials: usize,
) -> Result<Vec<GateAttempt>> {
    let mut attempts = Vec::new();
    for s in 0..max_seeds as u64 {
        let seed = base_seed + s;
        let g = sample_gnp_half(n, seed);
        let report = concentration_check(&g, epsilon_threshold(n), subset_samples, seed ^ 0x5eed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa110c);
        let mut values: Vec<u64> = (0..n).map(|_| rng.gen_range(0..1000)).collect();
        values.sort_unstable();
        let houses = HouseValues::from_u64s(&values)?;
        let allocation_ratio = arbitrary_allocation_ratio(&g, &houses, trials, seed)?;
        let passed = report.violations == 0 && allocation_ratio <= allocation_envelope(n);
        attempts.push(GateAttempt { seed, report, allocation_ratio, passed });
        if passed {
            break;
        }
    }
    Ok(attempts)
}
