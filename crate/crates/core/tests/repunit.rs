use std::collections::HashMap;

use gha_core::approx::{inorder_allocation, inorder_sequence};
use gha_core::cuts::min_cut_profile_bruteforce;
use gha_core::exact::{enumerate_value_patterns, solve_exact_dp};
use gha_core::repunit::*;
use gha_core::{envy, Allocation, Graph, HouseValues};
use num_bigint::BigUint;

const TABLE: [u32; 20] = [1, 2, 1, 2, 3, 2, 1, 2, 3, 2, 3, 2, 3, 2, 1, 2, 3, 2, 3, 4];

/// Minimum term count for every value reachable with at most three signed
/// repunits of exponent <= `max_a`, no range restriction.
fn up_to_three_terms(max_a: u32) -> HashMap<i64, u32> {
    let terms: Vec<i64> = (1..=max_a).flat_map(|a| [(1i64 << a) - 1, 1 - (1i64 << a)]).collect();
    let mut best = HashMap::from([(0i64, 0u32)]);
    let mut frontier = vec![0i64];
    for r in 1..=3 {
        let mut next = Vec::new();
        for &x in &frontier {
            for &t in &terms {
                let y = x + t;
                if let std::collections::hash_map::Entry::Vacant(e) = best.entry(y) {
                    e.insert(r);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    best
}

/// Meet-in-the-middle elegance with terms up to `2^max_a − 1`, peeling off
/// single terms when two halves of three do not suffice.
fn elegance_oracle(m: i64, half: &HashMap<i64, u32>, max_a: u32, peel: u32) -> Option<u32> {
    let direct = half.iter().filter_map(|(&x, &c)| half.get(&(m - x)).map(|&d| c + d)).min();
    if direct.is_some() || peel == 0 {
        return direct;
    }
    (1..=max_a)
        .flat_map(|a| [(1i64 << a) - 1, 1 - (1i64 << a)])
        .filter_map(|t| elegance_oracle(m - t, half, max_a, peel - 1).map(|e| e + 1))
        .min()
}

#[test]
fn elegance_agrees_with_unbounded_search() {
    let half = up_to_three_terms(20);
    let table = elegance_table(4096);
    for m in 1..=4096u64 {
        let expected = elegance_oracle(m as i64, &half, 20, 1).expect("elegance <= 7 below 4096");
        assert_eq!(table.elegance(m), expected, "m = {m}");
        let rec = elegance(m);
        assert_eq!(rec.elegance, expected, "m = {m}");
        assert_eq!(rec.witness.value(), m as i128);
        assert_eq!(table.record(m).witness.value(), m as i128);
    }
}

#[test]
fn table_of_small_values() {
    let got: Vec<u32> = (1..=20).map(|m| elegance(m).elegance).collect();
    assert_eq!(got, TABLE);
    assert_eq!(elegance(10).witness.terms, vec![3, 2]);
    assert_eq!(elegance(12).witness.terms, vec![4, -2]);
}

#[test]
fn gap_pair_elegance_and_witnesses() {
    let e89 = elegance(89);
    let e94 = elegance(94);
    assert_eq!((e89.elegance, e94.elegance), (3, 2));
    assert_eq!(e89.witness.terms, vec![7, -5, -3]);
    assert_eq!(e94.witness.terms, vec![6, 5]);
}

#[test]
fn runs_matches_string_count() {
    for i in 1u64..5000 {
        let s = format!("{i:b}");
        let blocks = 1 + s.as_bytes().windows(2).filter(|w| w[0] != w[1]).count() as u32;
        assert_eq!(runs(i), blocks, "i = {i}");
    }
    for a in 1..40 {
        assert_eq!(runs((1 << a) - 1), 1);
    }
}

#[test]
fn delta_profile_matches_bruteforce_on_small_trees() {
    for depth in 1..=3 {
        let tree = Graph::complete_binary_tree(depth);
        let bf = min_cut_profile_bruteforce(&tree).unwrap();
        assert_eq!(*delta_profile_complete_binary(depth), bf);
    }
    assert_eq!(delta_complete_binary(3, 5).unwrap(), 2);
    assert!(delta_complete_binary(3, 0).is_err());
    assert!(delta_complete_binary(3, 15).is_err());
}

#[test]
fn sandwich_on_small_depths() {
    let table = elegance_table(1 << 8);
    for depth in 1..=8u32 {
        for i in 1..(1usize << depth) {
            let d = delta_complete_binary(depth, i).unwrap() as u32;
            let e = table.elegance(i as u64);
            assert!(e - 1 <= d && d <= e, "depth {depth}, i {i}: δ {d}, elegance {e}");
        }
    }
}

// Equality δ = elegance holds on every depth up to 10 for i <= 2^(k−2); it
// fails already at i = 5 on B_3 and at i = 26 on B_6.
#[test]
fn small_prefix_equality_threshold() {
    let table = elegance_table(1 << 10);
    for depth in 2..=10u32 {
        for i in 1..=(1usize << (depth - 2)) {
            assert_eq!(delta_complete_binary(depth, i).unwrap() as u32, table.elegance(i as u64), "depth {depth}, i {i}");
        }
    }
    assert_eq!(delta_complete_binary(3, 5).unwrap(), 2);
    assert_eq!(elegance(5).elegance, 3);
    assert_eq!(delta_complete_binary(6, 26).unwrap() as u32, elegance(26).elegance - 1);
}

#[test]
fn inorder_crossings_count_edges_directly() {
    for depth in 1..=7u32 {
        let n = (1usize << (depth + 1)) - 1;
        let order = inorder_sequence(depth);
        let alloc = Allocation::from_order(&order).unwrap();
        for zeros in 1..n {
            let inst = two_valued_instance(depth, zeros).unwrap();
            let e = envy(&inst, &alloc).unwrap();
            assert_eq!(e, BigUint::from(inorder_crossings(depth, zeros)), "depth {depth}, zeros {zeros}");
            if zeros < 1 << depth {
                assert_eq!(inorder_crossings(depth, zeros), runs(zeros as u64));
            }
        }
    }
}

fn inorder_crossing_profile(depth: u32) -> Vec<usize> {
    let inst = two_valued_instance(depth, 1).unwrap();
    let alloc = Allocation::from_order(&inorder_sequence(depth)).unwrap();
    gha_core::prefix_cut_profile(&inst, &alloc).unwrap().cuts
}

// The recurrence holds as f(2^k + i) = f(2^k − i − 1) + 1 for
// 0 <= i <= 2^k − 2; the variant with 2^k − i + 1 on the right fails at k = 1.
#[test]
fn inorder_recurrence() {
    let cuts = inorder_crossing_profile(12);
    let f = |i: usize| cuts[i - 1];
    for k in 1..=10u32 {
        let p = 1usize << k;
        for i in 0..=p - 2 {
            assert_eq!(f(p + i), f(p - i - 1) + 1, "k {k}, i {i}");
        }
        for i in 1..p {
            assert_eq!(f(i), runs(i as u64) as usize);
        }
    }
    assert_ne!(f(3), f(2) + 1);
}

#[test]
fn inorder_small_examples() {
    let h = HouseValues::from_u64s(&[0, 0, 0, 1, 1, 1, 1]).unwrap();
    assert_eq!(inorder_allocation(2, &h).unwrap().1.achieved_envy, BigUint::from(1u8));
    let mut v = vec![0u64; 5];
    v.extend([1; 10]);
    let (_, cert) = inorder_allocation(3, &HouseValues::from_u64s(&v).unwrap()).unwrap();
    assert_eq!(cert.achieved_envy, BigUint::from(3u8));
    assert_eq!(solve_exact_dp(&two_valued_instance(3, 5).unwrap()).unwrap().optimal_envy, BigUint::from(2u8));
}

#[test]
fn gap_pair_structure() {
    let (a, b) = value_agnostic_gap_instances(7).unwrap();
    let order = Allocation::from_order(&inorder_sequence(7)).unwrap();
    assert_eq!(envy(&a, &order).unwrap(), BigUint::from(5u8));
    assert_eq!(envy(&b, &order).unwrap(), BigUint::from(4u8));
    assert_eq!(delta_complete_binary(7, 89).unwrap(), 3);
    assert_eq!(delta_complete_binary(7, 94).unwrap(), 2);
    // Every 94-set cut by two edges is a 63-subtree plus a 31-subtree, so it
    // contains no root of a 127-vertex subtree.
    let sets = two_edge_cut_sets(7, 94);
    assert!(!sets.is_empty());
    let roots127 = [1usize, 2];
    for s in &sets {
        assert!(roots127.iter().all(|r| !s.contains(r)));
        let roots: Vec<usize> = s.iter().copied().filter(|&v| v == 0 || !s.contains(&((v - 1) / 2))).collect();
        let mut sizes: Vec<usize> = roots.iter().map(|&r| subtree_vertices(7, r).len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![31, 63]);
    }
    assert!(value_agnostic_gap_instances(5).is_err());
}

#[test]
fn example_instance_optimum_and_median() {
    let inst = example_instance();
    let opt = solve_exact_dp(&inst).unwrap();
    assert_eq!(opt.optimal_envy, BigUint::from(5u8));
    let median = example_allocation(&EXAMPLE_MEDIAN_VALUES);
    assert_eq!(envy(&inst, &median).unwrap(), BigUint::from(6u8));
    assert!(has_global_median_property(&inst, &median).unwrap());
    let improved = example_allocation(&EXAMPLE_IMPROVED_VALUES);
    assert_eq!(envy(&inst, &improved).unwrap(), BigUint::from(5u8));
    assert!(!has_global_median_property(&inst, &improved).unwrap());
    let optimal = enumerate_value_patterns(&inst, &opt.optimal_envy, 10_000).unwrap();
    assert!(!optimal.is_empty());
    for a in &optimal {
        assert_eq!(envy(&inst, a).unwrap(), opt.optimal_envy);
        assert!(!has_global_median_property(&inst, a).unwrap());
    }
}

#[test]
fn bounded_run_bounds() {
    let table = elegance_table(1 << 16);
    for i in 1..=(1u64 << 16) {
        let r = table.elegance(i);
        assert!(runs(i) <= 3 * r - 2, "i {i}");
        if r >= 2 {
            assert!(runs(i) <= refined_run_bound(r), "i {i}");
        }
    }
}
