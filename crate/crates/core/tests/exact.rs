use gha_core::approx::{heuristic_layout, layout_allocation, trickle_down, Layout, LayoutStrategy};
use gha_core::cuts::{center_of_gravity, cut_size, min_cut_k_bruteforce, min_cut_profile_bruteforce};
use gha_core::exact::*;
use gha_core::{envy, prefix_cut_profile, validate_instance, Allocation, Caps, Error, Graph, HouseValues, Instance};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn inst(g: Graph, values: &[u64]) -> Instance {
    Instance::new(g, HouseValues::from_u64s(values).unwrap()).unwrap()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Minimum envy over all n! assignments via Heap's algorithm, separate from
/// the library's lexicographic sweep.
fn heap_min(instance: &Instance) -> BigUint {
    let n = instance.n();
    let mut a: Vec<usize> = (0..n).collect();
    let eval = |a: &[usize]| envy(instance, &Allocation::new(a.to_vec()).unwrap()).unwrap();
    let mut best = eval(&a);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            best = best.min(eval(&a));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn all_layout_widths_min(g: &Graph) -> usize {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    loop {
        best = best.min(Layout::new(g, order.clone()).unwrap().width());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| order[i - 1] < order[i]) else { break };
        let j = (i..n).rev().find(|&j| order[j] > order[i - 1]).unwrap();
        order.swap(i - 1, j);
        order[i..].reverse();
    }
    best
}

#[test]
fn validation_examples() {
    let ok = validate_instance(2, vec![(0, 1)], vec![big(0), big(1)]).unwrap();
    assert!(ok.is_connected());
    assert!(matches!(
        validate_instance(2, vec![(0, 0)], vec![big(0), big(1)]),
        Err(Error::SelfLoop { edge: 0, vertex: 0 })
    ));
    assert!(matches!(
        validate_instance(3, vec![(0, 1), (1, 0)], vec![big(0); 3]),
        Err(Error::DuplicateEdge { edge: 1, .. })
    ));
    assert!(matches!(validate_instance(2, vec![], vec![big(0)]), Err(Error::LengthMismatch { expected: 2, found: 1 })));
    assert!(matches!(
        validate_instance(2, vec![], vec![big(3), big(1)]),
        Err(Error::UnsortedValues { index: 1 })
    ));
    let k2k3 = validate_instance(5, vec![(0, 1), (2, 3), (3, 4), (2, 4)], vec![big(0); 5]).unwrap();
    assert!(!k2k3.is_connected());
}

#[test]
fn envy_and_profile_examples() {
    let p3 = inst(Graph::path(3), &[0, 1, 5]);
    let sorted = Allocation::identity(3);
    assert_eq!(prefix_cut_profile(&p3, &sorted).unwrap().cuts, vec![1, 1]);
    assert_eq!(envy(&p3, &sorted).unwrap(), big(5));

    // Leaves hold houses 0, 1, 2 and the centre holds 10.
    let star = inst(Graph::star(3), &[0, 1, 2, 10]);
    let center_top = Allocation::new(vec![3, 0, 1, 2]).unwrap();
    assert_eq!(prefix_cut_profile(&star, &center_top).unwrap().cuts, vec![1, 2, 3]);
    assert_eq!(envy(&star, &center_top).unwrap(), big(27));

    let flat = inst(Graph::complete(5), &[7; 5]);
    assert_eq!(envy(&flat, &Allocation::new(vec![4, 2, 0, 1, 3]).unwrap()).unwrap(), big(0));
    assert!(matches!(Allocation::new(vec![0, 0, 1]), Err(Error::NotABijection { .. })));
    assert!(envy(&p3, &Allocation::identity(4)).is_err());
}

#[test]
fn cut_examples() {
    let k4 = Graph::complete(4);
    assert_eq!(cut_size(&k4, &[1, 3]).unwrap(), 4);
    assert_eq!(cut_size(&Graph::grid(2, 3), &[0, 1, 2]).unwrap(), 3);
    let b3 = Graph::complete_binary_tree(3);
    assert_eq!(cut_size(&b3, &[1, 3, 4, 7, 8, 9, 10]).unwrap(), 1);
    assert!(matches!(cut_size(&k4, &[4]), Err(Error::VertexOutOfRange { vertex: 4, n: 4 })));
    assert_eq!(min_cut_k_bruteforce(&Graph::path(5), 2).unwrap().1, 1);
    assert_eq!(min_cut_k_bruteforce(&Graph::cycle(6).unwrap(), 3).unwrap().1, 2);
    let (set, d) = min_cut_k_bruteforce(&b3, 5).unwrap();
    assert_eq!(d, 2);
    assert_eq!(set.len(), 5);
    assert_eq!(cut_size(&b3, &set).unwrap(), 2);
    assert!(matches!(min_cut_k_bruteforce(&Graph::path(30), 3), Err(Error::TooLarge { n: 30, .. })));
}

#[test]
fn center_of_gravity_examples() {
    assert_eq!(center_of_gravity(&Graph::path(3)).unwrap(), 1);
    assert_eq!(center_of_gravity(&Graph::star(6)).unwrap(), 0);
    assert!(matches!(center_of_gravity(&Graph::cycle(4).unwrap()), Err(Error::NotATree)));
}

#[test]
fn solver_examples() {
    assert_eq!(solve_exact_dp(&inst(Graph::path(3), &[0, 1, 5])).unwrap().optimal_envy, big(5));
    assert_eq!(solve_exact_dp(&inst(Graph::star(3), &[0, 1, 2, 10])).unwrap().optimal_envy, big(11));
    assert_eq!(solve_exact_bruteforce(&inst(Graph::path(1), &[4])).unwrap().optimal_envy, big(0));
    let c4 = inst(Graph::cycle(4).unwrap(), &[0, 1, 2, 3]);
    assert_eq!(solve_exact_bruteforce(&c4).unwrap().optimal_envy, big(6));
    assert_eq!(heap_min(&c4), big(6));
}

#[test]
fn solvers_match_heap_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in 0..300u64 {
        let n = 1 + (t % 8) as usize;
        let g = Graph::random_connected(n, 0.35, &mut rng);
        let mut v: Vec<u64> = (0..n as u64).map(|i| (i * 37 + t * 11) % 50).collect();
        v.sort_unstable();
        let instance = inst(g, &v);
        let oracle = heap_min(&instance);
        let dp = solve_exact_dp(&instance).unwrap();
        assert_eq!(dp.optimal_envy, oracle);
        assert_eq!(envy(&instance, &dp.witness).unwrap(), oracle);
        assert_eq!(solve_exact_bruteforce(&instance).unwrap().optimal_envy, oracle);
    }
}

#[test]
fn bruteforce_witness_is_lexicographically_first() {
    let c4 = inst(Graph::cycle(4).unwrap(), &[0, 1, 2, 3]);
    let r = solve_exact_bruteforce(&c4).unwrap();
    assert_eq!(r.witness.assignment(), &[0, 1, 2, 3]);
}

#[test]
fn big_value_instances_use_exact_arithmetic() {
    let huge = BigUint::from(1u8) << 200u32;
    let values = vec![big(0), big(1), huge.clone(), &huge + 1u8, &huge << 3u32];
    let instance = Instance::new(Graph::cycle(5).unwrap(), HouseValues::new(values).unwrap()).unwrap();
    let dp = solve_exact_dp(&instance).unwrap();
    assert_eq!(dp.optimal_envy, heap_min(&instance));
    assert_eq!(dp.optimal_envy, (&huge << 3u32) * 2u8);
}

#[test]
fn caps_are_enforced() {
    let p = inst(Graph::path(23), &[0; 23]);
    assert!(matches!(solve_exact_dp(&p), Err(Error::TooLarge { n: 23, cap: 22 })));
    assert!(solve_exact_dp_capped(&p, 23).is_ok());
    let q = inst(Graph::path(11), &[0; 11]);
    assert!(matches!(solve_exact_bruteforce(&q), Err(Error::TooLarge { n: 11, cap: 10 })));
    assert!(matches!(cutwidth_exact_small(&Graph::path(13)), Err(Error::TooLarge { .. })));
    assert_eq!(Caps::default(), Caps { min_cut: 24, dp: 22, brute: 10, cutwidth: 12 });
}

#[test]
fn tree_cut_examples() {
    let b5 = Graph::complete_binary_tree(5);
    assert_eq!(tree_min_cut_k(&b5, 5).unwrap(), 3);
    for k in [1, 3, 7, 15, 31] {
        assert_eq!(tree_min_cut_k(&b5, k).unwrap(), 1);
    }
    assert!(matches!(tree_min_cut_k(&Graph::cycle(5).unwrap(), 2), Err(Error::NotATree)));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=16 {
        let t = Graph::random_prufer_tree(n, &mut rng);
        assert_eq!(tree_min_cut_profile(&t).unwrap(), min_cut_profile_bruteforce(&t).unwrap());
    }
}

#[test]
fn cutwidth_matches_enumeration() {
    let k4 = Graph::complete(4);
    assert_eq!(cutwidth_exact_small(&k4).unwrap().width(), 4);
    assert_eq!(all_layout_widths_min(&k4), 4);
    assert_eq!(cutwidth_exact_small(&Graph::complete(5)).unwrap().width(), 6);
    assert_eq!(cutwidth_exact_small(&Graph::path(9)).unwrap().width(), 1);
    let grid = Graph::grid(2, 3);
    assert_eq!(cutwidth_exact_small(&grid).unwrap().width(), all_layout_widths_min(&grid));
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..30 {
        let g = Graph::random_connected(7, 0.5, &mut rng);
        let layout = cutwidth_exact_small(&g).unwrap();
        assert_eq!(layout.width(), all_layout_widths_min(&g));
        assert_eq!(Layout::new(&g, layout.order().to_vec()).unwrap().width(), layout.width());
    }
}

#[test]
fn approximation_examples() {
    let (alloc, cert) = trickle_down(&Graph::path(3), &HouseValues::from_u64s(&[0, 1, 2]).unwrap()).unwrap();
    assert_eq!(alloc.house_of(1), 2);
    assert_eq!(cert.achieved_envy, big(3));
    let (_, cert) = trickle_down(&Graph::path(1), &HouseValues::from_u64s(&[9]).unwrap()).unwrap();
    assert_eq!(cert.achieved_envy, big(0));
    assert!(matches!(
        trickle_down(&Graph::cycle(3).unwrap(), &HouseValues::from_u64s(&[0, 1, 2]).unwrap()),
        Err(Error::NotATree)
    ));
    assert!(matches!(
        trickle_down(&Graph::empty(2), &HouseValues::from_u64s(&[0, 1]).unwrap()),
        Err(Error::Disconnected)
    ));

    let p4 = inst(Graph::path(4), &[0, 2, 5, 9]);
    let (_, cert) = layout_allocation(&p4, &Layout::new(p4.graph(), vec![0, 1, 2, 3]).unwrap()).unwrap();
    assert_eq!((cert.achieved_envy.clone(), cert.guarantee_bound.clone()), (big(9), big(9)));

    let c5 = inst(Graph::cycle(5).unwrap(), &[0, 1, 2, 3, 4]);
    let (_, cert) = layout_allocation(&c5, &Layout::new(c5.graph(), (0..5).collect()).unwrap()).unwrap();
    assert_eq!((cert.achieved_envy.clone(), cert.guarantee_bound.clone()), (big(8), big(8)));

    let b3 = Graph::complete_binary_tree(3);
    let w = heuristic_layout(&b3, LayoutStrategy::TreeTrickleOrder).unwrap().width();
    assert!(w <= 3 * 4);
    assert_eq!(heuristic_layout(&Graph::path(6), LayoutStrategy::BfsOrder).unwrap().width(), 1);
    assert_eq!(heuristic_layout(&Graph::complete(5), LayoutStrategy::ExactSmall).unwrap().width(), 6);
    assert!(matches!(heuristic_layout(&Graph::cycle(4).unwrap(), LayoutStrategy::TreeTrickleOrder), Err(Error::NotATree)));
}

#[test]
fn trickle_ratio_on_small_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for t in 0..60u64 {
        let n = 2 + (t % 12) as usize;
        let tree = Graph::random_prufer_tree(n, &mut rng);
        let v: Vec<u64> = (0..n as u64).map(|i| i * i + t).collect();
        let instance = inst(tree.clone(), &v);
        let (_, cert) = trickle_down(&tree, instance.houses()).unwrap();
        let opt = solve_exact_dp(&instance).unwrap().optimal_envy;
        let ratio = cert.achieved_envy.to_string().parse::<f64>().unwrap() / opt.to_string().parse::<f64>().unwrap();
        assert!(ratio <= tree.max_degree() as f64 * (n as f64).log2() + 1e-9, "n {n}: ratio {ratio}");
    }
}
