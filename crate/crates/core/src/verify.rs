//! Fast self-checks grouped into suites, used by `gha verify`.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{inorder_allocation, trickle_down};
use crate::cuts::min_cut_profile_bruteforce;
use crate::error::{Error, Result};
use crate::exact::{solve_exact_bruteforce, solve_exact_dp, tree_min_cut_profile};
use crate::gadgets::{
    build_flower, check_grid_cut_lemma, envy_yes_threshold, flower_conditions_hold, gen_bounded_tree_instance,
    gen_clique, gen_depth2_tree, gen_grid, hub_yes_bound, yes_allocation, BoundedTreeOptions, PartitionWitness,
    ThreePartitionInstance,
};
use crate::graph::Graph;
use crate::instance::{envy, prefix_cut_profile, HouseValues, Instance};
use crate::random::{concentration_check, epsilon_threshold, sample_gnp_half};
use crate::repunit::{
    delta_profile_complete_binary, elegance_table, example_allocation, example_instance, inorder_crossings, runs,
    EXAMPLE_IMPROVED_VALUES, EXAMPLE_MEDIAN_VALUES,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, outcome: Result<(bool, String)>) -> CheckResult {
    match outcome {
        Ok((passed, detail)) => CheckResult { name: name.into(), passed, detail },
        Err(e) => CheckResult { name: name.into(), passed: false, detail: format!("error: {e}") },
    }
}

pub const SUITES: [&str; 4] = ["core", "repunit", "gadgets", "random"];

pub fn run_suite(name: &str) -> Result<Vec<CheckResult>> {
    match name {
        "core" => Ok(core_suite()),
        "repunit" => Ok(repunit_suite()),
        "gadgets" => Ok(gadget_suite()),
        "random" => Ok(random_suite()),
        other => Err(Error::BadParameters(format!("unknown suite {other:?}; expected one of {SUITES:?}"))),
    }
}

fn core_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(check("star-profile", (|| {
        let inst = Instance::new(Graph::star(3), HouseValues::from_u64s(&[0, 0, 0, 10])?)?;
        let alloc = crate::instance::Allocation::new(vec![3, 0, 1, 2])?;
        let p = prefix_cut_profile(&inst, &alloc)?;
        let e = envy(&inst, &alloc)?;
        Ok((p.cuts == [1, 2, 3] && e == BigUint::from(30u8), format!("profile {:?}, envy {e}", p.cuts)))
    })()));
    out.push(check("dp-matches-bruteforce", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..40u64 {
            let n = 3 + (t % 6) as usize;
            let g = Graph::random_connected(n, 0.4, &mut rng);
            let vals: Vec<u64> = (0..n as u64).map(|i| i * i + t).collect();
            let inst = Instance::new(g, HouseValues::from_u64s(&vals)?)?;
            let a = solve_exact_dp(&inst)?.optimal_envy;
            let b = solve_exact_bruteforce(&inst)?.optimal_envy;
            if a != b {
                return Ok((false, format!("trial {t}: dp {a} vs brute {b}")));
            }
        }
        Ok((true, "40 random instances agree".into()))
    })()));
    out.push(check("tree-profile-matches-bruteforce", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let t = Graph::random_prufer_tree(12, &mut rng);
            let dp = tree_min_cut_profile(&t)?;
            let bf = min_cut_profile_bruteforce(&t)?;
            if dp != bf {
                return Ok((false, format!("dp {dp:?} vs brute {bf:?}")));
            }
        }
        Ok((true, "20 trees on 12 vertices".into()))
    })()));
    out.push(check("trickle-certificate", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = Graph::random_prufer_tree(200, &mut rng);
            let vals: Vec<u64> = (0..200).collect();
            let (_, cert) = trickle_down(&t, &HouseValues::from_u64s(&vals)?)?;
            if !cert.holds() {
                return Ok((false, format!("envy {} above {}", cert.achieved_envy, cert.guarantee_bound)));
            }
        }
        Ok((true, "50 trees on 200 vertices".into()))
    })()));
    out
}

fn repunit_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(check("elegance-values", {
        let t = elegance_table(100);
        let got: Vec<u32> = (1..=20).map(|m| t.elegance(m)).collect();
        let table = [1, 2, 1, 2, 3, 2, 1, 2, 3, 2, 3, 2, 3, 2, 1, 2, 3, 2, 3, 4];
        let ok = got == table && t.elegance(89) == 3 && t.elegance(94) == 2;
        Ok((ok, format!("1..=20: {got:?}")))
    }));
    out.push(check("example-allocations", (|| {
        let inst = example_instance();
        let median = envy(&inst, &example_allocation(&EXAMPLE_MEDIAN_VALUES))?;
        let better = envy(&inst, &example_allocation(&EXAMPLE_IMPROVED_VALUES))?;
        let opt = solve_exact_dp(&inst)?.optimal_envy;
        let ok = median == BigUint::from(6u8) && better == BigUint::from(5u8) && opt == better;
        Ok((ok, format!("median {median}, improved {better}, optimum {opt}")))
    })()));
    out.push(check("inorder-crossings", (|| {
        for depth in 1..=8u32 {
            let n = (1usize << (depth + 1)) - 1;
            for i in 1..n {
                let e = runs(i.min(n - i) as u64);
                if inorder_crossings(depth, i) != e {
                    return Ok((false, format!("depth {depth}, prefix {i}")));
                }
            }
        }
        Ok((true, "depths 1..=8".into()))
    })()));
    out.push(check("inorder-certificate", (|| {
        for depth in 1..=10u32 {
            let n = (1usize << (depth + 1)) - 1;
            let vals: Vec<u64> = (0..n as u64).collect();
            let (_, cert) = inorder_allocation(depth, &HouseValues::from_u64s(&vals)?)?;
            if !cert.holds() {
                return Ok((false, format!("depth {depth}")));
            }
            let profile = delta_profile_complete_binary(depth);
            if profile[1] != 1 {
                return Ok((false, format!("depth {depth}: leaf cut {}", profile[1])));
            }
        }
        Ok((true, "depths 1..=10".into()))
    })()));
    out
}

fn gadget_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let tp = ThreePartitionInstance::new(vec![1, 1, 2, 1, 1, 2], 2, 4).expect("valid");
    let w = PartitionWitness { triplets: vec![[0, 1, 2], [3, 4, 5]] };
    for (name, gen) in [
        ("depth2-yes", gen_depth2_tree as fn(&ThreePartitionInstance, usize) -> Result<_>),
        ("clique-yes", gen_clique),
        ("grid-yes", gen_grid),
    ] {
        out.push(check(name, (|| {
            let g = gen(&tp, 2)?;
            let e = envy(&g.instance, &yes_allocation(&g, &w)?)?;
            let bound = BigUint::from(hub_yes_bound(&tp));
            Ok((e <= bound, format!("envy {e}, bound {bound}")))
        })()));
    }
    out.push(check("bounded-tree-yes", (|| {
        let tp = ThreePartitionInstance::new(vec![2, 2, 4], 1, 8)?;
        let opts = BoundedTreeOptions { enforce_scale: false, ..Default::default() };
        let g = gen_bounded_tree_instance(&tp, &opts)?;
        let w = PartitionWitness { triplets: vec![[0, 1, 2]] };
        let e = envy(&g.instance, &yes_allocation(&g, &w)?)?;
        let bound = envy_yes_threshold(&tp);
        Ok((e <= bound, format!("n {}, envy <= threshold: {}", g.instance.n(), e <= bound)))
    })()));
    out.push(check("flower-conditions", (|| {
        for k in [3usize, 4, 5, 99] {
            for n in 1..300 {
                if !flower_conditions_hold(&build_flower(n, k)?) {
                    return Ok((false, format!("F({n}, {k})")));
                }
            }
        }
        Ok((true, "n < 300, k in {3, 4, 5, 99}".into()))
    })()));
    out.push(check("grid-cut-lemma", (|| {
        let rep = check_grid_cut_lemma(3, 4, 12, 0, 0)?;
        Ok((rep.violations == 0, format!("{} subsets, {} violations", rep.subsets_checked, rep.violations)))
    })()));
    out
}

fn random_suite() -> Vec<CheckResult> {
    vec![check("concentration", (|| {
        let n = 400;
        let g = sample_gnp_half(n, 1);
        let rep = concentration_check(&g, epsilon_threshold(n), 2000, 1)?;
        Ok((rep.violations == 0, format!("{} samples, {} violations", rep.samples, rep.violations)))
    })())]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for s in SUITES {
            for r in run_suite(s).unwrap() {
                assert!(r.passed, "{s}/{}: {}", r.name, r.detail);
            }
        }
        assert!(run_suite("nope").is_err());
    }
}
