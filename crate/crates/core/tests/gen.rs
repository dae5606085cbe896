use std::path::PathBuf;

use activetime::gen::*;
use activetime::model::{instance_to_value, pretty};
use activetime::oracle::{brute_min_active, exact_cover_exists};
use activetime::preempt::preemption_gap;
use activetime::rational::{int, Rational};
use proptest::prelude::*;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[test]
fn splitmix_reference_values() {
    let mut rng = SplitMix64::seed_from_u64(1477776061723855037);
    assert_eq!(rng.next_u64(), 1985237415132408290);
    assert_eq!(rng.next_u64(), 2979275885539914483);
}

#[test]
fn random_snapshot() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/random_n3_t4_b2_seed1.json");
    let spec = RandomSpec { n: 3, horizon: 4, b: 2, seed: 1, ..Default::default() };
    let text = pretty(&instance_to_value(&gen_random(&spec).unwrap()));
    assert_eq!(text, std::fs::read_to_string(path).unwrap());
}

#[test]
fn slot_sets_and_grids() {
    let spec = RandomSpec { n: 40, region: RegionKind::SlotSet, max_length: 3, density: 30, seed: 9, ..Default::default() };
    let inst = gen_random(&spec).unwrap();
    assert!(inst.jobs().iter().all(|j| !j.feasible_slots().is_empty() && (1..=3).contains(&j.length)));
    let spec = RandomSpec { n: 40, grid: 2, seed: 3, ..Default::default() };
    let inst = gen_random(&spec).unwrap();
    assert!(inst.jobs().iter().all(|j| {
        let w = j.single_window().unwrap();
        (w.release * int(2)).is_integer() && w.deadline <= int(6)
    }));
    assert!(gen_random(&RandomSpec { grid: 2, max_length: 2, ..Default::default() }).is_err());
}

#[test]
fn xc3_examples() {
    let yes = from_3xc(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [4, 5, 6]]).unwrap();
    assert_eq!(brute_min_active(&yes).unwrap().value, 2);
    let no = from_3xc(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [3, 4, 5], [5, 6, 1]]).unwrap();
    assert_eq!(brute_min_active(&no).unwrap().value, 3);
    let one = from_3xc(&[1, 2, 3], &[[1, 2, 3]]).unwrap();
    assert_eq!(brute_min_active(&one).unwrap().value, 1);
}

#[test]
fn tight_family_gap() {
    for k in 1..=3 {
        let g = preemption_gap(&tight_gap_family(k).unwrap()).unwrap();
        assert_eq!(g.integral, int(2 * k as i64));
        assert_eq!(g.preemptive, Rational::new(3 * k as i64, 2));
        assert_eq!(g.ratio, Rational::new(4, 3));
        assert_eq!(g.pi, k);
    }
}

fn arb_3xc() -> impl Strategy<Value = (Vec<u32>, Vec<[u32; 3]>)> {
    (1usize..=3).prop_flat_map(|m| {
        let n = 3 * m as u32;
        let triple = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3)
            .prop_map(|v| [v[0], v[1], v[2]]);
        (Just((0..n).collect::<Vec<_>>()), proptest::collection::vec(triple, 1..=5))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn xc3_reduction_round_trip((elements, triples) in arb_3xc()) {
        let Ok(inst) = from_3xc(&elements, &triples) else {
            // an element outside every triple: no exact cover either
            prop_assert!(!exact_cover_exists(&elements, &triples));
            return Ok(());
        };
        let target = elements.len() / 3;
        let best = brute_min_active(&inst).unwrap().value;
        prop_assert_eq!(best == target, exact_cover_exists(&elements, &triples));
        prop_assert!(best >= target);
    }

    #[test]
    fn same_seed_same_bytes(seed in any::<u64>(), n in 0usize..12) {
        let spec = RandomSpec { n, seed, region: RegionKind::SlotSet, ..Default::default() };
        let a = pretty(&instance_to_value(&gen_random(&spec).unwrap()));
        let b = pretty(&instance_to_value(&gen_random(&spec).unwrap()));
        prop_assert_eq!(a, b);
    }
}
