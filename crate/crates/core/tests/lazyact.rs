use activetime::lazyact::*;
use activetime::model::{validate_integral, Instance};
use activetime::oracle::{brute_max_throughput, brute_min_active};
use proptest::prelude::*;

fn arb_windows(max_n: usize, max_t: i64) -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec(
        (0..max_t).prop_flat_map(move |r| (Just(r), r + 1..=max_t)),
        0..=max_n,
    )
}

fn arb_instance(max_n: usize, max_t: i64, max_b: u32) -> impl Strategy<Value = Instance> {
    (arb_windows(max_n, max_t), 1..=max_b).prop_map(|(w, b)| Instance::unit_windows(b, &w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn adjusters_agree(inst in arb_instance(12, 12, 4)) {
        let a = phase1_adjust(&inst).unwrap();
        prop_assert_eq!(&a, &phase1_dsu(&inst).unwrap());
        // no adjusted deadline exceeds the original, none is shared by more than B jobs
        let w = unit_windows(&inst).unwrap();
        for (j, &(_, d)) in inst.jobs().iter().zip(&w) {
            prop_assert!(a.adjusted_deadline[&j.id] <= d);
        }
        prop_assert!(a.deadline_loads().values().all(|&c| c <= inst.b() as usize));
    }

    #[test]
    fn adjusters_agree_on_long_horizons(w in arb_windows(10, 6), stretch in 1i64..1000, b in 1u32..4) {
        let w: Vec<(i64, i64)> = w.into_iter().map(|(r, d)| (r * stretch, d * stretch)).collect();
        let inst = Instance::unit_windows(b, &w).unwrap();
        prop_assert_eq!(phase1_adjust(&inst).unwrap(), phase1_dsu(&inst).unwrap());
        prop_assert_eq!(lazy_activation(&inst).unwrap(), lazy_activation_linear(&inst).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lazy_matches_oracle(inst in arb_instance(8, 8, 3)) {
        let s = lazy_activation(&inst).unwrap();
        let rep = validate_integral(&inst, &s);
        prop_assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        let oracle = brute_min_active(&inst).unwrap();
        prop_assert_eq!(s.jobs_scheduled(), oracle.witness.jobs_scheduled());
        prop_assert_eq!(s.active_time(), oracle.value);
        let full = brute_max_throughput(&inst, usize::MAX).unwrap().value;
        prop_assert_eq!(s.jobs_scheduled(), full);
        prop_assert_eq!(&s, &lazy_activation_linear(&inst).unwrap());
    }

    #[test]
    fn adjusted_instance_keeps_optimum(inst in arb_instance(8, 8, 3)) {
        let a = phase1_adjust(&inst).unwrap();
        let adj = a.to_instance();
        let orig = brute_min_active(&inst).unwrap();
        let after = brute_min_active(&adj).unwrap();
        prop_assert_eq!(orig.value, after.value);
        prop_assert_eq!(orig.witness.jobs_scheduled(), adj.len());
    }

    #[test]
    fn active_slots_are_adjusted_deadlines(inst in arb_instance(10, 10, 3)) {
        let a = phase1_adjust(&inst).unwrap();
        let deadlines: std::collections::BTreeSet<i64> =
            a.deadline_loads().keys().copied().collect();
        for s in lazy_activation(&inst).unwrap().active_slots() {
            prop_assert!(deadlines.contains(&(s as i64 + 1)));
        }
    }

    #[test]
    fn collapse_intervals_are_overloaded(inst in arb_instance(10, 8, 3)) {
        let rec = collapse_record(&inst).unwrap();
        let feasible = edf_feasibility(&inst).unwrap();
        prop_assert_eq!(feasible, rec.collapsed_jobs.is_empty());
        for iv in &rec.excess_intervals {
            prop_assert!(iv.jobs.len() as i64 > inst.b() as i64 * iv.len());
        }
    }
}

#[test]
fn large_instance_is_fast() {
    let n = 5000;
    let w: Vec<(i64, i64)> = (0..n).map(|i| ((i * 7) % 3000, (i * 7) % 3000 + 1 + (i * 13) % 40)).collect();
    let inst = Instance::unit_windows(3, &w).unwrap();
    let start = std::time::Instant::now();
    let s = lazy_activation_linear(&inst).unwrap();
    let r = lazy_activation(&inst).unwrap();
    assert!(start.elapsed().as_secs_f64() < 2.0);
    assert_eq!(s, r);
    assert!(validate_integral(&inst, &s).violations.is_empty());
}
