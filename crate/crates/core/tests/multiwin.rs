use activetime::lazyact::lazy_activation;
use activetime::matchcore::max_dcs;
use activetime::model::{validate_integral, Instance, Job};
use activetime::multiwin::*;
use activetime::oracle::{brute_max_throughput, brute_min_active};
use activetime::Error;
use proptest::prelude::*;

fn arb_slot_sets(max_n: usize, slots: u32, max_len: u32) -> impl Strategy<Value = Vec<(u32, Vec<u32>)>> {
    proptest::collection::vec(
        (1..=max_len, proptest::collection::btree_set(0..slots, 1..=slots as usize))
            .prop_map(|(l, s)| (l, s.into_iter().collect())),
        0..=max_n,
    )
}

fn make(b: u32, jobs: Vec<(u32, Vec<u32>)>) -> Instance {
    let jobs = jobs.into_iter().enumerate().map(|(i, (l, s))| Job::slots(format!("j{i:03}"), l, s)).collect();
    Instance::new(b, jobs).unwrap()
}

fn arb_unit_b2() -> impl Strategy<Value = Instance> {
    arb_slot_sets(8, 8, 1).prop_map(|j| make(2, j))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn b2_matches_oracle(inst in arb_unit_b2()) {
        let (s, iota) = solve_b2(&inst).unwrap();
        prop_assert!(validate_integral(&inst, &s).violations.is_empty());
        let oracle = brute_min_active(&inst).unwrap();
        prop_assert_eq!(iota, oracle.witness.jobs_scheduled());
        prop_assert_eq!(s.jobs_scheduled(), iota);
        prop_assert_eq!(s.active_time(), oracle.value);
    }

    #[test]
    fn dcs_size_law(inst in arb_unit_b2()) {
        let ag = build_activation_graph(&inst);
        let base = max_dcs(&ag.loopless(), None).unwrap();
        let full = max_dcs(&ag.graph, Some(&base.edges)).unwrap();
        prop_assert_eq!(full.size(), full.iota + full.lambda);
        prop_assert_eq!(full.iota, base.iota);
        // seeded degrees never fall below the seed's
        let d0 = base.degrees(&ag.graph);
        let d1 = full.degrees(&ag.graph);
        prop_assert!(d0.iter().zip(&d1).all(|(a, b)| b >= a));
        prop_assert!(ag.loops.keys().all(|s| inst.jobs().iter().any(|j| j.is_feasible_slot(*s))));
    }

    #[test]
    fn budget_matches_oracle(inst in arb_unit_b2()) {
        let table = budget_schedules(&inst).unwrap();
        let (_, iota) = solve_b2(&inst).unwrap();
        prop_assert_eq!(table.entries.len(), table.tau1 + table.tau2 + 1);
        prop_assert_eq!(table.entries.last().unwrap().jobs, iota);
        for pair in table.entries.windows(2) {
            prop_assert!(pair[0].jobs <= pair[1].jobs);
        }
        for e in &table.entries {
            prop_assert!(e.schedule.active_time() <= e.alpha);
            prop_assert!(validate_integral(&inst, &e.schedule).violations.is_empty());
            prop_assert_eq!(e.jobs, brute_max_throughput(&inst, e.alpha).unwrap().value);
        }
    }

    #[test]
    fn single_window_agrees_with_lazy(w in proptest::collection::vec((0i64..8).prop_flat_map(|r| (Just(r), r + 1..=8)), 0..=8)) {
        let inst = Instance::unit_windows(2, &w).unwrap();
        let (s, _) = solve_b2(&inst).unwrap();
        prop_assert_eq!(s.active_time(), lazy_activation(&inst).unwrap().active_time());
    }

    #[test]
    fn lengths_match_oracle(jobs in arb_slot_sets(5, 6, 3)) {
        let total: u32 = jobs.iter().map(|(l, _)| *l).sum();
        prop_assume!(total <= 8);
        let inst = make(2, jobs);
        let oracle = brute_min_active(&inst).unwrap();
        let complete = oracle.witness.jobs_scheduled() == inst.len();
        match solve_b2_lengths(&inst) {
            Ok(s) => {
                prop_assert!(complete);
                prop_assert!(validate_integral(&inst, &s).violations.is_empty());
                prop_assert_eq!(s.jobs_scheduled(), inst.len());
                prop_assert_eq!(s.active_time(), oracle.value);
            }
            Err(Error::CompletionInfeasible(_)) => prop_assert!(!complete),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn greedy_within_log_factor(jobs in arb_slot_sets(9, 7, 1)) {
        let inst = make(3, jobs);
        let g = greedy_general_b(&inst).unwrap();
        prop_assert!(validate_integral(&inst, &g).violations.is_empty());
        let oracle = brute_min_active(&inst).unwrap();
        prop_assert_eq!(g.jobs_scheduled(), oracle.witness.jobs_scheduled());
        let n = inst.len().max(1) as f64;
        let factor = (n.ln() + 1.0).ceil() as usize;
        prop_assert!(g.active_time() <= factor * oracle.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// Every maximum schedulable job set needs the same number of slots.
    #[test]
    fn choice_of_jobs_is_irrelevant(jobs in arb_slot_sets(6, 6, 1)) {
        let inst = make(2, jobs);
        let (s, iota) = solve_b2(&inst).unwrap();
        let n = inst.len();
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != iota {
                continue;
            }
            let keep: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let sub = inst.restrict(&keep);
            let o = brute_min_active(&sub).unwrap();
            if o.witness.jobs_scheduled() == iota {
                prop_assert_eq!(o.value, s.active_time());
            }
        }
    }
}
