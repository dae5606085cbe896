use activetime::matchcore::*;
use activetime::oracle::{brute_max_dcs, brute_max_matching};
use proptest::prelude::*;

fn graph_from(n: usize, mask: u64) -> Graph {
    let mut g = Graph::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v);
            }
            bit += 1;
        }
    }
    g
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0.1f64..0.9).prop_map(|(n, seed, p)| {
        let mut g = Graph::new(n);
        let mut x = seed;
        for u in 0..n {
            for v in u + 1..n {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if ((x >> 33) as f64 / (1u64 << 31) as f64) < p {
                    g.add_edge(u, v);
                }
            }
        }
        g
    })
}

#[test]
fn max_matching_exhaustive_up_to_six_vertices() {
    for n in 1..=6usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0u64..1 << pairs {
            let g = graph_from(n, mask);
            let m = max_matching(&g);
            assert!(m.is_valid_in(&g));
            assert_eq!(Some(m.size()), brute_max_matching(&g, &[]).unwrap().value);
        }
    }
}

fn check_forest(g: &Graph) {
    let m = max_matching(g);
    let f = hungarian_forest(g, &m).unwrap();
    assert!(f.property_violations(g, &m).is_empty(), "{:?}", f.property_violations(g, &m));
    for v in 0..g.n() {
        if f.label[v] == Label::Outer {
            let p = f.path_to_root(m.mates(), v);
            assert_eq!(p.len() % 2, 1);
            assert!(m.mate(*p.last().unwrap()).is_none());
            for (i, w) in p.windows(2).enumerate() {
                assert!(g.has_edge(w[0], w[1]));
                assert_eq!(m.mate(w[0]) == Some(w[1]), i % 2 == 0);
            }
        }
    }
    // rotating each top-level blossom to each of its vertices keeps the matching valid
    for b in f.top_blossoms() {
        let mut f2 = f.clone();
        let mut mate = m.mates().to_vec();
        for &v in &f.blossoms[b].vertices.clone() {
            f2.rotate_base(&mut mate, b, v);
            let mm = Matching::from_edges(g.n(), &edges_of(&mate)).unwrap();
            assert!(mm.is_valid_in(g));
            assert!(mate[v].is_none());
            let inside = f.blossoms[b].vertices.iter().filter(|&&x| mate[x].is_some()).count();
            assert_eq!(inside, f.blossoms[b].vertices.len() - 1);
            for &w in &f.blossoms[b].vertices {
                let p = f2.path_to_base(b, w);
                assert_eq!(*p.last().unwrap(), v);
                for (i, e) in p.windows(2).enumerate() {
                    assert!(g.has_edge(e[0], e[1]));
                    assert_eq!(mate[e[0]] == Some(e[1]), i % 2 == 0);
                }
            }
        }
    }
}

fn edges_of(mate: &[Option<usize>]) -> Vec<(usize, usize)> {
    (0..mate.len()).filter_map(|u| mate[u].filter(|&v| u < v).map(|v| (u, v))).collect()
}

#[test]
fn forest_exhaustive_up_to_six_vertices() {
    for n in 1..=6usize {
        for mask in 0u64..1 << (n * (n - 1) / 2) {
            check_forest(&graph_from(n, mask));
        }
    }
}

#[test]
fn petersen_forest_and_covering() {
    let mut g = Graph::new(10);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    check_forest(&g);
    let m = max_matching_covering(&g, &[0, 3, 7]).unwrap();
    assert_eq!(m.size(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn max_matching_random(g in arb_graph(12)) {
        let m = max_matching(&g);
        prop_assert!(m.is_valid_in(&g));
        prop_assert_eq!(Some(m.size()), brute_max_matching(&g, &[]).unwrap().value);
    }

    #[test]
    fn forest_random(g in arb_graph(11)) {
        check_forest(&g);
    }

    #[test]
    fn covering_random(g in arb_graph(8), req_mask in any::<u8>()) {
        let required: Vec<usize> = (0..g.n()).filter(|&v| req_mask >> v & 1 == 1).collect();
        let oracle = brute_max_matching(&g, &required).unwrap().value;
        match max_matching_covering(&g, &required) {
            Ok(m) => {
                prop_assert!(m.is_valid_in(&g));
                prop_assert!(required.iter().all(|&r| m.covers(r)));
                prop_assert_eq!(Some(m.size()), oracle);
                prop_assert_eq!(m.size(), max_matching(&g).size());
            }
            Err(e) => {
                prop_assert_eq!(e, activetime::Error::UncoverableCover);
                prop_assert_eq!(oracle, None);
            }
        }
    }

    #[test]
    fn transfer_keeps_coverage(g in arb_graph(9), seed in any::<u64>()) {
        // a greedy matching in a seeded order as M1
        let mut m1 = Matching::new(g.n());
        let mut edges = g.edges().to_vec();
        let k = edges.len().max(1);
        edges.rotate_left((seed as usize) % k);
        for (u, v) in edges {
            if !m1.covers(u) && !m1.covers(v) {
                m1.join(u, v);
            }
        }
        let m2 = max_matching(&g);
        let m = transfer_coverage(&g, &m1, &m2).unwrap();
        prop_assert!(m.is_valid_in(&g));
        prop_assert_eq!(m.size(), m2.size());
        prop_assert!((0..g.n()).all(|v| !m1.covers(v) || m.covers(v)));
    }

    #[test]
    fn dcs_gadget_matches_brute_force(
        n in 1usize..6, seed in any::<u64>(), loops in any::<u8>(), bounds in proptest::collection::vec(0u32..3, 6)
    ) {
        let mut g = Graph::new(n);
        let mut x = seed;
        'outer: for u in 0..n {
            for v in u + 1..n {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if x >> 62 >= 2 {
                    g.add_edge(u, v);
                }
                if g.edges().len() >= 8 { break 'outer; }
            }
        }
        for v in 0..n {
            if loops >> v & 1 == 1 {
                g.add_loop(v);
            }
        }
        let dg = DegreeBoundedGraph { graph: g, bound: bounds[..n].to_vec() };
        let d = max_dcs(&dg, None).unwrap();
        prop_assert_eq!(d.size(), brute_max_dcs(&dg).unwrap().value);
        let deg = d.degrees(&dg);
        prop_assert!((0..n).all(|v| deg[v] <= dg.bound[v]));
        // seeding with half the result never lowers a degree
        let seed_edges: Vec<usize> = d.edges.iter().copied().step_by(2).collect();
        let sd = max_dcs(&dg, Some(&seed_edges)).unwrap();
        prop_assert_eq!(sd.size(), d.size());
        let sdeg = sd.degrees(&dg);
        let seed_deg = DcsResult { edges: seed_edges, iota: 0, lambda: 0 }.degrees(&dg);
        prop_assert!((0..n).all(|v| sdeg[v] >= seed_deg[v]));
    }
}
