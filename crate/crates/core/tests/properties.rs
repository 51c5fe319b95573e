//! Property tests over random instances. Graph shapes come from the seeded
//! generators so shrinking works on the seed and sizes.

use nicer_ears_core::approx::{
    connected_tjoin_3_2, drop_trivial_ears, ms_tour, nice_muffed_decomposition, pairing_keeps_connectivity, removable_pairing_from_ears,
    tour_from_2ecss, tsp_7_5, two_ecss_4_3,
};
use nicer_ears_core::bounds::{l_mu, l_phi, lambda};
use nicer_ears_core::ears::{check_nice, min_even_ear_decomposition, open_ear_decomposition, SearchLimits};
use nicer_ears_core::generate::{random_2ec, random_2vc, random_even_t, rng};
use nicer_ears_core::graph::parse_graph;
use nicer_ears_core::lp::{lp_2ec, LpLimits, Q};
use nicer_ears_core::matching::min_weight_perfect_matching;
use nicer_ears_core::oracle::{mu_oracle, opt_connected_tjoin, phi_oracle, OracleLimits};
use nicer_ears_core::tjoin::tau;
use nicer_ears_core::verify::{parse_solution, verify_solution, write_solution, Problem};
use nicer_ears_core::{Multigraph, Solution};
use proptest::prelude::*;

fn qi(x: usize) -> Q {
    Q::from_integer(x.into())
}

fn edges_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..10).prop_flat_map(|n| {
        let e = (0..n, 0..n).prop_filter("no loops", |(a, b)| a != b);
        (Just(n), prop::collection::vec(e, 0..20))
    })
}

fn brute_matching(n: usize, w: &[Vec<i64>]) -> i64 {
    fn rec(left: &mut Vec<usize>, w: &[Vec<i64>]) -> i64 {
        if left.is_empty() {
            return 0;
        }
        let a = left.remove(0);
        let mut best = i64::MAX;
        for i in 0..left.len() {
            let b = left.remove(i);
            best = best.min(w[a][b] + rec(left, w));
            left.insert(i, b);
        }
        left.insert(0, a);
        best
    }
    rec(&mut (0..n).collect(), w)
}

fn brute_tau(g: &Multigraph, t: &[usize]) -> usize {
    let m = g.m();
    let mut best = usize::MAX;
    for mask in 0u32..(1 << m) {
        let mut odd = vec![false; g.n()];
        for e in (0..m).filter(|e| mask >> e & 1 == 1) {
            let (a, b) = g.edge(e);
            odd[a] ^= true;
            odd[b] ^= true;
        }
        if (0..g.n()).all(|v| odd[v] == t.contains(&v)) {
            best = best.min(mask.count_ones() as usize);
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn instance_text_round_trip((n, es) in edges_strategy(), tmask in any::<u16>()) {
        let g = Multigraph::new(n, es.clone()).unwrap();
        let mut t: Vec<usize> = (0..n).filter(|&v| tmask >> v & 1 == 1).collect();
        if t.len() % 2 == 1 {
            t.pop();
        }
        let inst = parse_graph(&g.to_instance(Some(&t))).unwrap();
        prop_assert_eq!(inst.graph.edges(), &es[..]);
        prop_assert_eq!(inst.graph.n(), n);
        prop_assert_eq!(inst.t, Some(t));
    }

    #[test]
    fn solution_text_round_trip(mult in prop::collection::vec(0u8..=2, 1..30)) {
        let sol = Solution::from_mult(mult.clone());
        let back = parse_solution(&write_solution(&sol), mult.len()).unwrap();
        prop_assert_eq!(back.mult(), &mult[..]);
    }

    #[test]
    fn matching_is_minimum(half in 1usize..5, ws in prop::collection::vec(-20i64..20, 28)) {
        let n = 2 * half;
        let mut w = vec![vec![0i64; n]; n];
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                w[a][b] = ws[k % ws.len()];
                w[b][a] = w[a][b];
                edges.push((a, b, w[a][b]));
                k += 1;
            }
        }
        let (chosen, weight) = min_weight_perfect_matching(n, &edges).unwrap();
        prop_assert_eq!(weight, brute_matching(n, &w));
        prop_assert_eq!(chosen.len(), half);
        let mut covered = vec![false; n];
        for &i in &chosen {
            let (a, b, _) = edges[i];
            prop_assert!(!covered[a] && !covered[b]);
            covered[a] = true;
            covered[b] = true;
        }
        prop_assert_eq!(chosen.iter().map(|&i| edges[i].2).sum::<i64>(), weight);
    }

    #[test]
    fn t_join_is_minimum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_2ec(&mut r, 7);
        prop_assume!(g.m() <= 16);
        let t = random_even_t(&mut r, g.n());
        prop_assert_eq!(tau(&g, &t).unwrap(), brute_tau(&g, &t));
    }

    #[test]
    fn connected_tjoin_is_valid_and_within_ratio(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_2ec(&mut r, 8);
        let t = random_even_t(&mut r, g.n());
        let (sol, tr) = connected_tjoin_3_2(&g, &t).unwrap();
        prop_assert!(verify_solution(&g, &sol, &Problem::Tjoin(t.clone())).ok());
        prop_assert!(tr.lower_bound <= qi(sol.cardinality()));
        for b in tr.blocks.iter().filter(|b| b.method == "ears") {
            prop_assert!(qi(2 * b.cardinality) <= qi(3) * b.lower_bound.clone());
        }
        let (opt, _) = opt_connected_tjoin(&g, &t, &OracleLimits::default()).unwrap();
        prop_assert!(sol.cardinality() >= opt);
    }

    #[test]
    fn tours_are_valid_and_within_ratio(seed in any::<u64>()) {
        let g = random_2ec(&mut rng(seed), 9);
        let (sol, tr) = tsp_7_5(&g).unwrap();
        prop_assert!(verify_solution(&g, &sol, &Problem::Tsp).ok());
        prop_assert!(sol.cardinality() >= g.n());
        for b in tr.blocks.iter().filter(|b| b.method == "ears") {
            prop_assert!(qi(5 * b.cardinality) <= qi(7) * b.lower_bound.clone());
        }
    }

    #[test]
    fn two_ecss_and_reduction(seed in any::<u64>()) {
        let g = random_2ec(&mut rng(seed), 9);
        let (h, tr) = two_ecss_4_3(&g).unwrap();
        prop_assert!(verify_solution(&g, &h, &Problem::TwoEcss).ok());
        prop_assert!(tr.lower_bound <= qi(h.cardinality()));
        let tour = tour_from_2ecss(&g, &h).unwrap();
        prop_assert!(verify_solution(&g, &tour, &Problem::Tsp).ok());
        prop_assert!(3 * tour.cardinality() <= 2 * (h.cardinality() + g.n() - 1));
    }

    #[test]
    fn min_even_search_matches_phi_oracle(seed in any::<u64>()) {
        let g = random_2vc(&mut rng(seed), 9);
        let me = min_even_ear_decomposition(&g).unwrap();
        let (phi, _) = phi_oracle(&g, 10).unwrap();
        prop_assert_eq!(me.phi, phi);
        prop_assert_eq!(me.decomposition.even_count(), phi);
    }

    #[test]
    fn pipeline_is_nice_with_maximum_earmuff(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_2vc(&mut r, 9);
        let t = random_even_t(&mut r, g.n());
        // the algorithms hand small blocks and circuits to the oracle
        prop_assume!(g.n() > 4 && g.m() > g.n());
        let p = nice_muffed_decomposition(&g, &t, &SearchLimits::default()).unwrap();
        check_nice(&g, &p.decomposition, Some(p.phi)).unwrap();
        p.drum.validate(&g, &t).unwrap();
        p.muff.validate(&g, &p.drum).unwrap();
        prop_assert_eq!(p.mu(), mu_oracle(&g, &p.drum, 10_000_000).unwrap());
        let (lmu, w) = l_mu(&g, &p.drum, &t, p.mu(), &p.cert).unwrap();
        prop_assert_eq!(w.verify(&g, &t).unwrap(), lmu);
        prop_assert!(lmu >= g.n() - 1);
        prop_assert!(l_phi(g.n(), p.phi) >= g.n() - 1);
    }

    #[test]
    fn pairings_are_removable(seed in any::<u64>()) {
        let g = random_2vc(&mut rng(seed), 10);
        let d = open_ear_decomposition(&g).unwrap();
        let (gp, dp) = drop_trivial_ears(&g, &d);
        let p = removable_pairing_from_ears(&gp.graph, &dp).unwrap();
        prop_assert!(pairing_keeps_connectivity(&gp.graph, &p).unwrap());
        let tour = ms_tour(&gp.graph, &p).unwrap();
        prop_assert!(3 * tour.cardinality() + 2 * p.r.len() <= 4 * gp.graph.m());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn lower_bounds_below_lp(seed in any::<u64>()) {
        let g = random_2vc(&mut rng(seed), 8);
        prop_assume!(g.n() > 4 && g.m() > g.n());
        let lp = lp_2ec(&g, &LpLimits::default()).unwrap().value;
        prop_assert!(lp >= qi(g.n()));
        let p = nice_muffed_decomposition(&g, &[], &SearchLimits::default()).unwrap();
        let lphi = l_phi(g.n(), p.phi);
        let (lmu, _) = l_mu(&g, &p.drum, &[], p.mu(), &p.cert).unwrap();
        prop_assert!(qi(lphi) <= lp.clone());
        prop_assert!(qi(lmu) <= lp.clone());
        prop_assert!(lambda(lmu, lphi) <= lp);
    }
}
