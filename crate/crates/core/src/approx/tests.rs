use super::*;
use crate::generate::{cycle_st, fig3, fig4, fig5, random_2vc, rng, theta};

fn cycle(n: usize) -> Multigraph {
    Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
}

fn k4() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

#[test]
fn single_edge_tjoin() {
    let g = Multigraph::new(2, vec![(0, 1)]).unwrap();
    let (s, _) = connected_tjoin_3_2(&g, &[0, 1]).unwrap();
    assert_eq!(s.cardinality(), 1);
}

#[test]
fn circuits_are_tours() {
    for n in 3..9 {
        assert_eq!(tsp_7_5(&cycle(n)).unwrap().0.cardinality(), n);
        assert_eq!(two_ecss_4_3(&cycle(n)).unwrap().0.cardinality(), n);
    }
}

#[test]
fn k4_values() {
    assert_eq!(two_ecss_4_3(&k4()).unwrap().0.cardinality(), 4);
    let t = tsp_7_5(&k4()).unwrap().0;
    assert!(t.cardinality() <= 5);
}

#[test]
fn pairing_tour_on_c6() {
    let g = cycle(6);
    let p = RemovablePairing { r: vec![0], pairs: vec![] };
    assert_eq!(ms_tour(&g, &p).unwrap().cardinality(), 6);
}

#[test]
fn doubled_tree_becomes_circuit() {
    let g = cycle(4);
    let mut tour = Solution::empty(4);
    for e in 0..3 {
        tour.set(e, 2);
    }
    let h = tour_to_2ecss(&g, &tour).unwrap();
    assert_eq!(h.cardinality(), 4);
    let plain = Solution::from_edges(4, &[0, 1, 2, 3]);
    assert_eq!(tour_to_2ecss(&g, &plain).unwrap(), plain);
}

#[test]
fn tour_from_circuit_and_k4() {
    let g = cycle(7);
    let h = Solution::from_edges(7, &(0..7).collect::<Vec<_>>());
    assert_eq!(tour_from_2ecss(&g, &h).unwrap().cardinality(), 7);
    let g = k4();
    let h = Solution::from_edges(6, &(0..6).collect::<Vec<_>>());
    assert!(tour_from_2ecss(&g, &h).unwrap().cardinality() <= 6);
}

#[test]
fn christofides_on_tree_and_cycle() {
    let path = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    assert_eq!(christofides_tjoin(&path, &[0, 3]).unwrap().cardinality(), 3);
    let c = cycle_st(2).unwrap();
    assert!(christofides_tjoin(&c.graph, c.t.as_ref().unwrap()).unwrap().cardinality() <= 10);
}

#[test]
fn figure3_tjoin() {
    for k in 1..=3 {
        let f = fig3(k).unwrap();
        let (s, tr) = connected_tjoin_3_2(&f.graph, f.t.as_ref().unwrap()).unwrap();
        assert!(s.cardinality() <= 12 * k + 6, "k={k}: {}", s.cardinality());
        assert_eq!(tr.cardinality, s.cardinality());
    }
}

#[test]
fn figure3_drawn_decomposition_via_induction() {
    let f = fig3(3).unwrap();
    let t = f.t.unwrap();
    let d = f.decomposition.unwrap();
    let s = connected_tjoin_via_induction(&f.graph, &t, &d, 2).unwrap();
    assert!(s.cardinality() <= 42);
}

#[test]
fn figure4_tour_and_drawn_pairing() {
    for k in 1..=3 {
        let f = fig4(k).unwrap();
        let (s, _) = tsp_7_5(&f.graph).unwrap();
        assert!(s.cardinality() <= 14 * k);
        assert!(5 * s.cardinality() <= 7 * (10 * k + 1));
    }
    let f = fig4(1).unwrap();
    let d = f.decomposition.unwrap();
    let nontrivial: Vec<usize> = d.nontrivial().flat_map(|e| e.edges.clone()).collect();
    let gp = f.graph.edge_subgraph(&nontrivial);
    let dp = EarDecomposition { ears: d.nontrivial().map(|e| localize(&gp, e)).collect() };
    let p = removable_pairing_from_ears(&gp.graph, &dp).unwrap();
    assert_eq!(p.r.len(), 5);
    assert!(pairing_keeps_connectivity(&gp.graph, &p).unwrap());
}

#[test]
fn figure5_2ecss() {
    for k in 1..=2 {
        let f = fig5(k).unwrap();
        let (s, _) = two_ecss_4_3(&f.graph).unwrap();
        assert!(s.cardinality() <= 32 * k);
        let tour = tour_from_2ecss(&f.graph, &s).unwrap();
        assert!(3 * tour.cardinality() <= 2 * (s.cardinality() + f.graph.n() - 1));
    }
}

#[test]
fn theta_tour() {
    let g = theta(2).unwrap().graph;
    let (s, _) = tsp_7_5(&g).unwrap();
    assert_eq!(s.cardinality(), 6);
}

#[test]
fn random_pairings_remove_safely() {
    let mut r = rng(11);
    for _ in 0..30 {
        let g = random_2vc(&mut r, 9);
        let d = open_ear_decomposition(&g).unwrap();
        let nontrivial: Vec<usize> = d.nontrivial().flat_map(|e| e.edges.clone()).collect();
        let gp = g.edge_subgraph(&nontrivial);
        let dp = EarDecomposition { ears: d.nontrivial().map(|e| localize(&gp, e)).collect() };
        let p = removable_pairing_from_ears(&gp.graph, &dp).unwrap();
        assert!(pairing_keeps_connectivity(&gp.graph, &p).unwrap());
        let t = ms_tour(&gp.graph, &p).unwrap();
        assert!(3 * t.cardinality() + 2 * p.r.len() <= 4 * gp.graph.m());
    }
}

#[test]
fn tour_when_nice_rewrite_closes_an_ear() {
    // the nice rewrite turns a 3-ear and a 2-ear into a closed 4-ear, so G′ has a cut vertex
    let es = vec![(4, 0), (0, 7), (7, 5), (5, 4), (4, 1), (1, 0), (0, 3), (3, 2), (2, 5), (0, 6), (6, 2), (3, 2)];
    let g = Multigraph::new(8, es).unwrap();
    let (t, tr) = tsp_7_5(&g).unwrap();
    check_connected_tjoin(&g, &[], &t).unwrap();
    assert!(tr.blocks[0].candidates.iter().any(|c| c.0 == "split"));
    assert!(qi(5 * t.cardinality()) <= tr.lower_bound * qi(7));
}
