use super::*;
use crate::graph::Multigraph;

fn cycle(n: usize) -> Multigraph {
    Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
}

fn complete(n: usize) -> Multigraph {
    let mut es = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            es.push((i, j));
        }
    }
    Multigraph::new(n, es).unwrap()
}

fn with_limits(exact: usize) -> SearchLimits {
    SearchLimits { exact_max_n: exact, ..Default::default() }
}

#[test]
fn open_decomposition_shapes() {
    let d = open_ear_decomposition(&cycle(5)).unwrap();
    assert_eq!(d.ears.len(), 1);
    assert_eq!(d.ears[0].len(), 5);
    let k4 = complete(4);
    let d = open_ear_decomposition(&k4).unwrap();
    let mut lens: Vec<usize> = d.ears.iter().map(|e| e.len()).collect();
    lens.sort_unstable();
    assert_eq!(lens, vec![1, 2, 3]);
    assert!(d.is_open());
    let bowtie = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
    assert!(matches!(open_ear_decomposition(&bowtie), Err(Error::NotTwoVertexConnected)));
}

#[test]
fn validator_rejects_bad_orders() {
    let g = complete(4);
    let mut d = open_ear_decomposition(&g).unwrap();
    d.ears.swap(0, 1);
    assert!(d.validate(&g).is_err());
}

#[test]
fn min_even_on_cycles() {
    for n in 3..9 {
        for exact in [0, 12] {
            let r = min_even_ear_decomposition_with(&cycle(n), &with_limits(exact)).unwrap();
            assert_eq!(r.phi, (n + 1) % 2, "C{n}");
        }
    }
}

#[test]
fn both_routes_agree() {
    // K4 and K_{3,3}: 0 and 1; a few subdivided graphs
    let k33 = Multigraph::new(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect()).unwrap();
    let theta = Multigraph::new(8, vec![(0, 1), (1, 2), (2, 7), (0, 3), (3, 4), (4, 7), (0, 5), (5, 6), (6, 7)]).unwrap();
    for g in [complete(4), complete(5), k33, theta] {
        let a = min_even_ear_decomposition_with(&g, &with_limits(12)).unwrap();
        let b = min_even_ear_decomposition_with(&g, &with_limits(0)).unwrap();
        assert_eq!(a.route, SearchRoute::SubsetDp);
        assert_eq!(b.route, SearchRoute::CertifiedDfs);
        assert_eq!(a.phi, b.phi);
        assert!(a.witness_t.is_some());
    }
}

#[test]
fn parallel_edges_make_closed_two_ear() {
    let g = Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
    let r = min_even_ear_decomposition(&g).unwrap();
    assert_eq!(r.phi, 1);
    assert_eq!(r.decomposition.ears.len(), 2);
}

#[test]
fn too_large_is_a_capability_error() {
    let lim = SearchLimits { max_n: 5, ..Default::default() };
    assert!(matches!(min_even_ear_decomposition_with(&cycle(6), &lim), Err(Error::Capability(_))));
}

#[test]
fn hexagon_with_chord_is_nice() {
    let mut es: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    es.push((0, 3));
    let g = Multigraph::new(6, es).unwrap();
    let d = EarDecomposition::from_nontrivial(&g, vec![Ear::new(vec![0, 1, 2, 3, 4, 5, 0], vec![0, 1, 2, 3, 4, 5])]);
    d.validate(&g).unwrap();
    let (nice, drum) = make_nice(&g, &d, &[]).unwrap();
    assert_eq!(nice, d);
    assert!(drum.is_empty());
}

#[test]
fn non_pendant_two_ear_gets_absorbed() {
    // square 0-1-2-3 with 2-ear 0-4-2 and 2-ear 4-5-1 hanging off 4
    let g = Multigraph::new(6, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2), (4, 5), (5, 1)]).unwrap();
    let d = EarDecomposition::from_nontrivial(
        &g,
        vec![Ear::new(vec![0, 1, 2, 3, 0], vec![0, 1, 2, 3]), Ear::new(vec![0, 4, 2], vec![4, 5]), Ear::new(vec![4, 5, 1], vec![6, 7])],
    );
    d.validate(&g).unwrap();
    assert!(!is_nice(&g, &d, None));
    let (nice, _) = make_nice(&g, &d, &[]).unwrap();
    assert!(is_nice(&g, &nice, None));
    assert!(nice.even_count() <= d.even_count());
    assert!(nice.nontrivial().count() < d.nontrivial().count());
}

#[test]
fn clean_three_ear_reduction() {
    let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    let ear = Ear::new(vec![0, 1, 2], vec![0, 1]);
    let r = reduce_pendant_ear(&g, &ear, &[]).unwrap();
    assert!(r.red.is_empty());
    assert_eq!(r.f_prime.cardinality(), 2);
    let g = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    let ear = Ear::new(vec![0, 1, 2, 3], vec![0, 1, 2]);
    let r = reduce_pendant_ear(&g, &ear, &[]).unwrap();
    assert_eq!(r.f_prime.cardinality(), 3);
    assert_eq!(r.f.cardinality(), 0);
}

#[test]
fn two_ear_with_terminal_inside() {
    let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let ear = Ear::new(vec![0, 1, 2], vec![0, 1]);
    let r = reduce_pendant_ear(&g, &ear, &[1, 3]).unwrap();
    assert_eq!(r.f.cardinality(), 1);
    assert!(!r.s.contains(&1) && !r.s_prime.contains(&1));
}

#[test]
fn five_ear_with_two_terminals() {
    // 5-ear 0-1-2-3-4-5 closed by path 5-6-0; terminals at 2nd and 4th internal
    let g = Multigraph::new(7, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)]).unwrap();
    let ear = Ear::new(vec![0, 1, 2, 3, 4, 5], vec![0, 1, 2, 3, 4]);
    let r = reduce_pendant_ear(&g, &ear, &[2, 4]).unwrap();
    assert!(r.f_prime.cardinality() <= 5);
    assert_eq!(r.f_prime.max_multiplicity(), 2);
    assert_eq!(r.red, vec![2, 3]);
    assert_eq!(r.f_prime.cardinality(), 5);
}

#[test]
fn dump_format() {
    let d = open_ear_decomposition(&complete(4)).unwrap();
    let s = d.dump(4, &[]);
    assert_eq!(s.lines().count(), 3);
    assert!(s.starts_with("ear 0 kind=closed edges="));
}
