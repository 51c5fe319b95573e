//! Instance families: the three tight figure constructions, the theta and
//! antipodal-cycle gap examples, random 2EC/2VC multigraphs and the
//! catalog of small connected simple graphs.

use crate::ears::{Ear, EarDecomposition};
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// A generated instance, with the decomposition drawn in its figure when
/// there is one.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Multigraph,
    pub t: Option<Vec<usize>>,
    pub decomposition: Option<EarDecomposition>,
}

fn ear_through(g: &Multigraph, vs: &[usize]) -> Ear {
    let edges = vs.windows(2).map(|w| g.edge_between(w[0], w[1]).expect("figure path uses a missing edge")).collect();
    Ear::new(vs.to_vec(), edges)
}

fn need_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    Ok(())
}

/// Ladder with diagonals and a centre 2-ear; T = {s, t}.
/// 8k+5 vertices, 12k+5 edges.
pub fn fig3(k: usize) -> Result<Generated> {
    need_k(k)?;
    let len = 4 * k + 1;
    let (s, t, a) = (0, 1, 2);
    let u = |i: usize| 3 + i;
    let v = |i: usize| 3 + len + i;
    let mut es = vec![(s, u(0)), (s, v(0)), (u(len - 1), t), (v(len - 1), t), (u(2 * k), a), (v(2 * k), a)];
    for i in 0..len - 1 {
        es.push((u(i), u(i + 1)));
        es.push((v(i), v(i + 1)));
    }
    for i in 0..2 * k {
        es.push((u(i), v(i + 1)));
    }
    for i in 2 * k + 2..len {
        es.push((u(i), v(i - 1)));
    }
    let g = Multigraph::new(8 * k + 5, es)?;
    debug_assert_eq!(g.m(), 12 * k + 5);
    // the long circuit, then the centre 2-ear
    let mut circ = vec![s];
    circ.extend((0..len).map(u));
    circ.push(t);
    circ.extend((0..len).rev().map(v));
    circ.push(s);
    let ears = vec![ear_through(&g, &circ), ear_through(&g, &[u(2 * k), a, v(2 * k)])];
    let d = EarDecomposition::from_nontrivial(&g, ears);
    Ok(Generated { graph: g, t: Some(vec![s, t]), decomposition: Some(d) })
}

/// Chain of k ten-vertex blocks hung off a start vertex; Hamiltonian.
/// 10k+1 vertices, 13k+1 edges.
pub fn fig4(k: usize) -> Result<Generated> {
    need_k(k)?;
    let b = |j: usize| 1 + 10 * j;
    let mut es = vec![(0, b(0)), (0, b(0) + 3)];
    for j in 0..k {
        let x = b(j);
        es.extend([(x, x + 1), (x + 1, x + 2), (x + 2, x + 3)]);
        es.extend([(x + 2, x + 4), (x + 4, x + 5), (x + 5, x + 8)]);
        es.extend([(x + 6, x + 7), (x + 7, x + 8), (x + 8, x + 9)]);
        es.extend([(x, x + 6), (x + 3, x + 9)]);
        if j + 1 < k {
            es.extend([(x + 6, x + 10), (x + 9, x + 13)]);
        } else {
            es.push((x + 6, x + 9));
        }
    }
    let g = Multigraph::new(10 * k + 1, es)?;
    debug_assert_eq!(g.m(), 13 * k + 1);
    let mut ears = vec![ear_through(&g, &[0, b(0), b(0) + 1, b(0) + 2, b(0) + 3, 0])];
    // 5-ears left to right through each vertical column
    for j in 0..k {
        let x = b(j);
        ears.push(ear_through(&g, &[x, x + 6, x + 7, x + 8, x + 9, x + 3]));
        if j + 1 < k {
            ears.push(ear_through(&g, &[x + 6, x + 10, x + 11, x + 12, x + 13, x + 9]));
        }
    }
    for j in 0..k {
        let x = b(j);
        ears.push(ear_through(&g, &[x + 2, x + 4, x + 5, x + 8]));
    }
    let d = EarDecomposition::from_nontrivial(&g, ears);
    Ok(Generated { graph: g, t: None, decomposition: Some(d) })
}

/// 4k columns of four joined by middle 3-ears, with chords and a six-edge
/// gadget every four columns. 24k vertices, 44k−2 edges.
pub fn fig5(k: usize) -> Result<Generated> {
    need_k(k)?;
    let cols = 4 * k;
    let (v0, v06) = (0, 1);
    // column c (0-based), row r in 1..=4; middle pair after column c, r in 5..=6
    let col = |c: usize, r: usize| 2 + 6 * c + (r - 1);
    let mut es = vec![(v0, col(0, 1)), (v0, col(0, 4)), (v0, v06), (v06, col(0, 3))];
    for c in 0..cols {
        es.extend([(col(c, 1), col(c, 2)), (col(c, 2), col(c, 3)), (col(c, 3), col(c, 4))]);
        if c + 1 < cols {
            es.extend([(col(c, 1), col(c + 1, 1)), (col(c, 4), col(c + 1, 4))]);
            if c % 2 == 0 {
                es.extend([(col(c, 3), col(c, 5)), (col(c, 5), col(c, 6)), (col(c, 6), col(c + 1, 2))]);
                es.push((col(c, 2), col(c, 6)));
            } else {
                es.extend([(col(c, 2), col(c, 5)), (col(c, 5), col(c, 6)), (col(c, 6), col(c + 1, 3))]);
                es.push((col(c, 3), col(c, 5)));
            }
        }
    }
    for p in 0..k {
        let a = 4 * p;
        es.extend([
            (col(a + 1, 1), col(a, 2)),
            (col(a + 1, 1), col(a + 1, 6)),
            (col(a + 1, 1), col(a + 3, 1)),
            (col(a + 2, 4), col(a, 4)),
            (col(a + 2, 4), col(a + 1, 6)),
            (col(a + 2, 4), col(a + 3, 3)),
        ]);
        if p + 1 < k {
            es.extend([(col(a + 2, 2), col(a + 3, 6)), (col(a + 5, 3), col(a + 3, 6))]);
        }
    }
    es.push((v0, col(1, 3)));
    es.push((col(cols - 2, 2), col(cols - 1, 2)));
    // the last column has no middle pair
    let used: HashSet<usize> = es.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut relabel = vec![usize::MAX; 2 + 6 * cols];
    let mut next = 0;
    for (x, slot) in relabel.iter_mut().enumerate() {
        if used.contains(&x) {
            *slot = next;
            next += 1;
        }
    }
    let es: Vec<(usize, usize)> = es.iter().map(|&(a, b)| (relabel[a], relabel[b])).collect();
    let g = Multigraph::new(next, es)?;
    debug_assert_eq!((g.n(), g.m()), (24 * k, 44 * k - 2));
    let r = |c: usize, row: usize| relabel[col(c, row)];
    let mut ears = vec![ear_through(&g, &[0, r(0, 1), r(0, 2), r(0, 3), r(0, 4), 0])];
    for c in 0..cols - 1 {
        ears.push(ear_through(&g, &[r(c, 1), r(c + 1, 1), r(c + 1, 2), r(c + 1, 3), r(c + 1, 4), r(c, 4)]));
    }
    for c in 0..cols - 1 {
        let (from, to) = if c % 2 == 0 { (r(c, 3), r(c + 1, 2)) } else { (r(c, 2), r(c + 1, 3)) };
        ears.push(ear_through(&g, &[from, r(c, 5), r(c, 6), to]));
    }
    ears.push(ear_through(&g, &[0, relabel[v06], r(0, 3)]));
    let d = EarDecomposition::from_nontrivial(&g, ears);
    Ok(Generated { graph: g, t: None, decomposition: Some(d) })
}

/// Three internally disjoint paths of length k between vertices 0 and 1.
pub fn theta(k: usize) -> Result<Generated> {
    if k < 2 {
        return Err(Error::Precondition("theta needs paths of length ≥ 2".into()));
    }
    let mut es = Vec::new();
    let mut next = 2;
    for _ in 0..3 {
        let mut prev = 0;
        for _ in 0..k - 1 {
            es.push((prev, next));
            prev = next;
            next += 1;
        }
        es.push((prev, 1));
    }
    Ok(Generated { graph: Multigraph::new(next, es)?, t: None, decomposition: None })
}

/// Circuit of length 2n with T = {0, n}.
pub fn cycle_st(n: usize) -> Result<Generated> {
    if n < 1 {
        return Err(Error::Precondition("cycle_st needs n ≥ 1".into()));
    }
    let m = 2 * n;
    let g = Multigraph::new(m, (0..m).map(|i| (i, (i + 1) % m)).collect())?;
    Ok(Generated { graph: g, t: Some(vec![0, n]), decomposition: None })
}

/// Random 2-edge-connected multigraph on 3..=max_n vertices built by ears,
/// with closed ears and parallel edges allowed.
pub fn random_2ec(rng: &mut ChaCha8Rng, max_n: usize) -> Multigraph {
    let n = rng.gen_range(3..=max_n.max(3));
    random_by_ears(rng, n, false)
}

/// Random simple 2-vertex-connected graph on 3..=max_n vertices.
pub fn random_2vc(rng: &mut ChaCha8Rng, max_n: usize) -> Multigraph {
    let n = rng.gen_range(3..=max_n.max(3));
    random_by_ears(rng, n, true)
}

fn random_by_ears(rng: &mut ChaCha8Rng, n: usize, open: bool) -> Multigraph {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let first = rng.gen_range(if open { 3 } else { 2 }..=n);
    let mut es = Vec::new();
    for i in 0..first {
        es.push((perm[i], perm[(i + 1) % first]));
    }
    let mut covered = first;
    while covered < n {
        let len = rng.gen_range(1..=(n - covered).min(4));
        let a = perm[rng.gen_range(0..covered)];
        let mut b = perm[rng.gen_range(0..covered)];
        if open || rng.gen_bool(0.7) {
            while b == a {
                b = perm[rng.gen_range(0..covered)];
            }
        }
        let mut prev = a;
        for j in 0..len {
            es.push((prev, perm[covered + j]));
            prev = perm[covered + j];
        }
        es.push((prev, b));
        covered += len;
    }
    let extra = rng.gen_range(0..=n / 2 + 1);
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        if open && es.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
            continue;
        }
        es.push((a, b));
    }
    Multigraph::new(n, es).expect("ear construction yields a valid graph")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random even subset of the vertices.
pub fn random_even_t(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut t: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if t.len() % 2 == 1 {
        t.remove(rng.gen_range(0..t.len()));
    }
    t
}

/// All connected simple graphs on n vertices up to isomorphism (n ≤ 8).
/// Grown one vertex at a time: every connected graph has a vertex whose
/// removal keeps it connected.
pub fn connected_graphs(n: usize) -> Vec<Multigraph> {
    assert!((1..=8).contains(&n), "catalog limited to 1..=8 vertices");
    let mut level: Vec<Vec<u8>> = vec![vec![0]];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for adj in &level {
            for nb in 1u32..(1 << (size - 1)) {
                let mut a = adj.clone();
                a.push(nb as u8);
                for (i, row) in a.iter_mut().enumerate().take(size - 1) {
                    if nb >> i & 1 == 1 {
                        *row |= 1 << (size - 1);
                    }
                }
                let key = canonical(&a);
                if seen.insert(key) {
                    next.push(a);
                }
            }
        }
        level = next;
    }
    let mut out: Vec<(u64, Multigraph)> = level
        .iter()
        .map(|a| {
            let es: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).filter(move |&j| a[i] >> j & 1 == 1).map(move |j| (i, j))).collect();
            (canonical(a), Multigraph::new(n, es).unwrap())
        })
        .collect();
    out.sort_by_key(|x| x.0);
    out.into_iter().map(|x| x.1).collect()
}

// adjacency rows as bitmasks; canonical code = max over degree-respecting
// relabelings of the upper triangle read row by row
fn canonical(a: &[u8]) -> u64 {
    let n = a.len();
    let deg: Vec<u32> = a.iter().map(|r| r.count_ones()).collect();
    let inv: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&u| a[v] >> u & 1 == 1).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| inv[y].cmp(&inv[x]));
    // classes of equal invariant, each permuted freely
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if inv[c[0]] == inv[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = 0u64;
    let mut pos = vec![0usize; n];
    fn rec(a: &[u8], classes: &mut [Vec<usize>], ci: usize, placed: &mut Vec<usize>, pos: &mut Vec<usize>, best: &mut u64) {
        if ci == classes.len() {
            let n = a.len();
            for (i, &v) in placed.iter().enumerate() {
                pos[v] = i;
            }
            let mut code = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    code = code << 1 | (a[placed[i]] >> placed[j] & 1) as u64;
                }
            }
            *best = (*best).max(code);
            return;
        }
        let cls = classes[ci].clone();
        permute(&cls, &mut Vec::new(), &mut vec![false; cls.len()], &mut |p| {
            let before = placed.len();
            placed.extend_from_slice(p);
            rec(a, classes, ci + 1, placed, pos, best);
            placed.truncate(before);
        });
    }
    fn permute(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == items.len() {
            f(cur);
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i]);
                permute(items, cur, used, f);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(a, &mut classes, 0, &mut Vec::new(), &mut pos, &mut best);
    best | (n as u64) << 58
}

/// Family dispatch used by the CLI.
pub fn generate(family: &str, k: usize, seed: u64) -> Result<Generated> {
    match family {
        "fig3" => fig3(k),
        "fig4" => fig4(k),
        "fig5" => fig5(k),
        "theta" => theta(k),
        "cycle_st" => cycle_st(k),
        "random" | "random2ec" => Ok(Generated { graph: random_2ec(&mut rng(seed), k.max(3)), t: None, decomposition: None }),
        "random2vc" => Ok(Generated { graph: random_2vc(&mut rng(seed), k.max(3)), t: None, decomposition: None }),
        _ => Err(Error::Precondition(format!("unknown family {family}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_counts() {
        for k in 1..=4 {
            let f = fig3(k).unwrap();
            assert_eq!((f.graph.n(), f.graph.m()), (8 * k + 5, 12 * k + 5));
            f.decomposition.unwrap().validate(&f.graph).unwrap();
            let f = fig4(k).unwrap();
            assert_eq!((f.graph.n(), f.graph.m()), (10 * k + 1, 13 * k + 1));
            let d = f.decomposition.unwrap();
            d.validate(&f.graph).unwrap();
            assert_eq!(d.even_count(), 0);
            let f = fig5(k).unwrap();
            assert_eq!((f.graph.n(), f.graph.m()), (24 * k, 44 * k - 2));
            let d = f.decomposition.unwrap();
            d.validate(&f.graph).unwrap();
            assert_eq!(d.nontrivial().count(), 8 * k);
            assert_eq!(d.nontrivial().map(|e| e.len()).sum::<usize>(), 32 * k - 1);
        }
        let t = theta(2).unwrap();
        assert_eq!((t.graph.n(), t.graph.m()), (5, 6));
    }

    #[test]
    fn catalog_sizes() {
        let counts: Vec<usize> = (1..=7).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn random_graphs_have_the_promised_connectivity() {
        let mut r = rng(7);
        for _ in 0..200 {
            assert!(random_2ec(&mut r, 8).is_two_edge_connected());
            assert!(random_2vc(&mut r, 10).is_two_vertex_connected());
        }
    }
}
