//! Brute-force ground truth for small instances. Nothing in here is shared
//! with the approximation code beyond the graph type and τ for φ.

use crate::ears::Eardrum;
use crate::error::{internal, Error, Result};
use crate::graph::{Multigraph, Solution};
use crate::tjoin::UnitJoin;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct OracleLimits {
    pub max_n: usize,
    pub max_m: usize,
    /// Cycle-space dimension cap for the connected T-join enumeration.
    pub max_cycle_rank: usize,
    pub max_states: u64,
    pub time: Option<Duration>,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_n: 8, max_m: 28, max_cycle_rank: 20, max_states: 50_000_000, time: None }
    }
}

impl OracleLimits {
    /// Generous limits for the figure families.
    pub fn figures() -> Self {
        OracleLimits { max_n: 64, max_m: 128, max_cycle_rank: 22, max_states: 200_000_000, time: None }
    }

    fn check(&self, g: &Multigraph) -> Result<()> {
        if g.n() > self.max_n || g.m() > self.max_m {
            return Err(Error::Capability(format!("oracle limited to n ≤ {}, m ≤ {}", self.max_n, self.max_m)));
        }
        Ok(())
    }
}

struct Clock {
    start: Instant,
    limit: Option<Duration>,
    states: u64,
    max_states: u64,
}

impl Clock {
    fn new(l: &OracleLimits) -> Clock {
        Clock { start: Instant::now(), limit: l.time, states: 0, max_states: l.max_states }
    }

    fn tick(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > self.max_states {
            return Err(Error::Capability("oracle state budget exhausted".into()));
        }
        if self.states % 4096 == 0 {
            if let Some(l) = self.limit {
                if self.start.elapsed() > l {
                    return Err(Error::Capability("oracle time budget exhausted".into()));
                }
            }
        }
        Ok(())
    }
}

// tiny union-find on u8-sized graphs
fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn components_of_mask(g: &Multigraph, mask: u128, p: &mut Vec<usize>) -> usize {
    let n = g.n();
    p.clear();
    p.extend(0..n);
    let mut c = n;
    let mut bits = mask;
    while bits != 0 {
        let e = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let (a, b) = g.edge(e);
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra] = rb;
            c -= 1;
        }
    }
    c
}

/// Minimum connected T-join (a tour when T = ∅) with a witness.
/// Every such solution is a T-join O (multiplicity one) plus doubled edges
/// joining the components of O, so the search runs over O = J₀ ⊕ cycles.
pub fn opt_connected_tjoin(g: &Multigraph, t: &[usize], limits: &OracleLimits) -> Result<(usize, Solution)> {
    limits.check(g)?;
    if t.len() % 2 == 1 {
        return Err(Error::OddTerminals(t.len()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (n, m) = (g.n(), g.m());
    if m > 128 {
        return Err(Error::Capability("oracle limited to 128 edges".into()));
    }
    let rank = m + 1 - n;
    if rank > limits.max_cycle_rank {
        return Err(Error::Capability(format!("cycle space of dimension {rank} is above {}", limits.max_cycle_rank)));
    }
    // BFS tree, fundamental cycles and a tree T-join
    let mut parent_edge = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    let mut tree = vec![false; m];
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &(e, x) in g.incident(v) {
            if !seen[x] {
                seen[x] = true;
                parent_edge[x] = e;
                tree[e] = true;
                order.push(x);
            }
        }
    }
    let root_path = |mut v: usize| -> u128 {
        let mut mask = 0u128;
        while v != 0 {
            let e = parent_edge[v];
            mask ^= 1 << e;
            v = g.other(e, v);
        }
        mask
    };
    let mut j0 = 0u128;
    for &v in t {
        j0 ^= root_path(v);
    }
    let cycles: Vec<u128> = (0..m)
        .filter(|&e| !tree[e])
        .map(|e| {
            let (a, b) = g.edge(e);
            root_path(a) ^ root_path(b) ^ (1 << e)
        })
        .collect();
    let mut clock = Clock::new(limits);
    let mut p = Vec::with_capacity(n);
    let value = |o: u128, p: &mut Vec<usize>| o.count_ones() as usize + 2 * (components_of_mask(g, o, p) - 1);
    let mut cur = j0;
    let mut best = (value(cur, &mut p), cur);
    for k in 1u64..(1u64 << cycles.len()) {
        clock.tick()?;
        cur ^= cycles[k.trailing_zeros() as usize];
        if cur.count_ones() as usize >= best.0 {
            continue;
        }
        let v = value(cur, &mut p);
        if v < best.0 {
            best = (v, cur);
        }
    }
    // witness: O plus doubled connecting edges in id order
    let mut sol = Solution::empty(m);
    let o = best.1;
    components_of_mask(g, o, &mut p);
    for e in 0..m {
        if o >> e & 1 == 1 {
            sol.set(e, 1);
        }
    }
    for e in 0..m {
        let (a, b) = g.edge(e);
        let (ra, rb) = (find(&mut p, a), find(&mut p, b));
        if ra != rb {
            p[ra] = rb;
            sol.set(e, 2);
        }
    }
    if sol.cardinality() != best.0 || !sol.is_spanning_connected(g) {
        return Err(internal!("oracle witness does not match its value"));
    }
    Ok((best.0, sol))
}

/// Minimum 2-edge-connected spanning subgraph (multiplicity ≤ 1).
pub fn opt_2ecss(g: &Multigraph, limits: &OracleLimits) -> Result<(usize, Vec<usize>)> {
    if !g.is_two_edge_connected() {
        return Err(Error::NotTwoEdgeConnected);
    }
    let (n, m) = (g.n(), g.m());
    let mut clock = Clock::new(limits);
    if n >= 3 {
        if let Some(c) = hamiltonian_cycle(g, &mut clock)? {
            return Ok((n, c));
        }
    } else {
        // two vertices: two parallel edges
        return Ok((2, vec![0, 1]));
    }
    limits.check(g)?;
    for k in n + 1..=m {
        let mut chosen = Vec::with_capacity(k);
        if let Some(es) = choose_2ec(g, 0, k, &mut chosen, &mut vec![0usize; n], &mut clock)? {
            return Ok((k, es));
        }
    }
    Err(internal!("no 2-edge-connected subgraph found"))
}

fn choose_2ec(g: &Multigraph, from: usize, k: usize, chosen: &mut Vec<usize>, deg: &mut Vec<usize>, clock: &mut Clock) -> Result<Option<Vec<usize>>> {
    clock.tick()?;
    let m = g.m();
    if chosen.len() == k {
        if deg.iter().all(|&d| d >= 2) && crate::graph::is_2ec_spanning(g, chosen) {
            return Ok(Some(chosen.clone()));
        }
        return Ok(None);
    }
    // each vertex below degree 2 needs edges among the remaining ones
    let need: usize = deg.iter().map(|&d| 2usize.saturating_sub(d)).sum();
    if need > 2 * (k - chosen.len()) || m - from < k - chosen.len() {
        return Ok(None);
    }
    for e in from..m {
        if m - e < k - chosen.len() {
            break;
        }
        let (a, b) = g.edge(e);
        chosen.push(e);
        deg[a] += 1;
        deg[b] += 1;
        let r = choose_2ec(g, e + 1, k, chosen, deg, clock)?;
        chosen.pop();
        deg[a] -= 1;
        deg[b] -= 1;
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

fn hamiltonian_cycle(g: &Multigraph, clock: &mut Clock) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    let mut on = vec![false; n];
    on[0] = true;
    let mut path_edges = Vec::new();
    fn rec(g: &Multigraph, v: usize, depth: usize, on: &mut Vec<bool>, pe: &mut Vec<usize>, clock: &mut Clock) -> Result<bool> {
        clock.tick()?;
        let n = g.n();
        if depth == n {
            for &(e, x) in g.incident(v) {
                if x == 0 && pe.first() != Some(&e) {
                    pe.push(e);
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        // fewest onward options first
        let mut cand: Vec<(usize, usize, usize)> = Vec::new();
        for &(e, x) in g.incident(v) {
            if !on[x] && !cand.iter().any(|c| c.1 == x) {
                let free = g.incident(x).iter().filter(|&&(_, y)| !on[y]).count();
                cand.push((free, x, e));
            }
        }
        cand.sort_unstable();
        for (_, x, e) in cand {
            on[x] = true;
            pe.push(e);
            if rec(g, x, depth + 1, on, pe, clock)? {
                return Ok(true);
            }
            pe.pop();
            on[x] = false;
        }
        Ok(false)
    }
    if rec(g, 0, 1, &mut on, &mut path_edges, clock)? {
        Ok(Some(path_edges))
    } else {
        Ok(None)
    }
}

/// φ(G) as the maximum of 2τ(G,T) − |V| + 1 over even T, with an argmax.
pub fn phi_oracle(g: &Multigraph, max_n: usize) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    if n > max_n || n > 24 {
        return Err(Error::Capability(format!("φ oracle limited to {max_n} vertices")));
    }
    if !g.is_two_edge_connected() {
        return Err(Error::NotTwoEdgeConnected);
    }
    let uj = UnitJoin::new(g);
    let mut best: (i64, Vec<usize>) = (i64::MIN, Vec::new());
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let t: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let v = 2 * uj.tau(&t)? as i64 - n as i64 + 1;
        if v > best.0 {
            best = (v, t);
        }
    }
    if best.0 < 0 {
        return Err(internal!("negative φ"));
    }
    Ok((best.0 as usize, best.1))
}

/// Every path with internal vertex set exactly `core` and ends outside it,
/// as (ends, edges); parallel edges are collapsed to the lowest id.
pub fn core_paths(g: &Multigraph, core: &[usize]) -> Vec<((usize, usize), Vec<usize>)> {
    let mut out = Vec::new();
    let nbrs = |a: usize| {
        let mut v: Vec<(usize, usize)> = Vec::new();
        for &(e, x) in g.incident(a) {
            if !core.contains(&x) && !v.iter().any(|p| p.1 == x) {
                v.push((e, x));
            }
        }
        v
    };
    match core {
        [a] => {
            let ns = nbrs(*a);
            for i in 0..ns.len() {
                for j in i + 1..ns.len() {
                    out.push(((ns[i].1, ns[j].1), vec![ns[i].0, ns[j].0]));
                }
            }
        }
        [a, b] => {
            let Some(mid) = g.edge_between(*a, *b) else { return out };
            for &(ea, u) in &nbrs(*a) {
                for &(eb, w) in &nbrs(*b) {
                    if u != w {
                        out.push(((u, w), vec![ea, mid, eb]));
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// μ(G,M) by enumerating a path (or nothing) per core, cross-checked by the
/// rank formulation over endpoint pairs.
pub fn mu_oracle(g: &Multigraph, drum: &Eardrum, max_states: u64) -> Result<usize> {
    let paths: Vec<Vec<((usize, usize), Vec<usize>)>> = drum.cores.iter().map(|c| core_paths(g, c)).collect();
    let mut budget = 1u64;
    for p in &paths {
        budget = budget.saturating_mul(p.len() as u64 + 1);
    }
    if budget > max_states {
        return Err(Error::Capability(format!("{budget} path combinations above the budget {max_states}")));
    }
    let n = g.n();
    // direct enumeration
    let mut best = 0usize;
    let mut stack: Vec<Vec<usize>> = Vec::new();
    enumerate_paths(g, &paths, 0, &mut stack, &mut best);
    // rank formulation: max rank of chosen endpoint pairs (one per core, no skipping)
    let pairs: Vec<Vec<(usize, usize)>> = paths
        .iter()
        .map(|p| {
            let mut v: Vec<(usize, usize)> = p.iter().map(|(ends, _)| (ends.0.min(ends.1), ends.0.max(ends.1))).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut rank_best = 0usize;
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    enumerate_rank(n, &pairs, 0, &mut chosen, &mut rank_best);
    if rank_best != best {
        return Err(internal!("path enumeration gives {best}, rank formulation gives {rank_best}"));
    }
    Ok(best)
}

fn enumerate_paths(g: &Multigraph, paths: &[Vec<((usize, usize), Vec<usize>)>], i: usize, stack: &mut Vec<Vec<usize>>, best: &mut usize) {
    if stack.len() + (paths.len() - i) <= *best {
        return;
    }
    if i == paths.len() {
        *best = stack.len();
        return;
    }
    for (_, es) in &paths[i] {
        stack.push(es.clone());
        if is_forest(g, stack) {
            enumerate_paths(g, paths, i + 1, stack, best);
        }
        stack.pop();
    }
    enumerate_paths(g, paths, i + 1, stack, best);
}

fn is_forest(g: &Multigraph, sets: &[Vec<usize>]) -> bool {
    let mut p: Vec<usize> = (0..g.n()).collect();
    for es in sets {
        for &e in es {
            let (a, b) = g.edge(e);
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            if ra == rb {
                return false;
            }
            p[ra] = rb;
        }
    }
    true
}

fn enumerate_rank(n: usize, pairs: &[Vec<(usize, usize)>], i: usize, chosen: &mut Vec<(usize, usize)>, best: &mut usize) {
    if i == pairs.len() {
        let mut p: Vec<usize> = (0..n).collect();
        let mut r = 0;
        for &(a, b) in chosen.iter() {
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            if ra != rb {
                p[ra] = rb;
                r += 1;
            }
        }
        *best = (*best).max(r);
        return;
    }
    if pairs[i].is_empty() {
        enumerate_rank(n, pairs, i + 1, chosen, best);
        return;
    }
    for &pr in &pairs[i] {
        chosen.push(pr);
        enumerate_rank(n, pairs, i + 1, chosen, best);
        chosen.pop();
    }
}

/// Endpoint sets seen by the oracle, built from enumerated paths.
pub fn oracle_endpoint_sets(g: &Multigraph, drum: &Eardrum) -> Vec<Vec<usize>> {
    drum.cores
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = core_paths(g, c).iter().flat_map(|((a, b), _)| [*a, *b]).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Multigraph {
        Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn small_values() {
        let l = OracleLimits::default();
        assert_eq!(opt_connected_tjoin(&cycle(4), &[], &l).unwrap().0, 4);
        // antipodal pair on C_2n: one half as the join, the other half's inner vertices hung on by doubled edges
        for n in 2..=5 {
            assert_eq!(opt_connected_tjoin(&cycle(2 * n), &[0, n], &OracleLimits::figures()).unwrap().0, 3 * n - 2);
        }
        assert_eq!(opt_2ecss(&cycle(5), &l).unwrap().0, 5);
        let k4 = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(opt_2ecss(&k4, &l).unwrap().0, 4);
        let theta = Multigraph::new(5, vec![(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        assert_eq!(opt_2ecss(&theta, &l).unwrap().0, 6);
        assert_eq!(phi_oracle(&cycle(5), 14).unwrap().0, 0);
        assert_eq!(phi_oracle(&cycle(4), 14).unwrap().0, 1);
    }

    #[test]
    fn mu_small() {
        let g = cycle(4);
        assert_eq!(mu_oracle(&g, &Eardrum { cores: vec![], ear_of: vec![] }, 1000).unwrap(), 0);
        let g = Multigraph::new(4, vec![(0, 2), (2, 1), (0, 3), (3, 1), (0, 1)]).unwrap();
        let drum = Eardrum { cores: vec![vec![2], vec![3]], ear_of: vec![0, 1] };
        assert_eq!(mu_oracle(&g, &drum, 1000).unwrap(), 1);
        assert_eq!(oracle_endpoint_sets(&g, &drum), crate::earmuff::endpoint_sets(&g, &drum));
    }
}

#[cfg(test)]
mod figure_tests {
    use super::*;
    use crate::generate::{fig3, fig4, fig5};

    #[test]
    fn figure_optima() {
        let l = OracleLimits::figures();
        for k in 1..=4 {
            let f = fig3(k).unwrap();
            let (v, w) = opt_connected_tjoin(&f.graph, f.t.as_ref().unwrap(), &l).unwrap();
            assert_eq!(v, 8 * k + 4);
            assert_eq!(w.odd_vertices(&f.graph), vec![0, 1]);
        }
        for k in 1..=3 {
            let f = fig4(k).unwrap();
            assert_eq!(opt_connected_tjoin(&f.graph, &[], &l).unwrap().0, 10 * k + 1);
        }
        for k in 1..=2 {
            let f = fig5(k).unwrap();
            assert_eq!(opt_2ecss(&f.graph, &l).unwrap().0, 24 * k);
        }
        assert_eq!(phi_oracle(&fig3(1).unwrap().graph, 14).unwrap().0, 2);
    }
}
