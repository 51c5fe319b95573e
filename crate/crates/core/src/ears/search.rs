//! Minimum number of even ears. Small graphs go through an exact dynamic
//! program over covered vertex sets; larger ones through a depth-first search
//! whose answer is certified either by a terminal set T (the max-τ formula) or
//! by exhausting the smaller targets.

use super::{Ear, EarDecomposition};
use crate::error::{internal, Error, Result};
use crate::graph::{blocks, Block, Multigraph};
use crate::tjoin::UnitJoin;
use std::collections::{HashMap, VecDeque};

#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Up to this many vertices the subset DP is used.
    pub exact_max_n: usize,
    /// Hard cap; above it a capability error is returned.
    pub max_n: usize,
    /// Node budget for each DFS target.
    pub node_budget: u64,
    /// Pair-toggle rounds when improving the terminal-set lower bound.
    pub local_search_rounds: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { exact_max_n: 12, max_n: 128, node_budget: 2_000_000, local_search_rounds: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchRoute {
    SubsetDp,
    CertifiedDfs,
}

#[derive(Clone, Debug)]
pub struct MinEven {
    pub decomposition: EarDecomposition,
    pub phi: usize,
    /// T with 2τ(G,T) − n + 1 = φ when one was found.
    pub witness_t: Option<Vec<usize>>,
    pub route: SearchRoute,
}

pub fn min_even_ear_decomposition(g: &Multigraph) -> Result<MinEven> {
    min_even_ear_decomposition_with(g, &SearchLimits::default())
}

pub fn min_even_ear_decomposition_with(g: &Multigraph, limits: &SearchLimits) -> Result<MinEven> {
    if !g.is_two_vertex_connected() {
        return Err(Error::NotTwoVertexConnected);
    }
    let n = g.n();
    if n > limits.max_n || n > 128 {
        return Err(Error::Capability(format!("{n} vertices exceeds the even-ear search bound {}", limits.max_n)));
    }
    let out = if n <= limits.exact_max_n && n <= 24 { exact(g)? } else { certified(g, limits)? };
    out.decomposition.validate(g)?;
    if !out.decomposition.is_open() || out.decomposition.even_count() != out.phi {
        return Err(internal!("search returned a decomposition that is not open or has the wrong even count"));
    }
    Ok(out)
}

/// φ summed over the blocks of a 2-edge-connected graph, with one result per block
/// (block-local ids; map back through `g.edge_subgraph(&block.edges)`).
pub fn min_even_ears_2ec(g: &Multigraph, limits: &SearchLimits) -> Result<(usize, Vec<(Block, MinEven)>)> {
    if !g.is_two_edge_connected() {
        return Err(Error::NotTwoEdgeConnected);
    }
    let bt = blocks(g)?;
    let mut total = 0;
    let mut out = Vec::new();
    for b in bt.blocks {
        let view = g.edge_subgraph(&b.edges);
        let r = min_even_ear_decomposition_with(&view.graph, limits)?;
        total += r.phi;
        out.push((b, r));
    }
    Ok((total, out))
}

fn t_value(uj: &UnitJoin, n: usize, t: &[usize]) -> i64 {
    match uj.tau(t) {
        Ok(tau) => 2 * tau as i64 - n as i64 + 1,
        Err(_) => i64::MIN,
    }
}

// ---------- exact route ----------

fn exact(g: &Multigraph) -> Result<MinEven> {
    let n = g.n();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let size = 1usize << n;
    let mut dist = vec![u8::MAX; size];
    let mut parent = vec![(0u32, 0u32); size];
    let mut dq = VecDeque::new();
    for r in 0..n {
        dist[1 << r] = 0;
        dq.push_back(1u32 << r);
    }
    let mut done = vec![false; size];
    while let Some(s) = dq.pop_front() {
        if done[s as usize] {
            continue;
        }
        done[s as usize] = true;
        if s == full {
            break;
        }
        let d = dist[s as usize];
        let closed = s.count_ones() == 1;
        let xs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 0).collect();
        let k = xs.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in xs.iter().enumerate() {
            pos[x] = i;
        }
        let mut lifted = vec![0u32; 1 << k];
        for i in 1..(1usize << k) {
            let low = i.trailing_zeros() as usize;
            lifted[i] = lifted[i & (i - 1)] | 1 << xs[low];
        }
        // reach[I*k + i]: start vertices u in s of a path through exactly I ending at xs[i]
        let mut reach = vec![0u32; (1 << k) * k];
        for (i, &x) in xs.iter().enumerate() {
            let mut r = 0;
            for &(_, u) in g.incident(x) {
                if s >> u & 1 == 1 {
                    r |= 1 << u;
                }
            }
            reach[(1 << i) * k + i] = r;
        }
        for set in 1..(1usize << k) {
            let ns = s | lifted[set];
            let nd = d + (set.count_ones() % 2) as u8;
            let mut closable = dist[ns as usize] <= nd;
            let mut bits = set;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let r = reach[set * k + i];
                if r == 0 {
                    continue;
                }
                let x = xs[i];
                if !closable {
                    for &(_, w) in g.incident(x) {
                        if s >> w & 1 == 0 {
                            continue;
                        }
                        let ok = if closed {
                            r >> w & 1 == 1 && (set.count_ones() >= 2 || g.multiplicity(w, x) >= 2)
                        } else {
                            r & !(1 << w) != 0
                        };
                        if ok {
                            dist[ns as usize] = nd;
                            parent[ns as usize] = (s, lifted[set]);
                            if nd == d {
                                dq.push_front(ns);
                            } else {
                                dq.push_back(ns);
                            }
                            closable = true;
                            break;
                        }
                    }
                }
                for &(_, y) in g.incident(x) {
                    if s >> y & 1 == 1 {
                        continue;
                    }
                    let j = pos[y];
                    if set >> j & 1 == 0 {
                        reach[(set | 1 << j) * k + j] |= r;
                    }
                }
            }
        }
    }
    if dist[full as usize] == u8::MAX {
        return Err(internal!("no ear decomposition found for a 2-vertex-connected graph"));
    }
    let phi = dist[full as usize] as usize;
    let mut ears = Vec::new();
    let mut s = full;
    while s.count_ones() > 1 {
        let (p, inner) = parent[s as usize];
        ears.push(find_ear(g, p, inner).ok_or_else(|| internal!("could not rebuild an ear"))?);
        s = p;
    }
    ears.reverse();
    let decomposition = EarDecomposition::from_nontrivial(g, ears);
    // witness T by enumeration, which also cross-checks the max-τ formula
    let uj = UnitJoin::new(g);
    let mut witness = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let t: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let val = t_value(&uj, n, &t);
        if val > phi as i64 {
            return Err(internal!("terminal set {t:?} gives {val} > φ = {phi}"));
        }
        if witness.is_none() && val == phi as i64 {
            witness = Some(t);
        }
    }
    if witness.is_none() {
        return Err(internal!("no terminal set attains φ = {phi}"));
    }
    Ok(MinEven { decomposition, phi, witness_t: witness, route: SearchRoute::SubsetDp })
}

// An ear starting in `p`, running through exactly `inner` and ending in `p`.
fn find_ear(g: &Multigraph, p: u32, inner: u32) -> Option<Ear> {
    let closed = p.count_ones() == 1;
    fn dfs(g: &Multigraph, p: u32, inner: u32, closed: bool, seen: u32, vs: &mut Vec<usize>, es: &mut Vec<usize>) -> bool {
        let x = *vs.last().unwrap();
        if seen == inner {
            let u = vs[0];
            for &(e, w) in g.incident(x) {
                if p >> w & 1 == 0 {
                    continue;
                }
                let ok = if closed { w == u && e != es[0] } else { w != u };
                if ok {
                    vs.push(w);
                    es.push(e);
                    return true;
                }
            }
            return false;
        }
        for &(e, y) in g.incident(x) {
            if inner >> y & 1 == 1 && seen >> y & 1 == 0 {
                vs.push(y);
                es.push(e);
                if dfs(g, p, inner, closed, seen | 1 << y, vs, es) {
                    return true;
                }
                vs.pop();
                es.pop();
            }
        }
        false
    }
    for u in (0..g.n()).filter(|&u| p >> u & 1 == 1) {
        for &(e, y) in g.incident(u) {
            if inner >> y & 1 == 0 {
                continue;
            }
            let mut vs = vec![u, y];
            let mut es = vec![e];
            if dfs(g, p, inner, closed, 1 << y, &mut vs, &mut es) {
                return Some(Ear::new(vs, es));
            }
        }
    }
    None
}

// ---------- certified route ----------

struct Dfs<'a> {
    g: &'a Multigraph,
    full: u128,
    // largest even budget known to fail from this covered set
    failed: HashMap<u128, u32>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    found: Vec<Ear>,
}

impl<'a> Dfs<'a> {
    fn search(&mut self, covered: u128, evens: u32) -> bool {
        if covered == self.full {
            return true;
        }
        let remaining = self.g.n() as u32 - covered.count_ones();
        if remaining % 2 > evens {
            return false;
        }
        if let Some(&f) = self.failed.get(&covered) {
            if evens <= f {
                return false;
            }
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        let closed = covered.count_ones() == 1;
        // odd ears (even number of internal vertices) first
        for want_odd_inner in [false, true] {
            let cost = want_odd_inner as u32;
            if cost > evens {
                continue;
            }
            let starts: Vec<usize> = (0..self.g.n()).filter(|&v| covered >> v & 1 == 1).collect();
            for u in starts {
                let mut vs = vec![u];
                let mut es = Vec::new();
                let hit = self.walk(covered, closed, want_odd_inner, evens - cost, &mut vs, &mut es, 0);
                if hit {
                    return true;
                }
                if self.exhausted {
                    return false;
                }
            }
        }
        let e = self.failed.entry(covered).or_insert(0);
        *e = (*e).max(evens);
        false
    }

    // Extends the path in `vs` through uncovered vertices; tries closing each
    // prefix after its extensions (long ears first).
    #[allow(clippy::too_many_arguments)]
    fn walk(&mut self, covered: u128, closed: bool, want_odd_inner: bool, evens: u32, vs: &mut Vec<usize>, es: &mut Vec<usize>, on_path: u128) -> bool {
        let g = self.g;
        let x = *vs.last().unwrap();
        for &(e, y) in g.incident(x) {
            if covered >> y & 1 == 0 && on_path >> y & 1 == 0 {
                vs.push(y);
                es.push(e);
                if self.walk(covered, closed, want_odd_inner, evens, vs, es, on_path | 1 << y) {
                    return true;
                }
                vs.pop();
                es.pop();
                if self.exhausted {
                    return false;
                }
            }
        }
        let inner = vs.len() - 1;
        if inner == 0 || (inner % 2 == 1) != want_odd_inner {
            return false;
        }
        let u = vs[0];
        for &(e, w) in g.incident(x) {
            if covered >> w & 1 == 0 {
                continue;
            }
            let ok = if closed { w == u && e != es[0] } else { w != u };
            if !ok {
                continue;
            }
            if self.search(covered | on_path, evens) {
                vs.push(w);
                es.push(e);
                self.found.push(Ear::new(vs.clone(), es.clone()));
                vs.pop();
                es.pop();
                return true;
            }
            if self.exhausted {
                return false;
            }
            // every closing vertex leads to the same covered set
            break;
        }
        false
    }
}

fn certified(g: &Multigraph, limits: &SearchLimits) -> Result<MinEven> {
    let n = g.n();
    let uj = UnitJoin::new(g);
    let parity = (n - 1) % 2;
    let mut lb = parity as i64;
    let mut witness: Option<Vec<usize>> = None;
    let consider = |t: Vec<usize>, lb: &mut i64, witness: &mut Option<Vec<usize>>| {
        let v = t_value(&uj, n, &t);
        if v >= *lb && (v > *lb || witness.is_none()) {
            *lb = v;
            *witness = Some(t);
        }
    };
    if n % 2 == 0 {
        consider((0..n).collect(), &mut lb, &mut witness);
    } else {
        for skip in 0..n {
            consider((0..n).filter(|&v| v != skip).collect(), &mut lb, &mut witness);
        }
    }
    let mut improved_once = false;
    let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut dfs = Dfs { g, full, failed: HashMap::new(), nodes: 0, budget: limits.node_budget, exhausted: false, found: Vec::new() };
    let mut target = lb.max(parity as i64) as u32;
    loop {
        if target as usize > n {
            return Err(internal!("even-ear target exceeded the vertex count"));
        }
        dfs.nodes = 0;
        dfs.exhausted = false;
        dfs.found.clear();
        let mut ok = false;
        for r in 0..n {
            if dfs.search(1u128 << r, target) {
                ok = true;
                break;
            }
            if dfs.exhausted {
                break;
            }
        }
        if ok {
            let mut ears = std::mem::take(&mut dfs.found);
            ears.reverse();
            let w = if lb == target as i64 { witness.clone() } else { None };
            return Ok(MinEven { decomposition: EarDecomposition::from_nontrivial(g, ears), phi: target as usize, witness_t: w, route: SearchRoute::CertifiedDfs });
        }
        if !dfs.exhausted {
            // complete refutation of this target
            target += 2;
            continue;
        }
        if !improved_once {
            improved_once = true;
            let better = local_search(&uj, n, witness.clone().unwrap_or_default(), limits.local_search_rounds);
            if better.0 > lb {
                lb = better.0;
                witness = Some(better.1);
                if lb > target as i64 {
                    target = lb as u32;
                }
                continue;
            }
        }
        return Err(Error::Capability(format!("even-ear search budget exhausted at target {target} on {n} vertices")));
    }
}

fn local_search(uj: &UnitJoin, n: usize, start: Vec<usize>, rounds: usize) -> (i64, Vec<usize>) {
    let mut cur = vec![false; n];
    for v in start {
        cur[v] = true;
    }
    let to_t = |m: &[bool]| (0..n).filter(|&v| m[v]).collect::<Vec<_>>();
    let mut best = t_value(uj, n, &to_t(&cur));
    for _ in 0..rounds {
        let mut improved = false;
        for a in 0..n {
            for b in a + 1..n {
                cur[a] ^= true;
                cur[b] ^= true;
                let v = t_value(uj, n, &to_t(&cur));
                if v > best {
                    best = v;
                    improved = true;
                } else {
                    cur[a] ^= true;
                    cur[b] ^= true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    (best, to_t(&cur))
}
