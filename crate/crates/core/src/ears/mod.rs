//! Ear decompositions: representation, validation, construction, the
//! minimum-even search, the nice rewrite rules and the pendant-ear reduction.

mod nice;
mod reduction;
mod search;

pub use nice::{check_nice, is_nice, make_nice};
pub use reduction::{ear_reduction_step, reduce_pendant_ear, Reduction};
pub use search::{min_even_ear_decomposition, min_even_ear_decomposition_with, min_even_ears_2ec, MinEven, SearchLimits, SearchRoute};

use crate::error::{Error, Result};
use crate::graph::{Multigraph, View};
use std::fmt::Write as _;

/// A path or circuit given by its vertex sequence and edge ids. A closed ear
/// repeats its attachment vertex at both ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ear {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Ear {
    pub fn new(vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        Ear { vertices, edges }
    }

    pub fn trivial(g: &Multigraph, e: usize) -> Self {
        let (u, v) = g.edge(e);
        Ear::new(vec![u, v], vec![e])
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    pub fn is_short(&self) -> bool {
        self.len() == 2 || self.len() == 3
    }

    pub fn is_even(&self) -> bool {
        self.len() % 2 == 0
    }

    pub fn inner(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn reversed(&self) -> Ear {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Ear { vertices, edges }
    }

    /// Clean: short and no internal vertex in T.
    pub fn is_clean(&self, in_t: &[bool]) -> bool {
        self.is_short() && self.inner().iter().all(|&v| !in_t[v])
    }

    /// Host ids for an ear of a view.
    pub fn lift(&self, view: &View) -> Ear {
        Ear {
            vertices: self.vertices.iter().map(|&v| view.vertex_of[v]).collect(),
            edges: self.edges.iter().map(|&e| view.edge_of[e]).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EarStats {
    pub k: usize,
    pub nontrivial: usize,
    pub even: usize,
    pub pendant: usize,
    pub pendant2: usize,
    pub pendant3: usize,
}

/// Ordered ears. The first ear is a circuit; nontrivial ears come before the
/// 1-ears in every decomposition this crate produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarDecomposition {
    pub ears: Vec<Ear>,
}

impl EarDecomposition {
    /// Nontrivial ears in order, then every remaining edge of `g` as a 1-ear.
    pub fn from_nontrivial(g: &Multigraph, ears: Vec<Ear>) -> Self {
        let mut used = vec![false; g.m()];
        for ear in &ears {
            for &e in &ear.edges {
                used[e] = true;
            }
        }
        let mut all = ears;
        all.extend((0..g.m()).filter(|&e| !used[e]).map(|e| Ear::trivial(g, e)));
        EarDecomposition { ears: all }
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &Ear> {
        self.ears.iter().filter(|e| !e.is_trivial())
    }

    pub fn is_open(&self) -> bool {
        self.ears.iter().skip(1).all(|e| !e.is_closed())
    }

    pub fn even_count(&self) -> usize {
        self.ears.iter().filter(|e| e.is_even()).count()
    }

    /// Checks the edge partition, attachment order, ear shapes and k = m−n+1.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDecomposition(msg));
        if g.m() + 1 < g.n() || self.ears.len() != g.m() + 1 - g.n() {
            return bad(format!("expected {} ears, found {}", (g.m() + 1).saturating_sub(g.n()), self.ears.len()));
        }
        if self.ears.is_empty() {
            return if g.n() == 1 { Ok(()) } else { bad("no ears".into()) };
        }
        let mut used = vec![false; g.m()];
        let mut covered = vec![false; g.n()];
        for (i, ear) in self.ears.iter().enumerate() {
            if ear.is_empty() || ear.vertices.len() != ear.edges.len() + 1 {
                return bad(format!("ear {i} is malformed"));
            }
            for (j, &e) in ear.edges.iter().enumerate() {
                if e >= g.m() || used[e] {
                    return bad(format!("ear {i} reuses or misnames edge {e}"));
                }
                used[e] = true;
                let (a, b) = g.edge(e);
                let (x, y) = (ear.vertices[j], ear.vertices[j + 1]);
                if !((a == x && b == y) || (a == y && b == x)) {
                    return bad(format!("ear {i}: edge {e} does not join {x} and {y}"));
                }
            }
            let (s, t) = ear.ends();
            if i == 0 {
                if !ear.is_closed() {
                    return bad("first ear must be a circuit".into());
                }
                covered[s] = true;
            } else {
                if !covered[s] || !covered[t] {
                    return bad(format!("ear {i} has an endpoint outside earlier ears"));
                }
                if ear.is_closed() && ear.len() < 2 {
                    return bad(format!("ear {i} is a loop"));
                }
            }
            for &v in ear.inner() {
                if covered[v] {
                    return bad(format!("ear {i}: internal vertex {v} already covered"));
                }
                covered[v] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return bad("some vertex is not covered".into());
        }
        Ok(())
    }

    /// Ear index having `v` as an internal vertex (None for the root).
    pub fn owners(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (i, ear) in self.ears.iter().enumerate() {
            for &v in ear.inner() {
                owner[v] = Some(i);
            }
        }
        owner
    }

    /// For each ear, the nontrivial ears attached at one of its internal vertices.
    pub fn attached(&self, n: usize) -> Vec<Vec<usize>> {
        let owner = self.owners(n);
        let mut att = vec![Vec::new(); self.ears.len()];
        for (j, ear) in self.ears.iter().enumerate() {
            if ear.is_trivial() {
                continue;
            }
            let (s, t) = ear.ends();
            let mut hit: Vec<usize> = [s, t].iter().filter_map(|&v| owner[v]).filter(|&i| i != j).collect();
            hit.dedup();
            for i in hit {
                if !att[i].contains(&j) {
                    att[i].push(j);
                }
            }
        }
        att
    }

    pub fn pendant_flags(&self, n: usize) -> Vec<bool> {
        let att = self.attached(n);
        self.ears.iter().enumerate().map(|(i, e)| !e.is_trivial() && att[i].is_empty()).collect()
    }

    pub fn stats(&self, n: usize) -> EarStats {
        let pend = self.pendant_flags(n);
        let mut s = EarStats { k: self.ears.len(), even: self.even_count(), ..Default::default() };
        for (i, ear) in self.ears.iter().enumerate() {
            if !ear.is_trivial() {
                s.nontrivial += 1;
            }
            if pend[i] {
                s.pendant += 1;
                match ear.len() {
                    2 => s.pendant2 += 1,
                    3 => s.pendant3 += 1,
                    _ => {}
                }
            }
        }
        s
    }

    /// Eardrum associated with this decomposition and T: the internal vertex
    /// sets of the clean ears.
    pub fn eardrum(&self, g: &Multigraph, t: &[usize]) -> Eardrum {
        let in_t = mark(g.n(), t);
        let mut cores = Vec::new();
        let mut ear_of = Vec::new();
        for (i, ear) in self.ears.iter().enumerate() {
            if ear.is_clean(&in_t) {
                cores.push(ear.inner().to_vec());
                ear_of.push(i);
            }
        }
        Eardrum { cores, ear_of }
    }

    /// One line per ear: `ear <idx> kind=<open|closed> edges=<ids> flags=<...>`.
    pub fn dump(&self, n: usize, t: &[usize]) -> String {
        let in_t = mark(n, t);
        let pend = self.pendant_flags(n);
        let mut s = String::new();
        for (i, ear) in self.ears.iter().enumerate() {
            let mut flags = Vec::new();
            if ear.is_trivial() {
                flags.push("trivial");
            }
            if ear.is_short() {
                flags.push("short");
            }
            if ear.is_even() {
                flags.push("even");
            }
            if pend[i] {
                flags.push("pendant");
            }
            if ear.is_clean(&in_t) {
                flags.push("clean");
            }
            let edges: Vec<String> = ear.edges.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(
                s,
                "ear {i} kind={} edges={} flags={}",
                if ear.is_closed() { "closed" } else { "open" },
                edges.join(","),
                if flags.is_empty() { "-".to_string() } else { flags.join(",") }
            );
        }
        s
    }
}

/// Short-ear cores: one or two vertices each, with the ear that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eardrum {
    pub cores: Vec<Vec<usize>>,
    pub ear_of: Vec<usize>,
}

impl Eardrum {
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cores.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }

    /// Cores avoid T and are exactly the components of the subgraph they induce.
    pub fn validate(&self, g: &Multigraph, t: &[usize]) -> Result<()> {
        let mut core_of = vec![usize::MAX; g.n()];
        for (i, c) in self.cores.iter().enumerate() {
            if c.is_empty() || c.len() > 2 {
                return Err(Error::Precondition(format!("core {i} has {} vertices", c.len())));
            }
            for &v in c {
                if core_of[v] != usize::MAX {
                    return Err(Error::Precondition(format!("vertex {v} lies in two cores")));
                }
                core_of[v] = i;
            }
            if c.len() == 2 && g.edge_between(c[0], c[1]).is_none() {
                return Err(Error::Precondition(format!("core {i} is not an edge")));
            }
        }
        if t.iter().any(|&v| core_of[v] != usize::MAX) {
            return Err(Error::Precondition("a core vertex lies in T".into()));
        }
        for &(u, v) in g.edges() {
            if core_of[u] != usize::MAX && core_of[v] != usize::MAX && core_of[u] != core_of[v] {
                return Err(Error::Precondition(format!("cores of {u} and {v} are adjacent")));
            }
        }
        Ok(())
    }
}

pub fn mark(n: usize, t: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in t {
        m[v] = true;
    }
    m
}

/// Some open ear decomposition of a 2-vertex-connected graph, built by
/// repeatedly growing a path out of the covered part; 1-ears last.
pub fn open_ear_decomposition(g: &Multigraph) -> Result<EarDecomposition> {
    if !g.is_two_vertex_connected() {
        return Err(Error::NotTwoVertexConnected);
    }
    let n = g.n();
    let mut used = vec![false; g.m()];
    let mut covered = vec![false; n];
    let mut ears = Vec::new();
    // first circuit through vertex 0
    let (e0, x0) = g.incident(0)[0];
    let path = bfs_path(g, x0, |v| v == 0, |_| true, Some(e0), &covered).ok_or_else(|| crate::error::internal!("no circuit through vertex 0"))?;
    let mut vs = vec![0, x0];
    let mut es = vec![e0];
    vs.extend(path.0);
    es.extend(path.1);
    ears.push(Ear::new(vs, es));
    loop {
        let last = ears.last().unwrap();
        for &e in &last.edges {
            used[e] = true;
        }
        for &v in &last.vertices {
            covered[v] = true;
        }
        // lowest edge from the covered part into uncovered territory
        let next = (0..g.m()).find(|&e| {
            let (a, b) = g.edge(e);
            !used[e] && covered[a] != covered[b]
        });
        let Some(e) = next else { break };
        let (a, b) = g.edge(e);
        let (u, w) = if covered[a] { (a, b) } else { (b, a) };
        let cov = covered.clone();
        let path = bfs_path(g, w, |v| cov[v] && v != u, |v| v != u, None, &covered).ok_or(Error::NotTwoVertexConnected)?;
        let mut vs = vec![u, w];
        let mut es = vec![e];
        vs.extend(path.0);
        es.extend(path.1);
        ears.push(Ear::new(vs, es));
    }
    let d = EarDecomposition::from_nontrivial(g, ears);
    d.validate(g)?;
    Ok(d)
}

// Shortest path from `s` to a vertex satisfying `target`, moving only through
// uncovered vertices allowed by `pass`, never using `skip_edge`. Returns the
// vertices after `s` and the edges.
fn bfs_path(
    g: &Multigraph,
    s: usize,
    target: impl Fn(usize) -> bool,
    pass: impl Fn(usize) -> bool,
    skip_edge: Option<usize>,
    covered: &[bool],
) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut pred: Vec<Option<usize>> = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut q = std::collections::VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &(e, x) in g.incident(v) {
            if Some(e) == skip_edge || seen[x] {
                continue;
            }
            if target(x) {
                let mut vs = vec![x];
                let mut es = vec![e];
                let mut cur = v;
                while cur != s {
                    let pe = pred[cur].unwrap();
                    vs.push(cur);
                    es.push(pe);
                    cur = g.other(pe, cur);
                }
                vs.reverse();
                es.reverse();
                return Some((vs, es));
            }
            if !covered[x] && pass(x) {
                seen[x] = true;
                pred[x] = Some(e);
                q.push_back(x);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests;
