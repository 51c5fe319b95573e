//! Loopless undirected multigraphs, edge-multiplicity solutions, and block structure.

use crate::error::{Error, Result};
use petgraph::unionfind::UnionFind;
use std::fmt::Write as _;

/// Undirected multigraph on vertices `0..n`. Edge ids are positions in `edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    // (edge id, other endpoint), in edge-id order
    adj: Vec<Vec<(usize, usize)>>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be at least 1".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {id} has an endpoint out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {id} is a loop")));
            }
            adj[u].push((id, v));
            adj[v].push((id, u));
        }
        Ok(Multigraph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Endpoint of `e` other than `v`.
    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Incident `(edge id, neighbor)` pairs of `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Lowest-id edge joining `u` and `v`.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|&&(_, w)| w == v).map(|&(e, _)| e)
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adj[u].iter().filter(|&&(_, w)| w == v).count()
    }

    /// Subgraph induced by `vertices` (listed in the order they get local ids).
    pub fn induced(&self, vertices: &[usize]) -> View {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edge_of = Vec::new();
        let mut edges = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edge_of.push(id);
                edges.push((local[u], local[v]));
            }
        }
        View::build(vertices.len(), edges, vertices.to_vec(), edge_of, local)
    }

    /// Subgraph formed by `edge_ids` on the vertices they touch.
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> View {
        let mut local = vec![usize::MAX; self.n];
        let mut vertex_of = Vec::new();
        let mut edges = Vec::with_capacity(edge_ids.len());
        for &id in edge_ids {
            let (u, v) = self.edges[id];
            for x in [u, v] {
                if local[x] == usize::MAX {
                    local[x] = vertex_of.len();
                    vertex_of.push(x);
                }
            }
            edges.push((local[u], local[v]));
        }
        View::build(vertex_of.len(), edges, vertex_of, edge_ids.to_vec(), local)
    }

    pub fn is_connected(&self) -> bool {
        components(self).len() == 1
    }

    pub fn is_two_edge_connected(&self) -> bool {
        self.is_connected() && bridges(self).is_empty()
    }

    /// Two vertices joined by at least two parallel edges count as 2-vertex-connected.
    pub fn is_two_vertex_connected(&self) -> bool {
        match self.n {
            1 => false,
            2 => self.m() >= 2,
            _ => self.is_connected() && articulation_points(self).is_empty(),
        }
    }

    /// Instance file text with 1-indexed vertices.
    pub fn to_instance(&self, t: Option<&[usize]>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p {} {}", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "e {} {}", u + 1, v + 1);
        }
        if let Some(t) = t {
            s.push('t');
            for &v in t {
                let _ = write!(s, " {}", v + 1);
            }
            s.push('\n');
        }
        s
    }
}

/// A subgraph with local ids and the maps back to the host graph.
#[derive(Clone, Debug)]
pub struct View {
    pub graph: Multigraph,
    pub vertex_of: Vec<usize>,
    pub edge_of: Vec<usize>,
    local: Vec<usize>,
}

impl View {
    fn build(n: usize, edges: Vec<(usize, usize)>, vertex_of: Vec<usize>, edge_of: Vec<usize>, local: Vec<usize>) -> View {
        let graph = Multigraph::new(n.max(1), edges).expect("view of a valid graph");
        View { graph, vertex_of, edge_of, local }
    }

    pub fn local_vertex(&self, v: usize) -> Option<usize> {
        match self.local.get(v) {
            Some(&x) if x != usize::MAX => Some(x),
            _ => None,
        }
    }

    /// Host vertex set of the local vertex set `t`.
    pub fn lift_vertices(&self, t: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = t.iter().map(|&v| self.vertex_of[v]).collect();
        out.sort_unstable();
        out
    }

    /// Local terminal set from a host set (vertices outside the view are dropped).
    pub fn restrict_vertices(&self, t: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = t.iter().filter_map(|&v| self.local_vertex(v)).collect();
        out.sort_unstable();
        out
    }

    /// Adds a local solution into a host solution.
    pub fn lift_into(&self, local: &Solution, host: &mut Solution) {
        for (e, k) in local.iter() {
            host.add(self.edge_of[e], k);
        }
    }
}

/// Multiplicity per edge id. Tours, connected T-joins and 2ECSS live here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Solution {
    mult: Vec<u8>,
}

impl Solution {
    pub fn empty(m: usize) -> Self {
        Solution { mult: vec![0; m] }
    }

    pub fn from_mult(mult: Vec<u8>) -> Self {
        Solution { mult }
    }

    pub fn from_edges(m: usize, edges: &[usize]) -> Self {
        let mut s = Solution::empty(m);
        for &e in edges {
            s.add(e, 1);
        }
        s
    }

    pub fn m(&self) -> usize {
        self.mult.len()
    }

    pub fn get(&self, e: usize) -> u8 {
        self.mult[e]
    }

    pub fn set(&mut self, e: usize, k: u8) {
        self.mult[e] = k;
    }

    pub fn add(&mut self, e: usize, k: u8) {
        self.mult[e] += k;
    }

    pub fn toggle(&mut self, e: usize) {
        self.mult[e] ^= 1;
    }

    pub fn mult(&self) -> &[u8] {
        &self.mult
    }

    pub fn cardinality(&self) -> usize {
        self.mult.iter().map(|&k| k as usize).sum()
    }

    pub fn max_multiplicity(&self) -> u8 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    /// Nonzero `(edge id, multiplicity)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.mult.iter().enumerate().filter(|(_, &k)| k > 0).map(|(e, &k)| (e, k))
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter().map(|(e, _)| e).collect()
    }

    /// Vertices of odd degree, counting multiplicities.
    pub fn odd_vertices(&self, g: &Multigraph) -> Vec<usize> {
        let mut odd = vec![false; g.n()];
        for (e, k) in self.iter() {
            if k % 2 == 1 {
                let (u, v) = g.edge(e);
                odd[u] ^= true;
                odd[v] ^= true;
            }
        }
        (0..g.n()).filter(|&v| odd[v]).collect()
    }

    /// Whether the support spans `g` and is connected.
    pub fn is_spanning_connected(&self, g: &Multigraph) -> bool {
        let mut uf = UnionFind::new(g.n());
        let mut parts = g.n();
        for e in self.support() {
            let (u, v) = g.edge(e);
            if uf.union(u, v) {
                parts -= 1;
            }
        }
        parts == 1
    }
}

/// Parsed instance: graph plus optional terminal set.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Multigraph,
    pub t: Option<Vec<usize>>,
}

pub fn parse_graph(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut t: Option<Vec<usize>> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('c') {
            continue;
        }
        let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut parts = s.split_whitespace();
        let tag = parts.next().unwrap();
        let nums: std::result::Result<Vec<usize>, _> = parts.map(|p| p.parse::<usize>()).collect();
        let nums = nums.map_err(|_| err("expected non-negative integers"))?;
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate header"));
                }
                if nums.len() != 2 {
                    return Err(err("header must be `p <n> <m>`"));
                }
                if nums[0] == 0 {
                    return Err(err("vertex count must be at least 1"));
                }
                header = Some((nums[0], nums[1]));
            }
            "e" => {
                let (n, m) = header.ok_or_else(|| err("edge before header"))?;
                if nums.len() != 2 {
                    return Err(err("edge must be `e <u> <v>`"));
                }
                let (u, v) = (nums[0], nums[1]);
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(err("vertex out of range"));
                }
                if u == v {
                    return Err(err("loop edge"));
                }
                if edges.len() == m {
                    return Err(err("more edges than declared"));
                }
                edges.push((u - 1, v - 1));
            }
            "t" => {
                let (n, _) = header.ok_or_else(|| err("terminal line before header"))?;
                if t.is_some() {
                    return Err(err("duplicate terminal line"));
                }
                let mut set = Vec::with_capacity(nums.len());
                for &v in &nums {
                    if v == 0 || v > n {
                        return Err(err("vertex out of range"));
                    }
                    set.push(v - 1);
                }
                set.sort_unstable();
                if set.windows(2).any(|w| w[0] == w[1]) {
                    return Err(err("repeated terminal"));
                }
                if set.len() % 2 == 1 {
                    return Err(err("odd number of terminals"));
                }
                t = Some(set);
            }
            _ => return Err(err("unknown line type")),
        }
    }
    let (n, m) = header.ok_or(Error::Parse { line: last_line.max(1), msg: "missing header".into() })?;
    if edges.len() != m {
        return Err(Error::Parse { line: last_line.max(1), msg: format!("expected {m} edges, found {}", edges.len()) });
    }
    Ok(Instance { graph: Multigraph::new(n, edges)?, t })
}

/// Connected components as sorted vertex lists, ordered by smallest vertex.
pub fn components(g: &Multigraph) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut verts = Vec::new();
        while let Some(v) = stack.pop() {
            verts.push(v);
            for &(_, w) in g.incident(v) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        verts.sort_unstable();
        out.push(verts);
    }
    out
}

// Iterative lowpoint DFS keyed by parent edge id, so parallel edges are handled.
struct Lowpoint {
    disc: Vec<usize>,
    low: Vec<usize>,
    parent_edge: Vec<usize>,
    order: Vec<usize>,
}

fn lowpoint(g: &Multigraph) -> Lowpoint {
    let n = g.n();
    let mut lp = Lowpoint { disc: vec![usize::MAX; n], low: vec![0; n], parent_edge: vec![usize::MAX; n], order: Vec::new() };
    let mut time = 0;
    for s in 0..n {
        if lp.disc[s] != usize::MAX {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        lp.disc[s] = time;
        lp.low[s] = time;
        time += 1;
        lp.order.push(s);
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < g.incident(v).len() {
                let (e, w) = g.incident(v)[*i];
                *i += 1;
                if e == lp.parent_edge[v] {
                    continue;
                }
                if lp.disc[w] == usize::MAX {
                    lp.disc[w] = time;
                    lp.low[w] = time;
                    time += 1;
                    lp.parent_edge[w] = e;
                    lp.order.push(w);
                    stack.push((w, 0));
                } else {
                    lp.low[v] = lp.low[v].min(lp.disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    lp.low[p] = lp.low[p].min(lp.low[v]);
                }
            }
        }
    }
    lp
}

/// Bridge edge ids in increasing order.
pub fn bridges(g: &Multigraph) -> Vec<usize> {
    let lp = lowpoint(g);
    let mut out: Vec<usize> = (0..g.n())
        .filter(|&v| lp.parent_edge[v] != usize::MAX && lp.low[v] > lp.disc[g.other(lp.parent_edge[v], v)])
        .map(|v| lp.parent_edge[v])
        .collect();
    out.sort_unstable();
    out
}

pub fn articulation_points(g: &Multigraph) -> Vec<usize> {
    let lp = lowpoint(g);
    let mut children = vec![0usize; g.n()];
    let mut cut = vec![false; g.n()];
    for v in 0..g.n() {
        let pe = lp.parent_edge[v];
        if pe == usize::MAX {
            continue;
        }
        let p = g.other(pe, v);
        children[p] += 1;
        if lp.parent_edge[p] != usize::MAX && lp.low[v] >= lp.disc[p] {
            cut[p] = true;
        }
    }
    for v in 0..g.n() {
        if lp.parent_edge[v] == usize::MAX && children[v] >= 2 {
            cut[v] = true;
        }
    }
    (0..g.n()).filter(|&v| cut[v]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub components: Vec<Vec<usize>>,
    pub bridges: Vec<usize>,
    pub is_2ec: bool,
    pub is_2vc: bool,
}

pub fn connectivity_report(g: &Multigraph) -> ConnectivityReport {
    let comps = components(g);
    let br = bridges(g);
    ConnectivityReport {
        is_2ec: comps.len() == 1 && br.is_empty(),
        is_2vc: g.is_two_vertex_connected(),
        components: comps,
        bridges: br,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTree {
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<usize>,
    pub block_of_edge: Vec<usize>,
}

/// Block decomposition of a connected multigraph.
pub fn blocks(g: &Multigraph) -> Result<BlockTree> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.m() == 0 {
        return Ok(BlockTree { blocks: vec![Block { vertices: vec![0], edges: vec![] }], cut_vertices: vec![], block_of_edge: vec![] });
    }
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut block_of_edge = vec![usize::MAX; g.m()];
    let mut edge_seen = vec![false; g.m()];
    let mut estack: Vec<usize> = Vec::new();
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut time = 0;
    // frames: (vertex, parent edge, next incidence index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    time += 1;
    while let Some(&mut (v, pe, ref mut i)) = stack.last_mut() {
        if *i < g.incident(v).len() {
            let (e, w) = g.incident(v)[*i];
            *i += 1;
            if e == pe || edge_seen[e] {
                continue;
            }
            edge_seen[e] = true;
            estack.push(e);
            if disc[w] == usize::MAX {
                disc[w] = time;
                low[w] = time;
                time += 1;
                stack.push((w, e, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut es = Vec::new();
                    while let Some(e) = estack.pop() {
                        es.push(e);
                        if e == pe {
                            break;
                        }
                    }
                    raw.push(es);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(raw.len());
    let mut count = vec![0usize; n];
    for mut es in raw {
        es.sort_unstable();
        let mut vs: Vec<usize> = es.iter().flat_map(|&e| [g.edge(e).0, g.edge(e).1]).collect();
        vs.sort_unstable();
        vs.dedup();
        for &v in &vs {
            count[v] += 1;
        }
        out.push(Block { vertices: vs, edges: es });
    }
    out.sort_by(|a, b| a.edges[0].cmp(&b.edges[0]));
    for (i, b) in out.iter().enumerate() {
        for &e in &b.edges {
            block_of_edge[e] = i;
        }
    }
    let cut_vertices = (0..n).filter(|&v| count[v] >= 2).collect();
    Ok(BlockTree { blocks: out, cut_vertices, block_of_edge })
}

impl BlockTree {
    /// Per-block terminal sets: a cut vertex joins a block's set exactly when that
    /// makes the set even, which keeps every block instance feasible.
    pub fn split_terminals(&self, g: &Multigraph, t: &[usize]) -> Vec<Vec<usize>> {
        let mut in_t = vec![false; g.n()];
        for &v in t {
            in_t[v] = true;
        }
        let mut is_cut = vec![false; g.n()];
        for &v in &self.cut_vertices {
            is_cut[v] = true;
        }
        let mut out = Vec::with_capacity(self.blocks.len());
        for (bi, b) in self.blocks.iter().enumerate() {
            let mut tb = Vec::new();
            for &v in &b.vertices {
                if !is_cut[v] {
                    if in_t[v] {
                        tb.push(v);
                    }
                    continue;
                }
                // terminals hanging off v outside this block
                let mut seen = vec![false; g.n()];
                seen[v] = true;
                let mut stack = vec![v];
                let mut odd = false;
                while let Some(x) = stack.pop() {
                    for &(e, y) in g.incident(x) {
                        if self.block_of_edge[e] == bi || seen[y] {
                            continue;
                        }
                        seen[y] = true;
                        odd ^= in_t[y];
                        stack.push(y);
                    }
                }
                if in_t[v] ^ odd {
                    tb.push(v);
                }
            }
            out.push(tb);
        }
        out
    }
}

/// Whether the edge set `es` forms a 2-edge-connected spanning subgraph of `g`.
pub fn is_2ec_spanning(g: &Multigraph, es: &[usize]) -> bool {
    let edges: Vec<(usize, usize)> = es.iter().map(|&e| g.edge(e)).collect();
    Multigraph::new(g.n(), edges).map(|h| h.is_two_edge_connected()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Multigraph {
        Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn parses_triangle() {
        let inst = parse_graph("p 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(inst.graph.m(), 3);
        assert!(inst.t.is_none());
    }

    #[test]
    fn parses_parallel_edges_with_terminals() {
        let inst = parse_graph("c two copies\np 2 2\ne 1 2\ne 1 2\nt 1 2\n").unwrap();
        assert_eq!(inst.graph.multiplicity(0, 1), 2);
        assert_eq!(inst.t, Some(vec![0, 1]));
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(parse_graph("p 2 1\ne 1 1\n").unwrap_err(), Error::Parse { line: 2, msg: "loop edge".into() });
        assert!(matches!(parse_graph("p 2 1\ne 1 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("p 3 1\ne 1 2\nt 1 2 3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("p 3 2\ne 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("p 3 1\nx 1 2\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn instance_text_round_trips() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 1)]).unwrap();
        let inst = parse_graph(&g.to_instance(Some(&[0, 2]))).unwrap();
        assert_eq!(inst.graph, g);
        assert_eq!(inst.t, Some(vec![0, 2]));
    }

    #[test]
    fn two_triangles_sharing_a_vertex() {
        let g = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let bt = blocks(&g).unwrap();
        assert_eq!(bt.blocks.len(), 2);
        assert_eq!(bt.cut_vertices, vec![2]);
    }

    #[test]
    fn cycle_is_one_block() {
        let bt = blocks(&cycle(6)).unwrap();
        assert_eq!(bt.blocks.len(), 1);
        assert!(bt.cut_vertices.is_empty());
    }

    #[test]
    fn path_has_bridge_blocks() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let bt = blocks(&g).unwrap();
        assert_eq!(bt.blocks.len(), 3);
        assert_eq!(bt.cut_vertices, vec![1, 2]);
        assert!(bt.blocks.iter().all(|b| b.edges.len() == 1));
    }

    #[test]
    fn disconnected_blocks_error() {
        let g = Multigraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(blocks(&g), Err(Error::Disconnected));
    }

    #[test]
    fn connectivity_examples() {
        let r = connectivity_report(&cycle(4));
        assert_eq!((r.components.len(), r.bridges.len(), r.is_2ec, r.is_2vc), (1, 0, true, true));
        let p = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let r = connectivity_report(&p);
        assert_eq!(r.bridges, vec![0, 1]);
        assert!(!r.is_2ec);
        let d = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let r = connectivity_report(&d);
        assert!(r.is_2ec && r.is_2vc);
    }

    #[test]
    fn terminal_split_is_even_per_block() {
        // path 0-1-2-3 with T = {0, 3}: every bridge block gets both endpoints
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let bt = blocks(&g).unwrap();
        let ts = bt.split_terminals(&g, &[0, 3]);
        assert_eq!(ts, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        let ts = bt.split_terminals(&g, &[]);
        assert!(ts.iter().all(|t| t.is_empty()));
    }
}
