//! The approximation algorithms: connected T-joins (3/2), graphic TSP (7/5),
//! 2ECSS (4/3), their building blocks, and a Christofides-style baseline.
//! Every per-block result is checked against lower bounds computed in the
//! same run; a failed check is an error, never a silent result.

use crate::bounds::{l_mu, l_phi, lambda, MuDualWitness};
use crate::earmuff::{max_earmuff, reroot_ears, Earmuff, MuffCertificate};
use crate::ears::{make_nice, mark, min_even_ear_decomposition_with, open_ear_decomposition, reduce_pendant_ear, Ear, EarDecomposition, Eardrum, SearchLimits, SearchRoute};
use crate::error::{internal, Error, Result};
use crate::graph::{blocks, is_2ec_spanning, Multigraph, Solution, View};
use crate::lp::Q;
use crate::oracle::{opt_2ecss, opt_connected_tjoin, OracleLimits};
use crate::tjoin::{constrained_odd_join, RemovablePairing, UnitJoin};

/// Nice ear decomposition holding a maximum earmuff for its eardrum and T.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub decomposition: EarDecomposition,
    pub drum: Eardrum,
    pub muff: Earmuff,
    pub cert: MuffCertificate,
    pub phi: usize,
    pub route: SearchRoute,
}

impl Pipeline {
    pub fn mu(&self) -> usize {
        self.muff.size()
    }

    pub fn pendant(&self, n: usize) -> usize {
        self.decomposition.pendant_flags(n).iter().filter(|&&p| p).count()
    }
}

/// Minimum-even open decomposition, nice rewrite, maximum earmuff, reroot.
pub fn nice_muffed_decomposition(g: &Multigraph, t: &[usize], limits: &SearchLimits) -> Result<Pipeline> {
    if !g.is_two_vertex_connected() {
        return Err(Error::NotTwoVertexConnected);
    }
    let me = min_even_ear_decomposition_with(g, limits)?;
    if !me.decomposition.is_open() {
        return Err(internal!("minimum-even decomposition of a 2VC graph is not open"));
    }
    let (nice, drum) = make_nice(g, &me.decomposition, t)?;
    let (muff, _) = max_earmuff(g, &drum)?;
    let d = reroot_ears(g, &nice, &drum, &muff, t)?;
    // the eardrum is unchanged up to order; recompute against the new indices
    let drum = d.eardrum(g, t);
    let (muff2, cert) = max_earmuff(g, &drum)?;
    if muff2.size() != muff.size() {
        return Err(internal!("earmuff size changed after rerooting"));
    }
    if d.even_count() != me.phi {
        return Err(internal!("pipeline lost φ-optimality"));
    }
    Ok(Pipeline { decomposition: d, drum, muff: muff2, cert, phi: me.phi, route: me.route })
}

/// Sizes and bounds of the four-phase earmuff construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EarmuffTrace {
    pub v0: usize,
    pub v1: usize,
    pub vm: usize,
    pub phi0: usize,
    pub phi1: usize,
    pub phi_m: usize,
    pub e1: usize,
    pub e2: usize,
    pub e3: usize,
    pub e4: usize,
    /// 2·(L_μ + ½L_φ − π), kept doubled to stay integral.
    pub bound_x2: usize,
}

/// Connected T-join from the clean ears, a connecting forest in G[V₀], the
/// pendant-ear reductions and a minimum T₀-join in G[V₀].
pub fn connected_tjoin_via_earmuff(g: &Multigraph, t: &[usize], p: &Pipeline) -> Result<(Solution, EarmuffTrace)> {
    let n = g.n();
    let d = &p.decomposition;
    let in_t = mark(n, t);
    let pend = d.pendant_flags(n);
    let mut clean = vec![false; d.ears.len()];
    for &i in &p.drum.ear_of {
        clean[i] = true;
    }
    let mut zone = vec![0u8; n]; // 0: V₀, 1: V₁, 2: V_M
    let mut tr = EarmuffTrace::default();
    for (i, ear) in d.ears.iter().enumerate() {
        if clean[i] {
            for &v in ear.inner() {
                zone[v] = 2;
            }
            tr.phi_m += ear.is_even() as usize;
        } else if pend[i] {
            for &v in ear.inner() {
                zone[v] = 1;
            }
            tr.phi1 += ear.is_even() as usize;
        }
    }
    tr.phi0 = d.even_count() - tr.phi1 - tr.phi_m;
    tr.v0 = zone.iter().filter(|&&z| z == 0).count();
    tr.v1 = zone.iter().filter(|&&z| z == 1).count();
    tr.vm = zone.iter().filter(|&&z| z == 2).count();

    let mut sol = Solution::empty(g.m());
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // E1: clean ears
    for (i, ear) in d.ears.iter().enumerate() {
        if clean[i] {
            for &e in &ear.edges {
                sol.add(e, 1);
                tr.e1 += 1;
                let (a, b) = g.edge(e);
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                uf[ra] = rb;
            }
        }
    }
    let mu = p.mu();
    let comps = (0..n).filter(|&v| zone[v] != 1 && find(&mut uf, v) == v).count();
    if comps != tr.v0 - mu {
        return Err(internal!("clean ears leave {comps} components, expected |V₀| − μ = {}", tr.v0 - mu));
    }
    // E2: spanning-forest merge inside G[V₀] in edge-id order
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if zone[a] == 0 && zone[b] == 0 {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra != rb {
                uf[ra] = rb;
                sol.add(e, 1);
                tr.e2 += 1;
            }
        }
    }
    if tr.e2 + 1 + mu != tr.v0 {
        return Err(internal!("connecting edges: {} instead of |V₀| − μ − 1", tr.e2));
    }
    // E3: pendant ears that are not clean
    for (i, ear) in d.ears.iter().enumerate() {
        if pend[i] && !clean[i] {
            let red = reduce_pendant_ear(g, ear, t)?;
            for (e, k) in red.f_prime.iter() {
                sol.add(e, k);
                tr.e3 += k as usize;
            }
        }
    }
    // E4: fix parities inside V₀
    let mut deg = vec![0usize; n];
    for (e, k) in sol.iter() {
        let (a, b) = g.edge(e);
        deg[a] += k as usize;
        deg[b] += k as usize;
    }
    for v in 0..n {
        if zone[v] != 0 && (deg[v] % 2 == 1) != in_t[v] {
            return Err(internal!("vertex {v} outside V₀ has the wrong parity"));
        }
    }
    let t0: Vec<usize> = (0..n).filter(|&v| zone[v] == 0 && (deg[v] % 2 == 1) != in_t[v]).collect();
    let v0: Vec<usize> = (0..n).filter(|&v| zone[v] == 0).collect();
    let view = g.induced(&v0);
    if v0.len() > 1 && !view.graph.is_two_edge_connected() {
        return Err(internal!("G[V₀] is not 2-edge-connected"));
    }
    if !t0.is_empty() {
        let local_t0 = view.restrict_vertices(&t0);
        let j = UnitJoin::new(&view.graph).join(&local_t0)?;
        tr.e4 = j.cardinality();
        view.lift_into(&j, &mut sol);
    }
    let pi = pend.iter().filter(|&&x| x).count();
    let lmu = n - 1 + p.drum.len() - mu;
    let lphi = l_phi(n, p.phi);
    tr.bound_x2 = (2 * lmu + lphi).checked_sub(2 * pi).ok_or_else(|| internal!("negative earmuff bound"))?;
    check_connected_tjoin(g, t, &sol)?;
    if 2 * sol.cardinality() > tr.bound_x2 {
        return Err(Error::BoundViolated(format!("earmuff construction has {} edges, bound {}/2", sol.cardinality(), tr.bound_x2)));
    }
    Ok((sol, tr))
}

/// Peels the nontrivial ears in reverse order, keeping each ear's F′.
pub fn connected_tjoin_via_induction(g: &Multigraph, t: &[usize], d: &EarDecomposition, phi: usize) -> Result<Solution> {
    let n = g.n();
    let mut cur = t.to_vec();
    let mut sol = Solution::empty(g.m());
    let mut pi2 = 0;
    let pend = d.pendant_flags(n);
    for (i, ear) in d.ears.iter().enumerate().rev() {
        if ear.is_trivial() {
            continue;
        }
        if pend[i] && ear.len() == 2 {
            pi2 += 1;
        }
        let red = reduce_pendant_ear(g, ear, &cur)?;
        for (e, k) in red.f_prime.iter() {
            sol.add(e, k);
        }
        cur = red.s_prime;
    }
    if !cur.is_empty() {
        return Err(internal!("parity set {cur:?} left at the root"));
    }
    check_connected_tjoin(g, t, &sol)?;
    // 2|F| ≤ 3(n−1) + 2π₂ − φ
    if 2 * sol.cardinality() + phi > 3 * (n - 1) + 2 * pi2 {
        return Err(Error::BoundViolated(format!("ear induction gives {} edges", sol.cardinality())));
    }
    Ok(sol)
}

/// One pair per non-pendant ear at an internal vertex where another
/// nontrivial ear attaches, and the first edge of every pendant ear.
pub fn removable_pairing_from_ears(g: &Multigraph, d: &EarDecomposition) -> Result<RemovablePairing> {
    if d.ears.iter().any(|e| e.is_trivial()) {
        return Err(Error::Precondition("pairing from ears needs a decomposition without 1-ears".into()));
    }
    let n = g.n();
    let pend = d.pendant_flags(n);
    let mut endpoint = vec![false; n];
    let mut r = Vec::new();
    let mut pairs = Vec::new();
    for (i, ear) in d.ears.iter().enumerate() {
        if pend[i] {
            r.push(ear.edges[0]);
            continue;
        }
        for e in &mut endpoint {
            *e = false;
        }
        for (j, other) in d.ears.iter().enumerate() {
            if j != i {
                let (a, b) = other.ends();
                endpoint[a] = true;
                endpoint[b] = true;
            }
        }
        let pos = (1..ear.vertices.len() - 1)
            .find(|&j| endpoint[ear.vertices[j]])
            .ok_or_else(|| internal!("non-pendant ear {i} has no attachment vertex"))?;
        let pair = [ear.edges[pos - 1], ear.edges[pos]];
        r.extend(pair);
        pairs.push((pair, ear.vertices[pos]));
    }
    let k = d.ears.len();
    let pi = pend.iter().filter(|&&x| x).count();
    if r.len() != 2 * k - pi {
        return Err(internal!("|R| = {} instead of 2k − π", r.len()));
    }
    let p = RemovablePairing { r, pairs };
    p.validate(g)?;
    Ok(p)
}

/// Exhaustive check that deleting any S ⊆ R meeting each pair at most once
/// keeps the graph connected. Only maximal S need checking.
pub fn pairing_keeps_connectivity(g: &Multigraph, p: &RemovablePairing) -> Result<bool> {
    if p.r.len() > 20 {
        return Err(Error::Capability("exhaustive pairing check limited to |R| ≤ 20".into()));
    }
    let mut paired = vec![false; g.m()];
    for &([a, b], _) in &p.pairs {
        paired[a] = true;
        paired[b] = true;
    }
    let free: Vec<usize> = p.r.iter().copied().filter(|&e| !paired[e]).collect();
    for choice in 0u32..(1 << p.pairs.len()) {
        let mut gone = vec![false; g.m()];
        for &e in &free {
            gone[e] = true;
        }
        for (i, &([a, b], _)) in p.pairs.iter().enumerate() {
            gone[if choice >> i & 1 == 0 { a } else { b }] = true;
        }
        let keep: Vec<usize> = (0..g.m()).filter(|&e| !gone[e]).collect();
        if !Solution::from_edges(g.m(), &keep).is_spanning_connected(g) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tour from E(G): double F∖R and drop F∩R for a pair-respecting odd join F
/// of minimum weight (−1 on R, +1 elsewhere).
pub fn ms_tour(g: &Multigraph, pairing: &RemovablePairing) -> Result<Solution> {
    if !g.is_two_vertex_connected() {
        return Err(Error::NotTwoVertexConnected);
    }
    let (f, _) = constrained_odd_join(g, pairing)?;
    let mut in_r = vec![false; g.m()];
    for &e in &pairing.r {
        in_r[e] = true;
    }
    let mut tour = Solution::from_edges(g.m(), &(0..g.m()).collect::<Vec<_>>());
    for (e, _) in f.iter() {
        tour.set(e, if in_r[e] { 0 } else { 2 });
    }
    check_connected_tjoin(g, &[], &tour)?;
    if 3 * tour.cardinality() + 2 * pairing.r.len() > 4 * g.m() {
        return Err(Error::BoundViolated(format!("tour of {} edges above (4|E| − 2|R|)/3", tour.cardinality())));
    }
    Ok(tour)
}

/// Turns a tour into a 2ECSS: each doubled edge loses its second copy, or
/// trades it for another edge across the cut the two copies form.
pub fn tour_to_2ecss(g: &Multigraph, tour: &Solution) -> Result<Solution> {
    if !g.is_two_edge_connected() {
        return Err(Error::NotTwoEdgeConnected);
    }
    check_connected_tjoin(g, &[], tour).map_err(|e| Error::Precondition(format!("input is not a tour: {e}")))?;
    let mut f = tour.clone();
    let copies = |f: &Solution| -> Vec<usize> { f.iter().flat_map(|(e, k)| std::iter::repeat(e).take(k as usize)).collect() };
    let mut guard = 0;
    while let Some(e) = (0..g.m()).find(|&e| f.get(e) >= 2) {
        guard += 1;
        if guard > g.m() {
            return Err(internal!("2ECSS conversion did not terminate"));
        }
        f.set(e, f.get(e) - 1);
        if multiset_is_2ec(g, &copies(&f)) {
            continue;
        }
        // the copies of e were a 2-cut: find the sides without e
        f.set(e, 0);
        let sol_wo = f.clone();
        f.set(e, 1);
        let side = reach_side(g, &sol_wo, g.edge(e).0);
        let repl = (0..g.m()).find(|&x| x != e && f.get(x) == 0 && {
            let (a, b) = g.edge(x);
            side[a] != side[b]
        });
        let x = repl.ok_or_else(|| internal!("no replacement edge across the 2-cut of edge {e}"))?;
        f.set(x, 1);
        if !multiset_is_2ec(g, &copies(&f)) {
            return Err(internal!("replacement of edge {e} by {x} broke 2-edge-connectivity"));
        }
    }
    if f.cardinality() > tour.cardinality() || !is_2ec_spanning(g, &f.support()) {
        return Err(internal!("2ECSS conversion failed"));
    }
    Ok(f)
}

fn multiset_is_2ec(g: &Multigraph, copies: &[usize]) -> bool {
    let edges: Vec<(usize, usize)> = copies.iter().map(|&e| g.edge(e)).collect();
    Multigraph::new(g.n(), edges).map(|h| h.is_two_edge_connected()).unwrap_or(false)
}

fn reach_side(g: &Multigraph, f: &Solution, s: usize) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        for &(e, x) in g.incident(v) {
            if f.get(e) > 0 && !seen[x] {
                seen[x] = true;
                stack.push(x);
            }
        }
    }
    seen
}

/// Tour of `g` from a 2ECSS `h` of 2G (multiplicities ≤ 2): per block of h,
/// one edge of every ear goes into R, no pairs, then the pairing tour.
pub fn tour_from_2ecss(g: &Multigraph, h: &Solution) -> Result<Solution> {
    if h.max_multiplicity() > 2 {
        return Err(Error::Precondition("2ECSS of 2G has multiplicities ≤ 2".into()));
    }
    let copy_of: Vec<usize> = h.iter().flat_map(|(e, k)| std::iter::repeat(e).take(k as usize)).collect();
    let hg = Multigraph::new(g.n(), copy_of.iter().map(|&e| g.edge(e)).collect())?;
    if !hg.is_two_edge_connected() {
        return Err(Error::Precondition("input is not a 2-edge-connected spanning subgraph".into()));
    }
    let bt = blocks(&hg)?;
    let mut acc = vec![0usize; g.m()];
    for b in &bt.blocks {
        let view = hg.edge_subgraph(&b.edges);
        let d = open_ear_decomposition(&view.graph)?;
        let r: Vec<usize> = d.ears.iter().map(|e| e.edges[0]).collect();
        let tour = ms_tour(&view.graph, &RemovablePairing { r, pairs: vec![] })?;
        for (e, k) in tour.iter() {
            acc[copy_of[view.edge_of[e]]] += k as usize;
        }
    }
    let mut sol = Solution::empty(g.m());
    for (e, &k) in acc.iter().enumerate() {
        // keep parity, cap at two copies
        let k = if k > 2 { 2 - k % 2 } else { k };
        sol.set(e, k as u8);
    }
    check_connected_tjoin(g, &[], &sol)?;
    if 3 * sol.cardinality() > 2 * (h.cardinality() + g.n() - 1) {
        return Err(Error::BoundViolated(format!("tour of {} edges above (2/3)(|E(H)| + n − 1)", sol.cardinality())));
    }
    Ok(sol)
}

/// Spanning tree plus a minimum join fixing its parities.
pub fn christofides_tjoin(g: &Multigraph, t: &[usize]) -> Result<Solution> {
    if t.len() % 2 == 1 {
        return Err(Error::OddTerminals(t.len()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0]);
    let mut tree = Solution::empty(g.m());
    while let Some(v) = queue.pop_front() {
        for &(e, x) in g.incident(v) {
            if !seen[x] {
                seen[x] = true;
                tree.set(e, 1);
                queue.push_back(x);
            }
        }
    }
    let in_t = mark(n, t);
    let odd = tree.odd_vertices(g);
    let mut is_odd = vec![false; n];
    for v in odd {
        is_odd[v] = true;
    }
    let fix: Vec<usize> = (0..n).filter(|&v| in_t[v] != is_odd[v]).collect();
    let j = UnitJoin::new(g).join(&fix)?;
    let mut sol = tree;
    for (e, k) in j.iter() {
        sol.add(e, k);
    }
    check_connected_tjoin(g, t, &sol)?;
    Ok(sol)
}

/// Multiplicities ≤ 2, odd degree exactly on T, connected spanning support.
pub fn check_connected_tjoin(g: &Multigraph, t: &[usize], sol: &Solution) -> Result<()> {
    if sol.max_multiplicity() > 2 {
        return Err(internal!("multiplicity above 2"));
    }
    let mut odd = sol.odd_vertices(g);
    odd.sort_unstable();
    let mut tt = t.to_vec();
    tt.sort_unstable();
    if odd != tt {
        return Err(internal!("odd vertices {odd:?} differ from T {tt:?}"));
    }
    if !sol.is_spanning_connected(g) {
        return Err(internal!("support is not spanning and connected"));
    }
    Ok(())
}

/// What happened in one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTrace {
    pub vertices: usize,
    pub edges: usize,
    /// "bridge", "exact" or "ears".
    pub method: &'static str,
    pub phi: Option<usize>,
    pub pendant: usize,
    pub pendant2: usize,
    pub drum: usize,
    pub mu: usize,
    pub l_phi: Option<usize>,
    pub l_mu: Option<usize>,
    /// Valid lower bound on the block's LP used in the ratio check.
    pub lower_bound: Q,
    pub candidates: Vec<(&'static str, usize)>,
    pub chosen: &'static str,
    pub cardinality: usize,
    /// Which candidate the threshold rule would pick.
    pub threshold_branch: Option<&'static str>,
    pub earmuff: Option<EarmuffTrace>,
    pub witness: Option<MuDualWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub algorithm: &'static str,
    pub blocks: Vec<BlockTrace>,
    pub cardinality: usize,
    /// Sum of per-block lower bounds, each at most the block's LP.
    pub lower_bound: Q,
    /// Guaranteed ratio against `lower_bound` on non-exact blocks.
    pub ratio: Q,
}

fn qi(x: usize) -> Q {
    Q::from_integer(x.into())
}

fn exact_limits() -> OracleLimits {
    OracleLimits { max_n: 128, ..OracleLimits::figures() }
}

fn degenerate(view: &View) -> bool {
    view.graph.n() <= 4 || view.graph.m() == view.graph.n()
}

struct Ctx<'a> {
    view: &'a View,
    t: Vec<usize>,
    pipe: Pipeline,
    lphi: usize,
    lmu: usize,
    witness: MuDualWitness,
    pendant: usize,
    pendant2: usize,
}

fn ear_block<'a>(view: &'a View, t: Vec<usize>, limits: &SearchLimits) -> Result<Ctx<'a>> {
    let g = &view.graph;
    let pipe = nice_muffed_decomposition(g, &t, limits)?;
    let lphi = l_phi(g.n(), pipe.phi);
    let (lmu, witness) = l_mu(g, &pipe.drum, &t, pipe.mu(), &pipe.cert)?;
    let st = pipe.decomposition.stats(g.n());
    Ok(Ctx { view, t, lphi, lmu, witness, pendant: st.pendant, pendant2: st.pendant2, pipe })
}

fn trace_from(ctx: &Ctx<'_>, lower: Q, cands: Vec<(&'static str, usize)>, chosen: &'static str, branch: &'static str, em: Option<EarmuffTrace>) -> BlockTrace {
    let g = &ctx.view.graph;
    let card = cands.iter().find(|c| c.0 == chosen).unwrap().1;
    BlockTrace {
        vertices: g.n(),
        edges: g.m(),
        method: "ears",
        phi: Some(ctx.pipe.phi),
        pendant: ctx.pendant,
        pendant2: ctx.pendant2,
        drum: ctx.pipe.drum.len(),
        mu: ctx.pipe.mu(),
        l_phi: Some(ctx.lphi),
        l_mu: Some(ctx.lmu),
        lower_bound: lower,
        candidates: cands,
        chosen,
        cardinality: card,
        threshold_branch: Some(branch),
        earmuff: em,
        witness: Some(ctx.witness.clone()),
    }
}

fn simple_trace(view: &View, method: &'static str, lower: Q, card: usize) -> BlockTrace {
    BlockTrace {
        vertices: view.graph.n(),
        edges: view.graph.m(),
        method,
        phi: None,
        pendant: 0,
        pendant2: 0,
        drum: 0,
        mu: 0,
        l_phi: None,
        l_mu: None,
        lower_bound: lower,
        candidates: vec![(method, card)],
        chosen: method,
        cardinality: card,
        threshold_branch: None,
        earmuff: None,
        witness: None,
    }
}

fn finish(g: &Multigraph, algorithm: &'static str, sol: Solution, blocks: Vec<BlockTrace>, ratio: Q) -> (Solution, RunTrace) {
    let lower = blocks.iter().fold(qi(0), |a, b| a + b.lower_bound.clone());
    let _ = g;
    let trace = RunTrace { algorithm, cardinality: sol.cardinality(), blocks, lower_bound: lower, ratio };
    (sol, trace)
}

/// Connected T-join within 3/2 of LP(G,T).
pub fn connected_tjoin_3_2(g: &Multigraph, t: &[usize]) -> Result<(Solution, RunTrace)> {
    connected_tjoin_3_2_with(g, t, &SearchLimits::default())
}

pub fn connected_tjoin_3_2_with(g: &Multigraph, t: &[usize], limits: &SearchLimits) -> Result<(Solution, RunTrace)> {
    if t.len() % 2 == 1 {
        return Err(Error::OddTerminals(t.len()));
    }
    let bt = blocks(g)?;
    let tb = bt.split_terminals(g, t);
    let mut sol = Solution::empty(g.m());
    let mut traces = Vec::new();
    for (b, tloc) in bt.blocks.iter().zip(tb) {
        if b.edges.is_empty() {
            continue;
        }
        let view = g.edge_subgraph(&b.edges);
        let lt = view.restrict_vertices(&tloc);
        let bg = &view.graph;
        if bg.m() == 1 {
            let k = if lt.len() == 2 { 1 } else { 2 };
            let mut s = Solution::empty(1);
            s.set(0, k);
            view.lift_into(&s, &mut sol);
            traces.push(simple_trace(&view, "bridge", qi(1), k as usize));
            continue;
        }
        if degenerate(&view) {
            let (v, s) = opt_connected_tjoin(bg, &lt, &exact_limits())?;
            view.lift_into(&s, &mut sol);
            traces.push(simple_trace(&view, "exact", qi(bg.n() - 1), v));
            continue;
        }
        let ctx = ear_block(&view, lt, limits)?;
        let (a, em) = connected_tjoin_via_earmuff(bg, &ctx.t, &ctx.pipe)?;
        let b2 = connected_tjoin_via_induction(bg, &ctx.t, &ctx.pipe.decomposition, ctx.pipe.phi)?;
        let lower = ctx.lmu.max(bg.n() - 1);
        let (best, chosen) = if b2.cardinality() < a.cardinality() { (b2.clone(), "induction") } else { (a.clone(), "earmuff") };
        if 2 * best.cardinality() > 3 * lower {
            return Err(Error::BoundViolated(format!("connected T-join of {} edges above 3/2 · {lower}", best.cardinality())));
        }
        let branch = if 2 * ctx.pendant >= ctx.pipe.phi { "earmuff" } else { "induction" };
        view.lift_into(&best, &mut sol);
        traces.push(trace_from(&ctx, qi(lower), vec![("earmuff", a.cardinality()), ("induction", b2.cardinality())], chosen, branch, Some(em)));
    }
    check_connected_tjoin(g, t, &sol)?;
    Ok(finish(g, "connected_tjoin_3_2", sol, traces, Q::new(3.into(), 2.into())))
}

/// Tour within 7/5 of Λ ≤ LP(G).
pub fn tsp_7_5(g: &Multigraph) -> Result<(Solution, RunTrace)> {
    tsp_7_5_with(g, &SearchLimits::default())
}

pub fn tsp_7_5_with(g: &Multigraph, limits: &SearchLimits) -> Result<(Solution, RunTrace)> {
    let bt = blocks(g)?;
    let mut sol = Solution::empty(g.m());
    let mut traces = Vec::new();
    for b in &bt.blocks {
        if b.edges.is_empty() {
            continue;
        }
        let view = g.edge_subgraph(&b.edges);
        let bg = &view.graph;
        if bg.m() == 1 {
            let mut s = Solution::empty(1);
            s.set(0, 2);
            view.lift_into(&s, &mut sol);
            traces.push(simple_trace(&view, "bridge", qi(2), 2));
            continue;
        }
        if degenerate(&view) {
            let (v, s) = opt_connected_tjoin(bg, &[], &exact_limits())?;
            view.lift_into(&s, &mut sol);
            traces.push(simple_trace(&view, "exact", qi(bg.n()), v));
            continue;
        }
        let ctx = ear_block(&view, vec![], limits)?;
        let lam = lambda(ctx.lmu, ctx.lphi);
        // construction on G′ = nontrivial ears only
        let d = &ctx.pipe.decomposition;
        let (gp, dp) = drop_trivial_ears(bg, d);
        if gp.graph.n() != bg.n() {
            return Err(internal!("deleting 1-ears lost a vertex"));
        }
        dp.validate(&gp.graph)?;
        let pieces = split_at_cut_vertices(&gp.graph, &dp)?;
        let mut a_local = Solution::empty(gp.graph.m());
        let mut split_local = Solution::empty(gp.graph.m());
        let mut lam_sum = qi(0);
        for (pv, pd) in &pieces {
            let (pairing_tour, earmuff_tour, lam_i) = piece_tours(&pv.graph, pd, ctx.pipe.route, pieces.len() > 1)?;
            lam_sum += lam_i;
            pv.lift_into(&pairing_tour, &mut a_local);
            let better = match earmuff_tour {
                Some(e) if e.cardinality() < pairing_tour.cardinality() => e,
                _ => pairing_tour,
            };
            pv.lift_into(&better, &mut split_local);
        }
        if lam_sum != lam {
            return Err(internal!("Λ over the pieces of G′ is {lam_sum}, expected {lam}"));
        }
        let mut a = Solution::empty(bg.m());
        gp.lift_into(&a_local, &mut a);
        let mut split = Solution::empty(bg.m());
        gp.lift_into(&split_local, &mut split);
        let (bsol, em) = connected_tjoin_via_earmuff(bg, &[], &ctx.pipe)?;
        let mut cands = vec![("pairing", a.cardinality()), ("earmuff", bsol.cardinality())];
        let (mut best, mut chosen) = if bsol.cardinality() < a.cardinality() { (bsol.clone(), "earmuff") } else { (a.clone(), "pairing") };
        if pieces.len() > 1 {
            cands.push(("split", split.cardinality()));
            if split.cardinality() < best.cardinality() {
                (best, chosen) = (split, "split");
            }
        }
        if qi(5 * best.cardinality()) > lam.clone() * qi(7) {
            return Err(Error::BoundViolated(format!("tour of {} edges above 7/5 · Λ = 7/5 · {lam}", best.cardinality())));
        }
        let branch = if qi(10 * ctx.pendant) <= lam { "pairing" } else { "earmuff" };
        view.lift_into(&best, &mut sol);
        traces.push(trace_from(&ctx, lam, cands, chosen, branch, Some(em)));
    }
    check_connected_tjoin(g, &[], &sol)?;
    Ok(finish(g, "tsp_7_5", sol, traces, Q::new(7.into(), 5.into())))
}

/// 2ECSS within 4/3 of max(L_φ, L_μ) ≤ LP(G).
pub fn two_ecss_4_3(g: &Multigraph) -> Result<(Solution, RunTrace)> {
    two_ecss_4_3_with(g, &SearchLimits::default())
}

pub fn two_ecss_4_3_with(g: &Multigraph, limits: &SearchLimits) -> Result<(Solution, RunTrace)> {
    if !g.is_two_edge_connected() {
        return Err(Error::NotTwoEdgeConnected);
    }
    let bt = blocks(g)?;
    let mut sol = Solution::empty(g.m());
    let mut traces = Vec::new();
    for b in &bt.blocks {
        let view = g.edge_subgraph(&b.edges);
        let bg = &view.graph;
        if degenerate(&view) {
            let (v, es) = opt_2ecss(bg, &exact_limits())?;
            view.lift_into(&Solution::from_edges(bg.m(), &es), &mut sol);
            traces.push(simple_trace(&view, "exact", qi(bg.n()), v));
            continue;
        }
        let ctx = ear_block(&view, vec![], limits)?;
        let keep: Vec<usize> = ctx.pipe.decomposition.nontrivial().flat_map(|e| e.edges.iter().copied()).collect();
        let a = Solution::from_edges(bg.m(), &keep);
        let (tour, em) = connected_tjoin_via_earmuff(bg, &[], &ctx.pipe)?;
        let bsol = tour_to_2ecss(bg, &tour)?;
        let lower = ctx.lphi.max(ctx.lmu);
        let (best, chosen) = if bsol.cardinality() < a.cardinality() { (bsol.clone(), "earmuff") } else { (a.clone(), "ears") };
        if 3 * best.cardinality() > 4 * lower {
            return Err(Error::BoundViolated(format!("2ECSS of {} edges above 4/3 · {lower}", best.cardinality())));
        }
        let branch = if 6 * ctx.pendant <= lower { "ears" } else { "earmuff" };
        view.lift_into(&best, &mut sol);
        traces.push(trace_from(&ctx, qi(lower), vec![("ears", a.cardinality()), ("earmuff", bsol.cardinality())], chosen, branch, Some(em)));
    }
    if sol.max_multiplicity() > 1 || !is_2ec_spanning(g, &sol.support()) {
        return Err(internal!("result is not a 2ECSS"));
    }
    Ok(finish(g, "two_ecss_4_3", sol, traces, Q::new(4.into(), 3.into())))
}

/// Blocks of a graph whose ears are all nontrivial, each with the ears inside it.
/// The first ear inside a block is its circuit, so each list is a decomposition.
fn split_at_cut_vertices(g: &Multigraph, d: &EarDecomposition) -> Result<Vec<(View, EarDecomposition)>> {
    let bt = blocks(g)?;
    let mut block_of = vec![usize::MAX; g.m()];
    for (i, b) in bt.blocks.iter().enumerate() {
        for &e in &b.edges {
            block_of[e] = i;
        }
    }
    let mut out: Vec<(View, EarDecomposition)> =
        bt.blocks.iter().map(|b| (g.edge_subgraph(&b.edges), EarDecomposition { ears: Vec::new() })).collect();
    for ear in &d.ears {
        let i = block_of[ear.edges[0]];
        if ear.edges.iter().any(|&e| block_of[e] != i) {
            return Err(internal!("an ear spans two blocks"));
        }
        let local = localize(&out[i].0, ear);
        out[i].1.ears.push(local);
    }
    for (v, pd) in &out {
        pd.validate(&v.graph)?;
    }
    Ok(out)
}

/// Pairing tour, the earmuff tour when asked for, and Λ of one 2VC piece of G′.
fn piece_tours(g: &Multigraph, d: &EarDecomposition, route: SearchRoute, with_earmuff: bool) -> Result<(Solution, Option<Solution>, Q)> {
    let n = g.n();
    let pairing = removable_pairing_from_ears(g, d)?;
    let tour = ms_tour(g, &pairing)?;
    let pi = d.pendant_flags(n).iter().filter(|&&p| p).count();
    if 3 * tour.cardinality() > 4 * (n - 1) + 2 * pi || pairing.r.len() + pi != 2 * d.ears.len() {
        return Err(Error::BoundViolated("pairing tour above (4/3)(n−1) + (2/3)π".into()));
    }
    let drum = d.eardrum(g, &[]);
    let (muff, cert) = max_earmuff(g, &drum)?;
    let phi = d.even_count();
    let (lmu, _) = l_mu(g, &drum, &[], muff.size(), &cert)?;
    let lam = lambda(lmu, l_phi(n, phi));
    if !with_earmuff {
        return Ok((tour, None, lam));
    }
    let pipe = Pipeline { decomposition: d.clone(), drum, muff, cert, phi, route };
    let (e, _) = connected_tjoin_via_earmuff(g, &[], &pipe)?;
    let best = e.cardinality().min(tour.cardinality());
    if qi(5 * best) > lam.clone() * qi(7) {
        return Err(Error::BoundViolated(format!("piece tour of {best} edges above 7/5 · {lam}")));
    }
    Ok((tour, Some(e), lam))
}

/// The subgraph of nontrivial ears, with the decomposition in its local ids.
pub fn drop_trivial_ears(g: &Multigraph, d: &EarDecomposition) -> (View, EarDecomposition) {
    let keep: Vec<usize> = d.nontrivial().flat_map(|e| e.edges.iter().copied()).collect();
    let gp = g.edge_subgraph(&keep);
    let dp = EarDecomposition { ears: d.nontrivial().map(|e| localize(&gp, e)).collect() };
    (gp, dp)
}

fn localize(view: &View, ear: &Ear) -> Ear {
    let mut local_edge = std::collections::HashMap::new();
    for (i, &e) in view.edge_of.iter().enumerate() {
        local_edge.insert(e, i);
    }
    Ear::new(ear.vertices.iter().map(|&v| view.local_vertex(v).unwrap()).collect(), ear.edges.iter().map(|e| local_edge[e]).collect())
}

#[cfg(test)]
mod tests;
