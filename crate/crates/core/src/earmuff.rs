//! Maximum earmuffs: forest representative systems grown greedily by
//! alternating-path augmentation, the partition certificate, path
//! realization and rerooting of a nice decomposition onto the chosen paths.

use crate::ears::{check_nice, Ear, EarDecomposition, Eardrum};
use crate::error::{internal, Error, Result};
use crate::graph::Multigraph;
use petgraph::unionfind::UnionFind;
use std::collections::VecDeque;

/// Endpoint set U_f of each core: all ends of paths whose internal vertex set is f.
pub fn endpoint_sets(g: &Multigraph, drum: &Eardrum) -> Vec<Vec<usize>> {
    drum.cores
        .iter()
        .map(|f| {
            let nbrs = |a: usize, skip: Option<usize>| {
                let mut v: Vec<usize> = g.incident(a).iter().map(|&(_, x)| x).filter(|&x| Some(x) != skip).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let mut out = match f.as_slice() {
                [a] => {
                    let ns = nbrs(*a, None);
                    if ns.len() >= 2 {
                        ns
                    } else {
                        Vec::new()
                    }
                }
                [a, b] => {
                    let na = nbrs(*a, Some(*b));
                    let nb = nbrs(*b, Some(*a));
                    let any = na.iter().any(|&u| nb.iter().any(|&w| w != u));
                    if any {
                        na.into_iter().chain(nb).collect()
                    } else {
                        Vec::new()
                    }
                }
                _ => Vec::new(),
            };
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

/// Partition of U with the surplus of each class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuffCertificate {
    pub partition: Vec<Vec<usize>>,
    pub surplus: Vec<i64>,
    /// Cores whose endpoint set is empty; left out of the min–max.
    pub skipped: Vec<usize>,
}

impl MuffCertificate {
    /// |M'| − Σ sur(W), with M' the cores that were not skipped.
    pub fn value(&self, cores: usize) -> i64 {
        (cores - self.skipped.len()) as i64 - self.surplus.iter().sum::<i64>()
    }
}

/// Surplus of W: sets inside W minus (|W| − 1).
pub fn surplus(sets: &[Vec<usize>], w: &[usize]) -> i64 {
    let inside = sets.iter().filter(|s| !s.is_empty() && s.iter().all(|v| w.contains(v))).count();
    inside as i64 - (w.len() as i64 - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Augment {
    Added,
    /// A closed set containing the rejected core's endpoint set.
    Closed(Vec<usize>),
}

/// Current F and its representatives over vertex ids `0..nu`.
#[derive(Clone, Debug)]
pub struct RepresentativeState {
    pub nu: usize,
    pub sets: Vec<Vec<usize>>,
    pub reps: Vec<Option<(usize, usize)>>,
}

enum Probe {
    Path(Vec<usize>),
    Closed(Vec<usize>),
}

impl RepresentativeState {
    pub fn new(nu: usize, sets: Vec<Vec<usize>>) -> Self {
        let reps = vec![None; sets.len()];
        RepresentativeState { nu, sets, reps }
    }

    pub fn size(&self) -> usize {
        self.reps.iter().filter(|r| r.is_some()).count()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nu];
        for (f, r) in self.reps.iter().enumerate() {
            if let Some((u, v)) = *r {
                adj[u].push((v, f));
                adj[v].push((u, f));
            }
        }
        adj
    }

    fn components(&self, adj: &[Vec<(usize, usize)>]) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.nu];
        let mut c = 0;
        for s in 0..self.nu {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = c;
                        stack.push(y);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    // Owners of the forest edges on the smallest subtree spanning `set`.
    fn spanning_owners(&self, adj: &[Vec<(usize, usize)>], set: &[usize]) -> Vec<usize> {
        let root = set[0];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.nu];
        let mut order = vec![root];
        let mut seen = vec![false; self.nu];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &(y, f) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, f));
                    order.push(y);
                }
            }
        }
        let mut cnt = vec![0usize; self.nu];
        for &v in set {
            cnt[v] += 1;
        }
        let mut out = Vec::new();
        for &x in order.iter().rev() {
            if let Some((p, f)) = parent[x] {
                if cnt[x] > 0 && cnt[x] < set.len() {
                    out.push(f);
                }
                cnt[p] += cnt[x];
            }
        }
        out
    }

    // BFS over the exchange digraph from `g`.
    fn probe(&self, g: usize) -> Probe {
        let adj = self.adjacency();
        let comp = self.components(&adj);
        let m = self.sets.len();
        let mut pred = vec![usize::MAX; m];
        let mut seen = vec![false; m];
        seen[g] = true;
        let mut q = VecDeque::from([g]);
        let mut reached = Vec::new();
        while let Some(f) = q.pop_front() {
            reached.push(f);
            let set = &self.sets[f];
            if set.iter().any(|&v| comp[v] != comp[set[0]]) {
                let mut path = vec![f];
                let mut cur = f;
                while cur != g {
                    cur = pred[cur];
                    path.push(cur);
                }
                path.reverse();
                return Probe::Path(path);
            }
            for h in self.spanning_owners(&adj, set) {
                if !seen[h] {
                    seen[h] = true;
                    pred[h] = f;
                    q.push_back(h);
                }
            }
        }
        let mut w: Vec<usize> = reached.iter().flat_map(|&f| self.sets[f].iter().copied()).collect();
        w.sort_unstable();
        w.dedup();
        Probe::Closed(w)
    }

    /// Adds core `g` to F (repairing representatives along a shortest
    /// exchange path) or returns a closed set containing U_g.
    pub fn augment_or_close(&mut self, g: usize) -> Result<Augment> {
        if self.sets[g].is_empty() {
            return Err(Error::Precondition(format!("core {g} has no endpoint set")));
        }
        if self.reps[g].is_some() {
            return Err(Error::Precondition(format!("core {g} is already represented")));
        }
        let path = match self.probe(g) {
            Probe::Closed(_) => {
                let uf = self.closed_classes();
                let r = uf.find(self.sets[g][0]);
                return Ok(Augment::Closed((0..self.nu).filter(|&v| uf.find(v) == r).collect()));
            }
            Probe::Path(p) => p,
        };
        let adj = self.adjacency();
        let comp = self.components(&adj);
        let mut fresh: Vec<(usize, (usize, usize))> = Vec::new();
        let last = *path.last().unwrap();
        let set = &self.sets[last];
        let v = *set.iter().find(|&&v| comp[v] != comp[set[0]]).unwrap();
        fresh.push((last, (set[0], v)));
        for w in path.windows(2) {
            let (fi, fj) = (w[0], w[1]);
            let (a, b) = self.reps[fj].ok_or_else(|| internal!("exchange path through an unrepresented core"))?;
            // side of each vertex once the edge of fj is cut
            let mut side = vec![false; self.nu];
            side[a] = true;
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                for &(y, f) in &adj[x] {
                    if f != fj && !side[y] {
                        side[y] = true;
                        stack.push(y);
                    }
                }
            }
            let _ = b;
            let set = &self.sets[fi];
            let x = set.iter().find(|&&x| side[x] && comp[x] == comp[a]);
            let y = set.iter().find(|&&y| !side[y] && comp[y] == comp[a]);
            match (x, y) {
                (Some(&x), Some(&y)) => fresh.push((fi, (x, y))),
                _ => return Err(internal!("exchange arc without a crossing pair")),
            }
        }
        for (f, e) in fresh {
            self.reps[f] = Some(e);
        }
        self.check_forest()?;
        Ok(Augment::Added)
    }

    // Maximal closed sets: union of intersecting exchange closures.
    fn closed_classes(&self) -> UnionFind<usize> {
        let mut uf = UnionFind::<usize>::new(self.nu);
        for f in 0..self.sets.len() {
            if self.sets[f].is_empty() {
                continue;
            }
            if let Probe::Closed(w) = self.probe(f) {
                for pair in w.windows(2) {
                    uf.union(pair[0], pair[1]);
                }
            }
        }
        uf
    }

    fn check_forest(&self) -> Result<()> {
        let mut uf = UnionFind::<usize>::new(self.nu);
        for (f, r) in self.reps.iter().enumerate() {
            if let Some((u, v)) = *r {
                if !self.sets[f].contains(&u) || !self.sets[f].contains(&v) || !uf.union(u, v) {
                    return Err(internal!("representatives stopped being a forest"));
                }
            }
        }
        Ok(())
    }
}

/// Greedy maximum forest representative system over `universe` (ids below
/// `nu`), processing cores in `order` (default: index order). The returned
/// certificate always attains the size of F.
pub fn max_forest_representatives(
    nu: usize,
    universe: &[usize],
    sets: &[Vec<usize>],
    order: Option<&[usize]>,
) -> Result<(RepresentativeState, MuffCertificate)> {
    let default: Vec<usize> = (0..sets.len()).collect();
    let order = order.unwrap_or(&default);
    let mut st = RepresentativeState::new(nu, sets.to_vec());
    let mut skipped = Vec::new();
    for &f in order {
        if sets[f].is_empty() {
            skipped.push(f);
            continue;
        }
        st.augment_or_close(f)?;
    }
    skipped.sort_unstable();
    for f in 0..sets.len() {
        if !sets[f].is_empty() && st.reps[f].is_none() && matches!(st.probe(f), Probe::Path(_)) {
            return Err(internal!("greedy left an augmentable core {f}"));
        }
    }
    let uf = st.closed_classes();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; nu];
    for &u in universe {
        let r = uf.find(u);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(u);
    }
    let surplus: Vec<i64> = classes.iter().map(|w| surplus(sets, w)).collect();
    let cert = MuffCertificate { partition: classes, surplus, skipped };
    if cert.value(sets.len()) != st.size() as i64 {
        return Err(internal!("certificate value {} differs from |F| = {}", cert.value(sets.len()), st.size()));
    }
    Ok((st, cert))
}

/// Chosen paths, one per core in F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Earmuff {
    /// (core index into the eardrum, path with that core as internal set)
    pub paths: Vec<(usize, Ear)>,
}

impl Earmuff {
    pub fn size(&self) -> usize {
        self.paths.len()
    }

    pub fn edges(&self) -> Vec<usize> {
        self.paths.iter().flat_map(|(_, p)| p.edges.iter().copied()).collect()
    }

    /// Internal sets match the cores and the union of paths is a forest.
    pub fn validate(&self, g: &Multigraph, drum: &Eardrum) -> Result<()> {
        let mut uf = UnionFind::<usize>::new(g.n());
        for (f, p) in &self.paths {
            let mut inner = p.inner().to_vec();
            inner.sort_unstable();
            let mut core = drum.cores[*f].clone();
            core.sort_unstable();
            if inner != core || p.is_closed() {
                return Err(Error::Precondition(format!("path for core {f} has the wrong shape")));
            }
            for &e in &p.edges {
                let (a, b) = g.edge(e);
                if !uf.union(a, b) {
                    return Err(Error::Precondition("earmuff paths contain a circuit".into()));
                }
            }
        }
        Ok(())
    }
}

/// Paths realizing a forest representative system.
pub fn realize_earmuff(g: &Multigraph, drum: &Eardrum, st: &RepresentativeState) -> Result<Earmuff> {
    let edge = |a: usize, b: usize| g.edge_between(a, b).ok_or_else(|| internal!("no edge {a}-{b}"));
    let chosen: Vec<usize> = (0..drum.cores.len()).filter(|&f| st.reps[f].is_some()).collect();
    let mut done: Vec<Option<Ear>> = vec![None; drum.cores.len()];
    for &f in &chosen {
        let (u, v) = st.reps[f].unwrap();
        let path = match drum.cores[f].as_slice() {
            [a] => Ear::new(vec![u, *a, v], vec![edge(u, *a)?, edge(*a, v)?]),
            [a, b] => {
                let (a, b) = (*a, *b);
                let adj = |x: usize, y: usize| g.edge_between(x, y).is_some();
                if adj(u, a) && adj(v, b) && u != v {
                    Ear::new(vec![u, a, b, v], vec![edge(u, a)?, edge(a, b)?, edge(b, v)?])
                } else if adj(u, b) && adj(v, a) {
                    Ear::new(vec![v, a, b, u], vec![edge(v, a)?, edge(a, b)?, edge(b, u)?])
                } else {
                    // u and v hang off the same core vertex; route the far side through w
                    let (near, far) = if adj(u, a) { (a, b) } else { (b, a) };
                    let w = g
                        .incident(far)
                        .iter()
                        .map(|&(_, x)| x)
                        .find(|&x| x != near && x != u && x != v)
                        .ok_or_else(|| internal!("core {f} has no far neighbour"))?;
                    // forest without e_f, with the paths realized so far
                    let mut uf = UnionFind::<usize>::new(g.n());
                    for &h in &chosen {
                        if h == f {
                            continue;
                        }
                        match &done[h] {
                            Some(p) => {
                                for &e in &p.edges {
                                    let (x, y) = g.edge(e);
                                    uf.union(x, y);
                                }
                            }
                            None => {
                                let (x, y) = st.reps[h].unwrap();
                                uf.union(x, y);
                            }
                        }
                    }
                    let s = if uf.equiv(u, w) { v } else { u };
                    Ear::new(vec![s, near, far, w], vec![edge(s, near)?, edge(near, far)?, edge(far, w)?])
                }
            }
            _ => return Err(internal!("core {f} is not a vertex or an edge")),
        };
        done[f] = Some(path);
    }
    let muff = Earmuff { paths: chosen.iter().map(|&f| (f, done[f].take().unwrap())).collect() };
    muff.validate(g, drum)?;
    Ok(muff)
}

/// Maximum earmuff for an eardrum of `g`, with its certificate.
pub fn max_earmuff(g: &Multigraph, drum: &Eardrum) -> Result<(Earmuff, MuffCertificate)> {
    let sets = endpoint_sets(g, drum);
    let in_m = {
        let mut m = vec![false; g.n()];
        for v in drum.vertices() {
            m[v] = true;
        }
        m
    };
    let universe: Vec<usize> = (0..g.n()).filter(|&v| !in_m[v]).collect();
    let (st, cert) = max_forest_representatives(g.n(), &universe, &sets, None)?;
    let muff = realize_earmuff(g, drum, &st)?;
    Ok((muff, cert))
}

/// Swaps the clean ears of the cores in the earmuff for the earmuff paths.
/// Ears stay in place when the order allows it, otherwise the swapped ears
/// move behind the other nontrivial ears. 1-ears are recomputed.
pub fn reroot_ears(g: &Multigraph, d: &EarDecomposition, drum: &Eardrum, muff: &Earmuff, t: &[usize]) -> Result<EarDecomposition> {
    muff.validate(g, drum)?;
    let mut nontrivial: Vec<Ear> = d.ears.iter().filter(|e| !e.is_trivial()).cloned().collect();
    let k = nontrivial.len();
    let mut swapped = Vec::new();
    for (f, q) in &muff.paths {
        let i = *drum.ear_of.get(*f).ok_or_else(|| Error::Precondition(format!("core {f} not in the eardrum")))?;
        if i >= k {
            return Err(Error::Precondition(format!("ear {i} of core {f} is trivial")));
        }
        let old = &nontrivial[i];
        let mut same = old.edges.clone();
        same.sort_unstable();
        let mut new = q.edges.clone();
        new.sort_unstable();
        if same != new {
            nontrivial[i] = q.clone();
            swapped.push(i);
        }
    }
    let mut out = EarDecomposition::from_nontrivial(g, nontrivial.clone());
    if out.validate(g).is_err() {
        let mut front: Vec<Ear> = Vec::new();
        let mut back: Vec<Ear> = Vec::new();
        for (i, e) in nontrivial.into_iter().enumerate() {
            if swapped.contains(&i) {
                back.push(e);
            } else {
                front.push(e);
            }
        }
        front.extend(back);
        out = EarDecomposition::from_nontrivial(g, front);
    }
    out.validate(g)?;
    check_nice(g, &out, Some(d.even_count()))?;
    let again = out.eardrum(g, t);
    let norm = |dr: &Eardrum| {
        let mut c: Vec<Vec<usize>> = dr
            .cores
            .iter()
            .map(|x| {
                let mut x = x.clone();
                x.sort_unstable();
                x
            })
            .collect();
        c.sort();
        c
    };
    if norm(&again) != norm(drum) {
        return Err(internal!("rerooting changed the eardrum"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ears::Eardrum;

    #[test]
    fn base_cases() {
        let mut st = RepresentativeState::new(2, vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(st.augment_or_close(0).unwrap(), Augment::Added);
        assert_eq!(st.augment_or_close(1).unwrap(), Augment::Closed(vec![0, 1]));
        let (st, cert) = max_forest_representatives(3, &[0, 1, 2], &[], None).unwrap();
        assert_eq!(st.size(), 0);
        assert_eq!(cert.partition.len(), 3);
    }

    #[test]
    fn three_sets_on_three_points() {
        let sets = vec![vec![0, 1], vec![1, 2], vec![0, 1]];
        let mut st = RepresentativeState::new(3, sets.clone());
        st.augment_or_close(0).unwrap();
        st.augment_or_close(1).unwrap();
        assert_eq!(st.augment_or_close(2).unwrap(), Augment::Closed(vec![0, 1, 2]));
        let (st, cert) = max_forest_representatives(3, &[0, 1, 2], &sets, None).unwrap();
        assert_eq!(st.size(), 2);
        assert_eq!(cert.value(3), 2);
    }

    #[test]
    fn exchange_needed() {
        // greedy picks {0,1} for set A; B = {0,1} forces A to move to {1,2}
        let sets = vec![vec![0, 1, 2], vec![0, 1]];
        let mut st = RepresentativeState::new(3, sets);
        st.augment_or_close(0).unwrap();
        st.reps[0] = Some((0, 1));
        assert_eq!(st.augment_or_close(1).unwrap(), Augment::Added);
        assert_eq!(st.size(), 2);
    }

    #[test]
    fn singleton_core_path() {
        // square 0-1-2-3 with 4 adjacent to 0 and 2
        let g = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2)]).unwrap();
        let drum = Eardrum { cores: vec![vec![4]], ear_of: vec![1] };
        let (muff, cert) = max_earmuff(&g, &drum).unwrap();
        assert_eq!(muff.size(), 1);
        assert_eq!(muff.paths[0].1.vertices, vec![0, 4, 2]);
        assert_eq!(cert.value(1), 1);
    }
}
