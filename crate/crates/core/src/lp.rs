//! Exact LP values by a rational dual simplex with cutting planes.
//!
//! LP(G): minimize x(E) subject to x(δ(W)) ≥ 2 for every proper nonempty W.
//! Violated cuts come from a global minimum cut.
//! LP(G,T): the same over sets with |W∩T| even, plus x(δ(𝒲)) ≥ |𝒲| − 1 for
//! every partition 𝒲; both families are enumerated, so only small graphs.
//! Separation runs on x scaled to integers, so it is exact.

use crate::error::{internal, Error, Result};
use crate::graph::Multigraph;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::Integer;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A constraint Σ coef·x ≥ rhs over edge variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coef: Vec<(usize, i64)>,
    pub rhs: i64,
    pub kind: ConstraintKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Cut(Vec<usize>),
    Partition(Vec<Vec<usize>>),
    Total,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutFamily {
    /// |W∩T| even.
    EvenT,
    /// W∩T = ∅.
    AvoidT,
}

#[derive(Clone, Debug)]
pub struct LpLimits {
    pub cut_max_n: usize,
    pub partition_max_n: usize,
    pub max_rounds: usize,
}

impl Default for LpLimits {
    fn default() -> Self {
        LpLimits { cut_max_n: 64, partition_max_n: 10, max_rounds: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub value: Q,
    pub x: Vec<Q>,
    /// Constraints active in the final tableau with their dual values.
    pub duals: Vec<(Constraint, Q)>,
    pub rounds: usize,
}

// ---------- dual simplex ----------

// basic_r = rhs_r + Σ_j t[r][j]·N_j, objective z + Σ_j d_j·N_j.
struct Tableau {
    nvars: usize,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    t: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    d: Vec<Q>,
    z: Q,
    // var -> (is_basic, index)
    pos: Vec<(bool, usize)>,
    rows: Vec<Constraint>,
}

impl Tableau {
    fn new(m: usize) -> Tableau {
        Tableau {
            nvars: m,
            basic: Vec::new(),
            nonbasic: (0..m).collect(),
            t: Vec::new(),
            rhs: Vec::new(),
            d: vec![Q::one(); m],
            z: Q::zero(),
            pos: (0..m).map(|j| (false, j)).collect(),
            rows: Vec::new(),
        }
    }

    fn add(&mut self, c: Constraint) {
        let cols = self.nonbasic.len();
        let mut row = vec![Q::zero(); cols];
        let mut k = q(-c.rhs);
        for &(e, a) in &c.coef {
            if a == 0 {
                continue;
            }
            let a = q(a);
            match self.pos[e] {
                (false, j) => row[j] += &a,
                (true, r) => {
                    k += &a * &self.rhs[r];
                    for (x, y) in row.iter_mut().zip(&self.t[r]) {
                        if !y.is_zero() {
                            *x += &a * y;
                        }
                    }
                }
            }
        }
        let s = self.nvars;
        self.nvars += 1;
        self.pos.push((true, self.basic.len()));
        self.basic.push(s);
        self.t.push(row);
        self.rhs.push(k);
        self.rows.push(c);
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[r][j].clone();
        let inv = p.recip();
        // new row r: N_j = -rhs/p + (1/p)·B - Σ_{k≠j} t[r][k]/p·N_k
        let mut row = std::mem::take(&mut self.t[r]);
        for (k, x) in row.iter_mut().enumerate() {
            if k == j {
                *x = inv.clone();
            } else if !x.is_zero() {
                *x = -(&*x * &inv);
            }
        }
        let rhs_r = -(&self.rhs[r] * &inv);
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.t[i][j].clone();
            if f.is_zero() {
                continue;
            }
            self.rhs[i] += &f * &rhs_r;
            let ti = &mut self.t[i];
            for (k, y) in row.iter().enumerate() {
                if k == j {
                    ti[k] = &f * y;
                } else if !y.is_zero() {
                    ti[k] += &f * y;
                }
            }
        }
        let f = self.d[j].clone();
        if !f.is_zero() {
            self.z += &f * &rhs_r;
            for (k, y) in row.iter().enumerate() {
                if k == j {
                    self.d[k] = &f * y;
                } else if !y.is_zero() {
                    self.d[k] += &f * y;
                }
            }
        }
        self.t[r] = row;
        self.rhs[r] = rhs_r;
        let leaving = self.basic[r];
        let entering = self.nonbasic[j];
        self.basic[r] = entering;
        self.nonbasic[j] = leaving;
        self.pos[entering] = (true, r);
        self.pos[leaving] = (false, j);
    }

    fn solve(&mut self) -> Result<()> {
        let mut iters = 0usize;
        let bland_after = 20 * (self.t.len() + self.nonbasic.len()) + 100;
        loop {
            iters += 1;
            let bland = iters > bland_after;
            let mut leave: Option<usize> = None;
            for r in 0..self.rhs.len() {
                if !self.rhs[r].is_negative() {
                    continue;
                }
                leave = match leave {
                    None => Some(r),
                    Some(b) => {
                        let better = if bland { self.basic[r] < self.basic[b] } else { self.rhs[r] < self.rhs[b] };
                        Some(if better { r } else { b })
                    }
                };
            }
            let Some(r) = leave else { return Ok(()) };
            let mut enter: Option<(usize, Q)> = None;
            for j in 0..self.nonbasic.len() {
                let a = &self.t[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.d[j] / a;
                let take = match &enter {
                    None => true,
                    Some((b, best)) => ratio < *best || (ratio == *best && self.nonbasic[j] < self.nonbasic[*b]),
                };
                if take {
                    enter = Some((j, ratio));
                }
            }
            let Some((j, _)) = enter else {
                return Err(Error::Infeasible("linear program has no feasible point".into()));
            };
            self.pivot(r, j);
            if iters > 1_000_000 {
                return Err(internal!("simplex did not terminate"));
            }
        }
    }

    fn x(&self, m: usize) -> Vec<Q> {
        (0..m)
            .map(|e| match self.pos[e] {
                (true, r) => self.rhs[r].clone(),
                (false, _) => Q::zero(),
            })
            .collect()
    }

    fn duals(&self, m: usize) -> Vec<(Constraint, Q)> {
        let mut out = Vec::new();
        for (i, c) in self.rows.iter().enumerate() {
            if let (false, j) = self.pos[m + i] {
                if !self.d[j].is_zero() {
                    out.push((c.clone(), self.d[j].clone()));
                }
            }
        }
        out
    }
}

// ---------- helpers ----------

fn cut_constraint(g: &Multigraph, side: &[bool], rhs: i64) -> Constraint {
    let mut coef = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if side[a] != side[b] {
            coef.push((e, 1));
        }
    }
    let w = (0..g.n()).filter(|&v| side[v]).collect();
    Constraint { coef, rhs, kind: ConstraintKind::Cut(w) }
}

fn partition_constraint(g: &Multigraph, label: &[u8]) -> Constraint {
    let k = *label.iter().max().unwrap() as usize + 1;
    let mut coef = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if label[a] != label[b] {
            coef.push((e, 1));
        }
    }
    let mut classes = vec![Vec::new(); k];
    for (v, &l) in label.iter().enumerate() {
        classes[l as usize].push(v);
    }
    Constraint { coef, rhs: k as i64 - 1, kind: ConstraintKind::Partition(classes) }
}

/// x scaled by the lcm of its denominators, if that fits.
fn scaled(x: &[Q]) -> Option<(Vec<i128>, i128)> {
    let mut l = BigInt::one();
    for v in x {
        l = l.lcm(v.denom());
    }
    let scale = l.to_i128()?;
    if scale > (1i128 << 80) {
        return None;
    }
    let mut out = Vec::with_capacity(x.len());
    for v in x {
        let s = (v.numer() * (&l / v.denom())).to_i128()?;
        if s.abs() > (1i128 << 80) {
            return None;
        }
        out.push(s);
    }
    Some((out, scale))
}

fn lhs(c: &Constraint, x: &[i128]) -> i128 {
    c.coef.iter().map(|&(e, a)| a as i128 * x[e]).sum()
}

/// Exact check of Σ coef·x ≥ rhs.
pub fn satisfies(c: &Constraint, x: &[Q]) -> bool {
    let mut s = Q::zero();
    for &(e, a) in &c.coef {
        s += q(a) * &x[e];
    }
    s >= q(c.rhs)
}

/// Global minimum cut (Stoer–Wagner) on nonnegative integer weights; returns
/// the value and one shore.
pub fn stoer_wagner(n: usize, weighted: &[(usize, usize, i128)]) -> (i128, Vec<usize>) {
    if n <= 1 {
        return (0, Vec::new());
    }
    let mut w = vec![vec![0i128; n]; n];
    for &(a, b, c) in weighted {
        if a != b {
            w[a][b] += c;
            w[b][a] += c;
        }
    }
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = (i128::MAX, Vec::new());
    while alive.len() > 1 {
        let mut used = vec![false; n];
        let mut key = vec![0i128; n];
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            let mut sel = usize::MAX;
            for &v in &alive {
                if !used[v] && (sel == usize::MAX || key[v] > key[sel]) {
                    sel = v;
                }
            }
            used[sel] = true;
            if step == alive.len() - 1 {
                if key[sel] < best.0 {
                    best = (key[sel], members[sel].clone());
                }
                last = sel;
            } else {
                prev = sel;
                for &v in &alive {
                    if !used[v] {
                        key[v] += w[sel][v];
                    }
                }
            }
        }
        // merge last into prev
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &v in &alive {
            let add = w[last][v];
            w[prev][v] += add;
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        alive.retain(|&v| v != last);
    }
    best
}

/// All set partitions of {0..n} as restricted growth labels.
pub fn set_partitions(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut a = vec![0u8; n];
    fn rec(i: usize, maxl: u8, a: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for l in 0..=maxl + 1 {
            a[i] = l;
            rec(i + 1, maxl.max(l), a, out);
        }
    }
    rec(1, 0, &mut a, &mut out);
    out
}

// ---------- public entry points ----------

/// Cutting-plane driver: start from `initial`, add what `separate` returns.
fn run(m: usize, initial: Vec<Constraint>, limits: &LpLimits, mut separate: impl FnMut(&[Q]) -> Result<Vec<Constraint>>) -> Result<LpResult> {
    let mut tab = Tableau::new(m);
    for c in initial {
        tab.add(c);
    }
    let mut rounds = 0;
    loop {
        tab.solve()?;
        let x = tab.x(m);
        let cuts = separate(&x)?;
        if cuts.is_empty() {
            let value = tab.z.clone();
            let sum: Q = x.iter().fold(Q::zero(), |s, v| s + v);
            if sum != value {
                return Err(internal!("objective bookkeeping mismatch"));
            }
            return Ok(LpResult { value, x, duals: tab.duals(m), rounds });
        }
        for c in cuts {
            tab.add(c);
        }
        rounds += 1;
        if rounds > limits.max_rounds {
            return Err(Error::Capability("cutting-plane round limit reached".into()));
        }
    }
}

/// LP(G).
pub fn lp_2ec(g: &Multigraph, limits: &LpLimits) -> Result<LpResult> {
    let n = g.n();
    if n > limits.cut_max_n {
        return Err(Error::Capability(format!("LP(G) limited to {} vertices", limits.cut_max_n)));
    }
    if !g.is_two_edge_connected() {
        return Err(Error::Infeasible("LP(G) needs a 2-edge-connected graph".into()));
    }
    let initial: Vec<Constraint> = (0..n)
        .map(|v| {
            let mut side = vec![false; n];
            side[v] = true;
            cut_constraint(g, &side, 2)
        })
        .collect();
    run(g.m(), initial, limits, |x| {
        let (xs, scale) = scaled(x).ok_or_else(|| Error::Capability("LP point too large to scale".into()))?;
        let weighted: Vec<(usize, usize, i128)> = g.edges().iter().enumerate().map(|(e, &(a, b))| (a, b, xs[e])).collect();
        let (val, shore) = stoer_wagner(n, &weighted);
        if val >= 2 * scale {
            return Ok(Vec::new());
        }
        let mut side = vec![false; n];
        for v in shore {
            side[v] = true;
        }
        Ok(vec![cut_constraint(g, &side, 2)])
    })
}

/// LP(G,T) with fully enumerated cut and partition families.
pub fn lp_tjoin(g: &Multigraph, t: &[usize], family: CutFamily, limits: &LpLimits) -> Result<LpResult> {
    let n = g.n();
    if t.len() % 2 == 1 {
        return Err(Error::OddTerminals(t.len()));
    }
    if n > limits.partition_max_n || n > 20 {
        return Err(Error::Capability(format!("LP(G,T) limited to {} vertices", limits.partition_max_n)));
    }
    if !g.is_connected() {
        return Err(Error::Infeasible("LP(G,T) needs a connected graph".into()));
    }
    let mut in_t = vec![false; n];
    for &v in t {
        in_t[v] = true;
    }
    // cut family: W containing vertex 0 (complements give the same cut)
    let mut cuts: Vec<Constraint> = Vec::new();
    for mask in 0u32..(1u32 << (n - 1)) {
        let wmask = (mask << 1) | 1;
        if wmask == (1u32 << n) - 1 {
            continue;
        }
        let side: Vec<bool> = (0..n).map(|v| wmask >> v & 1 == 1).collect();
        let in_w = (0..n).filter(|&v| side[v] && in_t[v]).count();
        let other = (0..n).filter(|&v| !side[v] && in_t[v]).count();
        let ok = match family {
            CutFamily::EvenT => in_w % 2 == 0,
            CutFamily::AvoidT => in_w == 0 || other == 0,
        };
        if ok {
            cuts.push(cut_constraint(g, &side, 2));
        }
    }
    let partitions: Vec<Constraint> = if t.is_empty() {
        Vec::new()
    } else {
        set_partitions(n).iter().filter(|l| l.iter().any(|&x| x > 0)).map(|l| partition_constraint(g, l)).collect()
    };
    let mut initial: Vec<Constraint> = Vec::new();
    for v in 0..n {
        if !in_t[v] {
            let mut side = vec![false; n];
            side[v] = true;
            initial.push(cut_constraint(g, &side, 2));
        }
    }
    initial.push(Constraint { coef: (0..g.m()).map(|e| (e, 1)).collect(), rhs: n as i64 - 1, kind: ConstraintKind::Total });
    let mut added = vec![false; cuts.len() + partitions.len()];
    run(g.m(), initial, limits, |x| {
        let (xs, scale) = scaled(x).ok_or_else(|| Error::Capability("LP point too large to scale".into()))?;
        let mut viol: Vec<(i128, usize)> = Vec::new();
        for (i, c) in cuts.iter().chain(&partitions).enumerate() {
            let slack = lhs(c, &xs) - c.rhs as i128 * scale;
            if slack < 0 {
                if added[i] {
                    return Err(internal!("added constraint still violated"));
                }
                viol.push((slack, i));
            }
        }
        viol.sort();
        viol.truncate(24);
        Ok(viol
            .into_iter()
            .map(|(_, i)| {
                added[i] = true;
                if i < cuts.len() {
                    cuts[i].clone()
                } else {
                    partitions[i - cuts.len()].clone()
                }
            })
            .collect())
    })
}

/// Whether `x` satisfies every constraint of LP(G,T) (LP(G) for T = ∅);
/// small graphs only, since both families are enumerated.
pub fn lp_feasible(g: &Multigraph, t: &[usize], x: &[Q]) -> Result<bool> {
    let n = g.n();
    if n > 20 {
        return Err(Error::Capability("feasibility check limited to 20 vertices".into()));
    }
    if x.iter().any(|v| v.is_negative()) {
        return Ok(false);
    }
    let mut in_t = vec![false; n];
    for &v in t {
        in_t[v] = true;
    }
    for mask in 0u32..(1u32 << (n - 1)) {
        let wmask = (mask << 1) | 1;
        if wmask == (1u32 << n) - 1 {
            continue;
        }
        let side: Vec<bool> = (0..n).map(|v| wmask >> v & 1 == 1).collect();
        if (0..n).filter(|&v| side[v] && in_t[v]).count() % 2 == 0 && !satisfies(&cut_constraint(g, &side, 2), x) {
            return Ok(false);
        }
    }
    if !t.is_empty() {
        for l in set_partitions(n) {
            if !satisfies(&partition_constraint(g, &l), x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Multigraph {
        Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn partitions_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for n in 1..8 {
            assert_eq!(set_partitions(n).len(), bell[n]);
        }
    }

    #[test]
    fn cycle_lp() {
        let r = lp_2ec(&cycle(4), &LpLimits::default()).unwrap();
        assert_eq!(r.value, q(4));
        let r = lp_tjoin(&cycle(4), &[], CutFamily::EvenT, &LpLimits::default()).unwrap();
        assert_eq!(r.value, q(4));
    }

    #[test]
    fn theta_lp_is_three_k() {
        // three internally disjoint paths of length 2 between 0 and 1
        let g = Multigraph::new(5, vec![(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        let r = lp_2ec(&g, &LpLimits::default()).unwrap();
        assert_eq!(r.value, q(6));
    }

    #[test]
    fn antipodal_cycle() {
        let g = cycle(4);
        let r = lp_tjoin(&g, &[0, 2], CutFamily::EvenT, &LpLimits::default()).unwrap();
        assert_eq!(r.value, q(4));
        let r = lp_tjoin(&g, &[0, 1], CutFamily::EvenT, &LpLimits::default()).unwrap();
        assert_eq!(r.value, q(3));
    }

    #[test]
    fn stoer_wagner_on_two_triangles() {
        let es = vec![(0, 1, 3), (1, 2, 3), (2, 0, 3), (3, 4, 3), (4, 5, 3), (5, 3, 3), (2, 3, 1)];
        let (v, shore) = stoer_wagner(6, &es);
        assert_eq!(v, 1);
        assert_eq!(shore.len(), 3);
    }

    #[test]
    fn petersen_lp_is_ten() {
        let mut es = Vec::new();
        for i in 0..5 {
            es.push((i, (i + 1) % 5));
            es.push((i, i + 5));
            es.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = Multigraph::new(10, es).unwrap();
        let r = lp_2ec(&g, &LpLimits::default()).unwrap();
        assert_eq!(r.value, q(10));
        assert!(lp_feasible(&g, &[], &r.x).unwrap());
    }
}
