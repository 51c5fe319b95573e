//! Rewrite rules turning an open decomposition with the minimum number of even
//! ears into a nice one: short ears pendant, internals of different short ears
//! pairwise non-adjacent.

use super::{Ear, EarDecomposition, Eardrum};
use crate::error::{internal, Error, Result};
use crate::graph::Multigraph;

/// Checks niceness; `phi` additionally pins the even-ear count.
pub fn check_nice(g: &Multigraph, d: &EarDecomposition, phi: Option<usize>) -> Result<()> {
    d.validate(g)?;
    let bad = |m: String| Err(Error::InvalidDecomposition(m));
    if let Some(phi) = phi {
        if d.even_count() != phi {
            return bad(format!("{} even ears, expected {phi}", d.even_count()));
        }
    }
    let pend = d.pendant_flags(g.n());
    let mut short_of = vec![usize::MAX; g.n()];
    for (i, ear) in d.ears.iter().enumerate() {
        if ear.is_short() {
            if !pend[i] {
                return bad(format!("short ear {i} is not pendant"));
            }
            for &v in ear.inner() {
                short_of[v] = i;
            }
        }
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if short_of[a] != usize::MAX && short_of[b] != usize::MAX && short_of[a] != short_of[b] {
            return bad(format!("edge {e} joins internals of short ears {} and {}", short_of[a], short_of[b]));
        }
    }
    Ok(())
}

pub fn is_nice(g: &Multigraph, d: &EarDecomposition, phi: Option<usize>) -> bool {
    check_nice(g, d, phi).is_ok()
}

/// Applies the rewrite rules until none fires. Never raises the even-ear
/// count, so a minimum-even input yields a nice decomposition. Returns it with
/// the eardrum for `t`.
pub fn make_nice(g: &Multigraph, d: &EarDecomposition, t: &[usize]) -> Result<(EarDecomposition, Eardrum)> {
    d.validate(g)?;
    if !d.is_open() {
        return Err(Error::Precondition("make_nice expects an open ear-decomposition".into()));
    }
    let mut ears: Vec<Ear> = d.nontrivial().cloned().collect();
    let mut steps = 0;
    while let Some(next) = rewrite_once(g, &ears)? {
        ears = next;
        steps += 1;
        if steps > g.n() {
            return Err(internal!("nice rewriting did not terminate"));
        }
        debug_assert!(EarDecomposition::from_nontrivial(g, ears.clone()).validate(g).is_ok());
    }
    let out = EarDecomposition::from_nontrivial(g, ears);
    out.validate(g)?;
    if out.even_count() > d.even_count() {
        return Err(internal!("rewriting increased the even-ear count"));
    }
    check_nice(g, &out, None)?;
    let drum = out.eardrum(g, t);
    drum.validate(g, t)?;
    Ok((out, drum))
}

// Copy of `ear` ending at `v`.
fn ending_at(ear: &Ear, v: usize) -> Result<Ear> {
    let (s, t) = ear.ends();
    if s == t {
        return Err(internal!("closed ear attached where an open one was expected"));
    }
    if t == v {
        Ok(ear.clone())
    } else if s == v {
        Ok(ear.reversed())
    } else {
        Err(internal!("ear does not end at {v}"))
    }
}

// Copy of a short `ear` with `v` as its first internal vertex.
fn starting_inner(ear: &Ear, v: usize) -> Ear {
    if ear.vertices[1] == v {
        ear.clone()
    } else {
        ear.reversed()
    }
}

fn replace(ears: &[Ear], at: usize, new: Ear, drop: &[usize]) -> Vec<Ear> {
    let mut out: Vec<Ear> = Vec::with_capacity(ears.len());
    for (i, e) in ears.iter().enumerate() {
        if i == at {
            out.push(new.clone());
        } else if !drop.contains(&i) {
            out.push(e.clone());
        }
    }
    out
}

fn append(ears: &[Ear], new: Ear, drop: &[usize]) -> Vec<Ear> {
    let mut out: Vec<Ear> = ears.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, e)| e.clone()).collect();
    out.push(new);
    out
}

fn rewrite_once(g: &Multigraph, ears: &[Ear]) -> Result<Option<Vec<Ear>>> {
    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (i, ear) in ears.iter().enumerate() {
        for &v in ear.inner() {
            owner[v] = i;
        }
    }
    // attached[i]: later nontrivial ears with an endpoint inside ear i, ascending
    let mut attached = vec![Vec::new(); ears.len()];
    for (j, ear) in ears.iter().enumerate() {
        let (s, t) = ear.ends();
        for v in [s, t] {
            let i = owner[v];
            if i != usize::MAX && i != j && !attached[i].contains(&j) {
                attached[i].push(j);
            }
        }
    }

    // non-pendant 2-ear absorbed into the first ear hanging off it
    for (i, p) in ears.iter().enumerate() {
        if p.len() != 2 || attached[i].is_empty() {
            continue;
        }
        let qi = attached[i][0];
        let a = p.vertices[1];
        let q = ending_at(&ears[qi], a)?;
        let w = q.vertices[0];
        let (x, y) = p.ends();
        let (end, e) = if w != x { (x, p.edges[0]) } else { (y, p.edges[1]) };
        let mut r = q;
        r.vertices.push(end);
        r.edges.push(e);
        return Ok(Some(replace(ears, qi, r, &[i])));
    }

    // non-pendant 3-ear
    for (i, p) in ears.iter().enumerate() {
        if p.len() != 3 || attached[i].is_empty() {
            continue;
        }
        let qi = attached[i][0];
        let (qs, qt) = ears[qi].ends();
        let p = if qs == p.vertices[2] || qt == p.vertices[2] { p.clone() } else { p.reversed() };
        let (x, u, v, y) = (p.vertices[0], p.vertices[1], p.vertices[2], p.vertices[3]);
        let q = ending_at(&ears[qi], v)?;
        let w = q.vertices[0];
        let r = if w == u {
            let mut vs = vec![x];
            vs.extend_from_slice(&q.vertices);
            vs.push(y);
            let mut es = vec![p.edges[0]];
            es.extend_from_slice(&q.edges);
            es.push(p.edges[2]);
            Ear::new(vs, es)
        } else {
            let mut vs = q.vertices.clone();
            vs.extend([u, x]);
            let mut es = q.edges.clone();
            es.extend([p.edges[1], p.edges[0]]);
            Ear::new(vs, es)
        };
        return Ok(Some(replace(ears, qi, r, &[i])));
    }

    // adjacency between internals of different short ears; 2+2, then 2+3, then 3+3
    for (want_p, want_q) in [(2, 2), (2, 3), (3, 3)] {
        for (i, p) in ears.iter().enumerate() {
            if p.len() != want_p {
                continue;
            }
            for &pv in p.inner() {
                for &(e, qv) in g.incident(pv) {
                    let j = owner[qv];
                    if j == usize::MAX || j == i || ears[j].len() != want_q {
                        continue;
                    }
                    let q = starting_inner(&ears[j], qv);
                    let r = match (want_p, want_q) {
                        (2, 2) => {
                            let mut pick = None;
                            'outer: for (ka, a) in [p.vertices[0], p.vertices[2]].into_iter().enumerate() {
                                for (kb, b) in [q.vertices[0], q.vertices[2]].into_iter().enumerate() {
                                    if a != b {
                                        pick = Some((a, p.edges[ka], b, q.edges[kb]));
                                        break 'outer;
                                    }
                                }
                            }
                            let (a, ea, b, eb) = pick.ok_or_else(|| internal!("2-ears with a single shared end"))?;
                            Ear::new(vec![a, pv, qv, b], vec![ea, e, eb])
                        }
                        (2, 3) => {
                            let b = q.vertices[3];
                            let (c, ec) = if p.vertices[0] != b { (p.vertices[0], p.edges[0]) } else { (p.vertices[2], p.edges[1]) };
                            let mut vs = vec![c, pv];
                            vs.extend_from_slice(&q.vertices[1..]);
                            let mut es = vec![ec, e];
                            es.extend_from_slice(&q.edges[1..]);
                            Ear::new(vs, es)
                        }
                        _ => {
                            let pp = starting_inner(p, pv);
                            let mut vs: Vec<usize> = pp.vertices[1..].iter().rev().copied().collect();
                            vs.extend_from_slice(&q.vertices[1..]);
                            let mut es: Vec<usize> = pp.edges[1..].iter().rev().copied().collect();
                            es.push(e);
                            es.extend_from_slice(&q.edges[1..]);
                            Ear::new(vs, es)
                        }
                    };
                    return Ok(Some(append(ears, r, &[i, j])));
                }
            }
        }
    }
    Ok(None)
}
