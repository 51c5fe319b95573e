//! Peeling one pendant ear: the edges kept inside the ear and the parity set
//! that the rest of the graph has to fix.

use super::{mark, Ear, EarDecomposition};
use crate::error::{internal, Error, Result};
use crate::graph::{Multigraph, Solution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Red edges, the cheaper alternating class.
    pub red: Vec<usize>,
    pub blue: Vec<usize>,
    /// Part of a T-join inside the ear.
    pub f: Solution,
    /// Parity set left for the graph without the ear's internals.
    pub s: Vec<usize>,
    /// Part of a connected T-join inside the ear.
    pub f_prime: Solution,
    pub s_prime: Vec<usize>,
}

/// Reduction step for ear `idx` of `d`, which must be nontrivial and pendant.
pub fn ear_reduction_step(g: &Multigraph, d: &EarDecomposition, idx: usize, t: &[usize]) -> Result<Reduction> {
    let ear = d.ears.get(idx).ok_or_else(|| Error::Precondition(format!("no ear {idx}")))?;
    if !d.pendant_flags(g.n())[idx] {
        return Err(Error::Precondition(format!("ear {idx} is not a pendant nontrivial ear")));
    }
    reduce_pendant_ear(g, ear, t)
}

/// Same as [`ear_reduction_step`] without the pendant check; the caller
/// guarantees nothing is attached inside `ear`.
pub fn reduce_pendant_ear(g: &Multigraph, ear: &Ear, t: &[usize]) -> Result<Reduction> {
    if t.len() % 2 == 1 {
        return Err(Error::OddTerminals(t.len()));
    }
    if ear.is_trivial() {
        return Err(Error::Precondition("reduction needs a nontrivial ear".into()));
    }
    let n = g.n();
    let in_t = mark(n, t);
    // split at internal terminals, alternate classes starting with class 0
    let mut class = [Vec::new(), Vec::new()];
    let mut c = 0;
    for (j, &e) in ear.edges.iter().enumerate() {
        if j > 0 && in_t[ear.vertices[j]] {
            c ^= 1;
        }
        class[c].push(e);
    }
    let red_class = if class[1].len() < class[0].len() { 1 } else { 0 };
    let red = class[red_class].clone();
    let blue = class[1 - red_class].clone();

    let odd_of = |es: &[usize]| {
        let mut deg = vec![false; n];
        for &e in es {
            let (a, b) = g.edge(e);
            deg[a] ^= true;
            deg[b] ^= true;
        }
        deg
    };
    let sym = |odd: Vec<bool>| -> Vec<usize> { (0..n).filter(|&v| in_t[v] ^ odd[v]).collect() };
    let s = sym(odd_of(&red));
    let s_prime = sym(odd_of(&blue));

    let f = Solution::from_edges(g.m(), &red);
    let mut f_prime = Solution::from_edges(g.m(), &ear.edges);
    if !red.is_empty() {
        for &e in &red {
            f_prime.set(e, 2);
        }
        let drop = *red.iter().min().unwrap();
        f_prime.set(drop, 0);
    }

    let inner = ear.inner();
    if s.iter().chain(&s_prime).any(|v| inner.contains(v)) {
        return Err(internal!("parity set meets the ear's internal vertices"));
    }
    let ni = inner.len();
    let phi = ear.is_even() as usize;
    let gamma = ear.is_clean(&in_t) as usize;
    if 2 * f.cardinality() > ni + phi {
        return Err(internal!("|F| = {} above its bound", f.cardinality()));
    }
    if 2 * f_prime.cardinality() + 2 > 3 * ni + phi + 2 * gamma {
        return Err(internal!("|F'| = {} above its bound", f_prime.cardinality()));
    }
    Ok(Reduction { red, blue, f, s, f_prime, s_prime })
}
