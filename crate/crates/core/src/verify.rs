//! Independent solution checking and the solution file format
//! (`x <edge-id> <multiplicity>`, edge ids 1-based in file order).

use crate::error::{Error, Result};
use crate::graph::{is_2ec_spanning, Multigraph, Solution};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Tsp,
    Tjoin(Vec<usize>),
    TwoEcss,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub cardinality: usize,
    /// First violated condition, if any.
    pub failure: Option<String>,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks multiplicities, parities against T, connectivity of the support,
/// and for 2ECSS two-edge-connectivity with multiplicities ≤ 1.
pub fn verify_solution(g: &Multigraph, sol: &Solution, problem: &Problem) -> Verdict {
    let cardinality = sol.cardinality();
    let fail = |s: String| Verdict { cardinality, failure: Some(s) };
    if sol.m() != g.m() {
        return fail(format!("solution covers {} edges, graph has {}", sol.m(), g.m()));
    }
    if let Some((e, k)) = sol.iter().find(|&(_, k)| k > 2) {
        return fail(format!("edge {} has multiplicity {k}", e + 1));
    }
    match problem {
        Problem::TwoEcss => {
            if let Some((e, _)) = sol.iter().find(|&(_, k)| k > 1) {
                return fail(format!("edge {} is used twice in a 2ECSS", e + 1));
            }
            if !is_2ec_spanning(g, &sol.support()) {
                return fail("support is not 2-edge-connected and spanning".into());
            }
        }
        Problem::Tsp | Problem::Tjoin(_) => {
            let t: &[usize] = match problem {
                Problem::Tjoin(t) => t,
                _ => &[],
            };
            let mut want = vec![false; g.n()];
            for &v in t {
                want[v] ^= true;
            }
            let mut odd = vec![false; g.n()];
            for v in sol.odd_vertices(g) {
                odd[v] = true;
            }
            if let Some(v) = (0..g.n()).find(|&v| odd[v] != want[v]) {
                return fail(format!("vertex {} has {} degree", v + 1, if odd[v] { "odd" } else { "even" }));
            }
            if !sol.is_spanning_connected(g) {
                return fail("support is not connected and spanning".into());
            }
        }
    }
    Verdict { cardinality, failure: None }
}

pub fn parse_solution(text: &str, m: usize) -> Result<Solution> {
    let mut sol = Solution::empty(m);
    for (i, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() || s.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::Parse { line: i + 1, msg: format!("expected `x <edge-id> <multiplicity>`, got `{s}`") };
        if parts.len() != 3 || parts[0] != "x" {
            return Err(bad());
        }
        let e: usize = parts[1].parse().map_err(|_| bad())?;
        let k: u8 = parts[2].parse().map_err(|_| bad())?;
        if e == 0 || e > m {
            return Err(Error::Parse { line: i + 1, msg: format!("edge id {e} outside 1..={m}") });
        }
        sol.add(e - 1, k);
    }
    Ok(sol)
}

pub fn write_solution(sol: &Solution) -> String {
    let mut s = String::new();
    for (e, k) in sol.iter() {
        let _ = writeln!(s, "x {} {}", e + 1, k);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_tours() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let all = parse_solution("x 1 1\nx 2 1\nx 3 1\nx 4 1\n", 4).unwrap();
        assert!(verify_solution(&g, &all, &Problem::Tsp).ok());
        let short = parse_solution("x 1 1\nx 2 1\nx 3 1\n", 4).unwrap();
        let v = verify_solution(&g, &short, &Problem::Tsp);
        assert!(v.failure.unwrap().contains("odd"));
        assert_eq!(parse_solution(&write_solution(&all), 4).unwrap(), all);
        assert!(parse_solution("x 5 1\n", 4).is_err());
    }
}
