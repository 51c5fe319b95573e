//! Combinatorial lower bounds L_φ, L_μ, Λ and the dual witness behind L_μ.

use crate::earmuff::{endpoint_sets, MuffCertificate};
use crate::ears::Eardrum;
use crate::error::{internal, Error, Result};
use crate::graph::Multigraph;
use crate::lp::Q;
use num::traits::Zero;

/// |V| + φ − 1.
pub fn l_phi(n: usize, phi: usize) -> usize {
    n + phi - 1
}

/// (2/3)·L_μ + (1/3)·L_φ.
pub fn lambda(l_mu: usize, l_phi: usize) -> Q {
    Q::new((2 * l_mu + l_phi).into(), 3.into())
}

/// Partition Ŵ and cut family 𝒮 certifying L_μ ≤ LP(G,T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuDualWitness {
    pub partition: Vec<Vec<usize>>,
    pub cuts: Vec<Vec<usize>>,
}

impl MuDualWitness {
    /// Re-checks the counting argument: Ŵ partitions V, no 𝒮-cut edge crosses
    /// Ŵ, no edge lies in more than two 𝒮-cuts, every 𝒮 set is an allowed cut
    /// for T. Returns |Ŵ| − 1 + |𝒮|.
    pub fn verify(&self, g: &Multigraph, t: &[usize]) -> Result<usize> {
        let n = g.n();
        let mut class = vec![usize::MAX; n];
        for (i, w) in self.partition.iter().enumerate() {
            for &v in w {
                if class[v] != usize::MAX {
                    return Err(internal!("witness classes overlap at {v}"));
                }
                class[v] = i;
            }
        }
        if class.iter().any(|&c| c == usize::MAX) {
            return Err(internal!("witness partition misses a vertex"));
        }
        let mut hits = vec![0u32; g.m()];
        for s in &self.cuts {
            if s.is_empty() || s.len() >= n {
                return Err(internal!("witness cut is not proper"));
            }
            if s.iter().filter(|v| t.contains(v)).count() % 2 == 1 {
                return Err(internal!("witness cut has an odd number of terminals"));
            }
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                if s.contains(&a) != s.contains(&b) {
                    if class[a] != class[b] {
                        return Err(internal!("edge {e} is in a witness cut and crosses the partition"));
                    }
                    hits[e] += 1;
                    if hits[e] > 2 {
                        return Err(internal!("edge {e} lies in three witness cuts"));
                    }
                }
            }
        }
        Ok(self.partition.len() - 1 + self.cuts.len())
    }
}

/// L_μ = |V| − 1 + |M| − μ together with its verified dual witness.
pub fn l_mu(g: &Multigraph, drum: &Eardrum, t: &[usize], mu: usize, cert: &MuffCertificate) -> Result<(usize, MuDualWitness)> {
    drum.validate(g, t)?;
    if !cert.skipped.is_empty() {
        return Err(Error::Precondition("some core has no realizing path".into()));
    }
    if cert.value(drum.len()) != mu as i64 {
        return Err(Error::Precondition(format!("certificate value {} does not match μ = {mu}", cert.value(drum.len()))));
    }
    let sets = endpoint_sets(g, drum);
    let n = g.n();
    let mut class_of = vec![usize::MAX; n];
    for (i, w) in cert.partition.iter().enumerate() {
        for &v in w {
            class_of[v] = i;
        }
    }
    let mut partition: Vec<Vec<usize>> = cert.partition.clone();
    let mut cuts: Vec<Vec<usize>> = Vec::new();
    for (f, core) in drum.cores.iter().enumerate() {
        let home = class_of[sets[f][0]];
        let inside = home != usize::MAX && sets[f].iter().all(|&u| class_of[u] == home);
        if inside {
            partition[home].extend(core.iter().copied());
            for &x in core {
                cuts.push(vec![x]);
            }
            cuts.push(core.clone());
        } else {
            for &x in core {
                partition.push(vec![x]);
            }
        }
    }
    for w in &mut partition {
        w.sort_unstable();
    }
    let witness = MuDualWitness { partition, cuts };
    let chain = witness.verify(g, t)?;
    let value = n - 1 + drum.len() - mu;
    if chain != value {
        return Err(internal!("witness counts {chain}, expected L_μ = {value}"));
    }
    Ok((value, witness))
}

/// Everything the ratio checks compare against.
#[derive(Clone, Debug)]
pub struct BoundsCertificate {
    pub l_phi: usize,
    pub l_mu: usize,
    pub lambda: Q,
    pub lp_value: Option<Q>,
    pub witness: MuDualWitness,
}

impl BoundsCertificate {
    /// L_φ ≤ LP, L_μ ≤ LP, Λ ≤ LP when an LP value is present.
    pub fn check_ordering(&self) -> Result<()> {
        if let Some(lp) = &self.lp_value {
            let lphi = Q::from_integer(self.l_phi.into());
            let lmu = Q::from_integer(self.l_mu.into());
            if lphi > *lp || lmu > *lp || self.lambda > *lp || lp.is_zero() {
                return Err(Error::BoundViolated(format!("bounds L_φ={} L_μ={} Λ={} exceed LP={}", self.l_phi, self.l_mu, self.lambda, lp)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::earmuff::max_earmuff;

    #[test]
    fn simple_values() {
        assert_eq!(l_phi(5, 0), 4);
        assert_eq!(l_phi(4, 1), 4);
        assert_eq!(lambda(4, 4), Q::from_integer(4.into()));
    }

    #[test]
    fn empty_eardrum_gives_spanning_tree_bound() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let drum = Eardrum { cores: vec![], ear_of: vec![] };
        let (_, cert) = max_earmuff(&g, &drum).unwrap();
        let (v, w) = l_mu(&g, &drum, &[], 0, &cert).unwrap();
        assert_eq!(v, 3);
        assert!(w.cuts.is_empty());
    }

    #[test]
    fn blocked_core_raises_bound() {
        // two vertices 2,3 each adjacent to only 0 and 1: the second core cannot join
        let g = Multigraph::new(4, vec![(0, 2), (2, 1), (0, 3), (3, 1), (0, 1)]).unwrap();
        let drum = Eardrum { cores: vec![vec![2], vec![3]], ear_of: vec![0, 1] };
        let (muff, cert) = max_earmuff(&g, &drum).unwrap();
        assert_eq!(muff.size(), 1);
        let (v, _) = l_mu(&g, &drum, &[], 1, &cert).unwrap();
        assert_eq!(v, 4);
    }
}
