use num_bigint::BigUint;
use serde_json::{json, Value};

use super::automorphism::{automorphism_group, brute_force_automorphisms, GroupDescription, SearchLimits};
use super::{Perm, SimpleGraph};
use crate::error::{Error, Result};
use crate::spectral::IndexPair;

/// `J(I, 2)`: 2-subsets of `I = {0, …, k−1}`, adjacent when they meet.
#[derive(Debug, Clone)]
pub struct JohnsonGraph {
    k: usize,
    subsets: Vec<IndexPair>,
    graph: SimpleGraph,
}

impl JohnsonGraph {
    pub fn ground_size(&self) -> usize {
        self.k
    }

    pub fn subsets(&self) -> &[IndexPair] {
        &self.subsets
    }

    pub fn index_of(&self, pair: IndexPair) -> Option<usize> {
        self.subsets.binary_search(&pair).ok()
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    /// The vertex permutation induced by a permutation of `I`.
    pub fn induced(&self, delta: &[usize]) -> Perm {
        self.subsets
            .iter()
            .map(|s| self.index_of(s.map(delta)).expect("pair images are pairs"))
            .collect()
    }

    /// `J ↦ I ∖ J`, an automorphism only when `|I| = 4`.
    pub fn complement_map(&self) -> Option<Perm> {
        (self.k == 4).then(|| {
            self.subsets
                .iter()
                .map(|s| {
                    let rest: Vec<usize> = (0..4).filter(|&x| !s.contains(x)).collect();
                    self.index_of(IndexPair::new(rest[0], rest[1]).expect("two points")).expect("pair")
                })
                .collect()
        })
    }
}

pub fn johnson_graph(k: usize) -> Result<JohnsonGraph> {
    if k < 3 {
        return Err(Error::Precondition(format!("J(I,2) needs |I| ≥ 3, got {k}")));
    }
    let subsets: Vec<IndexPair> =
        (0..k).flat_map(|a| (a + 1..k).map(move |b| IndexPair::new(a, b).expect("a < b"))).collect();
    let mut graph = SimpleGraph::new(subsets.len());
    for (x, s) in subsets.iter().enumerate() {
        for (y, t) in subsets.iter().enumerate().skip(x + 1) {
            if !s.is_disjoint(t) {
                graph.add_edge(x, y);
            }
        }
    }
    Ok(JohnsonGraph { k, subsets, graph })
}

/// How an automorphism of `J(I, 2)` arises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JohnsonAutomorphism {
    /// Induced by the permutation `δ` of `I`.
    PermutationInduced(Vec<usize>),
    /// The complement map followed by the map induced by `δ` (`|I| = 4`).
    ComplementComposed(Vec<usize>),
    Other,
}

#[derive(Debug, Clone)]
pub struct JohnsonClassification {
    pub group: GroupDescription,
    pub elements: Vec<(Perm, JohnsonAutomorphism)>,
    pub permutation_induced: usize,
    pub complement_composed: usize,
    pub other: usize,
    /// Count from exhaustive search, for graphs small enough.
    pub brute_force_order: Option<usize>,
}

impl JohnsonClassification {
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.group.order.to_string(),
            "permutation_induced": self.permutation_induced,
            "complement_composed": self.complement_composed,
            "other": self.other,
            "brute_force_order": self.brute_force_order,
        })
    }
}

/// Every permutation of `{0, …, k−1}` in lexicographic order.
pub(crate) fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Automorphism group of `J(I, 2)` with each element classified by trying
/// every permutation of `I`. Limited to `|I| ≤ 7`.
pub fn johnson_automorphisms(j: &JohnsonGraph) -> Result<JohnsonClassification> {
    if j.k > 7 {
        return Err(Error::BudgetExceeded(format!("classification of J({},2) is limited to |I| ≤ 7", j.k)));
    }
    let group = automorphism_group(&j.graph, SearchLimits::default())?;
    let limit = 10_000_000;
    let elements = group.chain.elements(limit).ok_or_else(|| Error::BudgetExceeded("group too large".into()))?;
    let induced: Vec<(Vec<usize>, Perm)> = all_permutations(j.k).into_iter().map(|d| {
        let p = j.induced(&d);
        (d, p)
    }).collect();
    let complement = j.complement_map();
    let mut out = Vec::with_capacity(elements.len());
    let (mut perm, mut comp, mut other) = (0, 0, 0);
    for g in elements {
        let class = if let Some((d, _)) = induced.iter().find(|(_, p)| *p == g) {
            perm += 1;
            JohnsonAutomorphism::PermutationInduced(d.clone())
        } else if let Some((d, _)) = complement
            .as_ref()
            .and_then(|c| induced.iter().find(|(_, p)| c.iter().map(|&x| p[x]).eq(g.iter().copied())))
        {
            comp += 1;
            JohnsonAutomorphism::ComplementComposed(d.clone())
        } else {
            other += 1;
            JohnsonAutomorphism::Other
        };
        out.push((g, class));
    }
    let brute_force_order = (j.graph.n() <= 10).then(|| brute_force_automorphisms(&j.graph).len());
    if let Some(b) = brute_force_order {
        if BigUint::from(b) != group.order {
            return Err(Error::Precondition(format!("engine order {} but brute force finds {b}", group.order)));
        }
    }
    Ok(JohnsonClassification {
        group,
        elements: out,
        permutation_induced: perm,
        complement_composed: comp,
        other,
        brute_force_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_johnson_groups() {
        let j3 = johnson_automorphisms(&johnson_graph(3).unwrap()).unwrap();
        assert_eq!(j3.group.order, BigUint::from(6u32));
        assert_eq!(j3.permutation_induced, 6);
        assert!(johnson_graph(3).unwrap().graph().is_complete());

        let j4 = johnson_automorphisms(&johnson_graph(4).unwrap()).unwrap();
        assert_eq!(j4.group.order, BigUint::from(48u32));
        assert_eq!((j4.permutation_induced, j4.complement_composed, j4.other), (24, 24, 0));
        assert_eq!(j4.brute_force_order, Some(48));

        let j5 = johnson_automorphisms(&johnson_graph(5).unwrap()).unwrap();
        assert_eq!(j5.group.order, BigUint::from(120u32));
        assert_eq!(j5.permutation_induced, 120);
        assert_eq!(j5.brute_force_order, Some(120));

        assert!(johnson_graph(2).is_err());
    }

    #[test]
    fn complement_only_for_four() {
        assert!(johnson_graph(5).unwrap().complement_map().is_none());
        let j4 = johnson_graph(4).unwrap();
        let c = j4.complement_map().unwrap();
        assert!(super::super::is_automorphism(j4.graph(), &c));
    }
}
