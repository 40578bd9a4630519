use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde_json::{json, Value};

use super::schreier::{orbit, StabilizerChain};
use super::{Perm, SimpleGraph};
use crate::error::{Error, Result};

/// Edge set preserved in both directions by the bijection `p`.
pub fn is_automorphism(g: &SimpleGraph, p: &[usize]) -> bool {
    let n = g.n();
    if p.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in p {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    // a bijection mapping edges to edges is onto the (equally large) edge set
    g.edges().all(|(u, v)| g.has_edge(p[u], p[v]))
}

/// Work limits for the backtracking search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of refined search-tree nodes.
    pub max_nodes: u64,
    /// Refuse graphs with more vertices than this.
    pub max_vertices: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 2_000_000, max_vertices: 5000 }
    }
}

/// Automorphism group of an unlabeled graph.
#[derive(Debug, Clone)]
pub struct GroupDescription {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub order: BigUint,
    /// Vertices individualized along the first search path.
    pub search_base: Vec<usize>,
    /// `|G_l : G_{l+1}|` along the first path.
    pub search_orbits: Vec<usize>,
    pub nodes: u64,
    pub chain: StabilizerChain,
}

impl GroupDescription {
    /// Group generated by explicit permutations (no search).
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Self {
        let chain = StabilizerChain::new(degree, &generators);
        GroupDescription {
            degree,
            order: chain.order(),
            search_base: chain.base(),
            search_orbits: chain.basic_orbit_sizes(),
            generators,
            nodes: 0,
            chain,
        }
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        self.chain.contains(p)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "order": self.order.to_string(),
            "generators": self.generators,
            "base": self.chain.base(),
            "basic_orbits": self.chain.basic_orbit_sizes(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    fn unit(n: usize) -> Self {
        Partition { cells: if n == 0 { Vec::new() } else { vec![(0..n).collect()] } }
    }

    fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// First cell of least size above one.
    fn target(&self) -> Option<usize> {
        (0..self.cells.len())
            .filter(|&k| self.cells[k].len() > 1)
            .min_by_key(|&k| (self.cells[k].len(), k))
    }

    fn individualize(&self, cell: usize, v: usize) -> Self {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        cells.extend_from_slice(&self.cells[..cell]);
        cells.push(vec![v]);
        cells.push(self.cells[cell].iter().copied().filter(|&x| x != v).collect());
        cells.extend_from_slice(&self.cells[cell + 1..]);
        Partition { cells }
    }

    /// Colour refinement to the coarsest equitable partition below `self`.
    /// Each cell splits by the multiset of neighbour cells, and the pieces
    /// are ordered by that multiset, so the result does not depend on vertex
    /// names: an isomorphism maps the refinement of `π` to that of its image.
    fn refine(mut self, g: &SimpleGraph) -> Self {
        let mut cell_of = vec![0usize; g.n()];
        loop {
            for (k, c) in self.cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = k;
                }
            }
            let mut next = Vec::with_capacity(self.cells.len());
            let mut split = false;
            for c in &self.cells {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut groups: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
                for &v in c {
                    let mut counts: Vec<usize> = g.neighbors(v).iter().map(|&u| cell_of[u]).collect();
                    counts.sort_unstable();
                    let mut key: Vec<(usize, usize)> = Vec::new();
                    for x in counts {
                        match key.last_mut() {
                            Some((cell, m)) if *cell == x => *m += 1,
                            _ => key.push((x, 1)),
                        }
                    }
                    groups.entry(key).or_default().push(v);
                }
                split |= groups.len() > 1;
                next.extend(groups.into_values());
            }
            self.cells = next;
            if !split {
                return self;
            }
        }
    }

    fn labeling(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c[0]).collect()
    }
}

struct Search<'a> {
    g: &'a SimpleGraph,
    limits: SearchLimits,
    nodes: u64,
    path: Vec<Partition>,
    targets: Vec<usize>,
    leaf: Vec<usize>,
}

impl Search<'_> {
    fn refine(&mut self, p: Partition) -> Result<Partition> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::BudgetExceeded(format!("more than {} search nodes", self.limits.max_nodes)));
        }
        Ok(p.refine(self.g))
    }

    /// Look below `p` (a child of the first-path node at `level - 1`) for a
    /// leaf whose labeling differs from the first leaf by an automorphism.
    fn find_equivalent_leaf(&mut self, p: Partition, level: usize) -> Result<Option<Perm>> {
        let p = self.refine(p)?;
        if p.shape() != self.path[level].shape() {
            return Ok(None);
        }
        if p.is_discrete() {
            let labels = p.labeling();
            let mut gamma = vec![0; self.g.n()];
            for (k, &v) in self.leaf.iter().enumerate() {
                gamma[v] = labels[k];
            }
            return Ok(is_automorphism(self.g, &gamma).then_some(gamma));
        }
        let t = self.targets[level];
        for &w in &p.cells[t].clone() {
            if let Some(gamma) = self.find_equivalent_leaf(p.individualize(t, w), level + 1)? {
                return Ok(Some(gamma));
            }
        }
        Ok(None)
    }
}

/// Automorphism group by individualization-refinement.
///
/// The first path individualizes the first vertex of the target cell at
/// every level. Processing levels from the bottom up, each other vertex `w`
/// of the target cell that is not yet in the orbit of the path vertex gets
/// its subtree searched for an automorphism; the orbit then has size
/// `|G_l : G_{l+1}|`, and the order is the product of these indices. The
/// result is cross-checked against a Schreier–Sims chain on the generators.
pub fn automorphism_group(g: &SimpleGraph, limits: SearchLimits) -> Result<GroupDescription> {
    let n = g.n();
    if n > limits.max_vertices {
        return Err(Error::BudgetExceeded(format!("{n} vertices exceeds the limit of {}", limits.max_vertices)));
    }
    let mut search = Search { g, limits, nodes: 0, path: Vec::new(), targets: Vec::new(), leaf: Vec::new() };
    let mut current = search.refine(Partition::unit(n))?;
    let mut base = Vec::new();
    while let Some(t) = current.target() {
        let v = current.cells[t][0];
        search.path.push(current.clone());
        search.targets.push(t);
        base.push(v);
        current = search.refine(current.individualize(t, v))?;
    }
    search.leaf = current.labeling();
    search.path.push(current);

    let mut generators: Vec<Perm> = Vec::new();
    let mut orbits = vec![1usize; base.len()];
    for level in (0..base.len()).rev() {
        let t = search.targets[level];
        let node = search.path[level].clone();
        let mut known = orbit(n, base[level], &generators);
        for &w in &node.cells[t] {
            if known.contains(&w) {
                continue;
            }
            if let Some(gamma) = search.find_equivalent_leaf(node.individualize(t, w), level + 1)? {
                generators.push(gamma);
                known = orbit(n, base[level], &generators);
            }
        }
        orbits[level] = known.len();
    }
    debug_assert!(generators.iter().all(|p| is_automorphism(g, p)));
    let order: BigUint = orbits.iter().map(|&k| BigUint::from(k)).product();
    let chain = StabilizerChain::new(n, &generators);
    if chain.order() != order {
        return Err(Error::Precondition(format!(
            "stabilizer chain order {} disagrees with search order {order}",
            chain.order()
        )));
    }
    Ok(GroupDescription { degree: n, generators, order, search_base: base, search_orbits: orbits, nodes: search.nodes, chain })
}

/// All automorphisms by backtracking over partial vertex assignments.
/// Exponential; intended for graphs with at most a dozen vertices.
pub fn brute_force_automorphisms(g: &SimpleGraph) -> Vec<Perm> {
    fn extend(g: &SimpleGraph, p: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        let k = p.len();
        if k == g.n() {
            out.push(p.clone());
            return;
        }
        for y in 0..g.n() {
            if used[y] || g.degree(y) != g.degree(k) {
                continue;
            }
            if (0..k).all(|u| g.has_edge(u, k) == g.has_edge(p[u], y)) {
                used[y] = true;
                p.push(y);
                extend(g, p, used, out);
                p.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::with_capacity(g.n()), &mut vec![false; g.n()], &mut out);
    out
}
