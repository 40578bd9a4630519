use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde_json::{json, Value};

use super::{LabeledGraph, SimpleGraph};
use crate::error::Result;
use crate::spectral::{contract, IndexPair};
use crate::starfield::StarField;

/// Blocks of vertices, each sorted, ordered by least element.
pub type Partition = Vec<Vec<usize>>;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn components_from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Partition {
    let mut parent: Vec<usize> = (0..n).collect();
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    group_by_key(n, |v| find(&mut parent, v))
}

fn group_by_key<K: Eq + Hash>(n: usize, mut key: impl FnMut(usize) -> K) -> Partition {
    let mut slot: HashMap<K, usize> = HashMap::new();
    let mut blocks: Partition = Vec::new();
    for v in 0..n {
        let k = key(v);
        let next = blocks.len();
        let b = *slot.entry(k).or_insert(next);
        if b == next {
            blocks.push(Vec::new());
        }
        blocks[b].push(v);
    }
    blocks
}

pub fn connected_components(g: &SimpleGraph) -> Partition {
    components_from_edges(g.n(), g.edges())
}

/// Components of the subgraph keeping only edges of type `{i, j}`.
pub fn ij_components<E: Clone + Eq + Hash + std::fmt::Debug>(g: &LabeledGraph<E>, pair: IndexPair) -> Partition {
    components_from_edges(g.len(), g.typed_edges().filter(|&(_, _, t)| t == pair).map(|(u, v, _)| (u, v)))
}

/// Components of the subgraph keeping only edges whose type avoids `i`.
pub fn ibar_components<E: Clone + Eq + Hash + std::fmt::Debug>(g: &LabeledGraph<E>, i: usize) -> Partition {
    components_from_edges(g.len(), g.typed_edges().filter(|&(_, _, t)| !t.contains(i)).map(|(u, v, _)| (u, v)))
}

/// Vertices grouped by their `i`-th eigenspace (the blocks `[S]_i`).
pub fn eigenspace_partition<E: Clone + Eq + Hash + std::fmt::Debug>(g: &LabeledGraph<E>, i: usize) -> Partition {
    group_by_key(g.len(), |v| g.vertex(v).space(i).clone())
}

/// Vertices grouped by their contraction at `(i, j)`.
pub fn fiber_partition<F: StarField>(f: &F, g: &LabeledGraph<F::Elem>, i: usize, j: usize) -> Result<Partition> {
    let keys = g.vertices().iter().map(|a| contract(f, a, i, j)).collect::<Result<Vec<_>>>()?;
    Ok(group_by_key(g.len(), |v| keys[v].clone()))
}

/// How a finer partition sits inside a coarser one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionComparison {
    pub fine_blocks: usize,
    pub coarse_blocks: usize,
    /// Every fine block lies inside one coarse block.
    pub refines: bool,
    pub equal: bool,
    /// Coarse block size ↦ number of coarse blocks of that size.
    pub coarse_sizes: BTreeMap<usize, usize>,
    /// Number of fine blocks inside a coarse block ↦ number of such coarse
    /// blocks (only meaningful when `refines`).
    pub pieces_per_block: BTreeMap<usize, usize>,
}

impl PartitionComparison {
    pub fn to_json(&self) -> Value {
        let hist = |m: &BTreeMap<usize, usize>| -> Value {
            m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
        };
        json!({
            "fine_blocks": self.fine_blocks,
            "coarse_blocks": self.coarse_blocks,
            "refines": self.refines,
            "equal": self.equal,
            "coarse_sizes": hist(&self.coarse_sizes),
            "pieces_per_block": hist(&self.pieces_per_block),
        })
    }
}

pub fn compare_partitions(fine: &Partition, coarse: &Partition) -> PartitionComparison {
    let n: usize = coarse.iter().map(Vec::len).sum();
    let mut block_of = vec![usize::MAX; n.max(fine.iter().flatten().map(|&v| v + 1).max().unwrap_or(0))];
    for (b, block) in coarse.iter().enumerate() {
        for &v in block {
            block_of[v] = b;
        }
    }
    let mut pieces = vec![0usize; coarse.len()];
    let mut refines = true;
    for block in fine {
        let b = block_of[block[0]];
        if block.iter().any(|&v| block_of[v] != b) || b == usize::MAX {
            refines = false;
        } else {
            pieces[b] += 1;
        }
    }
    let mut coarse_sizes = BTreeMap::new();
    for block in coarse {
        *coarse_sizes.entry(block.len()).or_insert(0) += 1;
    }
    let mut pieces_per_block = BTreeMap::new();
    if refines {
        for &p in &pieces {
            *pieces_per_block.entry(p).or_insert(0) += 1;
        }
    }
    PartitionComparison {
        fine_blocks: fine.len(),
        coarse_blocks: coarse.len(),
        refines,
        equal: refines && fine.len() == coarse.len(),
        coarse_sizes,
        pieces_per_block,
    }
}
