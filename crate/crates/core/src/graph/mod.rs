//! Graphs on conjugacy classes: exhaustive enumeration over finite
//! backends, component analysis, the Johnson-graph layer and an automorphism
//! engine for unlabeled simple graphs.

mod automorphism;
mod components;
mod johnson;
mod schreier;
mod simple;
mod tau;

pub use automorphism::{automorphism_group, brute_force_automorphisms, is_automorphism, GroupDescription, SearchLimits};
pub use components::{
    compare_partitions, connected_components, eigenspace_partition, fiber_partition, ibar_components, ij_components,
    Partition, PartitionComparison,
};
pub(crate) use johnson::all_permutations;
pub use johnson::{johnson_automorphisms, johnson_graph, JohnsonAutomorphism, JohnsonClassification, JohnsonGraph};
pub use schreier::StabilizerChain;
pub use simple::{fixtures, Perm, SimpleGraph};
pub use tau::{classify_tau, extract_component_maps, induced_tau, orthogonality_compatible, ComponentMap, TauClass, TypeMap};

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::spectral::{classify_pairs, ClassSignature, EigenFlag, IndexPair, PairClassification};
use crate::starfield::StarField;

/// Every eigen-flag of the class, each exactly once, in canonical order.
///
/// Slot by slot: pick a nondegenerate subspace of the required dimension in
/// what is left, then continue in its orthogonal complement there. The last
/// slot is forced.
pub fn enumerate_flags<F: StarField>(f: &F, signature: &ClassSignature<F::Elem>) -> Result<Vec<EigenFlag<F::Elem>>> {
    let scalars = f.elements().ok_or(Error::FiniteBackendRequired)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(signature.len());
    extend_flags(f, signature, &scalars, &Subspace::full(f, signature.ambient()), &mut prefix, &mut out)?;
    out.sort();
    Ok(out)
}

fn extend_flags<F: StarField>(
    f: &F,
    signature: &ClassSignature<F::Elem>,
    scalars: &[F::Elem],
    rest: &Subspace<F::Elem>,
    prefix: &mut Vec<Subspace<F::Elem>>,
    out: &mut Vec<EigenFlag<F::Elem>>,
) -> Result<()> {
    let pos = prefix.len();
    if pos + 1 == signature.len() {
        prefix.push(rest.clone());
        out.push(EigenFlag::from_parts(signature.clone(), prefix.clone()));
        prefix.pop();
        return Ok(());
    }
    for x in rest.subspaces_of_dim(f, signature.dim(pos), scalars) {
        if !x.is_nondegenerate(f) {
            continue;
        }
        let next = x.relative_orthocomplement(f, rest)?;
        prefix.push(x);
        extend_flags(f, signature, scalars, &next, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// `Γ(σ, d)` restricted to a vertex list: edges are the (A1 ∧ A2) pairs,
/// each tagged with its geometric type.
#[derive(Debug, Clone)]
pub struct LabeledGraph<E> {
    vertices: Vec<EigenFlag<E>>,
    index: HashMap<EigenFlag<E>, usize>,
    graph: SimpleGraph,
    edge_types: BTreeMap<(usize, usize), IndexPair>,
    classification: PairClassification,
}

impl<E: Clone + Eq + std::hash::Hash + std::fmt::Debug> LabeledGraph<E> {
    pub fn vertices(&self) -> &[EigenFlag<E>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &EigenFlag<E> {
        &self.vertices[v]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_of(&self, a: &EigenFlag<E>) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn signature(&self) -> Option<&ClassSignature<E>> {
        self.vertices.first().map(|a| a.signature())
    }

    /// Geometric type of the edge `{u, v}`; `None` for non-edges and for
    /// edges without a geometric type (which would be discrepancies).
    pub fn edge_type(&self, u: usize, v: usize) -> Option<IndexPair> {
        self.edge_types.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn typed_edges(&self) -> impl Iterator<Item = (usize, usize, IndexPair)> + '_ {
        self.edge_types.iter().map(|(&(u, v), &t)| (u, v, t))
    }

    pub fn classification(&self) -> &PairClassification {
        &self.classification
    }

    /// Pull a map on flags back to a vertex permutation.
    pub fn vertex_map(&self, mut map: impl FnMut(&EigenFlag<E>) -> Result<EigenFlag<E>>) -> Result<Perm> {
        self.vertices
            .iter()
            .map(|a| self.vertex_of(&map(a)?).ok_or(Error::ImageNotInGraph))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .graph
            .edges()
            .map(|(u, v)| match self.edge_type(u, v) {
                Some(t) => json!([u, v, t.to_json()]),
                None => json!([u, v, null]),
            })
            .collect();
        json!({ "vertices": self.len(), "edges": edges })
    }

    /// Graphviz output with one colour per edge type.
    pub fn to_dot(&self) -> String {
        const COLORS: [&str; 8] = ["red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta"];
        let mut palette: BTreeMap<IndexPair, &str> = BTreeMap::new();
        let mut out = String::from("graph gamma {\n  node [shape=point];\n");
        for v in 0..self.len() {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.graph.edges() {
            match self.edge_type(u, v) {
                Some(t) => {
                    let next = COLORS[palette.len() % COLORS.len()];
                    let color = *palette.entry(t).or_insert(next);
                    out.push_str(&format!("  {u} -- {v} [color={color}, label=\"{t}\"];\n"));
                }
                None => out.push_str(&format!("  {u} -- {v} [style=dashed];\n")),
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Build `Γ` on the given flags, evaluating every pair.
pub fn build_graph<F: StarField>(f: &F, flags: Vec<EigenFlag<F::Elem>>) -> Result<LabeledGraph<F::Elem>> {
    let classification = classify_pairs(f, &flags)?;
    let mut graph = SimpleGraph::new(flags.len());
    let mut edge_types = BTreeMap::new();
    for &(u, v, t) in &classification.edges {
        graph.add_edge(u, v);
        if let Some(t) = t {
            edge_types.insert((u, v), t);
        }
    }
    let mut index = HashMap::with_capacity(flags.len());
    for (k, a) in flags.iter().enumerate() {
        if index.insert(a.clone(), k).is_some() {
            return Err(Error::Precondition("vertex list contains a repeated flag".into()));
        }
    }
    Ok(LabeledGraph { vertices: flags, index, graph, edge_types, classification })
}
