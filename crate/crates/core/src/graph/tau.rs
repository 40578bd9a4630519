use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde_json::{json, Value};

use super::automorphism::is_automorphism;
use super::johnson::all_permutations;
use super::LabeledGraph;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::spectral::IndexPair;
use crate::starfield::StarField;

/// A map on adjacency types `{i, j} ↦ {i', j'}`.
pub type TypeMap = BTreeMap<IndexPair, IndexPair>;

/// The map `τ` on types induced by a graph automorphism: the type of
/// `f(A)f(B)` for any edge `AB` of type `{i, j}`.
///
/// Fails if `f` is not an automorphism, or if two edges of one type go to
/// edges of different types.
pub fn induced_tau<E: Clone + Eq + Hash + Debug>(g: &LabeledGraph<E>, f: &[usize]) -> Result<TypeMap> {
    if !is_automorphism(g.graph(), f) {
        return Err(Error::NotAutomorphism);
    }
    let mut tau = TypeMap::new();
    for (u, v, t) in g.typed_edges() {
        let image = g
            .edge_type(f[u], f[v])
            .ok_or_else(|| Error::TauNotWellDefined(format!("edge ({u},{v}) maps to an edge without a type")))?;
        match tau.insert(t, image) {
            Some(prev) if prev != image => {
                return Err(Error::TauNotWellDefined(format!("type {t} maps to both {prev} and {image}")));
            }
            _ => {}
        }
    }
    Ok(tau)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TauClass {
    /// `τ({i,j}) = {δ(i), δ(j)}` on its whole domain.
    PermutationInduced(Vec<usize>),
    /// An automorphism of `J(I, 2)` (on the domain) not of that form.
    JohnsonAutomorphism,
    NotJohnsonAutomorphism,
}

/// Classify `τ` against the permutations of `{0, …, k−1}`.
pub fn classify_tau(tau: &TypeMap, k: usize) -> TauClass {
    if let Some(delta) = all_permutations(k).into_iter().find(|d| tau.iter().all(|(s, t)| s.map(d) == *t)) {
        return TauClass::PermutationInduced(delta);
    }
    let pairs: Vec<(&IndexPair, &IndexPair)> = tau.iter().collect();
    let johnson = pairs.iter().enumerate().all(|(a, (s1, t1))| {
        pairs[a + 1..].iter().all(|(s2, t2)| t1 != t2 && s1.is_disjoint(s2) == t1.is_disjoint(t2))
    });
    if johnson {
        TauClass::JohnsonAutomorphism
    } else {
        TauClass::NotJohnsonAutomorphism
    }
}

/// The map `S ↦ S'` on `i`-eigenspaces induced by an automorphism whose
/// type map comes from a permutation `δ`: a vertex with `Xᵢ = S` goes to a
/// vertex with `X_{δ(i)} = S'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentMap<E> {
    pub index: usize,
    pub target: usize,
    pub delta: Vec<usize>,
    pub map: BTreeMap<Subspace<E>, Subspace<E>>,
}

impl<E: Clone + Eq + Ord + Debug> ComponentMap<E> {
    pub fn apply(&self, s: &Subspace<E>) -> Option<&Subspace<E>> {
        self.map.get(s)
    }

    pub fn is_injective(&self) -> bool {
        let mut images: Vec<&Subspace<E>> = self.map.values().collect();
        images.sort();
        images.windows(2).all(|w| w[0] != w[1])
    }

    /// `S ~ T ⟺ f(S) ~ f(T)` on the whole domain.
    pub fn preserves_adjacency<F: StarField<Elem = E>>(&self, f: &F) -> bool {
        let entries: Vec<_> = self.map.iter().collect();
        entries.iter().enumerate().all(|(a, (s, fs))| {
            entries[a + 1..].iter().all(|(t, ft)| {
                s.is_adjacent(f, t).unwrap_or(false) == fs.is_adjacent(f, ft).unwrap_or(false)
            })
        })
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "index": self.index + 1,
            "target": self.target + 1,
            "delta": self.delta.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "pairs": self.map.iter().map(|(s, t)| json!([s.to_json(f), t.to_json(f)])).collect::<Vec<_>>(),
        })
    }
}

/// `X ⟂ Y ⟺ fᵢ(X) ⟂ fⱼ(Y)` for every `X` in the domain of `fi` and `Y` in
/// that of `fj`.
pub fn orthogonality_compatible<F: StarField>(f: &F, fi: &ComponentMap<F::Elem>, fj: &ComponentMap<F::Elem>) -> bool {
    fi.map.iter().all(|(x, fx)| {
        fj.map.iter().all(|(y, fy)| {
            x.is_orthogonal_to(f, y).unwrap_or(false) == fx.is_orthogonal_to(f, fy).unwrap_or(false)
        })
    })
}

pub fn extract_component_maps<E: Clone + Eq + Ord + Hash + Debug>(
    g: &LabeledGraph<E>,
    f: &[usize],
    i: usize,
) -> Result<ComponentMap<E>> {
    let k = g.signature().map_or(0, |s| s.len());
    let tau = induced_tau(g, f)?;
    let TauClass::PermutationInduced(delta) = classify_tau(&tau, k) else {
        return Err(Error::TauNotPermutationInduced);
    };
    let target = delta[i];
    let mut map = BTreeMap::new();
    for (v, a) in g.vertices().iter().enumerate() {
        let image = g.vertex(f[v]).space(target).clone();
        match map.insert(a.space(i).clone(), image.clone()) {
            Some(prev) if prev != image => {
                return Err(Error::ComponentMapNotWellDefined(format!(
                    "the eigenspace of vertex {v} at index {} has two images",
                    i + 1
                )));
            }
            _ => {}
        }
    }
    Ok(ComponentMap { index: i, target, delta, map })
}
