//! Maps on conjugacy classes induced by linear-algebra data, and the
//! witness constructions used to show the adjacency-type map is an
//! automorphism of the Johnson graph.

mod lemma;
mod unitary;

pub use lemma::{obstruction_witness, swap_construction, verify_nonexistence, ObstructionWitness};
pub use unitary::{
    induced_subgroup, isometry_group_order, unitary_generators, unitary_group_order, InducedGenerator,
    InducedSubgroup,
};

use std::fmt::Debug;
use std::hash::Hash;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{all_permutations, is_automorphism, LabeledGraph, Perm};
use crate::linalg::Matrix;
use crate::spectral::{ClassSignature, EigenFlag, SdPermutation};
use crate::starfield::{FieldAutomorphism, StarField};

/// An isometry of the standard Hermitian form: `U*·U = I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitaryMap<E> {
    matrix: Matrix<E>,
}

impl<E: Clone + Eq + Debug> UnitaryMap<E> {
    pub fn new<F: StarField<Elem = E>>(f: &F, matrix: Matrix<E>) -> Result<Self> {
        if !matrix.is_isometry(f) {
            return Err(Error::NotIsometry);
        }
        Ok(UnitaryMap { matrix })
    }

    pub fn identity<F: StarField<Elem = E>>(f: &F, n: usize) -> Self {
        UnitaryMap { matrix: Matrix::identity(f, n) }
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.n_rows()
    }

    /// `v ↦ U·v`, or `v ↦ U·conj(v)` when `antilinear`.
    pub fn as_semilinear<F: StarField<Elem = E>>(&self, f: &F, antilinear: bool) -> SemilinearMap<E> {
        let auto = if antilinear { conjugation_auto(f) } else { FieldAutomorphism::IDENTITY };
        SemilinearMap { matrix: self.matrix.clone(), auto }
    }
}

/// `v ↦ M·α(v)` for an invertible `M` and a field automorphism `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap<E> {
    matrix: Matrix<E>,
    auto: FieldAutomorphism,
}

impl<E: Clone + Eq + Debug> SemilinearMap<E> {
    pub fn new<F: StarField<Elem = E>>(f: &F, matrix: Matrix<E>, auto: FieldAutomorphism) -> Result<Self> {
        if !matrix.is_square() || matrix.inverse(f).is_none() {
            return Err(Error::Singular);
        }
        if !f.field_automorphisms().contains(&auto) {
            return Err(Error::Precondition(format!("field automorphism {auto:?} is not offered by the backend")));
        }
        Ok(SemilinearMap { matrix, auto })
    }

    pub fn linear<F: StarField<Elem = E>>(f: &F, matrix: Matrix<E>) -> Result<Self> {
        Self::new(f, matrix, FieldAutomorphism::IDENTITY)
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.matrix
    }

    pub fn field_auto(&self) -> FieldAutomorphism {
        self.auto
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        json!({ "matrix": self.matrix.to_json(f), "field_auto": self.auto.power })
    }
}

/// The automorphism of the field that coincides with `conj`.
pub fn conjugation_auto<F: StarField>(f: &F) -> FieldAutomorphism {
    let probe = f.elements().unwrap_or_else(|| f.sample_scalars());
    f.field_automorphisms()
        .into_iter()
        .find(|&a| probe.iter().all(|x| f.apply_automorphism(a, x) == f.conj(x)))
        .expect("every backend exposes its involution as an automorphism")
}

/// `A ↦ U A U*`, i.e. `Xᵢ ↦ U(Xᵢ)`, on a single flag.
pub fn conjugate_flag<F: StarField>(
    f: &F,
    u: &UnitaryMap<F::Elem>,
    antilinear: bool,
    a: &EigenFlag<F::Elem>,
) -> Result<EigenFlag<F::Elem>> {
    let s = u.as_semilinear(f, antilinear);
    a.map_semilinear(f, &s.matrix, s.auto)
}

/// The vertex permutation of `g` induced by `U` (composed with `conj` when
/// `antilinear`). The result is checked to be a graph automorphism.
pub fn conjugation_automorphism<F: StarField>(
    f: &F,
    g: &LabeledGraph<F::Elem>,
    u: &UnitaryMap<F::Elem>,
    antilinear: bool,
) -> Result<Perm> {
    let perm = g.vertex_map(|a| conjugate_flag(f, u, antilinear, a))?;
    checked(g, perm)
}

/// The vertex permutation `A ↦ δ(A)` of `g`, checked to be an automorphism.
pub fn delta_automorphism<E: Clone + Eq + Hash + Debug>(g: &LabeledGraph<E>, delta: &SdPermutation) -> Result<Perm> {
    let perm = g.vertex_map(|a| a.permute_slots(delta))?;
    checked(g, perm)
}

fn checked<E: Clone + Eq + Hash + Debug>(g: &LabeledGraph<E>, perm: Perm) -> Result<Perm> {
    if is_automorphism(g.graph(), &perm) {
        Ok(perm)
    } else {
        Err(Error::NotAutomorphism)
    }
}

/// Every `δ` permuting the index positions with `n_{δ(i)} = nᵢ`.
pub fn sd_group<E: Clone + Eq + Debug>(signature: &ClassSignature<E>) -> Vec<SdPermutation> {
    all_permutations(signature.len())
        .into_iter()
        .filter_map(|d| SdPermutation::new(signature, d).ok())
        .collect()
}

fn require_two_slots<E: Clone + Eq + Debug>(signature: &ClassSignature<E>, transposed: bool) -> Result<()> {
    if signature.len() != 2 {
        return Err(Error::Precondition(format!("the map needs |I| = 2, got {}", signature.len())));
    }
    if transposed && signature.dim(0) != signature.dim(1) {
        return Err(Error::Precondition("the transposed map needs n₁ = n₂".into()));
    }
    Ok(())
}

/// For `|I| = 2`: `(X₁, X₂) ↦ (S(X₁), S(X₁)^⊥)`, or `(S(X₁)^⊥, S(X₁))`
/// when `transposed` (which needs `n₁ = n₂`).
pub fn chow_flag<F: StarField>(
    f: &F,
    s: &SemilinearMap<F::Elem>,
    transposed: bool,
    a: &EigenFlag<F::Elem>,
) -> Result<EigenFlag<F::Elem>> {
    require_two_slots(a.signature(), transposed)?;
    let image = a.space(0).map_semilinear(f, &s.matrix, s.auto)?;
    if !image.is_nondegenerate(f) {
        return Err(Error::DegenerateImage);
    }
    let perp = image.orthocomplement(f);
    let spaces = if transposed { vec![perp, image] } else { vec![image, perp] };
    EigenFlag::new(f, a.signature().clone(), spaces)
}

/// [`chow_flag`] on every vertex of `g`, checked to be an automorphism.
pub fn chow_map<F: StarField>(
    f: &F,
    g: &LabeledGraph<F::Elem>,
    s: &SemilinearMap<F::Elem>,
    transposed: bool,
) -> Result<Perm> {
    if let Some(sig) = g.signature() {
        require_two_slots(sig, transposed)?;
    }
    let perm = g.vertex_map(|a| chow_flag(f, s, transposed, a))?;
    checked(g, perm)
}

/// `S(X₂) ≠ S(X₁)^⊥`: the map does not commute with orthocomplementation
/// at this flag.
pub fn breaks_orthogonality<F: StarField>(f: &F, s: &SemilinearMap<F::Elem>, a: &EigenFlag<F::Elem>) -> Result<bool> {
    require_two_slots(a.signature(), false)?;
    let x1 = a.space(0).map_semilinear(f, &s.matrix, s.auto)?;
    let x2 = a.space(1).map_semilinear(f, &s.matrix, s.auto)?;
    Ok(x1.orthocomplement(f) != x2)
}
