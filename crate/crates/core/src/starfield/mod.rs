//! Exact fields equipped with an involution ("star-fields").
//!
//! Two backends are provided:
//!
//! - [`GaussianRationals`]: ℚ(i) with complex conjugation, the exact stand-in
//!   for ℂ.
//! - [`GfSquare`]: GF(q²) with the Frobenius involution `x ↦ x^q`, whose
//!   fixed subfield is GF(q). Everything over this backend is enumerable.
//!
//! Field elements do not carry their field; every operation goes through the
//! field value, in the style of a ring context.

mod gaussian;
mod gf;

pub use gaussian::{GaussianRational, GaussianRationals};
pub use gf::{GfElem, GfSquare};

use std::fmt::Debug;
use std::hash::Hash;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// A field automorphism commuting with the involution.
///
/// For GF(q²) with characteristic `p` this is `x ↦ x^(p^power)`; for ℚ(i)
/// `power` 0 is the identity and 1 is complex conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldAutomorphism {
    pub power: u32,
}

impl FieldAutomorphism {
    pub const IDENTITY: FieldAutomorphism = FieldAutomorphism { power: 0 };

    pub fn is_identity(&self) -> bool {
        self.power == 0
    }
}

/// Serializable description of a backend, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BackendDescriptor {
    Qi,
    Gf {
        p: u32,
        exponent: u32,
        /// Coefficients of the monic modulus defining GF(q²) over GF(p),
        /// lowest degree first.
        modulus: Vec<u32>,
    },
}

/// A field with an involutive automorphism `conj`.
pub trait StarField: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn conj(&self, a: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_fixed(&self, a: &Self::Elem) -> bool {
        self.conj(a) == *a
    }

    /// The automorphisms commuting with `conj` that this backend exposes.
    fn field_automorphisms(&self) -> Vec<FieldAutomorphism>;
    fn apply_automorphism(&self, auto: FieldAutomorphism, a: &Self::Elem) -> Self::Elem;

    /// Every field element, for finite backends.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    /// Every element of the fixed subfield in canonical order, for finite backends.
    fn fixed_elements(&self) -> Option<Vec<Self::Elem>> {
        self.elements()
            .map(|all| all.into_iter().filter(|x| self.is_fixed(x)).collect())
    }

    /// Deterministic list of scalars used to parametrize candidate subspaces.
    /// Finite backends return every element, so enumerations become exhaustive.
    fn sample_scalars(&self) -> Vec<Self::Elem>;

    fn is_finite(&self) -> bool {
        self.elements().is_some()
    }

    /// Uniform element for finite fields; a Gaussian integer of height at
    /// most `height` for ℚ(i).
    fn random_elem(&self, rng: &mut dyn RngCore, height: u32) -> Self::Elem;

    fn descriptor(&self) -> BackendDescriptor;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Parse an element of the fixed subfield from a command-line token.
    fn parse_fixed(&self, s: &str) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// The norm `x·conj(x)`, which lies in the fixed subfield.
    fn norm(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.conj(a))
    }
}

/// An element of the fixed subfield `{x : conj(x) = x}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedScalar<E>(E);

impl<E: Clone> FixedScalar<E> {
    pub fn new<F: StarField<Elem = E>>(field: &F, value: E) -> Option<Self> {
        field.is_fixed(&value).then_some(FixedScalar(value))
    }

    pub fn value(&self) -> &E {
        &self.0
    }

    pub fn into_inner(self) -> E {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_scalar_rejects_non_fixed() {
        let qi = GaussianRationals;
        assert!(FixedScalar::new(&qi, GaussianRational::integer(2, 0)).is_some());
        assert!(FixedScalar::new(&qi, GaussianRational::integer(0, 1)).is_none());
    }

    #[test]
    fn fixed_subfield_is_closed() {
        let gf = GfSquare::new(3, 1).unwrap();
        let fixed = gf.fixed_elements().unwrap();
        for a in &fixed {
            for b in &fixed {
                assert!(gf.is_fixed(&gf.add(a, b)));
                assert!(gf.is_fixed(&gf.mul(a, b)));
            }
        }
    }
}
