//! Conjugacy classes of finite-spectrum self-adjoint operators, encoded as
//! eigen-flags, together with the two adjacency notions on them.

mod adjacency;
mod certificate;
mod contract;

pub use adjacency::{
    a1_check, a2_check, a2_violation, adjacent, analyze_pair, assemble_matrix, classify_pairs, flag_from_matrix,
    geometric_adjacency, PairClassification, PairReport, Violation, ViolationOperator, ViolationSpace,
};
pub use certificate::{counterexample_search, Certificate, SearchBudget, SearchOutcome};
pub use contract::{contract, fiber};

use std::fmt;

use rand::RngCore;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::starfield::{FieldAutomorphism, FixedScalar, StarField};

/// The data `(σ, d)` of a conjugacy class: distinct fixed eigenvalues `aᵢ`
/// and positive eigenspace dimensions `nᵢ`, indexed by labels.
///
/// Operations address indices by position (0-based); labels only show up
/// in output and survive contraction, so positions can be matched across
/// contracted classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSignature<E> {
    labels: Vec<u32>,
    sigma: Vec<FixedScalar<E>>,
    dims: Vec<usize>,
}

impl<E: Clone + Eq + fmt::Debug> ClassSignature<E> {
    /// Signature with labels `1..=|I|`.
    pub fn new<F: StarField<Elem = E>>(f: &F, sigma: Vec<E>, dims: Vec<usize>) -> Result<Self> {
        let labels = (1..=sigma.len() as u32).collect();
        Self::with_labels(f, labels, sigma, dims)
    }

    pub fn with_labels<F: StarField<Elem = E>>(f: &F, labels: Vec<u32>, sigma: Vec<E>, dims: Vec<usize>) -> Result<Self> {
        if labels.len() != sigma.len() || sigma.len() != dims.len() {
            return Err(Error::InvalidSignature(format!(
                "{} labels, {} eigenvalues, {} dimensions",
                labels.len(),
                sigma.len(),
                dims.len()
            )));
        }
        if sigma.len() < 2 {
            return Err(Error::InvalidSignature("at least two eigenvalues are required".into()));
        }
        if let Some(k) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidSignature(format!("dimension at position {k} is zero")));
        }
        for a in 0..labels.len() {
            if labels[a + 1..].contains(&labels[a]) {
                return Err(Error::InvalidSignature(format!("label {} repeats", labels[a])));
            }
        }
        if let Some(fixed) = f.fixed_elements() {
            if sigma.len() > fixed.len() {
                return Err(Error::SignatureDoesNotFit(format!(
                    "{} eigenvalues but the fixed subfield has {} elements",
                    sigma.len(),
                    fixed.len()
                )));
            }
        }
        let mut scalars = Vec::with_capacity(sigma.len());
        for a in sigma {
            let s = FixedScalar::new(f, a.clone())
                .ok_or_else(|| Error::SignatureDoesNotFit(format!("{} is not in the fixed subfield", f.format_elem(&a))))?;
            if scalars.contains(&s) {
                return Err(Error::InvalidSignature(format!("eigenvalue {} repeats", f.format_elem(&a))));
            }
            scalars.push(s);
        }
        Ok(ClassSignature { labels, sigma: scalars, dims })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, pos: usize) -> u32 {
        self.labels[pos]
    }

    pub fn position(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn value(&self, pos: usize) -> &E {
        self.sigma[pos].value()
    }

    pub fn values(&self) -> Vec<E> {
        self.sigma.iter().map(|s| s.value().clone()).collect()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, pos: usize) -> usize {
        self.dims[pos]
    }

    /// `Σ nᵢ`, the dimension of the space the class lives on.
    pub fn ambient(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Same labels and dimensions, new eigenvalues.
    pub fn relabeled<F: StarField<Elem = E>>(&self, f: &F, sigma: Vec<E>) -> Result<Self> {
        Self::with_labels(f, self.labels.clone(), sigma, self.dims.clone())
    }

    /// The class `(σ,d)₋ᵢ,₊ⱼ`: `aᵢ` removed and `nⱼ` replaced by `nᵢ + nⱼ`.
    pub fn contracted(&self, i: usize, j: usize) -> Result<Self> {
        self.check_pair(i, j)?;
        if self.len() < 3 {
            return Err(Error::Precondition("contraction needs at least three eigenvalues".into()));
        }
        let mut out = self.clone();
        out.dims[j] += out.dims[i];
        out.labels.remove(i);
        out.sigma.remove(i);
        out.dims.remove(i);
        Ok(out)
    }

    pub(crate) fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.len() || j >= self.len() {
            return Err(Error::Precondition(format!("index out of range for {} eigenvalues", self.len())));
        }
        if i == j {
            return Err(Error::Precondition("indices must be distinct".into()));
        }
        Ok(())
    }

    pub fn format<F: StarField<Elem = E>>(&self, f: &F) -> String {
        let sigma: Vec<String> = self.sigma.iter().map(|s| f.format_elem(s.value())).collect();
        let dims: Vec<String> = self.dims.iter().map(|n| n.to_string()).collect();
        format!("σ=({}) d=({})", sigma.join(","), dims.join(","))
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "labels": self.labels,
            "sigma": self.sigma.iter().map(|s| f.elem_to_json(s.value())).collect::<Vec<_>>(),
            "dims": self.dims,
        })
    }

    pub fn from_json<F: StarField<Elem = E>>(f: &F, v: &Value) -> Result<Self> {
        let sigma = v["sigma"]
            .as_array()
            .ok_or_else(|| Error::Json("signature.sigma".into()))?
            .iter()
            .map(|x| f.elem_from_json(x))
            .collect::<Result<Vec<_>>>()?;
        let dims = v["dims"]
            .as_array()
            .ok_or_else(|| Error::Json("signature.dims".into()))?
            .iter()
            .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| Error::Json("signature.dims entry".into())))
            .collect::<Result<Vec<_>>>()?;
        match v.get("labels") {
            Some(labels) => {
                let labels = labels
                    .as_array()
                    .ok_or_else(|| Error::Json("signature.labels".into()))?
                    .iter()
                    .map(|x| x.as_u64().map(|n| n as u32).ok_or_else(|| Error::Json("signature.labels entry".into())))
                    .collect::<Result<Vec<_>>>()?;
                Self::with_labels(f, labels, sigma, dims)
            }
            None => Self::new(f, sigma, dims),
        }
    }
}

/// An unordered pair of index positions `{i, j}`, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexPair(usize, usize);

impl IndexPair {
    pub fn new(i: usize, j: usize) -> Option<Self> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some(IndexPair(i, j)),
            std::cmp::Ordering::Greater => Some(IndexPair(j, i)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(&self) -> usize {
        self.0
    }

    pub fn second(&self) -> usize {
        self.1
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0 == k || self.1 == k
    }

    pub fn is_disjoint(&self, other: &IndexPair) -> bool {
        !self.contains(other.0) && !self.contains(other.1)
    }

    /// Image under a permutation of positions.
    pub fn map(&self, perm: &[usize]) -> IndexPair {
        IndexPair::new(perm[self.0], perm[self.1]).expect("permutations are injective")
    }

    /// Display with 1-based positions, e.g. `{1,2}`.
    pub fn display(&self) -> String {
        format!("{{{},{}}}", self.0 + 1, self.1 + 1)
    }

    pub fn to_json(&self) -> Value {
        json!([self.0 + 1, self.1 + 1])
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// An operator `Σ aᵢ P_{Xᵢ}` of a class, stored through its eigenspaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenFlag<E> {
    signature: ClassSignature<E>,
    spaces: Vec<Subspace<E>>,
}

impl<E: Clone + Eq + fmt::Debug> EigenFlag<E> {
    /// Checks that the spaces have the prescribed dimensions, are
    /// nondegenerate, pairwise orthogonal and fill the ambient space.
    pub fn new<F: StarField<Elem = E>>(f: &F, signature: ClassSignature<E>, spaces: Vec<Subspace<E>>) -> Result<Self> {
        if spaces.len() != signature.len() {
            return Err(Error::InvalidFlag(format!("{} spaces for {} eigenvalues", spaces.len(), signature.len())));
        }
        let n = signature.ambient();
        for (k, x) in spaces.iter().enumerate() {
            if x.ambient_dim() != n {
                return Err(Error::AmbientMismatch(x.ambient_dim(), n));
            }
            if x.dim() != signature.dim(k) {
                return Err(Error::InvalidFlag(format!(
                    "space {} has dimension {}, expected {}",
                    signature.label(k),
                    x.dim(),
                    signature.dim(k)
                )));
            }
            if !x.is_nondegenerate(f) {
                return Err(Error::InvalidFlag(format!("space {} is degenerate", signature.label(k))));
            }
        }
        for a in 0..spaces.len() {
            for b in a + 1..spaces.len() {
                if !spaces[a].is_orthogonal_to(f, &spaces[b])? {
                    return Err(Error::InvalidFlag(format!(
                        "spaces {} and {} are not orthogonal",
                        signature.label(a),
                        signature.label(b)
                    )));
                }
            }
        }
        Ok(EigenFlag { signature, spaces })
    }

    /// For callers that built the spaces by a construction that already
    /// guarantees the invariants.
    pub(crate) fn from_parts(signature: ClassSignature<E>, spaces: Vec<Subspace<E>>) -> Self {
        debug_assert_eq!(signature.len(), spaces.len());
        EigenFlag { signature, spaces }
    }

    /// The flag `(⟨e_1⟩, …)` of consecutive coordinate blocks.
    pub fn coordinate<F: StarField<Elem = E>>(f: &F, signature: ClassSignature<E>) -> Self {
        let n = signature.ambient();
        let mut start = 0;
        let spaces = signature
            .dims()
            .iter()
            .map(|&d| {
                let s = Subspace::coordinate(f, n, &(start..start + d).collect::<Vec<_>>());
                start += d;
                s
            })
            .collect();
        EigenFlag { signature, spaces }
    }

    pub fn signature(&self) -> &ClassSignature<E> {
        &self.signature
    }

    pub fn spaces(&self) -> &[Subspace<E>] {
        &self.spaces
    }

    pub fn space(&self, pos: usize) -> &Subspace<E> {
        &self.spaces[pos]
    }

    pub fn ambient(&self) -> usize {
        self.signature.ambient()
    }

    pub(crate) fn check_same_class(&self, other: &Self) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        Ok(())
    }

    /// Same eigenspaces, different eigenvalues (or labels).
    pub fn with_signature(&self, signature: ClassSignature<E>) -> Result<Self> {
        if signature.dims() != self.signature.dims() {
            return Err(Error::SignatureMismatch);
        }
        Ok(EigenFlag { signature, spaces: self.spaces.clone() })
    }

    /// `δ(A) = Σ aᵢ P_{X_δ(i)}`.
    pub fn permute_slots(&self, delta: &SdPermutation) -> Result<Self> {
        delta.check_signature(&self.signature)?;
        let spaces = delta.delta.iter().map(|&k| self.spaces[k].clone()).collect();
        Ok(EigenFlag { signature: self.signature.clone(), spaces })
    }

    /// Apply `v ↦ M·α(v)` to every eigenspace. Fails with
    /// [`Error::DegenerateImage`] or [`Error::InvalidFlag`] if the images
    /// do not form a flag (possible when `M` is not a similitude).
    pub fn map_semilinear<F: StarField<Elem = E>>(&self, f: &F, m: &Matrix<E>, auto: FieldAutomorphism) -> Result<Self> {
        let spaces = self
            .spaces
            .iter()
            .map(|x| x.map_semilinear(f, m, auto))
            .collect::<Result<Vec<_>>>()?;
        if spaces.iter().any(|s| !s.is_nondegenerate(f)) {
            return Err(Error::DegenerateImage);
        }
        Self::new(f, self.signature.clone(), spaces)
    }

    /// Canonical text key: equal flags give equal keys.
    pub fn canonical_key<F: StarField<Elem = E>>(&self, f: &F) -> String {
        self.to_json(f).to_string()
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "signature": self.signature.to_json(f),
            "spaces": self.spaces.iter().map(|s| s.to_json(f)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json<F: StarField<Elem = E>>(f: &F, v: &Value) -> Result<Self> {
        let signature = ClassSignature::from_json(f, &v["signature"])?;
        let spaces = v["spaces"]
            .as_array()
            .ok_or_else(|| Error::Json("flag.spaces".into()))?
            .iter()
            .map(|s| Subspace::from_json(f, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(f, signature, spaces)
    }

    pub fn format<F: StarField<Elem = E>>(&self, f: &F) -> String {
        let parts: Vec<String> = self
            .spaces
            .iter()
            .map(|s| {
                let rows: Vec<String> = s
                    .basis()
                    .iter()
                    .map(|r| format!("({})", r.iter().map(|x| f.format_elem(x)).collect::<Vec<_>>().join(",")))
                    .collect();
                format!("⟨{}⟩", rows.join(","))
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// A permutation `δ` of index positions with `n_{δ(i)} = nᵢ`, stored as
/// `delta[i] = δ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SdPermutation {
    delta: Vec<usize>,
}

impl SdPermutation {
    pub fn new<E: Clone + Eq + fmt::Debug>(signature: &ClassSignature<E>, delta: Vec<usize>) -> Result<Self> {
        let p = SdPermutation { delta };
        p.check_signature(signature)?;
        Ok(p)
    }

    pub fn identity(n: usize) -> Self {
        SdPermutation { delta: (0..n).collect() }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.delta
    }

    pub fn apply(&self, i: usize) -> usize {
        self.delta[i]
    }

    pub fn is_identity(&self) -> bool {
        self.delta.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn compose(&self, then: &SdPermutation) -> SdPermutation {
        SdPermutation { delta: self.delta.iter().map(|&k| then.delta[k]).collect() }
    }

    fn check_signature<E: Clone + Eq + fmt::Debug>(&self, signature: &ClassSignature<E>) -> Result<()> {
        let n = signature.len();
        let mut seen = vec![false; n];
        if self.delta.len() != n || self.delta.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::Precondition(format!("{:?} is not a permutation of {n} indices", self.delta)));
        }
        if let Some(i) = (0..n).find(|&i| signature.dim(self.delta[i]) != signature.dim(i)) {
            return Err(Error::Precondition(format!(
                "δ moves index {} (dimension {}) to {} (dimension {})",
                i + 1,
                signature.dim(i),
                self.delta[i] + 1,
                signature.dim(self.delta[i])
            )));
        }
        Ok(())
    }

    /// Display with 1-based positions, e.g. `[2,3,1]`.
    pub fn display(&self) -> String {
        format!("[{}]", self.delta.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Random flag built from random combinations of `height`-bounded
/// coefficients, retrying until each chosen block is nondegenerate.
pub fn random_flag<F: StarField>(
    f: &F,
    signature: &ClassSignature<F::Elem>,
    rng: &mut dyn RngCore,
    height: u32,
) -> Result<EigenFlag<F::Elem>> {
    const ATTEMPTS: usize = 1000;
    let n = signature.ambient();
    let mut rest = Subspace::full(f, n);
    let mut spaces = Vec::with_capacity(signature.len());
    for pos in 0..signature.len() - 1 {
        let d = signature.dim(pos);
        let mut chosen = None;
        for _ in 0..ATTEMPTS {
            let vectors: Vec<Vec<F::Elem>> = (0..d)
                .map(|_| {
                    let coeffs: Vec<F::Elem> = (0..rest.dim()).map(|_| f.random_elem(rng, height)).collect();
                    rest.combine(f, &coeffs)
                })
                .collect();
            let x = Subspace::span(f, n, vectors)?;
            if x.dim() == d && x.is_nondegenerate(f) {
                chosen = Some(x);
                break;
            }
        }
        let x = chosen.ok_or_else(|| Error::ChoiceExhausted(format!("random space {}", signature.label(pos))))?;
        rest = x.relative_orthocomplement(f, &rest)?;
        spaces.push(x);
    }
    spaces.push(rest);
    Ok(EigenFlag::from_parts(signature.clone(), spaces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starfield::{GaussianRational as G, GaussianRationals, GfSquare};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qi_sig(sigma: &[i64], dims: &[usize]) -> ClassSignature<G> {
        let f = GaussianRationals;
        ClassSignature::new(&f, sigma.iter().map(|&a| G::integer(a, 0)).collect(), dims.to_vec()).unwrap()
    }

    #[test]
    fn signature_validation() {
        let f = GaussianRationals;
        assert!(ClassSignature::new(&f, vec![G::integer(1, 0)], vec![3]).is_err());
        assert!(ClassSignature::new(&f, vec![G::integer(1, 0), G::integer(1, 0)], vec![1, 2]).is_err());
        assert!(ClassSignature::new(&f, vec![G::integer(1, 0), G::integer(0, 1)], vec![1, 2]).is_err());
        assert!(ClassSignature::new(&f, vec![G::integer(1, 0), G::integer(2, 0)], vec![1, 0]).is_err());
        assert_eq!(qi_sig(&[1, 2, 3], &[1, 1, 1]).ambient(), 3);

        let gf = GfSquare::new(3, 1).unwrap();
        let fixed = gf.fixed_elements().unwrap();
        assert_eq!(fixed.len(), 3);
        let four = vec![fixed[0], fixed[1], fixed[2], gf.generator()];
        assert!(matches!(ClassSignature::new(&gf, four, vec![1, 1, 1, 1]), Err(Error::SignatureDoesNotFit(_))));
    }

    #[test]
    fn contracted_signature_keeps_labels() {
        let s = qi_sig(&[1, 2, 3], &[1, 1, 1]);
        let c = s.contracted(0, 1).unwrap();
        assert_eq!(c.labels(), &[2, 3]);
        assert_eq!(c.dims(), &[2, 1]);
        assert_eq!(c.values(), vec![G::integer(2, 0), G::integer(3, 0)]);
        assert!(s.contracted(1, 1).is_err());
        assert!(qi_sig(&[1, 2], &[1, 2]).contracted(0, 1).is_err());
    }

    #[test]
    fn flag_validation() {
        let f = GaussianRationals;
        let sig = qi_sig(&[1, 2, 3], &[1, 1, 1]);
        let line = |v: [i64; 3]| Subspace::span(&f, 3, vec![v.iter().map(|&x| G::integer(x, 0)).collect()]).unwrap();
        assert!(EigenFlag::new(&f, sig.clone(), vec![line([1, 1, 0]), line([1, -1, 0]), line([0, 0, 1])]).is_ok());
        assert!(EigenFlag::new(&f, sig.clone(), vec![line([1, 1, 0]), line([1, 0, 0]), line([0, 0, 1])]).is_err());
        assert!(EigenFlag::new(&f, sig, vec![line([1, 0, 0]), line([0, 1, 0])]).is_err());
    }

    #[test]
    fn sd_permutations() {
        let sig = qi_sig(&[1, 2], &[1, 2]);
        assert!(SdPermutation::new(&sig, vec![1, 0]).is_err());
        assert!(SdPermutation::new(&sig, vec![0, 0]).is_err());
        let sig3 = qi_sig(&[1, 2, 3], &[1, 1, 1]);
        let rot = SdPermutation::new(&sig3, vec![1, 2, 0]).unwrap();
        let a = EigenFlag::coordinate(&GaussianRationals, sig3);
        let b = a.permute_slots(&rot).unwrap();
        assert_eq!(b.space(0), a.space(1));
        assert_eq!(b.space(2), a.space(0));
        assert!(rot.compose(&rot).compose(&rot).is_identity());
    }

    #[test]
    fn random_flags_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = GaussianRationals;
        let sig = qi_sig(&[0, 1, 2], &[1, 2, 1]);
        let gf = GfSquare::new(3, 1).unwrap();
        let fixed = gf.fixed_elements().unwrap();
        let gsig = ClassSignature::new(&gf, fixed.clone(), vec![1, 1, 1]).unwrap();
        for _ in 0..20 {
            let a = random_flag(&f, &sig, &mut rng, 3).unwrap();
            assert!(EigenFlag::new(&f, sig.clone(), a.spaces().to_vec()).is_ok());
            let b = random_flag(&gf, &gsig, &mut rng, 0).unwrap();
            assert!(EigenFlag::new(&gf, gsig.clone(), b.spaces().to_vec()).is_ok());
        }
    }

    #[test]
    fn flag_json_roundtrip() {
        let f = GaussianRationals;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_flag(&f, &qi_sig(&[1, 2, 3], &[1, 1, 1]), &mut rng, 4).unwrap();
        assert_eq!(EigenFlag::from_json(&f, &a.to_json(&f)).unwrap(), a);
    }
}
