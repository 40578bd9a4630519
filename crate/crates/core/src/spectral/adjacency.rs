use rayon::prelude::*;
use serde_json::{json, Value};

use super::{ClassSignature, EigenFlag, IndexPair};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::starfield::StarField;

/// `Σ aᵢ P_{Xᵢ}`.
pub fn assemble_matrix<F: StarField>(f: &F, a: &EigenFlag<F::Elem>) -> Matrix<F::Elem> {
    let n = a.ambient();
    let sig = a.signature();
    let mut m = Matrix::zeros(f, n, n);
    for (pos, x) in a.spaces().iter().enumerate() {
        let p = x.projection_matrix(f).expect("eigenspaces of a flag are nondegenerate");
        m = m.add(f, &p.scale(f, sig.value(pos))).expect("square matrices of equal size");
    }
    m
}

/// Recover the flag of a self-adjoint matrix from its eigenspaces
/// `ker(M − aᵢ·Id)`.
pub fn flag_from_matrix<F: StarField>(
    f: &F,
    m: &Matrix<F::Elem>,
    signature: &ClassSignature<F::Elem>,
) -> Result<EigenFlag<F::Elem>> {
    let n = signature.ambient();
    if !m.is_square() || m.n_rows() != n {
        return Err(Error::DimensionMismatch(m.n_rows(), n));
    }
    if !m.is_self_adjoint(f) {
        return Err(Error::NotInClass("matrix is not self-adjoint".into()));
    }
    let id = Matrix::identity(f, n);
    let mut spaces = Vec::with_capacity(signature.len());
    for pos in 0..signature.len() {
        let shifted = m.sub(f, &id.scale(f, signature.value(pos)))?;
        let x = shifted.kernel(f);
        if x.dim() != signature.dim(pos) {
            return Err(Error::NotInClass(format!(
                "eigenvalue {} has multiplicity {}, expected {}",
                f.format_elem(signature.value(pos)),
                x.dim(),
                signature.dim(pos)
            )));
        }
        if !x.is_nondegenerate(f) {
            return Err(Error::DegenerateSubspace);
        }
        spaces.push(x);
    }
    EigenFlag::new(f, signature.clone(), spaces)
}

fn difference<F: StarField>(f: &F, ma: &Matrix<F::Elem>, mb: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    mb.sub(f, ma).expect("matrices of one class have equal size")
}

/// (A1): `rank(B − A) = 2`.
pub fn a1_check<F: StarField>(f: &F, a: &EigenFlag<F::Elem>, b: &EigenFlag<F::Elem>) -> Result<bool> {
    a.check_same_class(b)?;
    let d = difference(f, &assemble_matrix(f, a), &assemble_matrix(f, b));
    Ok(d.rank(f) == 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationOperator {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationSpace {
    Image,
    Kernel,
}

/// A vector `w` of `Img(B−A)` or `Ker(B−A)` whose image under `A` or `B`
/// leaves that subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<E> {
    pub operator: ViolationOperator,
    pub space: ViolationSpace,
    pub vector: Vec<E>,
    pub image: Vec<E>,
}

impl<E: Clone> Violation<E> {
    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "operator": match self.operator { ViolationOperator::A => "A", ViolationOperator::B => "B" },
            "space": match self.space { ViolationSpace::Image => "image", ViolationSpace::Kernel => "kernel" },
            "vector": self.vector.iter().map(|x| f.elem_to_json(x)).collect::<Vec<_>>(),
            "image": self.image.iter().map(|x| f.elem_to_json(x)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json<F: StarField<Elem = E>>(f: &F, v: &Value) -> Result<Self> {
        let operator = match v["operator"].as_str() {
            Some("A") => ViolationOperator::A,
            Some("B") => ViolationOperator::B,
            _ => return Err(Error::Json("violation.operator".into())),
        };
        let space = match v["space"].as_str() {
            Some("image") => ViolationSpace::Image,
            Some("kernel") => ViolationSpace::Kernel,
            _ => return Err(Error::Json("violation.space".into())),
        };
        let vec_of = |key: &str| -> Result<Vec<E>> {
            v[key]
                .as_array()
                .ok_or_else(|| Error::Json(format!("violation.{key}")))?
                .iter()
                .map(|x| f.elem_from_json(x))
                .collect()
        };
        Ok(Violation { operator, space, vector: vec_of("vector")?, image: vec_of("image")? })
    }
}

pub(super) fn first_violation<F: StarField>(
    f: &F,
    ma: &Matrix<F::Elem>,
    mb: &Matrix<F::Elem>,
    d: &Matrix<F::Elem>,
) -> Option<Violation<F::Elem>> {
    let spaces = [(ViolationSpace::Image, d.image(f)), (ViolationSpace::Kernel, d.kernel(f))];
    for (space, s) in &spaces {
        for (operator, m) in [(ViolationOperator::A, ma), (ViolationOperator::B, mb)] {
            for w in s.basis() {
                let image = m.apply(f, w).expect("square matrix");
                if !s.contains_vector(f, &image).expect("lengths match") {
                    return Some(Violation { operator, space: *space, vector: w.clone(), image });
                }
            }
        }
    }
    None
}

/// (A2): `Img(B−A)` and `Ker(B−A)` are invariant under both `A` and `B`.
pub fn a2_check<F: StarField>(f: &F, a: &EigenFlag<F::Elem>, b: &EigenFlag<F::Elem>) -> Result<bool> {
    Ok(a2_violation(f, a, b)?.is_none())
}

/// The first invariance failure, if (A2) fails.
pub fn a2_violation<F: StarField>(
    f: &F,
    a: &EigenFlag<F::Elem>,
    b: &EigenFlag<F::Elem>,
) -> Result<Option<Violation<F::Elem>>> {
    a.check_same_class(b)?;
    let (ma, mb) = (assemble_matrix(f, a), assemble_matrix(f, b));
    let d = difference(f, &ma, &mb);
    Ok(first_violation(f, &ma, &mb, &d))
}

fn geometric_pair<E: Clone + Eq + std::fmt::Debug, F: StarField<Elem = E>>(
    f: &F,
    a: &EigenFlag<E>,
    b: &EigenFlag<E>,
) -> Option<IndexPair> {
    let mut changed = (0..a.signature().len()).filter(|&k| a.space(k) != b.space(k));
    let (i, j) = (changed.next()?, changed.next()?);
    if changed.next().is_some() {
        return None;
    }
    let adj = |k: usize| a.space(k).is_adjacent(f, b.space(k)).expect("same dimensions");
    (adj(i) && adj(j)).then(|| IndexPair::new(i, j).expect("distinct positions"))
}

/// The pair `{i, j}` for which `A` and `B` are `(i, j)`-adjacent: `Xᵢ ~ Yᵢ`,
/// `Xⱼ ~ Yⱼ` and `X_t = Y_t` for every other `t`.
///
/// Distinct flags differ in at least two slots, so when such a pair exists
/// it is the set of changed slots and therefore unique.
pub fn geometric_adjacency<F: StarField>(
    f: &F,
    a: &EigenFlag<F::Elem>,
    b: &EigenFlag<F::Elem>,
) -> Result<Option<IndexPair>> {
    a.check_same_class(b)?;
    Ok(geometric_pair(f, a, b))
}

/// (A1) ∧ (A2).
pub fn adjacent<F: StarField>(f: &F, a: &EigenFlag<F::Elem>, b: &EigenFlag<F::Elem>) -> Result<bool> {
    Ok(a1_check(f, a, b)? && a2_check(f, a, b)?)
}

/// All three predicates on one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairReport {
    pub a1: bool,
    pub a2: bool,
    pub geometric: Option<IndexPair>,
}

impl PairReport {
    pub fn adjacent(&self) -> bool {
        self.a1 && self.a2
    }

    /// `(A1 ∧ A2) ⟺ (i,j)-adjacency`.
    pub fn consistent(&self) -> bool {
        self.adjacent() == self.geometric.is_some()
    }

    pub fn verdict(&self) -> &'static str {
        match (self.a1, self.a2) {
            (false, _) => "¬A1",
            (true, true) => "A1∧A2",
            (true, false) => "A1∧¬A2",
        }
    }
}

/// Evaluate the pair given precomputed matrices.
pub fn analyze_pair<F: StarField>(
    f: &F,
    a: &EigenFlag<F::Elem>,
    ma: &Matrix<F::Elem>,
    b: &EigenFlag<F::Elem>,
    mb: &Matrix<F::Elem>,
) -> PairReport {
    let d = difference(f, ma, mb);
    PairReport {
        a1: d.rank(f) == 2,
        a2: first_violation(f, ma, mb, &d).is_none(),
        geometric: geometric_pair(f, a, b),
    }
}

/// Outcome of evaluating every unordered pair of a vertex list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairClassification {
    pub vertices: usize,
    pub pairs: u64,
    pub not_a1: u64,
    pub a1_a2: u64,
    pub a1_not_a2: u64,
    pub geometric: u64,
    /// Pairs where `(A1 ∧ A2)` and geometric adjacency disagree.
    pub discrepancies: Vec<(usize, usize)>,
    /// Pairs with (A1) but not (A2).
    pub a1_not_a2_pairs: Vec<(usize, usize)>,
    /// Pairs with (A1 ∧ A2), with the geometric type when there is one.
    pub edges: Vec<(usize, usize, Option<IndexPair>)>,
}

impl PairClassification {
    pub fn summary_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "pairs": self.pairs,
            "not_a1": self.not_a1,
            "a1_and_a2": self.a1_a2,
            "a1_and_not_a2": self.a1_not_a2,
            "geometric_adjacent": self.geometric,
            "discrepancies": self.discrepancies.len(),
        })
    }
}

/// Classify all unordered pairs; parallel over the first vertex, with a
/// result independent of the thread count.
pub fn classify_pairs<F: StarField>(f: &F, flags: &[EigenFlag<F::Elem>]) -> Result<PairClassification> {
    if let Some(first) = flags.first() {
        for a in flags {
            first.check_same_class(a)?;
        }
    }
    let matrices: Vec<Matrix<F::Elem>> = flags.par_iter().map(|a| assemble_matrix(f, a)).collect();
    let rows: Vec<Vec<(usize, PairReport)>> = (0..flags.len())
        .into_par_iter()
        .map(|i| {
            (i + 1..flags.len())
                .map(|j| (j, analyze_pair(f, &flags[i], &matrices[i], &flags[j], &matrices[j])))
                .collect()
        })
        .collect();
    let mut out = PairClassification { vertices: flags.len(), ..Default::default() };
    for (i, row) in rows.into_iter().enumerate() {
        for (j, r) in row {
            out.pairs += 1;
            match (r.a1, r.a2) {
                (false, _) => out.not_a1 += 1,
                (true, true) => out.a1_a2 += 1,
                (true, false) => {
                    out.a1_not_a2 += 1;
                    out.a1_not_a2_pairs.push((i, j));
                }
            }
            if r.geometric.is_some() {
                out.geometric += 1;
            }
            if !r.consistent() {
                out.discrepancies.push((i, j));
            }
            if r.adjacent() {
                out.edges.push((i, j, r.geometric));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::starfield::{GaussianRational as G, GaussianRationals};

    fn line(v: [i64; 3]) -> Subspace<G> {
        Subspace::span(&GaussianRationals, 3, vec![v.iter().map(|&x| G::integer(x, 0)).collect()]).unwrap()
    }

    fn sig123() -> ClassSignature<G> {
        let f = GaussianRationals;
        ClassSignature::new(&f, vec![G::integer(1, 0), G::integer(2, 0), G::integer(3, 0)], vec![1, 1, 1]).unwrap()
    }

    fn flag(lines: [[i64; 3]; 3]) -> EigenFlag<G> {
        EigenFlag::new(&GaussianRationals, sig123(), lines.iter().map(|&v| line(v)).collect()).unwrap()
    }

    fn rows(m: &[[(i64, i64); 3]; 3]) -> Matrix<G> {
        Matrix::from_rows(m.iter().map(|r| r.iter().map(|&(n, d)| G::ratio(n, d)).collect()).collect(), 3)
    }

    #[test]
    fn assemble_examples() {
        let f = GaussianRationals;
        let a = flag([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let d = |k: i64| G::integer(k, 0);
        assert_eq!(assemble_matrix(&f, &a), Matrix::diagonal(&f, &[d(1), d(2), d(3)]));
        let b = flag([[1, 1, 0], [1, -1, 0], [0, 0, 1]]);
        let expected = rows(&[[(3, 2), (-1, 2), (0, 1)], [(-1, 2), (3, 2), (0, 1)], [(0, 1), (0, 1), (3, 1)]]);
        assert_eq!(assemble_matrix(&f, &b), expected);
        assert!(expected.is_self_adjoint(&f));
    }

    #[test]
    fn flag_from_matrix_examples() {
        let f = GaussianRationals;
        let d = |k: i64| G::integer(k, 0);
        let m = Matrix::diagonal(&f, &[d(1), d(2), d(3)]);
        assert_eq!(flag_from_matrix(&f, &m, &sig123()).unwrap(), flag([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));

        let sig13 = ClassSignature::new(&f, vec![d(1), d(3)], vec![2, 1]).unwrap();
        let a = flag_from_matrix(&f, &Matrix::diagonal(&f, &[d(1), d(1), d(3)]), &sig13).unwrap();
        assert_eq!(a.space(0), &Subspace::coordinate(&f, 3, &[0, 1]));
        assert_eq!(a.space(1), &Subspace::coordinate(&f, 3, &[2]));

        let sig124 = ClassSignature::new(&f, vec![d(1), d(2), d(4)], vec![1, 1, 1]).unwrap();
        assert!(matches!(flag_from_matrix(&f, &m, &sig124), Err(Error::NotInClass(_))));

        let b = flag([[1, 1, 0], [1, -1, 0], [0, 0, 1]]);
        assert_eq!(flag_from_matrix(&f, &assemble_matrix(&f, &b), &sig123()).unwrap(), b);
    }

    #[test]
    fn rotated_pair() {
        let f = GaussianRationals;
        let a = flag([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let b = flag([[1, 1, 0], [1, -1, 0], [0, 0, 1]]);
        let d = difference(&f, &assemble_matrix(&f, &a), &assemble_matrix(&f, &b));
        let expected = rows(&[[(1, 2), (-1, 2), (0, 1)], [(-1, 2), (-1, 2), (0, 1)], [(0, 1), (0, 1), (0, 1)]]);
        assert_eq!(d, expected);
        assert!(a1_check(&f, &a, &b).unwrap());
        assert!(a2_check(&f, &a, &b).unwrap());
        assert_eq!(d.image(&f), Subspace::coordinate(&f, 3, &[0, 1]));
        assert_eq!(d.kernel(&f), Subspace::coordinate(&f, 3, &[2]));
        assert_eq!(geometric_adjacency(&f, &a, &b).unwrap(), IndexPair::new(0, 1));
        assert!(adjacent(&f, &a, &b).unwrap());
    }

    #[test]
    fn identical_pair() {
        let f = GaussianRationals;
        let a = flag([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(!a1_check(&f, &a, &a).unwrap());
        assert!(a2_check(&f, &a, &a).unwrap());
        assert_eq!(geometric_adjacency(&f, &a, &a).unwrap(), None);
        assert!(!adjacent(&f, &a, &a).unwrap());
    }

    #[test]
    fn cycled_pair_has_rank_three() {
        let f = GaussianRationals;
        let a = flag([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let b = flag([[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        let d = difference(&f, &assemble_matrix(&f, &a), &assemble_matrix(&f, &b));
        let k = |x: i64| G::integer(x, 0);
        assert_eq!(d, Matrix::diagonal(&f, &[k(2), k(-1), k(-1)]));
        assert!(!a1_check(&f, &a, &b).unwrap());
        assert_eq!(geometric_adjacency(&f, &a, &b).unwrap(), None);
        assert!(!adjacent(&f, &a, &b).unwrap());
    }

    #[test]
    fn swapped_lines_are_adjacent() {
        let f = GaussianRationals;
        let a = flag([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let b = flag([[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(geometric_adjacency(&f, &a, &b).unwrap(), IndexPair::new(0, 1));
        assert!(adjacent(&f, &a, &b).unwrap());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let f = GaussianRationals;
        let a = flag([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let other = ClassSignature::new(&f, vec![G::integer(1, 0), G::integer(2, 0), G::integer(5, 0)], vec![1, 1, 1])
            .unwrap();
        let b = a.with_signature(other).unwrap();
        assert_eq!(a1_check(&f, &a, &b), Err(Error::SignatureMismatch));
        assert_eq!(geometric_adjacency(&f, &a, &b), Err(Error::SignatureMismatch));
    }
}
