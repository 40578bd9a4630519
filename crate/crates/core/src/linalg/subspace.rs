use serde_json::{json, Value};

use super::{herm_form, Matrix};
use crate::error::{Error, Result};
use crate::starfield::{FieldAutomorphism, StarField};

/// A subspace of `E^n`, stored as the unique reduced row echelon basis of
/// its row space. Two subspaces are equal iff their representations are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace<E> {
    ambient: usize,
    rows: Vec<Vec<E>>,
}

impl<E: Clone + Eq> Subspace<E> {
    /// Span of arbitrary vectors of length `ambient`.
    pub fn span<F: StarField<Elem = E>>(f: &F, ambient: usize, vectors: Vec<Vec<E>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::LengthMismatch(v.len(), ambient));
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let n = vectors.len();
        let (red, pivots) = Matrix::from_rows(vectors, ambient).rref(f);
        let rows = (0..pivots.len().min(n)).map(|r| red.row(r).to_vec()).collect();
        Ok(Subspace { ambient, rows })
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full<F: StarField<Elem = E>>(f: &F, ambient: usize) -> Self {
        Self::coordinate(f, ambient, &(0..ambient).collect::<Vec<_>>())
    }

    /// Span of the standard basis vectors `e_k`, `k ∈ coords` (0-based).
    pub fn coordinate<F: StarField<Elem = E>>(f: &F, ambient: usize, coords: &[usize]) -> Self {
        let vectors = coords
            .iter()
            .map(|&k| (0..ambient).map(|c| if c == k { f.one() } else { f.zero() }).collect())
            .collect();
        Self::span(f, ambient, vectors).expect("coordinate vectors have ambient length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> Matrix<E> {
        Matrix::from_rows(self.rows.clone(), self.ambient)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn contains_vector<F: StarField<Elem = E>>(&self, f: &F, v: &[E]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::LengthMismatch(v.len(), self.ambient));
        }
        let mut vectors = self.rows.clone();
        vectors.push(v.to_vec());
        Ok(Self::span(f, self.ambient, vectors)?.dim() == self.dim())
    }

    /// `other ⊆ self`.
    pub fn contains<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.sum(f, other)?.dim() == self.dim())
    }

    pub fn sum<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut vectors = self.rows.clone();
        vectors.extend(other.rows.iter().cloned());
        Self::span(f, self.ambient, vectors)
    }

    /// `{v : Σ v_k s_k = 0 ∀ s}`, the annihilator for the plain bilinear pairing.
    fn annihilator<F: StarField<Elem = E>>(&self, f: &F) -> Self {
        if self.rows.is_empty() {
            return Self::full(f, self.ambient);
        }
        self.basis_matrix().kernel(f)
    }

    pub fn intersect<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(self.annihilator(f).sum(f, &other.annihilator(f))?.annihilator(f))
    }

    /// `{v : h(v, s) = 0 ∀ s ∈ S}`.
    pub fn orthocomplement<F: StarField<Elem = E>>(&self, f: &F) -> Self {
        if self.rows.is_empty() {
            return Self::full(f, self.ambient);
        }
        self.basis_matrix().map(|x| f.conj(x)).kernel(f)
    }

    /// Gram matrix `G[a][b] = h(b_a, b_b)` of the stored basis.
    pub fn gram<F: StarField<Elem = E>>(&self, f: &F) -> Matrix<E> {
        let m = self.dim();
        let mut g = Matrix::zeros(f, m, m);
        for a in 0..m {
            for b in 0..m {
                g.set(a, b, herm_form(f, &self.rows[a], &self.rows[b]).expect("equal lengths"));
            }
        }
        g
    }

    /// `S ∩ S^⊥ = 0`.
    pub fn is_nondegenerate<F: StarField<Elem = E>>(&self, f: &F) -> bool {
        self.gram(f).rank(f) == self.dim()
    }

    /// Every vector of `self` is orthogonal to every vector of `other`.
    pub fn is_orthogonal_to<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        for u in &self.rows {
            for v in &other.rows {
                if !f.is_zero(&herm_form(f, u, v)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The complement `T` of `self` inside `w` with `T ⟂ self` and
    /// `self ⊕ T = w`. Requires `self ⊆ w` and `self` nondegenerate.
    pub fn relative_orthocomplement<F: StarField<Elem = E>>(&self, f: &F, w: &Self) -> Result<Self> {
        if !w.contains(f, self)? {
            return Err(Error::NotContained);
        }
        if !self.is_nondegenerate(f) {
            return Err(Error::DegenerateSubspace);
        }
        w.intersect(f, &self.orthocomplement(f))
    }

    /// Orthogonal projection onto `self`: `P = Bᵀ G⁻¹ conj(B)` with `B` the
    /// basis rows and `G = conj(B) Bᵀ`.
    pub fn projection_matrix<F: StarField<Elem = E>>(&self, f: &F) -> Result<Matrix<E>> {
        if self.rows.is_empty() {
            return Ok(Matrix::zeros(f, self.ambient, self.ambient));
        }
        let b = self.basis_matrix();
        let bt = b.transpose();
        let b_conj = b.map(|x| f.conj(x));
        let gram = b_conj.mul(f, &bt)?;
        let gram_inv = gram.inverse(f).ok_or(Error::DegenerateSubspace)?;
        bt.mul(f, &gram_inv)?.mul(f, &b_conj)
    }

    /// `dim(X ∩ Y) = dim X − 1` for equidimensional `X`, `Y`.
    pub fn is_adjacent<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        if self.dim() == 0 || self == other {
            return Ok(false);
        }
        Ok(self.intersect(f, other)?.dim() + 1 == self.dim())
    }

    /// Image under the semilinear map `v ↦ M·α(v)`.
    pub fn map_semilinear<F: StarField<Elem = E>>(&self, f: &F, m: &Matrix<E>, auto: FieldAutomorphism) -> Result<Self> {
        if m.n_cols() != self.ambient || !m.is_square() {
            return Err(Error::DimensionMismatch(m.n_cols(), self.ambient));
        }
        let images = self
            .rows
            .iter()
            .map(|v| {
                let twisted: Vec<E> = v.iter().map(|x| f.apply_automorphism(auto, x)).collect();
                m.apply(f, &twisted)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::span(f, self.ambient, images)
    }

    pub fn map_linear<F: StarField<Elem = E>>(&self, f: &F, m: &Matrix<E>) -> Result<Self> {
        self.map_semilinear(f, m, FieldAutomorphism::IDENTITY)
    }

    /// All `m`-dimensional subspaces of `self` whose coordinates (relative to
    /// the stored basis) form an RREF matrix with free entries drawn from
    /// `scalars`. With every field element as `scalars` this is the complete
    /// list, in a deterministic order.
    pub fn subspaces_of_dim<F: StarField<Elem = E>>(&self, f: &F, m: usize, scalars: &[E]) -> Vec<Self> {
        let k = self.dim();
        if m > k {
            return Vec::new();
        }
        let mut out = Vec::new();
        for pivots in combinations(k, m) {
            let free: Vec<(usize, usize)> = (0..m)
                .flat_map(|r| ((pivots[r] + 1)..k).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let mut choice = vec![0usize; free.len()];
            loop {
                let mut coords = vec![vec![f.zero(); k]; m];
                for (r, &p) in pivots.iter().enumerate() {
                    coords[r][p] = f.one();
                }
                for (&(r, c), &s) in free.iter().zip(&choice) {
                    coords[r][c] = scalars[s].clone();
                }
                let vectors: Vec<Vec<E>> = coords.iter().map(|c| self.combine(f, c)).collect();
                out.push(Self::span(f, self.ambient, vectors).expect("lengths match"));
                if !advance(&mut choice, scalars.len()) {
                    break;
                }
            }
        }
        out
    }

    /// `Σ c_k b_k` over the stored basis.
    pub fn combine<F: StarField<Elem = E>>(&self, f: &F, coeffs: &[E]) -> Vec<E> {
        let mut v = vec![f.zero(); self.ambient];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if f.is_zero(c) {
                continue;
            }
            for (acc, x) in v.iter_mut().zip(row) {
                *acc = f.add(acc, &f.mul(c, x));
            }
        }
        v
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| f.elem_to_json(x)).collect()))
            .collect();
        json!({ "ambient_dim": self.ambient, "rows": rows })
    }

    /// Accepts any spanning rows; the result is re-canonicalized.
    pub fn from_json<F: StarField<Elem = E>>(f: &F, v: &Value) -> Result<Self> {
        let ambient = v["ambient_dim"].as_u64().ok_or_else(|| Error::Json("subspace.ambient_dim".into()))? as usize;
        let rows = v["rows"].as_array().ok_or_else(|| Error::Json("subspace.rows".into()))?;
        let vectors = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Json("subspace row".into()))?
                    .iter()
                    .map(|x| f.elem_from_json(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::span(f, ambient, vectors)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Odometer increment; false once every digit wrapped.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starfield::{GaussianRational as G, GaussianRationals, GfElem, GfSquare};

    fn e(f: &GaussianRationals, k: &[usize]) -> Subspace<G> {
        Subspace::coordinate(f, 3, k)
    }

    #[test]
    fn lattice_examples() {
        let f = GaussianRationals;
        assert_eq!(e(&f, &[0, 1]).intersect(&f, &e(&f, &[1, 2])).unwrap(), e(&f, &[1]));
        assert_eq!(e(&f, &[0]).sum(&f, &e(&f, &[1])).unwrap(), e(&f, &[0, 1]));
        assert!(e(&f, &[0]).intersect(&f, &Subspace::coordinate(&f, 4, &[0])).is_err());
    }

    #[test]
    fn orthocomplement_examples() {
        let f = GaussianRationals;
        assert_eq!(e(&f, &[0]).orthocomplement(&f), e(&f, &[1, 2]));
        assert_eq!(e(&f, &[0]).relative_orthocomplement(&f, &e(&f, &[0, 1])).unwrap(), e(&f, &[1]));
        assert_eq!(
            e(&f, &[2]).relative_orthocomplement(&f, &e(&f, &[0, 1])),
            Err(Error::NotContained)
        );
    }

    #[test]
    fn isotropic_line_over_gf4() {
        let gf = GfSquare::new(2, 1).unwrap();
        let omega = GfElem(2);
        let line = Subspace::span(&gf, 3, vec![vec![gf.one(), omega, gf.zero()]]).unwrap();
        assert!(!line.is_nondegenerate(&gf));
        let plane = Subspace::coordinate(&gf, 3, &[0, 1]);
        assert_eq!(line.relative_orthocomplement(&gf, &plane), Err(Error::DegenerateSubspace));
        assert_eq!(line.projection_matrix(&gf), Err(Error::DegenerateSubspace));
        assert!(Subspace::coordinate(&gf, 3, &[0]).is_nondegenerate(&gf));
    }

    #[test]
    fn projection_examples() {
        let f = GaussianRationals;
        let p = e(&f, &[0, 1]).projection_matrix(&f).unwrap();
        assert_eq!(p, Matrix::diagonal(&f, &[f.one(), f.one(), f.zero()]));
        let line = Subspace::span(&f, 3, vec![vec![f.one(), f.one(), f.zero()]]).unwrap();
        let h = G::ratio(1, 2);
        let z = f.zero();
        let expected = Matrix::from_rows(
            vec![vec![h.clone(), h.clone(), z.clone()], vec![h.clone(), h, z.clone()], vec![z.clone(), z.clone(), z]],
            3,
        );
        assert_eq!(line.projection_matrix(&f).unwrap(), expected);
    }

    #[test]
    fn adjacency_examples() {
        let f = GaussianRationals;
        assert!(e(&f, &[0]).is_adjacent(&f, &e(&f, &[1])).unwrap());
        assert!(e(&f, &[0, 1]).is_adjacent(&f, &e(&f, &[0, 2])).unwrap());
        assert!(!e(&f, &[0, 1]).is_adjacent(&f, &e(&f, &[0, 1])).unwrap());
        assert_eq!(e(&f, &[0]).is_adjacent(&f, &e(&f, &[0, 1])), Err(Error::DimensionMismatch(1, 2)));
    }

    #[test]
    fn gf9_line_counts() {
        let gf = GfSquare::new(3, 1).unwrap();
        let lines = Subspace::full(&gf, 3).subspaces_of_dim(&gf, 1, &gf.sample_scalars());
        assert_eq!(lines.len(), 91);
        let nondeg = lines.iter().filter(|l| l.is_nondegenerate(&gf)).count();
        assert_eq!(nondeg, 63);
        let plane = Subspace::coordinate(&gf, 3, &[0, 1]);
        let in_plane = plane.subspaces_of_dim(&gf, 1, &gf.sample_scalars());
        assert_eq!(in_plane.len(), 10);
        assert_eq!(in_plane.iter().filter(|l| l.is_nondegenerate(&gf)).count(), 6);
    }

    #[test]
    fn json_roundtrip() {
        let gf = GfSquare::new(3, 1).unwrap();
        let s = Subspace::span(&gf, 3, vec![vec![gf.one(), gf.generator(), gf.zero()]]).unwrap();
        assert_eq!(Subspace::from_json(&gf, &s.to_json(&gf)).unwrap(), s);
    }
}
