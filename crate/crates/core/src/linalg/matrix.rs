use serde_json::{json, Value};

use super::Subspace;
use crate::error::{Error, Result};
use crate::starfield::{FieldAutomorphism, StarField};

/// Dense row-major matrix over a star-field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + Eq> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch(data.len(), rows * cols));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<E> = rows
            .into_iter()
            .inspect(|row| assert_eq!(row.len(), cols, "ragged matrix"))
            .flatten()
            .collect();
        Matrix { rows: r, cols, data }
    }

    pub fn zeros<F: StarField<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: StarField<Elem = E>>(f: &F, n: usize) -> Self {
        Self::diagonal(f, &vec![f.one(); n])
    }

    pub fn diagonal<F: StarField<Elem = E>>(f: &F, diag: &[E]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(f, n, n);
        for (k, d) in diag.iter().enumerate() {
            m.set(k, k, d.clone());
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map(&self, g: impl Fn(&E) -> E) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn conj_transpose<F: StarField<Elem = E>>(&self, f: &F) -> Self {
        self.transpose().map(|x| f.conj(x))
    }

    pub fn apply_automorphism<F: StarField<Elem = E>>(&self, f: &F, auto: FieldAutomorphism) -> Self {
        self.map(|x| f.apply_automorphism(auto, x))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        Ok(())
    }

    pub fn add<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale<F: StarField<Elem = E>>(&self, f: &F, s: &E) -> Self {
        self.map(|x| f.mul(s, x))
    }

    pub fn mul<F: StarField<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let cur = f.add(out.get(r, c), &f.mul(a, other.get(k, c)));
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    /// `M·v` for a column vector `v`.
    pub fn apply<F: StarField<Elem = E>>(&self, f: &F, v: &[E]) -> Result<Vec<E>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch(v.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref<F: StarField<Elem = E>>(&self, f: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(sel) = (pr..m.rows).find(|&r| !f.is_zero(m.get(r, c))) else {
                continue;
            };
            m.swap_rows(pr, sel);
            let inv = f.inv(m.get(pr, c)).expect("pivot is nonzero");
            for k in c..m.cols {
                let v = f.mul(&inv, m.get(pr, k));
                m.set(pr, k, v);
            }
            for r in 0..m.rows {
                if r == pr || f.is_zero(m.get(r, c)) {
                    continue;
                }
                let factor = m.get(r, c).clone();
                for k in c..m.cols {
                    let v = f.sub(m.get(r, k), &f.mul(&factor, m.get(pr, k)));
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank<F: StarField<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).1.len()
    }

    /// `{v : M·v = 0}`.
    pub fn kernel<F: StarField<Elem = E>>(&self, f: &F) -> Subspace<E> {
        let (r, pivots) = self.rref(f);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, basis).expect("kernel vectors have matching length")
    }

    /// Column space of `M`.
    pub fn image<F: StarField<Elem = E>>(&self, f: &F) -> Subspace<E> {
        Subspace::span(f, self.rows, self.transpose().row_vecs()).expect("columns have matching length")
    }

    pub fn inverse<F: StarField<Elem = E>>(&self, f: &F) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, f.one());
        }
        let (red, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// `M* = M` with respect to the standard hermitian form.
    pub fn is_self_adjoint<F: StarField<Elem = E>>(&self, f: &F) -> bool {
        self.is_square() && self.conj_transpose(f) == *self
    }

    /// `M*·M = I`.
    pub fn is_isometry<F: StarField<Elem = E>>(&self, f: &F) -> bool {
        self.is_square()
            && self
                .conj_transpose(f)
                .mul(f, self)
                .is_ok_and(|p| p == Self::identity(f, self.rows))
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        let entries: Vec<Value> = (0..self.rows)
            .map(|r| Value::Array(self.row(r).iter().map(|x| f.elem_to_json(x)).collect()))
            .collect();
        json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn from_json<F: StarField<Elem = E>>(f: &F, v: &Value) -> Result<Self> {
        let rows = v["rows"].as_u64().ok_or_else(|| Error::Json("matrix.rows".into()))? as usize;
        let cols = v["cols"].as_u64().ok_or_else(|| Error::Json("matrix.cols".into()))? as usize;
        let entries = v["entries"].as_array().ok_or_else(|| Error::Json("matrix.entries".into()))?;
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            for x in row.as_array().ok_or_else(|| Error::Json("matrix row".into()))? {
                data.push(f.elem_from_json(x)?);
            }
        }
        Self::from_vec(rows, cols, data)
    }
}
