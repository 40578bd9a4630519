//! Straightforward minor-expansion linear algebra.
//!
//! Nothing here touches row reduction; the code exists to re-check results
//! of the fast path (ranks, certificates) along an unrelated route. It is
//! exponential in the dimension and meant for matrices of size ≤ 5.

use crate::starfield::StarField;

pub type Rows<E> = Vec<Vec<E>>;

/// Laplace expansion along the first row.
pub fn determinant<F: StarField>(f: &F, m: &[Vec<F::Elem>]) -> F::Elem {
    let n = m.len();
    match n {
        0 => f.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = f.zero();
            for c in 0..n {
                if f.is_zero(&m[0][c]) {
                    continue;
                }
                let minor: Rows<F::Elem> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = f.mul(&m[0][c], &determinant(f, &minor));
                acc = if c % 2 == 0 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

pub fn minor<F: StarField>(f: &F, m: &[Vec<F::Elem>], rows: &[usize], cols: &[usize]) -> F::Elem {
    let sub: Rows<F::Elem> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
    determinant(f, &sub)
}

/// A nonzero `k×k` minor: `(row indices, column indices)`.
pub type MinorWitness = (Vec<usize>, Vec<usize>);

/// First nonzero `k×k` minor in lexicographic order of index sets.
pub fn nonzero_minor<F: StarField>(f: &F, m: &[Vec<F::Elem>], k: usize) -> Option<MinorWitness> {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, |r| r.len());
    for rows in subsets(n_rows, k) {
        for cols in subsets(n_cols, k) {
            if !f.is_zero(&minor(f, m, &rows, &cols)) {
                return Some((rows, cols));
            }
        }
    }
    None
}

/// Rank as the largest size of a nonvanishing minor.
pub fn rank_by_minors<F: StarField>(f: &F, m: &[Vec<F::Elem>]) -> usize {
    let max = m.len().min(m.first().map_or(0, |r| r.len()));
    (1..=max).rev().find(|&k| nonzero_minor(f, m, k).is_some()).unwrap_or(0)
}

pub fn mat_mul<F: StarField>(f: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Rows<F::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&row[k], &b[k][c]))))
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: StarField>(f: &F, a: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y))))
        .collect()
}

/// Inverse by the adjugate formula; `None` if singular.
pub fn inverse<F: StarField>(f: &F, m: &[Vec<F::Elem>]) -> Option<Rows<F::Elem>> {
    let n = m.len();
    let det_inv = f.inv(&determinant(f, m))?;
    let all: Vec<usize> = (0..n).collect();
    let mut out = vec![vec![f.zero(); n]; n];
    for (r, out_row) in out.iter_mut().enumerate() {
        for (c, entry) in out_row.iter_mut().enumerate() {
            // adj[r][c] = (-1)^{r+c} · M_{c,r}
            let rows: Vec<usize> = all.iter().copied().filter(|&k| k != c).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&k| k != r).collect();
            let cof = minor(f, m, &rows, &cols);
            let cof = if (r + c) % 2 == 0 { cof } else { f.neg(&cof) };
            *entry = f.mul(&cof, &det_inv);
        }
    }
    Some(out)
}

/// Orthogonal projection onto the span of `basis` (rows), computed as
/// `Σ_{a,b} b_a (G⁻¹)_{ab} conj(b_b)ᵀ` with the adjugate inverse.
pub fn projection<F: StarField>(f: &F, basis: &[Vec<F::Elem>], ambient: usize) -> Option<Rows<F::Elem>> {
    let m = basis.len();
    let gram: Rows<F::Elem> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    basis[a]
                        .iter()
                        .zip(&basis[b])
                        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(&f.conj(x), y)))
                })
                .collect()
        })
        .collect();
    let g_inv = if m == 0 { Vec::new() } else { inverse(f, &gram)? };
    let mut p = vec![vec![f.zero(); ambient]; ambient];
    for (r, p_row) in p.iter_mut().enumerate() {
        for (c, entry) in p_row.iter_mut().enumerate() {
            let mut acc = f.zero();
            for a in 0..m {
                for b in 0..m {
                    let t = f.mul(&f.mul(&basis[a][r], &g_inv[a][b]), &f.conj(&basis[b][c]));
                    acc = f.add(&acc, &t);
                }
            }
            *entry = acc;
        }
    }
    Some(p)
}

/// Is `v` in the column space of `m`? Decided by comparing minor ranks.
pub fn in_column_space<F: StarField>(f: &F, m: &[Vec<F::Elem>], v: &[F::Elem]) -> bool {
    let extended: Rows<F::Elem> = m
        .iter()
        .zip(v)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    rank_by_minors(f, &extended) == rank_by_minors(f, m)
}
