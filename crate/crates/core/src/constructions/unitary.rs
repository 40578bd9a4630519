use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use serde_json::{json, Value};

use super::{checked, sd_group, UnitaryMap};
use crate::error::{Error, Result};
use crate::graph::{classify_tau, induced_tau, GroupDescription, LabeledGraph, Perm, StabilizerChain, TauClass};
use crate::linalg::Matrix;
use crate::starfield::StarField;

/// `|U(n, q²)| = q^{n(n−1)/2} · Π_{k=1..n} (q^k − (−1)^k)`.
pub fn unitary_group_order(n: u32, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut order: BigUint = Pow::pow(&q, n * (n.saturating_sub(1)) / 2);
    for k in 1..=n {
        let qk: BigUint = Pow::pow(&q, k);
        order *= if k % 2 == 0 { qk - 1u32 } else { qk + 1u32 };
    }
    order
}

fn field_index<F: StarField>(f: &F) -> Result<(Vec<F::Elem>, HashMap<F::Elem, usize>)> {
    let elems = f.elements().ok_or(Error::FiniteBackendRequired)?;
    let index = elems.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
    Ok((elems, index))
}

/// The permutation of `Fⁿ` (vectors numbered in base `|F|`) induced by `M`.
fn vector_action<F: StarField>(
    f: &F,
    m: &Matrix<F::Elem>,
    elems: &[F::Elem],
    index: &HashMap<F::Elem, usize>,
) -> Result<Perm> {
    let n = m.n_cols();
    let size = elems.len();
    let total = size.checked_pow(n as u32).filter(|&t| t <= 200_000).ok_or_else(|| {
        Error::BudgetExceeded(format!("vector action on {size}^{n} points"))
    })?;
    (0..total)
        .map(|code| {
            let mut c = code;
            let v: Vec<F::Elem> = (0..n)
                .map(|_| {
                    let x = elems[c % size].clone();
                    c /= size;
                    x
                })
                .collect();
            let w = m.apply(f, &v)?;
            Ok(w.iter().rev().fold(0, |acc, x| acc * size + index[x]))
        })
        .collect()
}

/// Order of the matrix group generated by `gens`, computed exactly from its
/// faithful action on the vectors of `Fⁿ`.
pub fn isometry_group_order<F: StarField>(f: &F, gens: &[UnitaryMap<F::Elem>], n: usize) -> Result<BigUint> {
    let (elems, index) = field_index(f)?;
    let perms = gens.iter().map(|u| vector_action(f, u.matrix(), &elems, &index)).collect::<Result<Vec<_>>>()?;
    let degree = elems.len().pow(n as u32);
    Ok(StabilizerChain::new(degree, &perms).order())
}

/// A small generating set of the isometry group `U(n, q²)` of a finite
/// backend, confirmed against [`unitary_group_order`].
///
/// Starts from a generating set of `U(2, q²)` embedded on the first two
/// coordinates (picked greedily from all 2×2 isometries), the transposition
/// `(1 2)` and the cyclic shift. For small fields these can generate a
/// proper subgroup, so isometries of the form `I + a·v·v*` are then added
/// greedily until the order is reached.
pub fn unitary_generators<F: StarField>(f: &F, n: usize) -> Result<Vec<UnitaryMap<F::Elem>>> {
    if n < 2 {
        return Err(Error::Precondition(format!("isometry generators need n ≥ 2, got {n}")));
    }
    let (elems, index) = field_index(f)?;
    let size = elems.len();
    if size > 49 {
        return Err(Error::BudgetExceeded(format!("2×2 isometry enumeration over {size} elements")));
    }
    let q = (1..=size as u64).find(|q| q * q == size as u64).expect("field order is a square");
    let target = unitary_group_order(n as u32, q);

    let mut greedy = Greedy::new(size * size);
    for code in 0..size.pow(4) {
        let e: Vec<F::Elem> = (0..4).map(|k| elems[(code / size.pow(k)) % size].clone()).collect();
        let m = Matrix::from_rows(vec![vec![e[0].clone(), e[1].clone()], vec![e[2].clone(), e[3].clone()]], 2);
        if m.is_isometry(f) {
            greedy.offer(vector_action(f, &m, &elems, &index)?, m);
        }
    }
    let mut out = Vec::new();
    for b in greedy.kept {
        let mut m = Matrix::identity(f, n);
        for r in 0..2 {
            for c in 0..2 {
                m.set(r, c, b.get(r, c).clone());
            }
        }
        out.push(m);
    }
    if n > 2 {
        let permutation = |img: &dyn Fn(usize) -> usize| {
            let mut m = Matrix::zeros(f, n, n);
            for c in 0..n {
                m.set(img(c), c, f.one());
            }
            m
        };
        out.push(permutation(&|c| match c {
            0 => 1,
            1 => 0,
            c => c,
        }));
        out.push(permutation(&|c| (c + 1) % n));
    }

    let mut greedy = Greedy::new(size.pow(n as u32));
    for m in out {
        greedy.offer(vector_action(f, &m, &elems, &index)?, m);
    }
    'outer: for code in 1..size.pow(n as u32) {
        if greedy.chain.order() == target {
            break;
        }
        let v: Vec<F::Elem> = (0..n).map(|k| elems[(code / size.pow(k as u32)) % size].clone()).collect();
        for a in elems.iter().filter(|a| !f.is_zero(a)) {
            let mut m = Matrix::identity(f, n);
            for r in 0..n {
                for c in 0..n {
                    let extra = f.mul(a, &f.mul(&v[r], &f.conj(&v[c])));
                    m.set(r, c, f.add(m.get(r, c), &extra));
                }
            }
            if m.is_isometry(f) {
                greedy.offer(vector_action(f, &m, &elems, &index)?, m);
                if greedy.chain.order() == target {
                    break 'outer;
                }
            }
        }
    }
    if greedy.chain.order() != target {
        return Err(Error::PostconditionFailed(format!(
            "isometries found generate a group of order {}, expected {target}",
            greedy.chain.order()
        )));
    }
    greedy.kept.into_iter().map(|m| UnitaryMap::new(f, m)).collect()
}

/// Keeps an offered element only when it enlarges the group so far.
struct Greedy<E> {
    degree: usize,
    perms: Vec<Perm>,
    kept: Vec<Matrix<E>>,
    chain: StabilizerChain,
}

impl<E> Greedy<E> {
    fn new(degree: usize) -> Self {
        Greedy { degree, perms: Vec::new(), kept: Vec::new(), chain: StabilizerChain::new(degree, &[]) }
    }

    fn offer(&mut self, p: Perm, m: Matrix<E>) {
        if !self.chain.contains(&p) {
            self.perms.push(p);
            self.chain = StabilizerChain::new(self.degree, &self.perms);
            self.kept.push(m);
        }
    }
}

#[derive(Debug, Clone)]
pub struct InducedGenerator {
    pub label: String,
    pub perm: Perm,
    pub tau: TauClass,
}

/// The subgroup of `Aut(Γ)` generated by maps induced from isometries, field
/// automorphisms and slot permutations.
#[derive(Debug, Clone)]
pub struct InducedSubgroup {
    pub generators: Vec<InducedGenerator>,
    pub group: GroupDescription,
}

impl InducedSubgroup {
    pub fn order(&self) -> &BigUint {
        &self.group.order
    }

    /// `|Aut| / |induced|` when it divides exactly.
    pub fn index_in(&self, aut_order: &BigUint) -> Option<BigUint> {
        let order = self.order();
        (!order.is_zero() && (aut_order % order).is_zero()).then(|| aut_order / order)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.group.order.to_string(),
            "generators": self.generators.iter().map(|g| json!({
                "label": g.label,
                "permutation_induced_tau": matches!(g.tau, TauClass::PermutationInduced(_)),
                "tau_delta": match &g.tau {
                    TauClass::PermutationInduced(d) => json!(d.iter().map(|k| k + 1).collect::<Vec<_>>()),
                    _ => Value::Null,
                },
            })).collect::<Vec<_>>(),
        })
    }
}

/// Every isometry in `unitaries`, every non-identity field automorphism
/// commuting with `conj` (applied entrywise), and every `δ ∈ S(d)`, each
/// turned into a vertex permutation of `g` and checked to be an automorphism.
pub fn induced_subgroup<F: StarField>(
    f: &F,
    g: &LabeledGraph<F::Elem>,
    unitaries: &[UnitaryMap<F::Elem>],
) -> Result<InducedSubgroup> {
    let sig = g.signature().ok_or_else(|| Error::Precondition("graph has no vertices".into()))?.clone();
    let n = sig.ambient();
    let mut generators = Vec::new();
    let mut push = |label: String, perm: Perm| -> Result<()> {
        let perm = checked(g, perm)?;
        let tau = classify_tau(&induced_tau(g, &perm)?, sig.len());
        generators.push(InducedGenerator { label, perm, tau });
        Ok(())
    };
    for (k, u) in unitaries.iter().enumerate() {
        push(format!("U{}", k + 1), g.vertex_map(|a| super::conjugate_flag(f, u, false, a))?)?;
    }
    let id = Matrix::identity(f, n);
    for auto in f.field_automorphisms().into_iter().filter(|a| !a.is_identity()) {
        push(format!("galois^{}", auto.power), g.vertex_map(|a| a.map_semilinear(f, &id, auto))?)?;
    }
    for delta in sd_group(&sig).into_iter().filter(|d| !d.is_identity()) {
        push(format!("delta{}", delta.display()), g.vertex_map(|a| a.permute_slots(&delta))?)?;
    }
    let perms = generators.iter().map(|x| x.perm.clone()).collect();
    let group = GroupDescription::from_generators(g.len(), perms);
    Ok(InducedSubgroup { generators, group })
}
