use std::time::Instant;

use rand::RngCore;
use serde_json::{json, Value};

use super::adjacency::first_violation;
use super::{assemble_matrix, classify_pairs, random_flag, ClassSignature, EigenFlag, PairClassification};
use super::{Violation, ViolationOperator, ViolationSpace};
use crate::error::{Error, Result};
use crate::linalg::oracle::{self, MinorWitness, Rows};
use crate::linalg::{Matrix, Subspace};
use crate::starfield::{FieldAutomorphism, StarField};

/// Self-contained evidence that a pair satisfies (A1) but not (A2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate<E> {
    pub a: EigenFlag<E>,
    pub b: EigenFlag<E>,
    /// `B − A` as a matrix.
    pub difference: Matrix<E>,
    /// A nonzero 2×2 minor of the difference.
    pub rank_witness: MinorWitness,
    pub violation: Violation<E>,
}

impl<E: Clone + Eq + std::fmt::Debug> Certificate<E> {
    /// `None` unless the pair satisfies (A1) and violates (A2).
    pub fn for_pair<F: StarField<Elem = E>>(f: &F, a: &EigenFlag<E>, b: &EigenFlag<E>) -> Result<Option<Self>> {
        a.check_same_class(b)?;
        let (ma, mb) = (assemble_matrix(f, a), assemble_matrix(f, b));
        let d = mb.sub(f, &ma)?;
        if d.rank(f) != 2 {
            return Ok(None);
        }
        let Some(violation) = first_violation(f, &ma, &mb, &d) else {
            return Ok(None);
        };
        let rank_witness = oracle::nonzero_minor(f, &d.row_vecs(), 2).expect("rank two has a nonzero 2×2 minor");
        Ok(Some(Certificate { a: a.clone(), b: b.clone(), difference: d, rank_witness, violation }))
    }

    /// Re-check every claim using minor expansions and adjugate
    /// projections only; no row reduction is involved.
    pub fn verify<F: StarField<Elem = E>>(&self, f: &F) -> Result<()> {
        let reject = |msg: &str| Err(Error::CertificateRejected(msg.to_string()));
        if self.a.signature() != self.b.signature() {
            return reject("flags belong to different classes");
        }
        let ma = operator_by_oracle(f, &self.a).ok_or(Error::CertificateRejected("degenerate eigenspace of A".into()))?;
        let mb = operator_by_oracle(f, &self.b).ok_or(Error::CertificateRejected("degenerate eigenspace of B".into()))?;
        let d: Rows<E> = ma
            .iter()
            .zip(&mb)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| f.sub(y, x)).collect())
            .collect();
        if d != self.difference.row_vecs() {
            return reject("stored difference does not equal B − A");
        }
        let (rows, cols) = &self.rank_witness;
        if rows.len() != 2 || cols.len() != 2 || rows.iter().chain(cols).any(|&k| k >= d.len()) {
            return reject("rank witness is not a 2×2 minor");
        }
        if f.is_zero(&oracle::minor(f, &d, rows, cols)) {
            return reject("rank witness minor vanishes");
        }
        if oracle::rank_by_minors(f, &d) != 2 {
            return reject("difference does not have rank 2");
        }
        let v = &self.violation;
        let m = match v.operator {
            ViolationOperator::A => &ma,
            ViolationOperator::B => &mb,
        };
        if v.vector.len() != d.len() || oracle::mat_vec(f, m, &v.vector) != v.image {
            return reject("witness image is not the operator applied to the witness");
        }
        if v.vector.iter().all(|x| f.is_zero(x)) {
            return reject("witness vector is zero");
        }
        let in_space = |w: &[E]| match v.space {
            ViolationSpace::Image => oracle::in_column_space(f, &d, w),
            ViolationSpace::Kernel => oracle::mat_vec(f, &d, w).iter().all(|x| f.is_zero(x)),
        };
        if !in_space(&v.vector) {
            return reject("witness vector is not in the claimed subspace");
        }
        if in_space(&v.image) {
            return reject("witness image stays in the claimed subspace");
        }
        Ok(())
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        let (rows, cols) = &self.rank_witness;
        json!({
            "a": self.a.to_json(f),
            "b": self.b.to_json(f),
            "difference": self.difference.to_json(f),
            "rank": 2,
            "rank_witness": {
                "rows": rows.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "cols": cols.iter().map(|k| k + 1).collect::<Vec<_>>(),
            },
            "violation": self.violation.to_json(f),
        })
    }

    pub fn from_json<F: StarField<Elem = E>>(f: &F, v: &Value) -> Result<Self> {
        let indices = |key: &str| -> Result<Vec<usize>> {
            v["rank_witness"][key]
                .as_array()
                .ok_or_else(|| Error::Json(format!("rank_witness.{key}")))?
                .iter()
                .map(|x| match x.as_u64() {
                    Some(k) if k >= 1 => Ok(k as usize - 1),
                    _ => Err(Error::Json(format!("rank_witness.{key} entry"))),
                })
                .collect()
        };
        Ok(Certificate {
            a: EigenFlag::from_json(f, &v["a"])?,
            b: EigenFlag::from_json(f, &v["b"])?,
            difference: Matrix::from_json(f, &v["difference"])?,
            rank_witness: (indices("rows")?, indices("cols")?),
            violation: Violation::from_json(f, &v["violation"])?,
        })
    }
}

/// `Σ aᵢ P_{Xᵢ}` with each projection built by [`oracle::projection`].
fn operator_by_oracle<F: StarField>(f: &F, a: &EigenFlag<F::Elem>) -> Option<Rows<F::Elem>> {
    let n = a.ambient();
    let mut m = vec![vec![f.zero(); n]; n];
    for (pos, x) in a.spaces().iter().enumerate() {
        let p = oracle::projection(f, x.basis(), n)?;
        let value = a.signature().value(pos);
        for (row, prow) in m.iter_mut().zip(&p) {
            for (acc, y) in row.iter_mut().zip(prow) {
                *acc = f.add(acc, &f.mul(value, y));
            }
        }
    }
    Some(m)
}

/// Limits for the randomized search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_attempts: u64,
    pub max_seconds: f64,
    /// Height bound for the random coefficients.
    pub height: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_attempts: 10_000, max_seconds: 60.0, height: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<E> {
    /// A verified pair. Exhaustive runs also carry the full classification.
    Certified {
        certificate: Box<Certificate<E>>,
        attempts: u64,
        classification: Option<PairClassification>,
    },
    /// Every pair of the (finite) class was checked and none qualifies.
    ExhaustivelyNone { classification: PairClassification },
    BudgetExhausted { attempts: u64 },
}

/// Look for a pair with (A1) but not (A2).
///
/// Finite backends classify every pair of the class. Over infinite
/// backends the search draws a random flag `A` and vector `v`, sets
/// `R = I − 2P_ℓ` for `ℓ = span(v, Av)^⊥` and tries `B = RAR`; since `R`
/// fixes `v` and `Av`, `(B − A)v = 0` and the difference has rank at most
/// `n − 1`, which in dimension three is the rank-2 regime.
pub fn counterexample_search<F: StarField>(
    f: &F,
    signature: &ClassSignature<F::Elem>,
    budget: SearchBudget,
    rng: &mut dyn RngCore,
) -> Result<SearchOutcome<F::Elem>> {
    if signature.len() < 3 {
        return Err(Error::Precondition("(A1) implies (A2) when there are only two eigenvalues".into()));
    }
    if f.is_finite() {
        let flags = crate::graph::enumerate_flags(f, signature)?;
        let classification = classify_pairs(f, &flags)?;
        return Ok(match classification.a1_not_a2_pairs.first() {
            Some(&(i, j)) => {
                let certificate = Certificate::for_pair(f, &flags[i], &flags[j])?.expect("classified as A1 without A2");
                certificate.verify(f)?;
                SearchOutcome::Certified {
                    certificate: Box::new(certificate),
                    attempts: classification.pairs,
                    classification: Some(classification),
                }
            }
            None => SearchOutcome::ExhaustivelyNone { classification },
        });
    }

    let n = signature.ambient();
    let two = f.from_i64(2);
    let start = Instant::now();
    for attempt in 1..=budget.max_attempts {
        if start.elapsed().as_secs_f64() > budget.max_seconds {
            return Ok(SearchOutcome::BudgetExhausted { attempts: attempt - 1 });
        }
        let a = random_flag(f, signature, rng, budget.height)?;
        let v: Vec<F::Elem> = (0..n).map(|_| f.random_elem(rng, budget.height)).collect();
        let av = assemble_matrix(f, &a).apply(f, &v)?;
        let plane = Subspace::span(f, n, vec![v, av])?;
        if plane.dim() != 2 {
            continue;
        }
        let Ok(p) = plane.orthocomplement(f).projection_matrix(f) else {
            continue;
        };
        let r = Matrix::identity(f, n).sub(f, &p.scale(f, &two))?;
        let Ok(b) = a.map_semilinear(f, &r, FieldAutomorphism::IDENTITY) else {
            continue;
        };
        if let Some(certificate) = Certificate::for_pair(f, &a, &b)? {
            certificate.verify(f)?;
            return Ok(SearchOutcome::Certified { certificate: Box::new(certificate), attempts: attempt, classification: None });
        }
    }
    Ok(SearchOutcome::BudgetExhausted { attempts: budget.max_attempts })
}
