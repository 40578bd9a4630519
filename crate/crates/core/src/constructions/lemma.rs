use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::enumerate_flags;
use crate::linalg::Subspace;
use crate::spectral::{adjacent, geometric_adjacency, EigenFlag, IndexPair};
use crate::starfield::StarField;

fn check_type<F: StarField>(
    f: &F,
    x: &EigenFlag<F::Elem>,
    y: &EigenFlag<F::Elem>,
    expected: IndexPair,
) -> Result<bool> {
    Ok(geometric_adjacency(f, x, y)? == Some(expected) && adjacent(f, x, y)?)
}

/// Given `C` that is `{i,j}`-adjacent to `A` and `{i',j'}`-adjacent to `B`
/// (the two pairs disjoint), build `C'` that is `{i',j'}`-adjacent to `A`
/// and `{i,j}`-adjacent to `B`.
///
/// `C'` takes `A`'s spaces on `{i,j}`, `B`'s on `{i',j'}` and the common
/// spaces elsewhere. Both adjacencies of the result are re-checked.
pub fn swap_construction<F: StarField>(
    f: &F,
    a: &EigenFlag<F::Elem>,
    b: &EigenFlag<F::Elem>,
    c: &EigenFlag<F::Elem>,
    ij: IndexPair,
    ij2: IndexPair,
) -> Result<EigenFlag<F::Elem>> {
    let k = a.signature().len();
    if k < 4 {
        return Err(Error::Precondition(format!("the swap needs |I| ≥ 4, got {k}")));
    }
    if !ij.is_disjoint(&ij2) || ij.second() >= k || ij2.second() >= k {
        return Err(Error::Precondition(format!("{ij} and {ij2} must be disjoint pairs of indices")));
    }
    if !check_type(f, c, a, ij)? {
        return Err(Error::Precondition(format!("C is not {ij}-adjacent to A")));
    }
    if !check_type(f, c, b, ij2)? {
        return Err(Error::Precondition(format!("C is not {ij2}-adjacent to B")));
    }
    let spaces = (0..k)
        .map(|s| if ij2.contains(s) { b.space(s).clone() } else { a.space(s).clone() })
        .collect();
    let c2 = EigenFlag::new(f, a.signature().clone(), spaces)?;
    if !check_type(f, &c2, a, ij2)? {
        return Err(Error::PostconditionFailed(format!("C' is not {ij2}-adjacent to A")));
    }
    if !check_type(f, &c2, b, ij)? {
        return Err(Error::PostconditionFailed(format!("C' is not {ij}-adjacent to B")));
    }
    Ok(c2)
}

/// Output of [`obstruction_witness`]: flags `B`, `C` with `C`
/// `{i,j}`-adjacent to `A` and `{j,t}`-adjacent to `B`, such that no flag
/// is `{j,t}`-adjacent to `A` and `{i,j}`-adjacent to `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionWitness<E> {
    pub a: EigenFlag<E>,
    pub b: EigenFlag<E>,
    pub c: EigenFlag<E>,
    /// Positions `(i, j, t)`.
    pub indices: (usize, usize, usize),
    pub p: Subspace<E>,
    pub y_i: Subspace<E>,
    pub q: Subspace<E>,
    pub y_t: Subspace<E>,
    pub y_j: Subspace<E>,
    pub z_j: Subspace<E>,
    /// Number of rejected choices before this configuration.
    pub rejected_choices: usize,
    /// Each claim with whether it was confirmed.
    pub claims: Vec<(String, bool)>,
    /// How non-existence was confirmed and, for exhaustive checks, how many
    /// candidates were examined.
    pub nonexistence: (String, Option<usize>),
}

impl<E: Clone + Eq + std::fmt::Debug> ObstructionWitness<E> {
    pub fn all_claims_hold(&self) -> bool {
        self.claims.iter().all(|(_, ok)| *ok)
    }

    pub fn to_json<F: StarField<Elem = E>>(&self, f: &F) -> Value {
        let (i, j, t) = self.indices;
        json!({
            "indices": [i + 1, j + 1, t + 1],
            "a": self.a.to_json(f),
            "b": self.b.to_json(f),
            "c": self.c.to_json(f),
            "choices": {
                "p": self.p.to_json(f),
                "y_i": self.y_i.to_json(f),
                "q": self.q.to_json(f),
                "y_t": self.y_t.to_json(f),
                "y_j": self.y_j.to_json(f),
                "z_j": self.z_j.to_json(f),
                "rejected": self.rejected_choices,
            },
            "claims": self.claims.iter().map(|(c, ok)| json!({ "claim": c, "holds": ok })).collect::<Vec<_>>(),
            "nonexistence": { "method": self.nonexistence.0, "candidates": self.nonexistence.1 },
        })
    }
}

struct Choice<E> {
    p: Subspace<E>,
    y_i: Subspace<E>,
    q: Subspace<E>,
    y_t: Subspace<E>,
}

/// Build `B` and `C` for the flag `A` and distinct positions `i, j, t`.
///
/// Choices are made in a fixed order: a line `P ⊂ Xⱼ`, a hyperplane
/// `Yᵢ ≠ Xᵢ` of `Xᵢ + P`, its orthocomplement `Q` there, and
/// `Y_t = H + Q` for a hyperplane `H` of `X_t`. The first choice where every
/// space is nondegenerate is used. Then `Yⱼ` is the orthocomplement of
/// `Yᵢ + Y_t` in `Xᵢ + Xⱼ + X_t`, `Zⱼ` that of `Yᵢ` in `Xᵢ + Xⱼ`,
/// `B = (…, Yᵢ, Yⱼ, Y_t, …)` and `C = (…, Yᵢ, Zⱼ, X_t, …)`.
///
/// Every claimed adjacency is re-checked. On finite backends the
/// non-existence claim is confirmed by running through the whole class;
/// otherwise by the criterion `Xᵢ ⟂̸ Y_t`.
pub fn obstruction_witness<F: StarField>(
    f: &F,
    a: &EigenFlag<F::Elem>,
    i: usize,
    j: usize,
    t: usize,
) -> Result<ObstructionWitness<F::Elem>> {
    let k = a.signature().len();
    if i == j || j == t || i == t || i.max(j).max(t) >= k {
        return Err(Error::Precondition(format!(
            "indices {}, {}, {} must be distinct and at most {k}",
            i + 1,
            j + 1,
            t + 1
        )));
    }
    let (xi, xj, xt) = (a.space(i), a.space(j), a.space(t));
    let scalars = f.sample_scalars();
    let (choice, rejected) = choose(f, xi, xj, xt, &scalars)?;
    let Choice { p, y_i, q, y_t } = choice;

    let w = xi.sum(f, xj)?.sum(f, xt)?;
    let y_j = y_i.sum(f, &y_t)?.relative_orthocomplement(f, &w)?;
    let z_j = y_i.relative_orthocomplement(f, &xi.sum(f, xj)?)?;
    let replace = |slots: [(usize, &Subspace<F::Elem>); 3]| {
        let mut spaces = a.spaces().to_vec();
        for (s, x) in slots {
            spaces[s] = x.clone();
        }
        EigenFlag::new(f, a.signature().clone(), spaces)
    };
    let b = replace([(i, &y_i), (j, &y_j), (t, &y_t)])?;
    let c = replace([(i, &y_i), (j, &z_j), (t, xt)])?;

    let pij = IndexPair::new(i, j).expect("distinct");
    let pjt = IndexPair::new(j, t).expect("distinct");
    let (li, lj, lt) = (i + 1, j + 1, t + 1);
    let mut claims = vec![
        (format!("X_{li} and Y_{li} adjacent"), xi.is_adjacent(f, &y_i)?),
        (format!("Y_{lt} contains Q"), y_t.contains(f, &q)?),
        (format!("X_{lt} and Y_{lt} adjacent"), xt.is_adjacent(f, &y_t)?),
        (format!("X_{lj} and Z_{lj} adjacent"), xj.is_adjacent(f, &z_j)?),
        (format!("Z_{lj} and Y_{lj} adjacent"), z_j.is_adjacent(f, &y_j)?),
        (format!("C is {pij}-adjacent to A"), check_type(f, &c, a, pij)?),
        (format!("C is {pjt}-adjacent to B"), check_type(f, &c, &b, pjt)?),
        (format!("X_{li} is not orthogonal to Y_{lt}"), !xi.is_orthogonal_to(f, &y_t)?),
    ];
    let nonexistence = if f.is_finite() {
        let checked = verify_nonexistence(f, a, &b, pjt, pij)?;
        claims.push((format!("no flag is {pjt}-adjacent to A and {pij}-adjacent to B"), checked.is_ok()));
        ("exhaustive".to_string(), Some(checked.unwrap_or_else(|x| x)))
    } else {
        ("orthogonality".to_string(), None)
    };
    let witness = ObstructionWitness {
        a: a.clone(),
        b,
        c,
        indices: (i, j, t),
        p,
        y_i,
        q,
        y_t,
        y_j,
        z_j,
        rejected_choices: rejected,
        claims,
        nonexistence,
    };
    if let Some((claim, _)) = witness.claims.iter().find(|(_, ok)| !ok) {
        return Err(Error::PostconditionFailed(claim.clone()));
    }
    Ok(witness)
}

fn choose<F: StarField>(
    f: &F,
    xi: &Subspace<F::Elem>,
    xj: &Subspace<F::Elem>,
    xt: &Subspace<F::Elem>,
    scalars: &[F::Elem],
) -> Result<(Choice<F::Elem>, usize)> {
    let mut rejected = 0;
    let mut stage = "P";
    for p in xj.subspaces_of_dim(f, 1, scalars) {
        if !p.is_nondegenerate(f) {
            rejected += 1;
            continue;
        }
        let xp = xi.sum(f, &p)?;
        stage = "Y_i";
        for y_i in xp.subspaces_of_dim(f, xi.dim(), scalars) {
            if y_i == *xi || !y_i.is_nondegenerate(f) {
                rejected += 1;
                continue;
            }
            let q = y_i.relative_orthocomplement(f, &xp)?;
            stage = "Y_t";
            for h in xt.subspaces_of_dim(f, xt.dim() - 1, scalars) {
                let y_t = h.sum(f, &q)?;
                if y_t.dim() != xt.dim() || !y_t.is_nondegenerate(f) {
                    rejected += 1;
                    continue;
                }
                return Ok((Choice { p, y_i, q, y_t }, rejected));
            }
        }
    }
    Err(Error::ChoiceExhausted(stage.into()))
}

/// Run through the whole class looking for a flag `D` that is
/// `first`-adjacent to `A` and `second`-adjacent to `B`.
///
/// `Ok(n)` means none among `n` candidates; `Err(k)` means candidate `k` is
/// such a flag.
pub fn verify_nonexistence<F: StarField>(
    f: &F,
    a: &EigenFlag<F::Elem>,
    b: &EigenFlag<F::Elem>,
    first: IndexPair,
    second: IndexPair,
) -> Result<std::result::Result<usize, usize>> {
    let all = enumerate_flags(f, a.signature())?;
    for (k, d) in all.iter().enumerate() {
        if check_type(f, d, a, first)? && check_type(f, d, b, second)? {
            return Ok(Err(k));
        }
    }
    Ok(Ok(all.len()))
}
