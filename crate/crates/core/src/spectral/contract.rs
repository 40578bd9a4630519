use super::{ClassSignature, EigenFlag};
use crate::error::{Error, Result};
use crate::starfield::StarField;

/// Merge the `aᵢ`-eigenspace into the `aⱼ`-eigenspace.
///
/// The result `T` lies in `(σ,d)₋ᵢ,₊ⱼ` and satisfies
/// `A = T + (aᵢ − aⱼ)·P_{Xᵢ}`.
pub fn contract<F: StarField>(f: &F, a: &EigenFlag<F::Elem>, i: usize, j: usize) -> Result<EigenFlag<F::Elem>> {
    let sig = a.signature().contracted(i, j)?;
    let merged = a.space(i).sum(f, a.space(j))?;
    let spaces = (0..a.signature().len())
        .filter(|&k| k != i)
        .map(|k| if k == j { merged.clone() } else { a.space(k).clone() })
        .collect();
    Ok(EigenFlag::from_parts(sig, spaces))
}

/// Every flag `A` of class `signature` with `contract(A, i, j) = T`.
///
/// These correspond to the nondegenerate `nᵢ`-subspaces `X` of the
/// `aⱼ`-eigenspace of `T` whose complement there is nondegenerate too.
pub fn fiber<F: StarField>(
    f: &F,
    t: &EigenFlag<F::Elem>,
    i: usize,
    j: usize,
    signature: &ClassSignature<F::Elem>,
) -> Result<Vec<EigenFlag<F::Elem>>> {
    let scalars = f.elements().ok_or(Error::FiniteBackendRequired)?;
    if t.signature() != &signature.contracted(i, j)? {
        return Err(Error::SignatureMismatch);
    }
    let slot = |k: usize| t.space(if k < i { k } else { k - 1 });
    let w = slot(j);
    let mut out = Vec::new();
    for x in w.subspaces_of_dim(f, signature.dim(i), &scalars) {
        if !x.is_nondegenerate(f) {
            continue;
        }
        let rest = x.relative_orthocomplement(f, w)?;
        if !rest.is_nondegenerate(f) {
            continue;
        }
        let spaces = (0..signature.len())
            .map(|k| match k {
                _ if k == i => x.clone(),
                _ if k == j => rest.clone(),
                _ => slot(k).clone(),
            })
            .collect();
        out.push(EigenFlag::from_parts(signature.clone(), spaces));
    }
    Ok(out)
}
