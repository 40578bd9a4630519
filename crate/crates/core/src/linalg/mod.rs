//! Exact matrix and subspace calculus over a star-field with the standard
//! hermitian form `h(u, v) = Σ u_k·conj(v_k)`.

mod matrix;
pub mod oracle;
mod subspace;

pub use matrix::Matrix;
pub use subspace::Subspace;

use crate::error::{Error, Result};
use crate::starfield::StarField;

/// `h(u, v) = Σ u_k conj(v_k)`.
pub fn herm_form<F: StarField>(f: &F, u: &[F::Elem], v: &[F::Elem]) -> Result<F::Elem> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.iter()
        .zip(v)
        .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, &f.conj(b)))))
}

/// The ambient space `E^dim` with the standard hermitian form.
#[derive(Debug, Clone)]
pub struct HermitianSpace<F: StarField> {
    field: F,
    dim: usize,
}

impl<F: StarField> HermitianSpace<F> {
    pub fn new(field: F, dim: usize) -> Result<Self> {
        if dim < 3 {
            return Err(Error::Precondition(format!("ambient dimension must be at least 3, got {dim}")));
        }
        Ok(HermitianSpace { field, dim })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn full(&self) -> Subspace<F::Elem> {
        Subspace::full(&self.field, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starfield::{GaussianRational as G, GaussianRationals, GfElem, GfSquare};

    #[test]
    fn herm_form_examples() {
        let f = GaussianRationals;
        let u = vec![G::integer(1, 0), G::integer(0, 1), G::integer(0, 0)];
        assert_eq!(herm_form(&f, &u, &u).unwrap(), G::integer(2, 0));
        let e1 = vec![f.one(), f.zero(), f.zero()];
        let e2 = vec![f.zero(), f.one(), f.zero()];
        assert_eq!(herm_form(&f, &e1, &e2).unwrap(), f.zero());
        assert_eq!(herm_form(&f, &e1, &e2[..2]), Err(Error::LengthMismatch(3, 2)));

        let gf = GfSquare::new(2, 1).unwrap();
        let w = vec![gf.one(), GfElem(2), gf.zero()];
        assert_eq!(herm_form(&gf, &w, &w).unwrap(), gf.zero());
    }

    #[test]
    fn herm_form_is_sesquilinear_symmetric() {
        let f = GaussianRationals;
        let u = vec![G::integer(1, 2), G::integer(-3, 1), G::integer(0, 4)];
        let v = vec![G::integer(2, -1), G::integer(1, 1), G::integer(5, 0)];
        assert_eq!(herm_form(&f, &v, &u).unwrap(), f.conj(&herm_form(&f, &u, &v).unwrap()));
    }

    #[test]
    fn space_needs_dim_three() {
        assert!(HermitianSpace::new(GaussianRationals, 2).is_err());
        assert_eq!(HermitianSpace::new(GaussianRationals, 3).unwrap().full().dim(), 3);
    }
}
