#![allow(dead_code)]

use opgraph::graph::{build_graph, enumerate_flags, LabeledGraph};
use opgraph::linalg::{Matrix, Subspace};
use opgraph::spectral::{ClassSignature, EigenFlag};
use opgraph::starfield::{GaussianRational, GaussianRationals, GfElem, GfSquare, StarField};
use rand::RngCore;

pub fn gf9() -> GfSquare {
    GfSquare::new(3, 1).unwrap()
}

pub fn gf9_signature(sigma: &[usize], dims: &[usize]) -> ClassSignature<GfElem> {
    let gf = gf9();
    let fixed = gf.fixed_elements().unwrap();
    ClassSignature::new(&gf, sigma.iter().map(|&k| fixed[k]).collect(), dims.to_vec()).unwrap()
}

pub fn gf9_graph(dims: &[usize]) -> LabeledGraph<GfElem> {
    let gf = gf9();
    let sigma: Vec<usize> = (0..dims.len()).collect();
    build_graph(&gf, enumerate_flags(&gf, &gf9_signature(&sigma, dims)).unwrap()).unwrap()
}

pub fn q(re: i64, im: i64) -> GaussianRational {
    GaussianRational::integer(re, im)
}

pub fn qi_signature(dims: &[usize]) -> ClassSignature<GaussianRational> {
    let sigma = (1..=dims.len() as i64).map(|k| q(k, 0)).collect();
    ClassSignature::new(&GaussianRationals, sigma, dims.to_vec()).unwrap()
}

pub fn line(v: &[i64]) -> Subspace<GaussianRational> {
    Subspace::span(&GaussianRationals, v.len(), vec![v.iter().map(|&x| q(x, 0)).collect()]).unwrap()
}

/// The reflection `I − 2·P_ℓ` in the line spanned by `v`.
pub fn reflection<F: StarField>(f: &F, v: &[F::Elem]) -> Matrix<F::Elem> {
    let n = v.len();
    let p = Subspace::span(f, n, vec![v.to_vec()]).unwrap().projection_matrix(f).unwrap();
    Matrix::identity(f, n).sub(f, &p.scale(f, &f.from_i64(2))).unwrap()
}

pub fn random_vector<F: StarField>(f: &F, n: usize, rng: &mut dyn RngCore, height: u32) -> Vec<F::Elem> {
    loop {
        let v: Vec<F::Elem> = (0..n).map(|_| f.random_elem(rng, height)).collect();
        if v.iter().any(|x| !f.is_zero(x)) {
            return v;
        }
    }
}

/// A random vector of `w`.
pub fn random_in<F: StarField>(f: &F, w: &Subspace<F::Elem>, rng: &mut dyn RngCore, height: u32) -> Vec<F::Elem> {
    loop {
        let c: Vec<F::Elem> = (0..w.dim()).map(|_| f.random_elem(rng, height)).collect();
        let v = w.combine(f, &c);
        if v.iter().any(|x| !f.is_zero(x)) {
            return v;
        }
    }
}

pub fn reflect_flag<F: StarField>(f: &F, a: &EigenFlag<F::Elem>, v: &[F::Elem]) -> EigenFlag<F::Elem> {
    a.map_semilinear(f, &reflection(f, v), opgraph::starfield::FieldAutomorphism::IDENTITY).unwrap()
}
