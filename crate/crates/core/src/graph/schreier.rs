use num_bigint::BigUint;

use super::Perm;

pub(crate) fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `a` first, then `b`.
pub(crate) fn compose(a: &[usize], b: &[usize]) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

pub(crate) fn inverse(a: &[usize]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

pub(crate) fn is_identity(a: &[usize]) -> bool {
    a.iter().enumerate().all(|(x, &y)| x == y)
}

/// Orbit of `point` under the group generated by `gens`, in BFS order.
pub(crate) fn orbit(n: usize, point: usize, gens: &[Perm]) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[point] = true;
    let mut out = vec![point];
    let mut k = 0;
    while k < out.len() {
        let x = out[k];
        for g in gens {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
        k += 1;
    }
    out
}

#[derive(Debug, Clone)]
struct Level {
    point: usize,
    orbit: Vec<usize>,
    /// `transversal[x] = (u, u⁻¹)` with `u(point) = x`, for `x` in the orbit.
    transversal: Vec<Option<(Perm, Perm)>>,
}

/// Base and strong generating set of a permutation group, built by the
/// deterministic Schreier–Sims algorithm: every Schreier generator of every
/// level is sifted, so the resulting chain is complete.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    n: usize,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(n: usize, generators: &[Perm]) -> Self {
        let mut chain = StabilizerChain { n, strong: Vec::new(), levels: Vec::new() };
        for g in generators {
            assert_eq!(g.len(), n, "generator has wrong degree");
            if !is_identity(g) && !chain.strong.contains(g) {
                chain.add_strong(g.clone());
            }
        }
        chain.rebuild_from(0);
        let mut k = chain.levels.len();
        while k > 0 {
            let level = k - 1;
            match chain.nontrivial_schreier_residue(level) {
                None => k -= 1,
                Some(residue) => {
                    let depth = chain.add_strong(residue);
                    chain.rebuild_from(0);
                    k = depth + 1;
                }
            }
        }
        chain
    }

    /// Adds a strong generator, extending the base if it fixes every base
    /// point. Returns the deepest level whose generators changed.
    fn add_strong(&mut self, g: Perm) -> usize {
        let fixed = self.levels.iter().take_while(|l| g[l.point] == l.point).count();
        if fixed == self.levels.len() {
            let moved = g.iter().enumerate().find(|&(x, &y)| x != y).map(|(x, _)| x).expect("non-identity");
            self.levels.push(Level { point: moved, orbit: Vec::new(), transversal: Vec::new() });
        }
        self.strong.push(g);
        fixed
    }

    fn level_generators(&self, level: usize) -> Vec<Perm> {
        let base: Vec<usize> = self.levels[..level].iter().map(|l| l.point).collect();
        self.strong.iter().filter(|g| base.iter().all(|&b| g[b] == b)).cloned().collect()
    }

    fn rebuild_from(&mut self, start: usize) {
        for k in start..self.levels.len() {
            let gens = self.level_generators(k);
            let point = self.levels[k].point;
            let mut transversal: Vec<Option<(Perm, Perm)>> = vec![None; self.n];
            transversal[point] = Some((identity(self.n), identity(self.n)));
            let mut orbit = vec![point];
            let mut idx = 0;
            while idx < orbit.len() {
                let x = orbit[idx];
                let ux = transversal[x].as_ref().expect("orbit points have transversals").0.clone();
                for g in &gens {
                    let y = g[x];
                    if transversal[y].is_none() {
                        let uy = compose(&ux, g);
                        let uy_inv = inverse(&uy);
                        transversal[y] = Some((uy, uy_inv));
                        orbit.push(y);
                    }
                }
                idx += 1;
            }
            self.levels[k].orbit = orbit;
            self.levels[k].transversal = transversal;
        }
    }

    fn nontrivial_schreier_residue(&self, level: usize) -> Option<Perm> {
        let gens = self.level_generators(level);
        let l = &self.levels[level];
        for &x in &l.orbit {
            let (ux, _) = l.transversal[x].as_ref().expect("orbit point");
            for g in &gens {
                let y = g[x];
                let (_, uy_inv) = l.transversal[y].as_ref().expect("orbit is closed");
                let h = compose(&compose(ux, g), uy_inv);
                let (residue, _) = self.sift(h, level + 1);
                if !is_identity(&residue) {
                    return Some(residue);
                }
            }
        }
        None
    }

    /// Strip `h` through the levels from `start`; returns the residue and
    /// the level where stripping stopped.
    fn sift(&self, mut h: Perm, start: usize) -> (Perm, usize) {
        for (k, l) in self.levels.iter().enumerate().skip(start) {
            let beta = h[l.point];
            match &l.transversal[beta] {
                None => return (h, k),
                Some((_, u_inv)) => h = compose(&h, u_inv),
            }
        }
        (h, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().map(|l| BigUint::from(l.orbit.len())).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        g.len() == self.n && is_identity(&self.sift(g.to_vec(), 0).0)
    }

    /// Every group element, when the order is at most `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Perm>> {
        if self.order() > BigUint::from(limit) {
            return None;
        }
        let mut out = vec![identity(self.n)];
        // g = u_{L-1} · … · u_0 (deepest level applied first)
        for l in &self.levels {
            let mut next = Vec::with_capacity(out.len() * l.orbit.len());
            for g in &out {
                for &x in &l.orbit {
                    let (u, _) = l.transversal[x].as_ref().expect("orbit point");
                    next.push(compose(u, g));
                }
            }
            out = next;
        }
        Some(out)
    }
}
