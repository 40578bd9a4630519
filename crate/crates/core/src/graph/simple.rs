use serde_json::{json, Value};

/// A vertex permutation as an image array: `p[v]` is the image of `v`.
pub type Perm = Vec<usize>;

/// Undirected simple graph with sorted adjacency lists and an adjacency
/// bit matrix for constant-time edge tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        SimpleGraph { n, words, bits: vec![0; n * words], adj: vec![Vec::new(); n], edges: 0 }
    }

    /// Loops and repeated edges are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = SimpleGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v || self.has_edge(u, v) {
            return;
        }
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        self.edges += 1;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        self.edges == self.n * self.n.saturating_sub(1) / 2
    }

    /// Sorted list of distinct vertex degrees.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn to_json(&self) -> Value {
        json!({ "vertices": self.n, "edges": self.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>() })
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 0..self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Standard small graphs used to exercise the automorphism engine.
pub mod fixtures {
    use super::SimpleGraph;

    pub fn complete(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (0..n).map(|k| (k, (k + 1) % n)))
    }

    pub fn path(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (1..n).map(|k| (k - 1, k)))
    }

    pub fn star(leaves: usize) -> SimpleGraph {
        SimpleGraph::from_edges(leaves + 1, (1..=leaves).map(|k| (0, k)))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> SimpleGraph {
        SimpleGraph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    /// The 3-cube on vertices `0..8`, adjacent when differing in one bit.
    pub fn cube() -> SimpleGraph {
        SimpleGraph::from_edges(8, (0..8).flat_map(|u| [1, 2, 4].into_iter().map(move |b| (u, u ^ b))))
    }

    /// Triangular prism: two triangles joined by a matching.
    pub fn prism() -> SimpleGraph {
        SimpleGraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
    }

    /// Outer 5-cycle, inner pentagram, spokes.
    pub fn petersen() -> SimpleGraph {
        let outer = (0..5).map(|k| (k, (k + 1) % 5));
        let inner = (0..5).map(|k| (5 + k, 5 + (k + 2) % 5));
        let spokes = (0..5).map(|k| (k, k + 5));
        SimpleGraph::from_edges(10, outer.chain(inner).chain(spokes))
    }

    /// Graph on `n` vertices with each pair joined with probability `p`.
    pub fn random(n: usize, p: f64, seed: u64) -> SimpleGraph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g = SimpleGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }
}
