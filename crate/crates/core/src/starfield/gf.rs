use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::Value;

use super::{BackendDescriptor, FieldAutomorphism, StarField};
use crate::error::{Error, Result};

/// Largest supported field order q².
const MAX_ORDER: u32 = 1 << 16;
/// Below this order the addition table is precomputed.
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// An element of GF(q²), encoded as `Σ c_k p^k` where `c_k` are the
/// coefficients of its polynomial representative (constant term first).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfElem(pub u32);

impl fmt::Debug for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    p: u32,
    exponent: u32,
    q: u32,
    order: u32,
    degree: usize,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    conj: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// The field GF(q²), q = p^exponent, with involution `x ↦ x^q`.
#[derive(Clone)]
pub struct GfSquare {
    t: Arc<Tables>,
}

impl fmt::Debug for GfSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^2)", self.t.q)
    }
}

impl PartialEq for GfSquare {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.exponent == other.t.exponent && self.t.modulus == other.t.modulus
    }
}

impl Eq for GfSquare {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn digits(mut x: u32, p: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|b| a * b % p == 1).expect("nonzero residue mod prime")
}

/// Remainder of `a` modulo monic-or-not `b` over GF(p); polynomials are
/// coefficient vectors, constant term first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let lead_inv = inv_mod(b[db], p);
    while let Some(dr) = r.iter().rposition(|&c| c != 0) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lead_inv % p;
        let shift = dr - db;
        for (k, &bc) in b.iter().enumerate().take(db + 1) {
            r[k + shift] = (r[k + shift] + p * p - factor * bc % p) % p;
        }
    }
    r.truncate(db.max(1));
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(n, 0);
    r
}

impl GfSquare {
    /// GF(q²) for q = p^exponent. The modulus is the first monic irreducible
    /// polynomial of degree 2·exponent in lexicographic (encoding) order.
    pub fn new(p: u32, exponent: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if exponent == 0 {
            return Err(Error::InvalidField("exponent must be positive".into()));
        }
        let degree = 2 * exponent as usize;
        if (p as u64).checked_pow(degree as u32).is_none_or(|o| o > MAX_ORDER as u64) {
            return Err(Error::InvalidField(format!("GF({p}^{degree}) is too large")));
        }
        let modulus = (0..p.pow(degree as u32))
            .map(|low| {
                let mut f = digits(low, p, degree);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree");
        Self::with_modulus(p, exponent, modulus)
    }

    /// GF(q²) with an explicit monic irreducible modulus of degree 2·exponent.
    pub fn with_modulus(p: u32, exponent: u32, modulus: Vec<u32>) -> Result<Self> {
        let degree = 2 * exponent as usize;
        if !is_prime(p) || modulus.len() != degree + 1 || modulus[degree] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus must be monic of degree 2·exponent over GF(p)".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let order = p.pow(degree as u32);
        let q = p.pow(exponent);

        let mut exp = Vec::new();
        for candidate in 2..order {
            let g = digits(candidate, p, degree);
            let mut powers = vec![1u32];
            let mut cur = digits(1, p, degree);
            loop {
                cur = poly_mulmod(&cur, &g, &modulus, p);
                let enc = encode(&cur, p);
                if enc == 1 {
                    break;
                }
                powers.push(enc);
            }
            if powers.len() as u32 == order - 1 {
                exp = powers;
                break;
            }
        }
        debug_assert_eq!(exp.len() as u32, order - 1);
        let mut log = vec![0u32; order as usize];
        for (k, &x) in exp.iter().enumerate() {
            log[x as usize] = k as u32;
        }
        let m = (order - 1) as u64;
        let conj = (0..order)
            .map(|x| if x == 0 { 0 } else { exp[(log[x as usize] as u64 * q as u64 % m) as usize] })
            .collect();
        let neg = (0..order)
            .map(|x| encode(&digits(x, p, degree).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let add = (order <= ADD_TABLE_LIMIT).then(|| {
            let mut table = vec![0u32; (order * order) as usize];
            for a in 0..order {
                let da = digits(a, p, degree);
                for b in 0..order {
                    let db = digits(b, p, degree);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    table[(a * order + b) as usize] = encode(&s, p);
                }
            }
            table
        });
        Ok(GfSquare {
            t: Arc::new(Tables { p, exponent, q, order, degree, modulus, exp, log, conj, neg, add }),
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.t.p
    }

    pub fn exponent(&self) -> u32 {
        self.t.exponent
    }

    /// Order q of the fixed subfield.
    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Order q² of the field.
    pub fn order(&self) -> u32 {
        self.t.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> GfElem {
        GfElem(self.t.exp.get(1).copied().unwrap_or(1))
    }

    pub fn coefficients(&self, a: GfElem) -> Vec<u32> {
        digits(a.0, self.t.p, self.t.degree)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<GfElem> {
        if c.len() > self.t.degree || c.iter().any(|&d| d >= self.t.p) {
            return Err(Error::Json(format!("bad coefficient vector {c:?}")));
        }
        Ok(GfElem(encode(c, self.t.p)))
    }

    pub fn pow(&self, a: GfElem, e: u64) -> GfElem {
        if a.0 == 0 {
            return if e == 0 { GfElem(1) } else { GfElem(0) };
        }
        let m = (self.t.order - 1) as u64;
        GfElem(self.t.exp[(self.t.log[a.0 as usize] as u64 * (e % m) % m) as usize])
    }
}

impl StarField for GfSquare {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        GfElem(0)
    }

    fn one(&self) -> GfElem {
        GfElem(1)
    }

    fn from_i64(&self, n: i64) -> GfElem {
        GfElem(n.rem_euclid(self.t.p as i64) as u32)
    }

    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        match &self.t.add {
            Some(table) => GfElem(table[(a.0 * self.t.order + b.0) as usize]),
            None => {
                let (p, n) = (self.t.p, self.t.degree);
                let s: Vec<u32> = digits(a.0, p, n).iter().zip(digits(b.0, p, n)).map(|(x, y)| (x + y) % p).collect();
                GfElem(encode(&s, p))
            }
        }
    }

    fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem(0);
        }
        let t = &self.t;
        let s = t.log[a.0 as usize] + t.log[b.0 as usize];
        GfElem(t.exp[(s % (t.order - 1)) as usize])
    }

    fn neg(&self, a: &GfElem) -> GfElem {
        GfElem(self.t.neg[a.0 as usize])
    }

    fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if a.0 == 0 {
            return None;
        }
        let t = &self.t;
        let m = t.order - 1;
        Some(GfElem(t.exp[((m - t.log[a.0 as usize]) % m) as usize]))
    }

    fn conj(&self, a: &GfElem) -> GfElem {
        GfElem(self.t.conj[a.0 as usize])
    }

    fn is_zero(&self, a: &GfElem) -> bool {
        a.0 == 0
    }

    fn field_automorphisms(&self) -> Vec<FieldAutomorphism> {
        (0..self.t.degree as u32).map(|power| FieldAutomorphism { power }).collect()
    }

    fn apply_automorphism(&self, auto: FieldAutomorphism, a: &GfElem) -> GfElem {
        let e = (self.t.p as u64).pow(auto.power % self.t.degree as u32);
        self.pow(*a, e)
    }

    fn elements(&self) -> Option<Vec<GfElem>> {
        Some((0..self.t.order).map(GfElem).collect())
    }

    fn sample_scalars(&self) -> Vec<GfElem> {
        (0..self.t.order).map(GfElem).collect()
    }

    fn random_elem(&self, rng: &mut dyn RngCore, _height: u32) -> GfElem {
        GfElem(rng.gen_range(0..self.t.order))
    }

    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor::Gf { p: self.t.p, exponent: self.t.exponent, modulus: self.t.modulus.clone() }
    }

    fn elem_to_json(&self, a: &GfElem) -> Value {
        Value::Array(self.coefficients(*a).into_iter().map(Value::from).collect())
    }

    fn elem_from_json(&self, v: &Value) -> Result<GfElem> {
        let arr = v.as_array().ok_or_else(|| Error::Json(format!("expected coefficient vector, got {v}")))?;
        let coeffs = arr
            .iter()
            .map(|c| c.as_u64().map(|c| c as u32).ok_or_else(|| Error::Json(format!("bad coefficient {c}"))))
            .collect::<Result<Vec<_>>>()?;
        self.from_coefficients(&coeffs)
    }

    fn format_elem(&self, a: &GfElem) -> String {
        let c = self.coefficients(*a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &d)| d != 0)
            .map(|(k, &d)| match (k, d) {
                (0, d) => d.to_string(),
                (1, 1) => "x".to_string(),
                (1, d) => format!("{d}x"),
                (k, 1) => format!("x^{k}"),
                (k, d) => format!("{d}x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// A non-negative integer `k < q` names the `k`-th fixed element in
    /// encoding order; for prime q this is the residue `k`.
    fn parse_fixed(&self, s: &str) -> Result<GfElem> {
        let k: usize = s.trim().parse().map_err(|_| Error::Json(format!("bad fixed-field index {s:?}")))?;
        let fixed = self.fixed_elements().expect("finite");
        fixed
            .get(k)
            .copied()
            .ok_or_else(|| Error::SignatureDoesNotFit(format!("fixed-field index {k} exceeds q = {}", self.t.q)))
    }
}
