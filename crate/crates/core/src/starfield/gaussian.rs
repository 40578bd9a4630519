use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, RngCore};
use serde_json::Value;

use super::{BackendDescriptor, FieldAutomorphism, StarField};
use crate::error::{Error, Result};

/// An element `re + im·i` of ℚ(i) with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn integer(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(num.into(), den.into()),
            im: BigRational::zero(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Max absolute value of the numerators and denominators of both parts.
    pub fn height(&self) -> BigInt {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()]
            .into_iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_gaussian(self))
    }
}

fn format_gaussian(x: &GaussianRational) -> String {
    match (x.re.is_zero(), x.im.is_zero()) {
        (_, true) => x.re.to_string(),
        (true, false) => format!("{}i", x.im),
        (false, false) => {
            if x.im.is_negative() {
                format!("{}-{}i", x.re, -x.im.clone())
            } else {
                format!("{}+{}i", x.re, x.im)
            }
        }
    }
}

fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Json(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// The field ℚ(i) with complex conjugation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GaussianRationals;

impl StarField for GaussianRationals {
    type Elem = GaussianRational;

    fn zero(&self) -> GaussianRational {
        GaussianRational::integer(0, 0)
    }

    fn one(&self) -> GaussianRational {
        GaussianRational::integer(1, 0)
    }

    fn from_i64(&self, n: i64) -> GaussianRational {
        GaussianRational::integer(n, 0)
    }

    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&a.re + &b.re, &a.im + &b.im)
    }

    fn sub(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&a.re - &b.re, &a.im - &b.im)
    }

    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &a.re * &b.re - &a.im * &b.im,
            &a.re * &b.im + &a.im * &b.re,
        )
    }

    fn neg(&self, a: &GaussianRational) -> GaussianRational {
        GaussianRational::new(-a.re.clone(), -a.im.clone())
    }

    fn inv(&self, a: &GaussianRational) -> Option<GaussianRational> {
        let n = &a.re * &a.re + &a.im * &a.im;
        if n.is_zero() {
            return None;
        }
        Some(GaussianRational::new(&a.re / &n, -(&a.im / &n)))
    }

    fn conj(&self, a: &GaussianRational) -> GaussianRational {
        GaussianRational::new(a.re.clone(), -a.im.clone())
    }

    fn is_zero(&self, a: &GaussianRational) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }

    fn is_fixed(&self, a: &GaussianRational) -> bool {
        a.im.is_zero()
    }

    fn field_automorphisms(&self) -> Vec<FieldAutomorphism> {
        vec![FieldAutomorphism { power: 0 }, FieldAutomorphism { power: 1 }]
    }

    fn apply_automorphism(&self, auto: FieldAutomorphism, a: &GaussianRational) -> GaussianRational {
        if auto.power % 2 == 0 {
            a.clone()
        } else {
            self.conj(a)
        }
    }

    fn elements(&self) -> Option<Vec<GaussianRational>> {
        None
    }

    fn fixed_elements(&self) -> Option<Vec<GaussianRational>> {
        None
    }

    fn sample_scalars(&self) -> Vec<GaussianRational> {
        [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (2, 0), (-2, 0), (1, 1), (1, -1)]
            .into_iter()
            .map(|(re, im)| GaussianRational::integer(re, im))
            .collect()
    }

    fn random_elem(&self, rng: &mut dyn RngCore, height: u32) -> GaussianRational {
        let h = height as i64;
        GaussianRational::integer(rng.gen_range(-h..=h), rng.gen_range(-h..=h))
    }

    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor::Qi
    }

    fn elem_to_json(&self, a: &GaussianRational) -> Value {
        Value::Array(vec![
            Value::String(rational_to_string(&a.re)),
            Value::String(rational_to_string(&a.im)),
        ])
    }

    fn elem_from_json(&self, v: &Value) -> Result<GaussianRational> {
        let part = |p: &Value| -> Result<BigRational> {
            match p {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(|i| BigRational::from_integer(i.into()))
                    .ok_or_else(|| Error::Json(format!("bad number {n}"))),
                other => Err(Error::Json(format!("expected rational, got {other}"))),
            }
        };
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                Ok(GaussianRational::new(part(&parts[0])?, part(&parts[1])?))
            }
            Value::String(_) | Value::Number(_) => Ok(GaussianRational::new(part(v)?, BigRational::zero())),
            other => Err(Error::Json(format!("expected [re, im], got {other}"))),
        }
    }

    fn format_elem(&self, a: &GaussianRational) -> String {
        format_gaussian(a)
    }

    fn parse_fixed(&self, s: &str) -> Result<GaussianRational> {
        Ok(GaussianRational::new(parse_rational(s)?, BigRational::zero()))
    }

    fn norm(&self, a: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&a.re * &a.re + &a.im * &a.im, BigRational::zero())
    }
}
