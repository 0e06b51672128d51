//! Integer Laurent polynomials in `v` and `z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly2 {
    // (v exponent, z exponent) -> nonzero coefficient
    terms: BTreeMap<(i32, i32), i64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no range")]
    Zero,
    #[error("cannot parse term '{0}'")]
    Parse(String),
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn monomial(coeff: i64, v: i32, z: i32) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert((v, z), coeff);
        }
        LaurentPoly2 { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((i32, i32), i64)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    /// `(v^-1 - v) z^-1`, the factor contributed by one extra split circle.
    pub fn split_factor() -> Self {
        Self::from_terms([((-1, -1), 1), ((1, -1), -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coefficient(&self, v: i32, z: i32) -> i64 {
        self.terms.get(&(v, z)).copied().unwrap_or(0)
    }

    fn add_term(&mut self, key: (i32, i32), c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(key).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    /// Multiplies by `c v^dv z^dz`.
    pub fn shift(&self, c: i64, dv: i32, dz: i32) -> Self {
        if c == 0 {
            return Self::zero();
        }
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(v, z), &k)| ((v + dv, z + dz), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Substitutes `v -> v^-1`, `z -> -z`: the polynomial of the mirror image.
    pub fn mirror_transform(&self) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(v, z), &c)| ((-v, z), if z.rem_euclid(2) == 1 { -c } else { c }))
                .collect(),
        }
    }

    /// `(e, E)`: least and greatest `v` exponent.
    pub fn v_range(&self) -> Result<(i32, i32), PolyError> {
        let lo = self
            .terms
            .keys()
            .map(|k| k.0)
            .min()
            .ok_or(PolyError::Zero)?;
        let hi = self
            .terms
            .keys()
            .map(|k| k.0)
            .max()
            .ok_or(PolyError::Zero)?;
        Ok((lo, hi))
    }

    /// Coefficient of `v^k` as a polynomial in `z` (pairs of exponent, coefficient).
    pub fn v_coefficient(&self, k: i32) -> Vec<(i32, i64)> {
        self.terms
            .iter()
            .filter(|(key, _)| key.0 == k)
            .map(|(key, &c)| (key.1, c))
            .collect()
    }

    /// True when all exponents are even and `z` exponents are non-negative,
    /// as for the polynomial of a knot.
    pub fn has_knot_shape(&self) -> bool {
        self.terms
            .keys()
            .all(|&(v, z)| v % 2 == 0 && z % 2 == 0 && z >= 0)
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            out.add_term(k, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(v1, z1), &c1) in &self.terms {
            for (&(v2, z2), &c2) in &rhs.terms {
                out.add_term((v1 + v2, z1 + z2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        self.shift(-1, 0, 0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly2 {
            type Output = LaurentPoly2;
            fn $m(self, rhs: LaurentPoly2) -> LaurentPoly2 {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Canonical text: `c*v^i*z^j` terms in (v, z) order joined by ` + `.
impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(v, z), &c)| format!("{c}*v^{v}*z^{z}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for LaurentPoly2 {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for part in s.split(" + ") {
            let bad = || PolyError::Parse(part.to_string());
            let mut it = part.trim().split('*');
            let c: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let v: i32 = it
                .next()
                .and_then(|t| t.strip_prefix("v^"))
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            let z: i32 = it
                .next()
                .and_then(|t| t.strip_prefix("z^"))
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            if it.next().is_some() || c == 0 {
                return Err(bad());
            }
            p.add_term((v, z), c);
        }
        Ok(p)
    }
}

impl serde::Serialize for LaurentPoly2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
