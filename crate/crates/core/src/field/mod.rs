//! Table-driven arithmetic in `F_{p^m} = F_p[y]/<g(y)>`.
//!
//! Elements are stored as the integer `d_0 + d_1 p + ... + d_{m-1} p^{m-1}`
//! of their little-endian digit vector, so `[1,2]` in `F_9` is the element
//! `1 + 2y` with index `7`. All operations go through a shared
//! [`FieldContext`], which owns the addition and multiplication tables.

mod poly;

pub use poly::FieldPoly;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default upper bound on the field order `p^m`.
pub const DEFAULT_FIELD_CAP: u32 = 256;
/// Hard ceiling on the field order; keeps the `q * q` tables in memory.
pub const MAX_FIELD_ORDER: u32 = 1024;

/// An element of `F_{p^m}`, meaningful only together with its [`FieldContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FieldElement(pub(crate) u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Integer encoding of the digit vector.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add_t: Vec<u16>,
    mul_t: Vec<u16>,
    neg_t: Vec<u16>,
    inv_t: Vec<u16>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldContext {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl FieldContext {
    /// `F_{p^m}` with the default modulus: the monic irreducible of degree `m`
    /// whose lower coefficients have the smallest integer encoding.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::with_modulus(p, m, None, DEFAULT_FIELD_CAP)
    }

    /// Builds `F_{p^m}` with an explicit modulus (digits `c_0..c_m`, monic)
    /// or the default one, refusing orders above `cap`.
    pub fn with_modulus(p: u32, m: u32, modulus: Option<&[u32]>, cap: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidInput("extension degree m must be >= 1".into()));
        }
        let q = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        let limit = cap.min(MAX_FIELD_ORDER) as u128;
        if q > limit {
            return Err(Error::TooLarge {
                what: "field order p^m".into(),
                size: q,
                cap: limit,
            });
        }
        let q = q as u32;
        let prime = Self::prime_unchecked(p);
        let modulus = match modulus {
            Some(digits) => {
                if digits.len() != m as usize + 1 {
                    return Err(Error::InvalidInput(format!(
                        "field modulus must have {} coefficients, got {}",
                        m + 1,
                        digits.len()
                    )));
                }
                if digits.iter().any(|&d| d >= p) {
                    return Err(Error::InvalidInput("modulus digit out of range".into()));
                }
                if digits[m as usize] != 1 {
                    return Err(Error::InvalidInput("field modulus must be monic".into()));
                }
                let f = FieldPoly::new(digits.iter().map(|&d| FieldElement(d as u16)).collect());
                if !prime.is_irreducible(&f) {
                    return Err(Error::InvalidInput("field modulus is not irreducible over F_p".into()));
                }
                digits.to_vec()
            }
            None => {
                let f = prime
                    .monic_polys(m as usize)
                    .find(|f| prime.is_irreducible(f))
                    .expect("irreducible polynomials exist in every degree");
                f.coeffs().iter().map(|c| c.0 as u32).collect()
            }
        };
        if m == 1 {
            return Ok(Self::prime_unchecked(p));
        }
        Ok(Self::build(p, m, q, modulus))
    }

    fn prime_unchecked(p: u32) -> Self {
        Self::build(p, 1, p, vec![0, 1])
    }

    fn build(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qs = q as usize;
        let digits_of = |mut v: u32| -> Vec<u32> {
            (0..m)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let encode = |ds: &[u32]| -> u16 { ds.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16 };
        let all: Vec<Vec<u32>> = (0..q).map(digits_of).collect();
        let mut add_t = vec![0u16; qs * qs];
        let mut mul_t = vec![0u16; qs * qs];
        let mut neg_t = vec![0u16; qs];
        let mm = m as usize;
        for a in 0..qs {
            neg_t[a] = encode(&all[a].iter().map(|&d| (p - d) % p).collect::<Vec<_>>());
            for b in 0..qs {
                let s: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
                add_t[a * qs + b] = encode(&s);
                // schoolbook product followed by reduction modulo the monic modulus
                let mut prod = vec![0u32; 2 * mm - 1];
                for (i, &x) in all[a].iter().enumerate() {
                    for (j, &y) in all[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for e in (mm..prod.len()).rev() {
                    let c = prod[e];
                    if c == 0 {
                        continue;
                    }
                    for i in 0..mm {
                        let sub = c * modulus[i] % p;
                        prod[e - mm + i] = (prod[e - mm + i] + p - sub) % p;
                    }
                    prod[e] = 0;
                }
                prod.truncate(mm);
                mul_t[a * qs + b] = encode(&prod);
            }
        }
        let mut inv_t = vec![0u16; qs];
        for a in 1..qs {
            for b in 1..qs {
                if mul_t[a * qs + b] == 1 {
                    inv_t[a] = b as u16;
                    break;
                }
            }
        }
        FieldContext {
            p,
            m,
            q,
            modulus,
            add_t,
            mul_t,
            neg_t,
            inv_t,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `p^m`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Digits `c_0..c_m` of the defining modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u16)
    }

    pub fn from_index(&self, idx: usize) -> Result<FieldElement> {
        if idx >= self.q as usize {
            return Err(Error::InvalidInput(format!(
                "field index {idx} out of range for F_{}",
                self.q
            )));
        }
        Ok(FieldElement(idx as u16))
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() > self.m as usize {
            return Err(Error::InvalidInput(format!(
                "expected at most {} digits, got {}",
                self.m,
                digits.len()
            )));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= self.p) {
            return Err(Error::InvalidInput(format!("digit {d} is not reduced mod {}", self.p)));
        }
        let v = digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d);
        Ok(FieldElement(v as u16))
    }

    /// Little-endian digit vector of length exactly `m`.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0 as u32;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u16).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_t[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.inv_t[a.0 as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// The unique `b` with `b^{p^s} = a`.
    ///
    /// With `s = m q + r` this is `a^{p^{m-r}}`; since the Frobenius has order
    /// `m`, only `(m - r) mod m` applications are needed.
    pub fn ps_root(&self, a: FieldElement, s: u32) -> FieldElement {
        let r = s % self.m;
        let steps = (self.m - r) % self.m;
        (0..steps).fold(a, |b, _| self.frobenius(b))
    }

    /// `a^{p^s}`.
    pub fn frobenius_pow(&self, a: FieldElement, s: u32) -> FieldElement {
        (0..s % self.m).fold(a, |b, _| self.frobenius(b))
    }

    /// Checks whether `a` is an `n`-th power and returns the witness with the
    /// smallest index when it is.
    ///
    /// Uses `a^{(q-1)/gcd(n, q-1)} = 1` as the criterion; the witness comes from
    /// an exhaustive scan.
    pub fn nth_root(&self, a: FieldElement, n: u64) -> Result<Option<FieldElement>> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        if gcd(n, self.p as u64) != 1 {
            return Err(Error::UnsupportedParameter(format!(
                "gcd(n, p) = gcd({n}, {}) != 1",
                self.p
            )));
        }
        if a.is_zero() {
            return Ok(Some(FieldElement::ZERO));
        }
        let order = self.q as u64 - 1;
        let g = gcd(n, order);
        if self.pow(a, order / g) != FieldElement::ONE {
            return Ok(None);
        }
        let w = self.elements().find(|&b| self.pow(b, n) == a);
        match w {
            Some(b) => Ok(Some(b)),
            None => Err(Error::Paradox(format!(
                "power criterion holds for index {} but no {n}-th root exists",
                a.0
            ))),
        }
    }

    pub fn is_nth_power(&self, a: FieldElement, n: u64) -> Result<bool> {
        Ok(self.nth_root(a, n)?.is_some())
    }

    /// Text form `[d0,d1,...]`.
    pub fn format(&self, a: FieldElement) -> String {
        let ds: Vec<String> = self.digits(a).iter().map(|d| d.to_string()).collect();
        format!("[{}]", ds.join(","))
    }
}
