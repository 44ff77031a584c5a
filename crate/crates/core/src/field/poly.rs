use super::{FieldContext, FieldElement};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dense univariate polynomial over `F_{p^m}`, constant term first.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FieldPoly {
    coeffs: Vec<FieldElement>,
}

impl FieldPoly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn zero() -> Self {
        FieldPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FieldPoly::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Self {
        FieldPoly::new(vec![c])
    }

    /// `c * x^e`.
    pub fn monomial(c: FieldElement, e: usize) -> Self {
        let mut v = vec![FieldElement::ZERO; e + 1];
        v[e] = c;
        FieldPoly::new(v)
    }

    pub fn x() -> Self {
        FieldPoly::monomial(FieldElement::ONE, 1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the end.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    /// Sort key: degree first, then coefficients from the top down.
    pub fn order_key(&self) -> (usize, Vec<u16>) {
        (self.coeffs.len(), self.coeffs.iter().rev().map(|c| c.0).collect())
    }
}

impl FieldContext {
    pub fn poly_add(&self, a: &FieldPoly, b: &FieldPoly) -> FieldPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        FieldPoly::new((0..n).map(|i| self.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn poly_neg(&self, a: &FieldPoly) -> FieldPoly {
        FieldPoly::new(a.coeffs.iter().map(|&c| self.neg(c)).collect())
    }

    pub fn poly_sub(&self, a: &FieldPoly, b: &FieldPoly) -> FieldPoly {
        self.poly_add(a, &self.poly_neg(b))
    }

    pub fn poly_scale(&self, a: &FieldPoly, c: FieldElement) -> FieldPoly {
        FieldPoly::new(a.coeffs.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &FieldPoly, b: &FieldPoly) -> FieldPoly {
        if a.is_zero() || b.is_zero() {
            return FieldPoly::zero();
        }
        let mut out = vec![FieldElement::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        FieldPoly::new(out)
    }

    pub fn poly_pow(&self, a: &FieldPoly, mut e: u64) -> FieldPoly {
        let mut base = a.clone();
        let mut acc = FieldPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_mul(&base, &base);
            }
        }
        acc
    }

    /// Quotient and remainder of `a / b`.
    pub fn poly_divrem(&self, a: &FieldPoly, b: &FieldPoly) -> Result<(FieldPoly, FieldPoly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.inv(b.leading())?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((FieldPoly::zero(), a.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - db];
        for e in (db..rem.len()).rev() {
            let c = self.mul(rem[e], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[e - db] = c;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                rem[e - db + i] = self.sub(rem[e - db + i], self.mul(c, bc));
            }
        }
        rem.truncate(db);
        Ok((FieldPoly::new(quot), FieldPoly::new(rem)))
    }

    pub fn poly_rem(&self, a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly> {
        Ok(self.poly_divrem(a, b)?.1)
    }

    pub fn poly_monic(&self, a: &FieldPoly) -> FieldPoly {
        if a.is_zero() {
            return FieldPoly::zero();
        }
        let inv = self.inv(a.leading()).expect("nonzero leading coefficient");
        self.poly_scale(a, inv)
    }

    /// Extended gcd: returns `(g, s, t)` with `s a + t b = g` and `g` monic
    /// (or zero when both inputs are zero).
    pub fn poly_xgcd(&self, a: &FieldPoly, b: &FieldPoly) -> (FieldPoly, FieldPoly, FieldPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (FieldPoly::one(), FieldPoly::zero());
        let (mut t0, mut t1) = (FieldPoly::zero(), FieldPoly::one());
        while !r1.is_zero() {
            let (q, r) = self.poly_divrem(&r0, &r1).expect("nonzero divisor");
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.inv(r0.leading()).expect("nonzero");
        (
            self.poly_scale(&r0, inv),
            self.poly_scale(&s0, inv),
            self.poly_scale(&t0, inv),
        )
    }

    pub fn poly_gcd(&self, a: &FieldPoly, b: &FieldPoly) -> FieldPoly {
        self.poly_xgcd(a, b).0
    }

    pub fn poly_eval(&self, a: &FieldPoly, x: FieldElement) -> FieldElement {
        a.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// All monic polynomials of degree `d`, ordered by the integer encoding of
    /// their lower coefficients read from the top down.
    pub fn monic_polys(&self, d: usize) -> impl Iterator<Item = FieldPoly> + '_ {
        let q = self.order() as u64;
        let total = q.checked_pow(d as u32).unwrap_or(u64::MAX);
        (0..total).map(move |mut v| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push(FieldElement((v % q) as u16));
                v /= q;
            }
            c.push(FieldElement::ONE);
            FieldPoly::new(c)
        })
    }

    /// Irreducibility by trial division with every monic polynomial of degree
    /// at most `deg f / 2`.
    pub fn is_irreducible(&self, f: &FieldPoly) -> bool {
        let Some(d) = f.degree() else { return false };
        if d == 0 {
            return false;
        }
        for e in 1..=d / 2 {
            for g in self.monic_polys(e) {
                if self.poly_rem(f, &g).expect("monic divisor").is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Factorization of a monic polynomial into monic irreducibles with
    /// multiplicities, sorted by degree and then coefficients.
    pub fn factorize(&self, f: &FieldPoly) -> Result<Vec<(FieldPoly, usize)>> {
        if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput(
                "factorize expects a monic polynomial of degree >= 1".into(),
            ));
        }
        let mut rem = f.clone();
        let mut out = Vec::new();
        let mut e = 1usize;
        while rem.degree().unwrap_or(0) >= 2 * e {
            for g in self.monic_polys(e) {
                let mut mult = 0;
                loop {
                    let (q, r) = self.poly_divrem(&rem, &g)?;
                    if !r.is_zero() {
                        break;
                    }
                    rem = q;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((g, mult));
                }
                if rem.degree().unwrap_or(0) < 2 * e {
                    break;
                }
            }
            e += 1;
        }
        if rem.degree().unwrap_or(0) >= 1 {
            // what's left has no factor of degree <= half its own, so it is
            // irreducible; it may repeat a factor only if it was already found
            match out.iter_mut().find(|(g, _)| *g == rem) {
                Some((_, mult)) => *mult += 1,
                None => out.push((rem, 1)),
            }
        }
        out.sort_by_key(|(g, _)| g.order_key());
        Ok(out)
    }

    pub fn poly_format(&self, a: &FieldPoly) -> String {
        let cs: Vec<String> = a.coeffs.iter().map(|&c| self.format(c)).collect();
        format!("[{}]", cs.join(","))
    }
}
