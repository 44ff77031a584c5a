//! The chain ring `R^t = F_{p^m}[u]/<u^t>`.

use crate::error::{invalid, Error, Result};
use crate::field::{gcd, FieldContext, FieldElement};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRing {
    field: Arc<FieldContext>,
    t: usize,
}

/// `parts[i]` is the coefficient of `u^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainRingElement {
    pub(crate) parts: Vec<FieldElement>,
}

impl ChainRingElement {
    pub fn parts(&self) -> &[FieldElement] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> FieldElement {
        self.parts.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|c| c.is_zero())
    }

    /// Smallest `i` with a nonzero `u^i` coefficient.
    pub fn u_valuation(&self) -> Option<usize> {
        self.parts.iter().position(|c| !c.is_zero())
    }
}

impl ChainRing {
    pub fn new(field: Arc<FieldContext>, t: usize) -> Result<Self> {
        if t == 0 {
            return invalid("nilpotency order t must be >= 1");
        }
        Ok(ChainRing { field, t })
    }

    pub fn field(&self) -> &Arc<FieldContext> {
        &self.field
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn zero(&self) -> ChainRingElement {
        ChainRingElement {
            parts: vec![FieldElement::ZERO; self.t],
        }
    }

    pub fn one(&self) -> ChainRingElement {
        self.scalar(FieldElement::ONE)
    }

    pub fn scalar(&self, c: FieldElement) -> ChainRingElement {
        let mut z = self.zero();
        z.parts[0] = c;
        z
    }

    /// `u^i` (zero once `i >= t`).
    pub fn u_pow(&self, i: usize) -> ChainRingElement {
        let mut z = self.zero();
        if i < self.t {
            z.parts[i] = FieldElement::ONE;
        }
        z
    }

    /// Builds an element from its parts; missing high parts are zero.
    pub fn element(&self, parts: &[FieldElement]) -> Result<ChainRingElement> {
        if parts.len() > self.t {
            return invalid(format!("{} parts given for t = {}", parts.len(), self.t));
        }
        if parts.iter().any(|c| c.index() >= self.field.order() as usize) {
            return invalid("field element out of range");
        }
        let mut v = parts.to_vec();
        v.resize(self.t, FieldElement::ZERO);
        Ok(ChainRingElement { parts: v })
    }

    fn check(&self, a: &ChainRingElement) -> Result<()> {
        if a.parts.len() != self.t {
            return invalid("chain ring element has the wrong length");
        }
        Ok(())
    }

    pub fn add(&self, a: &ChainRingElement, b: &ChainRingElement) -> ChainRingElement {
        ChainRingElement {
            parts: a
                .parts
                .iter()
                .zip(&b.parts)
                .map(|(&x, &y)| self.field.add(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &ChainRingElement) -> ChainRingElement {
        ChainRingElement {
            parts: a.parts.iter().map(|&x| self.field.neg(x)).collect(),
        }
    }

    pub fn sub(&self, a: &ChainRingElement, b: &ChainRingElement) -> ChainRingElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &ChainRingElement, c: FieldElement) -> ChainRingElement {
        ChainRingElement {
            parts: a.parts.iter().map(|&x| self.field.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &ChainRingElement, b: &ChainRingElement) -> ChainRingElement {
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.t];
        for (i, &x) in a.parts.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.parts.iter().enumerate().take(self.t - i) {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        ChainRingElement { parts: out }
    }

    pub fn pow(&self, a: &ChainRingElement, mut e: u64) -> ChainRingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: &ChainRingElement) -> bool {
        !a.part(0).is_zero()
    }

    /// Newton iteration `b <- b (2 - a b)`, doubling the `u`-adic precision.
    pub fn inv(&self, a: &ChainRingElement) -> Result<ChainRingElement> {
        self.check(a)?;
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let two = self.scalar(self.field.from_int(2));
        let mut b = self.scalar(self.field.inv(a.part(0))?);
        let mut prec = 1;
        while prec < self.t {
            b = self.mul(&b, &self.sub(&two, &self.mul(a, &b)));
            prec *= 2;
        }
        Ok(b)
    }

    /// A unit is an `n`-th power iff its constant part is one in the field.
    pub fn is_nth_power(&self, delta: &ChainRingElement, n: u64) -> Result<bool> {
        self.check(delta)?;
        self.nth_guard(delta, n)?;
        self.field.is_nth_power(delta.part(0), n)
    }

    fn nth_guard(&self, delta: &ChainRingElement, n: u64) -> Result<()> {
        if n == 0 {
            return invalid("n must be positive");
        }
        if gcd(n, self.field.p() as u64) != 1 {
            return Err(Error::UnsupportedParameter(format!(
                "gcd(n, p) = gcd({n}, {}) != 1",
                self.field.p()
            )));
        }
        if !self.is_unit(delta) {
            return Err(Error::NotAUnit);
        }
        Ok(())
    }

    /// Constructs `beta` with `beta^n = delta` one `u`-adic digit at a time.
    ///
    /// With `beta` correct modulo `u^j`, adding `u^j c` changes `beta^n` at
    /// `u^j` by `n beta_0^{n-1} c`, so `c` is the discrepancy divided by that.
    pub fn nth_root_lift(&self, delta: &ChainRingElement, n: u64) -> Result<ChainRingElement> {
        self.check(delta)?;
        self.nth_guard(delta, n)?;
        let f = &self.field;
        let b0 = f.nth_root(delta.part(0), n)?.ok_or(Error::NotAnNthPower)?;
        let mut beta = self.scalar(b0);
        let slope = f.mul(f.from_int((n % f.p() as u64) as i64), f.pow(b0, n - 1));
        let slope_inv = f.inv(slope)?;
        for j in 1..self.t {
            let cur = self.pow(&beta, n);
            let disc = f.sub(delta.part(j), cur.part(j));
            beta.parts[j] = f.add(beta.parts[j], f.mul(disc, slope_inv));
        }
        if self.pow(&beta, n) != *delta {
            return Err(Error::Paradox(format!(
                "lifted root of {} fails beta^{n} = delta",
                self.format(delta)
            )));
        }
        Ok(beta)
    }

    /// Image of `a` in `R^j`.
    pub fn reduce_mod_u_power(&self, a: &ChainRingElement, j: usize) -> Result<(ChainRing, ChainRingElement)> {
        if j == 0 || j > self.t {
            return invalid(format!("reduction level {j} outside 1..={}", self.t));
        }
        let ring = ChainRing::new(self.field.clone(), j)?;
        Ok((
            ring,
            ChainRingElement {
                parts: a.parts[..j].to_vec(),
            },
        ))
    }

    /// Every element, ordered by the integer encoding with part 0 least significant.
    pub fn elements(&self) -> impl Iterator<Item = ChainRingElement> + '_ {
        let q = self.field.order() as u64;
        let total = q.pow(self.t as u32);
        (0..total).map(move |mut v| {
            let parts = (0..self.t)
                .map(|_| {
                    let d = FieldElement((v % q) as u16);
                    v /= q;
                    d
                })
                .collect();
            ChainRingElement { parts }
        })
    }

    pub fn units(&self) -> impl Iterator<Item = ChainRingElement> + '_ {
        self.elements().filter(|a| self.is_unit(a))
    }

    /// `"d0 + u*d1 + u^2*d2"`, omitting zero parts except for the zero element.
    pub fn format(&self, a: &ChainRingElement) -> String {
        let terms: Vec<String> = a
            .parts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let v = self.field.format(c);
                match i {
                    0 => v,
                    1 => format!("u*{v}"),
                    _ => format!("u^{i}*{v}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Digit groups, one per `u`-power, as used on the command line.
    pub fn digit_groups(&self, a: &ChainRingElement) -> Vec<Vec<u32>> {
        a.parts.iter().map(|&c| self.field.digits(c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn ring(p: u32, m: u32, t: usize) -> ChainRing {
        ChainRing::new(Arc::new(FieldContext::new(p, m).unwrap()), t).unwrap()
    }

    fn el(r: &ChainRing, ints: &[i64]) -> ChainRingElement {
        let parts: Vec<_> = ints.iter().map(|&v| r.field().from_int(v)).collect();
        r.element(&parts).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(3, 1, 2);
        assert_eq!(r.mul(&el(&r, &[1, 1]), &el(&r, &[1, 2])), r.one());
        assert_eq!(r.mul(&r.u_pow(1), &r.u_pow(1)), r.zero());
        assert_eq!(r.inv(&r.one()).unwrap(), r.one());
        assert_eq!(r.inv(&r.u_pow(1)), Err(Error::NotAUnit));
    }

    #[test]
    fn unit_examples() {
        let r = ring(3, 1, 3);
        assert!(r.is_unit(&el(&r, &[1, 0, 1])));
        assert!(!r.is_unit(&r.u_pow(1)));
        let r2 = ring(3, 1, 2);
        assert!(r2.is_unit(&el(&r2, &[2, 1])));
    }

    #[test]
    fn nth_power_examples() {
        let r = ring(3, 1, 3);
        assert!(!r.is_nth_power(&el(&r, &[2, 1]), 2).unwrap());
        assert!(r.is_nth_power(&el(&r, &[1, 1]), 2).unwrap());
        assert!(r.is_nth_power(&r.one(), 5).unwrap());
        assert_eq!(r.is_nth_power(&r.u_pow(1), 2), Err(Error::NotAUnit));
        assert!(matches!(
            r.is_nth_power(&r.one(), 3),
            Err(Error::UnsupportedParameter(_))
        ));
        assert_eq!(r.nth_root_lift(&el(&r, &[2, 1]), 2), Err(Error::NotAnNthPower));

        let r2 = ring(3, 1, 2);
        assert_eq!(r2.nth_root_lift(&el(&r2, &[1, 1]), 2).unwrap(), el(&r2, &[1, 2]));
        assert_eq!(r.nth_root_lift(&r.one(), 2).unwrap(), r.one());
        let beta = r.nth_root_lift(&el(&r, &[1, 1]), 2).unwrap();
        assert_eq!(r.pow(&beta, 2), el(&r, &[1, 1]));
    }

    #[test]
    fn reduce_examples() {
        let r = ring(3, 1, 3);
        let a = el(&r, &[1, 1, 1]);
        assert_eq!(r.reduce_mod_u_power(&a, 1).unwrap().1.parts(), &[r.field().one()]);
        assert_eq!(r.reduce_mod_u_power(&a, 2).unwrap().1.parts().len(), 2);
        assert!(r.reduce_mod_u_power(&a, 0).is_err());
        assert!(r.reduce_mod_u_power(&a, 4).is_err());
    }

    fn small_rings() -> Vec<ChainRing> {
        let mut out = Vec::new();
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
            let q = (p as u64).pow(m);
            for t in 1..=6 {
                if q.pow(t as u32) <= 729 {
                    out.push(ring(p, m, t));
                }
            }
        }
        out
    }

    #[test]
    fn inverse_exhaustive() {
        for r in small_rings() {
            for a in r.units() {
                assert_eq!(r.mul(&a, &r.inv(&a).unwrap()), r.one());
            }
        }
    }

    #[test]
    fn nth_power_criterion_matches_exhaustive_search() {
        for r in small_rings() {
            for n in [2u64, 3] {
                if gcd(n, r.field().p() as u64) != 1 {
                    continue;
                }
                let powers: HashSet<_> = r.elements().map(|b| r.pow(&b, n)).collect();
                for d in r.units() {
                    let crit = r.is_nth_power(&d, n).unwrap();
                    assert_eq!(crit, powers.contains(&d));
                    if crit {
                        assert_eq!(r.pow(&r.nth_root_lift(&d, n).unwrap(), n), d);
                    }
                }
            }
        }
    }

    #[test]
    fn reduction_is_a_surjective_homomorphism() {
        let r = ring(3, 1, 3);
        let all: Vec<_> = r.elements().collect();
        for j in 1..=3 {
            let mut image = HashSet::new();
            for a in &all {
                let (rj, ra) = r.reduce_mod_u_power(a, j).unwrap();
                image.insert(ra.clone());
                for b in all.iter().step_by(5) {
                    let rb = r.reduce_mod_u_power(b, j).unwrap().1;
                    assert_eq!(r.reduce_mod_u_power(&r.mul(a, b), j).unwrap().1, rj.mul(&ra, &rb));
                    assert_eq!(r.reduce_mod_u_power(&r.add(a, b), j).unwrap().1, rj.add(&ra, &rb));
                }
            }
            assert_eq!(image.len(), 3usize.pow(j as u32));
        }
    }

    #[test]
    fn format_text() {
        let r = ring(3, 1, 3);
        assert_eq!(r.format(&el(&r, &[1, 0, 2])), "[1] + u^2*[2]");
        assert_eq!(r.format(&r.zero()), "0");
    }

    proptest! {
        #[test]
        fn ring_axioms(a in prop::collection::vec(0i64..9, 4), b in prop::collection::vec(0i64..9, 4), c in prop::collection::vec(0i64..9, 4)) {
            let r = ring(3, 2, 4);
            let mk = |v: &[i64]| r.element(&v.iter().map(|&x| r.field().from_index(x as usize).unwrap()).collect::<Vec<_>>()).unwrap();
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        }
    }
}
