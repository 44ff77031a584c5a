//! Quotient rings `R^t[x]/<f(x)>` with `f` monic in `R^t[x^{p^s}]`.
//!
//! Elements are stored in canonical coordinates: the coefficient of
//! `u^k phi^j x^i` sits at index `k * (p^s d) + j * d + i`, where `d = deg phi`
//! and `0 <= j < p^s`, `0 <= i < d`. At a fixed `u`-level the polynomials
//! `phi^j x^i` have distinct degrees below `N = d p^s`, so switching to the
//! standard monomials `u^k x^e` never needs a reduction modulo `f`.

use crate::chain::{ChainRing, ChainRingElement};
use crate::error::{invalid, unsupported, Error, Result};
use crate::field::{gcd, FieldContext, FieldElement, FieldPoly};
use crate::linalg::Echelon;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Which family the modulus belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModulusKind {
    /// `x^{n p^s} - delta`.
    Constacyclic { n: usize, delta: ChainRingElement },
    /// `x^{2p^s} + delta x^{p^s} + delta^2`.
    QuadraticTrace { delta: ChainRingElement },
}

impl ModulusKind {
    pub fn delta(&self) -> &ChainRingElement {
        match self {
            ModulusKind::Constacyclic { delta, .. } | ModulusKind::QuadraticTrace { delta } => delta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModulusKind::Constacyclic { .. } => "constacyclic",
            ModulusKind::QuadraticTrace { .. } => "quadratic-trace",
        }
    }

    /// `n` for constacyclic moduli, `None` otherwise.
    pub fn n(&self) -> Option<usize> {
        match self {
            ModulusKind::Constacyclic { n, .. } => Some(*n),
            ModulusKind::QuadraticTrace { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusSpec {
    pub kind: ModulusKind,
    /// `f = sum_i f_coeffs[i] x^{i p^s}`, with the last entry equal to one.
    pub f_coeffs: Vec<ChainRingElement>,
    pub base_poly: FieldPoly,
    /// `u`-valuation of `f - phi^{p^s}`, `None` when they coincide.
    pub k: Option<usize>,
}

/// Element of a [`RingContext`] in canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotElement {
    pub(crate) coords: Vec<FieldElement>,
}

impl QuotElement {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// One `u`-level of an element written as `u^level phi^phi_exp h(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPart {
    pub level: usize,
    pub phi_exp: usize,
    /// Unit cofactor, a polynomial of degree below `(p^s - phi_exp) d`.
    pub unit: FieldPoly,
}

/// Serializable summary of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub p: u32,
    pub m: u32,
    pub s: u32,
    pub t: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub delta: Vec<Vec<u32>>,
    pub delta00: Vec<u32>,
    pub phi: Vec<Vec<u32>>,
    pub phi_irreducible: bool,
    pub k: Option<usize>,
    pub nilp_index: usize,
    pub dim: usize,
    pub field_modulus: Vec<u32>,
}

#[derive(Debug)]
pub struct RingContext {
    field: Arc<FieldContext>,
    chain: ChainRing,
    s: u32,
    ps: usize,
    d: usize,
    spec: ModulusSpec,
    phi_irreducible: bool,
    nilp_index: usize,
    /// `delta_{0,0}` (or its trace analogue), the `p^s`-th root of `delta_0`.
    delta00: FieldElement,
    alpha0: Option<FieldElement>,
    /// rows: standard coefficients of `phi^j x^i`, row index `j d + i`
    block: Vec<Vec<FieldElement>>,
    x_matrix: Vec<Vec<FieldElement>>,
    phi_matrix: Vec<Vec<FieldElement>>,
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.s == other.s && self.chain.t() == other.chain.t() && self.spec == other.spec
    }
}

impl Eq for RingContext {}

/// Largest `p^s` accepted; keeps the dense matrices small.
pub const MAX_PS: u64 = 64;

impl RingContext {
    /// Builds `R^t[x]/<f>` for the given family and validates its invariants.
    pub fn new(field: Arc<FieldContext>, s: u32, t: usize, kind: ModulusKind) -> Result<Arc<Self>> {
        let chain = ChainRing::new(field.clone(), t)?;
        let p = field.p();
        let ps = (p as u64)
            .checked_pow(s)
            .filter(|&v| v <= MAX_PS)
            .ok_or_else(|| Error::TooLarge {
                what: "p^s".into(),
                size: (p as u128).saturating_pow(s),
                cap: MAX_PS as u128,
            })? as usize;
        let delta = kind.delta();
        if delta.parts().len() != t {
            return invalid(format!("delta has {} parts, expected t = {t}", delta.parts().len()));
        }
        if !chain.is_unit(delta) {
            return Err(Error::NotAUnit);
        }
        let delta00 = field.ps_root(delta.part(0), s);
        let (f_coeffs, base_poly, alpha0) = match &kind {
            ModulusKind::Constacyclic { n, delta } => {
                let n = *n;
                if n == 0 {
                    return invalid("n must be >= 1");
                }
                if gcd(n as u64, p as u64) != 1 {
                    return unsupported(format!("gcd(n, p) = gcd({n}, {p}) != 1"));
                }
                let mut fc = vec![chain.zero(); n + 1];
                fc[0] = chain.neg(delta);
                fc[n] = chain.one();
                let phi = FieldPoly::new(
                    std::iter::once(field.neg(delta00))
                        .chain(std::iter::repeat_n(FieldElement::ZERO, n - 1))
                        .chain(std::iter::once(FieldElement::ONE))
                        .collect(),
                );
                (fc, phi, None)
            }
            ModulusKind::QuadraticTrace { delta } => {
                // x^2 + x + 1 only stays irreducible when p^m = 2 mod 3
                if field.order() % 3 != 2 {
                    return unsupported(format!("quadratic trace needs p^m = 2 mod 3, got {}", field.order()));
                }
                let fc = vec![chain.mul(delta, delta), delta.clone(), chain.one()];
                let phi = FieldPoly::new(vec![field.mul(delta00, delta00), delta00, FieldElement::ONE]);
                (fc, phi, Some(field.ps_root(field.from_int(2), s)))
            }
        };
        let k = (1..t).find(|&lvl| f_coeffs.iter().any(|c| !c.part(lvl).is_zero()));
        let d = base_poly.degree().expect("monic base polynomial");
        let phi_irreducible = field.is_irreducible(&base_poly);
        let spec = ModulusSpec {
            kind,
            f_coeffs,
            base_poly,
            k,
        };
        let n_x = d * ps;
        let mut block = Vec::with_capacity(n_x);
        let mut phi_j = FieldPoly::one();
        for _ in 0..ps {
            for i in 0..d {
                let g = field.poly_mul(&phi_j, &FieldPoly::monomial(FieldElement::ONE, i));
                block.push((0..n_x).map(|e| g.coeff(e)).collect());
            }
            phi_j = field.poly_mul(&phi_j, &spec.base_poly);
        }
        let mut ring = RingContext {
            field,
            chain,
            s,
            ps,
            d,
            spec,
            phi_irreducible,
            nilp_index: 0,
            delta00,
            alpha0,
            block,
            x_matrix: Vec::new(),
            phi_matrix: Vec::new(),
        };
        let x = ring.x();
        let phi = ring.phi();
        ring.x_matrix = ring.mul_matrix(&x);
        ring.phi_matrix = ring.mul_matrix(&phi);
        if ring.from_standard(&ring.to_standard(&phi))? != phi {
            return Err(Error::Paradox("canonical basis conversion is not a bijection".into()));
        }
        let expected = match ring.spec.k {
            Some(k) => t.div_ceil(k) * ps,
            None => ps,
        };
        let mut pw = ring.one();
        let mut actual = None;
        for e in 1..=t * ps {
            pw = ring.mul(&pw, &phi);
            if pw.is_zero() {
                actual = Some(e);
                break;
            }
        }
        if actual != Some(expected) {
            return Err(Error::Paradox(format!(
                "nilpotency index of phi is {actual:?}, formula gives {expected}"
            )));
        }
        ring.nilp_index = expected;
        Ok(Arc::new(ring))
    }

    /// Convenience constructor for `x^{n p^s} - delta` over `F_{p^m}` with the
    /// default field modulus; `delta` lists prime-field integers per `u`-power.
    pub fn constacyclic(p: u32, m: u32, s: u32, t: usize, n: usize, delta: &[i64]) -> Result<Arc<Self>> {
        let field = Arc::new(FieldContext::new(p, m)?);
        let chain = ChainRing::new(field.clone(), t)?;
        let parts: Vec<_> = delta.iter().map(|&v| field.from_int(v)).collect();
        let delta = chain.element(&parts)?;
        Self::new(field, s, t, ModulusKind::Constacyclic { n, delta })
    }

    pub fn quadratic_trace(p: u32, m: u32, s: u32, t: usize, delta: &[i64]) -> Result<Arc<Self>> {
        let field = Arc::new(FieldContext::new(p, m)?);
        let chain = ChainRing::new(field.clone(), t)?;
        let parts: Vec<_> = delta.iter().map(|&v| field.from_int(v)).collect();
        let delta = chain.element(&parts)?;
        Self::new(field, s, t, ModulusKind::QuadraticTrace { delta })
    }

    pub fn field(&self) -> &Arc<FieldContext> {
        &self.field
    }

    pub fn chain(&self) -> &ChainRing {
        &self.chain
    }

    pub fn spec(&self) -> &ModulusSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn t(&self) -> usize {
        self.chain.t()
    }

    /// `p^s`.
    pub fn ps(&self) -> usize {
        self.ps
    }

    /// Degree of the base polynomial.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `x`-degree of the modulus.
    pub fn x_degree(&self) -> usize {
        self.d * self.ps
    }

    /// Dimension over `F_{p^m}`.
    pub fn dim(&self) -> usize {
        self.t() * self.x_degree()
    }

    pub fn k(&self) -> Option<usize> {
        self.spec.k
    }

    pub fn nilp_index(&self) -> usize {
        self.nilp_index
    }

    pub fn phi_irreducible(&self) -> bool {
        self.phi_irreducible
    }

    pub fn delta00(&self) -> FieldElement {
        self.delta00
    }

    /// `alpha_0` with `alpha_0^{p^s} = 2`, only for trace moduli.
    pub fn alpha0(&self) -> Option<FieldElement> {
        self.alpha0
    }

    /// `log_p |R|`.
    pub fn size_exponent(&self) -> u64 {
        self.m() as u64 * self.dim() as u64
    }

    /// Canonical index of `u^k phi^j x^i`.
    pub fn index(&self, k: usize, j: usize, i: usize) -> usize {
        k * self.x_degree() + j * self.d + i
    }

    /// Inverse of [`index`](Self::index).
    pub fn unindex(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.x_degree();
        (idx / n, (idx % n) / self.d, idx % self.d)
    }

    pub fn zero(&self) -> QuotElement {
        QuotElement {
            coords: vec![FieldElement::ZERO; self.dim()],
        }
    }

    pub fn one(&self) -> QuotElement {
        self.basis_element(0, 0, 0)
    }

    pub fn basis_element(&self, k: usize, j: usize, i: usize) -> QuotElement {
        let mut z = self.zero();
        z.coords[self.index(k, j, i)] = FieldElement::ONE;
        z
    }

    pub fn u(&self) -> QuotElement {
        if self.t() > 1 {
            self.basis_element(1, 0, 0)
        } else {
            self.zero()
        }
    }

    pub fn phi(&self) -> QuotElement {
        if self.ps > 1 {
            self.basis_element(0, 1, 0)
        } else {
            self.embed_field_poly(0, &self.spec.base_poly)
                .expect("base polynomial embeds at level zero")
        }
    }

    pub fn x(&self) -> QuotElement {
        self.from_chain_poly(&[self.chain.zero(), self.chain.one()])
    }

    pub fn scalar(&self, c: FieldElement) -> QuotElement {
        let mut z = self.zero();
        z.coords[0] = c;
        z
    }

    pub fn from_chain(&self, c: &ChainRingElement) -> QuotElement {
        self.from_chain_poly(std::slice::from_ref(c))
    }

    pub fn from_coords(&self, coords: Vec<FieldElement>) -> Result<QuotElement> {
        if coords.len() != self.dim() {
            return invalid(format!("expected {} coordinates, got {}", self.dim(), coords.len()));
        }
        if coords.iter().any(|c| c.index() >= self.field.order() as usize) {
            return invalid("coordinate out of field range");
        }
        Ok(QuotElement { coords })
    }

    fn check(&self, a: &QuotElement) -> Result<()> {
        if a.coords.len() != self.dim() {
            return invalid("element belongs to a different ring");
        }
        Ok(())
    }

    /// Standard coordinates: coefficient of `u^k x^e` at `k N + e`.
    pub fn to_standard(&self, a: &QuotElement) -> Vec<FieldElement> {
        let f = &self.field;
        let n = self.x_degree();
        let mut out = vec![FieldElement::ZERO; self.dim()];
        for k in 0..self.t() {
            let lvl = &a.coords[k * n..(k + 1) * n];
            let dst = &mut out[k * n..(k + 1) * n];
            for (c, row) in lvl.iter().zip(&self.block) {
                if c.is_zero() {
                    continue;
                }
                for (x, &r) in dst.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(*c, r));
                }
            }
        }
        out
    }

    pub fn from_standard(&self, std: &[FieldElement]) -> Result<QuotElement> {
        if std.len() != self.dim() {
            return invalid("standard vector has the wrong length");
        }
        let f = &self.field;
        let n = self.x_degree();
        let mut out = vec![FieldElement::ZERO; self.dim()];
        for k in 0..self.t() {
            let mut v = std[k * n..(k + 1) * n].to_vec();
            // rows are monic of strictly increasing degree: back-substitute
            for r in (0..n).rev() {
                let c = v[r];
                if c.is_zero() {
                    continue;
                }
                out[k * n + r] = c;
                for (x, &b) in v.iter_mut().zip(&self.block[r]).take(r + 1) {
                    *x = f.sub(*x, f.mul(c, b));
                }
            }
        }
        Ok(QuotElement { coords: out })
    }

    /// Reduces a polynomial with `R^t` coefficients (constant first) modulo `f`.
    pub fn from_chain_poly(&self, poly: &[ChainRingElement]) -> QuotElement {
        let t = self.t();
        let mut tmp: Vec<Vec<FieldElement>> = (0..t).map(|k| poly.iter().map(|c| c.part(k)).collect()).collect();
        self.reduce_levels(&mut tmp);
        let n = self.x_degree();
        let mut std = vec![FieldElement::ZERO; self.dim()];
        for (k, lvl) in tmp.iter().enumerate() {
            for (e, &c) in lvl.iter().enumerate().take(n) {
                std[k * n + e] = c;
            }
        }
        self.from_standard(&std).expect("length matches")
    }

    /// Polynomial form: `x^e` coefficients in `R^t`, length `N`.
    pub fn to_chain_poly(&self, a: &QuotElement) -> Vec<ChainRingElement> {
        let std = self.to_standard(a);
        let n = self.x_degree();
        (0..n)
            .map(|e| {
                let parts: Vec<_> = (0..self.t()).map(|k| std[k * n + e]).collect();
                self.chain.element(&parts).expect("t parts")
            })
            .collect()
    }

    /// `tmp[k][e]` holds the `u^k x^e` coefficient; reduces in place below `x^N`.
    fn reduce_levels(&self, tmp: &mut [Vec<FieldElement>]) {
        let f = &self.field;
        let n = self.x_degree();
        let t = self.t();
        let len = tmp.iter().map(|v| v.len()).max().unwrap_or(0);
        for v in tmp.iter_mut() {
            v.resize(len.max(n), FieldElement::ZERO);
        }
        let lower = &self.spec.f_coeffs[..self.d];
        for e in (n..len).rev() {
            for k in 0..t {
                let c = tmp[k][e];
                if c.is_zero() {
                    continue;
                }
                tmp[k][e] = FieldElement::ZERO;
                for (i, fi) in lower.iter().enumerate() {
                    let pos = e - n + i * self.ps;
                    for l in 0..t - k {
                        let fl = fi.part(l);
                        if !fl.is_zero() {
                            tmp[k + l][pos] = f.sub(tmp[k + l][pos], f.mul(c, fl));
                        }
                    }
                }
            }
        }
        for v in tmp.iter_mut() {
            v.truncate(n);
        }
    }

    pub fn add(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        QuotElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| self.field.add(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &QuotElement) -> QuotElement {
        QuotElement {
            coords: a.coords.iter().map(|&x| self.field.neg(x)).collect(),
        }
    }

    pub fn sub(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &QuotElement, c: FieldElement) -> QuotElement {
        QuotElement {
            coords: a.coords.iter().map(|&x| self.field.mul(x, c)).collect(),
        }
    }

    pub fn checked_mul(&self, a: &QuotElement, b: &QuotElement) -> Result<QuotElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn mul(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        let f = &self.field;
        let n = self.x_degree();
        let t = self.t();
        let sa = self.to_standard(a);
        let sb = self.to_standard(b);
        let mut tmp = vec![vec![FieldElement::ZERO; 2 * n - 1]; t];
        for ka in 0..t {
            for ea in 0..n {
                let x = sa[ka * n + ea];
                if x.is_zero() {
                    continue;
                }
                for kb in 0..t - ka {
                    for eb in 0..n {
                        let y = sb[kb * n + eb];
                        if !y.is_zero() {
                            let slot = &mut tmp[ka + kb][ea + eb];
                            *slot = f.add(*slot, f.mul(x, y));
                        }
                    }
                }
            }
        }
        self.reduce_levels(&mut tmp);
        let mut std = vec![FieldElement::ZERO; self.dim()];
        for (k, lvl) in tmp.iter().enumerate() {
            std[k * n..(k + 1) * n].copy_from_slice(lvl);
        }
        self.from_standard(&std).expect("length matches")
    }

    pub fn pow(&self, a: &QuotElement, mut e: u64) -> QuotElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Rows: canonical coordinates of `b_r * a` for each canonical basis vector `b_r`.
    pub fn mul_matrix(&self, a: &QuotElement) -> Vec<Vec<FieldElement>> {
        (0..self.dim())
            .map(|r| {
                let (k, j, i) = self.unindex(r);
                self.mul(&self.basis_element(k, j, i), a).coords
            })
            .collect()
    }

    fn apply(&self, rows: &[Vec<FieldElement>], v: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.dim()];
        for (c, row) in v.iter().zip(rows) {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = f.add(*o, f.mul(*c, r));
                }
            }
        }
        out
    }

    /// Multiplication by `x` on a coordinate vector.
    pub fn mul_x_coords(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        self.apply(&self.x_matrix, v)
    }

    /// Multiplication by `phi` on a coordinate vector.
    pub fn mul_phi_coords(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        self.apply(&self.phi_matrix, v)
    }

    /// Multiplication by `u`: every canonical basis vector moves up one level.
    pub fn mul_u_coords(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let n = self.x_degree();
        let mut out = vec![FieldElement::ZERO; self.dim()];
        out[n..].copy_from_slice(&v[..self.dim() - n]);
        out
    }

    /// Number of elements, `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        (self.field.order() as u128).checked_pow(self.dim() as u32)
    }

    /// The element whose coordinates are the base-`q` digits of `idx`,
    /// coordinate zero least significant.
    pub fn element_at(&self, mut idx: u128) -> QuotElement {
        let q = self.field.order() as u128;
        let coords = (0..self.dim())
            .map(|_| {
                let d = FieldElement((idx % q) as u16);
                idx /= q;
                d
            })
            .collect();
        QuotElement { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = QuotElement> + '_ {
        let total = self.size().expect("enumerable ring");
        (0..total).map(move |i| self.element_at(i))
    }

    /// The unit test of the residue criterion: `a` is a unit iff its `u^0 phi^0`
    /// block is nonzero. For a reducible base polynomial the criterion does not
    /// apply and invertibility of the multiplication map decides instead.
    pub fn is_unit(&self, a: &QuotElement) -> bool {
        if self.phi_irreducible {
            a.coords[..self.d].iter().any(|c| !c.is_zero())
        } else {
            self.is_unit_linear(a)
        }
    }

    /// Invertibility via the rank of `b -> a b`.
    pub fn is_unit_linear(&self, a: &QuotElement) -> bool {
        let mut e = Echelon::new(self.dim());
        for row in self.mul_matrix(a) {
            e.insert(&self.field, &row);
        }
        e.rank() == self.dim()
    }

    /// Solves `b a = 1`.
    pub fn inv(&self, a: &QuotElement) -> Result<QuotElement> {
        self.check(a)?;
        let rows = self.mul_matrix(a);
        let b = Echelon::solve_left(&self.field, &rows, &self.one().coords).ok_or(Error::NotAUnit)?;
        Ok(QuotElement { coords: b })
    }

    /// Embeds `u^level g(x)` for a field polynomial `g`.
    pub fn embed_field_poly(&self, level: usize, g: &FieldPoly) -> Result<QuotElement> {
        if level >= self.t() {
            return Ok(self.zero());
        }
        let mut poly = vec![self.chain.zero(); g.coeffs().len()];
        for (e, &c) in g.coeffs().iter().enumerate() {
            poly[e] = self.chain.mul(&self.chain.scalar(c), &self.chain.u_pow(level));
        }
        Ok(self.from_chain_poly(&poly))
    }

    /// Inverse of a nonzero `g` with `deg g < deg phi`.
    ///
    /// From `a g + b phi^{p^s} = 1` over the field and `phi^{p^s} = f - (f - phi^{p^s})`
    /// we get `a g = 1 - nu` with `nu` a multiple of `u`, so the geometric
    /// series `1 + nu + ... + nu^{t-1}` inverts `a g`.
    pub fn poly_unit_inverse(&self, g: &FieldPoly) -> Result<QuotElement> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if g.degree().unwrap() >= self.d {
            return invalid("unit candidate must have degree below deg phi");
        }
        if !self.phi_irreducible {
            return unsupported("unit criterion needs an irreducible base polynomial");
        }
        let f = &self.field;
        let phi_ps = f.poly_pow(&self.spec.base_poly, self.ps as u64);
        let (gg, a, _) = f.poly_xgcd(g, &phi_ps);
        if gg != FieldPoly::one() {
            return Err(Error::NotAUnit);
        }
        let ge = self.embed_field_poly(0, g)?;
        let ae = self.embed_field_poly(0, &a)?;
        let w = self.mul(&ae, &ge);
        let nu = self.sub(&self.one(), &w);
        let mut series = self.one();
        let mut term = self.one();
        for _ in 1..self.t() {
            term = self.mul(&term, &nu);
            series = self.add(&series, &term);
        }
        let inv = self.mul(&ae, &series);
        if self.mul(&inv, &ge) != self.one() {
            return Err(Error::Paradox("geometric-series inverse failed to verify".into()));
        }
        Ok(inv)
    }

    /// Field polynomial `sum_{j,i} c^k_{j,i} phi^j x^i` stored at one level.
    pub fn level_poly(&self, a: &QuotElement, level: usize) -> FieldPoly {
        let n = self.x_degree();
        let std = self.to_standard(a);
        FieldPoly::new(std[level * n..(level + 1) * n].to_vec())
    }

    /// `phi`-valuation of the level-`level` part, `p^s` when the part is zero.
    pub fn level_valuation(&self, a: &QuotElement, level: usize) -> usize {
        let n = self.x_degree();
        a.coords[level * n..(level + 1) * n]
            .iter()
            .position(|c| !c.is_zero())
            .map_or(self.ps, |pos| pos / self.d)
    }

    /// Per-level normal form `a = sum_k u^k phi^{v_k} h_k` with every `h_k` a unit.
    pub fn decompose(&self, a: &QuotElement) -> Result<Vec<LevelPart>> {
        if a.is_zero() {
            return invalid("cannot decompose the zero element");
        }
        if !self.phi_irreducible {
            return unsupported("decomposition needs an irreducible base polynomial");
        }
        let n = self.x_degree();
        let d = self.d;
        let mut out = Vec::new();
        for level in 0..self.t() {
            let v = self.level_valuation(a, level);
            if v == self.ps {
                continue;
            }
            // shift the phi-digits down by v and convert back to a polynomial
            let mut lifted = self.zero();
            for j in v..self.ps {
                for i in 0..d {
                    lifted.coords[(j - v) * d + i] = a.coords[level * n + j * d + i];
                }
            }
            out.push(LevelPart {
                level,
                phi_exp: v,
                unit: self.level_poly(&lifted, 0),
            });
        }
        Ok(out)
    }

    pub fn recompose(&self, parts: &[LevelPart]) -> Result<QuotElement> {
        let mut acc = self.zero();
        let phi = self.phi();
        for part in parts {
            let h = self.embed_field_poly(part.level, &part.unit)?;
            acc = self.add(&acc, &self.mul(&self.pow(&phi, part.phi_exp as u64), &h));
        }
        Ok(acc)
    }

    pub fn descriptor(&self) -> RingDescriptor {
        let f = &self.field;
        RingDescriptor {
            p: self.p(),
            m: self.m(),
            s: self.s,
            t: self.t(),
            kind: self.spec.kind.name().into(),
            n: self.spec.kind.n(),
            delta: self.chain.digit_groups(self.spec.kind.delta()),
            delta00: f.digits(self.delta00),
            phi: self.spec.base_poly.coeffs().iter().map(|&c| f.digits(c)).collect(),
            phi_irreducible: self.phi_irreducible,
            k: self.spec.k,
            nilp_index: self.nilp_index,
            dim: self.dim(),
            field_modulus: f.modulus().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r313(delta: &[i64]) -> Arc<RingContext> {
        RingContext::constacyclic(3, 1, 1, 3, 1, delta).unwrap()
    }

    #[test]
    fn nilpotency_examples() {
        let r = r313(&[1, 0, 1]);
        assert_eq!(r.k(), Some(2));
        assert_eq!(r.nilp_index(), 6);
        let r = r313(&[1, 1, 0]);
        assert_eq!(r.k(), Some(1));
        assert_eq!(r.nilp_index(), 9);
        let r = r313(&[2, 0, 0]);
        assert_eq!(r.k(), None);
        assert_eq!(r.nilp_index(), 3);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            RingContext::constacyclic(3, 1, 1, 3, 1, &[0, 1, 0]).unwrap_err(),
            Error::NotAUnit
        );
        assert!(matches!(
            RingContext::constacyclic(3, 1, 1, 3, 3, &[1]),
            Err(Error::UnsupportedParameter(_))
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let r = r313(&[1, 0, 1]);
        let phi = r.phi();
        assert_eq!(r.mul(&phi, &r.pow(&phi, r.nilp_index() as u64 - 1)), r.zero());
        assert!(!r.pow(&phi, r.nilp_index() as u64 - 1).is_zero());
        // (x-1)^3 = x^3 - 1 = delta - 1 = u^2
        let cube = r.pow(&phi, 3);
        assert_eq!(cube, r.basis_element(2, 0, 0));
        let a = r.add(&r.x(), &r.u());
        assert_eq!(r.mul(&r.one(), &a), a);
    }

    #[test]
    fn x_inverse_example() {
        let r = r313(&[1, 0, 1]);
        let x = r.x();
        assert!(r.is_unit(&x));
        let delta = r.from_chain(r.spec().kind.delta());
        let dinv = r.from_chain(&r.chain().inv(r.spec().kind.delta()).unwrap());
        let cand = r.mul(&r.pow(&x, 2), &dinv);
        assert_eq!(r.mul(&x, &cand), r.one());
        assert_eq!(r.inv(&x).unwrap(), cand);
        assert_eq!(r.pow(&x, 3), delta);
        assert!(!r.is_unit(&r.u()));
        assert!(!r.is_unit(&r.phi()));
    }

    #[test]
    fn poly_unit_inverse_examples() {
        let r = r313(&[1, 0, 1]);
        assert_eq!(r.poly_unit_inverse(&FieldPoly::one()).unwrap(), r.one());
        assert_eq!(r.poly_unit_inverse(&FieldPoly::zero()), Err(Error::DivisionByZero));

        // n = 2 over F_3 with phi = x^2 + 1
        let r2 = RingContext::constacyclic(3, 1, 1, 2, 2, &[2, 1]).unwrap();
        assert!(r2.phi_irreducible());
        let f = r2.field();
        let g = FieldPoly::new(vec![f.one(), f.one()]);
        let inv = r2.poly_unit_inverse(&g).unwrap();
        assert_eq!(r2.mul(&inv, &r2.embed_field_poly(0, &g).unwrap()), r2.one());

        // n = 3 over F_4 with a non-cube delta
        let field = Arc::new(FieldContext::new(2, 2).unwrap());
        let chain = ChainRing::new(field.clone(), 2).unwrap();
        let w = field.from_digits(&[0, 1]).unwrap();
        let delta = chain.element(&[w, field.one()]).unwrap();
        let r3 = RingContext::new(field.clone(), 1, 2, ModulusKind::Constacyclic { n: 3, delta }).unwrap();
        assert!(r3.phi_irreducible());
        let g = FieldPoly::new(vec![field.one(), field.one(), field.one()]);
        let inv = r3.poly_unit_inverse(&g).unwrap();
        assert_eq!(r3.mul(&inv, &r3.embed_field_poly(0, &g).unwrap()), r3.one());
    }

    #[test]
    fn decompose_examples() {
        let r = r313(&[1, 0, 1]);
        let phi = r.phi();
        assert!(r.mul(&r.basis_element(2, 0, 0), &r.pow(&phi, 3)).is_zero());
        let a = r.basis_element(2, 2, 0);
        let parts = r.decompose(&a).unwrap();
        assert_eq!(
            parts,
            vec![LevelPart {
                level: 2,
                phi_exp: 2,
                unit: FieldPoly::one()
            }]
        );
        let b = r.add(
            &r.basis_element(1, 2, 0),
            &r.scale(&r.basis_element(2, 0, 0), r.field().from_int(2)),
        );
        let parts = r.decompose(&b).unwrap();
        assert_eq!(
            parts.iter().map(|p| (p.level, p.phi_exp)).collect::<Vec<_>>(),
            vec![(1, 2), (2, 0)]
        );
        assert!(r.decompose(&r.zero()).is_err());
    }

    #[test]
    fn representation_round_trip_exhaustive() {
        for r in [
            r313(&[1, 0, 1]),
            r313(&[2, 1, 0]),
            RingContext::constacyclic(3, 1, 1, 3, 2, &[2, 0, 1]).unwrap(),
        ] {
            if r.size().unwrap() > 3u128.pow(9) {
                continue;
            }
            for a in r.elements() {
                assert_eq!(r.from_standard(&r.to_standard(&a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn unit_criterion_matches_exhaustive_search() {
        let rings = [
            RingContext::constacyclic(2, 1, 1, 2, 1, &[1, 1]).unwrap(),
            RingContext::constacyclic(3, 1, 1, 2, 1, &[1, 0]).unwrap(),
            RingContext::constacyclic(3, 1, 1, 1, 2, &[2]).unwrap(),
            RingContext::quadratic_trace(2, 1, 1, 2, &[1, 1]).unwrap(),
        ];
        for r in rings {
            let all: Vec<_> = r.elements().collect();
            let one = r.one();
            for a in &all {
                let exhaustive = all.iter().any(|b| r.mul(a, b) == one);
                assert_eq!(r.is_unit(a), exhaustive);
                assert_eq!(r.is_unit_linear(a), exhaustive);
            }
        }
    }

    #[test]
    fn quadratic_trace_relation() {
        for (p, delta) in [(2u32, vec![1i64, 1]), (5, vec![2, 3])] {
            let r = RingContext::quadratic_trace(p, 1, 1, 2, &delta).unwrap();
            let f = r.field();
            assert_eq!(r.k(), Some(1));
            assert_eq!(f.pow(r.alpha0().unwrap(), p as u64), f.from_int(2));
            let phi_ps = r.pow(&r.phi(), r.ps() as u64);
            // level 0 vanishes and level 1 reads -(d1 (x^{p^s} + 2 d0))
            assert!(r.level_poly(&phi_ps, 0).is_zero());
            let d0 = f.from_int(delta[0]);
            let d1 = f.from_int(delta[1]);
            let expect = f.poly_neg(
                &f.poly_scale(
                    &FieldPoly::new(
                        std::iter::once(f.mul(f.from_int(2), d0))
                            .chain(std::iter::repeat_n(FieldElement::ZERO, r.ps() - 1))
                            .chain(std::iter::once(f.one()))
                            .collect(),
                    ),
                    d1,
                ),
            );
            assert_eq!(r.level_poly(&phi_ps, 1), expect);
        }
    }

    proptest! {
        #[test]
        fn mult_is_commutative_and_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let r = RingContext::constacyclic(3, 1, 1, 2, 2, &[1, 1]).unwrap();
            let n = r.size().unwrap();
            let (a, b, c) = (r.element_at(a as u128 % n), r.element_at(b as u128 % n), r.element_at(c as u128 % n));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.mul_x_coords(&a.coords), r.mul(&r.x(), &a).coords);
        }

        #[test]
        fn decompose_round_trip(idx in any::<u64>()) {
            let r = r313(&[2, 0, 1]);
            let a = r.element_at(idx as u128 % r.size().unwrap());
            prop_assume!(!a.is_zero());
            let parts = r.decompose(&a).unwrap();
            prop_assert_eq!(r.recompose(&parts).unwrap(), a);
        }
    }
}
