//! Generator normal forms and the eight-type classification for `t = 3`.

use crate::error::{unsupported, Error, Result};
use crate::field::FieldPoly;
use crate::ideal::Ideal;
use crate::lemmas::in_t3_family;
use crate::quotient::{QuotElement, RingContext};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Minimal generators `u^l phi^{T_l} + (higher levels)`, one per level used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralShape {
    pub levels: Vec<usize>,
    pub exponents: Vec<usize>,
    pub generators: Vec<QuotElement>,
}

/// Greedy over levels: take the witness at level `l` whenever the ideal built
/// so far has a larger `l`-th torsion than `I`. Once every torsion agrees the
/// two ideals have the same size, so they coincide.
pub fn general_shape(ideal: &Ideal) -> Result<GeneralShape> {
    let ring = ideal.ring();
    let target = ideal.torsion_profile()?;
    let mut built = Ideal::zero(ring);
    let mut shape = GeneralShape {
        levels: Vec::new(),
        exponents: Vec::new(),
        generators: Vec::new(),
    };
    for level in 0..ring.t() {
        if built.torsion(level)? > target.degrees[level] {
            let w = ideal.witness(level)?.expect("finite torsion has a witness");
            built = built.sum(&Ideal::principal(ring, &w)?)?;
            shape.levels.push(level);
            shape.exponents.push(target.degrees[level]);
            shape.generators.push(w);
        }
    }
    if built != *ideal {
        return Err(Error::ClassificationFailure(format!(
            "witnesses at levels {:?} span a smaller ideal",
            shape.levels
        )));
    }
    let mu = ideal.min_generator_count()?;
    if mu != shape.generators.len() {
        return Err(Error::ClassificationFailure(format!(
            "{} witnesses used but the ideal needs {mu} generators",
            shape.generators.len()
        )));
    }
    Ok(shape)
}

/// Parameters of one of the eight types. Absent entries do not occur in the
/// type's generator template (or multiply a zero cofactor).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdealType {
    pub tag: u8,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub c: Option<usize>,
    pub t0: Option<usize>,
    pub t1: Option<usize>,
    pub t2: Option<usize>,
    pub h0: Option<FieldPoly>,
    pub h1: Option<FieldPoly>,
    pub h2: Option<FieldPoly>,
    pub l: Option<usize>,
    pub m: Option<usize>,
    pub generators: Vec<QuotElement>,
    /// Whether the achieved parameters satisfy the template's inequalities.
    pub stated_bounds_hold: bool,
}

/// JSON form of an [`IdealType`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRecord {
    pub tag: u8,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub c: Option<usize>,
    pub t0: Option<usize>,
    pub t1: Option<usize>,
    pub t2: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub stated_bounds_hold: bool,
}

impl IdealType {
    pub fn record(&self) -> TypeRecord {
        TypeRecord {
            tag: self.tag,
            a: self.a,
            b: self.b,
            c: self.c,
            t0: self.t0,
            t1: self.t1,
            t2: self.t2,
            l: self.l,
            m: self.m,
            stated_bounds_hold: self.stated_bounds_hold,
        }
    }

    /// Torsional degrees the type predicts for its ideal.
    pub fn predicted_torsion(&self, ps: usize) -> [usize; 3] {
        let g = |v: Option<usize>| v.unwrap_or(ps);
        match self.tag {
            2 => [ps, ps, g(self.a)],
            3 => [ps, g(self.a), g(self.l)],
            4 => [ps, g(self.a), g(self.b)],
            5 => [g(self.a), g(self.l), g(self.m)],
            6 => [g(self.a), g(self.m), g(self.b)],
            7 => [g(self.a), g(self.b), g(self.m)],
            8 => [g(self.a), g(self.b), g(self.c)],
            _ => match self.a {
                Some(0) => [0, 0, 0],
                _ => [ps, ps, ps],
            },
        }
    }
}

/// `(phi-exponent, unit)` of the witness part at `level`, if nonzero.
fn part_at(ring: &RingContext, w: &QuotElement, level: usize) -> Result<(Option<usize>, Option<FieldPoly>)> {
    let parts = ring.decompose(w)?;
    Ok(match parts.into_iter().find(|p| p.level == level) {
        Some(p) => (Some(p.phi_exp), Some(p.unit)),
        None => (None, Some(FieldPoly::zero())),
    })
}

/// Every listed `(lo, hi)` pair with both sides present satisfies `lo < hi`.
fn chain_holds(pairs: &[(Option<usize>, Option<usize>)]) -> bool {
    pairs.iter().all(|&(lo, hi)| match (lo, hi) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    })
}

/// Eight-type classification for `t = 3`, `phi` irreducible, `k = 2`.
pub fn classify_t3(ideal: &Ideal) -> Result<IdealType> {
    let ring = ideal.ring().clone();
    if !in_t3_family(&ring) {
        return unsupported("the eight-type classification needs t = 3, an irreducible phi and k = 2");
    }
    let ps = ring.ps();
    if ideal.is_zero() || ideal.is_whole() {
        return Ok(IdealType {
            tag: 1,
            a: Some(if ideal.is_whole() { 0 } else { ps }),
            generators: vec![if ideal.is_whole() { ring.one() } else { ring.zero() }],
            stated_bounds_hold: true,
            ..Default::default()
        });
    }
    let tp = ideal.torsion_profile()?.degrees;
    let shape = general_shape(ideal)?;
    let gens = shape.generators.clone();
    let level_set = shape.levels.as_slice();
    let span = |g: &[QuotElement]| Ideal::span(&ring, g);
    let mut ty = IdealType {
        generators: gens.clone(),
        ..Default::default()
    };
    match level_set {
        [2] => {
            ty.tag = 2;
            ty.a = Some(tp[2]);
            ty.stated_bounds_hold = tp[2] < ps;
        }
        [1] | [1, 2] => {
            ty.tag = if level_set.len() == 1 { 3 } else { 4 };
            ty.a = Some(tp[1]);
            let (t, h) = part_at(&ring, &gens[0], 2)?;
            ty.t0 = t;
            ty.h0 = h;
            ty.l = Some(span(&gens[..1])?.smallest_u_level_exponent(2)?);
            if ty.tag == 4 {
                ty.b = Some(tp[2]);
                ty.stated_bounds_hold = chain_holds(&[(ty.t0, ty.b), (ty.b, ty.l), (ty.l, ty.a), (ty.a, Some(ps))]);
            } else {
                ty.stated_bounds_hold = chain_holds(&[(ty.t0, ty.l), (ty.l, ty.a), (ty.a, Some(ps))]);
            }
        }
        [0] => {
            ty.tag = 5;
            ty.a = Some(tp[0]);
            (ty.t0, ty.h0) = part_at(&ring, &gens[0], 1)?;
            (ty.t1, ty.h1) = part_at(&ring, &gens[0], 2)?;
            ty.l = Some(ideal.smallest_u_level_exponent(1)?);
            ty.m = Some(ideal.smallest_u_level_exponent(2)?);
            ty.stated_bounds_hold = chain_holds(&[
                (ty.t1, ty.t0),
                (ty.t0, ty.l),
                (ty.l, ty.a),
                (ty.a, Some(ps)),
                (ty.t1, ty.m),
                (ty.m, ty.l),
            ]);
        }
        [0, 2] => {
            ty.tag = 6;
            ty.a = Some(tp[0]);
            ty.b = Some(tp[2]);
            (ty.t0, ty.h0) = part_at(&ring, &gens[0], 1)?;
            (ty.t1, ty.h1) = part_at(&ring, &gens[0], 2)?;
            let sub = span(&gens[..1])?;
            ty.m = Some(sub.smallest_u_level_exponent(1)?);
            ty.l = Some(sub.smallest_u_level_exponent(2)?);
            ty.stated_bounds_hold = chain_holds(&[
                (ty.t1, ty.t0),
                (ty.t0, ty.a),
                (ty.a, Some(ps)),
                (ty.t1, ty.b),
                (ty.b, ty.l),
                (ty.l, ty.a),
                (ty.t0, ty.m),
                (ty.m, ty.l),
            ]);
        }
        [0, 1] => {
            ty.tag = 7;
            ty.a = Some(tp[0]);
            ty.b = Some(tp[1]);
            (ty.t0, ty.h0) = part_at(&ring, &gens[0], 1)?;
            (ty.t1, ty.h1) = part_at(&ring, &gens[0], 2)?;
            (ty.t2, ty.h2) = part_at(&ring, &gens[1], 2)?;
            ty.l = Some(span(&gens[..1])?.smallest_u_level_exponent(1)?);
            ty.m = Some(ideal.smallest_u_level_exponent(2)?);
            ty.stated_bounds_hold = chain_holds(&[
                (ty.t1, ty.t0),
                (ty.t0, ty.b),
                (ty.b, ty.l),
                (ty.l, ty.a),
                (ty.a, Some(ps)),
                (ty.t2, ty.b),
                (ty.t1, ty.m),
                (ty.t2, ty.m),
                (ty.m, ty.b),
            ]);
        }
        [0, 1, 2] => {
            ty.tag = 8;
            ty.a = Some(tp[0]);
            ty.b = Some(tp[1]);
            ty.c = Some(tp[2]);
            (ty.t0, ty.h0) = part_at(&ring, &gens[0], 1)?;
            (ty.t1, ty.h1) = part_at(&ring, &gens[0], 2)?;
            (ty.t2, ty.h2) = part_at(&ring, &gens[1], 2)?;
            ty.l = Some(span(&gens[..1])?.smallest_u_level_exponent(1)?);
            ty.m = Some(span(&gens[..2])?.smallest_u_level_exponent(2)?);
            ty.stated_bounds_hold = chain_holds(&[
                (ty.t1, ty.t0),
                (ty.t0, ty.a),
                (ty.a, Some(ps)),
                (ty.t1, ty.c),
                (ty.t2, ty.c),
                (ty.c, ty.b),
                (ty.b, ty.a),
                (ty.t0, ty.b),
                (ty.c, ty.m),
                (ty.b, ty.l),
            ]);
        }
        other => {
            return Err(Error::ClassificationFailure(format!(
                "unexpected level signature {other:?}"
            )));
        }
    }
    Ok(ty)
}

/// Outcome of the chain test.
#[derive(Debug, Clone)]
pub struct ChainVerdict {
    pub is_chain: bool,
    /// `<phi^i>` for `i = 0..=nilp_index`, when the lattice is a chain.
    pub chain: Vec<Ideal>,
    /// `<u, phi>`, which needs two generators, when it is not.
    pub witness: Option<Ideal>,
}

/// The ideals form a chain iff `k = 1` (or `t = 1`, where `<phi>` is the only
/// maximal ideal and `phi` is its uniformizer).
pub fn chain_check(ring: &Arc<RingContext>) -> Result<ChainVerdict> {
    if !ring.phi_irreducible() {
        return unsupported("chain test needs an irreducible base polynomial");
    }
    let is_chain = ring.t() == 1 || ring.k() == Some(1);
    if is_chain {
        let phi = ring.phi();
        let mut pw = ring.one();
        let mut chain = Vec::new();
        for _ in 0..=ring.nilp_index() {
            chain.push(Ideal::principal(ring, &pw)?);
            pw = ring.mul(&pw, &phi);
        }
        Ok(ChainVerdict {
            is_chain,
            chain,
            witness: None,
        })
    } else {
        Ok(ChainVerdict {
            is_chain,
            chain: Vec::new(),
            witness: Some(Ideal::span(ring, &[ring.u(), ring.phi()])?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<RingContext> {
        RingContext::constacyclic(3, 1, 1, 3, 1, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn classify_examples() {
        let r = ring();
        let ty = classify_t3(&Ideal::principal(&r, &r.basis_element(2, 0, 0)).unwrap()).unwrap();
        assert_eq!((ty.tag, ty.a), (2, Some(0)));
        let ty = classify_t3(&Ideal::principal(&r, &r.basis_element(1, 2, 0)).unwrap()).unwrap();
        assert_eq!((ty.tag, ty.a, ty.l), (3, Some(2), Some(2)));
        assert_eq!(ty.h0, Some(FieldPoly::zero()));
        assert_eq!(classify_t3(&Ideal::whole(&r)).unwrap().tag, 1);
        assert_eq!(classify_t3(&Ideal::zero(&r)).unwrap().tag, 1);
    }

    #[test]
    fn classifier_rejects_other_rings() {
        let r = RingContext::constacyclic(3, 1, 1, 3, 1, &[1, 1, 0]).unwrap();
        assert!(matches!(
            classify_t3(&Ideal::whole(&r)),
            Err(Error::UnsupportedParameter(_))
        ));
    }

    #[test]
    fn chain_examples() {
        let r = RingContext::constacyclic(3, 1, 1, 3, 1, &[1, 1, 0]).unwrap();
        let v = chain_check(&r).unwrap();
        assert!(v.is_chain);
        assert_eq!(v.chain.len(), 10);
        for (i, id) in v.chain.iter().enumerate() {
            assert_eq!(id.card_exponent(), 9 - i as u64);
        }
        let v = chain_check(&ring()).unwrap();
        assert!(!v.is_chain);
        let w = v.witness.unwrap();
        assert_eq!(w.min_generator_count().unwrap(), 2);
        let phi_ideal = Ideal::principal(&ring(), &ring().phi()).unwrap();
        assert!(!phi_ideal.contains(&ring().u()));

        let qt = RingContext::quadratic_trace(2, 1, 1, 3, &[1, 1, 0]).unwrap();
        let v = chain_check(&qt).unwrap();
        assert!(v.is_chain);
        for (i, id) in v.chain.iter().enumerate() {
            assert_eq!(id.card_exponent(), 2 * (6 - i as u64));
        }
    }
}
