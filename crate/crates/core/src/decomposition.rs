//! CRT splittings of `x^{2p^s} - delta` and `x^{3p^s} - delta`.

use crate::chain::{ChainRing, ChainRingElement};
use crate::error::{invalid, unsupported, Error, Result};
use crate::field::{FieldElement, FieldPoly};
use crate::ideal::Ideal;
use crate::quotient::{ModulusKind, QuotElement, RingContext};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitCase {
    /// `delta = dt^2`: components `x^{p^s} - dt` and `x^{p^s} + dt`.
    Square {
        delta_tilde: ChainRingElement,
    },
    NonSquare,
    /// `delta = dt^3` and `p^m = 1 mod 3`: three components
    /// `x^{p^s} - w dt` for the cube roots of unity `w in {1, b, c}`.
    Cube1mod3 {
        delta_tilde: ChainRingElement,
        b: FieldElement,
        c: FieldElement,
    },
    /// `delta = dt^3` and `p^m = 2 mod 3`: `x^{p^s} - dt` times the trace modulus.
    Cube2mod3 {
        delta_tilde: ChainRingElement,
    },
    NonCube,
}

impl SplitCase {
    pub fn name(&self) -> &'static str {
        match self {
            SplitCase::Square { .. } => "square",
            SplitCase::NonSquare => "non-square",
            SplitCase::Cube1mod3 { .. } => "cube-1mod3",
            SplitCase::Cube2mod3 { .. } => "cube-2mod3",
            SplitCase::NonCube => "non-cube",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitPlan {
    pub case: SplitCase,
    /// Component moduli, empty when the ring does not split.
    pub factors: Vec<ModulusKind>,
}

/// Products in `R^t[x]`, constant term first.
fn chain_poly_mul(r: &ChainRing, a: &[ChainRingElement], b: &[ChainRingElement]) -> Vec<ChainRingElement> {
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

/// Full `x`-coefficient list of a ring's modulus.
pub fn modulus_poly(ring: &RingContext) -> Vec<ChainRingElement> {
    let ps = ring.ps();
    let chain = ring.chain();
    let mut out = vec![chain.zero(); ring.x_degree() + 1];
    for (i, c) in ring.spec().f_coeffs.iter().enumerate() {
        out[i * ps] = c.clone();
    }
    out
}

/// The nontrivial cube roots of unity in index order.
fn cube_roots_of_unity(ring: &RingContext) -> Vec<FieldElement> {
    let f = ring.field();
    f.elements()
        .filter(|&w| w != f.one() && f.pow(w, 3) == f.one())
        .collect()
}

pub fn plan_split(ring: &RingContext) -> Result<SplitPlan> {
    let (n, delta) = match &ring.spec().kind {
        ModulusKind::Constacyclic { n, delta } => (*n, delta.clone()),
        ModulusKind::QuadraticTrace { .. } => return unsupported("only constacyclic moduli are split"),
    };
    let chain = ring.chain();
    let f = ring.field();
    let p = ring.p();
    let one = |d: ChainRingElement| ModulusKind::Constacyclic { n: 1, delta: d };
    let plan = match n {
        2 => {
            if p == 2 {
                return unsupported("n = 2 needs an odd characteristic");
            }
            if chain.is_nth_power(&delta, 2)? {
                let dt = chain.nth_root_lift(&delta, 2)?;
                SplitPlan {
                    factors: vec![one(dt.clone()), one(chain.neg(&dt))],
                    case: SplitCase::Square { delta_tilde: dt },
                }
            } else {
                SplitPlan {
                    case: SplitCase::NonSquare,
                    factors: Vec::new(),
                }
            }
        }
        3 => {
            if p == 3 {
                return unsupported("n = 3 needs gcd(3, p) = 1");
            }
            if chain.is_nth_power(&delta, 3)? {
                let dt = chain.nth_root_lift(&delta, 3)?;
                if f.order() % 3 == 1 {
                    let roots = cube_roots_of_unity(ring);
                    let (b, c) = match roots.as_slice() {
                        [b, c] => (*b, *c),
                        _ => return Err(Error::Paradox("expected two nontrivial cube roots of unity".into())),
                    };
                    SplitPlan {
                        factors: vec![one(dt.clone()), one(chain.scale(&dt, b)), one(chain.scale(&dt, c))],
                        case: SplitCase::Cube1mod3 { delta_tilde: dt, b, c },
                    }
                } else {
                    SplitPlan {
                        factors: vec![one(dt.clone()), ModulusKind::QuadraticTrace { delta: dt.clone() }],
                        case: SplitCase::Cube2mod3 { delta_tilde: dt },
                    }
                }
            } else {
                SplitPlan {
                    case: SplitCase::NonCube,
                    factors: Vec::new(),
                }
            }
        }
        _ => return unsupported(format!("no splitting for n = {n}")),
    };
    if plan.factors.is_empty() && !ring.phi_irreducible() {
        return Err(Error::Paradox(format!(
            "{} case but the base polynomial is reducible",
            plan.case.name()
        )));
    }
    Ok(plan)
}

/// The isomorphism onto the product of component rings.
#[derive(Debug, Clone)]
pub struct Crt {
    ring: Arc<RingContext>,
    plan: SplitPlan,
    components: Vec<Arc<RingContext>>,
    idempotents: Vec<QuotElement>,
}

impl Crt {
    pub fn new(ring: &Arc<RingContext>) -> Result<Self> {
        let plan = plan_split(ring)?;
        if plan.factors.is_empty() {
            return invalid(format!("the {} case has no splitting", plan.case.name()));
        }
        let components = plan
            .factors
            .iter()
            .map(|k| RingContext::new(ring.field().clone(), ring.s(), ring.t(), k.clone()))
            .collect::<Result<Vec<_>>>()?;
        let chain = ring.chain();
        let product = components
            .iter()
            .map(|c| modulus_poly(c))
            .reduce(|acc, g| chain_poly_mul(chain, &acc, &g))
            .expect("at least one component");
        if product != modulus_poly(ring) {
            return Err(Error::Paradox("component moduli do not multiply back".into()));
        }
        let idempotents = Self::lift_idempotents(ring, &components)?;
        Ok(Crt {
            ring: ring.clone(),
            plan,
            components,
            idempotents,
        })
    }

    /// Bezout idempotents mod `u`, then lifted by `e <- 3e^2 - 2e^3`.
    fn lift_idempotents(ring: &Arc<RingContext>, comps: &[Arc<RingContext>]) -> Result<Vec<QuotElement>> {
        let f = ring.field();
        let residues: Vec<FieldPoly> = comps
            .iter()
            .map(|c| FieldPoly::new(modulus_poly(c).iter().map(|x| x.part(0)).collect()))
            .collect();
        let three = ring.scalar(f.from_int(3));
        let two = ring.scalar(f.from_int(2));
        let mut out = Vec::new();
        for i in 0..comps.len() {
            let g = residues
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(FieldPoly::one(), |acc, (_, r)| f.poly_mul(&acc, r));
            let (gcd, s, _) = f.poly_xgcd(&g, &residues[i]);
            if gcd != FieldPoly::one() {
                return Err(Error::Paradox("component moduli are not coprime mod u".into()));
            }
            let mut e = ring.embed_field_poly(0, &f.poly_mul(&s, &g))?;
            for _ in 0..8 {
                let e2 = ring.mul(&e, &e);
                if e2 == e {
                    break;
                }
                let e3 = ring.mul(&e2, &e);
                e = ring.sub(&ring.mul(&three, &e2), &ring.mul(&two, &e3));
            }
            out.push(e);
        }
        let total = out.iter().fold(ring.zero(), |acc, e| ring.add(&acc, e));
        if total != ring.one() {
            return Err(Error::Paradox("idempotents do not sum to one".into()));
        }
        for (i, a) in out.iter().enumerate() {
            for (j, b) in out.iter().enumerate() {
                let prod = ring.mul(a, b);
                let expect = if i == j { a.clone() } else { ring.zero() };
                if prod != expect {
                    return Err(Error::Paradox("idempotents are not orthogonal".into()));
                }
            }
        }
        Ok(out)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn plan(&self) -> &SplitPlan {
        &self.plan
    }

    pub fn components(&self) -> &[Arc<RingContext>] {
        &self.components
    }

    pub fn idempotents(&self) -> &[QuotElement] {
        &self.idempotents
    }

    /// Reduction modulo each component modulus.
    pub fn forward(&self, a: &QuotElement) -> Vec<QuotElement> {
        let poly = self.ring.to_chain_poly(a);
        self.components.iter().map(|c| c.from_chain_poly(&poly)).collect()
    }

    /// `sum_i lift(a_i) e_i`.
    pub fn backward(&self, parts: &[QuotElement]) -> Result<QuotElement> {
        if parts.len() != self.components.len() {
            return invalid("one element per component expected");
        }
        let r = &self.ring;
        let mut acc = r.zero();
        for ((a, c), e) in parts.iter().zip(&self.components).zip(&self.idempotents) {
            if a.coords().len() != c.dim() {
                return invalid("component element has the wrong size");
            }
            let lifted = r.from_chain_poly(&c.to_chain_poly(a));
            acc = r.add(&acc, &r.mul(&lifted, e));
        }
        Ok(acc)
    }

    /// Images of an ideal in each component.
    pub fn forward_ideal(&self, ideal: &Ideal) -> Result<Vec<Ideal>> {
        let images: Vec<Vec<QuotElement>> = ideal.basis_elements().iter().map(|b| self.forward(b)).collect();
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let gens: Vec<_> = images.iter().map(|img| img[i].clone()).collect();
                Ideal::span(c, &gens)
            })
            .collect()
    }

    /// `I_1 x ... x I_r` pulled back to the undecomposed ring.
    pub fn ideal_product(&self, comps: &[Ideal]) -> Result<Ideal> {
        if comps.len() != self.components.len() {
            return invalid("one ideal per component expected");
        }
        let mut gens = Vec::new();
        for (i, id) in comps.iter().enumerate() {
            if **id.ring() != *self.components[i] {
                return invalid(format!("ideal {i} lives in a different component ring"));
            }
            for g in id.basis_elements() {
                let mut parts: Vec<QuotElement> = self.components.iter().map(|c| c.zero()).collect();
                parts[i] = g;
                gens.push(self.backward(&parts)?);
            }
        }
        Ideal::span(&self.ring, &gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_split() {
        let r = RingContext::constacyclic(3, 1, 1, 2, 2, &[1, 0]).unwrap();
        let plan = plan_split(&r).unwrap();
        assert!(matches!(plan.case, SplitCase::Square { .. }));
        let crt = Crt::new(&r).unwrap();
        assert_eq!(crt.components().len(), 2);
        assert_eq!(
            crt.forward(&r.one()),
            vec![crt.components()[0].one(), crt.components()[1].one()]
        );
    }

    #[test]
    fn non_square_is_irreducible() {
        let r = RingContext::constacyclic(3, 1, 1, 2, 2, &[2, 0]).unwrap();
        assert_eq!(plan_split(&r).unwrap().case, SplitCase::NonSquare);
        assert!(r.phi_irreducible());
        assert!(Crt::new(&r).is_err());
    }

    #[test]
    fn cube_1mod3_over_f7() {
        let r = RingContext::constacyclic(7, 1, 1, 1, 3, &[1]).unwrap();
        let plan = plan_split(&r).unwrap();
        let f = r.field();
        match plan.case {
            SplitCase::Cube1mod3 { b, c, .. } => {
                assert_eq!((b, c), (f.from_int(2), f.from_int(4)));
                assert_eq!(f.mul(b, c), f.one());
                assert_eq!(f.add(b, c), f.from_int(-1));
            }
            other => panic!("unexpected {other:?}"),
        }
        Crt::new(&r).unwrap();
    }

    #[test]
    fn cube_2mod3_over_f2() {
        let r = RingContext::constacyclic(2, 1, 1, 2, 3, &[1, 0]).unwrap();
        let plan = plan_split(&r).unwrap();
        assert!(matches!(plan.case, SplitCase::Cube2mod3 { .. }));
        assert!(matches!(plan.factors[1], ModulusKind::QuadraticTrace { .. }));
        let crt = Crt::new(&r).unwrap();
        assert_eq!(crt.components()[1].spec().base_poly.degree(), Some(2));
    }

    #[test]
    fn cube_1mod3_over_f4() {
        let field = Arc::new(FieldContext::new(2, 2).unwrap());
        let chain = ChainRing::new(field.clone(), 2).unwrap();
        let delta = chain.one();
        let r = RingContext::new(field, 1, 2, ModulusKind::Constacyclic { n: 3, delta }).unwrap();
        assert!(matches!(plan_split(&r).unwrap().case, SplitCase::Cube1mod3 { .. }));
    }

    #[test]
    fn unsupported_n() {
        let r = RingContext::constacyclic(3, 1, 1, 1, 1, &[1]).unwrap();
        assert!(matches!(plan_split(&r), Err(Error::UnsupportedParameter(_))));
    }

    #[test]
    fn crt_is_a_ring_isomorphism_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in [
            RingContext::constacyclic(3, 1, 1, 2, 2, &[1, 1]).unwrap(),
            RingContext::constacyclic(2, 1, 1, 2, 3, &[1, 1]).unwrap(),
            RingContext::constacyclic(7, 1, 1, 1, 3, &[6]).unwrap(),
        ] {
            let crt = Crt::new(&r).unwrap();
            let n = r.size().unwrap();
            for _ in 0..200 {
                let a = r.element_at(rng.gen_range(0..n));
                let b = r.element_at(rng.gen_range(0..n));
                let fa = crt.forward(&a);
                let fb = crt.forward(&b);
                assert_eq!(crt.backward(&fa).unwrap(), a);
                let fab = crt.forward(&r.mul(&a, &b));
                for (i, c) in crt.components().iter().enumerate() {
                    assert_eq!(fab[i], c.mul(&fa[i], &fb[i]));
                }
            }
        }
    }

    #[test]
    fn ideal_product_examples() {
        let r = RingContext::constacyclic(3, 1, 1, 1, 2, &[1]).unwrap();
        let crt = Crt::new(&r).unwrap();
        let wholes: Vec<_> = crt.components().iter().map(Ideal::whole).collect();
        let zeros: Vec<_> = crt.components().iter().map(Ideal::zero).collect();
        assert_eq!(crt.ideal_product(&wholes).unwrap(), Ideal::whole(&r));
        assert_eq!(crt.ideal_product(&zeros).unwrap(), Ideal::zero(&r));
        let c0 = &crt.components()[0];
        let mixed = [
            Ideal::principal(c0, &c0.phi()).unwrap(),
            Ideal::whole(&crt.components()[1]),
        ];
        let prod = crt.ideal_product(&mixed).unwrap();
        assert_eq!(
            prod.card_exponent(),
            mixed[0].card_exponent() + mixed[1].card_exponent()
        );
        assert_eq!(crt.forward_ideal(&prod).unwrap(), mixed.to_vec());
    }
}
