use chainring_core::chain::ChainRing;
use chainring_core::decomposition::{modulus_poly, plan_split, Crt, SplitCase};
use chainring_core::oracle::{crt_laws, enumerate_ideals, DEFAULT_CAP};
use chainring_core::{FieldContext, ModulusKind, RingContext};
use std::collections::HashSet;
use std::sync::Arc;

fn ring_over(p: u32, m: u32, t: usize, n: usize, delta: &[usize]) -> Arc<RingContext> {
    let f = Arc::new(FieldContext::new(p, m).unwrap());
    let c = ChainRing::new(f.clone(), t).unwrap();
    let parts: Vec<_> = delta.iter().map(|&i| f.from_index(i).unwrap()).collect();
    let delta = c.element(&parts).unwrap();
    RingContext::new(f, 1, t, ModulusKind::Constacyclic { n, delta }).unwrap()
}

#[test]
fn split_case_agrees_with_search() {
    for (p, m, t) in [(3, 1, 1), (3, 1, 2), (5, 1, 2), (2, 1, 2), (2, 2, 2), (7, 1, 1)] {
        let f = Arc::new(FieldContext::new(p, m).unwrap());
        let c = ChainRing::new(f.clone(), t).unwrap();
        for n in [2usize, 3] {
            if n as u32 == p || (n == 2 && p == 2) {
                continue;
            }
            let powers: HashSet<_> = c.elements().map(|y| c.pow(&y, n as u64)).collect();
            for d in c.units() {
                let r = RingContext::new(f.clone(), 1, t, ModulusKind::Constacyclic { n, delta: d.clone() }).unwrap();
                let plan = plan_split(&r).unwrap();
                let splits = !plan.factors.is_empty();
                assert_eq!(splits, powers.contains(&d), "p={p} m={m} t={t} n={n} {}", c.format(&d));
                if !splits {
                    assert!(r.phi_irreducible());
                }
            }
        }
    }
}

#[test]
fn components_multiply_back_to_the_modulus() {
    for r in [
        RingContext::constacyclic(3, 1, 1, 2, 2, &[1, 0]).unwrap(),
        RingContext::constacyclic(3, 1, 1, 2, 2, &[1, 1]).unwrap(),
        RingContext::constacyclic(2, 1, 1, 2, 3, &[1, 1]).unwrap(),
        ring_over(2, 2, 2, 3, &[1, 2]),
    ] {
        let crt = Crt::new(&r).unwrap();
        let chain = r.chain();
        let mut prod = vec![chain.one()];
        for comp in crt.components() {
            let g = modulus_poly(comp);
            let mut out = vec![chain.zero(); prod.len() + g.len() - 1];
            for (i, a) in prod.iter().enumerate() {
                for (j, b) in g.iter().enumerate() {
                    out[i + j] = chain.add(&out[i + j], &chain.mul(a, b));
                }
            }
            prod = out;
        }
        assert_eq!(prod, modulus_poly(&r));
    }
}

#[test]
fn crt_laws_on_small_splits() {
    for r in [
        RingContext::constacyclic(3, 1, 1, 1, 2, &[1]).unwrap(),
        RingContext::constacyclic(3, 1, 1, 2, 2, &[1, 2]).unwrap(),
        RingContext::constacyclic(2, 1, 1, 2, 3, &[1, 0]).unwrap(),
        ring_over(2, 2, 1, 3, &[1]),
    ] {
        let crt = Crt::new(&r).unwrap();
        let ideals = enumerate_ideals(&r, DEFAULT_CAP).unwrap();
        let a = crt_laws(&crt, &ideals, DEFAULT_CAP, 200).unwrap();
        assert!(a.pass, "{:?}: {:?}", r.descriptor(), a.counterexample);
    }
}

#[test]
fn cube_roots_of_unity_over_f4() {
    let r = ring_over(2, 2, 2, 3, &[1, 1]);
    let f = r.field().clone();
    let plan = plan_split(&r).unwrap();
    let SplitCase::Cube1mod3 { b, c, .. } = plan.case else {
        panic!("expected the three-factor split, got {}", plan.case.name());
    };
    assert_eq!(f.mul(b, c), f.one());
    assert_eq!(f.add(b, c), f.neg(f.one()));
    assert_eq!(plan.factors.len(), 3);
    assert!(Crt::new(&r).is_ok());
}

#[test]
fn non_splitting_cases() {
    let r = RingContext::constacyclic(3, 1, 1, 2, 2, &[2, 0]).unwrap();
    assert_eq!(plan_split(&r).unwrap().case, SplitCase::NonSquare);
    assert!(Crt::new(&r).is_err());
    let r = ring_over(2, 2, 1, 3, &[2]);
    assert_eq!(plan_split(&r).unwrap().case, SplitCase::NonCube);
    assert!(r.phi_irreducible());
}

#[test]
fn two_mod_three_cube_has_a_trace_component() {
    let r = RingContext::constacyclic(2, 1, 1, 2, 3, &[1, 1]).unwrap();
    let plan = plan_split(&r).unwrap();
    assert!(matches!(plan.case, SplitCase::Cube2mod3 { .. }));
    assert!(matches!(plan.factors[1], ModulusKind::QuadraticTrace { .. }));
}

#[test]
fn splitting_needs_coprime_degree() {
    assert!(plan_split(&RingContext::constacyclic(3, 1, 1, 1, 1, &[1]).unwrap()).is_err());
    assert!(RingContext::constacyclic(3, 1, 1, 1, 3, &[1]).is_err());
}
