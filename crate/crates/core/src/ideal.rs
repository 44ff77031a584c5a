//! Ideals as `F_{p^m}`-subspaces closed under multiplication by `x` and `u`.

use crate::error::{invalid, unsupported, Result};
use crate::field::FieldElement;
use crate::linalg::Echelon;
use crate::quotient::{LevelPart, QuotElement, RingContext};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<RingContext>,
    generators: Vec<QuotElement>,
    basis: Echelon,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Ideal {}

impl std::hash::Hash for Ideal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

/// Torsional degrees `T_0 >= T_1 >= ... >= T_{t-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionProfile {
    pub degrees: Vec<usize>,
}

impl TorsionProfile {
    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn is_monotone(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Closes `rows` under `x` and `u` starting from an existing echelon basis.
fn close(ring: &RingContext, basis: &mut Echelon, seeds: impl IntoIterator<Item = Vec<FieldElement>>) {
    let f = ring.field();
    let mut queue: VecDeque<Vec<FieldElement>> = seeds.into_iter().collect();
    while let Some(v) = queue.pop_front() {
        if let Some(row) = basis.insert(f, &v) {
            queue.push_back(ring.mul_x_coords(&row));
            if ring.t() > 1 {
                queue.push_back(ring.mul_u_coords(&row));
            }
        }
    }
}

impl Ideal {
    /// The smallest ideal containing `gens`.
    pub fn span(ring: &Arc<RingContext>, gens: &[QuotElement]) -> Result<Ideal> {
        if gens.iter().any(|g| g.coords().len() != ring.dim()) {
            return invalid("generator belongs to a different ring");
        }
        let mut basis = Echelon::new(ring.dim());
        close(ring, &mut basis, gens.iter().map(|g| g.coords().to_vec()));
        Ok(Ideal {
            ring: ring.clone(),
            generators: gens.to_vec(),
            basis,
        })
    }

    pub fn principal(ring: &Arc<RingContext>, g: &QuotElement) -> Result<Ideal> {
        Self::span(ring, std::slice::from_ref(g))
    }

    pub fn zero(ring: &Arc<RingContext>) -> Ideal {
        Self::span(ring, &[]).expect("empty generator list")
    }

    pub fn whole(ring: &Arc<RingContext>) -> Ideal {
        Self::principal(ring, &ring.one()).expect("unit generator")
    }

    /// Wraps a basis already known to be closed under `x` and `u`.
    pub(crate) fn from_basis(ring: &Arc<RingContext>, basis: Echelon) -> Ideal {
        let mut id = Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
            basis,
        };
        id.generators = id.basis_elements();
        id
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn generators(&self) -> &[QuotElement] {
        &self.generators
    }

    pub fn basis(&self) -> &Echelon {
        &self.basis
    }

    /// Element form of the reduced echelon rows.
    pub fn basis_elements(&self) -> Vec<QuotElement> {
        self.basis
            .rows()
            .iter()
            .map(|r| self.ring.from_coords(r.clone()).expect("row of the right length"))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ring.dim()
    }

    /// `log_p |I|`.
    pub fn card_exponent(&self) -> u64 {
        self.ring.m() as u64 * self.dim() as u64
    }

    pub fn contains(&self, a: &QuotElement) -> bool {
        a.coords().len() == self.ring.dim() && self.basis.contains(self.ring.field(), a.coords())
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.basis
            .rows()
            .iter()
            .all(|r| other.basis.contains(self.ring.field(), r))
    }

    fn same_ring(&self, other: &Ideal) -> Result<()> {
        if !Arc::ptr_eq(&self.ring, &other.ring) && *self.ring != *other.ring {
            return invalid("ideals live in different rings");
        }
        Ok(())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let f = self.ring.field();
        let mut basis = self.basis.clone();
        for r in other.basis.rows() {
            basis.insert(f, r);
        }
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(Ideal {
            ring: self.ring.clone(),
            generators,
            basis,
        })
    }

    /// Multiplies the ideal by `a`.
    pub fn times(&self, a: &QuotElement) -> Ideal {
        let gens: Vec<_> = self.basis_elements().iter().map(|b| self.ring.mul(b, a)).collect();
        Ideal::span(&self.ring, &gens).expect("same ring")
    }

    /// Replaces the stored generators, keeping the span.
    pub fn with_generators(mut self, gens: Vec<QuotElement>) -> Ideal {
        self.generators = gens;
        self
    }

    /// `F`-dimension of the level-`level` torsion image, read off the pivots.
    pub fn level_dim(&self, level: usize) -> usize {
        let n = self.ring.x_degree();
        self.basis.pivots().iter().filter(|&&p| p / n == level).count()
    }

    /// Smallest `phi`-exponent among pivots at `level`, `p^s` if none.
    fn pivot_torsion(&self, level: usize) -> usize {
        let n = self.ring.x_degree();
        self.basis
            .pivots()
            .iter()
            .filter(|&&p| p / n == level)
            .map(|&p| (p % n) / self.ring.d())
            .min()
            .unwrap_or(self.ring.ps())
    }

    /// The `level`-th torsional degree.
    pub fn torsion(&self, level: usize) -> Result<usize> {
        if !self.ring.phi_irreducible() {
            return unsupported("torsional degrees need an irreducible base polynomial");
        }
        if level >= self.ring.t() {
            return invalid(format!("level {level} outside 0..{}", self.ring.t()));
        }
        let tl = self.pivot_torsion(level);
        debug_assert_eq!(self.level_dim(level), self.ring.d() * (self.ring.ps() - tl));
        Ok(tl)
    }

    pub fn torsion_profile(&self) -> Result<TorsionProfile> {
        let degrees = (0..self.ring.t()).map(|l| self.torsion(l)).collect::<Result<_>>()?;
        Ok(TorsionProfile { degrees })
    }

    /// Predicted `log_p |I|` from the torsions: `m d (t p^s - sum T_i)`.
    pub fn torsion_card_exponent(&self) -> Result<u64> {
        let tp = self.torsion_profile()?;
        let r = &self.ring;
        Ok(r.m() as u64 * r.d() as u64 * (r.t() * r.ps() - tp.sum()) as u64)
    }

    /// Smallest `e` with `u^level phi^e` in `I + u^{level+1} R`, by a direct
    /// membership scan; `p^s` when no such `e` exists.
    pub fn smallest_u_level_exponent(&self, level: usize) -> Result<usize> {
        let r = &self.ring;
        if level >= r.t() {
            return invalid(format!("level {level} outside 0..{}", r.t()));
        }
        let f = r.field();
        let mut ext = self.basis.clone();
        for idx in r.index(level + 1, 0, 0)..r.dim() {
            let mut v = vec![FieldElement::ZERO; r.dim()];
            v[idx] = FieldElement::ONE;
            ext.insert(f, &v);
        }
        let phi = r.phi();
        let mut probe = r.basis_element(level, 0, 0);
        for e in 0..r.ps() {
            if ext.contains(f, probe.coords()) {
                return Ok(e);
            }
            probe = r.mul(&probe, &phi);
        }
        Ok(r.ps())
    }

    /// `I` times the maximal ideal `<u, phi>`.
    pub fn radical_product(&self) -> Ideal {
        let r = &self.ring;
        let mut gens = Vec::new();
        for row in self.basis.rows() {
            gens.push(r.from_coords(r.mul_u_coords(row)).expect("length"));
            gens.push(r.from_coords(r.mul_phi_coords(row)).expect("length"));
        }
        Ideal::span(r, &gens).expect("same ring")
    }

    /// Minimal number of generators, `dim(I / mI) / d` over the residue field.
    pub fn min_generator_count(&self) -> Result<usize> {
        if !self.ring.phi_irreducible() {
            return unsupported("the ring is not local when the base polynomial is reducible");
        }
        Ok((self.dim() - self.radical_product().dim()) / self.ring.d())
    }

    /// Echelon row whose pivot is `u^level phi^{T_level}`: its level part is
    /// exactly `phi^{T_level}` and each higher level part has `phi`-degree
    /// below that level's torsion.
    pub fn witness(&self, level: usize) -> Result<Option<QuotElement>> {
        let tl = self.torsion(level)?;
        if tl == self.ring.ps() {
            return Ok(None);
        }
        let col = self.ring.index(level, tl, 0);
        let pos = self
            .basis
            .pivots()
            .iter()
            .position(|&p| p == col)
            .expect("torsion pivot present");
        Ok(Some(self.ring.from_coords(self.basis.rows()[pos].clone())?))
    }

    /// Normal form of a witness, `u^level phi^{T} + sum_k u^k phi^{t_k} h_k`.
    pub fn witness_parts(&self, level: usize) -> Result<Option<Vec<LevelPart>>> {
        match self.witness(level)? {
            Some(w) => Ok(Some(self.ring.decompose(&w)?)),
            None => Ok(None),
        }
    }

    /// Sort key used for deterministic output.
    pub fn sort_key(&self) -> (usize, &[Vec<FieldElement>]) {
        (self.dim(), self.basis.rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> Arc<RingContext> {
        RingContext::constacyclic(3, 1, 1, 3, 1, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn span_examples() {
        let r = ring();
        assert_eq!(Ideal::whole(&r).dim(), 9);
        assert_eq!(Ideal::zero(&r).dim(), 0);
        assert_eq!(Ideal::principal(&r, &r.basis_element(2, 0, 0)).unwrap().dim(), 3);
    }

    #[test]
    fn membership_examples() {
        let r = ring();
        let g = r.add(&r.basis_element(1, 1, 0), &r.basis_element(2, 0, 0));
        let i = Ideal::principal(&r, &g).unwrap();
        for idx in [0u128, 17, 4000, 19682] {
            assert!(i.contains(&r.mul(&g, &r.element_at(idx))));
        }
        assert!(!Ideal::zero(&r).contains(&r.one()));
        assert!(!Ideal::principal(&r, &r.u()).unwrap().contains(&r.one()));
    }

    #[test]
    fn sum_examples() {
        let r = ring();
        let i = Ideal::principal(&r, &r.basis_element(1, 2, 0)).unwrap();
        assert_eq!(i.sum(&Ideal::zero(&r)).unwrap(), i);
        assert_eq!(i.sum(&Ideal::whole(&r)).unwrap(), Ideal::whole(&r));
        assert_eq!(i.sum(&i).unwrap(), i);
    }

    #[test]
    fn torsion_examples() {
        let r = ring();
        let tp = |i: &Ideal| i.torsion_profile().unwrap().degrees;
        assert_eq!(tp(&Ideal::zero(&r)), vec![3, 3, 3]);
        assert_eq!(tp(&Ideal::whole(&r)), vec![0, 0, 0]);
        for a in 0..3 {
            let i = Ideal::principal(&r, &r.basis_element(2, a, 0)).unwrap();
            assert_eq!(tp(&i), vec![3, 3, a]);
        }
    }

    #[test]
    fn cardinality_examples() {
        let r = ring();
        assert_eq!(Ideal::whole(&r).card_exponent(), 9);
        assert_eq!(Ideal::zero(&r).card_exponent(), 0);
        let i = Ideal::principal(&r, &r.basis_element(2, 1, 0)).unwrap();
        assert_eq!(i.card_exponent(), 2);
        assert_eq!(i.torsion_card_exponent().unwrap(), 2);
    }

    #[test]
    fn smallest_exponent_examples() {
        let r = ring();
        let i = Ideal::principal(&r, &r.basis_element(2, 2, 0)).unwrap();
        assert_eq!(i.smallest_u_level_exponent(2).unwrap(), 2);
        // u phi^2 + u^2 h, h a unit: closed form min{2, 3 - 2 + 0} = 1
        let g = r.add(&r.basis_element(1, 2, 0), &r.basis_element(2, 0, 0));
        let i = Ideal::principal(&r, &g).unwrap();
        assert_eq!(i.smallest_u_level_exponent(2).unwrap(), 1);
        let w = Ideal::whole(&r);
        for l in 0..3 {
            assert_eq!(w.smallest_u_level_exponent(l).unwrap(), 0);
        }
    }

    #[test]
    fn phi_power_and_u_k_generate_the_same_ideal() {
        for delta in [[1i64, 0, 1], [2, 2, 0], [1, 0, 2]] {
            let r = RingContext::constacyclic(3, 1, 1, 3, 1, &delta).unwrap();
            let k = r.k().unwrap();
            let a = Ideal::principal(&r, &r.pow(&r.phi(), r.ps() as u64)).unwrap();
            let b = Ideal::principal(&r, &r.basis_element(k, 0, 0)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witness_shape() {
        let r = ring();
        let g = r.add(&r.basis_element(1, 2, 0), &r.basis_element(2, 0, 0));
        let i = Ideal::principal(&r, &g).unwrap();
        let parts = i.witness_parts(1).unwrap().unwrap();
        assert_eq!((parts[0].level, parts[0].phi_exp), (1, 2));
        assert_eq!(parts[0].unit, crate::field::FieldPoly::one());
        assert_eq!(i.min_generator_count().unwrap(), 1);
        let two = Ideal::span(&r, &[r.u(), r.phi()]).unwrap();
        assert_eq!(two.min_generator_count().unwrap(), 2);
    }

    proptest! {
        #[test]
        fn span_is_closed_and_canonical(a in any::<u64>(), b in any::<u64>()) {
            let r = ring();
            let n = r.size().unwrap();
            let (ga, gb) = (r.element_at(a as u128 % n), r.element_at(b as u128 % n));
            let i = Ideal::span(&r, &[ga.clone(), gb.clone()]).unwrap();
            let j = Ideal::span(&r, &[gb, ga]).unwrap();
            prop_assert_eq!(&i, &j);
            for e in i.basis_elements() {
                prop_assert!(i.contains(&r.mul(&e, &r.x())));
                prop_assert!(i.contains(&r.mul(&e, &r.u())));
            }
            let tp = i.torsion_profile().unwrap();
            prop_assert!(tp.is_monotone());
            prop_assert_eq!(i.torsion_card_exponent().unwrap(), i.card_exponent());
        }
    }
}
