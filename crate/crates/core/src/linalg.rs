//! Incremental Gaussian elimination over `F_{p^m}`.

use crate::field::{FieldContext, FieldElement};

/// A subspace of `F^n` kept in reduced row echelon form.
///
/// Rows are sorted by pivot column, every pivot is `1`, and every pivot
/// column is zero outside its own row. Two subspaces are equal iff their
/// `rows` are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Echelon {
    width: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

pub(crate) fn first_nonzero(v: &[FieldElement]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis in place; the result is zero iff `v`
    /// lies in the span.
    pub fn reduce(&self, f: &FieldContext, v: &mut [FieldElement]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row).skip(piv) {
                if !r.is_zero() {
                    *x = f.add(*x, f.mul(nc, r));
                }
            }
        }
    }

    pub fn contains(&self, f: &FieldContext, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        first_nonzero(&w).is_none()
    }

    /// Adds `v` to the span. Returns the normalized new row when the rank grew.
    pub fn insert(&mut self, f: &FieldContext, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        debug_assert_eq!(v.len(), self.width);
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        let piv = first_nonzero(&w)?;
        let inv = f.inv(w[piv]).expect("nonzero pivot");
        for x in w.iter_mut().skip(piv) {
            *x = f.mul(*x, inv);
        }
        // clear the new pivot column from the existing rows
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in row.iter_mut().zip(&w).skip(piv) {
                if !r.is_zero() {
                    *x = f.add(*x, f.mul(nc, r));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, w.clone());
        Some(w)
    }

    /// Solves `x * M = target` for a row vector `x`, where `M` is given by its
    /// rows. Returns `None` when the system is inconsistent.
    pub fn solve_left(
        f: &FieldContext,
        m_rows: &[Vec<FieldElement>],
        target: &[FieldElement],
    ) -> Option<Vec<FieldElement>> {
        let n = m_rows.len();
        let w = target.len();
        // augment each row with an identity block to track combinations
        let mut ech = Echelon::new(w + n);
        for (i, r) in m_rows.iter().enumerate() {
            let mut a = r.clone();
            a.resize(w + n, FieldElement::ZERO);
            a[w + i] = FieldElement::ONE;
            ech.insert(f, &a);
        }
        let mut t = target.to_vec();
        t.resize(w + n, FieldElement::ZERO);
        ech.reduce(f, &mut t);
        if t[..w].iter().any(|c| !c.is_zero()) {
            return None;
        }
        // t = target - x*M restricted to the tracking block reads -x
        Some(t[w..].iter().map(|&c| f.neg(c)).collect())
    }
}
