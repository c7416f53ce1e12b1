//! Exact Gaussian elimination over the coefficient field, plus helpers
//! for moving between polynomials and coordinate vectors on a monomial
//! basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::poly::{MultiPoly, Ring};
use crate::scalar::{FieldSpec, Scalar};

/// Row-echelon workspace: rows are kept reduced against each other.
pub struct RowSpace {
    field: FieldSpec,
    ncols: usize,
    /// (pivot column, reduced row), sorted by pivot column.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowSpace {
    pub fn new(field: FieldSpec, ncols: usize) -> RowSpace {
        RowSpace { field, ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<Scalar>> {
        self.rows.iter().map(|(_, r)| r)
    }

    /// Reduces `v` against the stored rows; returns the remainder.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (piv, row) in &self.rows {
            if !v[*piv].is_zero() {
                let c = v[*piv].clone();
                for j in 0..self.ncols {
                    v[j] = v[j].sub(&c.mul(&row[j]));
                }
            }
        }
        v
    }

    /// Inserts `v` if independent of the current rows. Returns true when
    /// the row enlarged the space.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(v);
        let piv = match v.iter().position(|c| !c.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let inv = v[piv].inv();
        for c in v.iter_mut() {
            *c = c.mul(&inv);
        }
        // back-substitute into existing rows
        for (_, row) in self.rows.iter_mut() {
            if !row[piv].is_zero() {
                let c = row[piv].clone();
                for j in 0..self.ncols {
                    row[j] = row[j].sub(&c.mul(&v[j]));
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < piv);
        self.rows.insert(at, (piv, v));
        true
    }

    pub fn contains(&self, v: Vec<Scalar>) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }
}

/// Kernel basis of the linear map x -> A x, where `rows` are the rows of
/// A (each of length `ncols`). Deterministic reduced basis.
pub fn kernel_basis(field: FieldSpec, rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    // Row-reduce A, track pivot columns, read off the free-variable basis.
    let mut rs = RowSpace::new(field, ncols);
    for r in rows {
        rs.insert(r.clone());
    }
    let pivots: Vec<usize> = rs.rows.iter().map(|(p, _)| *p).collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (piv, row) in &rs.rows {
            v[*piv] = row[free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solves sum_j x_j * rows[j] = target. Returns one solution (free
/// variables set to zero), or None when the target is outside the span.
pub fn solve_combination(
    field: FieldSpec,
    rows: &[Vec<Scalar>],
    target: &[Scalar],
) -> Option<Vec<Scalar>> {
    let ncols = target.len();
    // Augment each row with the standard basis vector tracking it.
    let n = rows.len();
    let mut rs = RowSpace::new(field, ncols + n);
    for (j, r) in rows.iter().enumerate() {
        let mut aug = r.clone();
        aug.extend(vec![field.zero(); n]);
        aug[ncols + j] = field.one();
        rs.insert(aug);
    }
    let mut t: Vec<Scalar> = target.to_vec();
    t.extend(vec![field.zero(); n]);
    let mut coeffs = vec![field.zero(); n];
    for (piv, row) in &rs.rows {
        if *piv >= ncols {
            continue;
        }
        if !t[*piv].is_zero() {
            let c = t[*piv].clone();
            for j in 0..ncols + n {
                t[j] = t[j].sub(&c.mul(&row[j]));
            }
        }
    }
    if t[..ncols].iter().any(|c| !c.is_zero()) {
        return None;
    }
    for (j, c) in t[ncols..].iter().enumerate() {
        coeffs[j] = c.neg();
    }
    Some(coeffs)
}

/// An indexed monomial basis shared by a family of polynomials.
pub struct MonomialBasis {
    pub monos: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn from_polys<'a>(polys: impl Iterator<Item = &'a MultiPoly>) -> MonomialBasis {
        let mut set: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for p in polys {
            for (e, _) in p.terms() {
                set.entry(e.clone()).or_insert(0);
            }
        }
        let monos: Vec<Vec<u32>> = set.keys().cloned().collect();
        let index = monos.iter().cloned().zip(0..).collect();
        MonomialBasis { monos, index }
    }

    /// Reorders the basis columns by the given key, keeping lookups
    /// consistent. Useful for echelon computations that need a specific
    /// block of monomials to come first.
    pub fn reordered_by<K: Ord>(mut self, key: impl Fn(&[u32]) -> K) -> MonomialBasis {
        self.monos.sort_by(|a, b| key(a).cmp(&key(b)).then_with(|| a.cmp(b)));
        let index = self.monos.iter().cloned().zip(0..).collect();
        MonomialBasis { monos: self.monos, index }
    }

    /// All monomials of total degree exactly `d` in `nvars` variables.
    pub fn all_of_degree(nvars: usize, d: u32) -> MonomialBasis {
        let mut monos = Vec::new();
        enumerate_degree(nvars, d, &mut vec![0; nvars], 0, &mut monos);
        let index = monos.iter().cloned().zip(0..).collect();
        MonomialBasis { monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn position(&self, mono: &[u32]) -> Option<usize> {
        self.index.get(mono).copied()
    }

    /// Coordinate vector of `p`; None if a term falls outside the basis.
    pub fn vector(&self, p: &MultiPoly, field: FieldSpec) -> Option<Vec<Scalar>> {
        let mut v = vec![field.zero(); self.monos.len()];
        for (e, c) in p.terms() {
            let i = self.position(e)?;
            v[i] = c.clone();
        }
        Some(v)
    }

    pub fn poly(&self, v: &[Scalar], ring: &Arc<Ring>) -> MultiPoly {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.monos[i].clone(), c.clone()))
            .collect();
        MultiPoly::from_terms(ring, terms)
    }
}

fn enumerate_degree(
    nvars: usize,
    remaining: u32,
    cur: &mut Vec<u32>,
    idx: usize,
    out: &mut Vec<Vec<u32>>,
) {
    if idx + 1 == nvars {
        cur[idx] = remaining;
        out.push(cur.clone());
        cur[idx] = 0;
        return;
    }
    for d in 0..=remaining {
        cur[idx] = d;
        enumerate_degree(nvars, remaining - d, cur, idx + 1, out);
    }
    cur[idx] = 0;
}

/// All monomials of total degree at most `d`.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for k in 0..=d {
        enumerate_degree(nvars, k, &mut vec![0; nvars], 0, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn vecs(field: FieldSpec, data: &[&[i64]]) -> Vec<Vec<Scalar>> {
        data.iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_membership() {
        let f = f5();
        let mut rs = RowSpace::new(f, 3);
        for v in vecs(f, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]) {
            rs.insert(v);
        }
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(vecs(f, &[&[1, 3, 4]]).pop().unwrap()));
        assert!(!rs.contains(vecs(f, &[&[0, 0, 1]]).pop().unwrap()));
    }

    #[test]
    fn kernel_dimensions() {
        let f = FieldSpec::Rational;
        let rows = vecs(f, &[&[1, 1, 0], &[0, 1, 1]]);
        let ker = kernel_basis(f, &rows, 3);
        assert_eq!(ker.len(), 1);
        // check A v = 0
        for row in &rows {
            let mut acc = f.zero();
            for (a, b) in row.iter().zip(&ker[0]) {
                acc = acc.add(&a.mul(b));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn combination_solving() {
        let f = FieldSpec::Rational;
        let rows = vecs(f, &[&[1, 0, 1], &[0, 1, 1]]);
        let target: Vec<Scalar> = [3, 2, 5].iter().map(|&x| f.from_i64(x)).collect();
        let sol = solve_combination(f, &rows, &target).unwrap();
        let mut acc = vec![f.zero(); 3];
        for (c, row) in sol.iter().zip(&rows) {
            for j in 0..3 {
                acc[j] = acc[j].add(&c.mul(&row[j]));
            }
        }
        assert_eq!(acc, target);
        let bad: Vec<Scalar> = [1, 1, 0].iter().map(|&x| f.from_i64(x)).collect();
        assert!(solve_combination(f, &rows, &bad).is_none());
    }
}
