//! Rees algebras presented by weighted generators, their singular loci,
//! Veronese truncations and desk-scale integral-equivalence checks.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{MonomialBasis, RowSpace};
use crate::poly::{MultiPoly, Ring};
use crate::scalar::{FieldSpec, Scalar};

/// A generator f W^n of a Rees algebra: nonzero f with weight n >= 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedElem {
    pub poly: MultiPoly,
    pub weight: u32,
}

/// Provenance of a differential saturation, carried for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Saturation {
    None,
    Relative,
    Absolute,
}

impl Saturation {
    pub fn label(&self) -> &'static str {
        match self {
            Saturation::None => "none",
            Saturation::Relative => "relative",
            Saturation::Absolute => "absolute",
        }
    }

    /// Whether this saturation level implies relative closedness.
    pub fn covers_relative(&self) -> bool {
        !matches!(self, Saturation::None)
    }
}

/// A finitely generated Rees algebra O[f_1 W^{n_1}, ..., f_s W^{n_s}].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesAlgebra {
    ring: Arc<Ring>,
    gens: Vec<WeightedElem>,
    saturation: Saturation,
}

impl ReesAlgebra {
    /// Builds an algebra from (polynomial, weight) pairs. Zero generators
    /// are dropped; duplicates are collapsed.
    pub fn new(ring: &Arc<Ring>, gens: Vec<(MultiPoly, u32)>) -> Result<ReesAlgebra> {
        let mut list = Vec::new();
        for (poly, weight) in gens {
            if poly.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if weight == 0 {
                return Err(Error::Precondition("generator weight must be >= 1".into()));
            }
            if poly.is_zero() {
                continue;
            }
            list.push(WeightedElem { poly, weight });
        }
        list.sort();
        list.dedup();
        Ok(ReesAlgebra { ring: ring.clone(), gens: list, saturation: Saturation::None })
    }

    pub fn with_saturation(mut self, s: Saturation) -> ReesAlgebra {
        self.saturation = s;
        self
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[WeightedElem] {
        &self.gens
    }

    pub fn saturation(&self) -> Saturation {
        self.saturation
    }

    pub fn weights_lcm(&self) -> u32 {
        self.gens
            .iter()
            .fold(1u32, |acc, g| num_integer::lcm(acc, g.weight))
    }

    /// The smallest Rees algebra containing both operands: generator
    /// union, deduplicated.
    pub fn odot(&self, other: &ReesAlgebra) -> Result<ReesAlgebra> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        gens.sort();
        gens.dedup();
        Ok(ReesAlgebra { ring: self.ring.clone(), gens, saturation: Saturation::None })
    }

    /// Generators of the graded piece I_N: all products of generators
    /// with total weight exactly N. Empty when no weight composition
    /// reaches N.
    pub fn graded_piece(&self, n: u32) -> PolyIdeal {
        let mut out: BTreeSet<MultiPoly> = BTreeSet::new();
        let mut current = MultiPoly::one(&self.ring);
        products_of_weight(&self.gens, 0, n, &mut current, &mut out);
        PolyIdeal {
            ring: self.ring.clone(),
            gens: out.into_iter().filter(|p| !p.is_zero()).collect(),
        }
    }

    /// The Rees ring O[I_N W^N]. N must be a common multiple of all
    /// generator weights; the result is then integrally equivalent to
    /// the original algebra.
    pub fn veronese(&self, n: u32) -> Result<ReesAlgebra> {
        if n == 0 || self.gens.iter().any(|g| n % g.weight != 0) {
            return Err(Error::NotCommonMultiple(n));
        }
        let piece = self.graded_piece(n);
        ReesAlgebra::new(&self.ring, piece.gens.into_iter().map(|p| (p, n)).collect())
    }

    /// Point test for the singular locus: every generator must have
    /// order >= weight after translating the point to the origin.
    pub fn in_sing_locus(&self, point: &[Scalar]) -> Result<bool> {
        if point.len() != self.ring.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.num_vars(),
                got: point.len(),
            });
        }
        for g in &self.gens {
            let shifted = g.poly.translate(point)?;
            if !shifted.order_at_origin().at_least(g.weight) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Brute-force enumeration of rational points of Sing over F_p,
    /// sorted lexicographically.
    pub fn enumerate_sing(&self) -> Result<Vec<Vec<Scalar>>> {
        let p = match self.ring.field() {
            FieldSpec::Prime(p) => p,
            FieldSpec::Rational => {
                return Err(Error::Precondition("enumeration requires a finite field".into()))
            }
        };
        let d = self.ring.num_vars() as u32;
        let total = (p as u128).pow(d);
        if total > 1_000_000 {
            return Err(Error::SearchSpaceTooLarge(total));
        }
        let mut out = Vec::new();
        let mut point = vec![0u64; d as usize];
        loop {
            let coords: Vec<Scalar> = point
                .iter()
                .map(|&v| self.ring.field().from_i64(v as i64))
                .collect();
            if self.in_sing_locus(&coords)? {
                out.push(coords);
            }
            // odometer increment
            let mut i = point.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                point[i] += 1;
                if point[i] < p {
                    break;
                }
                point[i] = 0;
            }
        }
    }
}

fn products_of_weight(
    gens: &[WeightedElem],
    idx: usize,
    remaining: u32,
    current: &mut MultiPoly,
    out: &mut BTreeSet<MultiPoly>,
) {
    if remaining == 0 {
        out.insert(current.clone());
        return;
    }
    if idx >= gens.len() {
        return;
    }
    // use gens[idx] zero or more times, then move on
    let g = &gens[idx];
    let mut acc = current.clone();
    let mut used = 0;
    loop {
        products_of_weight(gens, idx + 1, remaining - used, &mut acc, out);
        if used + g.weight > remaining {
            return;
        }
        used += g.weight;
        acc = acc.mul(&g.poly).expect("same ring");
    }
}

/// An ideal presented by a finite list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIdeal {
    pub ring: Arc<Ring>,
    pub gens: Vec<MultiPoly>,
}

impl PolyIdeal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<MultiPoly>) -> PolyIdeal {
        let mut gens: Vec<MultiPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        gens.sort();
        gens.dedup();
        PolyIdeal { ring: ring.clone(), gens }
    }

    /// Membership of a homogeneous element in a homogeneous ideal,
    /// decided exactly by degree-wise linear algebra: h of degree D lies
    /// in the ideal iff it is a field combination of m * g_i over
    /// monomials m of degree D - deg g_i.
    pub fn contains_homogeneous(&self, h: &MultiPoly) -> Result<bool> {
        if !h.is_homogeneous() || self.gens.iter().any(|g| !g.is_homogeneous()) {
            return Err(Error::NotHomogeneous);
        }
        if h.is_zero() {
            return Ok(true);
        }
        let d = h.total_degree().finite().expect("nonzero");
        let field = self.ring.field();
        let basis = MonomialBasis::all_of_degree(self.ring.num_vars(), d);
        let mut span = RowSpace::new(field, basis.len());
        for g in &self.gens {
            let gd = match g.total_degree().finite() {
                Some(gd) if gd <= d => gd,
                _ => continue,
            };
            let mults = MonomialBasis::all_of_degree(self.ring.num_vars(), d - gd);
            for m in &mults.monos {
                let mono = MultiPoly::monomial(&self.ring, m.clone(), field.one());
                let prod = mono.mul(g)?;
                if let Some(v) = basis.vector(&prod, field) {
                    span.insert(v);
                }
            }
        }
        let hv = basis.vector(h, field).expect("degree-D basis covers h");
        Ok(span.contains(hv))
    }

    /// One-sided radical membership certificate: true iff some power
    /// h^k with k <= k_max lies in the ideal.
    pub fn radical_contains(&self, h: &MultiPoly, k_max: u32) -> Result<bool> {
        let mut pw = h.clone();
        for _ in 1..=k_max {
            if self.contains_homogeneous(&pw)? {
                return Ok(true);
            }
            pw = pw.mul(h)?;
        }
        Ok(false)
    }

    /// Bounded membership for arbitrary (possibly non-homogeneous)
    /// elements: h in <g_1, ..., g_s> with polynomial multipliers of
    /// degree <= bound. Sound: a positive answer is exact; a negative
    /// answer only means "not found within the bound".
    pub fn contains_bounded(&self, h: &MultiPoly, bound: u32) -> Result<bool> {
        if h.is_zero() {
            return Ok(true);
        }
        let field = self.ring.field();
        let mut products = Vec::new();
        let mults = crate::linalg::monomials_up_to(self.ring.num_vars(), bound);
        for g in &self.gens {
            for m in &mults {
                let mono = MultiPoly::monomial(&self.ring, m.clone(), field.one());
                products.push(mono.mul(g)?);
            }
        }
        let basis = MonomialBasis::from_polys(products.iter().chain(std::iter::once(h)));
        let mut span = RowSpace::new(field, basis.len());
        for p in &products {
            if let Some(v) = basis.vector(p, field) {
                span.insert(v);
            }
        }
        let hv = basis.vector(h, field).expect("basis includes h");
        Ok(span.contains(hv))
    }
}

/// Outcome of the desk-scale integral-equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    ConsistentWithEquivalence,
    Refuted { witness: String },
    Inconclusive { k_max: u32 },
}

impl EquivVerdict {
    pub fn label(&self) -> String {
        match self {
            EquivVerdict::ConsistentWithEquivalence => "consistent-with-equivalence".into(),
            EquivVerdict::Refuted { witness } => format!("refuted ({witness})"),
            EquivVerdict::Inconclusive { k_max } => format!("inconclusive (k_max {k_max})"),
        }
    }
}

/// Compares the radicals of the weight-N initial ideals of two algebras
/// in both directions via bounded radical membership. N must be a common
/// multiple of all weights on both sides, so both weight-N pieces
/// present the algebras up to integral closure.
pub fn check_integral_equiv_desk(
    g1: &ReesAlgebra,
    g2: &ReesAlgebra,
    n: u32,
    k_max: u32,
) -> Result<EquivVerdict> {
    if g1.ring() != g2.ring() {
        return Err(Error::RingMismatch);
    }
    for g in [g1, g2] {
        if g.gens().iter().any(|w| n % w.weight != 0) {
            return Err(Error::NotCommonMultiple(n));
        }
    }
    let i1 = initial_ideal_of_piece(g1, n)?;
    let i2 = initial_ideal_of_piece(g2, n)?;
    let mut inconclusive = false;
    for (source, target) in [(&i2, &i1), (&i1, &i2)] {
        for h in &source.gens {
            if target.radical_contains(h, k_max)? {
                continue;
            }
            if let Some(point) = refute_radical_membership(target, h)? {
                let coords: Vec<String> = point.iter().map(|c| c.to_string()).collect();
                return Ok(EquivVerdict::Refuted {
                    witness: format!("{} nonzero on V at ({})", h, coords.join(",")),
                });
            }
            inconclusive = true;
        }
    }
    if inconclusive {
        Ok(EquivVerdict::Inconclusive { k_max })
    } else {
        Ok(EquivVerdict::ConsistentWithEquivalence)
    }
}

/// The ideal of weight-N initial forms of the graded piece I_N.
fn initial_ideal_of_piece(g: &ReesAlgebra, n: u32) -> Result<PolyIdeal> {
    let piece = g.graded_piece(n);
    let mut gens = Vec::new();
    for q in &piece.gens {
        let form = q.initial_form(n)?;
        if !form.is_zero() {
            gens.push(form);
        }
    }
    Ok(PolyIdeal::new(&g.ring, gens))
}

/// Searches small rational points of V(ideal) where h does not vanish.
/// Such a point certifies h outside the radical.
fn refute_radical_membership(ideal: &PolyIdeal, h: &MultiPoly) -> Result<Option<Vec<Scalar>>> {
    let field = ideal.ring.field();
    let d = ideal.ring.num_vars();
    let coords: Vec<Scalar> = match field {
        FieldSpec::Prime(p) if (p as u128).pow(d as u32) <= 100_000 => field.elements(),
        FieldSpec::Prime(_) => (0..4).map(|i| field.from_i64(i)).collect(),
        FieldSpec::Rational => [-2i64, -1, 0, 1, 2, 3]
            .iter()
            .map(|&i| field.from_i64(i))
            .collect(),
    };
    let mut point = vec![0usize; d];
    loop {
        let pt: Vec<Scalar> = point.iter().map(|&i| coords[i].clone()).collect();
        let on_variety = ideal
            .gens
            .iter()
            .map(|g| g.evaluate(&pt))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|v| v.is_zero());
        if on_variety && !h.evaluate(&pt)?.is_zero() {
            return Ok(Some(pt));
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            point[i] += 1;
            if point[i] < coords.len() {
                break;
            }
            point[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn qring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(FieldSpec::Rational, vars.iter().map(|s| s.to_string()).collect(), None).unwrap()
    }

    fn fring(p: u64, vars: &[&str]) -> Arc<Ring> {
        Ring::new(
            FieldSpec::prime(p).unwrap(),
            vars.iter().map(|s| s.to_string()).collect(),
            None,
        )
        .unwrap()
    }

    fn algebra(ring: &Arc<Ring>, gens: &[(&str, u32)]) -> ReesAlgebra {
        let gens = gens
            .iter()
            .map(|(src, w)| (parse_poly(src, ring).unwrap(), *w))
            .collect();
        ReesAlgebra::new(ring, gens).unwrap()
    }

    #[test]
    fn odot_union_dedup() {
        let r = qring(&["x", "y"]);
        let a = algebra(&r, &[("x", 1)]);
        let b = algebra(&r, &[("y", 2)]);
        let ab = a.odot(&b).unwrap();
        assert_eq!(ab.gens().len(), 2);
        assert_eq!(a.odot(&a).unwrap(), a.clone().with_saturation(Saturation::None));
        let dup = a.odot(&algebra(&r, &[("x", 1)])).unwrap();
        assert_eq!(dup.gens().len(), 1);
    }

    #[test]
    fn graded_piece_enumeration() {
        let r = qring(&["x", "y"]);
        let g = algebra(&r, &[("x", 1), ("y^2", 2)]);
        let i2 = g.graded_piece(2);
        let mut expect: Vec<MultiPoly> =
            vec![parse_poly("x^2", &r).unwrap(), parse_poly("y^2", &r).unwrap()];
        expect.sort();
        assert_eq!(i2.gens, expect);

        let h = algebra(&r, &[("x*y", 2)]);
        assert!(h.graded_piece(3).gens.is_empty());
        assert_eq!(h.graded_piece(4).gens, vec![parse_poly("x^2*y^2", &r).unwrap()]);
    }

    #[test]
    fn veronese_examples() {
        let r = qring(&["x", "y"]);
        let g = algebra(&r, &[("x", 1), ("y^2", 2)]);
        let v = g.veronese(2).unwrap();
        assert_eq!(v, algebra(&r, &[("x^2", 2), ("y^2", 2)]));
        let h = algebra(&r, &[("x*y", 2)]);
        assert_eq!(h.veronese(2).unwrap(), h);
        assert!(h.veronese(3).is_err());
        let k = algebra(&r, &[("x", 1)]);
        assert_eq!(k.veronese(3).unwrap(), algebra(&r, &[("x^3", 3)]));
    }

    #[test]
    fn sing_locus_points() {
        let r = qring(&["x"]);
        let g = algebra(&r, &[("x^2", 2)]);
        assert!(g.in_sing_locus(&[r.field().zero()]).unwrap());
        assert!(!g.in_sing_locus(&[r.field().one()]).unwrap());
    }

    #[test]
    fn sing_enumeration() {
        let r = fring(3, &["x"]);
        let g = algebra(&r, &[("x^2", 2)]);
        let pts = g.enumerate_sing().unwrap();
        assert_eq!(pts, vec![vec![r.field().zero()]]);

        let r2 = fring(2, &["x", "y"]);
        let axes = algebra(&r2, &[("x*y", 1)]);
        let pts = axes.enumerate_sing().unwrap();
        assert_eq!(pts.len(), 3); // (0,0), (0,1), (1,0)

        let unit = algebra(&r2, &[("1", 1)]);
        assert!(unit.enumerate_sing().unwrap().is_empty());
    }

    #[test]
    fn sing_of_cusp_f5() {
        let r = fring(5, &["x", "z"]);
        let g = algebra(&r, &[("z^2 - x^3", 2)]);
        let pts = g.enumerate_sing().unwrap();
        assert_eq!(pts, vec![vec![r.field().zero(), r.field().zero()]]);
    }

    #[test]
    fn homogeneous_membership() {
        let r = qring(&["x", "y"]);
        let i = PolyIdeal::new(
            &r,
            vec![parse_poly("x^2", &r).unwrap(), parse_poly("y^2", &r).unwrap()],
        );
        assert!(i.contains_homogeneous(&parse_poly("x^2*y", &r).unwrap()).unwrap());
        assert!(!i.contains_homogeneous(&parse_poly("x*y", &r).unwrap()).unwrap());
        let empty = PolyIdeal::new(&r, vec![]);
        assert!(empty.contains_homogeneous(&MultiPoly::zero(&r)).unwrap());
    }

    #[test]
    fn radical_membership() {
        let r = qring(&["x", "y"]);
        let i = PolyIdeal::new(&r, vec![parse_poly("x^2", &r).unwrap()]);
        assert!(i.radical_contains(&parse_poly("x", &r).unwrap(), 2).unwrap());

        let i2 = PolyIdeal::new(
            &r,
            vec![parse_poly("x^2", &r).unwrap(), parse_poly("y^2", &r).unwrap()],
        );
        assert!(i2.radical_contains(&parse_poly("x + y", &r).unwrap(), 3).unwrap());

        let i3 = PolyIdeal::new(&r, vec![parse_poly("x*y", &r).unwrap()]);
        assert!(!i3.radical_contains(&parse_poly("x", &r).unwrap(), 5).unwrap());
    }

    #[test]
    fn desk_equivalence() {
        let r = qring(&["x"]);
        let g = algebra(&r, &[("x^2", 2)]);
        let g2 = algebra(&r, &[("x^2", 2), ("x^3", 3)]);
        assert_eq!(
            check_integral_equiv_desk(&g, &g2, 6, 6).unwrap(),
            EquivVerdict::ConsistentWithEquivalence
        );

        let r2 = qring(&["x", "y"]);
        let a = algebra(&r2, &[("x", 1)]);
        let b = algebra(&r2, &[("y", 1)]);
        assert!(matches!(
            check_integral_equiv_desk(&a, &b, 1, 6).unwrap(),
            EquivVerdict::Refuted { .. }
        ));
    }

    #[test]
    fn veronese_is_equivalent() {
        let r = qring(&["x", "y"]);
        let g = algebra(&r, &[("x", 1), ("y^2", 2)]);
        let v = g.veronese(2).unwrap();
        assert_eq!(
            check_integral_equiv_desk(&g, &v, 2, 6).unwrap(),
            EquivVerdict::ConsistentWithEquivalence
        );
    }
}
