//! Initial ideals at the origin, differential closure of homogeneous
//! ideals, ridge extraction over perfect fields, and the tau-invariant.

use std::sync::Arc;

use crate::diffsat::diff_saturate;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, monomials_up_to, MonomialBasis, RowSpace};
use crate::poly::{MultiPoly, Ring};
use crate::rees::ReesAlgebra;
use crate::scalar::{FieldSpec, Scalar};

/// A homogeneous ideal in the graded ring of the tangent space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomIdeal {
    ring: Arc<Ring>,
    gens: Vec<MultiPoly>,
    diff_closed: bool,
}

impl HomIdeal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<MultiPoly>) -> Result<HomIdeal> {
        let mut list = Vec::new();
        for g in gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !g.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            if !g.is_zero() {
                list.push(g);
            }
        }
        list.sort();
        list.dedup();
        Ok(HomIdeal { ring: ring.clone(), gens: list, diff_closed: false })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn is_diff_closed_flag(&self) -> bool {
        self.diff_closed
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.gens
            .iter()
            .filter_map(|g| g.total_degree().finite())
            .max()
            .unwrap_or(0)
    }

    /// Basis of the degree-D graded slice, as reduced rows over the full
    /// monomial basis of degree D: the span of monomial multiples of the
    /// generators.
    pub fn degree_slice(&self, d: u32) -> (MonomialBasis, RowSpace) {
        let field = self.ring.field();
        let basis = MonomialBasis::all_of_degree(self.ring.num_vars(), d);
        let mut span = RowSpace::new(field, basis.len());
        for g in &self.gens {
            let gd = match g.total_degree().finite() {
                Some(gd) if gd <= d => gd,
                _ => continue,
            };
            for m in MonomialBasis::all_of_degree(self.ring.num_vars(), d - gd).monos {
                let mono = MultiPoly::monomial(&self.ring, m, field.one());
                let prod = mono.mul(g).expect("same ring");
                if let Some(v) = basis.vector(&prod, field) {
                    span.insert(v);
                }
            }
        }
        (basis, span)
    }
}

/// The homogeneous ideal of initial forms of the generators. Errors when
/// some generator has order below its weight at the origin (the origin
/// then fails the singular-locus condition the formalism presumes).
pub fn initial_ideal(g: &ReesAlgebra) -> Result<HomIdeal> {
    let mut gens = Vec::new();
    for w in g.gens() {
        let form = w.poly.initial_form(w.weight)?;
        if !form.is_zero() {
            gens.push(form);
        }
    }
    HomIdeal::new(g.ring(), gens)
}

/// The smallest extension of the ideal closed by differential operators:
/// one pass of all Hasse derivatives of order below each generator's
/// degree suffices.
pub fn diff_close_hom_ideal(ideal: &HomIdeal) -> HomIdeal {
    let d = ideal.ring.num_vars();
    let mut gens = ideal.gens.clone();
    for g in &ideal.gens {
        let deg = g.total_degree().finite().expect("nonzero generators");
        if deg < 2 {
            continue;
        }
        for alpha in monomials_up_to(d, deg - 1) {
            if alpha.iter().sum::<u32>() == 0 {
                continue;
            }
            let der = g.hasse_derivative(&alpha);
            if !der.is_zero() {
                gens.push(der);
            }
        }
    }
    let mut out = HomIdeal::new(&ideal.ring, gens).expect("derivatives stay homogeneous");
    out.diff_closed = true;
    out
}

/// The ridge data of a diff-closed homogeneous ideal: additive
/// generators l^{p^e} presented as (linear form, e), the tau-invariant,
/// and a basis of the linear space of vertices L.
#[derive(Clone, Debug)]
pub struct Ridge {
    /// Normalized linear forms with their Frobenius exponents.
    pub components: Vec<(MultiPoly, u32)>,
    pub tau: usize,
    /// Vectors spanning L, the common kernel of the linear forms.
    pub l_basis: Vec<Vec<Scalar>>,
}

/// Extracts the ridge of a diff-closed homogeneous ideal. For each
/// Frobenius level p^e up to the maximal generator degree, the degree
/// slice is intersected with the space of additive forms and untwisted
/// into linear forms; tau is the rank of the collected forms and L
/// their common kernel.
pub fn ridge(ideal: &HomIdeal) -> Result<Ridge> {
    if !ideal.diff_closed {
        return Err(Error::NotDiffClosed);
    }
    let ring = &ideal.ring;
    let field = ring.field();
    let d = ring.num_vars();
    let max_deg = ideal.max_degree();

    let mut components: Vec<(MultiPoly, u32)> = Vec::new();
    let mut seen: Vec<MultiPoly> = Vec::new();
    let mut level = 0u32;
    loop {
        let q: u128 = match field {
            FieldSpec::Rational => {
                if level > 0 {
                    break;
                }
                1
            }
            FieldSpec::Prime(p) => (p as u128).pow(level),
        };
        if q > max_deg as u128 {
            break;
        }
        let q = q as u32;
        let (basis, span) = ideal.degree_slice(q.max(1));
        for additive in additive_subspace(&basis, &span, ring, q.max(1), level)? {
            let root = additive.frobenius_root(level)?.normalized();
            if !seen.contains(&root) {
                seen.push(root.clone());
                components.push((root, level));
            }
        }
        if field == FieldSpec::Rational {
            break;
        }
        level += 1;
    }
    components.sort();

    // tau = rank of the linear-form coefficient matrix; L = its kernel.
    let mut rows = Vec::new();
    for (l, _) in &components {
        let mut row = vec![field.zero(); d];
        for (e, c) in l.terms() {
            let i = e.iter().position(|&x| x == 1).expect("linear form");
            row[i] = c.clone();
        }
        rows.push(row);
    }
    let mut rank_space = RowSpace::new(field, d);
    for r in &rows {
        rank_space.insert(r.clone());
    }
    let tau = rank_space.rank();
    let l_basis = kernel_basis(field, &rows, d);
    assert_eq!(tau, d - l_basis.len(), "rank/kernel cross-check");
    Ok(Ridge { components, tau, l_basis })
}

/// Elements of the degree-q slice supported on the additive monomials
/// X_i^{p^e} alone (for e = 0, the slice of linear forms itself).
fn additive_subspace(
    basis: &MonomialBasis,
    span: &RowSpace,
    ring: &Arc<Ring>,
    q: u32,
    level: u32,
) -> Result<Vec<MultiPoly>> {
    let field = ring.field();
    let d = ring.num_vars();
    if level == 0 {
        // degree-1 slice: every row is already a linear form
        return Ok(span.rows().map(|v| basis.poly(v, ring)).collect());
    }
    let additive_cols: Vec<usize> = (0..d)
        .map(|i| {
            let mut m = vec![0u32; d];
            m[i] = q;
            basis.position(&m).expect("X_i^q is a degree-q monomial")
        })
        .collect();
    let rows: Vec<Vec<Scalar>> = span.rows().cloned().collect();
    if rows.is_empty() {
        return Ok(vec![]);
    }
    // kernel of (combination -> non-additive coordinates)
    let mut constraint_rows = Vec::new();
    for col in 0..basis.len() {
        if additive_cols.contains(&col) {
            continue;
        }
        constraint_rows.push(rows.iter().map(|r| r[col].clone()).collect::<Vec<_>>());
    }
    let combos = kernel_basis(field, &constraint_rows, rows.len());
    let mut out = Vec::new();
    for c in combos {
        let mut v = vec![field.zero(); basis.len()];
        for (ci, row) in c.iter().zip(&rows) {
            if ci.is_zero() {
                continue;
            }
            for j in 0..basis.len() {
                v[j] = v[j].add(&ci.mul(&row[j]));
            }
        }
        let p = basis.poly(&v, ring);
        if !p.is_zero() {
            out.push(p);
        }
    }
    Ok(out)
}

/// The tau-invariant of a Rees algebra at the origin: the codimension of
/// the linear space of vertices of its tangent cone.
pub fn tau(g: &ReesAlgebra) -> Result<usize> {
    let ideal = initial_ideal(g)?;
    let closed = diff_close_hom_ideal(&ideal);
    Ok(ridge(&closed)?.tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transversality {
    /// Some generator's initial form does not vanish in the Z-direction,
    /// so the fiber line meets the cone only at the origin.
    pub cone_transversal: bool,
    /// Whether the Z-direction lies inside the linear space of vertices.
    pub line_in_ridge: bool,
}

/// Transversality of the projection forgetting Z, tested at the origin.
pub fn is_transversal(g: &ReesAlgebra) -> Result<Transversality> {
    let ring = g.ring();
    let z = ring.z_index().ok_or(Error::NoDistinguishedVar)?;
    let field = ring.field();
    let direction: Vec<Scalar> = (0..ring.num_vars())
        .map(|i| if i == z { field.one() } else { field.zero() })
        .collect();
    let ideal = initial_ideal(g)?;
    let mut cone_transversal = false;
    for form in ideal.gens() {
        if !form.evaluate(&direction)?.is_zero() {
            cone_transversal = true;
            break;
        }
    }
    let closed = diff_close_hom_ideal(&ideal);
    let rdg = ridge(&closed)?;
    let line_in_ridge = rdg
        .components
        .iter()
        .all(|(l, _)| l.evaluate(&direction).map(|v| v.is_zero()).unwrap_or(false));
    Ok(Transversality { cone_transversal, line_in_ridge })
}

/// tau at an arbitrary rational point, by translating it to the origin.
pub fn tau_at(g: &ReesAlgebra, point: &[Scalar]) -> Result<usize> {
    let gens = g
        .gens()
        .iter()
        .map(|w| w.poly.translate(point).map(|p| (p, w.weight)))
        .collect::<Result<Vec<_>>>()?;
    tau(&ReesAlgebra::new(g.ring(), gens)?)
}

/// Convenience: tau of the differential saturation (equal to tau of the
/// algebra itself).
pub fn tau_saturated(g: &ReesAlgebra) -> Result<usize> {
    tau(&diff_saturate(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::scalar::FieldSpec;

    fn ring(field: FieldSpec, vars: &[&str], z: Option<usize>) -> Arc<Ring> {
        Ring::new(field, vars.iter().map(|s| s.to_string()).collect(), z).unwrap()
    }

    fn algebra(r: &Arc<Ring>, gens: &[(&str, u32)]) -> ReesAlgebra {
        ReesAlgebra::new(
            r,
            gens.iter()
                .map(|(src, w)| (parse_poly(src, r).unwrap(), *w))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn initial_ideals() {
        let r = ring(FieldSpec::Rational, &["x", "z"], None);
        let g = algebra(&r, &[("z^2 - x^3", 2)]);
        let i = initial_ideal(&g).unwrap();
        assert_eq!(i.gens(), &[parse_poly("z^2", &r).unwrap()]);

        let zero = algebra(&r, &[("x^3", 2)]);
        assert!(initial_ideal(&zero).unwrap().is_zero_ideal());

        let two = algebra(&r, &[("x", 1), ("z^2", 2)]);
        assert_eq!(initial_ideal(&two).unwrap().gens().len(), 2);

        let bad = algebra(&r, &[("x", 2)]);
        assert!(initial_ideal(&bad).is_err());
    }

    #[test]
    fn closure_examples() {
        let r = ring(FieldSpec::Rational, &["x", "y"], None);
        let i = HomIdeal::new(&r, vec![parse_poly("x^2 + y^2", &r).unwrap()]).unwrap();
        let c = diff_close_hom_ideal(&i);
        assert!(c.gens().contains(&parse_poly("2*x", &r).unwrap()));
        assert!(c.gens().contains(&parse_poly("2*y", &r).unwrap()));

        let r2 = ring(FieldSpec::prime(2).unwrap(), &["x", "y"], None);
        let i2 = HomIdeal::new(&r2, vec![parse_poly("x^2 + y^2", &r2).unwrap()]).unwrap();
        let c2 = diff_close_hom_ideal(&i2);
        assert_eq!(c2.gens().len(), 1);

        let lin = HomIdeal::new(&r, vec![parse_poly("x", &r).unwrap()]).unwrap();
        assert_eq!(diff_close_hom_ideal(&lin).gens(), lin.gens());
    }

    #[test]
    fn ridge_char0() {
        let r = ring(FieldSpec::Rational, &["x", "y"], None);
        let i = HomIdeal::new(&r, vec![parse_poly("x^2 + y^2", &r).unwrap()]).unwrap();
        let rdg = ridge(&diff_close_hom_ideal(&i)).unwrap();
        assert_eq!(rdg.tau, 2);
        assert!(rdg.l_basis.is_empty());
        assert!(rdg.components.iter().all(|(_, e)| *e == 0));
    }

    #[test]
    fn ridge_char2_additive() {
        let r = ring(FieldSpec::prime(2).unwrap(), &["x", "y"], None);
        let i = HomIdeal::new(&r, vec![parse_poly("x^2 + y^2", &r).unwrap()]).unwrap();
        let rdg = ridge(&diff_close_hom_ideal(&i)).unwrap();
        assert_eq!(rdg.tau, 1);
        assert_eq!(rdg.components, vec![(parse_poly("x + y", &r).unwrap(), 1)]);
        assert_eq!(rdg.l_basis.len(), 1);
        // the kernel vector is the diagonal (1,1)
        assert_eq!(rdg.l_basis[0], vec![r.field().one(), r.field().one()]);
    }

    #[test]
    fn ridge_empty_ideal() {
        let r = ring(FieldSpec::Rational, &["x", "y"], None);
        let i = diff_close_hom_ideal(&HomIdeal::new(&r, vec![]).unwrap());
        let rdg = ridge(&i).unwrap();
        assert_eq!(rdg.tau, 0);
        assert_eq!(rdg.l_basis.len(), 2);
    }

    #[test]
    fn ridge_requires_flag() {
        let r = ring(FieldSpec::Rational, &["x", "y"], None);
        let i = HomIdeal::new(&r, vec![parse_poly("x^2", &r).unwrap()]).unwrap();
        assert!(matches!(ridge(&i), Err(Error::NotDiffClosed)));
    }

    #[test]
    fn tau_examples() {
        let rq = ring(FieldSpec::Rational, &["x", "z"], None);
        let g = algebra(&rq, &[("z^2 + z*x + x^2", 2)]);
        assert_eq!(tau(&g).unwrap(), 2);

        let r3 = ring(FieldSpec::prime(3).unwrap(), &["x", "z"], None);
        let g3 = algebra(&r3, &[("z^2 + z*x + x^2", 2)]);
        assert_eq!(tau(&g3).unwrap(), 1);

        let zero = algebra(&rq, &[("x^3", 2)]);
        assert_eq!(tau(&zero).unwrap(), 0);
    }

    #[test]
    fn transversality() {
        let r = ring(FieldSpec::Rational, &["x", "z"], Some(1));
        let g = algebra(&r, &[("z^2 - x^3", 2)]);
        assert!(is_transversal(&g).unwrap().cone_transversal);

        let flat = algebra(&r, &[("x^2", 2)]);
        assert!(!is_transversal(&flat).unwrap().cone_transversal);

        let r3 = ring(FieldSpec::prime(3).unwrap(), &["x", "z"], Some(1));
        let g3 = algebra(&r3, &[("z^2 + z*x + x^2", 2)]);
        let t = is_transversal(&g3).unwrap();
        assert!(t.cone_transversal);
        assert!(!t.line_in_ridge);
    }

    #[test]
    fn tau_stable_under_saturation() {
        let r = ring(FieldSpec::Rational, &["x", "z"], None);
        for (src, w) in [("z^2 - x^3", 2u32), ("z^2 + z*x + x^2", 2), ("z^3 - x^3", 3)] {
            let g = algebra(&r, &[(src, w)]);
            assert_eq!(tau(&g).unwrap(), tau(&diff_saturate(&g)).unwrap(), "{src}");
        }
    }
}
