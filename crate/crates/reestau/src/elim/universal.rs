//! Universal elimination algebras: minimal generators of the ring of
//! root-difference invariants k[Y_i - Y_j]^G for G a symmetric group
//! (one monic polynomial) or a product of two symmetric groups (a pair),
//! computed degree-wise by linear algebra in any characteristic,
//! together with their rewriting in elementary symmetric variables.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, solve_combination, MonomialBasis, RowSpace};
use crate::poly::{MultiPoly, Ring};
use crate::scalar::{binomial, FieldSpec, Scalar};

/// One minimal generator: the invariant in the root variables and its
/// expression in block-wise elementary symmetric variables.
#[derive(Clone, Debug)]
pub struct UniversalGen {
    pub invariant: MultiPoly,
    pub degree: u32,
    pub rewritten: MultiPoly,
}

/// Minimal generators of the root-difference invariant ring for one
/// block of size n (a single monic polynomial) or two blocks (r, s).
#[derive(Clone, Debug)]
pub struct UniversalElimGens {
    pub blocks: Vec<usize>,
    pub field: FieldSpec,
    pub y_ring: Arc<Ring>,
    pub s_ring: Arc<Ring>,
    pub gens: Vec<UniversalGen>,
    pub degree_bound: u32,
}

type CacheKey = (Vec<usize>, FieldSpec, u32);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<UniversalElimGens>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<UniversalElimGens>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Root-variable ring Y_1..Y_n split into the given blocks.
fn make_y_ring(blocks: &[usize], field: FieldSpec) -> Arc<Ring> {
    let n: usize = blocks.iter().sum();
    let vars = (1..=n).map(|i| format!("Y{i}")).collect();
    Ring::new(field, vars, None).expect("valid root ring")
}

/// Symmetric-variable ring: s_1..s_n for one block, v_1..v_r, w_1..w_s
/// for two blocks. The variable for e_i carries weight i.
fn make_s_ring(blocks: &[usize], field: FieldSpec) -> Arc<Ring> {
    let names = ["s", "v", "w"];
    let mut vars = Vec::new();
    if blocks.len() == 1 {
        for i in 1..=blocks[0] {
            vars.push(format!("s{i}"));
        }
    } else {
        for (b, &size) in blocks.iter().enumerate() {
            for i in 1..=size {
                vars.push(format!("{}{i}", names[b + 1]));
            }
        }
    }
    Ring::new(field, vars, None).expect("valid symmetric ring")
}

/// Weight of each symmetric variable: e_i has weight i within its block.
fn s_weights(blocks: &[usize]) -> Vec<u32> {
    let mut out = Vec::new();
    for &size in blocks {
        for i in 1..=size {
            out.push(i as u32);
        }
    }
    out
}

/// Adjacent transpositions generating the product of symmetric groups.
fn block_transpositions(blocks: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for &size in blocks {
        for i in 0..size.saturating_sub(1) {
            out.push((offset + i, offset + i + 1));
        }
        offset += size;
    }
    out
}

/// Basis of the degree-d slice of translation- and group-invariant
/// polynomials, as coefficient vectors over the full monomial basis.
fn invariant_slice(
    blocks: &[usize],
    field: FieldSpec,
    d: u32,
    basis: &MonomialBasis,
) -> Vec<Vec<Scalar>> {
    let nv: usize = blocks.iter().sum();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();

    // Group invariance: f composed with each transposition equals f.
    for (a, b) in block_transpositions(blocks) {
        let mut constraint = vec![vec![field.zero(); basis.len()]; basis.len()];
        for (j, m) in basis.monos.iter().enumerate() {
            let mut swapped = m.clone();
            swapped.swap(a, b);
            let k = basis.position(&swapped).expect("permuted monomial");
            constraint[k][j] = constraint[k][j].add(&field.one());
            constraint[j][j] = constraint[j][j].sub(&field.one());
        }
        rows.extend(constraint.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
    }

    // Translation invariance: every positive t-coefficient of
    // f(Y_1 + t, ..., Y_n + t) vanishes.
    for k in 1..=d {
        let target = MonomialBasis::all_of_degree(nv, d - k);
        let mut constraint = vec![vec![field.zero(); basis.len()]; target.len()];
        for (j, m) in basis.monos.iter().enumerate() {
            shift_coefficients(field, m, k, &mut |rest, coeff| {
                let t = target.position(rest).expect("lower-degree monomial");
                constraint[t][j] = constraint[t][j].add(&coeff);
            });
        }
        rows.extend(constraint.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
    }

    kernel_basis(field, &rows, basis.len())
}

/// Emits every (Y^{m - alpha}, prod binom(m_i, alpha_i)) with |alpha| = k,
/// alpha <= m: the t^k-coefficient of prod (Y_i + t)^{m_i}.
fn shift_coefficients(
    field: FieldSpec,
    m: &[u32],
    k: u32,
    emit: &mut impl FnMut(&[u32], Scalar),
) {
    fn rec(
        field: FieldSpec,
        m: &[u32],
        i: usize,
        left: u32,
        alpha: &mut Vec<u32>,
        coeff: Scalar,
        emit: &mut impl FnMut(&[u32], Scalar),
    ) {
        if i == m.len() {
            if left == 0 {
                let rest: Vec<u32> = m.iter().zip(alpha.iter()).map(|(e, a)| e - a).collect();
                emit(&rest, coeff);
            }
            return;
        }
        for a in 0..=m[i].min(left) {
            let b = binomial(field, m[i], a);
            if b.is_zero() {
                continue;
            }
            alpha.push(a);
            rec(field, m, i + 1, left - a, alpha, coeff.mul(&b), emit);
            alpha.pop();
        }
    }
    rec(field, m, 0, k, &mut Vec::new(), field.one(), emit);
}

/// Elementary symmetric polynomial e_i in the listed variables.
fn elementary_symmetric(ring: &Arc<Ring>, vars: &[usize], i: usize) -> MultiPoly {
    fn rec(ring: &Arc<Ring>, vars: &[usize], from: usize, left: usize, acc: &MultiPoly, out: &mut MultiPoly) {
        if left == 0 {
            *out = out.add(acc).expect("same ring");
            return;
        }
        for j in from..=vars.len().saturating_sub(left) {
            let next = acc.mul(&MultiPoly::var(ring, vars[j])).expect("same ring");
            rec(ring, vars, j + 1, left - 1, &next, out);
        }
    }
    let mut out = MultiPoly::zero(ring);
    rec(ring, vars, 0, i, &MultiPoly::one(ring), &mut out);
    out
}

/// The expansions of the block-wise elementary symmetric variables as
/// polynomials in the root variables, in s-ring variable order.
fn symmetric_images(blocks: &[usize], y_ring: &Arc<Ring>) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    let mut offset = 0;
    for &size in blocks {
        let vars: Vec<usize> = (offset..offset + size).collect();
        for i in 1..=size {
            out.push(elementary_symmetric(y_ring, &vars, i));
        }
        offset += size;
    }
    out
}

/// Monomials in the symmetric variables of weighted degree exactly d.
pub(crate) fn weighted_monomials(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left / weights[i] {
            cur.push(e);
            rec(weights, i + 1, left - e * weights[i], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Rewrites a block-symmetric polynomial as a polynomial in the
/// block-wise elementary symmetric variables, verified by re-expansion.
pub fn rewrite_in_symmetrics(
    inv: &MultiPoly,
    blocks: &[usize],
    s_ring: &Arc<Ring>,
) -> Result<MultiPoly> {
    let y_ring = inv.ring().clone();
    let field = y_ring.field();
    let d = match inv.total_degree().finite() {
        Some(d) => d,
        None => return Ok(MultiPoly::zero(s_ring)),
    };
    if !inv.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let nv: usize = blocks.iter().sum();
    let basis = MonomialBasis::all_of_degree(nv, d);
    let images = symmetric_images(blocks, &y_ring);
    let weights = s_weights(blocks);
    let s_monos = weighted_monomials(&weights, d);
    let mut rows = Vec::new();
    for sm in &s_monos {
        let mut p = MultiPoly::one(&y_ring);
        for (img, &e) in images.iter().zip(sm.iter()) {
            if e > 0 {
                p = p.mul(&img.pow(e)).expect("same ring");
            }
        }
        rows.push(basis.vector(&p, field).expect("degree-d product"));
    }
    let target = basis
        .vector(inv, field)
        .ok_or_else(|| Error::Precondition("invariant has unexpected support".into()))?;
    let coeffs = solve_combination(field, &rows, &target).ok_or_else(|| {
        Error::Precondition("polynomial is not block-symmetric: no symmetric expression".into())
    })?;
    let mut out = MultiPoly::zero(s_ring);
    for (c, sm) in coeffs.iter().zip(&s_monos) {
        if !c.is_zero() {
            let mono = MultiPoly::monomial(s_ring, sm.clone(), c.clone());
            out = out.add(&mono).expect("same ring");
        }
    }
    // re-expansion check
    let back = out.substitute(&images, &y_ring)?;
    if back != *inv {
        return Err(Error::Precondition("symmetric rewriting failed re-expansion".into()));
    }
    Ok(out)
}

/// Computes (and memoizes) the minimal generators of the root-difference
/// invariant ring for the given blocks, up to the degree bound (default
/// n(n-1) for total block size n).
pub fn universal_invariants(
    blocks: &[usize],
    field: FieldSpec,
    degree_bound: Option<u32>,
) -> Result<Arc<UniversalElimGens>> {
    let n: usize = blocks.iter().sum();
    if blocks.is_empty() || blocks.len() > 2 || blocks.iter().any(|&b| b == 0) {
        return Err(Error::Precondition("blocks must be one or two positive sizes".into()));
    }
    if n > 4 {
        return Err(Error::DegreeTooLarge(n as u32));
    }
    let bound = degree_bound.unwrap_or(((n * n.saturating_sub(1)) as u32).max(1));
    let key = (blocks.to_vec(), field, bound);
    if let Some(hit) = cache().read().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }

    let y_ring = make_y_ring(blocks, field);
    let s_ring = make_s_ring(blocks, field);
    let mut gens: Vec<UniversalGen> = Vec::new();

    for d in 1..=bound {
        let basis = MonomialBasis::all_of_degree(n, d);
        // span of degree-d products of the generators found so far
        let mut old_span = RowSpace::new(field, basis.len());
        let degrees: Vec<u32> = gens.iter().map(|g| g.degree).collect();
        for combo in weighted_monomials(&degrees, d) {
            let mut p = MultiPoly::one(&y_ring);
            for (g, &e) in gens.iter().zip(combo.iter()) {
                if e > 0 {
                    p = p.mul(&g.invariant.pow(e)).expect("same ring");
                }
            }
            if p.total_degree().finite() == Some(d) {
                if let Some(v) = basis.vector(&p, field) {
                    old_span.insert(v);
                }
            }
        }
        for v in invariant_slice(blocks, field, d, &basis) {
            let reduced = old_span.reduce(v);
            if reduced.iter().all(|c| c.is_zero()) {
                continue;
            }
            let invariant = basis.poly(&reduced, &y_ring).normalized();
            let rewritten = rewrite_in_symmetrics(&invariant, blocks, &s_ring)?;
            old_span.insert(reduced);
            gens.push(UniversalGen { invariant, degree: d, rewritten });
        }
    }

    let out = Arc::new(UniversalElimGens {
        blocks: blocks.to_vec(),
        field,
        y_ring,
        s_ring,
        gens,
        degree_bound: bound,
    });
    cache().write().expect("cache lock").insert(key, out.clone());
    Ok(out)
}

impl UniversalElimGens {
    /// Substitution images turning s-variables into signed coefficients:
    /// the block variable for e_i maps to (-1)^i a_i.
    pub fn coefficient_images(
        &self,
        coeff_blocks: &[Vec<MultiPoly>],
        target: &Arc<Ring>,
    ) -> Result<Vec<MultiPoly>> {
        if coeff_blocks.len() != self.blocks.len()
            || coeff_blocks.iter().zip(&self.blocks).any(|(c, &b)| c.len() != b)
        {
            return Err(Error::DimensionMismatch {
                expected: self.blocks.iter().sum(),
                got: coeff_blocks.iter().map(|c| c.len()).sum(),
            });
        }
        let field = target.field();
        let mut images = Vec::new();
        for block in coeff_blocks {
            for (i, a) in block.iter().enumerate() {
                if a.ring() != target {
                    return Err(Error::RingMismatch);
                }
                let sign = if (i + 1) % 2 == 1 { field.one().neg() } else { field.one() };
                images.push(a.scale(&sign));
            }
        }
        Ok(images)
    }

    /// Specializes every generator at s_{n,i} -> (-1)^i a_i, yielding
    /// weighted elements h W^m over the coefficient ring; zero
    /// specializations are dropped.
    pub fn specialize(
        &self,
        coeff_blocks: &[Vec<MultiPoly>],
        target: &Arc<Ring>,
    ) -> Result<Vec<(MultiPoly, u32)>> {
        let images = self.coefficient_images(coeff_blocks, target)?;
        let mut out = Vec::new();
        for g in &self.gens {
            let h = g.rewritten.substitute(&images, target)?;
            if !h.is_zero() {
                out.push((h, g.degree));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn n2_char0() {
        let u = universal_invariants(&[2], FieldSpec::Rational, None).unwrap();
        assert_eq!(u.gens.len(), 1);
        let g = &u.gens[0];
        assert_eq!(g.degree, 2);
        assert_eq!(g.invariant, parse_poly("Y1^2 - 2*Y1*Y2 + Y2^2", &u.y_ring).unwrap());
        assert_eq!(g.rewritten, parse_poly("s1^2 - 4*s2", &u.s_ring).unwrap());
    }

    #[test]
    fn n2_char2() {
        let f2 = FieldSpec::prime(2).unwrap();
        let u = universal_invariants(&[2], f2, None).unwrap();
        assert_eq!(u.gens[0].degree, 1);
        assert_eq!(u.gens[0].invariant, parse_poly("Y1 + Y2", &u.y_ring).unwrap());
        assert_eq!(u.gens[0].rewritten, parse_poly("s1", &u.s_ring).unwrap());
    }

    #[test]
    fn pair_1_1_trivial_group() {
        let u = universal_invariants(&[1, 1], FieldSpec::Rational, Some(2)).unwrap();
        assert_eq!(u.gens[0].degree, 1);
        assert_eq!(u.gens[0].invariant, parse_poly("Y1 - Y2", &u.y_ring).unwrap());
        assert_eq!(u.gens[0].rewritten, parse_poly("v1 - w1", &u.s_ring).unwrap());
    }

    #[test]
    fn generators_are_invariant() {
        for (blocks, field) in [
            (vec![3usize], FieldSpec::Rational),
            (vec![3], FieldSpec::prime(3).unwrap()),
            (vec![2, 1], FieldSpec::prime(2).unwrap()),
        ] {
            let u = universal_invariants(&blocks, field, None).unwrap();
            assert!(!u.gens.is_empty());
            let n: usize = blocks.iter().sum();
            for g in &u.gens {
                // fixed by each generating transposition
                for (a, b) in block_transpositions(&blocks) {
                    let mut images: Vec<MultiPoly> =
                        (0..n).map(|i| MultiPoly::var(&u.y_ring, i)).collect();
                    images.swap(a, b);
                    assert_eq!(g.invariant.substitute(&images, &u.y_ring).unwrap(), g.invariant);
                }
                // translation-invariant: shift by a fresh variable t
                let vars: Vec<String> =
                    (1..=n).map(|i| format!("Y{i}")).chain(["t".into()]).collect();
                let big = Ring::new(field, vars, None).unwrap();
                let t = MultiPoly::var(&big, n);
                let mut shifted: Vec<MultiPoly> = (0..n)
                    .map(|i| MultiPoly::var(&big, i).add(&t).unwrap())
                    .collect();
                shifted.push(t.clone());
                let lifted = g.invariant.reembed(&big).unwrap();
                assert_eq!(lifted.substitute(&shifted, &big).unwrap(), lifted);
            }
        }
    }

    #[test]
    fn n3_degree2_generator_golden() {
        let u = universal_invariants(&[3], FieldSpec::Rational, None).unwrap();
        let g2 = u.gens.iter().find(|g| g.degree == 2).unwrap();
        assert_eq!(g2.rewritten, parse_poly("s1^2 - 3*s2", &u.s_ring).unwrap());
        let g3 = u.gens.iter().find(|g| g.degree == 3).unwrap();
        let back = g3
            .rewritten
            .substitute(&symmetric_images(&[3], &u.y_ring), &u.y_ring)
            .unwrap();
        assert_eq!(back, g3.invariant);
    }

    #[test]
    fn specialize_examples() {
        let q = FieldSpec::Rational;
        let s = Ring::new(q, vec!["x".into()], None).unwrap();
        let u = universal_invariants(&[2], q, None).unwrap();
        // Z^2 - x^3: a1 = 0, a2 = -x^3
        let a1 = MultiPoly::zero(&s);
        let a2 = parse_poly("-x^3", &s).unwrap();
        let out = u.specialize(&[vec![a1, a2]], &s).unwrap();
        assert_eq!(out, vec![(parse_poly("4*x^3", &s).unwrap(), 2)]);

        // all-zero coefficients specialize everything to zero
        let zeros = vec![vec![MultiPoly::zero(&s), MultiPoly::zero(&s)]];
        assert!(u.specialize(&zeros, &s).unwrap().is_empty());

        let f2 = FieldSpec::prime(2).unwrap();
        let s2 = Ring::new(f2, vec!["x".into(), "y".into()], None).unwrap();
        let u2 = universal_invariants(&[2], f2, None).unwrap();
        // Z^2 + xZ + y^3 over F_2: a1 = x, a2 = y^3
        let out2 = u2
            .specialize(&[vec![parse_poly("x", &s2).unwrap(), parse_poly("y^3", &s2).unwrap()]], &s2)
            .unwrap();
        assert_eq!(out2[0], (parse_poly("x", &s2).unwrap(), 1));
    }

    #[test]
    fn rewrite_rejects_non_symmetric() {
        let y = make_y_ring(&[2], FieldSpec::Rational);
        let s = make_s_ring(&[2], FieldSpec::Rational);
        let p = parse_poly("Y1^2", &y).unwrap();
        assert!(rewrite_in_symmetrics(&p, &[2], &s).is_err());
    }

    #[test]
    fn cache_is_shared() {
        let a = universal_invariants(&[2], FieldSpec::Rational, Some(4)).unwrap();
        let b = universal_invariants(&[2], FieldSpec::Rational, Some(4)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn size_limit() {
        assert!(universal_invariants(&[5], FieldSpec::Rational, None).is_err());
        assert!(universal_invariants(&[3, 2], FieldSpec::Rational, None).is_err());
    }
}
