//! Elimination algebras over the ring of the remaining variables:
//! specialization of universal invariants at the coefficients of monic
//! generators, the Z-free truncation route, symbolic invariance checks,
//! local presentations, and the tau-drop verification harness.

pub mod universal;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{monomials_up_to, MonomialBasis, RowSpace};
use crate::poly::{MultiPoly, Order, Ring};
use crate::rees::{check_integral_equiv_desk, EquivVerdict, ReesAlgebra, Saturation, WeightedElem};
use crate::scalar::FieldSpec;
use crate::tangent::{is_transversal, tau};
use universal::{universal_invariants, weighted_monomials, UniversalElimGens};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElimRoute {
    Universal,
    ZFree,
}

impl ElimRoute {
    pub fn label(&self) -> &'static str {
        match self {
            ElimRoute::Universal => "universal",
            ElimRoute::ZFree => "z-free",
        }
    }
}

/// An elimination algebra: a Rees algebra over the subring of the
/// variables other than Z, none of whose generators involve Z.
#[derive(Clone, Debug)]
pub struct EliminationAlgebra {
    pub algebra: ReesAlgebra,
    pub route: ElimRoute,
    pub source_weights: Vec<u32>,
}

/// Bounds for the Z-free truncation route.
#[derive(Clone, Copy, Debug, Default)]
pub struct ElimBounds {
    pub weight_bound: Option<u32>,
    pub degree_bound: Option<u32>,
}

/// Coefficients a_1..a_n of a generator monic in Z with Z-degree equal
/// to its weight, normalized so the leading Z-coefficient is 1, mapped
/// into the Z-free subring.
fn monic_coefficients(
    f: &MultiPoly,
    z: usize,
    n: u32,
    s_ring: &Arc<Ring>,
) -> Result<Vec<MultiPoly>> {
    if f.degree_in(z) != Some(n) {
        return Err(Error::NotMonic(f.to_string()));
    }
    let coeffs = f.coeffs_in(z);
    let lead = &coeffs[n as usize];
    if lead.total_degree() != Order::Finite(0) {
        return Err(Error::NotMonic(f.to_string()));
    }
    let unit = lead.leading_coeff().expect("nonzero constant").inv();
    (1..=n)
        .map(|i| coeffs[(n - i) as usize].scale(&unit).reembed(s_ring))
        .collect()
}

fn require_relative_saturation(g: &ReesAlgebra) -> Result<()> {
    if !g.saturation().covers_relative() {
        return Err(Error::Precondition(
            "algebra is not relatively differentially saturated; saturate first".into(),
        ));
    }
    Ok(())
}

/// Default degree bound for the two-polynomial universal tables, kept
/// small because the pair generators only enlarge the elimination
/// algebra; the tau-drop suite guards adequacy empirically.
fn pair_bound(r: u32, s: u32) -> u32 {
    2 * (r + s)
}

/// Builds the elimination algebra of a relatively saturated Rees
/// algebra along its distinguished variable, by either route.
pub fn elimination_algebra(
    g: &ReesAlgebra,
    route: ElimRoute,
    bounds: ElimBounds,
) -> Result<EliminationAlgebra> {
    let ring = g.ring();
    let z = ring.z_index().ok_or(Error::NoDistinguishedVar)?;
    let s_ring = ring.base_ring()?;
    require_relative_saturation(g)?;
    let gens = match route {
        ElimRoute::Universal => universal_route(g, z, &s_ring)?,
        ElimRoute::ZFree => zfree_route(g, z, &s_ring, bounds)?,
    };
    let algebra = ReesAlgebra::new(&s_ring, gens)?;
    Ok(EliminationAlgebra {
        algebra,
        route,
        source_weights: g.gens().iter().map(|w| w.weight).collect(),
    })
}

fn universal_route(
    g: &ReesAlgebra,
    z: usize,
    s_ring: &Arc<Ring>,
) -> Result<Vec<(MultiPoly, u32)>> {
    let field = g.ring().field();
    let mut out: Vec<(MultiPoly, u32)> = Vec::new();
    let mut monic: Vec<(Vec<MultiPoly>, u32)> = Vec::new();
    for w in g.gens() {
        if !w.poly.involves(z) {
            out.push((w.poly.reembed(s_ring)?, w.weight));
            continue;
        }
        if w.weight > 4 {
            return Err(Error::DegreeTooLarge(w.weight));
        }
        let coeffs = monic_coefficients(&w.poly, z, w.weight, s_ring)?;
        monic.push((coeffs, w.weight));
    }
    for (coeffs, n) in &monic {
        let u = universal_invariants(&[*n as usize], field, None)?;
        out.extend(u.specialize(&[coeffs.clone()], s_ring)?);
    }
    for i in 0..monic.len() {
        for j in i + 1..monic.len() {
            let (a, r) = &monic[i];
            let (b, s) = &monic[j];
            if r + s > 4 {
                continue;
            }
            let u = universal_invariants(
                &[*r as usize, *s as usize],
                field,
                Some(pair_bound(*r, *s)),
            )?;
            out.extend(u.specialize(&[a.clone(), b.clone()], s_ring)?);
        }
    }
    // drop generators that are scalar multiples of an earlier one of
    // the same weight (the pair invariants often reproduce the
    // single-polynomial specializations up to a unit)
    let mut pruned: Vec<(MultiPoly, u32)> = Vec::new();
    for (h, w) in out {
        if pruned
            .iter()
            .any(|(h2, w2)| *w2 == w && h2.normalized() == h.normalized())
        {
            continue;
        }
        pruned.push((h, w));
    }
    Ok(pruned)
}

fn zfree_route(
    g: &ReesAlgebra,
    z: usize,
    s_ring: &Arc<Ring>,
    bounds: ElimBounds,
) -> Result<Vec<(MultiPoly, u32)>> {
    let ring = g.ring();
    let field = ring.field();
    let weight_bound = bounds.weight_bound.unwrap_or(2 * g.weights_lcm());
    let degree_bound = bounds.degree_bound.unwrap_or(8);
    let base_vars: Vec<usize> = (0..ring.num_vars()).filter(|&i| i != z).collect();
    // base-variable monomials of each total degree, embedded in the
    // full ring, so a candidate of degree d only picks up multipliers
    // that keep it within the degree bound
    let s_monomials: Vec<Vec<u32>> = monomials_up_to(base_vars.len(), degree_bound)
        .into_iter()
        .map(|m| {
            let mut full = vec![0u32; ring.num_vars()];
            for (k, &v) in base_vars.iter().enumerate() {
                full[v] = m[k];
            }
            full
        })
        .collect();

    let mut emitted: Vec<(MultiPoly, u32)> = Vec::new();
    for w in 1..=weight_bound {
        let piece = g.graded_piece(w);
        if piece.gens.is_empty() {
            continue;
        }
        // S-multiples of the weight-w products, truncated so every
        // candidate stays within the total-degree bound
        let mut candidates = Vec::new();
        for p in &piece.gens {
            let Some(pd) = p.total_degree().finite() else { continue };
            if pd > degree_bound {
                continue;
            }
            for m in &s_monomials {
                if m.iter().sum::<u32>() + pd > degree_bound {
                    continue;
                }
                let mono = MultiPoly::monomial(ring, m.clone(), field.one());
                candidates.push(mono.mul(p)?);
            }
        }
        if candidates.is_empty() {
            continue;
        }
        // With the Z-positive monomial columns first, echelon rows whose
        // pivot falls in the Z-free block span exactly the Z-free part
        // of the candidate span.
        let basis = MonomialBasis::from_polys(candidates.iter())
            .reordered_by(|m| m[z] == 0);
        let zstart = basis
            .monos
            .iter()
            .position(|m| m[z] == 0)
            .unwrap_or(basis.len());
        let mut piece_span = RowSpace::new(field, basis.len());
        for c in &candidates {
            piece_span.insert(basis.vector(c, field).expect("own basis"));
        }
        let mut zfree = Vec::new();
        for row in piece_span.rows() {
            let lead = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
            if lead >= zstart {
                zfree.push(basis.poly(row, ring).reembed(s_ring)?);
            }
        }
        if zfree.is_empty() {
            continue;
        }
        // reduce modulo S-multiples of products of already-emitted
        // generators of total weight w
        let weights: Vec<u32> = emitted.iter().map(|(_, wt)| *wt).collect();
        let mut old_products = Vec::new();
        for combo in weighted_monomials(&weights, w) {
            let mut p = MultiPoly::one(s_ring);
            for ((gp, _), &e) in emitted.iter().zip(combo.iter()) {
                if e > 0 {
                    p = p.mul(&gp.pow(e))?;
                }
            }
            let Some(pd) = p.total_degree().finite() else { continue };
            if pd > degree_bound {
                continue;
            }
            for m in monomials_up_to(s_ring.num_vars(), degree_bound - pd) {
                let mono = MultiPoly::monomial(s_ring, m, field.one());
                old_products.push(mono.mul(&p)?);
            }
        }
        let sbasis = MonomialBasis::from_polys(zfree.iter().chain(old_products.iter()));
        let mut span = RowSpace::new(field, sbasis.len());
        for p in &old_products {
            if let Some(v) = sbasis.vector(p, field) {
                span.insert(v);
            }
        }
        for p in &zfree {
            let v = sbasis.vector(p, field).expect("own basis");
            let reduced = span.reduce(v);
            if reduced.iter().all(|c| c.is_zero()) {
                continue;
            }
            span.insert(reduced.clone());
            emitted.push((sbasis.poly(&reduced, s_ring).normalized(), w));
        }
    }
    Ok(emitted)
}

/// Symbolic invariance of the specialized universal generators for the
/// generic monic polynomial of degree n: unchanged under Z -> Z + s and
/// scaling by u^deg under a_i -> a_i u^i.
pub fn check_translation_invariance(n: u32, field: FieldSpec) -> Result<bool> {
    let u_gens = universal_invariants(&[n as usize], field, None)?;

    // shift check in k[a_1..a_n, s, Z]
    let mut vars: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    vars.push("s".into());
    vars.push("Z".into());
    let big = Ring::new(field, vars.clone(), None)?;
    let zi = n as usize + 1;
    let si = n as usize;
    let a: Vec<MultiPoly> = (0..n as usize).map(|i| MultiPoly::var(&big, i)).collect();
    let zp = MultiPoly::var(&big, zi);
    let mut f = zp.pow(n);
    for (i, ai) in a.iter().enumerate() {
        f = f.add(&ai.mul(&zp.pow(n - 1 - i as u32))?)?;
    }
    let mut images: Vec<MultiPoly> = (0..big.num_vars()).map(|i| MultiPoly::var(&big, i)).collect();
    images[zi] = zp.add(&MultiPoly::var(&big, si))?;
    let shifted = f.substitute(&images, &big)?;
    let coeffs = shifted.coeffs_in(zi);
    let a_shift: Vec<MultiPoly> =
        (1..=n).map(|i| coeffs[(n - i) as usize].clone()).collect();
    let spec_plain = u_gens.specialize_in(&a, &big)?;
    let spec_shift = u_gens.specialize_in(&a_shift, &big)?;
    if spec_plain != spec_shift {
        return Ok(false);
    }

    // scaling check in k[a_1..a_n, u]: h(a_i u^i) = u^deg h(a)
    let mut vars: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    vars.push("u".into());
    let big = Ring::new(field, vars, None)?;
    let unit = MultiPoly::var(&big, n as usize);
    let a: Vec<MultiPoly> = (0..n as usize).map(|i| MultiPoly::var(&big, i)).collect();
    let a_scaled: Vec<MultiPoly> = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai.mul(&unit.pow(i as u32 + 1)).expect("same ring"))
        .collect();
    let plain = u_gens.specialize_in(&a, &big)?;
    let scaled = u_gens.specialize_in(&a_scaled, &big)?;
    for ((h, m), (hs, _)) in plain.iter().zip(scaled.iter()) {
        if *hs != h.mul(&unit.pow(*m))? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl UniversalElimGens {
    /// Specializes every generator (including those that vanish, so the
    /// output aligns index-wise) at the given single-block coefficients.
    fn specialize_in(
        &self,
        coeffs: &[MultiPoly],
        target: &Arc<Ring>,
    ) -> Result<Vec<(MultiPoly, u32)>> {
        let images = self.coefficient_images(&[coeffs.to_vec()], target)?;
        self.gens
            .iter()
            .map(|g| Ok((g.rewritten.substitute(&images, target)?, g.degree)))
            .collect()
    }
}

/// Compares the Hasse Z-derivatives of the generic split monic
/// polynomial F_n = prod (Z - Y_i) with elementary symmetric
/// polynomials of (Z - Y_1, ..., Z - Y_n). For each order e, reports
/// whether the derivative equals e_{n-e}(Z - Y) as is, and whether it
/// equals the sign-twisted (-1)^{n-e} e_{n-e}(Z - Y).
pub struct HasseSymmetricReport {
    pub order: u32,
    pub plain_matches: bool,
    pub signed_matches: bool,
}

pub fn hasse_symmetric_identity(n: u32, field: FieldSpec) -> Result<Vec<HasseSymmetricReport>> {
    let mut vars: Vec<String> = (1..=n).map(|i| format!("Y{i}")).collect();
    vars.push("Z".into());
    let zi = n as usize;
    let ring = Ring::new(field, vars, Some(zi))?;
    let zp = MultiPoly::var(&ring, zi);
    let mut f = MultiPoly::one(&ring);
    let diffs: Vec<MultiPoly> = (0..n as usize)
        .map(|i| zp.sub(&MultiPoly::var(&ring, i)).expect("same ring"))
        .collect();
    for d in &diffs {
        f = f.mul(d)?;
    }
    let mut out = Vec::new();
    for e in 0..=n {
        let der = f.hasse_derivative_z(e)?;
        let sym = elementary_symmetric_of(&diffs, (n - e) as usize)?;
        let sign = field.from_i64(if (n - e) % 2 == 1 { -1 } else { 1 });
        out.push(HasseSymmetricReport {
            order: e,
            plain_matches: der == sym,
            signed_matches: der == sym.scale(&sign),
        });
    }
    Ok(out)
}

fn elementary_symmetric_of(elems: &[MultiPoly], k: usize) -> Result<MultiPoly> {
    let ring = elems[0].ring().clone();
    let mut out = MultiPoly::zero(&ring);
    let n = elems.len();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 {
        return Ok(MultiPoly::one(&ring));
    }
    loop {
        let mut p = MultiPoly::one(&ring);
        for &i in &idx {
            p = p.mul(&elems[i])?;
        }
        out = out.add(&p)?;
        // next k-subset in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Checks that every single-polynomial universal generator of the
/// product f_r * f_s with symbolic block coefficients specializes into
/// the two-polynomial elimination algebra's graded pieces, up to the
/// multiplier bound.
pub fn check_specialization_compat(r: u32, s: u32, field: FieldSpec, bound: u32) -> Result<bool> {
    let n = r + s;
    if n > 4 {
        return Err(Error::DegreeTooLarge(n));
    }
    let mut vars: Vec<String> = (1..=r).map(|i| format!("a{i}")).collect();
    vars.extend((1..=s).map(|i| format!("b{i}")));
    let coeff_ring = Ring::new(field, vars.clone(), None)?;
    let mut zvars = vars.clone();
    zvars.push("Z".into());
    let big = Ring::new(field, zvars, None)?;
    let zi = (r + s) as usize;
    let zp = MultiPoly::var(&big, zi);

    let block = |offset: usize, deg: u32| -> Result<MultiPoly> {
        let mut f = zp.pow(deg);
        for i in 0..deg as usize {
            let ai = MultiPoly::var(&big, offset + i);
            f = f.add(&ai.mul(&zp.pow(deg - 1 - i as u32))?)?;
        }
        Ok(f)
    };
    let fr = block(0, r)?;
    let fs = block(r as usize, s)?;
    let prod = fr.mul(&fs)?;
    let coeffs = prod.coeffs_in(zi);
    let c: Vec<MultiPoly> = (1..=n)
        .map(|i| coeffs[(n - i) as usize].reembed(&coeff_ring))
        .collect::<Result<Vec<_>>>()?;

    let a: Vec<MultiPoly> = (0..r as usize).map(|i| MultiPoly::var(&coeff_ring, i)).collect();
    let b: Vec<MultiPoly> =
        (0..s as usize).map(|i| MultiPoly::var(&coeff_ring, r as usize + i)).collect();

    let one_poly = universal_invariants(&[n as usize], field, None)?;
    let two_poly = universal_invariants(&[r as usize, s as usize], field, Some(pair_bound(r, s)))?;
    let singles = one_poly.specialize(&[c], &coeff_ring)?;
    let pair_gens = two_poly.specialize(&[a, b], &coeff_ring)?;
    let pair_alg = ReesAlgebra::new(&coeff_ring, pair_gens)?;
    for (h, m) in singles {
        if !pair_alg.graded_piece(m).contains_bounded(&h, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verdict of the desk-scale local-presentation check: the relatively
/// saturated algebra against O[f W^n, Hasse Z-derivatives of f, and the
/// elimination algebra].
#[derive(Debug)]
pub struct LocalPresentation {
    pub verdict: EquivVerdict,
    pub tau_source: usize,
    pub tau_presented: usize,
}

pub fn verify_local_presentation(
    g: &ReesAlgebra,
    f: &WeightedElem,
    k_max: u32,
) -> Result<LocalPresentation> {
    let ring = g.ring();
    let z = ring.z_index().ok_or(Error::NoDistinguishedVar)?;
    if !g.gens().contains(f) {
        return Err(Error::Precondition("f is not among the generators".into()));
    }
    let n = f.weight;
    if f.poly.order_at_origin() != Order::Finite(n) {
        return Err(Error::Precondition(format!(
            "f must have order exactly {n} at the origin"
        )));
    }
    let s_ring = ring.base_ring()?;
    monic_coefficients(&f.poly, z, n, &s_ring)?;

    let elim = elimination_algebra(g, ElimRoute::Universal, ElimBounds::default())?;
    let mut gens = vec![(f.poly.clone(), n)];
    for e in 1..n {
        gens.push((f.poly.hasse_derivative_z(e)?, n - e));
    }
    for w in elim.algebra.gens() {
        gens.push((w.poly.reembed(ring)?, w.weight));
    }
    let presented = ReesAlgebra::new(ring, gens)?;
    let all_weights: Vec<u32> = g
        .gens()
        .iter()
        .chain(presented.gens())
        .map(|w| w.weight)
        .collect();
    let n_common = all_weights.iter().fold(1u32, |acc, &w| num_integer::lcm(acc, w));
    let verdict = check_integral_equiv_desk(g, &presented, n_common, k_max)?;
    Ok(LocalPresentation {
        verdict,
        tau_source: tau(g)?,
        tau_presented: tau(&presented)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DropMode {
    Absolute,
    RelativeOnly,
}

impl DropMode {
    pub fn label(&self) -> &'static str {
        match self {
            DropMode::Absolute => "absolute",
            DropMode::RelativeOnly => "relative-only",
        }
    }
}

/// Result of the tau-drop verification at the origin.
#[derive(Clone, Debug)]
pub struct TauDrop {
    pub tau_g: usize,
    pub tau_r: usize,
    pub mode: DropMode,
    pub route: ElimRoute,
    pub holds: bool,
}

/// Verifies the tau-drop statement: in absolute mode (fully saturated
/// input) the elimination algebra's tau is exactly tau - 1; in
/// relative-only mode it is at most tau - 1.
pub fn tau_drop_check(
    g: &ReesAlgebra,
    mode: DropMode,
    route: Option<ElimRoute>,
) -> Result<TauDrop> {
    match mode {
        DropMode::Absolute => {
            if g.saturation() != Saturation::Absolute {
                return Err(Error::Precondition(
                    "absolute mode requires a differentially saturated algebra".into(),
                ));
            }
        }
        DropMode::RelativeOnly => require_relative_saturation(g)?,
    }
    let t = is_transversal(g)?;
    if !t.cone_transversal {
        return Err(Error::Precondition(
            "the distinguished direction is not transversal to the tangent cone".into(),
        ));
    }
    let tau_g = tau(g)?;
    if tau_g == 0 {
        return Err(Error::Precondition("tau at the origin is 0; nothing to drop".into()));
    }
    let (elim, route) = match route {
        Some(r) => (elimination_algebra(g, r, ElimBounds::default())?, r),
        None => match elimination_algebra(g, ElimRoute::Universal, ElimBounds::default()) {
            Ok(e) => (e, ElimRoute::Universal),
            Err(Error::NotMonic(_)) | Err(Error::DegreeTooLarge(_)) => (
                elimination_algebra(g, ElimRoute::ZFree, ElimBounds::default())?,
                ElimRoute::ZFree,
            ),
            Err(e) => return Err(e),
        },
    };
    let tau_r = tau(&elim.algebra)?;
    let holds = match mode {
        DropMode::Absolute => tau_r == tau_g - 1,
        DropMode::RelativeOnly => tau_r <= tau_g - 1,
    };
    Ok(TauDrop { tau_g, tau_r, mode, route, holds })
}

/// Attempts to make f monic in the distinguished variable (Z-degree n
/// with constant leading coefficient) by a deterministic search over
/// linear coordinate changes x_i -> x_i + c_i Z. A shift of Z alone
/// cannot change the leading Z-coefficient, so the change moves the
/// other variables along the Z-direction.
pub fn make_monic_via_change(f: &MultiPoly, n: u32) -> Result<MultiPoly> {
    let ring = f.ring().clone();
    let z = ring.z_index().ok_or(Error::NoDistinguishedVar)?;
    let field = ring.field();
    let is_monic = |p: &MultiPoly| {
        p.degree_in(z) == Some(n)
            && p.coeffs_in(z)[n as usize].total_degree() == Order::Finite(0)
    };
    if is_monic(f) {
        return Ok(f.clone());
    }
    let base_vars: Vec<usize> = (0..ring.num_vars()).filter(|&i| i != z).collect();
    let values: Vec<i64> = vec![1, -1, 2, -2, 3, -3];
    let mut attempts = 0;
    let mut stack = vec![vec![]];
    while let Some(partial) = stack.pop() {
        if partial.len() == base_vars.len() {
            attempts += 1;
            if attempts > 400 {
                break;
            }
            let zp = MultiPoly::var(&ring, z);
            let mut images: Vec<MultiPoly> =
                (0..ring.num_vars()).map(|i| MultiPoly::var(&ring, i)).collect();
            for (k, &v) in base_vars.iter().enumerate() {
                let c: i64 = partial[k];
                let shift = zp.scale(&field.from_i64(c));
                images[v] = images[v].add(&shift)?;
            }
            let moved = f.substitute(&images, &ring)?;
            if is_monic(&moved) {
                let unit = moved.coeffs_in(z)[n as usize].leading_coeff().unwrap().inv();
                return Ok(moved.scale(&unit));
            }
            continue;
        }
        for &v in values.iter().rev() {
            let mut next = partial.clone();
            next.push(v);
            stack.push(next);
        }
    }
    Err(Error::NotMonic(f.to_string()))
}
