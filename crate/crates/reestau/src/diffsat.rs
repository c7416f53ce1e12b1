//! Differential saturation of Rees algebras: the explicit generator
//! family Delta^alpha(f_i) W^{n_i - |alpha|}, absolute or relative to
//! the projection that forgets the distinguished variable.

use crate::error::{Error, Result};
use crate::linalg::monomials_up_to;
use crate::rees::{PolyIdeal, ReesAlgebra, Saturation};

/// Closes the algebra under all Hasse derivatives of order below each
/// generator weight. One pass suffices; weight-0 outputs are dropped.
pub fn diff_saturate(g: &ReesAlgebra) -> ReesAlgebra {
    let ring = g.ring();
    let d = ring.num_vars();
    let mut gens: Vec<_> = g.gens().iter().map(|w| (w.poly.clone(), w.weight)).collect();
    for w in g.gens() {
        if w.weight < 2 {
            continue;
        }
        for alpha in monomials_up_to(d, w.weight - 1) {
            let order: u32 = alpha.iter().sum();
            if order == 0 {
                continue;
            }
            let der = w.poly.hasse_derivative(&alpha);
            if !der.is_zero() {
                gens.push((der, w.weight - order));
            }
        }
    }
    ReesAlgebra::new(ring, gens)
        .expect("generators share the ring")
        .with_saturation(Saturation::Absolute)
}

/// As `diff_saturate`, but only along the distinguished direction Z.
pub fn rel_diff_saturate(g: &ReesAlgebra) -> Result<ReesAlgebra> {
    let ring = g.ring();
    if ring.z_index().is_none() {
        return Err(Error::NoDistinguishedVar);
    }
    let mut gens: Vec<_> = g.gens().iter().map(|w| (w.poly.clone(), w.weight)).collect();
    for w in g.gens() {
        for e in 1..w.weight {
            let der = w.poly.hasse_derivative_z(e)?;
            if !der.is_zero() {
                gens.push((der, w.weight - e));
            }
        }
    }
    Ok(ReesAlgebra::new(ring, gens)?
        .with_saturation(Saturation::Relative))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffMode {
    Absolute,
    Relative,
}

/// Bounded verifier of differential closedness: every applicable Hasse
/// derivative of every generator must lie in the ideal spanned by the
/// products of matching weight, with multipliers up to `degree_bound`.
/// A positive answer is exact; a negative one may be a bound artifact.
pub fn is_diff_closed(g: &ReesAlgebra, mode: DiffMode, degree_bound: u32) -> Result<bool> {
    let ring = g.ring();
    let d = ring.num_vars();
    for w in g.gens() {
        if w.weight < 2 {
            continue;
        }
        let alphas: Vec<Vec<u32>> = match mode {
            DiffMode::Absolute => monomials_up_to(d, w.weight - 1)
                .into_iter()
                .filter(|a| a.iter().sum::<u32>() >= 1)
                .collect(),
            DiffMode::Relative => {
                let z = ring.z_index().ok_or(Error::NoDistinguishedVar)?;
                (1..w.weight)
                    .map(|e| {
                        let mut a = vec![0; d];
                        a[z] = e;
                        a
                    })
                    .collect()
            }
        };
        for alpha in alphas {
            let order: u32 = alpha.iter().sum();
            let der = w.poly.hasse_derivative(&alpha);
            if der.is_zero() {
                continue;
            }
            let piece: PolyIdeal = g.graded_piece(w.weight - order);
            if !piece.contains_bounded(&der, degree_bound)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::Ring;
    use crate::scalar::FieldSpec;
    use std::sync::Arc;

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
    fn saturation_adds_derivatives() {
        let r = ring(FieldSpec::Rational, &["x", "z"], None);
        let g = algebra(&r, &[("z^2 + x^2", 2)]);
        let s = diff_saturate(&g);
        let polys: Vec<String> = s.gens().iter().map(|w| format!("{} w{}", w.poly, w.weight)).collect();
        assert!(polys.contains(&"2*z w1".to_string()), "{polys:?}");
        assert!(polys.contains(&"2*x w1".to_string()), "{polys:?}");
        assert_eq!(s.gens().len(), 3);
    }

    #[test]
    fn char2_square_has_no_weight1_part() {
        let r = ring(FieldSpec::prime(2).unwrap(), &["x", "z"], None);
        let g = algebra(&r, &[("z^2", 2)]);
        let s = diff_saturate(&g);
        assert!(s.gens().iter().all(|w| w.weight != 1));
    }

    #[test]
    fn weight_one_unchanged() {
        let r = ring(FieldSpec::Rational, &["x"], None);
        let g = algebra(&r, &[("x", 1)]);
        let s = diff_saturate(&g);
        assert_eq!(s.gens(), g.gens());
    }

    #[test]
    fn relative_saturation() {
        let r = ring(FieldSpec::prime(2).unwrap(), &["x", "y", "z"], Some(2));
        let g = algebra(&r, &[("z^2 + x*z + y^3", 2)]);
        let s = rel_diff_saturate(&g).unwrap();
        let found: Vec<String> = s.gens().iter().map(|w| format!("{} w{}", w.poly, w.weight)).collect();
        assert!(found.contains(&"x w1".to_string()), "{found:?}");
        assert_eq!(s.gens().len(), 2);

        let r2 = ring(FieldSpec::Rational, &["x", "z"], Some(1));
        let g2 = algebra(&r2, &[("z^3", 3)]);
        let s2 = rel_diff_saturate(&g2).unwrap();
        let found: Vec<String> = s2.gens().iter().map(|w| format!("{} w{}", w.poly, w.weight)).collect();
        assert!(found.contains(&"3*z^2 w2".to_string()));
        assert!(found.contains(&"3*z w1".to_string()));

        // Z-free generator contributes nothing
        let g3 = algebra(&r2, &[("x^2", 2)]);
        let s3 = rel_diff_saturate(&g3).unwrap();
        assert_eq!(s3.gens(), g3.gens());
    }

    #[test]
    fn closedness_checks() {
        let r = ring(FieldSpec::Rational, &["x", "z"], None);
        let g = algebra(&r, &[("z^2 + x^2", 2)]);
        assert!(!is_diff_closed(&g, DiffMode::Absolute, 8).unwrap());
        assert!(is_diff_closed(&diff_saturate(&g), DiffMode::Absolute, 8).unwrap());
        let unit = algebra(&r, &[("x", 1)]);
        assert!(is_diff_closed(&unit, DiffMode::Absolute, 8).unwrap());
    }

    #[test]
    fn relative_subset_of_absolute() {
        let r = ring(FieldSpec::Rational, &["x", "z"], Some(1));
        let g = algebra(&r, &[("z^2 + x*z + x^2", 2)]);
        let rel = rel_diff_saturate(&g).unwrap();
        let abs = diff_saturate(&g);
        for w in rel.gens() {
            assert!(abs.gens().contains(w));
        }
    }

    #[test]
    fn monic_z_derivative_tower() {
        // for monic f of degree n in Z over Q, the n-th Z-derivative is
        // 1 and each intermediate one is monic of degree n - e (the
        // binomial coefficients are units in characteristic zero)
        let r = ring(FieldSpec::Rational, &["x", "z"], Some(1));
        let f = parse_poly("z^3 + x*z^2 + x^2*z + x^2", &r).unwrap();
        for e in 1..=3u32 {
            let der = f.hasse_derivative_z(e).unwrap();
            if e == 3 {
                assert_eq!(der, crate::poly::MultiPoly::one(&r));
            } else {
                assert_eq!(der.degree_in(1), Some(3 - e));
                let lead = der.coeffs_in(1).pop().unwrap();
                assert!(lead.is_constant() && !lead.is_zero());
            }
        }
    }
}
