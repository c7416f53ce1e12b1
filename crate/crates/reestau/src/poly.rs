//! Sparse multivariate polynomials over Q and F_p.
//!
//! Terms are stored canonically: a map from exponent vectors to nonzero
//! coefficients. Two polynomials over the same ring are equal iff their
//! term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{binomial, is_negative, FieldSpec, Scalar};

/// A polynomial ring: coefficient field, ordered variables, and an
/// optional distinguished variable Z (the fiber direction of the
/// projection that forgets it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    field: FieldSpec,
    vars: Vec<String>,
    z_index: Option<usize>,
}

impl Ring {
    pub fn new(field: FieldSpec, vars: Vec<String>, z_index: Option<usize>) -> Result<Arc<Ring>> {
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidRing("empty variable name".into()));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let Some(z) = z_index {
            if z >= vars.len() {
                return Err(Error::InvalidRing(format!("z-index {z} out of range")));
            }
        }
        Ok(Arc::new(Ring { field, vars, z_index }))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn z_index(&self) -> Option<usize> {
        self.z_index
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// One-line description for reports, e.g. `Q[x,z] (z-var z)`.
    pub fn describe(&self) -> String {
        let field = match self.field {
            FieldSpec::Rational => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        };
        let base = format!("{field}[{}]", self.vars.join(","));
        match self.z_index {
            Some(z) => format!("{base} (z-var {})", self.vars[z]),
            None => base,
        }
    }

    /// The base ring of the projection: same field, Z removed.
    pub fn base_ring(self: &Arc<Self>) -> Result<Arc<Ring>> {
        let z = self.z_index.ok_or(Error::NoDistinguishedVar)?;
        let vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != z)
            .map(|(_, v)| v.clone())
            .collect();
        Ring::new(self.field, vars, None)
    }
}

/// Order of a polynomial at a point: minimal total degree, or infinity
/// for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn at_least(&self, n: u32) -> bool {
        match self {
            Order::Finite(o) => *o >= n,
            Order::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<u32> {
        match self {
            Order::Finite(o) => Some(*o),
            Order::Infinite => None,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Infinite, Order::Infinite) => Ordering::Equal,
            (Order::Infinite, _) => Ordering::Greater,
            (_, Order::Infinite) => Ordering::Less,
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(o) => write!(f, "{o}"),
            Order::Infinite => write!(f, "infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = other.terms.iter().collect();
        a.cmp(&b)
    }
}

impl MultiPoly {
    pub fn zero(ring: &Arc<Ring>) -> MultiPoly {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> MultiPoly {
        MultiPoly::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ring.num_vars()], c);
        }
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn from_i64(ring: &Arc<Ring>, n: i64) -> MultiPoly {
        MultiPoly::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &Arc<Ring>, idx: usize) -> MultiPoly {
        let mut exps = vec![0; ring.num_vars()];
        exps[idx] = 1;
        MultiPoly::from_terms(ring, vec![(exps, ring.field().one())])
    }

    pub fn monomial(ring: &Arc<Ring>, exps: Vec<u32>, c: Scalar) -> MultiPoly {
        MultiPoly::from_terms(ring, vec![(exps, c)])
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<(Vec<u32>, Scalar)>) -> MultiPoly {
        let mut map: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.num_vars(), "exponent vector length");
            let entry = map.entry(e).or_insert_with(|| ring.field().zero());
            *entry = entry.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly { ring: ring.clone(), terms: map }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.ring.field().zero())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(|| self.ring.field().zero());
            *entry = entry.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { ring: self.ring.clone(), terms })
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other)?;
        let mut map: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca.mul(cb);
                let entry = map.entry(e).or_insert_with(|| self.ring.field().zero());
                *entry = entry.add(&c);
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { ring: self.ring.clone(), terms: map })
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn total_degree(&self) -> Order {
        self.terms
            .keys()
            .map(|e| Order::Finite(e.iter().sum()))
            .max()
            .unwrap_or(Order::Infinite)
    }

    /// Minimal total degree among the terms; infinity for zero.
    pub fn order_at_origin(&self) -> Order {
        self.terms
            .keys()
            .map(|e| Order::Finite(e.iter().sum()))
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// The degree-n homogeneous part, with no order checks.
    pub fn homogeneous_part(&self, n: u32) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == n)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// The initial form of weight n: the degree-n part when the order is
    /// exactly n, zero when the order exceeds n. An order below n breaks
    /// the weight contract and is an error.
    pub fn initial_form(&self, n: u32) -> Result<MultiPoly> {
        match self.order_at_origin() {
            Order::Infinite => Ok(MultiPoly::zero(&self.ring)),
            Order::Finite(o) if o > n => Ok(MultiPoly::zero(&self.ring)),
            Order::Finite(o) if o == n => Ok(self.homogeneous_part(n)),
            Order::Finite(o) => Err(Error::OrderBelowWeight {
                gen: self.to_string(),
                order: o.to_string(),
                weight: n,
            }),
        }
    }

    /// The Hasse-Schmidt (divided-power) derivative: the coefficient of
    /// T^alpha in the Taylor shift f(x + T), computed termwise through
    /// binomial coefficients reduced into the field.
    pub fn hasse_derivative(&self, alpha: &[u32]) -> MultiPoly {
        assert_eq!(alpha.len(), self.ring.num_vars());
        let field = self.ring.field();
        let mut out: Vec<(Vec<u32>, Scalar)> = Vec::new();
        'term: for (e, c) in &self.terms {
            let mut coef = c.clone();
            let mut shifted = Vec::with_capacity(e.len());
            for (b, a) in e.iter().zip(alpha) {
                if a > b {
                    continue 'term;
                }
                coef = coef.mul(&binomial(field, *b, *a));
                shifted.push(b - a);
            }
            if !coef.is_zero() {
                out.push((shifted, coef));
            }
        }
        MultiPoly::from_terms(&self.ring, out)
    }

    /// Hasse derivative purely in the distinguished direction.
    pub fn hasse_derivative_z(&self, e: u32) -> Result<MultiPoly> {
        let z = self.ring.z_index().ok_or(Error::NoDistinguishedVar)?;
        let mut alpha = vec![0; self.ring.num_vars()];
        alpha[z] = e;
        Ok(self.hasse_derivative(&alpha))
    }

    /// Composes the polynomial with the given images (one per variable),
    /// landing in the images' ring.
    pub fn substitute(&self, images: &[MultiPoly], target: &Arc<Ring>) -> Result<MultiPoly> {
        if images.len() != self.ring.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.num_vars(),
                got: images.len(),
            });
        }
        for im in images {
            if im.ring() != target {
                return Err(Error::RingMismatch);
            }
        }
        if self.ring.field() != target.field() {
            return Err(Error::RingMismatch);
        }
        let mut acc = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&images[i].pow(exp))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Re-expresses a polynomial verbatim in another ring with the same
    /// field; variables are matched by name, and every variable that
    /// actually occurs must exist there.
    pub fn reembed(&self, target: &Arc<Ring>) -> Result<MultiPoly> {
        if self.ring.field() != target.field() {
            return Err(Error::RingMismatch);
        }
        let map: Vec<Option<usize>> =
            self.ring.vars().iter().map(|v| target.var_index(v)).collect();
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; target.num_vars()];
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    let j = map[i].ok_or_else(|| {
                        Error::UnknownVariable(self.ring.vars()[i].clone())
                    })?;
                    exps[j] = x;
                }
            }
            out.push((exps, c.clone()));
        }
        Ok(MultiPoly::from_terms(target, out))
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.num_vars(),
                got: point.len(),
            });
        }
        let mut acc = self.ring.field().zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    v = v.mul(&point[i].pow(exp as u64));
                }
            }
            acc = acc.add(&v);
        }
        Ok(acc)
    }

    /// Translates the given point to the origin: f(x + c).
    pub fn translate(&self, point: &[Scalar]) -> Result<MultiPoly> {
        if point.len() != self.ring.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.num_vars(),
                got: point.len(),
            });
        }
        let images: Vec<MultiPoly> = (0..self.ring.num_vars())
            .map(|i| {
                MultiPoly::var(&self.ring, i)
                    .add(&MultiPoly::constant(&self.ring, point[i].clone()))
                    .expect("same ring")
            })
            .collect();
        self.substitute(&images, &self.ring)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Coefficients as a polynomial in the given variable, ascending by
    /// power; each entry is free of that variable.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = match self.degree_in(var) {
            Some(d) => d,
            None => return vec![],
        };
        let mut out = vec![MultiPoly::zero(&self.ring); deg as usize + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut rest = e.clone();
            rest[var] = 0;
            out[k] = out[k]
                .add(&MultiPoly::monomial(&self.ring, rest, c.clone()))
                .expect("same ring");
        }
        out
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Untwists an additive form g = sum c_i X_i^{p^e} into the linear
    /// form l with l^{p^e} = g, verified by re-powering.
    pub fn frobenius_root(&self, e: u32) -> Result<MultiPoly> {
        if e == 0 {
            if self.terms.keys().all(|x| x.iter().sum::<u32>() == 1) && !self.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::NotAdditive(self.to_string(), 0));
        }
        let p = match self.ring.field() {
            FieldSpec::Prime(p) => p,
            FieldSpec::Rational => return Err(Error::CharZeroFrobenius),
        };
        let q = (p as u128).pow(e);
        if q > u32::MAX as u128 {
            return Err(Error::DegreeTooLarge(e));
        }
        let q = q as u32;
        let mut out = Vec::new();
        for (exps, c) in &self.terms {
            let mut unit = None;
            for (i, &x) in exps.iter().enumerate() {
                if x != 0 {
                    if x == q && unit.is_none() {
                        unit = Some(i);
                    } else {
                        return Err(Error::NotAdditive(self.to_string(), e));
                    }
                }
            }
            let i = unit.ok_or_else(|| Error::NotAdditive(self.to_string(), e))?;
            let mut le = vec![0u32; exps.len()];
            le[i] = 1;
            // coefficients lie in the prime field, so c is its own p-th root
            out.push((le, c.clone()));
        }
        let root = MultiPoly::from_terms(&self.ring, out);
        if &root.pow(q) != self {
            return Err(Error::NotAdditive(self.to_string(), e));
        }
        Ok(root)
    }

    /// Leading coefficient under graded-lex, used for normalization.
    pub fn leading_coeff(&self) -> Option<Scalar> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| grlex(a, b))
            .map(|(_, c)| c.clone())
    }

    /// Scales so the graded-lex leading coefficient becomes one.
    pub fn normalized(&self) -> MultiPoly {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex(b, a));
        let mut first = true;
        for e in keys {
            let c = &self.terms[e];
            let (sign, mag) = if is_negative(c) { ("-", c.neg()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let is_const = e.iter().all(|&x| x == 0);
            let mut wrote = false;
            if is_const || !mag.is_one() {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                write!(f, "{}", self.ring.vars()[i])?;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
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

    #[test]
    fn arithmetic_basics() {
        let r = qring(&["x"]);
        let x = MultiPoly::var(&r, 0);
        let one = MultiPoly::one(&r);
        let prod = x.add(&one).unwrap().mul(&x.sub(&one).unwrap()).unwrap();
        let expect = x.pow(2).sub(&one).unwrap();
        assert_eq!(prod, expect);
        assert_eq!(x.pow(0), one);
    }

    #[test]
    fn char2_frobenius_square() {
        let r = fring(2, &["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let sq = x.add(&y).unwrap().pow(2);
        let expect = x.pow(2).add(&y.pow(2)).unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn char2_cancellation() {
        let r = fring(2, &["x"]);
        let x = MultiPoly::var(&r, 0);
        assert!(x.add(&x).unwrap().is_zero());
    }

    #[test]
    fn orders() {
        let r = qring(&["x", "z"]);
        let f = parse_poly("z^2 - x^3", &r).unwrap();
        assert_eq!(f.order_at_origin(), Order::Finite(2));
        assert_eq!(MultiPoly::zero(&r).order_at_origin(), Order::Infinite);
        let g = parse_poly("1 + x", &r).unwrap();
        assert_eq!(g.order_at_origin(), Order::Finite(0));
    }

    #[test]
    fn initial_forms() {
        let r = qring(&["x", "z"]);
        let f = parse_poly("z^2 - x^3", &r).unwrap();
        assert_eq!(f.initial_form(2).unwrap(), parse_poly("z^2", &r).unwrap());
        let g = parse_poly("x^3", &r).unwrap();
        assert!(g.initial_form(2).unwrap().is_zero());
        let h = parse_poly("z^2 + z*x + x^2", &r).unwrap();
        assert_eq!(h.initial_form(2).unwrap(), h);
        assert!(parse_poly("x", &r).unwrap().initial_form(2).is_err());
    }

    #[test]
    fn hasse_examples() {
        let r = qring(&["x", "z"]);
        let f = parse_poly("z^3", &r).unwrap();
        assert_eq!(f.hasse_derivative(&[0, 1]), parse_poly("3*z^2", &r).unwrap());

        let r2 = fring(2, &["z"]);
        let g = parse_poly("z^2", &r2).unwrap();
        assert!(g.hasse_derivative(&[1]).is_zero());
        assert_eq!(g.hasse_derivative(&[2]), MultiPoly::one(&r2));

        // coefficient of T1*T2 in (x+T1)^2 (y+T2)
        let r3 = qring(&["x", "y"]);
        let h = parse_poly("x^2*y", &r3).unwrap();
        assert_eq!(h.hasse_derivative(&[1, 1]), parse_poly("2*x", &r3).unwrap());
    }

    #[test]
    fn substitution() {
        let r = qring(&["x", "z"]);
        let f = parse_poly("z^2 - x", &r).unwrap();
        let images = vec![
            MultiPoly::var(&r, 0),
            parse_poly("z + 1", &r).unwrap(),
        ];
        let g = f.substitute(&images, &r).unwrap();
        assert_eq!(g, parse_poly("z^2 + 2*z + 1 - x", &r).unwrap());

        let big = qring(&["u", "x", "z"]);
        let f2 = parse_poly("z^2", &r).unwrap();
        let uz = parse_poly("u*z", &big).unwrap();
        let g2 = f2
            .substitute(&[MultiPoly::var(&big, 1), uz], &big)
            .unwrap();
        assert_eq!(g2, parse_poly("u^2*z^2", &big).unwrap());
    }

    #[test]
    fn frobenius_roots() {
        let r = fring(2, &["X", "Y"]);
        let g = parse_poly("X^2 + Y^2", &r).unwrap();
        assert_eq!(g.frobenius_root(1).unwrap(), parse_poly("X + Y", &r).unwrap());

        let r0 = qring(&["X"]);
        let x = MultiPoly::var(&r0, 0);
        assert_eq!(x.frobenius_root(0).unwrap(), x);
        assert!(x.pow(2).frobenius_root(0).is_err());

        let r3 = fring(3, &["X", "Y"]);
        let g9 = parse_poly("X^9 + 2*Y^9", &r3).unwrap();
        let root = g9.frobenius_root(2).unwrap();
        assert_eq!(root, parse_poly("X + 2*Y", &r3).unwrap());
        assert_eq!(root.pow(9), g9);
    }

    #[test]
    fn taylor_consistency() {
        // hasse derivatives agree with coefficient extraction from f(x+T)
        let r = qring(&["x", "z"]);
        let f = parse_poly("z^2*x + 3*x^2 - z", &r).unwrap();
        let big = qring(&["x", "z", "Tx", "Tz"]);
        let images = vec![
            parse_poly("x + Tx", &big).unwrap(),
            parse_poly("z + Tz", &big).unwrap(),
        ];
        let shifted = f.substitute(&images, &big).unwrap();
        for ax in 0..4u32 {
            for az in 0..4u32 {
                let mut collected = Vec::new();
                for (e, c) in shifted.terms() {
                    if e[2] == ax && e[3] == az {
                        collected.push((vec![e[0], e[1]], c.clone()));
                    }
                }
                let extracted = MultiPoly::from_terms(&r, collected);
                assert_eq!(extracted, f.hasse_derivative(&[ax, az]));
            }
        }
    }
}
