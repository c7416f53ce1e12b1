//! Loader for the plain-text algebra file format:
//!
//! ```text
//! # comment
//! field Q            (or F2, F3, F5, ...)
//! vars x,y,z
//! z-var z            (optional distinguished variable)
//! gen 2 z^2 - x^3
//! ```

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::Ring;
use crate::rees::ReesAlgebra;
use crate::scalar::FieldSpec;

/// A parsed algebra file: the ring and the Rees algebra it declares.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub ring: Arc<Ring>,
    pub algebra: ReesAlgebra,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::AlgFile { line, msg: msg.into() }
}

pub fn parse_alg(source: &str) -> Result<AlgebraFile> {
    let mut field: Option<(usize, FieldSpec)> = None;
    let mut vars: Option<(usize, Vec<String>)> = None;
    let mut z_var: Option<(usize, String)> = None;
    let mut gens: Vec<(usize, u32, String)> = Vec::new();

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "field" => {
                if field.is_some() {
                    return Err(err(line_no, "duplicate `field` directive"));
                }
                let spec = if rest == "Q" {
                    FieldSpec::Rational
                } else if let Some(p) = rest.strip_prefix('F') {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| err(line_no, format!("unrecognized field `{rest}`")))?;
                    FieldSpec::prime(p).map_err(|e| err(line_no, e.to_string()))?
                } else {
                    return Err(err(line_no, format!("unrecognized field `{rest}`")));
                };
                field = Some((line_no, spec));
            }
            "vars" => {
                if vars.is_some() {
                    return Err(err(line_no, "duplicate `vars` directive"));
                }
                let names: Vec<String> = rest
                    .split(',')
                    .map(|v| v.trim().to_string())
                    .filter(|v| !v.is_empty())
                    .collect();
                if names.is_empty() {
                    return Err(err(line_no, "`vars` needs a comma-separated variable list"));
                }
                vars = Some((line_no, names));
            }
            "z-var" => {
                if z_var.is_some() {
                    return Err(err(line_no, "duplicate `z-var` directive"));
                }
                if rest.is_empty() {
                    return Err(err(line_no, "`z-var` needs a variable name"));
                }
                z_var = Some((line_no, rest.to_string()));
            }
            "gen" => {
                let (weight, poly) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| err(line_no, "`gen` needs a weight and a polynomial"))?;
                let weight: u32 = weight
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid weight `{weight}`")))?;
                if weight == 0 {
                    return Err(err(line_no, "weight must be at least 1"));
                }
                gens.push((line_no, weight, poly.trim().to_string()));
            }
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }

    let (_, field) = field.ok_or_else(|| err(source.lines().count(), "missing `field` directive"))?;
    let (vars_line, vars) = vars.ok_or_else(|| err(source.lines().count(), "missing `vars` directive"))?;
    let z_index = match z_var {
        Some((line, name)) => Some(
            vars.iter()
                .position(|v| *v == name)
                .ok_or_else(|| err(line, format!("z-var `{name}` is not among the vars")))?,
        ),
        None => None,
    };
    let ring =
        Ring::new(field, vars, z_index).map_err(|e| err(vars_line, e.to_string()))?;
    let mut parsed = Vec::new();
    for (line, weight, src) in gens {
        let poly = parse_poly(&src, &ring).map_err(|e| err(line, e.to_string()))?;
        parsed.push((poly, weight));
    }
    let algebra = ReesAlgebra::new(&ring, parsed)?;
    Ok(AlgebraFile { ring, algebra })
}

pub fn load_alg(path: impl AsRef<Path>) -> Result<AlgebraFile> {
    let source = std::fs::read_to_string(path)?;
    parse_alg(&source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cusp_file() {
        let f = parse_alg("# the cusp\nfield Q\nvars x,z\nz-var z\ngen 2 z^2 - x^3\n").unwrap();
        assert_eq!(f.ring.vars(), &["x".to_string(), "z".to_string()]);
        assert_eq!(f.ring.z_index(), Some(1));
        assert_eq!(f.algebra.gens().len(), 1);
        assert_eq!(f.algebra.gens()[0].weight, 2);
    }

    #[test]
    fn parses_prime_field() {
        let f = parse_alg("field F5\nvars x,z\ngen 1 x + z\n").unwrap();
        assert_eq!(f.ring.field(), FieldSpec::prime(5).unwrap());
        assert_eq!(f.ring.z_index(), None);
    }

    #[test]
    fn error_lines_are_reported() {
        let e = parse_alg("field Q\nvars x,z\ngen 2 z^2 +\n").unwrap_err();
        assert!(matches!(e, Error::AlgFile { line: 3, .. }), "{e}");

        let e = parse_alg("field F4\nvars x\n").unwrap_err();
        assert!(matches!(e, Error::AlgFile { line: 1, .. }), "{e}");

        let e = parse_alg("field Q\nvars x,z\nz-var w\ngen 1 x\n").unwrap_err();
        assert!(matches!(e, Error::AlgFile { line: 3, .. }), "{e}");

        let e = parse_alg("field Q\nvars x\nbogus 1\n").unwrap_err();
        assert!(matches!(e, Error::AlgFile { line: 3, .. }), "{e}");

        let e = parse_alg("vars x\ngen 1 x\n").unwrap_err();
        assert!(matches!(e, Error::AlgFile { .. }), "{e}");
    }

    #[test]
    fn zero_weight_rejected() {
        let e = parse_alg("field Q\nvars x\ngen 0 x\n").unwrap_err();
        assert!(matches!(e, Error::AlgFile { line: 3, .. }), "{e}");
    }
}
