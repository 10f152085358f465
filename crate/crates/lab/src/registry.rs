//! Named examples with their known values.

use std::f64::consts::PI;

use num_rational::Rational64;
use rif_core::compose::{compose, CompositionResult};
use rif_core::examples::{bidisk, p32, pascoe, phi_d};
use rif_core::integrab::cutoff_from_order_exact;
use rif_core::poly::MultiPoly;
use rif_core::{Rif, RifError};
use thiserror::Error;

use crate::parse::parse_poly;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown example `{name}`; available: {}", available().join(", "))]
    UnknownExample { name: String },
    #[error("example `{name}` failed to build: {source}")]
    Build { name: String, source: RifError },
}

/// Names accepted by [`lookup`]; `<d>` is at least 2 and `<N>` at least 1.
pub fn available() -> Vec<&'static str> {
    vec!["bps_phi_plus", "bps_phi_minus", "bps_psi", "pascoe_74", "phi_d:<d>", "phi_d:<d>:<N>"]
}

/// A concrete list covering every family, for tests and batch runs.
pub fn samples() -> Vec<String> {
    ["bps_phi_plus", "bps_phi_minus", "bps_psi", "pascoe_74", "phi_d:2", "phi_d:3", "phi_d:2:2", "phi_d:3:2"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Whether `text` is shaped like a registry name rather than a polynomial.
pub fn looks_like_name(text: &str) -> bool {
    text.contains('_') || text.contains(':')
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedSingularity {
    /// Angles of the first `d - 1` coordinates.
    pub zhat: Vec<f64>,
    pub eta: f64,
    pub order: u32,
    pub cutoff: Rational64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expected {
    /// Slice determinant in `z1` (two variables only).
    pub slice_det: Option<MultiPoly>,
    /// Denominator and numerator, each up to a unimodular constant.
    pub denominator: Option<MultiPoly>,
    pub numerator: Option<MultiPoly>,
    pub singularities: Vec<ExpectedSingularity>,
    pub polydegree_drop: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: String,
    pub description: String,
    pub rif: Rif,
    /// Set for entries built as composition powers.
    pub composition: Option<CompositionResult>,
    pub expected: Expected,
}

fn poly(text: &str, nvars: usize) -> MultiPoly {
    parse_poly(text, nvars).expect("registry literal parses")
}

fn point(zhat: &[f64], eta: f64, order: u32, d: usize) -> ExpectedSingularity {
    ExpectedSingularity { zhat: zhat.to_vec(), eta, order, cutoff: cutoff_from_order_exact(order, d) }
}

pub fn lookup(name: &str) -> Result<Example, RegistryError> {
    let unknown = || RegistryError::UnknownExample { name: name.to_string() };
    let build = |r: Result<Rif, RifError>| r.map_err(|source| RegistryError::Build { name: name.into(), source });
    let built = |rif, description: String, expected| Example {
        name: name.into(),
        description,
        rif,
        composition: None,
        expected,
    };
    Ok(match name {
        "bps_phi_plus" => built(
            build(bidisk(1))?,
            "(2 z1 z2 - z1 - z2) / (2 - z1 - z2)".into(),
            Expected {
                slice_det: Some(poly("-2 + 4*z1 - 2*z1^2", 1)),
                singularities: vec![point(&[0.0], 0.0, 2, 2)],
                ..Default::default()
            },
        ),
        "bps_phi_minus" => built(
            build(bidisk(-1))?,
            "-(2 z1 z2 - z1 - z2) / (2 - z1 - z2)".into(),
            Expected {
                slice_det: Some(poly("2 - 4*z1 + 2*z1^2", 1)),
                singularities: vec![point(&[0.0], 0.0, 2, 2)],
                ..Default::default()
            },
        ),
        "bps_psi" => {
            let c = compose(&build(bidisk(1))?, 2).map_err(|source| RegistryError::Build { name: name.into(), source })?;
            Example {
                name: name.into(),
                description: "second composition power of bps_phi_plus".into(),
                rif: c.rif.clone(),
                composition: Some(c),
                expected: Expected {
                    slice_det: Some(poly("4*(z1 - 1)^4", 1)),
                    denominator: Some(poly("4 - 3*z1 - z2 - z1*z2 + z1^2", 2)),
                    numerator: Some(poly("4*z1^2*z2 - z1^2 - 3*z1*z2 - z1 + z2", 2)),
                    singularities: vec![point(&[0.0], 0.0, 4, 2)],
                    polydegree_drop: Some(false),
                },
            }
        }
        "pascoe_74" => built(
            build(pascoe())?,
            "polydegree (3,1) example with singularities at (1,-1) and (-1,-1)".into(),
            Expected {
                slice_det: Some(poly("-(z1 - 1)^2*(z1 + 1)^4", 1)),
                singularities: vec![point(&[0.0], PI, 2, 2), point(&[PI], PI, 4, 2)],
                ..Default::default()
            },
        ),
        _ => {
            let rest = name.strip_prefix("phi_d:").ok_or_else(unknown)?;
            let parts: Vec<&str> = rest.split(':').collect();
            let num = |s: &str| s.parse::<u32>().ok().filter(|v| *v >= 1);
            let (d, n) = match parts.as_slice() {
                [d] => (num(d).ok_or_else(unknown)?, None),
                [d, n] => (num(d).ok_or_else(unknown)?, Some(num(n).ok_or_else(unknown)?)),
                _ => return Err(unknown()),
            };
            if d < 2 {
                return Err(unknown());
            }
            let d = d as usize;
            let base = build(phi_d(d))?;
            let order = 2 * n.unwrap_or(1);
            let mut expected = Expected { singularities: vec![point(&vec![0.0; d - 1], 0.0, order, d)], ..Default::default() };
            if d == 2 {
                expected.slice_det = Some(poly("-2*(z1 - 1)^2", 1).pow(n.unwrap_or(1)));
            }
            match n {
                None => built(base, format!("phi_{d} = numerator / ({d} - z1 - ... - z{d})"), expected),
                Some(n) => {
                    let c = compose(&base, n).map_err(|source| RegistryError::Build { name: name.into(), source })?;
                    if (d, n) == (3, 2) {
                        expected.denominator = Some(p32());
                    }
                    expected.polydegree_drop = Some(false);
                    Example {
                        name: name.into(),
                        description: format!("composition power {n} of phi_{d}"),
                        rif: c.rif.clone(),
                        composition: Some(c),
                        expected,
                    }
                }
            }
        }
    })
}
