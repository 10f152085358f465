//! Constructors for the standard examples.

use crate::error::Result;
use crate::poly::{GaussianRational, MultiPoly};
use crate::rif::Rif;
use crate::stability::StabilityConfig;

/// Denominator `d - z1 - ... - zd` of `phi_d`.
pub fn phi_d_denominator(d: usize) -> MultiPoly {
    let mut p = MultiPoly::constant(d, GaussianRational::from_int(d as i64));
    for j in 0..d {
        p = &p - &MultiPoly::var(d, j);
    }
    p
}

/// `phi_d`, with its single singularity at `(1, ..., 1)`.
pub fn phi_d(d: usize) -> Result<Rif> {
    Rif::with_config(
        phi_d_denominator(d),
        GaussianRational::from_int(1),
        Some(vec![1; d]),
        &StabilityConfig::default(),
    )
}

/// `(2 z1 z2 - z1 - z2) / (2 - z1 - z2)` times `unit` (`1` or `-1`).
pub fn bidisk(unit: i64) -> Result<Rif> {
    Rif::new(phi_d_denominator(2), GaussianRational::from_int(unit))
}

/// Two-variable example with singularities at `(-1, -1)` and `(1, -1)`.
pub fn pascoe() -> Result<Rif> {
    let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 4), (&[0, 1], 1), (&[1, 1], -1), (&[2, 1], 3), (&[3, 1], 1)]);
    Rif::new(p, GaussianRational::from_int(1))
}

/// Denominator of `phi_3` composed with itself, as printed.
pub fn p32() -> MultiPoly {
    MultiPoly::from_int_terms(
        3,
        &[
            (&[0, 0, 0], 9),
            (&[1, 0, 0], -6),
            (&[0, 1, 0], -6),
            (&[0, 0, 1], -3),
            (&[2, 0, 0], 1),
            (&[0, 2, 0], 1),
            (&[1, 1, 0], 3),
            (&[1, 0, 1], 2),
            (&[0, 1, 1], 2),
            (&[1, 1, 1], -3),
        ],
    )
}

/// Exactly unimodular Gaussian rationals used for rotations and units.
pub fn unimodular_samples() -> Vec<GaussianRational> {
    let mut out = vec![GaussianRational::from_int(1), GaussianRational::i()];
    for (a, b, c) in [(3, 4, 5), (5, 12, 13), (8, 15, 17), (20, 21, 29)] {
        out.push(GaussianRational::from_parts(a, b, c));
        out.push(GaussianRational::from_parts(b, -a, c));
    }
    let negs: Vec<GaussianRational> = out.iter().map(|q| -q.clone()).collect();
    out.extend(negs);
    out
}

/// A random valid RIF of polydegree at most `(3, ..., 3, 1)`.
///
/// Half are strictly stable (a dominant constant term, so no torus zeros);
/// the rest are `phi_d` (or, for `d = 2`, a composition power of it) with
/// every variable rotated by a unimodular constant, which keeps the
/// singularity.
pub fn random_rif<R: rand::Rng>(rng: &mut R, d: usize) -> Result<Rif> {
    let units = unimodular_samples();
    let pick = |rng: &mut R| units[rng.gen_range(0..units.len())].clone();
    let unit = pick(rng);
    if rng.gen_bool(0.5) {
        let k = d - 1;
        let n: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let mut terms: Vec<(Vec<u32>, GaussianRational)> = Vec::new();
        let mut l1 = 0i64;
        for last in 0..2u32 {
            for _ in 0..rng.gen_range(1..=4) {
                let mut e: Vec<u32> = n.iter().map(|&nj| rng.gen_range(0..=nj)).collect();
                e.push(last);
                let (re, im) = (rng.gen_range(-3..=3i64), rng.gen_range(-3..=3i64));
                l1 += re.abs() + im.abs();
                terms.push((e, GaussianRational::from_parts(re, im, 1)));
            }
        }
        // Pin the degrees so the declared polydegree is attained; the random
        // coefficients are at most 3 in each part, so these never cancel.
        for j in 0..k {
            let mut e = vec![0; d];
            e[j] = n[j];
            terms.push((e, GaussianRational::from_int(4)));
            l1 += 4;
        }
        let mut e = vec![0; d];
        e[k] = 1;
        terms.push((e, GaussianRational::from_int(4)));
        l1 += 4;
        terms.push((vec![0; d], GaussianRational::from_int(l1 + rng.gen_range(1..=5))));
        let mut p = MultiPoly::zero(d);
        for (e, c) in terms {
            p = &p + &MultiPoly::monomial(d, e, c);
        }
        let mut poly_deg = n;
        poly_deg.push(1);
        return Rif::with_config(p, unit, Some(poly_deg), &StabilityConfig::default());
    }
    let rot: Vec<GaussianRational> = (0..d).map(|_| pick(rng)).collect();
    let base = phi_d(d)?;
    let rotated = |q: &MultiPoly| -> MultiPoly {
        MultiPoly::from_terms(
            d,
            q.terms().map(|(idx, c)| {
                let mut c = c.clone();
                for (j, &e) in idx.0.iter().enumerate() {
                    c = &c * &rot[j].pow(e);
                }
                (idx.0.clone(), c)
            }),
        )
    };
    let p = if d == 2 && rng.gen_bool(0.5) {
        crate::compose::compose(&base, rng.gen_range(2..=3))?.rif.p().clone()
    } else {
        base.p().clone()
    };
    let mut poly_deg = p.degrees();
    poly_deg[d - 1] = 1;
    Rif::with_config(rotated(&p), unit, Some(poly_deg), &StabilityConfig::default())
}
