//! Sampling-based stability check for polynomials of degree at most one in
//! the last variable.
//!
//! Writing `p = p1 + z_d p2`, the only `z_d`-root over `zhat` is
//! `-p1(zhat)/p2(zhat)`. The polynomial is zero-free on the open polydisk when
//! `p1` is zero-free on the smaller polydisk and `|p1| >= |p2|` there; by the
//! maximum principle the second condition is checked on the torus.

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RifError};
use crate::poly::{polynomial_roots, GaussianRational, MultiPoly};
use crate::torus;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    /// Torus grid points per angle.
    pub grid: usize,
    /// Refinement factor for the local grids around the smallest margins.
    pub refine: usize,
    /// Number of smallest grid margins that get a local refinement.
    pub refine_candidates: usize,
    /// Absolute slack on `|p1|^2 - |p2|^2`, relative to `max(1, ||p||_1^2)`.
    pub margin_tol: f64,
    /// Interior sample budget (spread over the smaller polydisk).
    pub interior_samples: usize,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self { grid: 64, refine: 4, refine_candidates: 8, margin_tol: 1e-12, interior_samples: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    /// Smallest sampled value of `|p1|^2 - |p2|^2` on the torus.
    pub min_margin: f64,
    /// Angles where it was attained.
    pub argmin: Vec<f64>,
    pub torus_points: usize,
    pub interior_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// A point of the open polydisk (within sampling accuracy) where `p` vanishes.
    pub point: Vec<(f64, f64)>,
    pub reason: String,
}

impl Counterexample {
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .point
            .iter()
            .map(|&(re, im)| if im.abs() < 1e-12 { format!("{re}") } else { format!("{re}{im:+}i") })
            .collect();
        format!("({})", parts.join(", "))
    }

    /// The point as simple Gaussian rationals, when rounding to them gives
    /// an exact zero of `p`.
    pub fn exact_point(&self, p: &MultiPoly) -> Option<Vec<GaussianRational>> {
        let simple = |x: f64| -> Option<BigRational> {
            if x.abs() < 1e-12 {
                return Some(BigRational::zero());
            }
            let q = Rational64::approximate_float(x)?;
            ((x - *q.numer() as f64 / *q.denom() as f64).abs() < 1e-9 && *q.denom() <= 1_000_000)
                .then(|| BigRational::new((*q.numer()).into(), (*q.denom()).into()))
        };
        let z: Vec<GaussianRational> = self
            .point
            .iter()
            .map(|&(re, im)| Some(GaussianRational::new(simple(re)?, simple(im)?)))
            .collect::<Option<_>>()?;
        p.eval(&z).ok()?.is_zero().then_some(z)
    }

    /// Exact coordinates when available, otherwise the float ones.
    pub fn describe_for(&self, p: &MultiPoly) -> String {
        match self.exact_point(p) {
            Some(z) => format!("({})", z.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")),
            None => self.describe(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StabilityOutcome {
    Certificate(StabilityCertificate),
    Counterexample(Counterexample),
}

impl StabilityOutcome {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityOutcome::Certificate(_))
    }
}

fn pairs(z: &[Complex64]) -> Vec<(f64, f64)> {
    z.iter().map(|c| (c.re, c.im)).collect()
}

/// Points of the closed unit polydisk in `k` dimensions: products of a few
/// radii and angles, sized to about `budget` points.
fn disk_samples(k: usize, budget: usize) -> Vec<Vec<Complex64>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let radii = [0.0, 0.3, 0.6, 0.85, 0.97, 0.999];
    let per_dim = (budget as f64).powf(1.0 / k as f64).floor().max(radii.len() as f64) as usize;
    let n_ang = (per_dim / radii.len()).max(1);
    let mut one_dim: Vec<Complex64> = Vec::new();
    for (ri, &r) in radii.iter().enumerate() {
        if r == 0.0 {
            one_dim.push(Complex64::new(0.0, 0.0));
            continue;
        }
        for a in 0..n_ang {
            let t = std::f64::consts::TAU * (a as f64 + 0.37 * ri as f64) / n_ang as f64;
            one_dim.push(Complex64::from_polar(r, t));
        }
    }
    let m = one_dim.len();
    (0..m.pow(k as u32))
        .map(|mut idx| {
            (0..k)
                .map(|_| {
                    let i = idx % m;
                    idx /= m;
                    one_dim[i]
                })
                .collect()
        })
        .collect()
}

/// Certificate (sampled) or counterexample for zero-freeness on the open
/// polydisk. Errors only when the last-variable degree exceeds one.
pub fn check_stability(p: &MultiPoly, cfg: &StabilityConfig) -> Result<StabilityOutcome> {
    let d = p.nvars();
    if d == 0 {
        return Err(RifError::TooFewVariables(0));
    }
    let last = d - 1;
    let deg_last = p.degree_in(last);
    if deg_last > 1 {
        return Err(RifError::NotDegreeOneInLast(deg_last));
    }
    let mut parts = p.coefficients_in(last);
    parts.resize(2, MultiPoly::zero(d - 1));
    let (p1, p2) = (&parts[0], &parts[1]);
    let k = d - 1;
    let scale = p.coeff_l1().max(1.0);
    let tol = cfg.margin_tol * scale * scale;

    if p.is_zero() {
        return Ok(StabilityOutcome::Counterexample(Counterexample {
            point: vec![(0.0, 0.0); d],
            reason: "zero polynomial".into(),
        }));
    }

    // 1. zeros of p1 inside the polydisk give zeros of p at z_d = 0.
    if let Some(cx) = p1_interior_zero(p1, k, cfg) {
        return Ok(StabilityOutcome::Counterexample(cx));
    }

    // 2. |p1|^2 - |p2|^2 on the torus.
    let margin = |theta: &[f64]| -> f64 {
        let z: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let a = p1.eval(&z).expect("arity checked");
        let b = p2.eval(&z).expect("arity checked");
        a.norm_sqr() - b.norm_sqr()
    };
    let (min_margin, argmin, torus_points) = if k == 0 {
        (margin(&[]), Vec::new(), 1)
    } else {
        let g = cfg.grid.max(4);
        let vals = torus::grid_values(k, g, margin);
        let mut best = (f64::INFINITY, Vec::new());
        let mut count = vals.len();
        let h = std::f64::consts::TAU / g as f64;
        for idx in torus::lowest_indices(&vals, cfg.refine_candidates) {
            let c = torus::index_to_angles(idx, k, g);
            let local = torus::local_grid(&c, h / cfg.refine.max(1) as f64, cfg.refine.max(1));
            count += local.len();
            for t in local {
                let m = margin(&t);
                if m < best.0 {
                    best = (m, t);
                }
            }
        }
        (best.0, best.1, count)
    };
    if min_margin < -tol {
        let zhat: Vec<Complex64> = argmin.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        // Pull the boundary witness slightly inside; the z_d root moves continuously.
        for delta in [1e-3, 1e-5, 1e-7] {
            let inner: Vec<Complex64> = zhat.iter().map(|z| z * (1.0 - delta)).collect();
            let a = p1.eval(&inner).expect("arity");
            let b = p2.eval(&inner).expect("arity");
            if b.norm() > 0.0 {
                let w = -a / b;
                if w.norm() < 1.0 {
                    let mut pt = inner.clone();
                    pt.push(w);
                    return Ok(StabilityOutcome::Counterexample(Counterexample {
                        point: pairs(&pt),
                        reason: format!("|p2| > |p1| on the torus (margin {min_margin:.3e})"),
                    }));
                }
            }
        }
        let mut pt = zhat.clone();
        let a = p1.eval(&zhat).expect("arity");
        let b = p2.eval(&zhat).expect("arity");
        pt.push(-a / b);
        return Ok(StabilityOutcome::Counterexample(Counterexample {
            point: pairs(&pt),
            reason: format!("|p2| > |p1| on the torus (margin {min_margin:.3e})"),
        }));
    }

    // 3. direct interior sampling of the z_d root.
    let samples = disk_samples(k, cfg.interior_samples);
    let interior_points = samples.len();
    let bad = samples.par_iter().find_first(|zhat| {
        let a = p1.eval(zhat).expect("arity");
        let b = p2.eval(zhat).expect("arity");
        b.norm() > 0.0 && (a / b).norm() < 1.0 - 1e-9
    });
    if let Some(zhat) = bad {
        let a = p1.eval(zhat).expect("arity");
        let b = p2.eval(zhat).expect("arity");
        let mut pt = zhat.clone();
        pt.push(-a / b);
        return Ok(StabilityOutcome::Counterexample(Counterexample {
            point: pairs(&pt),
            reason: "interior zero".into(),
        }));
    }

    Ok(StabilityOutcome::Certificate(StabilityCertificate {
        min_margin,
        argmin,
        torus_points,
        interior_points,
    }))
}

/// Searches for zeros of `p1` (in `k` variables) inside the open polydisk by
/// solving in the last of its variables over sampled values of the others.
fn p1_interior_zero(p1: &MultiPoly, k: usize, cfg: &StabilityConfig) -> Option<Counterexample> {
    let zero_with_zd = |mut pt: Vec<Complex64>, reason: &str| {
        pt.push(Complex64::new(0.0, 0.0));
        Some(Counterexample { point: pairs(&pt), reason: reason.into() })
    };
    if k == 0 {
        return if p1.is_zero() { zero_with_zd(Vec::new(), "p vanishes at z_d = 0") } else { None };
    }
    let inner = k - 1;
    let coeff_polys = p1.coefficients_in(inner);
    let samples = disk_samples(inner, cfg.interior_samples / 8);
    let scale = p1.coeff_l1().max(1e-300);
    samples.iter().find_map(|w| {
        let coeffs: Vec<Complex64> = coeff_polys.iter().map(|c| c.eval(w).expect("arity")).collect();
        let top = coeffs.iter().rposition(|c| c.norm() > 1e-14 * scale);
        match top {
            None => zero_with_zd(
                w.iter().copied().chain([Complex64::new(0.0, 0.0)]).collect(),
                "p1 vanishes identically on a slice",
            ),
            Some(0) => None,
            Some(n) => polynomial_roots(&coeffs[..=n]).into_iter().find(|r| r.norm() < 1.0 - 1e-9).and_then(|r| {
                let mut pt = w.clone();
                pt.push(r);
                zero_with_zd(pt, "p1 has a zero inside the polydisk")
            }),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> StabilityConfig {
        StabilityConfig::default()
    }

    #[test]
    fn bidisk_denominator_is_certified_with_zero_margin() {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 2), (&[1, 0], -1), (&[0, 1], -1)]);
        match check_stability(&p, &cfg()).unwrap() {
            StabilityOutcome::Certificate(c) => {
                // min over the torus of |2 − ζ|² − 1 is 0 at ζ = 1 (a grid node)
                assert!(c.min_margin.abs() < 1e-12, "{}", c.min_margin);
                assert!(c.argmin[0].abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn direct_minimization_oracle_agrees() {
        // Brute-force oracle: fine 1-D scan of |2 − e^{iθ}|² − 1.
        let oracle = (0..100_000)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 100_000.0;
                (Complex64::new(2.0, 0.0) - Complex64::from_polar(1.0, t)).norm_sqr() - 1.0
            })
            .fold(f64::INFINITY, f64::min);
        assert!(oracle.abs() < 1e-12);
    }

    #[test]
    fn unstable_univariate_factor_is_caught() {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 1), (&[1, 0], -2)]);
        match check_stability(&p, &cfg()).unwrap() {
            StabilityOutcome::Counterexample(c) => {
                assert!((c.point[0].0 - 0.5).abs() < 1e-12 && c.point[0].1.abs() < 1e-12);
                assert_eq!(c.describe(), "(0.5, 0)");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn p32_is_certified() {
        let p = MultiPoly::from_int_terms(
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
        );
        assert!(check_stability(&p, &cfg()).unwrap().is_stable());
    }

    #[test]
    fn reflected_polynomial_is_not_stable() {
        // 2 z1 z2 − z1 − z2 vanishes at the origin.
        let p = MultiPoly::from_int_terms(2, &[(&[1, 1], 2), (&[1, 0], -1), (&[0, 1], -1)]);
        assert!(!check_stability(&p, &cfg()).unwrap().is_stable());
        // 1 − 2 z2 vanishes at z2 = 1/2.
        let q = MultiPoly::from_int_terms(2, &[(&[0, 0], 1), (&[0, 1], -2)]);
        assert!(!check_stability(&q, &cfg()).unwrap().is_stable());
    }

    #[test]
    fn high_last_degree_is_rejected() {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 4), (&[0, 2], 1)]);
        assert!(matches!(check_stability(&p, &cfg()), Err(RifError::NotDegreeOneInLast(2))));
    }
}
