//! Integrability of `d phi / d z_d` near torus singularities.
//!
//! Locally, `d phi / d z_d` is in `L^p` exactly when `V^(1-p)` is integrable
//! near the singular point of `V = |det|` on `T^{d-1}`. Integrals are split
//! into logarithmically spaced annuli; a divergent integral shows up as an
//! annulus scaling exponent `<= -1`, whatever its magnitude at fixed resolution.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RifError};
use crate::modulus::{ExactModulus, RationalUnit};
use crate::rif::Rif;
use crate::singular::{linear_fit, logspace, nearest_other, Order, SingularPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Radius of the angular ball around the singularity.
    pub eps: f64,
    /// Innermost annulus radius.
    pub r_min: f64,
    pub annuli: usize,
    /// Lower bound on the total number of samples.
    pub samples: usize,
    /// Fraction of annuli, innermost first, used for the scaling fit.
    pub tail_fraction: f64,
    pub p_lo: f64,
    pub p_hi: f64,
    pub bisect_iters: u32,
    pub target_halfwidth: f64,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            eps: 0.1,
            r_min: 1e-6,
            annuli: 24,
            samples: 10_000,
            tail_fraction: 0.5,
            p_lo: 1.0,
            p_hi: 4.0,
            bisect_iters: 12,
            target_halfwidth: 0.05,
            seed: 0x5eed,
        }
    }
}

/// Value of the criterion integral at one exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionIntegral {
    pub p: f64,
    pub value: f64,
    /// Radial density exponent `a` in `I(r) ~ r^(a+1)`; divergence iff `a <= -1`.
    pub tail_exponent: f64,
    pub tail_stderr: f64,
    pub annulus_radii: Vec<f64>,
    pub annulus_values: Vec<f64>,
}

impl CriterionIntegral {
    pub fn converges(&self) -> bool {
        self.tail_exponent > -1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffEstimate {
    pub value: f64,
    pub halfwidth: f64,
    pub iterations: u32,
    pub bracket: (f64, f64),
}

impl CutoffEstimate {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.halfwidth
    }
}

/// Samples of `ln(V / max V)` on a ball, cached so many exponents are cheap.
#[derive(Clone, Debug)]
pub struct BallSampler {
    k: usize,
    edges: Vec<f64>,
    /// Per annulus: `(quadrature weight, ln of the normalized V)`.
    cells: Vec<Vec<(f64, f64)>>,
    tail_fraction: f64,
}

impl BallSampler {
    /// Samples `f(offset)` on the ball of radius `cfg.eps` in `R^k`.
    /// A zero of `f` away from the center is reported as `NonFiniteIntegrand`.
    pub fn from_fn<F>(k: usize, cfg: &QuadratureConfig, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        if k == 0 || cfg.eps <= cfg.r_min || cfg.annuli < 2 {
            return Err(RifError::InvalidArgument("ball sampler needs k >= 1, eps > r_min and >= 2 annuli".into()));
        }
        let dirs = sphere_rule(k, cfg.seed);
        let nodes = (cfg.samples.div_ceil(cfg.annuli * dirs.len())).max(4);
        let gl = GaussLegendre::new(NonZeroUsize::new(nodes).unwrap());
        let gl: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
        let edges = logspace(cfg.r_min, cfg.eps, cfg.annuli + 1);

        let raw: Vec<Vec<(f64, f64)>> = (0..cfg.annuli)
            .into_par_iter()
            .map(|j| {
                let (ta, tb) = (edges[j].ln(), edges[j + 1].ln());
                let half = 0.5 * (tb - ta);
                let mut cell = Vec::with_capacity(gl.len() * dirs.len());
                for &(x, w) in &gl {
                    let rho = (ta + half * (x + 1.0)).exp();
                    // d(offset) = rho^(k-1) d rho dS = rho^k dt dS
                    let radial = w * half * rho.powi(k as i32);
                    for (u, wu) in &dirs {
                        let off: Vec<f64> = u.iter().map(|c| c * rho).collect();
                        cell.push((radial * wu, f(&off)));
                    }
                }
                cell
            })
            .collect();

        let mut vmax: f64 = 0.0;
        for (j, cell) in raw.iter().enumerate() {
            for &(_, v) in cell {
                if !v.is_finite() || v <= 0.0 {
                    return Err(RifError::NonFiniteIntegrand(edges[j]));
                }
                vmax = vmax.max(v);
            }
        }
        let lmax = vmax.ln();
        let cells = raw.into_iter().map(|c| c.into_iter().map(|(w, v)| (w, v.ln() - lmax)).collect()).collect();
        Ok(BallSampler { k, edges, cells, tail_fraction: cfg.tail_fraction })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn sample_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// `integral of (V / max V)^(1-p)` over the ball minus the innermost disk.
    pub fn integral(&self, p: f64) -> CriterionIntegral {
        let vals: Vec<f64> =
            self.cells.iter().map(|c| c.iter().map(|&(w, lv)| w * ((1.0 - p) * lv).exp()).sum()).collect();
        let mids: Vec<f64> = self.edges.windows(2).map(|e| (e[0] * e[1]).sqrt()).collect();
        let n_tail = ((vals.len() as f64 * self.tail_fraction).round() as usize).clamp(3, vals.len());
        let x: Vec<f64> = mids[..n_tail].iter().map(|r| r.ln()).collect();
        let y: Vec<f64> = vals[..n_tail].iter().map(|v| v.ln()).collect();
        let (slope, _, res) = linear_fit(&x, &y);
        let mx = x.iter().sum::<f64>() / x.len() as f64;
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        CriterionIntegral {
            p,
            value: vals.iter().sum(),
            tail_exponent: slope - 1.0,
            tail_stderr: res / sxx.sqrt(),
            annulus_radii: mids,
            annulus_values: vals,
        }
    }

    /// Bisection for the largest exponent with a convergent tail.
    pub fn estimate_cutoff(&self, cfg: &QuadratureConfig) -> Result<CutoffEstimate> {
        let (mut lo, mut hi) = (cfg.p_lo, cfg.p_hi);
        // The cutoff must lie inside the bracket.
        if self.integral(hi).converges() || !self.integral(lo).converges() {
            return Err(RifError::BudgetExceeded { target: cfg.target_halfwidth, achieved: f64::INFINITY });
        }
        for _ in 0..cfg.bisect_iters {
            let mid = 0.5 * (lo + hi);
            if self.integral(mid).converges() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let value = 0.5 * (lo + hi);
        // Translate the fit uncertainty of the exponent into one on the cutoff.
        let dp = 0.25_f64.min(value - cfg.p_lo).max(1e-3);
        let a = self.integral(value - dp);
        let b = self.integral(value + dp);
        let sensitivity = ((a.tail_exponent - b.tail_exponent) / (2.0 * dp)).abs().max(1e-9);
        let stderr = self.integral(value).tail_stderr;
        let halfwidth = 0.5 * (hi - lo) + 2.0 * stderr / sensitivity;
        if halfwidth > cfg.target_halfwidth {
            return Err(RifError::BudgetExceeded { target: cfg.target_halfwidth, achieved: halfwidth });
        }
        Ok(CutoffEstimate { value, halfwidth, iterations: cfg.bisect_iters, bracket: (lo, hi) })
    }
}

/// Weighted directions on the unit sphere `S^(k-1)`, weights summing to its area.
fn sphere_rule(k: usize, seed: u64) -> Vec<(Vec<f64>, f64)> {
    match k {
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => {
            let m = 64;
            (0..m)
                .map(|i| {
                    let t = (i as f64 + 0.5) * TAU / m as f64;
                    (vec![t.cos(), t.sin()], TAU / m as f64)
                })
                .collect()
        }
        3 => {
            // Fibonacci lattice
            let m = 256;
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / m as f64;
                    let s = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    (vec![s * t.cos(), s * t.sin(), z], 4.0 * PI / m as f64)
                })
                .collect()
        }
        _ => {
            let m = 512;
            let area = 2.0 * PI.powf(k as f64 / 2.0) / gamma_half(k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..m)
                .map(|_| loop {
                    let u: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if (0.1..=1.0).contains(&n) {
                        break (u.iter().map(|x| x / n).collect(), area / m as f64);
                    }
                })
                .collect()
        }
    }
}

/// `Gamma(k / 2)`.
fn gamma_half(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        (1..k / 2).map(|i| i as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < k as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Ball sampler for `V = |det|` around a singularity.
pub fn sampler_for(r: &Rif, s: &SingularPoint, others: &[SingularPoint], cfg: &QuadratureConfig) -> Result<BallSampler> {
    for o in others {
        if o.zhat != s.zhat && o.zhat.angular_distance(&s.zhat) <= cfg.eps {
            return Err(RifError::OverlapError { eps: cfg.eps });
        }
    }
    let det = ExactModulus::new(&r.slice_det().poly);
    let base: Vec<RationalUnit> = s.zhat.coords.iter().map(RationalUnit::from_coord).collect();
    BallSampler::from_fn(s.zhat.dim(), cfg, |off| {
        let z: Vec<RationalUnit> = base.iter().zip(off).map(|(b, &t)| b.mul(&RationalUnit::near_angle(t))).collect();
        det.abs_at(&z)
    })
}

/// `integral over B_eps of V^(1-p)` around `s`, with its annulus scaling exponent.
pub fn criterion_integral(r: &Rif, s: &SingularPoint, p: f64, eps: f64) -> Result<CriterionIntegral> {
    if p < 1.0 {
        return Err(RifError::InvalidArgument(format!("exponent {p} < 1")));
    }
    let others = crate::singular::find_singularities(r)?;
    let cfg = QuadratureConfig { eps, ..Default::default() };
    Ok(sampler_for(r, s, &others, &cfg)?.integral(p))
}

pub fn estimate_cutoff(r: &Rif, s: &SingularPoint) -> Result<CutoffEstimate> {
    let others = crate::singular::find_singularities(r)?;
    sampler_for(r, s, &others, &QuadratureConfig::default())?.estimate_cutoff(&QuadratureConfig::default())
}

/// `1 + (d-1)/order`, assuming isotropic vanishing.
pub fn cutoff_from_order(order: f64, d: usize) -> f64 {
    1.0 + (d as f64 - 1.0) / order
}

pub fn cutoff_from_order_exact(order: u32, d: usize) -> Rational64 {
    Rational64::new(order as i64 + d as i64 - 1, order as i64)
}

/// Cutoff boundary of the model integrand `|theta|^(2m (1-p))` on a ball in
/// `R^(d-1)`, estimated by the same machinery (analytic value `1 + (d-1)/(2m)`).
pub fn model_cutoff(d: usize, m: u32, cfg: &QuadratureConfig) -> Result<CutoffEstimate> {
    let s = BallSampler::from_fn(d - 1, cfg, |x| x.iter().map(|t| t * t).sum::<f64>().powi(m as i32))?;
    s.estimate_cutoff(cfg)
}

/// Labelled extremes of the local cutoffs; no single global index is implied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub min: f64,
    pub max: f64,
}

pub fn aggregate(locals: &[f64]) -> Result<Aggregate> {
    if locals.is_empty() {
        return Err(RifError::InvalidArgument("aggregate of an empty list".into()));
    }
    Ok(Aggregate {
        min: locals.iter().cloned().fold(f64::INFINITY, f64::min),
        max: locals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Clone, Debug)]
pub struct LocalCutoff {
    pub point: SingularPoint,
    pub theoretical: Option<Rational64>,
    pub numeric: Option<CutoffEstimate>,
    /// Why a numeric estimate is missing, if it was requested.
    pub numeric_error: Option<String>,
}

impl LocalCutoff {
    pub fn best(&self) -> Option<f64> {
        self.theoretical.map(|q| *q.numer() as f64 / *q.denom() as f64).or(self.numeric.as_ref().map(|e| e.value))
    }
}

#[derive(Clone, Debug)]
pub struct IntegrabilityReport {
    pub per_singularity: Vec<LocalCutoff>,
    pub aggregate: Option<Aggregate>,
    pub method: QuadratureConfig,
}

/// Closed-form cutoffs from the orders, plus numeric estimates on request.
pub fn analyze(r: &Rif, points: &[SingularPoint], numeric: bool, cfg: &QuadratureConfig) -> IntegrabilityReport {
    let d = r.dim();
    let per_singularity: Vec<LocalCutoff> = points
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let theoretical = match &s.order {
                Order::Exact(k) if *k > 0 => Some(cutoff_from_order_exact(*k, d)),
                Order::Numeric(o) if o.isotropic && o.rounded > 0 => Some(cutoff_from_order_exact(o.rounded, d)),
                _ => None,
            };
            let (numeric, numeric_error) = if numeric {
                let local = QuadratureConfig { eps: cfg.eps.min(0.5 * nearest_other(points, i)), ..cfg.clone() };
                match sampler_for(r, s, points, &local).and_then(|b| b.estimate_cutoff(&local)) {
                    Ok(mut e) => {
                        if !s.order.is_isotropic() {
                            e.halfwidth *= 2.0;
                        }
                        (Some(e), None)
                    }
                    Err(err) => (None, Some(err.to_string())),
                }
            } else {
                (None, None)
            };
            LocalCutoff { point: s.clone(), theoretical, numeric, numeric_error }
        })
        .collect();
    let locals: Vec<f64> = per_singularity.iter().filter_map(LocalCutoff::best).collect();
    IntegrabilityReport { aggregate: aggregate(&locals).ok(), per_singularity, method: cfg.clone() }
}

/// `integral over T^d of |d phi / d z_d|^p` (normalized measure): midpoint
/// grid in the first `d-1` angles, adaptive Gauss-Legendre in the last one.
pub fn direct_lp_norm(r: &Rif, p: f64, grid: usize) -> Result<f64> {
    if p < 1.0 || grid == 0 {
        return Err(RifError::InvalidArgument("direct L^p norm needs p >= 1 and a nonempty grid".into()));
    }
    let k = r.dim() - 1;
    let dec = r.decompose();
    let det = r.slice_det().poly;
    let total = grid.pow(k as u32);
    let h = TAU / grid as f64;
    let g10 = rule(10);
    let g20 = rule(20);
    let parts: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let theta: Vec<f64> = (0..k)
                .map(|_| {
                    let i = idx % grid;
                    idx /= grid;
                    (i as f64 + 0.5) * h
                })
                .collect();
            let z: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
            let a = dec.p1.eval(&z).unwrap();
            let b = dec.p2.eval(&z).unwrap();
            let dv = det.eval(&z).unwrap().norm().powf(p);
            // The slice denominator peaks where e^{it} = -a/b; start the period there.
            let start = if b.norm() > 0.0 { (-a / b).arg() } else { 0.0 };
            let f = |t: f64| (a + b * Complex64::from_polar(1.0, t)).norm_sqr().powf(-p);
            dv * adaptive(&f, start, start + TAU, &g10, &g20, 0) / TAU
        })
        .collect();
    Ok(parts.iter().sum::<f64>() / total as f64)
}

fn rule(n: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(n).unwrap()).as_node_weight_pairs().to_vec()
}

fn apply(rule: &[(f64, f64)], f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * rule.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>()
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, g10: &[(f64, f64)], g20: &[(f64, f64)], depth: u32) -> f64 {
    let coarse = apply(g10, f, a, b);
    let fine = apply(g20, f, a, b);
    if depth >= 48 || (fine - coarse).abs() <= 1e-10 * fine.abs() + 1e-300 {
        return fine;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, g10, g20, depth + 1) + adaptive(f, m, b, g10, g20, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::singular::find_singularities;

    #[test]
    fn exact_cutoffs_from_orders() {
        assert_eq!(cutoff_from_order_exact(2, 2), Rational64::new(3, 2));
        assert_eq!(cutoff_from_order_exact(4, 2), Rational64::new(5, 4));
        assert_eq!(cutoff_from_order_exact(4, 3), Rational64::new(3, 2));
        assert_eq!(cutoff_from_order(4.0, 3), 1.5);
    }

    #[test]
    fn model_theta_squared_matches_analytic_integral() {
        // 2 * integral_0^0.1 theta^(-1/2) = 4 sqrt(0.1), minus the piece below r_min.
        let cfg = QuadratureConfig::default();
        let s = BallSampler::from_fn(1, &cfg, |x| x[0] * x[0]).unwrap();
        let got = s.integral(1.25);
        // V is normalized by its maximum 0.01 on the ball.
        let want = 4.0 * (0.1f64.sqrt() - 1e-3) * 0.01f64.powf(0.25);
        assert!(((got.value - want) / want).abs() < 0.01, "{} vs {want}", got.value);
        assert!(got.converges());
        assert!((got.tail_exponent + 0.5).abs() < 1e-6);
    }

    #[test]
    fn integral_is_monotone_in_p() {
        let s = BallSampler::from_fn(2, &QuadratureConfig::default(), |x| x[0] * x[0] + 2.0 * x[1] * x[1]).unwrap();
        let vals: Vec<f64> = [1.0, 1.3, 1.7, 2.2].iter().map(|&p| s.integral(p).value).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn plus_sign_diverges_at_1_6() {
        let r = examples::bidisk(1).unwrap();
        let s = &find_singularities(&r).unwrap()[0];
        let c = criterion_integral(&r, s, 1.6, 0.1).unwrap();
        assert!(c.tail_exponent <= -1.0, "{c:?}");
        let c = criterion_integral(&r, s, 1.4, 0.1).unwrap();
        assert!(c.converges());
    }

    #[test]
    fn plus_sign_cutoff_estimate() {
        let r = examples::bidisk(1).unwrap();
        let s = &find_singularities(&r).unwrap()[0];
        let e = estimate_cutoff(&r, s).unwrap();
        assert!(e.contains(1.5) && e.halfwidth <= 0.05, "{e:?}");
    }

    #[test]
    fn overlap_is_rejected() {
        let r = examples::pascoe().unwrap();
        let pts = find_singularities(&r).unwrap();
        let cfg = QuadratureConfig { eps: 4.0, ..Default::default() };
        assert_eq!(sampler_for(&r, &pts[0], &pts, &cfg).unwrap_err(), RifError::OverlapError { eps: 4.0 });
    }

    #[test]
    fn aggregate_labels_both_extremes() {
        assert_eq!(aggregate(&[1.5, 1.25]).unwrap(), Aggregate { min: 1.25, max: 1.5 });
        assert_eq!(aggregate(&[2.0]).unwrap(), Aggregate { min: 2.0, max: 2.0 });
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn lp_norm_at_one_is_one() {
        // The slice map is a disk automorphism, so the inner integral is 1 / |det|.
        let r = examples::bidisk(1).unwrap();
        let v = direct_lp_norm(&r, 1.0, 32).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
    }
}
