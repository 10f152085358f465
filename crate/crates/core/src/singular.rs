//! Torus singularities and their vanishing orders.
//!
//! Two variables: the unit-circle roots of the slice determinant, with exact
//! multiplicities. Three or more: zeros of `V = |det|` on `T^{d-1}` located on
//! a grid, refined by Newton's method, snapped to exact axis points when
//! possible, and given an order by log-log regression along random rays.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compose::compose;
use crate::error::{Result, RifError};
use crate::modulus::{ExactModulus, RationalUnit};
use crate::poly::{angle_diff, roots_on_unit_circle, wrap_angle, GaussianRational, UnimodularPoint, UnitCoord};
use crate::rif::Rif;
use crate::torus;

/// Tolerance on `|eta| = 1` and on the agreement of the two routes to `eta`.
pub const ETA_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularConfig {
    /// Grid points per angle for `d >= 3`.
    pub grid: usize,
    /// Rays per order estimate; at least `2(d-1)` are always used.
    pub rays: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub radii: usize,
    pub cluster_tol: f64,
    pub seed: u64,
}

impl Default for SingularConfig {
    fn default() -> Self {
        SingularConfig { grid: 128, rays: 8, r_min: 1e-5, r_max: 1e-2, radii: 16, cluster_tol: 1e-6, seed: 0x5eed }
    }
}

/// Vanishing order estimated from ray regressions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericOrder {
    pub slope: f64,
    pub rounded: u32,
    /// Largest RMS residual of the per-ray fits.
    pub residual: f64,
    /// `max - min` of the per-ray slopes.
    pub spread: f64,
    pub per_ray: Vec<f64>,
    pub interval: (f64, f64),
    pub isotropic: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Order {
    Exact(u32),
    Numeric(NumericOrder),
}

impl Order {
    pub fn value(&self) -> f64 {
        match self {
            Order::Exact(k) => *k as f64,
            Order::Numeric(n) => n.slope,
        }
    }

    /// The integer order: exact, or the rounded estimate.
    pub fn rounded(&self) -> u32 {
        match self {
            Order::Exact(k) => *k,
            Order::Numeric(n) => n.rounded,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Order::Exact(_))
    }

    /// Whether a closed-form cutoff applies (exact, or isotropic numeric).
    pub fn is_isotropic(&self) -> bool {
        match self {
            Order::Exact(_) => true,
            Order::Numeric(n) => n.isotropic,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub zhat: UnimodularPoint,
    pub eta: UnitCoord,
    pub order: Order,
    /// Set when the order contradicts the expected even contact order.
    pub anomaly: Option<String>,
}

impl SingularPoint {
    pub fn kind(&self) -> &'static str {
        if self.order.is_exact() {
            "exact"
        } else {
            "numeric"
        }
    }

    /// All `d` coordinates as complex numbers.
    pub fn point(&self) -> Vec<Complex64> {
        let mut z = self.zhat.to_c64();
        z.push(self.eta.to_c64());
        z
    }
}

#[derive(Clone, Debug, Default)]
pub struct SingularAnalysis {
    pub points: Vec<SingularPoint>,
    pub warnings: Vec<String>,
}

impl SingularAnalysis {
    pub fn anomalies(&self) -> impl Iterator<Item = &str> {
        self.points.iter().filter_map(|p| p.anomaly.as_deref())
    }
}

/// V sampled along one ray out of a singularity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayProfile {
    pub direction: Vec<f64>,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn find_singularities(r: &Rif) -> Result<Vec<SingularPoint>> {
    Ok(find_singularities_with(r, &SingularConfig::default())?.points)
}

pub fn find_singularities_with(r: &Rif, cfg: &SingularConfig) -> Result<SingularAnalysis> {
    if r.dim() == 2 {
        two_variable(r)
    } else {
        several_variable(r, cfg)
    }
}

fn two_variable(r: &Rif) -> Result<SingularAnalysis> {
    let det = r.slice_det().poly;
    let roots = roots_on_unit_circle(&det)?;
    let mut out = SingularAnalysis { points: Vec::new(), warnings: roots.warnings };
    for root in roots.roots {
        let zhat = UnimodularPoint { coords: vec![root.root] };
        let eta = pair_eta(r, &zhat)?;
        let order = root.multiplicity;
        let anomaly = (order % 2 == 1).then(|| format!("odd contact order {order} at {zhat}"));
        out.points.push(SingularPoint { zhat, eta, order: Order::Exact(order), anomaly });
    }
    Ok(out)
}

/// The last coordinate of the singularity over `zhat`: the root of the
/// degree-one slice of `p`, cross-checked against the root of the slice of
/// `ptilde`.
fn pair_eta(r: &Rif, zhat: &UnimodularPoint) -> Result<UnitCoord> {
    let dec = r.decompose();
    if let Some(z) = zhat.to_exact() {
        let pt1 = dec.pt1.eval(&z)?;
        if pt1.is_zero() {
            return Err(RifError::VerticalLine(zhat.to_string()));
        }
        let from_tilde = -(&dec.pt2.eval(&z)? / &pt1);
        let p2 = dec.p2.eval(&z)?;
        let eta = if p2.is_zero() { from_tilde.clone() } else { -(&dec.p1.eval(&z)? / &p2) };
        if !eta.is_unimodular() {
            return Err(RifError::NonUnimodularEta { modulus: eta.to_c64().norm(), at: zhat.to_string() });
        }
        if eta != from_tilde {
            return Err(inconsistent(eta.to_c64(), from_tilde.to_c64(), zhat));
        }
        return Ok(UnitCoord::Exact(eta));
    }
    let z = zhat.to_c64();
    let pt1 = dec.pt1.eval(&z)?;
    if pt1.norm() == 0.0 {
        return Err(RifError::VerticalLine(zhat.to_string()));
    }
    let from_tilde = -dec.pt2.eval(&z)? / pt1;
    let p2 = dec.p2.eval(&z)?;
    let eta = if p2.norm() <= 1e-14 * dec.p1.coeff_l1() { from_tilde } else { -dec.p1.eval(&z)? / p2 };
    if (eta.norm() - 1.0).abs() > ETA_TOL {
        return Err(RifError::NonUnimodularEta { modulus: eta.norm(), at: zhat.to_string() });
    }
    if (eta - from_tilde).norm() > ETA_TOL {
        return Err(inconsistent(eta, from_tilde, zhat));
    }
    Ok(UnitCoord::Angle(eta.arg()))
}

fn inconsistent(a: Complex64, b: Complex64, zhat: &UnimodularPoint) -> RifError {
    RifError::NonUnimodularEta {
        modulus: b.norm(),
        at: format!("{zhat} (denominator and numerator routes differ by {:.2e})", (a - b).norm()),
    }
}

fn several_variable(r: &Rif, cfg: &SingularConfig) -> Result<SingularAnalysis> {
    let k = r.dim() - 1;
    let sd = r.slice_det();
    let v = &sd.vpoly;
    let g = cfg.grid.max(8);
    let values = torus::grid_values(k, g, |t| v.eval_angles(t).re);
    let vmax = values.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let zero_tol = 1e-9 * vmax;

    let mut minima = torus::local_minima(&values, k, g);
    minima.retain(|&i| values[i] <= 1e-3 * vmax);
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    minima.truncate(256);

    let refined: Vec<(Vec<f64>, f64)> = minima
        .par_iter()
        .map(|&i| {
            let th = newton_minimize(v, torus::index_to_angles(i, k, g));
            let val = v.eval_angles(&th).re;
            (th, val)
        })
        .filter(|(_, val)| *val <= zero_tol)
        .collect();

    let exact_det = ExactModulus::new(&sd.poly);
    let mut pts: Vec<(UnimodularPoint, f64)> = refined
        .into_iter()
        .map(|(th, val)| match snap(&th, &exact_det) {
            Some(p) => (p, 0.0),
            None => (UnimodularPoint::from_angles(&th.iter().map(|&t| wrap_angle(t)).collect::<Vec<_>>()), val),
        })
        .collect();
    pts.sort_by(|a, b| a.1.total_cmp(&b.1).then(lex(&a.0.angles(), &b.0.angles())));

    // Clusters keep their lowest-V representative. Unsnapped zeros of high
    // order are only located to about eps^(1/order), so points also merge when
    // V stays at zero level on the segment between them.
    let mut reps: Vec<(UnimodularPoint, f64)> = Vec::new();
    for (p, val) in pts {
        let merged = reps.iter().any(|(q, _)| {
            let dist = q.angular_distance(&p);
            dist <= cfg.cluster_tol || (dist <= 1e-2 && v.eval_angles(&midpoint(&q.angles(), &p.angles())).re <= zero_tol)
        });
        if !merged {
            reps.push((p, val));
        }
    }
    if reps.len() > 64 {
        return Err(RifError::InfiniteSingularSetSuspected(format!(
            "{} separate zeros of V, first at {}",
            reps.len(),
            reps[0].0
        )));
    }

    let mut out = SingularAnalysis::default();
    for (zhat, _) in reps {
        let eta = pair_eta_several(r, &zhat)?;
        let profiles = ray_profiles(r, &zhat, cfg);
        let order = estimate_order(&profiles, &zhat)?;
        if !zhat.coords.iter().all(UnitCoord::is_exact) {
            out.warnings.push(format!("singularity near {zhat} located numerically only"));
        }
        let anomaly = (!order.isotropic).then(|| format!("anisotropic vanishing at {zhat}: slopes {:?}", order.per_ray));
        out.points.push(SingularPoint { zhat, eta, order: Order::Numeric(order), anomaly });
    }
    out.points.sort_by(|a, b| lex(&a.zhat.angles(), &b.zhat.angles()));
    Ok(out)
}

/// Numerically located centers only satisfy `|eta| = 1` to the accuracy of the
/// location, so the check is relaxed for them.
fn pair_eta_several(r: &Rif, zhat: &UnimodularPoint) -> Result<UnitCoord> {
    if zhat.to_exact().is_some() {
        return pair_eta(r, zhat);
    }
    let dec = r.decompose();
    let z = zhat.to_c64();
    let pt1 = dec.pt1.eval(&z)?;
    if pt1.norm() == 0.0 {
        return Err(RifError::VerticalLine(zhat.to_string()));
    }
    let eta = -dec.p1.eval(&z)? / dec.p2.eval(&z)?;
    if (eta.norm() - 1.0).abs() > 1e-4 {
        return Err(RifError::NonUnimodularEta { modulus: eta.norm(), at: zhat.to_string() });
    }
    Ok(UnitCoord::Angle(eta.arg()))
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

fn midpoint(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + angle_diff(*y, *x) / 2.0).collect()
}

/// Replaces a numerical zero by the nearest point with coordinates in
/// `{1, i, -1, -i}` when the determinant vanishes there exactly.
fn snap(theta: &[f64], det: &ExactModulus) -> Option<UnimodularPoint> {
    let quarters: Vec<usize> = theta
        .iter()
        .map(|&t| {
            let q = (wrap_angle(t) / FRAC_PI_2).round();
            ((wrap_angle(t) - q * FRAC_PI_2).abs() <= 1e-3).then_some(q as usize % 4)
        })
        .collect::<Option<_>>()?;
    let units: Vec<GaussianRational> = quarters
        .iter()
        .map(|q| match q {
            0 => GaussianRational::from_int(1),
            1 => GaussianRational::i(),
            2 => GaussianRational::from_int(-1),
            _ => -GaussianRational::i(),
        })
        .collect();
    let exact: Vec<RationalUnit> = units.iter().map(|u| RationalUnit::from_gaussian(u).unwrap()).collect();
    if det.vanishes_at(&exact) {
        UnimodularPoint::exact(units)
    } else {
        None
    }
}

/// Damped Newton on `V`, falling back to gradient steps.
fn newton_minimize(v: &crate::poly::LaurentPoly, mut th: Vec<f64>) -> Vec<f64> {
    let k = th.len();
    for _ in 0..200 {
        let (f, g, h) = v.real_with_derivatives(&th);
        let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gn == 0.0 || f <= 0.0 {
            break;
        }
        let step = solve(&h, &g.iter().map(|x| -x).collect::<Vec<_>>())
            .filter(|s| s.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() < 0.0)
            .unwrap_or_else(|| {
                let hmax = h.iter().flatten().map(|x| x.abs()).fold(1e-300, f64::max);
                g.iter().map(|x| -x / hmax).collect()
            });
        let mut alpha = 1.0;
        let mut improved = false;
        while alpha > 1e-10 {
            let cand: Vec<f64> = (0..k).map(|j| th[j] + alpha * step[j]).collect();
            if v.eval_angles(&cand).re < f {
                th = cand;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    th
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(row, &bi)| row.iter().cloned().chain([bi]).collect()).collect();
    let scale = a.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[piv][c].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(c, piv);
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest.iter_mut() {
            let f = row[c] / pivot[c];
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * y;
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Random unit directions in `R^k` (deterministic for a seed).
pub fn ray_directions(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    if k == 1 {
        return [1.0, -1.0].iter().cycle().take(count.max(2)).map(|&s| vec![s]).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let u: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (0.1..=1.0).contains(&n) {
                break u.iter().map(|x| x / n).collect();
            }
        })
        .collect()
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `V = |det|` along rays out of `center`, evaluated exactly.
pub fn ray_profiles(r: &Rif, center: &UnimodularPoint, cfg: &SingularConfig) -> Vec<RayProfile> {
    let k = center.dim();
    let det = ExactModulus::new(&r.slice_det().poly);
    let base: Vec<RationalUnit> = center.coords.iter().map(RationalUnit::from_coord).collect();
    let radii = logspace(cfg.r_min, cfg.r_max, cfg.radii);
    ray_directions(k, cfg.rays.max(2 * k), cfg.seed)
        .into_par_iter()
        .map(|u| {
            let values = radii
                .iter()
                .map(|&rad| {
                    let z: Vec<RationalUnit> =
                        base.iter().zip(&u).map(|(b, &uj)| b.mul(&RationalUnit::near_angle(rad * uj))).collect();
                    det.abs_at(&z)
                })
                .collect();
            RayProfile { direction: u, radii: radii.clone(), values }
        })
        .collect()
}

/// Least-squares slope, intercept and RMS residual.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    (slope, icpt, (rss / n).sqrt())
}

fn estimate_order(profiles: &[RayProfile], at: &UnimodularPoint) -> Result<NumericOrder> {
    let mut slopes = Vec::new();
    let mut residual: f64 = 0.0;
    for p in profiles {
        if let Some(i) = p.values.iter().position(|&x| x == 0.0) {
            return Err(RifError::InfiniteSingularSetSuspected(format!(
                "{at}: V vanishes at distance {:.1e} along direction {:?}",
                p.radii[i], p.direction
            )));
        }
        let x: Vec<f64> = p.radii.iter().map(|r| r.ln()).collect();
        let y: Vec<f64> = p.values.iter().map(|v| v.ln()).collect();
        let (s, _, res) = linear_fit(&x, &y);
        slopes.push(s);
        residual = residual.max(res);
    }
    let lo = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi > 40.0 {
        return Err(RifError::InfiniteSingularSetSuspected(format!("{at}: V is flat to order {hi:.1}")));
    }
    let slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
    Ok(NumericOrder {
        slope,
        rounded: slope.round().max(0.0) as u32,
        residual,
        spread: hi - lo,
        per_ray: slopes,
        interval: (lo - residual, hi + residual),
        isotropic: hi - lo < 0.1,
    })
}

/// Orders of the singularities of `phi^N` predicted from those of `phi`
/// (`N` times each), cross-checked against a direct computation.
pub fn contact_order_scaling(r: &Rif, n: u32) -> Result<Vec<u32>> {
    if r.dim() != 2 {
        return Err(RifError::Unsupported("two variables for exact contact orders".into()));
    }
    let base = find_singularities(r)?;
    let predicted: Vec<u32> = base.iter().map(|s| n * s.order.rounded()).collect();
    if n == 1 {
        return Ok(predicted);
    }
    let comp = compose(r, n)?;
    if !comp.full_polydegree(r) {
        return Err(RifError::PolydegreeDrop(n));
    }
    let found = find_singularities(&comp.rif)?;
    let observed: Vec<u32> = base
        .iter()
        .map(|s| {
            found
                .iter()
                .find(|t| t.zhat.angular_distance(&s.zhat) <= 1e-8)
                .map(|t| t.order.rounded())
                .unwrap_or(0)
        })
        .collect();
    if observed != predicted || found.len() != base.len() {
        let observed = found.iter().map(|t| t.order.rounded()).collect();
        return Err(RifError::ScalingMismatch { predicted, observed });
    }
    Ok(predicted)
}

/// Angular distance from point `i` to the nearest other singularity.
pub fn nearest_other(points: &[SingularPoint], i: usize) -> f64 {
    points
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, q)| q.zhat.angular_distance(&points[i].zhat))
        .fold(PI * 2.0, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn axis(u: i64) -> UnitCoord {
        UnitCoord::Exact(GaussianRational::from_int(u))
    }

    fn residual_ok(r: &Rif, s: &SingularPoint) {
        let val = r.p().eval(&s.point()).unwrap().norm();
        assert!(val <= 1e-9 * (1.0 + r.p().coeff_l1()), "p = {val} at {:?}", s.point());
    }

    #[test]
    fn plus_sign_has_one_order_two_point() {
        let r = examples::bidisk(1).unwrap();
        let s = find_singularities(&r).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].zhat.coords, vec![axis(1)]);
        assert_eq!(s[0].eta, axis(1));
        assert_eq!(s[0].order, Order::Exact(2));
        assert!(s[0].anomaly.is_none());
        residual_ok(&r, &s[0]);
    }

    #[test]
    fn pascoe_has_two_points() {
        let r = examples::pascoe().unwrap();
        let s = find_singularities(&r).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].zhat.coords[0].clone(), s[0].eta.clone(), s[0].order.clone()), (axis(1), axis(-1), Order::Exact(2)));
        assert_eq!((s[1].zhat.coords[0].clone(), s[1].eta.clone(), s[1].order.clone()), (axis(-1), axis(-1), Order::Exact(4)));
        for p in &s {
            residual_ok(&r, p);
        }
    }

    #[test]
    fn phi3_order_two_at_ones() {
        let r = examples::phi_d(3).unwrap();
        let cfg = SingularConfig { grid: 48, ..Default::default() };
        let a = find_singularities_with(&r, &cfg).unwrap();
        assert_eq!(a.points.len(), 1);
        let s = &a.points[0];
        assert_eq!(s.zhat, UnimodularPoint::ones(2));
        assert_eq!(s.eta, axis(1));
        match &s.order {
            Order::Numeric(o) => {
                assert!((o.slope - 2.0).abs() < 0.05, "{o:?}");
                assert_eq!(o.rounded, 2);
                assert!(o.isotropic);
                assert!(o.per_ray.len() >= 4);
            }
            other => panic!("{other:?}"),
        }
        residual_ok(&r, s);
    }

    #[test]
    fn nonsingular_rif_has_none() {
        let p = crate::poly::MultiPoly::from_int_terms(2, &[(&[0, 0], 4), (&[1, 0], -1), (&[0, 1], -1)]);
        let r = Rif::new(p, GaussianRational::from_int(1)).unwrap();
        assert!(find_singularities(&r).unwrap().is_empty());
    }

    #[test]
    fn order_scaling_bidisk_and_pascoe() {
        let plus = examples::bidisk(1).unwrap();
        assert_eq!(contact_order_scaling(&plus, 1).unwrap(), vec![2]);
        assert_eq!(contact_order_scaling(&plus, 2).unwrap(), vec![4]);
        assert_eq!(contact_order_scaling(&plus, 3).unwrap(), vec![6]);
        let pascoe = examples::pascoe().unwrap();
        assert_eq!(contact_order_scaling(&pascoe, 3).unwrap_err(), RifError::PolydegreeDrop(3));
        let minus = examples::bidisk(-1).unwrap();
        assert_eq!(contact_order_scaling(&minus, 2), Err(RifError::PolydegreeDrop(2)));
    }

    #[test]
    fn pascoe_square_cancels_at_minus_one() {
        // M(-1) is nilpotent, so every entry of M^2 vanishes at -1.
        let r = examples::pascoe().unwrap();
        assert_eq!(contact_order_scaling(&r, 2), Err(RifError::PolydegreeDrop(2)));
        let c = compose(&r, 2).unwrap();
        assert_eq!(c.cancelled_factor.to_string(), "1 + z1");
        let orders: Vec<u32> = find_singularities(&c.rif).unwrap().iter().map(|s| s.order.rounded()).collect();
        assert_eq!(orders, vec![4, 6]);
    }

    #[test]
    fn fit_recovers_a_power_law() {
        let x: Vec<f64> = logspace(1e-4, 1e-1, 10).iter().map(|r| r.ln()).collect();
        let y: Vec<f64> = x.iter().map(|l| 3.0 * l + 0.5).collect();
        let (s, c, res) = linear_fit(&x, &y);
        assert!((s - 3.0).abs() < 1e-12 && (c - 0.5).abs() < 1e-10 && res < 1e-10);
    }
}
