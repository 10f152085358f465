//! Rational inner functions `phi = unit * ptilde / p` of polydegree `(n, 1)`.
//!
//! With `p = p1 + z_d p2` and `ptilde = ptilde2 + z_d ptilde1`, every slice
//! `phi(zhat, .)` is the Möbius map of the slice matrix
//! `[[ptilde1, ptilde2], [p2, p1]]`, and its determinant locates the torus
//! singularities.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, RifError};
use crate::poly::{
    gcd_univariate, roots_on_unit_circle, GaussianRational, LaurentPoly, MultiPoly, Scalar, UnimodularPoint,
};
use crate::stability::{check_stability, StabilityCertificate, StabilityConfig, StabilityOutcome};
use crate::torus;

/// Relative threshold for a vanishing slice determinant in float mode.
pub const CONSTANT_SLICE_TOL: f64 = 1e-10;

/// Validated rational inner function of polydegree `(n, 1)`.
#[derive(Clone, Debug)]
pub struct Rif {
    p: MultiPoly,
    ptilde: MultiPoly,
    unit: GaussianRational,
    polydegree: Vec<u32>,
    certificate: StabilityCertificate,
    warnings: Vec<String>,
}

/// `p = p1 + z_d p2`, `ptilde = ptilde2 + z_d ptilde1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub p1: MultiPoly,
    pub p2: MultiPoly,
    pub pt1: MultiPoly,
    pub pt2: MultiPoly,
}

/// 2x2 matrix of polynomials in `d - 1` variables, rows `(a, b)` and `(c, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceMatrix {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub c: MultiPoly,
    pub d: MultiPoly,
}

impl SliceMatrix {
    pub fn identity(k: usize) -> Self {
        Self { a: MultiPoly::one(k), b: MultiPoly::zero(k), c: MultiPoly::zero(k), d: MultiPoly::one(k) }
    }

    pub fn nvars(&self) -> usize {
        self.a.nvars()
    }

    pub fn det(&self) -> MultiPoly {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &SliceMatrix) -> SliceMatrix {
        SliceMatrix {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn entries(&self) -> [&MultiPoly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn map_entries(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> SliceMatrix {
        SliceMatrix { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    /// Entry values at a point, row-major.
    pub fn eval<T: Scalar>(&self, zhat: &[T]) -> Result<[T; 4]> {
        Ok([self.a.eval(zhat)?, self.b.eval(zhat)?, self.c.eval(zhat)?, self.d.eval(zhat)?])
    }

    /// `(p, ptilde)` with `p = d + z_d c` and `ptilde = b + z_d a`.
    pub fn reconstruct(&self) -> (MultiPoly, MultiPoly) {
        let p = MultiPoly::from_last_coefficients(&[self.d.clone(), self.c.clone()]);
        let pt = MultiPoly::from_last_coefficients(&[self.b.clone(), self.a.clone()]);
        (p, pt)
    }
}

/// The slice determinant and the torus function `V = |ptilde1|^2 - |ptilde2|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceDet {
    pub poly: MultiPoly,
    /// `V` as a Hermitian Laurent polynomial, real-valued on the torus.
    pub vpoly: LaurentPoly,
    pub unit: GaussianRational,
    pub n: Vec<u32>,
}

impl SliceDet {
    pub fn det_at(&self, zhat: &[Complex64]) -> Complex64 {
        self.poly.eval(zhat).expect("arity")
    }

    pub fn v_at_angles(&self, theta: &[f64]) -> f64 {
        self.vpoly.eval_angles(theta).re
    }

    /// `unit * zhat^n * V(zhat)` at a torus point given by angles.
    pub fn identity_rhs(&self, theta: &[f64]) -> Complex64 {
        let phase: f64 = self.n.iter().zip(theta).map(|(&e, t)| e as f64 * t).sum();
        self.unit.to_c64() * Complex64::from_polar(1.0, phase) * self.v_at_angles(theta)
    }

    /// Exact form of the identity: `det == unit * zeta^n * V` as Laurent polynomials.
    pub fn identity_holds_symbolically(&self) -> bool {
        let shift: Vec<i64> = self.n.iter().map(|&e| e as i64).collect();
        LaurentPoly::from_poly(&self.poly) == self.vpoly.shift(&shift).scale(&self.unit)
    }

    /// Exact check of the identity at a torus point with exact coordinates.
    pub fn identity_holds_exact_at(&self, zeta: &[GaussianRational]) -> bool {
        let lhs = self.poly.eval(zeta).expect("arity");
        let mut mono = self.unit.clone();
        for (z, &e) in zeta.iter().zip(&self.n) {
            mono = &mono * &z.pow(e);
        }
        let v = self.vpoly.eval_exact_torus(zeta);
        lhs == &mono * &v
    }
}

/// The slice function `w -> phi(zhat, w)`.
#[derive(Clone, Debug, PartialEq)]
pub enum SliceMap<T> {
    /// `(a w + b) / (c w + d)` with nonzero determinant.
    Mobius { a: T, b: T, c: T, d: T },
    Constant(T),
}

impl<T: Scalar> SliceMap<T> {
    pub fn apply(&self, w: T) -> T {
        match self {
            SliceMap::Mobius { a, b, c, d } => {
                (a.clone() * w.clone() + b.clone()) / (c.clone() * w + d.clone())
            }
            SliceMap::Constant(v) => v.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, SliceMap::Constant(_))
    }
}

/// Zero of the slice map and `rho = 1 - |psi0|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceZero<T, R> {
    pub psi0: T,
    pub rho: R,
}

fn describe_c(z: &[Complex64]) -> String {
    let parts: Vec<String> = z.iter().map(|c| format!("{:.6}{:+.6}i", c.re, c.im)).collect();
    format!("({})", parts.join(", "))
}

fn describe_q(z: &[GaussianRational]) -> String {
    let parts: Vec<String> = z.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl Rif {
    /// Validates `phi = unit * reflect(p) / p` with the polydegree read off `p`.
    pub fn new(p: MultiPoly, unit: GaussianRational) -> Result<Self> {
        Self::with_config(p, unit, None, &StabilityConfig::default())
    }

    /// As [`Rif::new`], with an explicit polydegree and stability sampling budget.
    pub fn with_config(
        p: MultiPoly,
        unit: GaussianRational,
        polydegree: Option<Vec<u32>>,
        cfg: &StabilityConfig,
    ) -> Result<Self> {
        let d = p.nvars();
        if d < 2 {
            return Err(RifError::TooFewVariables(d));
        }
        if !unit.is_unimodular() {
            return Err(RifError::NotUnimodularUnit(unit.to_string()));
        }
        let last = d - 1;
        let deg_last = p.degree_in(last);
        if deg_last > 1 {
            return Err(RifError::NotDegreeOneInLast(deg_last));
        }
        let certificate = match check_stability(&p, cfg)? {
            StabilityOutcome::Certificate(c) => c,
            StabilityOutcome::Counterexample(cx) => {
                return Err(RifError::NotStable { witness: cx.describe_for(&p), point: cx.point })
            }
        };
        if deg_last != 1 {
            return Err(RifError::NotDegreeOneInLast(deg_last));
        }
        let mut n = p.degrees();
        n[last] = 1;
        if let Some(explicit) = polydegree {
            if explicit.len() != d || explicit[last] != 1 {
                return Err(RifError::InvalidArgument(format!(
                    "polydegree {explicit:?} must have length {d} and end in 1"
                )));
            }
            if explicit.iter().zip(&n).any(|(e, a)| e < a) {
                return Err(RifError::InvalidArgument(format!(
                    "polydegree {explicit:?} is below the actual degree {n:?}"
                )));
            }
            n = explicit;
        }
        let ptilde = p.reflect(&n)?.scale(&unit);
        let mut rif = Rif { p, ptilde, unit, polydegree: n, certificate, warnings: Vec::new() };
        rif.check_atoral()?;
        rif.check_vertical_lines(cfg)?;
        Ok(rif)
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn ptilde(&self) -> &MultiPoly {
        &self.ptilde
    }

    pub fn unit(&self) -> &GaussianRational {
        &self.unit
    }

    pub fn polydegree(&self) -> &[u32] {
        &self.polydegree
    }

    /// `n`: the polydegree without its trailing 1.
    pub fn slice_degree(&self) -> &[u32] {
        &self.polydegree[..self.polydegree.len() - 1]
    }

    pub fn dim(&self) -> usize {
        self.p.nvars()
    }

    pub fn stability_certificate(&self) -> &StabilityCertificate {
        &self.certificate
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn decompose(&self) -> Decomposition {
        let last = self.dim() - 1;
        let k = self.dim() - 1;
        let split = |q: &MultiPoly| {
            let mut v = q.coefficients_in(last);
            v.resize(2, MultiPoly::zero(k));
            (v[0].clone(), v[1].clone())
        };
        let (p1, p2) = split(&self.p);
        let (pt2, pt1) = split(&self.ptilde);
        Decomposition { p1, p2, pt1, pt2 }
    }

    pub fn slice_matrix(&self) -> SliceMatrix {
        let Decomposition { p1, p2, pt1, pt2 } = self.decompose();
        SliceMatrix { a: pt1, b: pt2, c: p2, d: p1 }
    }

    pub fn slice_det(&self) -> SliceDet {
        let dec = self.decompose();
        let poly = &(&dec.pt1 * &dec.p1) - &(&dec.pt2 * &dec.p2);
        let vpoly = LaurentPoly::abs_sqr_on_torus(&dec.pt1).sub(&LaurentPoly::abs_sqr_on_torus(&dec.pt2));
        SliceDet { poly, vpoly, unit: self.unit.clone(), n: self.slice_degree().to_vec() }
    }

    fn check_atoral(&mut self) -> Result<()> {
        let dec = self.decompose();
        let det = &(&dec.pt1 * &dec.p1) - &(&dec.pt2 * &dec.p2);
        // The slice determinant is the z_d-resultant of p and ptilde.
        if det.is_zero() {
            return Err(RifError::ToralFactor(" depending on the last variable".into()));
        }
        let k = self.dim() - 1;
        if k == 1 {
            let content = gcd_univariate(&dec.p1, &dec.p2)?;
            let tcontent = gcd_univariate(&dec.pt1, &dec.pt2)?;
            let g = gcd_univariate(&content, &tcontent)?;
            if !g.is_constant() {
                return Err(RifError::ToralFactor(format!(" {g}")));
            }
            return Ok(());
        }
        // Common factors free of z_d: restrict to random rational lines.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a70a);
        let mut hits = 0;
        let trials = 2;
        for _ in 0..trials {
            let (a, b) = random_line(&mut rng, k);
            let rs: Vec<MultiPoly> =
                [&dec.p1, &dec.p2, &dec.pt1, &dec.pt2].iter().map(|q| restrict_to_line(q, &a, &b)).collect();
            let g = rs[1..].iter().try_fold(rs[0].clone(), |acc, r| gcd_univariate(&acc, r))?;
            if !g.is_constant() {
                hits += 1;
            }
        }
        if hits == trials {
            return Err(RifError::ToralFactor(" free of the last variable (detected on random lines)".into()));
        }
        if hits > 0 {
            self.warnings
                .push("atorality heuristic inconclusive: a common factor appeared on some random lines only".into());
        } else {
            self.warnings.push("atorality checked heuristically (random line restrictions)".into());
        }
        Ok(())
    }

    /// `ptilde1` must not vanish on the torus.
    fn check_vertical_lines(&self, cfg: &StabilityConfig) -> Result<()> {
        let pt1 = self.decompose().pt1;
        let k = self.dim() - 1;
        if k == 1 {
            let roots = roots_on_unit_circle(&pt1)?;
            if let Some(r) = roots.roots.first() {
                return Err(RifError::InfiniteSingularSet(format!("({})", r.root)));
            }
            return Ok(());
        }
        if let Some(theta) = torus_zero(&pt1, cfg.grid.min(64)) {
            return Err(RifError::InfiniteSingularSet(format!("angles {theta:?}")));
        }
        Ok(())
    }

    /// `phi(z) = ptilde(z) / p(z)`.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let den = self.p.eval(z)?;
        if den.norm() == 0.0 {
            return Err(RifError::PoleAtPoint);
        }
        Ok(self.ptilde.eval(z)? / den)
    }

    /// Slice map in float mode; constant when `|det| <= 1e-10 * max|entry|^2`.
    pub fn slice_map(&self, zhat: &[Complex64]) -> Result<SliceMap<Complex64>> {
        let m = self.slice_matrix();
        let [a, b, c, d] = m.eval(zhat)?;
        let scale = [a, b, c, d].iter().map(|x| x.norm()).fold(0.0, f64::max);
        if scale == 0.0 || c.norm().max(d.norm()) <= CONSTANT_SLICE_TOL * scale {
            return Err(RifError::DegenerateSlice(describe_c(zhat)));
        }
        let det = a * d - b * c;
        if det.norm() <= CONSTANT_SLICE_TOL * scale * scale {
            let v = if d.norm() >= c.norm() { b / d } else { a / c };
            return Ok(SliceMap::Constant(v));
        }
        Ok(SliceMap::Mobius { a, b, c, d })
    }

    /// Slice map with exact arithmetic.
    pub fn slice_map_exact(&self, zhat: &[GaussianRational]) -> Result<SliceMap<GaussianRational>> {
        let m = self.slice_matrix();
        let [a, b, c, d] = m.eval(zhat)?;
        if c.is_zero() && d.is_zero() {
            return Err(RifError::DegenerateSlice(describe_q(zhat)));
        }
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            let v = if !d.is_zero() { &b / &d } else { &a / &c };
            return Ok(SliceMap::Constant(v));
        }
        Ok(SliceMap::Mobius { a, b, c, d })
    }

    /// `psi0 = -ptilde2 / ptilde1` and `rho = 1 - |psi0|^2`.
    pub fn zd_zero(&self, zhat: &[Complex64]) -> Result<SliceZero<Complex64, f64>> {
        let dec = self.decompose();
        let t1 = dec.pt1.eval(zhat)?;
        let t2 = dec.pt2.eval(zhat)?;
        if t1.norm() == 0.0 {
            return Err(RifError::VerticalLine(describe_c(zhat)));
        }
        let psi0 = -t2 / t1;
        Ok(SliceZero { psi0, rho: 1.0 - psi0.norm_sqr() })
    }

    pub fn zd_zero_exact(&self, zhat: &[GaussianRational]) -> Result<SliceZero<GaussianRational, BigRational>> {
        let dec = self.decompose();
        let t1 = dec.pt1.eval(zhat)?;
        let t2 = dec.pt2.eval(zhat)?;
        if t1.is_zero() {
            return Err(RifError::VerticalLine(describe_q(zhat)));
        }
        let psi0 = -(&t2 / &t1);
        let rho = BigRational::one() - psi0.norm_sqr();
        Ok(SliceZero { psi0, rho })
    }

    /// `d phi / d z_d = det(zhat) / p(z)^2`.
    pub fn zd_derivative(&self, z: &[Complex64]) -> Result<Complex64> {
        let d = self.dim();
        if z.len() != d {
            return Err(crate::poly::PolyError::PointLength { expected: d, got: z.len() }.into());
        }
        let den = self.p.eval(z)?;
        if den.norm() == 0.0 {
            return Err(RifError::PoleAtPoint);
        }
        let det = self.slice_det().det_at(&z[..d - 1]);
        Ok(det / (den * den))
    }

    /// Exact point of the torus with all coordinates `1`, handy for the examples.
    pub fn ones_point(&self) -> UnimodularPoint {
        UnimodularPoint::ones(self.dim() - 1)
    }
}

fn random_small_rational(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::from_parts(rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(1..=7))
}

pub(crate) fn random_line(rng: &mut ChaCha8Rng, k: usize) -> (Vec<GaussianRational>, Vec<GaussianRational>) {
    let a = (0..k).map(|_| random_small_rational(rng)).collect();
    let b = (0..k)
        .map(|_| {
            let mut v = random_small_rational(rng);
            while v.is_zero() {
                v = random_small_rational(rng);
            }
            v
        })
        .collect();
    (a, b)
}

/// `q(a + t b)` as a univariate polynomial in `t`.
pub(crate) fn restrict_to_line(q: &MultiPoly, a: &[GaussianRational], b: &[GaussianRational]) -> MultiPoly {
    let lines: Vec<MultiPoly> = a
        .iter()
        .zip(b)
        .map(|(ai, bi)| MultiPoly::from_terms(1, [(vec![0], ai.clone()), (vec![1], bi.clone())]))
        .collect();
    let mut acc = MultiPoly::zero(1);
    for (k, c) in q.terms() {
        let mut t = MultiPoly::constant(1, c.clone());
        for (j, &e) in k.0.iter().enumerate() {
            if e > 0 {
                t = &t * &lines[j].pow(e);
            }
        }
        acc = &acc + &t;
    }
    acc
}

/// Looks for a zero of a complex polynomial on `T^k` (`k >= 2`): grid search
/// followed by Gauss–Newton on `(Re q, Im q)` in the angles.
fn torus_zero(q: &MultiPoly, g: usize) -> Option<Vec<f64>> {
    let k = q.nvars();
    let scale = q.coeff_l1().max(1e-300);
    let val = |t: &[f64]| -> Complex64 {
        let z: Vec<Complex64> = t.iter().map(|&x| Complex64::from_polar(1.0, x)).collect();
        q.eval(&z).expect("arity")
    };
    let vals = torus::grid_values(k, g, |t| val(t).norm());
    for idx in torus::lowest_indices(&vals, 12) {
        let mut t = torus::index_to_angles(idx, k, g);
        for _ in 0..40 {
            let f = val(&t);
            if f.norm() <= 1e-12 * scale {
                break;
            }
            // Jacobian of the complex value w.r.t. each angle: i * z_j dq/dz_j.
            let h = 1e-7;
            let jac: Vec<Complex64> = (0..k)
                .map(|j| {
                    let mut tp = t.clone();
                    let mut tm = t.clone();
                    tp[j] += h;
                    tm[j] -= h;
                    (val(&tp) - val(&tm)) / (2.0 * h)
                })
                .collect();
            // Minimum-norm solution of J dt = -f with J real 2 x k.
            let mut jjt = [[0.0; 2]; 2];
            for c in &jac {
                jjt[0][0] += c.re * c.re;
                jjt[0][1] += c.re * c.im;
                jjt[1][1] += c.im * c.im;
            }
            jjt[1][0] = jjt[0][1];
            let det = jjt[0][0] * jjt[1][1] - jjt[0][1] * jjt[1][0];
            if det.abs() < 1e-300 {
                break;
            }
            let y0 = (jjt[1][1] * (-f.re) - jjt[0][1] * (-f.im)) / det;
            let y1 = (-jjt[1][0] * (-f.re) + jjt[0][0] * (-f.im)) / det;
            let step: Vec<f64> = jac.iter().map(|c| c.re * y0 + c.im * y1).collect();
            let norm: f64 = step.iter().map(|s| s * s).sum::<f64>().sqrt();
            let damp = if norm > 0.5 { 0.5 / norm } else { 1.0 };
            for (x, s) in t.iter_mut().zip(&step) {
                *x += damp * s;
            }
        }
        if val(&t).norm() <= 1e-10 * scale {
            return Some(t.iter().map(|&x| crate::poly::wrap_angle(x)).collect());
        }
    }
    None
}

/// Evaluation helper used by tests and the analysis modules.
pub fn torus_point(theta: &[f64]) -> Vec<Complex64> {
    theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    pub(crate) fn bidisk(unit: i64) -> Rif {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 2), (&[1, 0], -1), (&[0, 1], -1)]);
        Rif::new(p, gr(unit)).unwrap()
    }

    fn phi3() -> Rif {
        let p = MultiPoly::from_int_terms(3, &[(&[0, 0, 0], 3), (&[1, 0, 0], -1), (&[0, 1, 0], -1), (&[0, 0, 1], -1)]);
        Rif::with_config(p, gr(1), Some(vec![1, 1, 1]), &StabilityConfig::default()).unwrap()
    }

    fn pascoe() -> Rif {
        let p = MultiPoly::from_int_terms(
            2,
            &[(&[0, 0], 4), (&[0, 1], 1), (&[1, 1], -1), (&[2, 1], 3), (&[3, 1], 1)],
        );
        Rif::new(p, gr(1)).unwrap()
    }

    fn uni(c: &[i64]) -> MultiPoly {
        MultiPoly::from_terms(1, c.iter().enumerate().map(|(k, &v)| (vec![k as u32], gr(v))))
    }

    #[test]
    fn valid_examples_construct() {
        let r = bidisk(1);
        assert_eq!(r.polydegree(), &[1, 1]);
        assert_eq!(
            r.ptilde(),
            &MultiPoly::from_int_terms(2, &[(&[1, 1], 2), (&[1, 0], -1), (&[0, 1], -1)])
        );
        let r3 = phi3();
        assert_eq!(r3.polydegree(), &[1, 1, 1]);
        assert!(r3.warnings().iter().any(|w| w.contains("heuristic")));
    }

    #[test]
    fn unstable_denominator_is_rejected_with_witness() {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 1), (&[1, 0], -2)]);
        match Rif::new(p, gr(1)) {
            Err(RifError::NotStable { point, witness }) => {
                assert!((point[0].0 - 0.5).abs() < 1e-12);
                assert!(witness.starts_with("(1/2, "), "{witness}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_validation_errors() {
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 3), (&[1, 0], -1)]);
        assert!(matches!(Rif::new(p, gr(1)), Err(RifError::NotDegreeOneInLast(0))));
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 4), (&[0, 2], 1)]);
        assert!(matches!(Rif::new(p, gr(1)), Err(RifError::NotDegreeOneInLast(2))));
        let p = MultiPoly::from_int_terms(2, &[(&[0, 0], 2), (&[1, 0], -1), (&[0, 1], -1)]);
        assert!(matches!(Rif::new(p.clone(), gr(2)), Err(RifError::NotUnimodularUnit(_))));
        assert!(matches!(Rif::new(MultiPoly::one(1), gr(1)), Err(RifError::TooFewVariables(1))));
        // a factor (1 + z1) is its own reflection, hence toral
        let toral = &MultiPoly::from_int_terms(2, &[(&[0, 0], 1), (&[1, 0], 1)])
            * &MultiPoly::from_int_terms(2, &[(&[0, 0], 3), (&[0, 1], 1)]);
        assert!(matches!(Rif::new(toral, gr(1)), Err(RifError::ToralFactor(_))));
    }

    #[test]
    fn vertical_line_is_rejected() {
        // p = 4(2 − z1 − z2) + z3 (1 − z1)(1 − z2): stable and atoral, but
        // p1 and p2 both vanish at (1, 1), so ptilde1 does too.
        let p = MultiPoly::from_int_terms(
            3,
            &[
                (&[0, 0, 0], 8),
                (&[1, 0, 0], -4),
                (&[0, 1, 0], -4),
                (&[0, 0, 1], 1),
                (&[1, 0, 1], -1),
                (&[0, 1, 1], -1),
                (&[1, 1, 1], 1),
            ],
        );
        assert!(matches!(Rif::new(p, gr(1)), Err(RifError::InfiniteSingularSet(_))));
    }

    #[test]
    fn decomposition_examples() {
        let dec = bidisk(1).decompose();
        assert_eq!(dec.p1, uni(&[2, -1]));
        assert_eq!(dec.p2, uni(&[-1]));
        assert_eq!(dec.pt1, uni(&[-1, 2]));
        assert_eq!(dec.pt2, uni(&[0, -1]));
        let d3 = phi3().decompose();
        assert_eq!(d3.p1, MultiPoly::from_int_terms(2, &[(&[0, 0], 3), (&[1, 0], -1), (&[0, 1], -1)]));
        assert_eq!(d3.p2, MultiPoly::constant(2, gr(-1)));
        let dp = pascoe().decompose();
        assert_eq!(dp.pt1, uni(&[0, 0, 0, 4]));
        assert_eq!(dp.pt2, uni(&[1, 3, -1, 1]));
        assert_eq!(dp.p2, uni(&[1, -1, 3, 1]));
        assert_eq!(dp.p1, uni(&[4]));
    }

    #[test]
    fn slice_matrix_and_reconstruction() {
        let r = bidisk(1);
        let m = r.slice_matrix();
        assert_eq!(m.a, uni(&[-1, 2]));
        assert_eq!(m.b, uni(&[0, -1]));
        assert_eq!(m.c, uni(&[-1]));
        assert_eq!(m.d, uni(&[2, -1]));
        let (p, pt) = m.reconstruct();
        assert_eq!(&p, r.p());
        assert_eq!(&pt, r.ptilde());
        let (pp, ppt) = pascoe().slice_matrix().reconstruct();
        assert_eq!(&pp, pascoe().p());
        assert_eq!(&ppt, pascoe().ptilde());
    }

    #[test]
    fn slice_determinants() {
        let sd = bidisk(1).slice_det();
        assert_eq!(sd.poly, uni(&[-2, 4, -2]));
        assert!(sd.identity_holds_symbolically());
        // at ζ = i: det = 4i and i·V(i) = i·4
        assert_eq!(sd.poly.eval(&[GaussianRational::i()]).unwrap(), GaussianRational::from_parts(0, 4, 1));
        assert_eq!(sd.vpoly.eval_exact_torus(&[GaussianRational::i()]), gr(4));
        assert!(sd.identity_holds_exact_at(&[GaussianRational::i()]));
        let pd = pascoe().slice_det();
        let expected = -(&uni(&[-1, 1]).pow(2) * &uni(&[1, 1]).pow(4));
        assert_eq!(pd.poly, expected);
    }

    #[test]
    fn slice_maps() {
        let r = bidisk(1);
        match r.slice_map_exact(&[gr(-1)]).unwrap() {
            SliceMap::Mobius { a, b, c, d } => assert_eq!(&(&a * &d) - &(&b * &c), gr(-8)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.slice_map_exact(&[gr(1)]).unwrap().is_constant());
        assert!(r.slice_map(&[Complex64::new(1.0, 0.0)]).unwrap().is_constant());
        assert!(phi3().slice_map_exact(&[gr(1), gr(1)]).unwrap().is_constant());
        assert!(!phi3().slice_map_exact(&[gr(1), gr(-1)]).unwrap().is_constant());
    }

    #[test]
    fn slice_zero_values() {
        let r = bidisk(1);
        let z = r.zd_zero_exact(&[gr(1)]).unwrap();
        assert_eq!(z.psi0, gr(1));
        assert!(z.rho.is_zero());
        let z = r.zd_zero_exact(&[gr(-1)]).unwrap();
        // ptilde(−1, psi0) = 0 fixes psi0 = 1/3
        assert_eq!(z.psi0, GaussianRational::from_ratio(1, 3));
        assert!(r.ptilde().eval(&[gr(-1), z.psi0.clone()]).unwrap().is_zero());
        assert_eq!(z.rho, BigRational::new(8.into(), 9.into()));
    }

    #[test]
    fn derivative_at_interior_point() {
        let r = bidisk(1);
        let v = r.zd_derivative(&[Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!((v - Complex64::new(-8.0 / 9.0, 0.0)).norm() < 1e-14);
        assert!(matches!(
            r.zd_derivative(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]),
            Err(RifError::PoleAtPoint)
        ));
    }
}
