//! Exact evaluation of `|q|` on the torus.
//!
//! Angles are replaced by nearby points that are *exactly* unimodular,
//! `zeta = ((q^2 - p^2) + 2ipq) / (q^2 + p^2)` with `p/q = tan(theta/2)` read
//! off the binary expansion of the float. The polynomial is then evaluated in
//! big integers, so values near a high-order zero carry no cancellation error.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::poly::{wrap_angle, GaussianRational, MultiPoly, UnitCoord};

/// `(a + ib) / c` with `a^2 + b^2 = c^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalUnit {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl RationalUnit {
    /// An exactly unimodular point within a few ulps of `e^{i theta}`.
    pub fn near_angle(theta: f64) -> Self {
        let th = wrap_angle(theta);
        // Keep |t| <= 1 by expanding around 1 or -1.
        let (flip, phi) = if th <= PI / 2.0 {
            (false, th)
        } else if th >= 3.0 * PI / 2.0 {
            (false, th - 2.0 * PI)
        } else {
            (true, th - PI)
        };
        let (p, q) = exact_ratio((phi / 2.0).tan());
        let p2 = &p * &p;
        let q2 = &q * &q;
        let mut a = &q2 - &p2;
        let mut b = BigInt::from(2) * &p * &q;
        if flip {
            a = -a;
            b = -b;
        }
        RationalUnit { a, b, c: q2 + p2 }
    }

    /// Exact form of an exactly unimodular Gaussian rational.
    pub fn from_gaussian(q: &GaussianRational) -> Option<Self> {
        if !q.is_unimodular() {
            return None;
        }
        let c = q.re.denom().lcm(q.im.denom());
        let a = q.re.numer() * (&c / q.re.denom());
        let b = q.im.numer() * (&c / q.im.denom());
        Some(RationalUnit { a, b, c })
    }

    /// Exact when the coordinate is, otherwise the nearest rational point.
    pub fn from_coord(u: &UnitCoord) -> Self {
        match u {
            UnitCoord::Exact(q) => Self::from_gaussian(q).expect("exact coordinates are unimodular"),
            UnitCoord::Angle(t) => Self::near_angle(*t),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalUnit {
            a: &self.a * &o.a - &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            c: &self.c * &o.c,
        }
    }

    pub fn to_gaussian(&self) -> GaussianRational {
        GaussianRational::new(
            BigRational::new(self.a.clone(), self.c.clone()),
            BigRational::new(self.b.clone(), self.c.clone()),
        )
    }

    pub fn angle(&self) -> f64 {
        wrap_angle(ratio_f64(&self.b, &self.c).atan2(ratio_f64(&self.a, &self.c)))
    }
}

/// `x = p / q` exactly, with `q` a power of two.
fn exact_ratio(x: f64) -> (BigInt, BigInt) {
    if x == 0.0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (mant, exp, sign) = x.integer_decode();
    let mut p = BigInt::from(mant) * BigInt::from(sign);
    let mut q = BigInt::one();
    if exp >= 0 {
        p <<= exp as usize;
    } else {
        q <<= (-exp) as usize;
    }
    let g = p.gcd(&q);
    (p / &g, q / g)
}

/// `num / den` as `f64` without overflowing on huge operands.
pub(crate) fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let (mn, en) = split(num);
    let (md, ed) = split(den);
    let e = en - ed;
    let m = mn / md;
    if e.abs() > 2000 {
        return if e > 0 { f64::INFINITY.copysign(m) } else { 0.0 };
    }
    m * 2f64.powi(e as i32)
}

fn split(x: &BigInt) -> (f64, i64) {
    let bits = x.bits() as i64;
    if bits <= 60 {
        return (x.to_f64().unwrap(), 0);
    }
    let shift = bits - 60;
    ((x >> shift as usize).to_f64().unwrap(), shift)
}

/// Integer form of a polynomial in `k` variables, ready for repeated exact
/// evaluation of its modulus on the torus.
#[derive(Clone, Debug)]
pub struct ExactModulus {
    degs: Vec<u32>,
    terms: Vec<(Vec<u32>, BigInt, BigInt)>,
    denom: BigInt,
}

impl ExactModulus {
    pub fn new(q: &MultiPoly) -> Self {
        let mut denom = BigInt::one();
        for (_, c) in q.terms() {
            denom = denom.lcm(c.re.denom()).lcm(c.im.denom());
        }
        let terms = q
            .terms()
            .map(|(idx, c)| {
                let re = c.re.numer() * (&denom / c.re.denom());
                let im = c.im.numer() * (&denom / c.im.denom());
                (idx.0.clone(), re, im)
            })
            .collect();
        ExactModulus { degs: q.degrees(), terms, denom }
    }

    pub fn nvars(&self) -> usize {
        self.degs.len()
    }

    /// `|q(zeta)|` at exact unimodular coordinates.
    pub fn abs_at(&self, zeta: &[RationalUnit]) -> f64 {
        let (s_re, s_im, scale) = self.eval_homogenized(zeta);
        let n2 = &s_re * &s_re + &s_im * &s_im;
        if n2.is_zero() {
            return 0.0;
        }
        let d2 = &scale * &scale;
        ratio_f64(&n2, &d2).sqrt()
    }

    /// Whether `q` vanishes exactly at `zeta`.
    pub fn vanishes_at(&self, zeta: &[RationalUnit]) -> bool {
        let (s_re, s_im, _) = self.eval_homogenized(zeta);
        s_re.is_zero() && s_im.is_zero()
    }

    /// `|q|` at the exact unimodular point nearest the given angles.
    pub fn abs_at_angles(&self, theta: &[f64]) -> f64 {
        let zeta: Vec<RationalUnit> = theta.iter().map(|&t| RationalUnit::near_angle(t)).collect();
        self.abs_at(&zeta)
    }

    /// Returns `(Re S, Im S, D)` with `q(zeta) = S / D`.
    fn eval_homogenized(&self, zeta: &[RationalUnit]) -> (BigInt, BigInt, BigInt) {
        assert_eq!(zeta.len(), self.degs.len(), "point dimension");
        // powers[j][k] = (a + ib)^k c^(D_j - k)
        let powers: Vec<Vec<(BigInt, BigInt)>> = zeta
            .iter()
            .zip(&self.degs)
            .map(|(z, &dj)| {
                let mut up = vec![(BigInt::one(), BigInt::zero())];
                for _ in 0..dj {
                    let (r, i) = up.last().unwrap();
                    up.push((r * &z.a - i * &z.b, r * &z.b + i * &z.a));
                }
                let mut cpow = vec![BigInt::one()];
                for _ in 0..dj {
                    let last = cpow.last().unwrap() * &z.c;
                    cpow.push(last);
                }
                (0..=dj as usize)
                    .map(|k| {
                        let c = &cpow[dj as usize - k];
                        (&up[k].0 * c, &up[k].1 * c)
                    })
                    .collect()
            })
            .collect();
        let mut s_re = BigInt::zero();
        let mut s_im = BigInt::zero();
        for (idx, cre, cim) in &self.terms {
            let mut r = cre.clone();
            let mut i = cim.clone();
            for (j, &e) in idx.iter().enumerate() {
                let (pr, pi) = &powers[j][e as usize];
                let nr = &r * pr - &i * pi;
                i = &r * pi + &i * pr;
                r = nr;
            }
            s_re += r;
            s_im += i;
        }
        let mut scale = self.denom.clone();
        for (z, &dj) in zeta.iter().zip(&self.degs) {
            scale *= num_traits::pow(z.c.clone(), dj as usize);
        }
        if scale.is_negative() {
            scale = -scale;
        }
        (s_re, s_im, scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn uni(c: &[i64]) -> MultiPoly {
        let gr = crate::poly::GaussianRational::from_int;
        MultiPoly::from_terms(1, c.iter().enumerate().map(|(k, &v)| (vec![k as u32], gr(v))))
    }

    #[test]
    fn rational_units_are_unimodular_and_close() {
        for &t in &[0.0, 1e-7, 0.3, 1.5, 2.0, PI, 4.0, 5.9, -0.2] {
            let z = RationalUnit::near_angle(t);
            assert_eq!(&z.a * &z.a + &z.b * &z.b, &z.c * &z.c);
            let got = Complex64::new(ratio_f64(&z.a, &z.c), ratio_f64(&z.b, &z.c));
            assert!((got - Complex64::from_polar(1.0, t)).norm() < 1e-15, "{t}");
        }
    }

    #[test]
    fn exact_small_values_near_a_quartic_zero() {
        // (z - 1)^4 has modulus (2 sin(t/2))^4; floats lose this near t = 0.
        let q = uni(&[1, -4, 6, -4, 1]);
        let m = ExactModulus::new(&q);
        for &t in &[1e-3, 1e-5, 3e-6] {
            let want = (2.0 * (t / 2.0).sin()).powi(4);
            let got = m.abs_at_angles(&[t]);
            assert!(((got - want) / want).abs() < 1e-12, "{t}: {got} vs {want}");
        }
        assert!(m.vanishes_at(&[RationalUnit::near_angle(0.0)]));
        assert!(!m.vanishes_at(&[RationalUnit::near_angle(PI)]));
    }

    #[test]
    fn matches_float_evaluation_with_rational_coefficients() {
        let q = MultiPoly::from_terms(
            2,
            vec![
                (vec![0, 0], crate::poly::GaussianRational::from_parts(1, 2, 3)),
                (vec![2, 1], crate::poly::GaussianRational::from_parts(-5, 1, 7)),
            ],
        );
        let m = ExactModulus::new(&q);
        let th = [0.7, 2.9];
        let z: Vec<Complex64> = th.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let want = q.eval(&z).unwrap().norm();
        assert!((m.abs_at_angles(&th) - want).abs() < 1e-14);
    }
}
