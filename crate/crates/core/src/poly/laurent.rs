use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use super::scalar::GaussianRational;
use super::MultiPoly;

/// Laurent polynomial in `k` variables with Gaussian-rational coefficients.
///
/// On the torus `zeta_j = e^{i theta_j}` such a polynomial is a trigonometric
/// polynomial; Hermitian ones (`conj(c_a) = c_{-a}`) are real-valued there.
/// Used for `|q|^2 = q * q^*` where `q^*(zeta) = conj(q)(1/zeta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn from_poly(p: &MultiPoly) -> Self {
        let terms = p
            .terms()
            .map(|(k, c)| (k.0.iter().map(|&e| e as i64).collect(), c.clone()))
            .collect();
        Self { nvars: p.nvars(), terms }
    }

    /// `q^*`: conjugated coefficients, negated exponents.
    pub fn star(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.iter().map(|e| -e).collect(), c.conj()))
            .collect();
        Self { nvars: self.nvars, terms }
    }

    /// `|q|^2` on the torus as a Laurent polynomial.
    pub fn abs_sqr_on_torus(p: &MultiPoly) -> Self {
        let q = Self::from_poly(p);
        q.mul(&q.star())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &GaussianRational)> {
        self.terms.iter()
    }

    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            *terms.entry(k.clone()).or_insert_with(GaussianRational::zero) += c;
        }
        Self { nvars: self.nvars, terms }.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let neg = Self {
            nvars: other.nvars,
            terms: other.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        };
        self.add(&neg)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<i64>, GaussianRational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let k: Vec<i64> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                *terms.entry(k).or_insert_with(GaussianRational::zero) += &(ca * cb);
            }
        }
        Self { nvars: self.nvars, terms }.normalize()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
        .normalize()
    }

    /// Multiplies by the monomial `zeta^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        Self { nvars: self.nvars, terms }
    }

    /// True when `conj(c_a) == c_{-a}` for all `a`, i.e. real on the torus.
    pub fn is_hermitian(&self) -> bool {
        *self == self.star()
    }

    /// Value at `zeta = e^{i theta}`.
    pub fn eval_angles(&self, theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (k, c) in &self.terms {
            let phase: f64 = k.iter().zip(theta).map(|(&e, t)| e as f64 * t).sum();
            acc += c.to_c64() * Complex64::from_polar(1.0, phase);
        }
        acc
    }

    /// Exact value at a point of the torus given by unimodular Gaussian
    /// rationals (negative powers use `1/zeta = conj(zeta)`).
    pub fn eval_exact_torus(&self, zeta: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for (&e, z) in k.iter().zip(zeta) {
                if e > 0 {
                    t = &t * &z.pow(e as u32);
                } else if e < 0 {
                    t = &t * &z.conj().pow((-e) as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Real part of the value together with its gradient and Hessian in the
    /// angle variables.
    pub fn real_with_derivatives(&self, theta: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let k = self.nvars;
        let mut v = 0.0;
        let mut g = vec![0.0; k];
        let mut h = vec![vec![0.0; k]; k];
        for (e, c) in &self.terms {
            let phase: f64 = e.iter().zip(theta).map(|(&a, t)| a as f64 * t).sum();
            let term = c.to_c64() * Complex64::from_polar(1.0, phase);
            v += term.re;
            // d/dθ_j e^{iα·θ} = iα_j e^{iα·θ}; real part of i*w is −Im w
            for j in 0..k {
                let aj = e[j] as f64;
                g[j] -= aj * term.im;
                for l in 0..k {
                    h[j][l] -= aj * e[l] as f64 * term.re;
                }
            }
        }
        (v, g, h)
    }
}
