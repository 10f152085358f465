use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::scalar::{GaussianRational, Scalar};
use super::PolyError;

/// Exponent vector of a monomial. `[e0, e1, ...]` stands for `z1^e0 * z2^e1 * ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Graded order used for printing: total degree first, then reverse
    /// lexicographic so `z1` precedes `z2` among linear terms.
    fn graded_cmp(&self, other: &MultiIndex) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// Sparse multivariate polynomial over the Gaussian rationals.
///
/// Zero coefficients are never stored, so two equal polynomials have identical
/// term maps. The declared polydegree is carried along for reflection; it is
/// an upper bound on the actual degree in every variable and does not take
/// part in equality.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, GaussianRational>,
    declared: Vec<u32>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new(), declared: vec![0; nvars] }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    /// The coordinate function `z_{j+1}` (zero-based `j`).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(nvars, e, GaussianRational::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: GaussianRational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length must equal nvars");
        Self::from_terms(nvars, [(exponents, c)])
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut map: BTreeMap<MultiIndex, GaussianRational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length must equal nvars");
            *map.entry(MultiIndex(e)).or_insert_with(GaussianRational::zero) += &c;
        }
        Self::from_map(nvars, map)
    }

    /// Convenience for integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), GaussianRational::from_int(*c))),
        )
    }

    fn from_map(nvars: usize, mut terms: BTreeMap<MultiIndex, GaussianRational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let mut p = Self { nvars, terms, declared: Vec::new() };
        p.declared = p.degrees();
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponents: &[u32]) -> GaussianRational {
        self.terms
            .get(&MultiIndex(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.total() == 0)
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_constant() {
            Some(self.coeff(&vec![0; self.nvars]))
        } else {
            None
        }
    }

    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|k| k.0[j]).max().unwrap_or(0)
    }

    /// Actual degree in each variable.
    pub fn degrees(&self) -> Vec<u32> {
        (0..self.nvars).map(|j| self.degree_in(j)).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    pub fn declared_polydegree(&self) -> &[u32] {
        &self.declared
    }

    /// Attaches a declared polydegree, which must dominate the actual degree.
    pub fn with_polydegree(mut self, n: Vec<u32>) -> Result<Self, PolyError> {
        if n.len() != self.nvars {
            return Err(PolyError::NvarsMismatch { left: self.nvars, right: n.len() });
        }
        for (j, (&actual, &bound)) in self.degrees().iter().zip(&n).enumerate() {
            if actual > bound {
                return Err(PolyError::DegreeExceeds { var: j + 1, degree: actual, bound });
            }
        }
        self.declared = n;
        Ok(self)
    }

    /// Largest coefficient modulus, as a float.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli; bounds `|p|` on the closed polydisk.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).sum()
    }

    fn check_nvars(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_nvars(other)?;
        let mut map = self.terms.clone();
        for (k, c) in &other.terms {
            *map.entry(k.clone()).or_insert_with(GaussianRational::zero) += c;
        }
        let mut out = Self::from_map(self.nvars, map);
        out.declared = max_vec(&self.declared, &other.declared);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_nvars(other)?;
        let mut map: BTreeMap<MultiIndex, GaussianRational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                *map.entry(ka.add(kb)).or_insert_with(GaussianRational::zero) += &(ca * cb);
            }
        }
        let mut out = Self::from_map(self.nvars, map);
        if !out.is_zero() {
            out.declared = self.declared.iter().zip(&other.declared).map(|(a, b)| a + b).collect();
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let map = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        let mut out = Self::from_map(self.nvars, map);
        if !out.is_zero() {
            out.declared = self.declared.clone();
        }
        out
    }

    fn neg_ref(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            declared: self.declared.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficient-wise conjugate.
    pub fn conj(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.conj())).collect(),
            declared: self.declared.clone(),
        }
    }

    /// Evaluates at a point; exact for `GaussianRational`, floating for `Complex64`.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, got: point.len() });
        }
        let degs = self.degrees();
        let powers: Vec<Vec<T>> = point
            .iter()
            .zip(&degs)
            .map(|(x, &n)| {
                let mut v = Vec::with_capacity(n as usize + 1);
                v.push(T::one());
                for i in 0..n as usize {
                    let next = v[i].clone() * x.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = T::zero();
        for (k, c) in &self.terms {
            let mut t = T::from_coeff(c);
            for (j, &e) in k.0.iter().enumerate() {
                if e > 0 {
                    t = t * powers[j][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// `z^n * conj(p)(1 / conj(z))`: the coefficient at `alpha` becomes the
    /// conjugate of the coefficient at `n - alpha`.
    pub fn reflect(&self, n: &[u32]) -> Result<Self, PolyError> {
        if n.len() != self.nvars {
            return Err(PolyError::NvarsMismatch { left: self.nvars, right: n.len() });
        }
        for (j, (&actual, &bound)) in self.degrees().iter().zip(n).enumerate() {
            if actual > bound {
                return Err(PolyError::DegreeExceeds { var: j + 1, degree: actual, bound });
            }
        }
        let map = self
            .terms
            .iter()
            .map(|(k, c)| (MultiIndex(n.iter().zip(&k.0).map(|(a, b)| a - b).collect()), c.conj()))
            .collect();
        let mut out = Self::from_map(self.nvars, map);
        out.declared = n.to_vec();
        Ok(out)
    }

    /// Coefficients of the powers of variable `j`, each a polynomial in the
    /// remaining `nvars - 1` variables (order of the others preserved).
    pub fn coefficients_in(&self, j: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(j) as usize;
        let mut out: Vec<BTreeMap<MultiIndex, GaussianRational>> = vec![BTreeMap::new(); deg + 1];
        for (k, c) in &self.terms {
            let mut rest = k.0.clone();
            let e = rest.remove(j) as usize;
            out[e].insert(MultiIndex(rest), c.clone());
        }
        out.into_iter().map(|m| Self::from_map(self.nvars - 1, m)).collect()
    }

    /// Inverse of [`coefficients_in`] for the last variable:
    /// `sum_k coeffs[k] * z_last^k`.
    pub fn from_last_coefficients(coeffs: &[MultiPoly]) -> Self {
        let inner = coeffs.first().map(|c| c.nvars).unwrap_or(0);
        let mut map = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            assert_eq!(c.nvars, inner, "coefficient polynomials must share nvars");
            for (idx, v) in &c.terms {
                let mut e = idx.0.clone();
                e.push(k as u32);
                map.insert(MultiIndex(e), v.clone());
            }
        }
        Self::from_map(inner + 1, map)
    }

    /// Appends `extra` variables that do not occur.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let map = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut e = k.0.clone();
                e.extend(std::iter::repeat_n(0, extra));
                (MultiIndex(e), c.clone())
            })
            .collect();
        let mut out = Self::from_map(self.nvars + extra, map);
        out.declared = self.declared.iter().copied().chain(std::iter::repeat_n(0, extra)).collect();
        out
    }

    /// Largest monomial `z^m` dividing every term.
    pub fn monomial_content(&self) -> Vec<u32> {
        if self.is_zero() {
            return vec![0; self.nvars];
        }
        (0..self.nvars)
            .map(|j| self.terms.keys().map(|k| k.0[j]).min().unwrap_or(0))
            .collect()
    }

    /// Divides by the monomial `z^m`, which must divide every term.
    pub fn div_monomial(&self, m: &[u32]) -> Result<Self, PolyError> {
        let mut map = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.0.iter().zip(m).any(|(a, b)| a < b) {
                return Err(PolyError::NotDivisible);
            }
            map.insert(MultiIndex(k.0.iter().zip(m).map(|(a, b)| a - b).collect()), c.clone());
        }
        Ok(Self::from_map(self.nvars, map))
    }

    /// Exact division by a polynomial; errors unless the division is exact.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_nvars(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        // Multivariate division with lexicographic leading terms; exactness
        // means the remainder must come out zero.
        let lead = |p: &MultiPoly| p.terms.iter().next_back().map(|(k, c)| (k.clone(), c.clone()));
        let (dk, dc) = lead(divisor).expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rk, rc)) = lead(&rem) {
            if rk.0.iter().zip(&dk.0).any(|(a, b)| a < b) {
                return Err(PolyError::NotDivisible);
            }
            let e: Vec<u32> = rk.0.iter().zip(&dk.0).map(|(a, b)| a - b).collect();
            let t = Self::monomial(self.nvars, e, &rc / &dc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Leading coefficient in lexicographic order (last variable most significant
    /// position in the exponent vector comparison).
    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.terms.values().next_back()
    }

    /// Terms in printing order.
    fn graded_terms(&self) -> Vec<(&MultiIndex, &GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.graded_cmp(b.0));
        v
    }

    /// Prints with a custom variable naming (`z1, z2, ...` by default).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayPoly { poly: self, names }
    }
}

fn max_vec(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

struct DisplayPoly<'a> {
    poly: &'a MultiPoly,
    names: &'a [String],
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.poly.graded_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (k, c)) in terms.into_iter().enumerate() {
            let negative_real = c.im.is_zero() && c.re.is_negative();
            let pure_neg_imag = c.re.is_zero() && c.im.is_negative();
            let (sign_neg, mag) = if negative_real || pure_neg_imag { (true, -c) } else { (false, c.clone()) };
            if pos == 0 {
                if sign_neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if sign_neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = k
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        self.names[j].clone()
                    } else {
                        format!("{}^{}", self.names[j], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    let s = mag.to_string();
                    // A bare rational coefficient needs parentheses so that
                    // `1/2*z1` is not misread as `1/(2*z1)` by a reader.
                    if s.contains('/') && !s.starts_with('(') {
                        write!(f, "({})*", s)?;
                    } else {
                        write!(f, "{}*", s)?;
                    }
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|j| format!("z{j}")).collect();
        let shown = DisplayPoly { poly: self, names: &names };
        write!(f, "{shown}")
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a> $tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            /// Panics when the variable counts differ; use the `try_` form to handle that case.
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                self.$try(rhs).expect("polynomial nvars mismatch")
            }
        }
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$try(&rhs).expect("polynomial nvars mismatch")
            }
        }
    };
}
poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    /// 2 - z1 - z2
    fn phi_den() -> MultiPoly {
        MultiPoly::from_int_terms(2, &[(&[0, 0], 2), (&[1, 0], -1), (&[0, 1], -1)])
    }

    #[test]
    fn addition_cancels_to_constant() {
        let a = phi_den();
        let b = MultiPoly::from_int_terms(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(&a + &b, MultiPoly::constant(2, gr(2)));
    }

    #[test]
    fn difference_of_squares() {
        let z = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        let prod = &(&z - &one) * &(&z + &one);
        assert_eq!(prod, MultiPoly::from_int_terms(1, &[(&[2], 1), (&[0], -1)]));
    }

    #[test]
    fn bidisk_slice_determinant_expansion() {
        // (2ζ−1)(2−ζ) − (−ζ)(−1) = −2ζ² + 4ζ − 2
        let z = MultiPoly::var(1, 0);
        let c = |n| MultiPoly::constant(1, gr(n));
        let det = &(&(&z.scale(&gr(2)) - &c(1)) * &(&c(2) - &z)) - &(&(-&z) * &c(-1));
        assert_eq!(det, MultiPoly::from_int_terms(1, &[(&[2], -2), (&[1], 4), (&[0], -2)]));
    }

    #[test]
    fn nvars_mismatch_is_an_error() {
        let a = MultiPoly::var(1, 0);
        let b = MultiPoly::var(2, 0);
        assert!(matches!(a.try_add(&b), Err(PolyError::NvarsMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(PolyError::NvarsMismatch { .. })));
    }

    #[test]
    fn evaluation_exact_and_float() {
        let p = phi_den();
        assert!(p.eval(&[gr(1), gr(1)]).unwrap().is_zero());
        assert_eq!(MultiPoly::one(3).eval(&[gr(5), gr(7), gr(-2)]).unwrap(), gr(1));
        // −2(ζ−1)² at ζ = i is 4i
        let q = MultiPoly::from_int_terms(1, &[(&[2], -2), (&[1], 4), (&[0], -2)]);
        assert_eq!(q.eval(&[GaussianRational::i()]).unwrap(), GaussianRational::from_parts(0, 4, 1));
        let f = q.eval(&[Complex64::new(0.0, 1.0)]).unwrap();
        assert!((f - Complex64::new(0.0, 4.0)).norm() < 1e-14);
        assert!(matches!(p.eval(&[gr(1)]), Err(PolyError::PointLength { .. })));
    }

    #[test]
    fn reflection_of_bidisk_denominator() {
        let r = phi_den().reflect(&[1, 1]).unwrap();
        assert_eq!(r, MultiPoly::from_int_terms(2, &[(&[1, 1], 2), (&[1, 0], -1), (&[0, 1], -1)]));
    }

    #[test]
    fn reflection_of_pascoe_denominator() {
        let p = MultiPoly::from_int_terms(
            2,
            &[(&[0, 0], 4), (&[0, 1], 1), (&[1, 1], -1), (&[2, 1], 3), (&[3, 1], 1)],
        );
        let expected = MultiPoly::from_int_terms(
            2,
            &[(&[3, 1], 4), (&[3, 0], 1), (&[2, 0], -1), (&[1, 0], 3), (&[0, 0], 1)],
        );
        assert_eq!(p.reflect(&[3, 1]).unwrap(), expected);
    }

    #[test]
    fn reflection_rejects_small_polydegree() {
        let p = MultiPoly::var(2, 0).pow(2);
        assert!(matches!(p.reflect(&[1, 1]), Err(PolyError::DegreeExceeds { var: 1, .. })));
    }

    #[test]
    fn coefficient_split_and_rebuild() {
        let p = MultiPoly::from_int_terms(
            2,
            &[(&[0, 0], 4), (&[0, 1], 1), (&[1, 1], -1), (&[2, 1], 3), (&[3, 1], 1)],
        );
        let parts = p.coefficients_in(1);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], MultiPoly::constant(1, gr(4)));
        assert_eq!(MultiPoly::from_last_coefficients(&parts), p);
    }

    #[test]
    fn exact_division() {
        let z = MultiPoly::var(2, 0);
        let w = MultiPoly::var(2, 1);
        let a = &z - &w;
        let b = &(&z * &w) + &MultiPoly::constant(2, gr(3));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(matches!(b.div_exact(&a), Err(PolyError::NotDivisible)));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(phi_den().to_string(), "2 - z1 - z2");
        let p = MultiPoly::from_terms(
            2,
            [(vec![2, 0], GaussianRational::from_ratio(1, 2)), (vec![0, 1], GaussianRational::i())],
        );
        assert_eq!(p.to_string(), "i*z2 + (1/2)*z1^2");
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
    }
}
