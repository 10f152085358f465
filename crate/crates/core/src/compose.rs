//! Iterates `phi^N` in the last variable by powering the slice matrix.

use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, RifError};
use crate::poly::{gcd_univariate, GaussianRational, MultiPoly, UnimodularPoint};
use crate::rif::{random_line, restrict_to_line, Rif, SliceMatrix};
use crate::stability::StabilityConfig;

#[derive(Clone, Debug)]
pub struct CompositionResult {
    /// `phi^N` after cancellation.
    pub rif: Rif,
    pub n: u32,
    /// Product of everything divided out of the four matrix entries (1 when nothing was).
    pub cancelled_factor: MultiPoly,
    pub polydegree_drop: bool,
    /// `M^N` before cancellation.
    pub matrix_power: SliceMatrix,
    /// `M^N / cancelled_factor`; its rows rebuild the numerator and denominator.
    pub reduced: SliceMatrix,
    /// For three or more variables: a common factor was seen on random line
    /// restrictions but could not be divided out.
    pub cancellation_undetected: bool,
}

impl CompositionResult {
    /// The composition keeps polydegree `(N n, 1)`.
    pub fn full_polydegree(&self, base: &Rif) -> bool {
        let expected: Vec<u32> = base
            .slice_degree()
            .iter()
            .map(|&e| e * self.n)
            .chain(std::iter::once(1))
            .collect();
        self.rif.polydegree() == expected.as_slice()
    }
}

/// `M^N` by repeated squaring.
pub fn matrix_power(m: &SliceMatrix, n: u32) -> Result<SliceMatrix> {
    if n == 0 {
        return Err(RifError::InvalidArgument("matrix power needs N >= 1".into()));
    }
    let mut acc: Option<SliceMatrix> = None;
    let mut base = m.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.mul(&base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    Ok(acc.expect("n >= 1"))
}

/// Builds `phi^N`, cancelling factors common to all four entries of `M^N`.
pub fn compose(r: &Rif, n: u32) -> Result<CompositionResult> {
    compose_with(r, n, &StabilityConfig::default())
}

pub fn compose_with(r: &Rif, n: u32, cfg: &StabilityConfig) -> Result<CompositionResult> {
    let mpow = matrix_power(&r.slice_matrix(), n)?;
    let k = r.dim() - 1;

    // Monomial content shared by all entries.
    let content: Vec<u32> = mpow
        .entries()
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.monomial_content())
        .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect())
        .unwrap_or_else(|| vec![0; k]);
    let mono = MultiPoly::monomial(k, content.clone(), GaussianRational::from_int(1));
    let mut reduced = mpow.map_entries(|e| e.div_monomial(&content).expect("content divides every entry"));
    let mut cancelled = mono;
    let mut undetected = false;

    if k == 1 {
        let g = reduced
            .entries()
            .iter()
            .skip(1)
            .try_fold(reduced.a.clone(), |acc, e| gcd_univariate(&acc, e))?;
        if !g.is_constant() {
            reduced = reduced.map_entries(|e| e.div_exact(&g).expect("gcd divides every entry"));
            cancelled = &cancelled * &g;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0_4d05e);
        undetected = (0..2).all(|_| {
            let (a, b) = random_line(&mut rng, k);
            let rs: Vec<MultiPoly> = reduced.entries().iter().map(|e| restrict_to_line(e, &a, &b)).collect();
            let g = rs[1..]
                .iter()
                .try_fold(rs[0].clone(), |acc, r| gcd_univariate(&acc, r))
                .unwrap_or_else(|_| MultiPoly::one(1));
            !g.is_constant()
        });
    }

    let (p_n, pt_n) = reduced.reconstruct();
    let d = r.dim();
    let mut polydeg: Vec<u32> = p_n.degrees().iter().zip(pt_n.degrees()).map(|(a, b)| *a.max(&b)).collect();
    if polydeg[d - 1] != 1 || p_n.degree_in(d - 1) != 1 {
        return Err(RifError::NotInner(format!("composition lost its z_d dependence: p_N = {p_n}")));
    }
    polydeg[d - 1] = 1;
    let refl = p_n.reflect(&polydeg)?;
    let unit = unit_ratio(&pt_n, &refl)
        .ok_or_else(|| RifError::NotInner("numerator is not a unimodular multiple of the reflected denominator".into()))?;
    let rif = Rif::with_config(p_n, unit, Some(polydeg), cfg).map_err(|e| RifError::NotInner(e.to_string()))?;
    debug_assert_eq!(rif.ptilde(), &pt_n);
    let polydegree_drop = !cancelled.is_constant();
    Ok(CompositionResult {
        rif,
        n,
        cancelled_factor: cancelled,
        polydegree_drop,
        matrix_power: mpow,
        reduced,
        cancellation_undetected: undetected,
    })
}

/// `lambda` with `num == lambda * den` exactly and `|lambda| = 1`.
fn unit_ratio(num: &MultiPoly, den: &MultiPoly) -> Option<GaussianRational> {
    let (idx, c) = den.terms().next()?;
    let lambda = &num.coeff(&idx.0) / c;
    if lambda.is_zero() || !lambda.is_unimodular() || den.scale(&lambda) != *num {
        return None;
    }
    Some(lambda)
}

/// Whether every entry of `M(point)^N` is nonzero (exact for exact points).
pub fn check_entries_nonzero_at(m: &SliceMatrix, n: u32, point: &UnimodularPoint) -> Result<bool> {
    if point.dim() != m.nvars() {
        return Err(crate::poly::PolyError::PointLength { expected: m.nvars(), got: point.dim() }.into());
    }
    if let Some(exact) = point.to_exact() {
        let v = m.eval(&exact)?;
        let p = pow2x2(v, n, |x, y| x * y, |x, y| x + y);
        return Ok(p.iter().all(|x| !x.is_zero()));
    }
    let v = m.eval(&point.to_c64())?;
    let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max).powi(n as i32).max(1e-300);
    let p = pow2x2(v, n, |x: &Complex64, y: &Complex64| x * y, |x, y| x + y);
    Ok(p.iter().all(|x| x.norm() > 1e-12 * scale))
}

fn pow2x2<T: Clone>(m: [T; 4], n: u32, mul: impl Fn(&T, &T) -> T, add: impl Fn(&T, &T) -> T) -> [T; 4] {
    let prod = |x: &[T; 4], y: &[T; 4]| -> [T; 4] {
        [
            add(&mul(&x[0], &y[0]), &mul(&x[1], &y[2])),
            add(&mul(&x[0], &y[1]), &mul(&x[1], &y[3])),
            add(&mul(&x[2], &y[0]), &mul(&x[3], &y[2])),
            add(&mul(&x[2], &y[1]), &mul(&x[3], &y[3])),
        ]
    };
    let mut acc = m.clone();
    for _ in 1..n {
        acc = prod(&acc, &m);
    }
    acc
}
