//! One-variable algorithms over the Gaussian rationals: Euclidean GCD, Yun's
//! square-free decomposition and unit-circle root location with exact
//! multiplicities.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::point::UnitCoord;
use super::scalar::GaussianRational;
use super::{MultiPoly, PolyError};

/// Roots with `||r| - 1|` at or below this are classified as unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-10;
/// Roots closer than this to the circle but outside [`UNIMODULAR_TOL`] are
/// reported as ambiguous.
const AMBIGUOUS_TOL: f64 = 1e-6;

type Dense = Vec<GaussianRational>;

fn to_dense(p: &MultiPoly) -> Result<Dense, PolyError> {
    if p.nvars() != 1 {
        return Err(PolyError::NotUnivariate(p.nvars()));
    }
    let mut v = vec![GaussianRational::zero(); p.degree_in(0) as usize + 1];
    for (k, c) in p.terms() {
        v[k.0[0] as usize] = c.clone();
    }
    trim(&mut v);
    Ok(v)
}

fn from_dense(v: &[GaussianRational]) -> MultiPoly {
    MultiPoly::from_terms(1, v.iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())))
}

fn trim(v: &mut Dense) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn make_monic(v: &mut Dense) {
    if let Some(lc) = v.last().cloned() {
        let inv = lc.inv().expect("trimmed polynomial has nonzero leading coefficient");
        for c in v.iter_mut() {
            *c *= &inv;
        }
    }
}

fn derivative(v: &[GaussianRational]) -> Dense {
    let mut out: Dense = v
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &GaussianRational::from_int(k as i64))
        .collect();
    trim(&mut out);
    out
}

fn sub(a: &[GaussianRational], b: &[GaussianRational]) -> Dense {
    let n = a.len().max(b.len());
    let zero = GaussianRational::zero();
    let mut out: Dense = (0..n)
        .map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero and trimmed.
fn div_rem(a: &[GaussianRational], b: &[GaussianRational]) -> (Dense, Dense) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let inv_lc = b[db].inv().expect("nonzero leading coefficient");
    let mut quot = vec![GaussianRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let q = &rem[rem.len() - 1] * &inv_lc;
        for (k, bc) in b.iter().enumerate() {
            let t = &q * bc;
            rem[shift + k] -= &t;
        }
        quot[shift] = q;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn gcd_dense(a: &[GaussianRational], b: &[GaussianRational]) -> Dense {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&mut x);
    x
}

/// Monic greatest common divisor of two univariate polynomials.
pub fn gcd_univariate(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, PolyError> {
    let (da, db) = (to_dense(a)?, to_dense(b)?);
    if da.is_empty() && db.is_empty() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(from_dense(&gcd_dense(&da, &db)))
}

/// Polynomial remainder of `a` modulo nonzero `b`.
pub fn rem_univariate(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, PolyError> {
    let (da, db) = (to_dense(a)?, to_dense(b)?);
    if db.is_empty() {
        return Err(PolyError::DivisionByZero);
    }
    Ok(from_dense(&div_rem(&da, &db).1))
}

/// Square-free decomposition `a = c * prod f_i^i` (Yun). Factors are monic
/// and returned in increasing multiplicity; the unit `c` is dropped.
pub fn squarefree_decompose(a: &MultiPoly) -> Result<Vec<(MultiPoly, u32)>, PolyError> {
    let f = to_dense(a)?;
    if f.is_empty() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(yun(&f).into_iter().map(|(p, m)| (from_dense(&p), m)).collect())
}

fn yun(f: &[GaussianRational]) -> Vec<(Dense, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = derivative(f);
    let a0 = gcd_dense(f, &df);
    let mut b = div_rem(f, &a0).0;
    let c = div_rem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = gcd_dense(&b, &d);
        let nb = div_rem(&b, &a).0;
        let nc = div_rem(&d, &a).0;
        if a.len() > 1 {
            out.push((a, i));
        }
        d = sub(&nc, &derivative(&nb));
        b = nb;
        i += 1;
    }
    out
}

/// A root on the unit circle with its exact multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleRoot {
    pub root: UnitCoord,
    pub multiplicity: u32,
}

/// Unit-circle roots plus any near-miss diagnostics.
#[derive(Clone, Debug, Default)]
pub struct CircleRoots {
    pub roots: Vec<CircleRoot>,
    pub warnings: Vec<String>,
}

/// All roots of modulus one, with multiplicities from the square-free chain.
///
/// Roots at `1, -1, i, -i` are certified by exact evaluation and divided out;
/// the rest of each square-free factor is solved numerically and Newton
/// polished. Output is sorted by angle in `[0, 2pi)`.
pub fn roots_on_unit_circle(a: &MultiPoly) -> Result<CircleRoots, PolyError> {
    let f = to_dense(a)?;
    if f.is_empty() {
        return Err(PolyError::ZeroPolynomial);
    }
    let special = [
        GaussianRational::one(),
        GaussianRational::from_int(-1),
        GaussianRational::i(),
        -GaussianRational::i(),
    ];
    let mut out = CircleRoots::default();
    for (mut factor, mult) in yun(&f) {
        for u in &special {
            if horner(&factor, u).is_zero() {
                let lin = vec![-u, GaussianRational::one()];
                factor = div_rem(&factor, &lin).0;
                out.roots.push(CircleRoot { root: UnitCoord::Exact(u.clone()), multiplicity: mult });
            }
        }
        if factor.len() <= 1 {
            continue;
        }
        let coeffs: Vec<Complex64> = factor.iter().map(GaussianRational::to_c64).collect();
        for r in polynomial_roots(&coeffs) {
            let dev = (r.norm() - 1.0).abs();
            if dev <= UNIMODULAR_TOL {
                out.roots.push(CircleRoot { root: UnitCoord::Angle(r.arg()), multiplicity: mult });
            } else if dev <= AMBIGUOUS_TOL {
                out.warnings.push(format!(
                    "root {:.3e}{:+.3e}i of multiplicity {} lies {:.1e} from the unit circle; not classified",
                    r.re, r.im, mult, dev
                ));
            }
        }
    }
    out.roots.sort_by(|x, y| x.root.angle().total_cmp(&y.root.angle()));
    Ok(out)
}

fn horner(v: &[GaussianRational], x: &GaussianRational) -> GaussianRational {
    v.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
}

fn horner_c(v: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in v.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial with coefficients in increasing degree
/// order (leading coefficient nonzero), by Aberth–Ehrlich iteration followed by
/// a Newton polish.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lc = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lc).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    // Start on a circle whose radius is the geometric mean of the root moduli,
    // with an irrational angular offset to avoid symmetric stalls.
    let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner_c(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner_c(&monic, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(coeffs: &[i64]) -> MultiPoly {
        MultiPoly::from_terms(
            1,
            coeffs.iter().enumerate().map(|(k, &c)| (vec![k as u32], GaussianRational::from_int(c))),
        )
    }

    fn z_minus(c: i64) -> MultiPoly {
        up(&[-c, 1])
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_univariate(&up(&[-1, 0, 1]), &z_minus(1)).unwrap(), z_minus(1));
        // (4ζ−1)(ζ−1) and 3(ζ−1)
        let a = &up(&[-1, 4]) * &z_minus(1);
        let b = z_minus(1).scale(&GaussianRational::from_int(3));
        assert_eq!(gcd_univariate(&a, &b).unwrap(), z_minus(1));
        assert_eq!(gcd_univariate(&up(&[1, 1]), &z_minus(1)).unwrap(), up(&[1]));
    }

    #[test]
    fn gcd_of_two_zeros_fails() {
        assert!(matches!(
            gcd_univariate(&MultiPoly::zero(1), &MultiPoly::zero(1)),
            Err(PolyError::ZeroPolynomial)
        ));
        assert_eq!(gcd_univariate(&MultiPoly::zero(1), &up(&[2, 2])).unwrap(), up(&[1, 1]));
        assert!(matches!(
            gcd_univariate(&MultiPoly::var(2, 0), &up(&[1])),
            Err(PolyError::NotUnivariate(2))
        ));
    }

    #[test]
    fn squarefree_pascoe_determinant() {
        // −(ζ−1)²(ζ+1)⁴
        let p = -(&z_minus(1).pow(2) * &up(&[1, 1]).pow(4));
        let sf = squarefree_decompose(&p).unwrap();
        assert_eq!(sf, vec![(z_minus(1), 2), (up(&[1, 1]), 4)]);
    }

    #[test]
    fn squarefree_simple_cases() {
        assert_eq!(squarefree_decompose(&z_minus(1)).unwrap(), vec![(z_minus(1), 1)]);
        let p = z_minus(1).pow(2).scale(&GaussianRational::from_int(-2));
        assert_eq!(squarefree_decompose(&p).unwrap(), vec![(z_minus(1), 2)]);
        assert!(squarefree_decompose(&up(&[5])).unwrap().is_empty());
        assert!(matches!(squarefree_decompose(&MultiPoly::zero(1)), Err(PolyError::ZeroPolynomial)));
    }

    #[test]
    fn unit_circle_roots_exact_multiplicities() {
        let p = -(&z_minus(1).pow(2) * &up(&[1, 1]).pow(4));
        let r = roots_on_unit_circle(&p).unwrap();
        assert_eq!(
            r.roots,
            vec![
                CircleRoot { root: UnitCoord::Exact(GaussianRational::one()), multiplicity: 2 },
                CircleRoot { root: UnitCoord::Exact(GaussianRational::from_int(-1)), multiplicity: 4 },
            ]
        );
        assert!(roots_on_unit_circle(&z_minus(2)).unwrap().roots.is_empty());
        let q = z_minus(1).pow(2).scale(&GaussianRational::from_int(-2));
        let rq = roots_on_unit_circle(&q).unwrap();
        assert_eq!(rq.roots.len(), 1);
        assert_eq!(rq.roots[0].multiplicity, 2);
    }

    #[test]
    fn nonspecial_unit_roots_are_found_numerically() {
        // ζ² − ζ + 1 has roots e^{±iπ/3}; cubed multiplicity 3.
        let p = up(&[1, -1, 1]).pow(3);
        let r = roots_on_unit_circle(&p).unwrap();
        assert_eq!(r.roots.len(), 2);
        for root in &r.roots {
            assert_eq!(root.multiplicity, 3);
            let a = root.root.angle();
            let d = (a - std::f64::consts::FRAC_PI_3).abs().min((a - 5.0 * std::f64::consts::FRAC_PI_3).abs());
            assert!(d < 1e-13, "angle {a}");
        }
    }

    #[test]
    fn aberth_finds_all_roots() {
        let roots = [Complex64::new(0.5, 0.1), Complex64::new(-2.0, 1.0), Complex64::new(0.0, -3.0)];
        // Expand prod (z − r)
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        let found = polynomial_roots(&c);
        for r in roots {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-12));
        }
    }
}
