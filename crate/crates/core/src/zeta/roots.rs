//! Complex roots of integer polynomials, for purity checks.
//!
//! Repeated roots are removed exactly (division by `gcd(P, P')` over Q)
//! before Aberth-Ehrlich iteration in double precision, so every root handed
//! to the iteration is simple and converges at full accuracy.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{IntPoly, ZetaError};

pub const DEFAULT_PURITY_TOL: f64 = 1e-8;

const MAX_ITER: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityReport {
    /// `max | |t| q^(w/2) - 1 |` over the roots t of P.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub distinct_roots: usize,
    pub passed: bool,
}

/// Check that every reciprocal root of `p` has absolute value `q^(w/2)`.
pub fn weight_purity_check(
    p: &IntPoly,
    q: u64,
    weight: u32,
    tol: f64,
) -> Result<PurityReport, ZetaError> {
    let sqf = squarefree_part(p);
    let scale = (q as f64).sqrt().powi(weight as i32);
    // roots of P(z / q^(w/2)) should lie on the unit circle
    let mut factor = 1.0;
    let coeffs: Vec<f64> = sqf
        .iter()
        .map(|c| {
            let v = to_f64(c) / factor;
            factor *= scale;
            v
        })
        .collect();
    let roots = aberth(&coeffs)?;
    let max_deviation = roots
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(PurityReport {
        max_deviation,
        tolerance: tol,
        distinct_roots: roots.len(),
        passed: max_deviation <= tol,
    })
}

/// Distinct complex roots of `p`.
pub fn complex_roots(p: &IntPoly) -> Result<Vec<Complex64>, ZetaError> {
    let coeffs: Vec<f64> = squarefree_part(p).iter().map(to_f64).collect();
    aberth(&coeffs)
}

/// Largest distance from a root of `p` to the nearer of +1 and -1.
pub fn sign_root_deviation(p: &IntPoly) -> Result<f64, ZetaError> {
    Ok(complex_roots(p)?
        .iter()
        .map(|z| (z - 1.0).norm().min((z + 1.0).norm()))
        .fold(0.0, f64::max))
}

fn to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

type QPoly = Vec<BigRational>;

fn trim(a: &mut QPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let c = r.last().expect("nonempty") / &lead;
        let shift = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor").clone();
    let mut quot = vec![BigRational::zero(); a.len() + 1 - b.len()];
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().expect("nonempty") / &lead;
        let shift = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        r.pop();
        trim(&mut r);
    }
    quot
}

fn monic(mut a: QPoly) -> QPoly {
    let lead = a.last().expect("nonzero").clone();
    for c in a.iter_mut() {
        *c /= &lead;
    }
    a
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { monic(r) };
    }
    monic(x)
}

/// `P / gcd(P, P')`, scaled to a primitive integer polynomial.
fn squarefree_part(p: &IntPoly) -> Vec<BigInt> {
    let a: QPoly = p
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    if a.len() <= 2 {
        return p.coeffs().to_vec();
    }
    let da: QPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    let g = gcd(&a, &da);
    let s = div_exact(&a, &g);
    let denom_lcm = s.iter().fold(BigInt::one(), |acc, c| {
        num_integer::lcm(acc, c.denom().clone())
    });
    let ints: Vec<BigInt> = s.iter().map(|c| (c * &denom_lcm).to_integer()).collect();
    let mut content = ints
        .iter()
        .fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.clone()));
    if ints[0].is_negative() {
        content = -content;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::zero();
    let mut der = Complex64::zero();
    for &c in coeffs.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

/// All roots of a polynomial with simple roots, lowest coefficient first.
fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>, ZetaError> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d];
    let a: Vec<Complex64> = coeffs
        .iter()
        .map(|&c| Complex64::new(c / lead, 0.0))
        .collect();
    if a.iter().any(|c| !c.re.is_finite()) || a[0].is_zero() {
        return Err(ZetaError::RootFindingFailure);
    }
    let radius = a[0].norm().powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let (v, dv) = horner(&a, z[i]);
            if v.is_zero() {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            z[i] -= step;
            worst = worst.max(step.norm() / (1.0 + z[i].norm()));
        }
        if !worst.is_finite() {
            return Err(ZetaError::RootFindingFailure);
        }
        if worst < 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(ZetaError::RootFindingFailure);
    }
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(&a, *root);
            if dv.is_zero() {
                break;
            }
            *root -= v / dv;
        }
    }
    if z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(ZetaError::RootFindingFailure);
    }
    Ok(z)
}
