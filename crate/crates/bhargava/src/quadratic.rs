//! Closed-form Bhargava factorials for quadratic images, the content
//! normalization g_f, ratio bounds, Stirling asymptotics, the Daiz
//! constant, and the power-map analyses.

use num_integer::Integer;
use num_rational::Ratio;

use crate::arith::{
    legendre_k, primes_up_to, FactoredInteger,
};
use crate::error::{Error, Result};
use crate::pordering::{brute_factorial, BruteFactorial};
use crate::subsets::{Poly, SetSpec};

/// A quadratic normalized to f(x) = g (a2 x^2 + a1 x) + a0 with g >= 1 and
/// gcd(a1, a2) = 1 (gcd(0, a2) = |a2|, so a1 = 0 forces |a2| = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadNormalForm {
    pub g: u64,
    pub a2: i64,
    pub a1: i64,
    pub a0: i64,
}

impl QuadNormalForm {
    /// The denoted polynomial g*a2 x^2 + g*a1 x + a0.
    pub fn poly(&self) -> Poly {
        Poly::new(vec![
            self.a0,
            self.g as i64 * self.a1,
            self.g as i64 * self.a2,
        ])
    }
}

/// Ratio-bound report: log of l!_{f(Z)} / (g^l (2l)!) against the
/// closed-form lower and upper bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub l: u64,
    pub ratio_log: f64,
    pub lower_log: f64,
    pub upper_log: f64,
    pub satisfied: bool,
}

pub const BOUNDS_EPSILON: f64 = 1e-9;

/// Factor the content g = gcd(|A2|, |A1|) out of A2 x^2 + A1 x + A0.
pub fn normalize_quadratic(big_a2: i64, big_a1: i64, big_a0: i64) -> Result<QuadNormalForm> {
    if big_a2 == 0 {
        return Err(Error::InvalidArgument(
            "a quadratic needs a nonzero leading coefficient".into(),
        ));
    }
    let g = big_a2.unsigned_abs().gcd(&big_a1.unsigned_abs());
    Ok(QuadNormalForm {
        g,
        a2: big_a2 / g as i64,
        a1: big_a1 / g as i64,
        a0: big_a0,
    })
}

/// The closed-form factorial
/// g^l * prod_{p | a2} p^{k(p,l)} * prod_{p !| a2} p^{k(p,2l)} * 2^{-delta},
/// delta = 1 iff 2 | a1 and 2 !| a2.
pub fn closed_form_factorial(q: &QuadNormalForm, l: u64) -> FactoredInteger {
    if l == 0 {
        return FactoredInteger::one();
    }
    let mut out = FactoredInteger::from_u64(q.g).expect("g >= 1").pow(l as i64);
    let a2 = q.a2.unsigned_abs();
    for p in primes_up_to(2 * l) {
        let e = if a2 % p == 0 {
            legendre_k(p, l)
        } else {
            legendre_k(p, 2 * l)
        } as i64;
        out.set_exponent(p, out.exponent(p) + e);
    }
    if q.a1 % 2 == 0 && q.a2 % 2 != 0 {
        out.set_exponent(2, out.exponent(2) - 1);
    }
    out
}

/// The explicit |a2| <= 2 formulas: |a2| = 1 gives g^l (2l)! or
/// g^l (2l)!/2 by the parity of a1; |a2| = 2 gives g^l (2l)! 2^{-l}.
pub fn special_case_factorial(q: &QuadNormalForm, l: u64) -> Result<FactoredInteger> {
    if q.a2.unsigned_abs() > 2 {
        return Err(Error::OutOfDomain(format!(
            "|a2| = {} exceeds 2",
            q.a2.unsigned_abs()
        )));
    }
    if l == 0 {
        return Ok(FactoredInteger::one());
    }
    let base = FactoredInteger::from_u64(q.g)
        .expect("g >= 1")
        .pow(l as i64)
        .multiply(&crate::arith::ordinary_factorial_factored(2 * l));
    let out = match q.a2.unsigned_abs() {
        1 => {
            if q.a1 % 2 != 0 {
                base
            } else {
                base.divide(&FactoredInteger::from_prime_power(2, 1))
            }
        }
        2 => base.divide(&FactoredInteger::from_prime_power(2, l as i64)),
        _ => unreachable!(),
    };
    Ok(out)
}

/// Check l!_{f(Z)} / (g^l (2l)!) against the proposition's bounds, in log
/// space with epsilon 1e-9.
pub fn ratio_bounds_check(q: &QuadNormalForm, l: u64) -> BoundsReport {
    assert!(l >= 1);
    let factorial = closed_form_factorial(q, l);
    let denom = FactoredInteger::from_u64(q.g)
        .expect("g >= 1")
        .pow(l as i64)
        .multiply(&crate::arith::ordinary_factorial_factored(2 * l));
    let ratio_log = factorial.divide(&denom).log();
    let mut lower_log = -std::f64::consts::LN_2;
    let mut upper_log = 0.0;
    for &p in FactoredInteger::from_u64(q.a2.unsigned_abs())
        .expect("a2 != 0")
        .factors()
        .keys()
    {
        let lp = (p as f64).ln();
        lower_log -= 2.0 * l as f64 / p as f64 * lp;
        upper_log += (-(l as f64) / p as f64 + 1.0) * lp;
    }
    let satisfied =
        lower_log - BOUNDS_EPSILON <= ratio_log && ratio_log <= upper_log + BOUNDS_EPSILON;
    BoundsReport {
        l,
        ratio_log,
        lower_log,
        upper_log,
        satisfied,
    }
}

/// log l!_{f(Z)} / (2l log 2l), which tends to 1.
pub fn stirling_ratio(q: &QuadNormalForm, l: u64) -> f64 {
    assert!(l >= 2);
    closed_form_factorial(q, l).log() / (2.0 * l as f64 * (2.0 * l as f64).ln())
}

/// Partial sum of C = sum over primes of log p / (p-1)^2, up to B.
pub fn daiz_constant(prime_bound: u64) -> f64 {
    assert!(prime_bound >= 2);
    primes_up_to(prime_bound)
        .into_iter()
        .map(|p| (p as f64).ln() / ((p - 1) as f64 * (p - 1) as f64))
        .sum()
}

/// #Im(x -> x^n) on (Z/p)^* = (p-1)/gcd(p-1, n), for odd p not dividing n.
/// Cross-checked against direct enumeration for moderate p.
pub fn power_image_size(n: u64, p: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument("power map needs n >= 2".into()));
    }
    if p == 2 || !crate::arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    if n % p == 0 {
        return Err(Error::OutOfDomain(format!("{p} divides the exponent {n}")));
    }
    let size = (p - 1) / (p - 1).gcd(&n);
    if p <= 10_000 {
        let mut image = std::collections::BTreeSet::new();
        for a in 1..p {
            image.insert(crate::arith::mod_pow(a, n, p));
        }
        debug_assert_eq!(image.len() as u64, size);
    }
    Ok(size)
}

/// Closed form of the geometric bound sum: g l p / (p-1)^2 with
/// g = gcd(p-1, n), as an exact rational.
pub fn power_estimate_bound(n: u64, p: u64, l: u64) -> Result<Ratio<u64>> {
    if n % p == 0 {
        return Err(Error::OutOfDomain(format!("{p} divides the exponent {n}")));
    }
    let g = (p - 1).gcd(&n);
    Ok(Ratio::new(g * l * p, (p - 1) * (p - 1)))
}

/// The identity v_p(l!_{S(n)}) = v_p((nl)!) at primes p with n | (p-1),
/// verified by brute force. Errors if the hypothesis fails; the inner
/// stabilization flag is required to be true.
pub fn fares_johnson_check(n: u64, p: u64, l: u64) -> Result<bool> {
    if (p - 1) % n != 0 {
        return Err(Error::OutOfDomain(format!("{n} does not divide {p} - 1")));
    }
    let vp = brute_power_valuation(n, p, l)?;
    Ok(vp == legendre_k(p, n * l))
}

/// The strict inequality v_p(l!_{S(n)}) < g l p / (p-1)^2 at primes with
/// gcd(p-1, n) <= 2, verified by brute force in exact arithmetic.
pub fn power_estimate_verify(n: u64, p: u64, l: u64) -> Result<bool> {
    if p == 2 || (p - 1).gcd(&n) > 2 || n % p == 0 {
        return Err(Error::OutOfDomain(format!(
            "p = {p} is not a Q_{n} prime coprime to {n}"
        )));
    }
    let vp = brute_power_valuation(n, p, l)?;
    let bound = power_estimate_bound(n, p, l)?;
    // vp < g l p / (p-1)^2  <=>  vp (p-1)^2 < g l p.
    Ok(Ratio::from_integer(vp) < bound)
}

fn brute_power_valuation(n: u64, p: u64, l: u64) -> Result<u64> {
    let mut coeffs = vec![0i64; n as usize + 1];
    coeffs[n as usize] = 1;
    let s = SetSpec::poly_image(Poly::new(coeffs))?;
    let BruteFactorial { value, stabilized } = brute_factorial(&s, l as usize)?;
    if !stabilized {
        return Err(Error::NotStabilized {
            ceiling: crate::pordering::DEFAULT_TRUNCATION_CEILING,
        });
    }
    Ok(value.exponent(p) as u64)
}
