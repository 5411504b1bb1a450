//! Exact integer utilities: valuations, factored integers, sieving,
//! Legendre symbols and the Legendre valuation formula k(p,l).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Default cap on the number of decimal digits emitted by `render` in
/// decimal mode.
pub const DEFAULT_DIGIT_CAP: usize = 10_000;

/// A p-adic valuation: a nonnegative integer, or infinity for the
/// valuation of zero. Infinity compares greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// A positive rational represented by its prime factorization: a finite
/// map prime -> exponent with nonzero (possibly negative) exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactoredInteger {
    factors: BTreeMap<u64, i64>,
}

/// Rendering modes for `FactoredInteger::render`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    FactoredText,
    Json,
    Decimal,
}

impl FactoredInteger {
    /// The empty product, value 1.
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_prime_power(p: u64, e: i64) -> Self {
        debug_assert!(is_prime(p));
        let mut factors = BTreeMap::new();
        if e != 0 {
            factors.insert(p, e);
        }
        FactoredInteger { factors }
    }

    /// Factor a positive integer by trial division.
    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factor zero".into()));
        }
        let mut factors = BTreeMap::new();
        for (p, e) in factor_u128(n as u128) {
            factors.insert(p, e as i64);
        }
        Ok(FactoredInteger { factors })
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn set_exponent(&mut self, p: u64, e: i64) {
        debug_assert!(is_prime(p));
        if e == 0 {
            self.factors.remove(&p);
        } else {
            self.factors.insert(p, e);
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when all exponents are nonnegative, i.e. the value is an integer.
    pub fn is_integral(&self) -> bool {
        self.factors.values().all(|&e| e >= 0)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, &e) in &other.factors {
            let ne = out.exponent(p) + e;
            out.set_exponent(p, ne);
        }
        out
    }

    pub fn divide(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, &e) in &other.factors {
            let ne = out.exponent(p) - e;
            out.set_exponent(p, ne);
        }
        out
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut factors = BTreeMap::new();
        if k != 0 {
            for (&p, &e) in &self.factors {
                factors.insert(p, e * k);
            }
        }
        FactoredInteger { factors }
    }

    /// Natural log of the value, as `sum e * ln p` in double precision.
    /// Absolute error is bounded by ~1e-9 per term.
    pub fn log(&self) -> f64 {
        self.factors
            .iter()
            .map(|(&p, &e)| e as f64 * (p as f64).ln())
            .sum()
    }

    /// log10 of the value; used to bound decimal length before expansion.
    fn log10(&self) -> f64 {
        self.factors
            .iter()
            .map(|(&p, &e)| e as f64 * (p as f64).log10())
            .sum()
    }

    /// Exact decimal expansion. Fails on non-integral values or when the
    /// decimal length would exceed `digit_cap`.
    pub fn to_decimal(&self, digit_cap: usize) -> Result<String> {
        if !self.is_integral() {
            return Err(Error::UnsupportedRender(
                "value has a negative exponent and is not an integer".into(),
            ));
        }
        if self.log10() > digit_cap as f64 + 1.0 {
            return Err(Error::UnsupportedRender(format!(
                "decimal expansion exceeds the digit cap of {digit_cap}"
            )));
        }
        let mut acc = BigUint::from(1u32);
        for (&p, &e) in &self.factors {
            acc *= BigUint::from(p).pow(e as u32);
        }
        let s = acc.to_str_radix(10);
        if s.len() > digit_cap {
            return Err(Error::UnsupportedRender(format!(
                "decimal expansion exceeds the digit cap of {digit_cap}"
            )));
        }
        Ok(s)
    }

    /// JSON per the external schema: `{"factors": {"<p>": e, ...}, "decimal": "..."}`
    /// with primes in ascending numeric order and "decimal" present only
    /// when renderable under `digit_cap`.
    pub fn to_json(&self, digit_cap: usize) -> serde_json::Value {
        let mut fac = serde_json::Map::new();
        for (&p, &e) in &self.factors {
            fac.insert(p.to_string(), serde_json::Value::from(e));
        }
        let mut obj = serde_json::Map::new();
        obj.insert("factors".into(), serde_json::Value::Object(fac));
        if let Ok(dec) = self.to_decimal(digit_cap) {
            obj.insert("decimal".into(), serde_json::Value::from(dec));
        }
        serde_json::Value::Object(obj)
    }

    pub fn render(&self, mode: RenderMode, digit_cap: usize) -> Result<String> {
        match mode {
            RenderMode::Decimal => self.to_decimal(digit_cap),
            RenderMode::Json => Ok(self.to_json(digit_cap).to_string()),
            RenderMode::FactoredText => Ok(self.to_string()),
        }
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(&p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Deterministic primality by trial division; exact at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Largest e with p^e | n; infinity iff n = 0.
pub fn vp(n: i128, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(vp_unchecked(n, p))
}

/// `vp` without the primality check, for hot loops where p is known prime.
pub fn vp_unchecked(n: i128, p: u64) -> Valuation {
    if n == 0 {
        return Valuation::Infinity;
    }
    let p = p as i128;
    let mut n = n;
    let mut v = 0u64;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// The Legendre symbol (r/p) for an odd prime p: 1 for a nonzero quadratic
/// residue, -1 for a nonresidue, 0 when p | r.
pub fn legendre_symbol(r: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let rm = (r.rem_euclid(p as i64)) as u64;
    if rm == 0 {
        return Ok(0);
    }
    // Euler's criterion: r^((p-1)/2) mod p is 1 or p-1.
    let e = mod_pow(rm, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre's formula k(p,l) = sum of floor(l / p^k) = v_p(l!).
pub fn legendre_k(p: u64, l: u64) -> u64 {
    let mut total = 0u64;
    let mut q = l / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Ascending primes <= b via the sieve of Eratosthenes.
pub fn primes_up_to(b: u64) -> Vec<u64> {
    if b < 2 {
        return Vec::new();
    }
    let n = b as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The factorization of l! via Legendre's formula.
pub fn ordinary_factorial_factored(l: u64) -> FactoredInteger {
    let mut out = FactoredInteger::one();
    for p in primes_up_to(l) {
        out.set_exponent(p, legendre_k(p, l) as i64);
    }
    out
}

/// Trial-division factorization of a positive integer.
pub fn factor_u128(n: u128) -> BTreeMap<u64, u32> {
    assert!(n > 0, "factor_u128 requires a positive argument");
    let mut out = BTreeMap::new();
    let mut n = n;
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.insert(d as u64, e);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.insert(u64::try_from(n).expect("prime cofactor exceeds u64"), 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vp_examples() {
        assert_eq!(vp(12, 2).unwrap(), Valuation::Finite(2));
        assert_eq!(vp(12, 3).unwrap(), Valuation::Finite(1));
        assert_eq!(vp(0, 5).unwrap(), Valuation::Infinity);
        assert!(vp(12, 4).is_err());
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Infinity > Valuation::Finite(u64::MAX));
        assert_eq!(
            Valuation::Finite(2) + Valuation::Infinity,
            Valuation::Infinity
        );
    }

    #[test]
    fn legendre_symbol_examples() {
        assert_eq!(legendre_symbol(2, 7).unwrap(), 1);
        assert_eq!(legendre_symbol(3, 7).unwrap(), -1);
        assert_eq!(legendre_symbol(10, 5).unwrap(), 0);
        assert!(legendre_symbol(1, 2).is_err());
        assert!(legendre_symbol(1, 9).is_err());
    }

    #[test]
    fn legendre_symbol_matches_enumeration() {
        for p in primes_up_to(100) {
            if p == 2 {
                continue;
            }
            let mut squares = std::collections::BTreeSet::new();
            for a in 1..p {
                squares.insert(a * a % p);
            }
            for r in 0..p {
                let expected = if r == 0 {
                    0
                } else if squares.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(r as i64, p).unwrap(), expected, "r={r} p={p}");
            }
        }
    }

    #[test]
    fn legendre_k_examples() {
        assert_eq!(legendre_k(2, 4), 3);
        assert_eq!(legendre_k(3, 9), 4);
        assert_eq!(legendre_k(5, 4), 0);
    }

    #[test]
    fn legendre_k_equals_factorial_valuation() {
        // Independent oracle: v_p(l!) = sum of v_p(i) for i = 1..l.
        for p in primes_up_to(50) {
            let mut acc = 0u64;
            for l in 1..=200u64 {
                acc += vp_unchecked(l as i128, p).finite().unwrap();
                assert_eq!(legendre_k(p, l), acc, "p={p} l={l}");
            }
            assert_eq!(legendre_k(p, 0), 0);
        }
    }

    #[test]
    fn legendre_k_doubling_identity() {
        for l in 0..=500u64 {
            assert_eq!(legendre_k(2, 2 * l) - legendre_k(2, l), l);
        }
    }

    #[test]
    fn primes_up_to_examples() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(
            primes_up_to(30),
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
    }

    #[test]
    fn fi_arith_examples() {
        let a = FactoredInteger::from_prime_power(2, 3);
        let b = FactoredInteger::from_prime_power(2, -3);
        assert_eq!(a.multiply(&b), FactoredInteger::one());

        let c = FactoredInteger::from_u64(720).unwrap();
        assert_eq!(c.divide(&c), FactoredInteger::one());

        let d = FactoredInteger::from_u64(6).unwrap();
        let expected = FactoredInteger::from_u64(216).unwrap();
        assert_eq!(d.pow(3), expected);
    }

    #[test]
    fn fi_render_examples() {
        let a = FactoredInteger::from_u64(360).unwrap();
        assert_eq!(a.to_decimal(DEFAULT_DIGIT_CAP).unwrap(), "360");
        assert_eq!(
            FactoredInteger::one().to_decimal(DEFAULT_DIGIT_CAP).unwrap(),
            "1"
        );
        let half = FactoredInteger::from_prime_power(2, -1);
        assert!(half.to_decimal(DEFAULT_DIGIT_CAP).is_err());
    }

    #[test]
    fn fi_json_schema() {
        let a = FactoredInteger::from_u64(360).unwrap();
        assert_eq!(
            a.to_json(DEFAULT_DIGIT_CAP).to_string(),
            r#"{"factors":{"2":3,"3":2,"5":1},"decimal":"360"}"#
        );
        let half = FactoredInteger::from_prime_power(2, -1);
        assert_eq!(
            half.to_json(DEFAULT_DIGIT_CAP).to_string(),
            r#"{"factors":{"2":-1}}"#
        );
    }

    #[test]
    fn digit_cap_enforced() {
        let big = FactoredInteger::from_prime_power(2, 100_000);
        assert!(big.to_decimal(100).is_err());
        assert!(big.to_decimal(40_000).is_ok());
    }

    #[test]
    fn ordinary_factorial_examples() {
        assert_eq!(ordinary_factorial_factored(0), FactoredInteger::one());
        assert_eq!(
            ordinary_factorial_factored(6),
            FactoredInteger::from_u64(720).unwrap()
        );
        assert_eq!(
            ordinary_factorial_factored(10),
            FactoredInteger::from_u64(3_628_800).unwrap()
        );
    }

    #[test]
    fn fi_log_examples() {
        assert_eq!(FactoredInteger::one().log(), 0.0);
        assert!((FactoredInteger::from_prime_power(2, 1).log() - 2f64.ln()).abs() < 1e-12);
        let a = FactoredInteger::from_u64(360).unwrap();
        assert!((a.log() - 360f64.ln()).abs() < 1e-9);
    }
}
