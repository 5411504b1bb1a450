//! Declarative specifications of infinite subsets of the integers and the
//! canonical enumeration order used by the p-ordering engine.

use std::fmt;

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};

/// An integer polynomial; `coeffs[i]` is the coefficient of x^i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    /// Trailing zero coefficients are trimmed; the zero polynomial is
    /// represented by an empty coefficient list.
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: i128) -> i128 {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c as i128))
                .expect("polynomial evaluation overflowed i128");
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as i64)
            .collect();
        Poly::new(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A declarative description of a subset of the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    /// All of the integers.
    Z,
    /// The arithmetic progression { a n + b }, a != 0.
    Ap { a: i64, b: i64 },
    /// The image f(Z) of a nonconstant polynomial.
    PolyImage(Poly),
    /// The primes, ascending.
    Primes,
    /// A finite explicit list, for tests and oracles only.
    Explicit(Vec<i128>),
}

impl SetSpec {
    pub fn ap(a: i64, b: i64) -> Result<SetSpec> {
        if a == 0 {
            return Err(Error::InvalidArgument(
                "arithmetic progression requires a != 0".into(),
            ));
        }
        Ok(SetSpec::Ap { a, b })
    }

    pub fn poly_image(f: Poly) -> Result<SetSpec> {
        if f.degree() < 1 || f.coeffs().is_empty() {
            return Err(Error::InvalidArgument(
                "polynomial image requires degree >= 1".into(),
            ));
        }
        Ok(SetSpec::PolyImage(f))
    }

    pub fn explicit(values: Vec<i128>) -> Result<SetSpec> {
        let mut seen = std::collections::HashSet::new();
        for &v in &values {
            if !seen.insert(v) {
                return Err(Error::InvalidArgument(format!(
                    "explicit set has a repeated entry: {v}"
                )));
            }
        }
        Ok(SetSpec::Explicit(values))
    }

    /// Membership predicate, used by property tests.
    pub fn contains(&self, x: i128) -> bool {
        match self {
            SetSpec::Z => true,
            SetSpec::Ap { a, b } => (x - *b as i128).rem_euclid(a.unsigned_abs() as i128) == 0,
            SetSpec::PolyImage(f) => {
                // For |n| beyond the coefficient mass plus |x|, the leading
                // term dominates and |f(n)| > |x|, so a finite window suffices.
                let mass: i128 = f.coeffs().iter().map(|c| c.unsigned_abs() as i128).sum();
                let bound = x.abs() + mass + 2;
                canonical_args()
                    .take_while(|n| n.abs() <= bound)
                    .any(|n| f.eval(n) == x)
            }
            SetSpec::Primes => x > 1 && x <= u64::MAX as i128 && is_prime(x as u64),
            SetSpec::Explicit(values) => values.contains(&x),
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Z => write!(f, "Z"),
            SetSpec::Ap { a, b } => write!(f, "AP:{a},{b}"),
            SetSpec::PolyImage(p) => write!(f, "poly:{p}"),
            SetSpec::Primes => write!(f, "primes"),
            SetSpec::Explicit(values) => {
                let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "explicit:[{}]", parts.join(","))
            }
        }
    }
}

/// Parse the set-spec grammar:
/// `Z` | `AP:<a>,<b>` | `poly:[c0,c1,...,cn]` | `primes` | `explicit:[v1,...,vk]`.
pub fn parse_set_spec(text: &str) -> Result<SetSpec> {
    let text = text.trim();
    if text == "Z" {
        return Ok(SetSpec::Z);
    }
    if text == "primes" {
        return Ok(SetSpec::Primes);
    }
    if let Some(rest) = text.strip_prefix("AP:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Syntax {
                pos: 3,
                msg: "AP takes exactly two integers: AP:<a>,<b>".into(),
            });
        }
        let a = parse_int(parts[0], 3)?;
        let b = parse_int(parts[1], 3 + parts[0].len() + 1)?;
        return SetSpec::ap(a, b);
    }
    if let Some(rest) = text.strip_prefix("poly:") {
        let coeffs = parse_int_list(rest, 5)?;
        return SetSpec::poly_image(Poly::new(coeffs));
    }
    if let Some(rest) = text.strip_prefix("explicit:") {
        let values = parse_int_list(rest, 9)?;
        return SetSpec::explicit(values.into_iter().map(|v| v as i128).collect());
    }
    Err(Error::Syntax {
        pos: 0,
        msg: format!("unrecognized set spec {text:?}"),
    })
}

fn parse_int(s: &str, pos: usize) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Syntax {
        pos,
        msg: format!("expected an integer, found {s:?}"),
    })
}

fn parse_int_list(s: &str, pos: usize) -> Result<Vec<i64>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Syntax {
            pos,
            msg: "expected a bracketed list [..]".into(),
        })?;
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|part| parse_int(part, pos))
        .collect()
}

/// The canonical argument order 0, 1, -1, 2, -2, ...
fn canonical_args() -> impl Iterator<Item = i128> {
    (0i128..).flat_map(|n| if n == 0 { vec![0] } else { vec![n, -n] })
}

/// The first `m` distinct elements of `s` in canonical order.
///
/// For Z/AP/PolyImage the defining map is evaluated at arguments
/// 0, 1, -1, 2, -2, ... and repeated values are dropped; for Primes the
/// primes ascend; for Explicit the stored order is used.
pub fn enumerate_canonical(s: &SetSpec, m: usize) -> Result<Vec<i128>> {
    if m == 0 {
        return Err(Error::InvalidArgument("enumeration needs m >= 1".into()));
    }
    match s {
        SetSpec::Z => Ok(canonical_args().take(m).collect()),
        SetSpec::Ap { a, b } => Ok(canonical_args()
            .map(|n| *a as i128 * n + *b as i128)
            .take(m)
            .collect()),
        SetSpec::PolyImage(f) => {
            let mut seen = std::collections::HashSet::with_capacity(m * 2);
            let mut out = Vec::with_capacity(m);
            for n in canonical_args() {
                let v = f.eval(n);
                if seen.insert(v) {
                    out.push(v);
                    if out.len() == m {
                        break;
                    }
                }
            }
            Ok(out)
        }
        SetSpec::Primes => {
            // Grow the sieve bound until it yields m primes; p_m ~ m ln m.
            let mut bound = 64u64.max((m as f64 * (m as f64).ln().max(2.0) * 1.5) as u64);
            loop {
                let primes = primes_up_to(bound);
                if primes.len() >= m {
                    return Ok(primes[..m].iter().map(|&p| p as i128).collect());
                }
                bound *= 2;
            }
        }
        SetSpec::Explicit(values) => {
            if values.len() < m {
                return Err(Error::ExhaustedSet {
                    requested: m,
                    available: values.len(),
                });
            }
            Ok(values[..m].to_vec())
        }
    }
}
