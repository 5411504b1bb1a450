//! The greedy p-ordering engine: p-sequences with doubling stabilization
//! and the brute-force Bhargava factorial used as the oracle for every
//! closed form in this crate.

use std::collections::BTreeSet;

use crate::arith::{factor_u128, primes_up_to, vp_unchecked, FactoredInteger, Valuation};
use crate::error::{Error, Result};
use crate::subsets::{enumerate_canonical, SetSpec};

/// Default ceiling for the truncation-doubling loop.
pub const DEFAULT_TRUNCATION_CEILING: usize = 1 << 20;

/// Tie-breaking policy when several candidates attain the minimal
/// product valuation. `Earliest` is canonical; `Latest` exists to test
/// that the p-sequence is independent of the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    Earliest,
    Latest,
}

/// A p-ordering prefix, its p-sequence, and the truncation metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct POrderingResult {
    pub p: u64,
    pub elements: Vec<i128>,
    pub psequence: Vec<u64>,
    pub truncation_used: usize,
    pub stabilized: bool,
}

/// A brute-force Bhargava factorial together with the stabilization
/// status of every per-prime p-sequence that contributed to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteFactorial {
    pub value: FactoredInteger,
    pub stabilized: bool,
}

/// One greedy p-ordering pass over the first `m` canonical elements.
///
/// `a_0` is the first canonical element; each subsequent `a_n` minimizes
/// v_p(prod (x - a_k)) over the truncation, ties broken by canonical
/// position. The result's `stabilized` flag is left false; callers that
/// establish stability set it.
pub fn greedy_p_ordering(s: &SetSpec, p: u64, l: usize, m: usize) -> Result<POrderingResult> {
    greedy_p_ordering_with(s, p, l, m, TieBreak::Earliest)
}

pub fn greedy_p_ordering_with(
    s: &SetSpec,
    p: u64,
    l: usize,
    m: usize,
    tie: TieBreak,
) -> Result<POrderingResult> {
    if m < l + 1 {
        return Err(Error::InvalidArgument(format!(
            "truncation {m} is smaller than the requested length {}",
            l + 1
        )));
    }
    let candidates = enumerate_canonical(s, m)?;
    // acc[i] accumulates v_p(prod (candidates[i] - a_k)) over chosen a_k.
    let mut acc = vec![Valuation::Finite(0); m];
    let mut elements = Vec::with_capacity(l + 1);
    let mut psequence = Vec::with_capacity(l + 1);
    let mut last = candidates[0];
    elements.push(last);
    psequence.push(0);
    for _ in 1..=l {
        let mut best: Option<(Valuation, usize)> = None;
        for (i, (&x, slot)) in candidates.iter().zip(acc.iter_mut()).enumerate() {
            *slot = *slot + vp_unchecked(x - last, p);
            let better = match best {
                None => true,
                Some((bv, _)) => match tie {
                    TieBreak::Earliest => *slot < bv,
                    TieBreak::Latest => *slot <= bv,
                },
            };
            if better {
                best = Some((*slot, i));
            }
        }
        let (v, idx) = best.expect("truncation is nonempty");
        let v = v.finite().ok_or_else(|| {
            Error::InvalidArgument("every candidate collides with a chosen element".into())
        })?;
        last = candidates[idx];
        elements.push(last);
        psequence.push(v);
    }
    Ok(POrderingResult {
        p,
        elements,
        psequence,
        truncation_used: m,
        stabilized: false,
    })
}

/// The stabilized p-sequence of `s` at `p` up to index `l`.
///
/// Runs the greedy pass with truncation M = max(64, 4(l+1)) and doubles M
/// until two consecutive passes agree on the whole p-sequence or M would
/// exceed `ceiling`. A finite Explicit set is exact once fully consumed.
pub fn p_sequence_stable(s: &SetSpec, p: u64, l: usize) -> Result<POrderingResult> {
    p_sequence_stable_with(s, p, l, DEFAULT_TRUNCATION_CEILING)
}

pub fn p_sequence_stable_with(
    s: &SetSpec,
    p: u64,
    l: usize,
    ceiling: usize,
) -> Result<POrderingResult> {
    let mut m = 64usize.max(4 * (l + 1));
    if let SetSpec::Explicit(values) = s {
        // The whole set fits in memory; the infimum over it is exact.
        if values.len() < l + 1 {
            return Err(Error::ExhaustedSet {
                requested: l + 1,
                available: values.len(),
            });
        }
        let mut result = greedy_p_ordering(s, p, l, values.len())?;
        result.stabilized = true;
        return Ok(result);
    }
    let mut prev = greedy_p_ordering(s, p, l, m)?;
    loop {
        m *= 2;
        if m > ceiling {
            return Ok(prev); // stabilized stays false
        }
        let mut next = greedy_p_ordering(s, p, l, m)?;
        if next.psequence == prev.psequence {
            next.stabilized = true;
            return Ok(next);
        }
        prev = next;
    }
}

/// An over-approximation of the primes p with v_p(l;S) > 0: every prime
/// dividing a difference of the first l+1 canonical elements, merged with
/// a small sieve range depending on the variant.
pub fn prime_support(s: &SetSpec, l: usize) -> Result<Vec<u64>> {
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    let b = enumerate_canonical(s, l + 1)?;
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            let d = (b[j] - b[i]).unsigned_abs();
            for (p, _) in factor_u128(d) {
                primes.insert(p);
            }
        }
    }
    let bound = match s {
        SetSpec::PolyImage(f) => (f.degree() * l) as u64,
        SetSpec::Z | SetSpec::Ap { .. } => l as u64,
        _ => 2 * l as u64,
    };
    primes.extend(primes_up_to(bound));
    Ok(primes.into_iter().collect())
}

/// The Bhargava factorial of `s` at index `l`, by brute force: the product
/// over the prime support of p^{v_p(l;S)} with each valuation taken from
/// its stabilized p-sequence.
pub fn brute_factorial(s: &SetSpec, l: usize) -> Result<BruteFactorial> {
    brute_factorial_with(s, l, DEFAULT_TRUNCATION_CEILING)
}

pub fn brute_factorial_with(s: &SetSpec, l: usize, ceiling: usize) -> Result<BruteFactorial> {
    let mut value = FactoredInteger::one();
    let mut stabilized = true;
    for p in prime_support(s, l)? {
        let res = p_sequence_stable_with(s, p, l, ceiling)?;
        stabilized &= res.stabilized;
        let v = res.psequence[l];
        if v > 0 {
            value.set_exponent(p, v as i64);
        }
    }
    Ok(BruteFactorial { value, stabilized })
}
