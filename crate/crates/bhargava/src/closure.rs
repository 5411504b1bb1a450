//! p-adic closure analysis of polynomial images: critical residue sets,
//! weak-Hensel lifting, an exhaustive closure oracle mod p^K, and the
//! structural classifier for quadratic images.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::subsets::Poly;

/// Guard on exhaustive enumeration: p^K must stay below this.
pub const ENUMERATION_GUARD: u128 = 1 << 24;

/// The residue ball center + p^depth * Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResidueBall {
    pub depth: u32,
    pub center: u64,
}

/// Structural tag for a classified closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    Case1OddDepthTower,
    Case2FullRing,
    Case3UnionLevelOne,
    LemmaOddEvenTower,
    UnresolvedOracleOnly,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Case1OddDepthTower => "Case1-OddDepthTower",
            CaseTag::Case2FullRing => "Case2-FullRing",
            CaseTag::Case3UnionLevelOne => "Case3-UnionLevelOne",
            CaseTag::LemmaOddEvenTower => "Lemma-oddeven-Tower",
            CaseTag::UnresolvedOracleOnly => "Unresolved-OracleOnly",
        }
    }
}

/// A p-adic closure truncated at depth K: disjoint residue balls of depth
/// <= K plus isolated points, all as residues mod p^K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureDescription {
    pub p: u64,
    pub depth_limit: u32,
    pub case: CaseTag,
    pub balls: Vec<ResidueBall>,
    pub isolated: Vec<u64>,
}

impl ClosureDescription {
    /// All residues mod p^K covered by the description, sorted.
    pub fn expand(&self) -> Vec<u64> {
        let modulus = (self.p as u128).pow(self.depth_limit) as u64;
        let mut out = BTreeSet::new();
        for ball in &self.balls {
            let step = (self.p as u128).pow(ball.depth) as u64;
            let mut r = ball.center % step;
            while r < modulus {
                out.insert(r);
                r += step;
            }
        }
        for &r in &self.isolated {
            out.insert(r % modulus);
        }
        out.into_iter().collect()
    }

    /// JSON per the external schema, balls sorted by (depth, center).
    pub fn to_json(&self) -> serde_json::Value {
        let mut balls = self.balls.clone();
        balls.sort();
        serde_json::json!({
            "p": self.p,
            "depth": self.depth_limit,
            "case": self.case.as_str(),
            "balls": balls.iter().map(|b| serde_json::json!({
                "center": b.center,
                "depth": b.depth,
            })).collect::<Vec<_>>(),
            "isolated": self.isolated,
        })
    }
}

/// The residues mod p attained by f at points where f' is a unit (s_good,
/// the paper's S_{f,p}) and where f' vanishes (s_bad, S^-_{f,p}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalSets {
    pub p: u64,
    pub s_good: BTreeSet<u64>,
    pub s_bad: BTreeSet<u64>,
}

/// f(x) mod m by Horner with reduction at each step.
pub fn poly_eval_mod(f: &Poly, x: u64, m: u64) -> u64 {
    debug_assert!(m >= 2);
    let m128 = m as u128;
    let x128 = x as u128 % m128;
    let mut acc: u128 = 0;
    for &c in f.coeffs().iter().rev() {
        let c = (c.rem_euclid(m as i64)) as u128;
        acc = (acc * x128 + c) % m128;
    }
    acc as u64
}

pub fn critical_sets(f: &Poly, p: u64) -> Result<CriticalSets> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if f.degree() < 1 {
        return Err(Error::InvalidArgument("critical sets need deg f >= 1".into()));
    }
    let df = f.derivative();
    let mut s_good = BTreeSet::new();
    let mut s_bad = BTreeSet::new();
    for b in 0..p {
        let value = poly_eval_mod(f, b, p);
        if poly_eval_mod(&df, b, p) == 0 {
            s_bad.insert(value);
        } else {
            s_good.insert(value);
        }
    }
    Ok(CriticalSets { p, s_good, s_bad })
}

/// Lift a simple root: returns x with f(x) = target mod p^k and
/// x = seed mod p, one p-digit at a time.
pub fn hensel_solve(f: &Poly, target: u64, p: u64, k: u32, seed: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let modulus = (p as u128)
        .checked_pow(k)
        .filter(|&m| m <= u64::MAX as u128)
        .ok_or_else(|| Error::InvalidArgument("p^k exceeds u64".into()))? as u64;
    let df = f.derivative();
    let fp = poly_eval_mod(&df, seed % p, p);
    if fp == 0 || poly_eval_mod(f, seed % p, p) != target % p {
        return Err(Error::NoSimpleRoot(format!(
            "seed {seed} is not a simple root of f = {target} mod {p}"
        )));
    }
    let inv = mod_inverse(fp, p);
    let mut x = seed % p;
    let mut step = p;
    while step < modulus {
        // Solve f'(seed) * t = (target - f(x)) / step mod p.
        let fx = poly_eval_mod(f, x, step * p);
        let rhs = (target % (step * p) + step * p - fx) % (step * p);
        debug_assert_eq!(rhs % step, 0);
        let t = (rhs / step % p) as u128 * inv as u128 % p as u128;
        x += step * t as u64;
        step *= p;
    }
    debug_assert_eq!(poly_eval_mod(f, x, modulus), target % modulus);
    Ok(x)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    crate::arith::mod_pow(a, p - 2, p)
}

/// The exact residue set { f(x) mod p^K }, which by weak Hensel equals the
/// reduction mod p^K of the p-adic closure of f(Z).
pub fn closure_image(f: &Poly, p: u64, depth: u32) -> Result<Vec<u64>> {
    let modulus = (p as u128).pow(depth);
    if depth < 1 || modulus > ENUMERATION_GUARD {
        return Err(Error::TooDeep(modulus));
    }
    let modulus = modulus as u64;
    let mut hit = vec![false; modulus as usize];
    for x in 0..modulus {
        hit[poly_eval_mod(f, x, modulus) as usize] = true;
    }
    Ok((0..modulus).filter(|&r| hit[r as usize]).collect())
}

/// Quadratic coefficients of f = a2 x^2 + a1 x + a0.
fn quadratic_coeffs(f: &Poly) -> Result<(i64, i64, i64)> {
    if f.degree() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a quadratic, got degree {}",
            f.degree()
        )));
    }
    Ok((f.coeff(2), f.coeff(1), f.coeff(0)))
}

fn vp_i64(n: i64, p: u64) -> u32 {
    assert!(n != 0);
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Classify the p-adic closure of a quadratic image per the structural
/// case split on the valuations of (2 a2, a2, a1) at p, truncated at depth
/// K. Quadratics outside every structural hypothesis (in particular those
/// with p dividing both a1 and a2) fall back to the enumeration oracle,
/// repackaged as depth-K balls and tagged Unresolved-OracleOnly.
pub fn classify_quadratic_closure(f: &Poly, p: u64, depth: u32) -> Result<ClosureDescription> {
    let (a2, a1, a0) = quadratic_coeffs(f)?;
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let modulus = (p as u128).pow(depth);
    if depth < 1 || modulus > ENUMERATION_GUARD {
        return Err(Error::TooDeep(modulus));
    }
    let v_a2 = if a2 == 0 { u32::MAX } else { vp_i64(a2, p) };
    let v_a1 = if a1 == 0 { u32::MAX } else { vp_i64(a1, p) };

    if p != 2 && v_a2 == 0 {
        return Ok(case1_tower(a2, a1, a0, p, depth));
    }
    if v_a2 >= 1 && v_a1 == 0 {
        // f is a bijection mod p with unit derivative everywhere: full ring.
        return Ok(ClosureDescription {
            p,
            depth_limit: depth,
            case: CaseTag::Case2FullRing,
            balls: (0..p).map(|center| ResidueBall { depth: 1, center }).collect(),
            isolated: vec![],
        });
    }
    if p == 2 && v_a2 == 0 && v_a1 == 0 {
        // Both coefficients odd: the image is the single level-1 ball
        // a0 + 2Z (N = #kappa/2 = 1).
        return Ok(ClosureDescription {
            p,
            depth_limit: depth,
            case: CaseTag::Case3UnionLevelOne,
            balls: vec![ResidueBall {
                depth: 1,
                center: a0.rem_euclid(2) as u64,
            }],
            isolated: vec![],
        });
    }
    if p == 2 && v_a2 == 0 && v_a1 >= 1 {
        return Ok(oddeven_tower(a2, a1, a0, depth));
    }
    // p divides both a1 and a2 (or a1 = a0-only degenerate data): no
    // structural description; report the oracle enumeration honestly.
    let residues = closure_image(f, p, depth)?;
    Ok(ClosureDescription {
        p,
        depth_limit: depth,
        case: CaseTag::UnresolvedOracleOnly,
        balls: residues
            .into_iter()
            .map(|center| ResidueBall { depth, center })
            .collect(),
        isolated: vec![],
    })
}

/// Odd p not dividing a2: the closure is an isolated point plus a tower of
/// (p-1)/2 balls of depth 2k+1 per level k, built by repeatedly reducing
/// f -> f_1 -> f_2 ... at the unique critical residue.
fn case1_tower(a2: i64, a1: i64, a0: i64, p: u64, depth: u32) -> ClosureDescription {
    let modulus = (p as i128).pow(depth);
    let mut balls = Vec::new();
    let mut a1_cur = a1;
    let mut offset: i128 = 0; // accumulated critical values, scale-adjusted
    let mut scale: i128 = 1; // p^{2k}
    let mut level = 0u32;
    loop {
        let ball_depth = 2 * level + 1;
        if ball_depth <= depth {
            let step = (p as i128).pow(ball_depth);
            for s in nonsingular_image_residues(a2, a1_cur, p) {
                let center = (a0 as i128 + offset + scale * s as i128).rem_euclid(step);
                balls.push(ResidueBall {
                    depth: ball_depth,
                    center: center as u64,
                });
            }
        }
        if scale >= modulus {
            break;
        }
        // alpha with alpha * p = a1_cur mod 2 a2 and p not dividing alpha;
        // the critical value of this level is (alpha^2 p^2 - a1_cur^2)/(4 a2).
        let alpha = pick_alpha(a2, a1_cur, p);
        let c = ((alpha as i128 * p as i128).pow(2) - (a1_cur as i128).pow(2)) / (4 * a2 as i128);
        offset += scale * c;
        a1_cur = alpha;
        scale *= (p as i128) * (p as i128);
        level += 1;
    }
    let isolated = (a0 as i128 + offset).rem_euclid(modulus) as u64;
    ClosureDescription {
        p,
        depth_limit: depth,
        case: CaseTag::Case1OddDepthTower,
        balls,
        isolated: vec![isolated],
    }
}

/// Residues of a2 b^2 + a1 b mod p over the b where the derivative is a
/// unit; for odd p not dividing a2 there are exactly (p-1)/2 of them.
fn nonsingular_image_residues(a2: i64, a1: i64, p: u64) -> BTreeSet<u64> {
    let pm = p as i128;
    let mut out = BTreeSet::new();
    for b in 0..pm {
        if (2 * a2 as i128 * b + a1 as i128).rem_euclid(pm) != 0 {
            out.insert((a2 as i128 * b * b + a1 as i128 * b).rem_euclid(pm) as u64);
        }
    }
    out
}

/// Smallest positive alpha with alpha * p = a1 mod |2 a2| and p not
/// dividing alpha. Solvable because gcd(p, 2 a2) = 1 in case 1.
fn pick_alpha(a2: i64, a1: i64, p: u64) -> i64 {
    let m = (2 * a2).unsigned_abs() as i128;
    let mut alpha: i128 = 0;
    loop {
        alpha += 1;
        if (alpha * p as i128 - a1 as i128).rem_euclid(m) == 0 && alpha % p as i128 != 0 {
            return alpha as i64;
        }
    }
}

/// p = 2 with a2 odd and a1 even: an isolated point plus one ball of depth
/// 2k+3 per level. Levels truncated away but still distinguishable mod 2^K
/// are kept as singleton depth-K balls.
fn oddeven_tower(a2: i64, a1: i64, a0: i64, depth: u32) -> ClosureDescription {
    let modulus = 1i128 << depth;
    let mut a0 = a0 as i128;
    let mut a1_cur = a1 as i128;
    let a2 = a2 as i128;
    // Shift x -> x+1 if needed so that 4 | a1; the image is unchanged.
    if a1_cur.rem_euclid(4) == 2 {
        a0 += a2 + a1_cur;
        a1_cur += 2 * a2;
    }
    let mut balls = Vec::new();
    let mut offset: i128 = 0;
    let mut scale: i128 = 1; // 4^k
    let mut level = 0u32;
    loop {
        if scale >= modulus {
            break;
        }
        // Level-k ball: the odd arguments contribute center + 2^{2k+3} Z.
        let ball_depth = (2 * level + 3).min(depth);
        let step = 1i128 << (2 * level + 3).min(depth);
        let center = (a0 + offset + scale * (a2 + a1_cur)).rem_euclid(step) as u64;
        balls.push(ResidueBall {
            depth: ball_depth,
            center,
        });
        // Even arguments x = 2y + alpha reduce to a2 y^2 + (a2 alpha + a1/2) y
        // scaled by 4, with alpha even chosen so the new linear coefficient
        // is 0 mod 4 again.
        let mut alpha = 0i128;
        while (a2 * alpha + a1_cur / 2).rem_euclid(4) != 0 {
            alpha += 2;
        }
        let c = a2 * alpha * alpha + a1_cur * alpha;
        offset += scale * c;
        a1_cur = a2 * alpha + a1_cur / 2;
        scale *= 4;
        level += 1;
    }
    let isolated = (a0 + offset).rem_euclid(modulus) as u64;
    ClosureDescription {
        p: 2,
        depth_limit: depth,
        case: CaseTag::LemmaOddEvenTower,
        balls,
        isolated: vec![isolated],
    }
}

/// The explicit closure of x^2, straight from the reference formulas:
/// for odd p, {0} plus balls r p^{2k} + p^{2k+1} Z over quadratic residues
/// r; for p = 2, {0} plus balls 2^{2k} + 2^{2k+3} Z. Independent of the
/// classifier; used to cross-check it.
pub fn square_closure_reference(p: u64, depth: u32) -> Result<ClosureDescription> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let modulus = (p as u128).pow(depth);
    if depth < 1 || modulus > ENUMERATION_GUARD {
        return Err(Error::TooDeep(modulus));
    }
    let mut balls = Vec::new();
    if p == 2 {
        let mut k = 0u32;
        while (1u128 << (2 * k)) < modulus {
            let ball_depth = (2 * k + 3).min(depth);
            let step = 1u128 << ball_depth;
            balls.push(ResidueBall {
                depth: ball_depth,
                center: ((1u128 << (2 * k)) % step) as u64,
            });
            k += 1;
        }
        return Ok(ClosureDescription {
            p,
            depth_limit: depth,
            case: CaseTag::LemmaOddEvenTower,
            balls,
            isolated: vec![0],
        });
    }
    let residues: Vec<u64> = (1..p)
        .filter(|&r| crate::arith::legendre_symbol(r as i64, p).unwrap() == 1)
        .collect();
    let mut k = 0u32;
    while (p as u128).pow(2 * k) < modulus {
        let ball_depth = (2 * k + 1).min(depth);
        let step = (p as u128).pow(ball_depth);
        for &r in &residues {
            balls.push(ResidueBall {
                depth: ball_depth,
                center: (r as u128 * (p as u128).pow(2 * k) % step) as u64,
            });
        }
        k += 1;
    }
    Ok(ClosureDescription {
        p,
        depth_limit: depth,
        case: CaseTag::Case1OddDepthTower,
        balls,
        isolated: vec![0],
    })
}

/// Closure description for a polynomial of any degree: quadratics go
/// through the structural classifier, everything else reports the
/// enumeration oracle tagged Unresolved-OracleOnly.
pub fn describe_closure(f: &Poly, p: u64, depth: u32) -> Result<ClosureDescription> {
    if f.degree() == 2 {
        return classify_quadratic_closure(f, p, depth);
    }
    if f.degree() < 1 {
        return Err(Error::InvalidArgument(
            "closure analysis needs deg f >= 1".into(),
        ));
    }
    let residues = closure_image(f, p, depth)?;
    Ok(ClosureDescription {
        p,
        depth_limit: depth,
        case: CaseTag::UnresolvedOracleOnly,
        balls: residues
            .into_iter()
            .map(|center| ResidueBall { depth, center })
            .collect(),
        isolated: vec![],
    })
}

/// Report on whether s_bad \ s_good is empty, i.e. whether the uncertain
/// set E of the closure decomposition vanishes. Witnesses map each
/// element of s_bad that also lies in s_good to a nonsingular preimage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncertainSetReport {
    pub empty: bool,
    pub witnesses: BTreeMap<u64, u64>,
}

pub fn no_uncertain_set_check(f: &Poly, p: u64) -> Result<UncertainSetReport> {
    if f.degree() < 2 {
        return Err(Error::InvalidArgument(
            "the uncertain-set check needs deg f >= 2".into(),
        ));
    }
    let sets = critical_sets(f, p)?;
    let df = f.derivative();
    let mut witnesses = BTreeMap::new();
    for &a in sets.s_bad.intersection(&sets.s_good) {
        for b in 0..p {
            if poly_eval_mod(f, b, p) == a && poly_eval_mod(&df, b, p) != 0 {
                witnesses.insert(a, b);
                break;
            }
        }
    }
    let empty = sets.s_bad.difference(&sets.s_good).next().is_none();
    Ok(UncertainSetReport { empty, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::Poly;

    fn quad(a2: i64, a1: i64, a0: i64) -> Poly {
        Poly::new(vec![a0, a1, a2])
    }

    #[test]
    fn poly_eval_mod_examples() {
        assert_eq!(poly_eval_mod(&quad(1, 0, 0), 3, 9), 0);
        assert_eq!(poly_eval_mod(&quad(1, 0, 0), 10, 49), 2);
        let cubic = Poly::new(vec![0, 0, -1, 1]);
        assert_eq!(poly_eval_mod(&cubic, 3, 5), 3);
    }

    #[test]
    fn critical_sets_examples() {
        let s = critical_sets(&quad(1, 0, 0), 7).unwrap();
        assert_eq!(s.s_good, BTreeSet::from([1, 2, 4]));
        assert_eq!(s.s_bad, BTreeSet::from([0]));

        let s = critical_sets(&quad(1, 1, 0), 2).unwrap();
        assert_eq!(s.s_good, BTreeSet::from([0]));
        assert!(s.s_bad.is_empty());

        let cubic = Poly::new(vec![0, 0, -1, 1]);
        let s = critical_sets(&cubic, 5).unwrap();
        assert!(s.s_bad.difference(&s.s_good).next().is_none());
    }

    #[test]
    fn hensel_examples() {
        assert_eq!(hensel_solve(&quad(1, 0, 0), 2, 7, 2, 3).unwrap(), 10);
        // Identity map lifts to the target itself.
        let ident = Poly::new(vec![0, 1]);
        assert_eq!(hensel_solve(&ident, 6, 5, 3, 1).unwrap(), 6);
        // x^2 + x = 2 mod 8 with seed 1: exhaustive search over odd x mod 8
        // shows x = 1 is the unique lift.
        assert_eq!(hensel_solve(&quad(1, 1, 0), 2, 2, 3, 1).unwrap(), 1);
        assert!(hensel_solve(&quad(1, 0, 0), 3, 7, 2, 1).is_err());
    }

    #[test]
    fn hensel_postcondition_recheck() {
        for a in [1u64, 2, 4] {
            for target_digits in 0..25u64 {
                let target = a + 7 * target_digits;
                for seed in 0..7u64 {
                    let f = quad(1, 0, 0);
                    if poly_eval_mod(&f, seed, 7) == a && seed != 0 {
                        let x = hensel_solve(&f, target, 7, 3, seed).unwrap();
                        assert_eq!(poly_eval_mod(&f, x, 343), target % 343);
                        assert_eq!(x % 7, seed);
                    }
                }
            }
        }
    }

    #[test]
    fn closure_image_examples() {
        assert_eq!(
            closure_image(&quad(1, 0, 0), 3, 2).unwrap(),
            vec![0, 1, 4, 7]
        );
        assert_eq!(closure_image(&quad(1, 0, 0), 2, 3).unwrap(), vec![0, 1, 4]);
        assert_eq!(
            closure_image(&quad(2, 1, 0), 2, 3).unwrap(),
            (0..8).collect::<Vec<u64>>()
        );
        assert!(matches!(
            closure_image(&quad(1, 0, 0), 2, 30),
            Err(Error::TooDeep(_))
        ));
    }

    #[test]
    fn depth_coherence() {
        for (f, p) in [(quad(1, 0, 0), 3u64), (quad(3, 1, 7), 5), (quad(1, 2, 0), 2)] {
            for k in 2..=4u32 {
                let deep: BTreeSet<u64> = closure_image(&f, p, k)
                    .unwrap()
                    .into_iter()
                    .map(|r| r % p.pow(k - 1))
                    .collect();
                let shallow: BTreeSet<u64> =
                    closure_image(&f, p, k - 1).unwrap().into_iter().collect();
                assert_eq!(deep, shallow, "f={f:?} p={p} K={k}");
            }
        }
    }

    #[test]
    fn classify_case3() {
        let d = classify_quadratic_closure(&quad(1, 1, 0), 2, 3).unwrap();
        assert_eq!(d.case, CaseTag::Case3UnionLevelOne);
        assert_eq!(d.balls, vec![ResidueBall { depth: 1, center: 0 }]);
        assert!(d.isolated.is_empty());
    }

    #[test]
    fn classify_case2() {
        let d = classify_quadratic_closure(&quad(2, 1, 0), 2, 4).unwrap();
        assert_eq!(d.case, CaseTag::Case2FullRing);
        assert_eq!(d.expand(), (0..16).collect::<Vec<u64>>());
    }

    #[test]
    fn classify_case1_square_at_5() {
        let d = classify_quadratic_closure(&quad(1, 0, 0), 5, 5).unwrap();
        assert_eq!(d.case, CaseTag::Case1OddDepthTower);
        assert_eq!(d.isolated, vec![0]);
        let level0: BTreeSet<u64> = d
            .balls
            .iter()
            .filter(|b| b.depth == 1)
            .map(|b| b.center)
            .collect();
        assert_eq!(level0, BTreeSet::from([1, 4]));
        let level1: BTreeSet<u64> = d
            .balls
            .iter()
            .filter(|b| b.depth == 3)
            .map(|b| b.center)
            .collect();
        assert_eq!(level1, BTreeSet::from([25, 100]));
    }

    #[test]
    fn case_cardinalities() {
        // Case 1: (p-1)/2 balls per level; case 3: one level-1 ball.
        for p in [3u64, 5, 7] {
            let depth = 5;
            let d = classify_quadratic_closure(&quad(3, 1, 7), p, depth).unwrap();
            if d.case != CaseTag::Case1OddDepthTower {
                continue;
            }
            for level in 0..=((depth - 1) / 2) {
                let count = d.balls.iter().filter(|b| b.depth == 2 * level + 1).count();
                assert_eq!(count, (p as usize - 1) / 2, "p={p} level={level}");
            }
        }
    }

    #[test]
    fn classifier_matches_oracle_small_grid() {
        for a2 in [-3i64, -1, 1, 2, 3, 4, 6] {
            for a1 in -3i64..=3 {
                for a0 in [-1i64, 0, 2] {
                    let f = quad(a2, a1, a0);
                    for p in [2u64, 3, 5] {
                        for depth in 1..=4u32 {
                            let d = classify_quadratic_closure(&f, p, depth).unwrap();
                            let oracle = closure_image(&f, p, depth).unwrap();
                            assert_eq!(
                                d.expand(),
                                oracle,
                                "f={a2}x^2+{a1}x+{a0}, p={p}, K={depth}, case={:?}",
                                d.case
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn square_reference_examples() {
        let d = square_closure_reference(3, 2).unwrap();
        let residues = d.expand();
        assert_eq!(residues, vec![0, 1, 4, 7]);

        let d = square_closure_reference(2, 5).unwrap();
        let mut depths: Vec<(u32, u64)> = d.balls.iter().map(|b| (b.depth, b.center)).collect();
        depths.sort();
        // k=0 and k=1 balls plus the truncation remainder of the k=2 ball.
        assert_eq!(depths, vec![(3, 1), (5, 4), (5, 16)]);
        assert_eq!(d.isolated, vec![0]);

        let d = square_closure_reference(7, 1).unwrap();
        assert_eq!(d.expand(), vec![0, 1, 2, 4]);
    }

    #[test]
    fn square_reference_matches_classifier_and_oracle() {
        for p in [2u64, 3, 5, 7] {
            for depth in 1..=6u32 {
                let reference = square_closure_reference(p, depth).unwrap();
                let classified = classify_quadratic_closure(&quad(1, 0, 0), p, depth).unwrap();
                let oracle = closure_image(&quad(1, 0, 0), p, depth).unwrap();
                assert_eq!(reference.expand(), oracle, "reference p={p} K={depth}");
                assert_eq!(classified.expand(), oracle, "classifier p={p} K={depth}");
            }
        }
    }

    #[test]
    fn corollary_bit_containment() {
        // closure mod p^2 is contained in the s_good level-1 balls plus
        // the critical-value level-2 balls.
        for (f, p) in [
            (quad(1, 0, 0), 5u64),
            (quad(3, 2, 1), 7),
            (Poly::new(vec![0, 0, -1, 1]), 5),
            (Poly::new(vec![1, 2, 0, 1]), 3),
        ] {
            let df = f.derivative();
            let p2 = p * p;
            let mut allowed = BTreeSet::new();
            for b in 0..p {
                if poly_eval_mod(&df, b, p) == 0 {
                    allowed.insert(poly_eval_mod(&f, b, p2));
                } else {
                    let a = poly_eval_mod(&f, b, p);
                    for t in 0..p {
                        allowed.insert(a + t * p);
                    }
                }
            }
            for r in closure_image(&f, p, 2).unwrap() {
                assert!(allowed.contains(&r), "f={f:?} p={p} r={r}");
            }
        }
    }

    #[test]
    fn no_uncertain_set_examples() {
        let cubic = Poly::new(vec![0, 0, -1, 1]); // x^3 - x^2
        for p in crate::arith::primes_up_to(50) {
            let report = no_uncertain_set_check(&cubic, p).unwrap();
            assert!(report.empty, "p={p}");
        }
        // alpha = 1, beta = 2: x^3 - 4x^2 + 5x.
        let param = Poly::new(vec![0, 5, -4, 1]);
        let report = no_uncertain_set_check(&param, 7).unwrap();
        assert!(report.empty);
    }

    #[test]
    fn closure_json_schema() {
        let d = classify_quadratic_closure(&quad(1, 1, 0), 2, 3).unwrap();
        assert_eq!(
            d.to_json().to_string(),
            r#"{"p":2,"depth":3,"case":"Case3-UnionLevelOne","balls":[{"center":0,"depth":1}],"isolated":[]}"#
        );
    }
}
