//! Exact extended rationals and comparisons involving `log2 k`.
//!
//! Every magnitude in this crate lives in log scale base an abstract `q > 1`,
//! so radii and bounds are rationals plus the occasional `c * log2 k` term.
//! The irrational term is never approximated: `c * log2 k >= r` is decided
//! by comparing `k^d` against `2^n` with big integers, where `r / c = n / d`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `Q ∪ {-∞, +∞}` with the obvious total order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtRational {
    pub fn int(n: i64) -> Self {
        ExtRational::Finite(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExtRational::Finite(BigRational::new(num.into(), den.into()))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    /// Sum; `+∞ + -∞` is rejected by returning `None`.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        use ExtRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a + r),
            other => other.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtRational::NegInf => ExtRational::PosInf,
            ExtRational::PosInf => ExtRational::NegInf,
            ExtRational::Finite(a) => ExtRational::Finite(-a),
        }
    }
}

impl From<BigRational> for ExtRational {
    fn from(r: BigRational) -> Self {
        ExtRational::Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::PosInf => f.write_str("+inf"),
            ExtRational::Finite(r) => write!(f, "{r}"),
        }
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Compares `2^e` with `k^d` for a nonnegative `d`, `k >= 1`, any integer `e`.
fn cmp_pow2_vs_pow(e: &BigInt, k: u64, d: &BigInt) -> Ordering {
    let d = d.to_u32().expect("exponent denominator fits in u32");
    let kd = num_traits::pow(BigInt::from(k), d as usize);
    if e.is_negative() {
        // 2^e < 1 <= k^d
        let shift = (-e).to_usize().expect("exponent fits in usize");
        // compare 1 with k^d * 2^-e
        BigInt::one().cmp(&(kd << shift))
    } else {
        let shift = e.to_usize().expect("exponent fits in usize");
        (BigInt::one() << shift).cmp(&kd)
    }
}

/// Exact comparison of `coef * log2(k)` against `rhs`, for `k >= 1`.
pub fn cmp_log2(coef: &BigRational, k: u64, rhs: &BigRational) -> Ordering {
    assert!(k >= 1, "log2 of zero");
    if coef.is_zero() || k == 1 {
        return BigRational::zero().cmp(rhs);
    }
    // coef * log2 k  vs  rhs   <=>  log2 k  vs  rhs / coef   (flipped if coef < 0)
    let t = rhs / coef;
    let (n, d) = (t.numer().clone(), t.denom().clone());
    // log2 k vs n/d  <=>  k^d vs 2^n
    let ord = cmp_pow2_vs_pow(&n, k, &d).reverse();
    if coef.is_negative() {
        ord.reverse()
    } else {
        ord
    }
}

/// Smallest integer `m` with `m >= a - c * log2(k)`.
pub fn ceil_minus_log2(a: &BigRational, c: &BigRational, k: u64) -> BigInt {
    // m >= a - c log2 k  <=>  c log2 k >= a - m
    let approx = a.to_f64().unwrap_or(0.0) - c.to_f64().unwrap_or(0.0) * (k as f64).log2();
    let mut m = BigInt::from(approx.ceil() as i64);
    let holds = |m: &BigInt| {
        let rhs = a - BigRational::from_integer(m.clone());
        cmp_log2(c, k, &rhs) != Ordering::Less
    };
    while !holds(&m) {
        m += 1;
    }
    loop {
        let prev = &m - 1;
        if holds(&prev) {
            m = prev;
        } else {
            break;
        }
    }
    m
}

/// Minimiser of `psi(k) = slope * k - c * log2(k)` over integers `k >= kmin >= 1`.
///
/// Returns `None` when the infimum is `-∞`. `psi` is convex for `c >= 0`,
/// so the minimiser is the first `k` whose forward increment is nonnegative.
pub fn argmin_linear_minus_log2(slope: &BigRational, c: &BigRational, kmin: u64) -> Option<u64> {
    assert!(kmin >= 1);
    match (slope.cmp(&BigRational::zero()), c.cmp(&BigRational::zero())) {
        (_, Ordering::Equal) => {
            if slope.is_negative() {
                None
            } else {
                Some(kmin)
            }
        }
        (Ordering::Less, _) | (Ordering::Equal, Ordering::Greater) => None,
        (_, Ordering::Less) => Some(kmin),
        (Ordering::Greater, Ordering::Greater) => {
            // increment(k) >= 0  <=>  (k+1)^d <= 2^n k^d  with slope / c = n / d
            let t = slope / c;
            let (n, d) = (t.numer().clone(), t.denom().clone());
            let d32 = d.to_u32().expect("denominator fits in u32");
            let n_sh = n.to_usize().expect("numerator fits in usize");
            let nonneg = |k: u64| -> bool {
                let lhs = num_traits::pow(BigInt::from(k + 1), d32 as usize);
                let rhs = num_traits::pow(BigInt::from(k), d32 as usize) << n_sh;
                lhs <= rhs
            };
            if nonneg(kmin) {
                return Some(kmin);
            }
            let mut lo = kmin;
            let mut hi = kmin.max(1) * 2;
            while !nonneg(hi) {
                lo = hi;
                hi = hi.checked_mul(2).expect("minimiser search overflow");
            }
            // nonneg(lo) false, nonneg(hi) true
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if nonneg(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(hi)
        }
    }
}

/// Integer floor/ceil helpers for rationals.
pub fn ceil_rat(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

pub fn floor_rat(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Exponent `v_p(n)` of a prime in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_cmp(coef: f64, k: u64, rhs: f64) -> Ordering {
        (coef * (k as f64).log2()).partial_cmp(&rhs).unwrap()
    }

    #[test]
    fn log2_comparison_matches_floats_away_from_ties() {
        for k in 1..40u64 {
            for cn in -4..=4i64 {
                for rn in -12..=12i64 {
                    let coef = rat(cn, 3);
                    let rhs = rat(rn, 2);
                    let f = brute_cmp(cn as f64 / 3.0, k, rn as f64 / 2.0);
                    let lhs_f = (cn as f64 / 3.0) * (k as f64).log2();
                    if (lhs_f - rn as f64 / 2.0).abs() > 1e-9 {
                        assert_eq!(cmp_log2(&coef, k, &rhs), f, "k={k} c={cn}/3 r={rn}/2");
                    }
                }
            }
        }
    }

    #[test]
    fn log2_ties_are_exact_on_powers_of_two() {
        // 1 * log2 8 == 3
        assert_eq!(cmp_log2(&rat_int(1), 8, &rat_int(3)), Ordering::Equal);
        // 2/3 * log2 8 == 2
        assert_eq!(cmp_log2(&rat(2, 3), 8, &rat_int(2)), Ordering::Equal);
        assert_eq!(cmp_log2(&rat_int(1), 3, &rat_int(1)), Ordering::Greater);
        assert_eq!(cmp_log2(&rat_int(-1), 4, &rat_int(-2)), Ordering::Equal);
    }

    #[test]
    fn ceil_minus_log2_small_cases() {
        // 65 - log2 65 = 58.977.. -> 59
        assert_eq!(ceil_minus_log2(&rat_int(65), &rat_int(1), 65), BigInt::from(59));
        // 3 - log2 8 = 0 exactly
        assert_eq!(ceil_minus_log2(&rat_int(3), &rat_int(1), 8), BigInt::from(0));
        assert_eq!(ceil_minus_log2(&rat(1, 2), &rat_int(0), 8), BigInt::from(1));
    }

    #[test]
    fn argmin_agrees_with_scan() {
        for sn in 1..6i64 {
            for cn in 0..8i64 {
                let slope = rat(sn, 4);
                let c = rat(cn, 1);
                let psi = |k: u64| sn as f64 / 4.0 * k as f64 - cn as f64 * (k as f64).log2();
                let got = argmin_linear_minus_log2(&slope, &c, 2).unwrap();
                let best = (2..2000u64).map(psi).fold(f64::INFINITY, f64::min);
                assert!((psi(got) - best).abs() < 1e-9, "s={sn}/4 c={cn}");
            }
        }
        assert_eq!(argmin_linear_minus_log2(&rat(-1, 1), &rat_int(0), 2), None);
        assert_eq!(argmin_linear_minus_log2(&rat_int(0), &rat_int(1), 2), None);
    }

    #[test]
    fn ext_rational_order() {
        assert!(ExtRational::NegInf < ExtRational::int(-5));
        assert!(ExtRational::int(7) < ExtRational::PosInf);
        assert_eq!(ExtRational::PosInf.checked_add(&ExtRational::NegInf), None);
    }
}
