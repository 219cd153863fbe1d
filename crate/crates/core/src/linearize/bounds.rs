//! Coefficient bounds for the linearizing map.
//!
//! Attracting: `v(b_k) >= (k - 1) e_ρ - v(λ) log2 k`.
//! Repelling: `v(b_k) >= (k - 1) (e_γ - v(λ))`.
//!
//! Both are the model `v(b_k) >= c1 (k - 1) - c2 log2 k`, and `log2 k` is
//! compared exactly through `k^d` against `2^n`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{cmp_log2, rat_int, ExtRational};
use crate::ufield::{UltraScalar, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The coefficient vanished to tracked precision before reaching the bound.
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// `constant + log2_coeff · log2 k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundExpr {
    pub constant: ExtRational,
    pub log2_coeff: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundVerdict {
    pub k: usize,
    pub valuation: Valuation,
    pub bound: BoundExpr,
    pub verdict: Verdict,
    /// The valuation equals the bound exactly.
    pub equality: bool,
}

/// Decides `value >= c1 (k - 1) - c2 log2 k` exactly.
/// Returns the comparison of `value` against the bound.
fn compare(value: &BigRational, c1: &BigRational, c2: &BigRational, k: usize) -> Ordering {
    // value - c1 (k - 1) + c2 log2 k  vs  0   <=>  c2 log2 k  vs  c1 (k - 1) - value
    let rhs = c1 * rat_int(k as i64 - 1) - value;
    cmp_log2(c2, k as u64, &rhs)
}

/// Checks `v(c_k) >= c1 (k - 1) - c2 log2 k` for `k = 2 ..= N`.
pub fn check_model<S: UltraScalar>(coeffs: &[S], c1: &ExtRational, c2: &BigRational) -> Vec<BoundVerdict> {
    let mut out = Vec::with_capacity(coeffs.len().saturating_sub(1));
    for (i, b) in coeffs.iter().enumerate().skip(1) {
        let k = i + 1;
        let valuation = b.valuation();
        let constant = match c1 {
            ExtRational::Finite(c) => ExtRational::Finite(c * rat_int(k as i64 - 1)),
            other => other.clone(),
        };
        let bound = BoundExpr {
            constant,
            log2_coeff: -c2.clone(),
        };
        let (verdict, equality) = match (c1, valuation) {
            (_, Valuation::Infinite) => (Verdict::Pass, false),
            (ExtRational::NegInf, _) => (Verdict::Pass, false),
            (ExtRational::PosInf, Valuation::Exact(_)) => (Verdict::Fail, false),
            (ExtRational::PosInf, Valuation::AtLeast(_)) => (Verdict::Inconclusive, false),
            (ExtRational::Finite(c), Valuation::Exact(v)) => match compare(&rat_int(v), c, c2, k) {
                Ordering::Less => (Verdict::Fail, false),
                Ordering::Equal => (Verdict::Pass, true),
                Ordering::Greater => (Verdict::Pass, false),
            },
            (ExtRational::Finite(c), Valuation::AtLeast(m)) => match compare(&rat_int(m), c, c2, k) {
                Ordering::Less => (Verdict::Inconclusive, false),
                _ => (Verdict::Pass, false),
            },
        };
        out.push(BoundVerdict {
            k,
            valuation,
            bound,
            verdict,
            equality,
        });
    }
    out
}

/// `v(b_k) >= (k - 1) e_ρ - v(λ) log2 k`; `b` holds `b_1 ..= b_N`.
pub fn check_bound_attracting<S: UltraScalar>(
    b: &[S],
    e_rho: &ExtRational,
    vlam: &BigRational,
) -> Result<Vec<BoundVerdict>> {
    if *vlam <= BigRational::zero() {
        return Err(Error::WrongRegime { expected: "attracting" });
    }
    Ok(check_model(b, e_rho, vlam))
}

/// `v(b_k) >= (k - 1)(e_γ - v(λ))`; `b` holds `b_1 ..= b_N`.
pub fn check_bound_repelling<S: UltraScalar>(
    b: &[S],
    e_gamma: &ExtRational,
    vlam: &BigRational,
) -> Result<Vec<BoundVerdict>> {
    if *vlam >= BigRational::zero() {
        return Err(Error::WrongRegime { expected: "repelling" });
    }
    Ok(check_model(b, &e_gamma.add_rational(&-vlam), &BigRational::zero()))
}
