//! Radii of the family in log scale.
//!
//! A radius `q^e` is stored as its exponent `e`. For a coefficient of
//! valuation `v`, `|a| = q^(-v)`, so `(1/|a_i|)^(1/(i-1))` becomes
//! `v(a_i) / (i - 1)`, and suprema of absolute values turn into infima of
//! these ratios.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use super::map::{MapSpec, Regime, Tail};
use crate::error::{Error, Result};
use crate::exact::{rat_int, ExtRational};
use crate::ufield::UltraScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusStatus {
    /// Some index achieves the extremum.
    Attained,
    /// The extremum is a limit that no index reaches.
    LimitNotAttained,
    /// Only the explicit coefficients were seen; the true exponent may be smaller.
    UpperBoundFromTruncation,
}

impl RadiusStatus {
    pub fn name(&self) -> &'static str {
        match self {
            RadiusStatus::Attained => "attained",
            RadiusStatus::LimitNotAttained => "limit_not_attained",
            RadiusStatus::UpperBoundFromTruncation => "upper_bound_from_truncation",
        }
    }
}

/// Radius `q^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogRadius {
    pub exponent: ExtRational,
    pub status: RadiusStatus,
}

impl LogRadius {
    pub fn attained(exponent: ExtRational) -> Self {
        LogRadius {
            exponent,
            status: RadiusStatus::Attained,
        }
    }

    pub fn shifted(&self, by: &BigRational) -> Self {
        LogRadius {
            exponent: self.exponent.add_rational(by),
            status: self.status,
        }
    }

    /// Minimum of two radii; on a tie an attained status wins.
    pub fn min(&self, other: &LogRadius) -> LogRadius {
        match self.exponent.cmp(&other.exponent) {
            Ordering::Less => self.clone(),
            Ordering::Greater => other.clone(),
            Ordering::Equal => {
                if self.status == RadiusStatus::Attained {
                    self.clone()
                } else {
                    other.clone()
                }
            }
        }
    }
}

impl fmt::Display for LogRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.exponent, self.status.name())
    }
}

/// `inf_{i >= start} (v(a_i) - shift) / (i - 1)` over nonzero coefficients.
pub(crate) fn inf_ratio<S: UltraScalar>(m: &MapSpec<S>, shift: i64, start: usize) -> LogRadius {
    let start = start.max(2);
    let shift_r = rat_int(shift);
    let mut best = LogRadius::attained(ExtRational::PosInf);
    for (j, a) in m.explicit().iter().enumerate() {
        let i = j + 2;
        if i < start {
            continue;
        }
        if let Some(v) = a.valuation().exact() {
            let r = (rat_int(v) - &shift_r) / rat_int(i as i64 - 1);
            best = best.min(&LogRadius::attained(ExtRational::Finite(r)));
        }
    }
    match m.tail() {
        Tail::Polynomial => best,
        Tail::Unknown => LogRadius {
            exponent: best.exponent,
            status: RadiusStatus::UpperBoundFromTruncation,
        },
        Tail::Affine(t) => {
            // (alpha i + beta - shift) / (i - 1) = alpha + d / (i - 1)
            let i0 = t.from.max(start) as i64;
            let d = t.alpha + t.beta - shift;
            let alpha = rat_int(t.alpha);
            let tail = match d.cmp(&0) {
                Ordering::Greater => LogRadius {
                    exponent: ExtRational::Finite(alpha),
                    status: RadiusStatus::LimitNotAttained,
                },
                Ordering::Equal => LogRadius::attained(ExtRational::Finite(alpha)),
                Ordering::Less => {
                    LogRadius::attained(ExtRational::Finite(alpha + BigRational::new(d.into(), (i0 - 1).into())))
                }
            };
            best.min(&tail)
        }
    }
}

/// `e_ρ = inf_{i>=2} v(a_i) / (i - 1)`.
pub fn radius_rho<S: UltraScalar>(m: &MapSpec<S>) -> LogRadius {
    inf_ratio(m, 0, 2)
}

/// `e_γ = inf_{i>=2} (v(a_i) - v(λ)) / (i - 1)`.
pub fn radius_gamma<S: UltraScalar>(m: &MapSpec<S>) -> LogRadius {
    inf_ratio(m, m.vlam(), 2)
}

/// `e_Rf = liminf v(a_i) / i`, the convergence exponent of `f`.
pub fn radius_rf<S: UltraScalar>(m: &MapSpec<S>) -> Result<LogRadius> {
    match m.tail() {
        Tail::Polynomial => Ok(LogRadius::attained(ExtRational::PosInf)),
        Tail::Unknown => Err(Error::UndeterminedTail),
        Tail::Affine(t) => Ok(LogRadius {
            exponent: ExtRational::int(t.alpha),
            // (alpha i + beta) / i equals alpha at every index iff beta = 0
            status: if t.beta == 0 {
                RadiusStatus::Attained
            } else {
                RadiusStatus::LimitNotAttained
            },
        }),
    }
}

/// `e_δ = min(e_Rf, e_γ)`, checked against the sandwich of its regime.
pub fn radius_delta<S: UltraScalar>(m: &MapSpec<S>) -> Result<LogRadius> {
    let rf = radius_rf(m)?;
    let delta = rf.min(&radius_gamma(m));
    let rho = radius_rho(m);
    if !sandwich_holds(m.regime(), m.vlam(), &rho, &rf, &delta) {
        return Err(Error::Invariant(format!(
            "injectivity radius {} violates the {} sandwich",
            delta.exponent,
            m.regime().name()
        )));
    }
    Ok(delta)
}

/// Attracting: `e_ρ - v(λ) <= e_δ <= e_ρ <= e_Rf`.
/// Repelling: `e_ρ <= e_δ <= min(e_Rf, e_ρ - v(λ))`.
pub fn sandwich_holds(regime: Regime, vlam: i64, rho: &LogRadius, rf: &LogRadius, delta: &LogRadius) -> bool {
    let shifted = rho.exponent.add_rational(&rat_int(-vlam));
    let (r, f, d) = (&rho.exponent, &rf.exponent, &delta.exponent);
    match regime {
        Regime::Attracting => &shifted <= d && d <= r && r <= f,
        Regime::Repelling => r <= d && d <= f && d <= &shifted,
    }
}

/// All four radii of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radii {
    pub rho: LogRadius,
    pub gamma: LogRadius,
    /// `None` when the tail is unknown.
    pub rf: Option<LogRadius>,
    pub delta: Option<LogRadius>,
    /// `None` when the sandwich cannot be evaluated.
    pub sandwich: Option<bool>,
}

pub fn radii<S: UltraScalar>(m: &MapSpec<S>) -> Radii {
    let rho = radius_rho(m);
    let gamma = radius_gamma(m);
    let rf = radius_rf(m).ok();
    let delta = rf.as_ref().map(|rf| rf.min(&gamma));
    let sandwich = match (&rf, &delta) {
        (Some(rf), Some(d)) => Some(sandwich_holds(m.regime(), m.vlam(), &rho, rf, d)),
        _ => None,
    };
    Radii {
        rho,
        gamma,
        rf,
        delta,
        sandwich,
    }
}
