use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::ExtRational;
use crate::linearize::{ConjugacyReport, Regime};
use crate::series::{ps_eval_rigorous, TruncatedSeries};
use crate::ufield::{UltraScalar, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `g(f(x)) = λ g(x)`.
    Semi,
    /// `g(f(g^{-1}(x))) = λ x`.
    Full,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Semi => "semi",
            Mode::Full => "full",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck<S> {
    pub point: S,
    /// `v(x)` exceeds minus the domain exponent.
    pub in_domain: bool,
    /// `v(lhs - rhs)`; absent out of domain.
    pub residual: Option<Valuation>,
    /// Absolute precision of `lhs - rhs` after truncation tails and
    /// arithmetic losses; `+inf` when both sides are exact.
    pub floor: Option<ExtRational>,
}

impl<S> PointCheck<S> {
    /// The residual reaches the floor. `None` out of domain.
    pub fn holds(&self) -> Option<bool> {
        let (r, floor) = (self.residual.as_ref()?, self.floor.as_ref()?);
        Some(match r {
            Valuation::Infinite => true,
            Valuation::AtLeast(_) => true,
            Valuation::Exact(v) => ExtRational::Finite(BigRational::from_integer(BigInt::from(*v))) >= *floor,
        })
    }
}

/// Exponent `e` of the disc `v(x) > -e` on which each identity is proven:
/// Semi uses `e_ρ` (attracting) or `e_δ` (repelling), Full uses
/// `e_ρ - v(λ)` (attracting) or `e_δ` (repelling).
pub fn domain_exponent<S: UltraScalar>(report: &ConjugacyReport<S>, mode: Mode) -> Option<ExtRational> {
    let r = &report.radii;
    match (report.regime, mode) {
        (Regime::Attracting, Mode::Semi) => r.rf.as_ref().map(|_| r.rho.exponent.clone()),
        (Regime::Attracting, Mode::Full) => report.delta_g_lower.as_ref().map(|d| d.exponent.clone()),
        (Regime::Repelling, _) => r.delta.as_ref().map(|d| d.exponent.clone()),
    }
}

fn eval<S: UltraScalar>(h: &TruncatedSeries<S>, x: &S) -> Result<S> {
    Ok(ps_eval_rigorous(h, x)?
        .enclosure()
        .expect("rigorous evaluation has a tail bound"))
}

/// Evaluates both sides of the chosen identity at each point, carrying the
/// truncation tails of `f`, `g` and `g^{-1}` as lost digits.
pub fn pointwise_conjugacy_check<S: UltraScalar>(
    report: &ConjugacyReport<S>,
    points: &[S],
    mode: Mode,
) -> Result<Vec<PointCheck<S>>> {
    let e = domain_exponent(report, mode).ok_or(Error::NoTailModel)?;
    let g_inv = match mode {
        Mode::Full => Some(report.g_inverse()?),
        Mode::Semi => None,
    };
    let lam = &report.lambda;
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let in_domain = match (x.valuation().lower_bound(), &e) {
            (None, _) | (_, ExtRational::PosInf) => true,
            (_, ExtRational::NegInf) => false,
            (Some(v), ExtRational::Finite(e)) => {
                BigRational::from_integer(v.into()) + e > BigRational::from_integer(0.into())
            }
        };
        if !in_domain {
            out.push(PointCheck {
                point: x.clone(),
                in_domain,
                residual: None,
                floor: None,
            });
            continue;
        }
        let (lhs, rhs) = match &g_inv {
            None => (
                eval(&report.g, &eval(&report.f, x)?)?,
                lam.try_mul(&eval(&report.g, x)?)?,
            ),
            Some(gi) => {
                let z = eval(gi, x)?;
                (eval(&report.g, &eval(&report.f, &z)?)?, lam.try_mul(x)?)
            }
        };
        let d = lhs.try_sub(&rhs)?;
        let floor = match d.abs_precision() {
            Some(m) if d.valuation() != Valuation::Infinite || !d.is_exact_zero() => {
                ExtRational::Finite(BigRational::from_integer(m.into()))
            }
            _ => ExtRational::PosInf,
        };
        out.push(PointCheck {
            point: x.clone(),
            in_domain,
            residual: Some(d.valuation()),
            floor: Some(floor),
        });
    }
    Ok(out)
}
