use num_rational::BigRational;
use num_traits::Signed;

use super::{CoeffBoundModel, TruncatedSeries};
use crate::error::{Error, Result};
use crate::exact::{argmin_linear_minus_log2, ceil_minus_log2, ExtRational};
use crate::ufield::UltraScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult<S> {
    /// `Σ_{k<=N} c_k x^k`.
    pub value: S,
    /// Lower bound on the valuation of the missing tail; `None` when the
    /// series has neither a tail model nor the polynomial flag.
    pub tail_bound: Option<ExtRational>,
}

impl<S: UltraScalar> EvalResult<S> {
    /// The value with every digit the tail could disturb forgotten.
    pub fn enclosure(&self) -> Option<S> {
        match &self.tail_bound {
            None => None,
            Some(ExtRational::Finite(b)) => {
                let m = b.to_integer();
                let m = i64::try_from(&m).ok()?;
                Some(self.value.with_abs_precision(m))
            }
            Some(_) => Some(self.value.clone()),
        }
    }
}

/// `min_{k > order} ceil(c1 (k - 1) - c2 log2 k + k v)`, the tail of a series
/// obeying `model`, evaluated at a point of valuation `v`.
pub fn tail_bound(model: &CoeffBoundModel, order: usize, v: i64) -> Result<ExtRational> {
    let slope = &model.c1 + BigRational::from_integer(v.into());
    if !slope.is_positive() {
        return Err(Error::OutsideConvergenceDisc(format!(
            "point valuation {v} is not above {}",
            -&model.c1
        )));
    }
    let kmin = order as u64 + 1;
    let k = argmin_linear_minus_log2(&slope, &model.c2, kmin).expect("positive slope has a minimiser");
    let a = &slope * BigRational::from_integer(k.into()) - &model.c1;
    let m = ceil_minus_log2(&a, &model.c2, k);
    Ok(ExtRational::Finite(BigRational::from_integer(m)))
}

/// Horner evaluation of the stored coefficients plus a tail bound.
pub fn ps_eval<S: UltraScalar>(h: &TruncatedSeries<S>, x: &S) -> Result<EvalResult<S>> {
    if x.field() != h.field() {
        return Err(Error::FieldMismatch {
            left: S::describe(h.field()).to_string(),
            right: S::describe(x.field()).to_string(),
        });
    }
    if x.is_exact_zero() {
        return Ok(EvalResult {
            value: S::zero(h.field()),
            tail_bound: Some(ExtRational::PosInf),
        });
    }
    let mut acc = S::zero(h.field());
    for c in h.coeffs().iter().rev() {
        acc = acc.try_mul(x)?.try_add(c)?;
    }
    let value = acc.try_mul(x)?;
    let tail = if h.is_polynomial() {
        Some(ExtRational::PosInf)
    } else if let Some(model) = h.tail_model() {
        let v = x.valuation().lower_bound().expect("nonzero point");
        Some(tail_bound(model, h.order(), v)?)
    } else {
        None
    };
    Ok(EvalResult {
        value,
        tail_bound: tail,
    })
}

/// [`ps_eval`] that refuses to report an unknown tail.
pub fn ps_eval_rigorous<S: UltraScalar>(h: &TruncatedSeries<S>, x: &S) -> Result<EvalResult<S>> {
    let r = ps_eval(h, x)?;
    if r.tail_bound.is_none() {
        return Err(Error::NoTailModel);
    }
    Ok(r)
}
