//! Truncated power series without constant term.
//!
//! A [`TruncatedSeries`] stores `c_1 .. c_N`. Binary operations truncate to
//! the smaller order and never invent coefficients. A series may carry a
//! [`CoeffBoundModel`] describing its unknown tail, which [`ps_eval`] uses to
//! bound the part of `h(x)` that the stored coefficients miss.

mod eval;
mod newton;

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ufield::UltraScalar;

pub use eval::{ps_eval, ps_eval_rigorous, tail_bound, EvalResult};
pub use newton::{newton_polygon, NewtonPolygon, Segment};

/// `v(c_k) >= c1 * (k - 1) - c2 * log2(k)` for every `k` beyond the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffBoundModel {
    pub c1: BigRational,
    pub c2: BigRational,
}

impl CoeffBoundModel {
    pub fn new(c1: BigRational, c2: BigRational) -> Result<Self> {
        if c2.is_negative() {
            return Err(Error::Invariant(format!("log coefficient {c2} is negative")));
        }
        Ok(CoeffBoundModel { c1, c2 })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S: UltraScalar> {
    field: S::Field,
    coeffs: Vec<S>,
    tail_model: Option<CoeffBoundModel>,
    polynomial: bool,
}

impl<S: UltraScalar> TruncatedSeries<S> {
    /// Series known through degree `coeffs.len()`, tail unknown.
    pub fn new(field: &S::Field, coeffs: Vec<S>) -> Result<Self> {
        Self::build(field, coeffs, false)
    }

    /// Polynomial: every coefficient past the last one is exactly zero.
    pub fn polynomial(field: &S::Field, coeffs: Vec<S>) -> Result<Self> {
        Self::build(field, coeffs, true)
    }

    fn build(field: &S::Field, coeffs: Vec<S>, polynomial: bool) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invariant("series order must be at least 1".into()));
        }
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: S::describe(field).to_string(),
                    right: S::describe(c.field()).to_string(),
                });
            }
        }
        Ok(TruncatedSeries {
            field: field.clone(),
            coeffs,
            tail_model: None,
            polynomial,
        })
    }

    /// Parses coefficient literals indexed from degree 1.
    pub fn parse(field: &S::Field, literals: &[String], polynomial: bool) -> Result<Self> {
        let coeffs = literals
            .iter()
            .map(|s| S::parse(field, s))
            .collect::<Result<Vec<_>>>()?;
        Self::build(field, coeffs, polynomial)
    }

    /// The series `x` to order `n`.
    pub fn identity(field: &S::Field, n: usize) -> Self {
        let mut coeffs = vec![S::zero(field); n.max(1)];
        coeffs[0] = S::one(field);
        TruncatedSeries {
            field: field.clone(),
            coeffs,
            tail_model: None,
            polynomial: true,
        }
    }

    /// `c * x` to order `n`.
    pub fn linear(c: &S, n: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![S::zero(field); n.max(1)];
        coeffs[0] = c.clone();
        TruncatedSeries {
            field: field.clone(),
            coeffs,
            tail_model: None,
            polynomial: true,
        }
    }

    pub fn with_tail_model(mut self, model: CoeffBoundModel) -> Self {
        self.tail_model = Some(model);
        self
    }

    pub fn field(&self) -> &S::Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients `c_1 ..= c_N`.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `c_k` for `1 <= k <= N`.
    pub fn coeff(&self, k: usize) -> Option<&S> {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn tail_model(&self) -> Option<&CoeffBoundModel> {
        self.tail_model.as_ref()
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// Largest degree with a coefficient that is not exactly zero.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_exact_zero())
            .map_or(0, |i| i + 1)
    }

    /// Keeps degrees `1..=n`; the polynomial flag survives only if nothing
    /// nonzero was dropped.
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.max(1);
        if n >= self.order() {
            return self.clone();
        }
        TruncatedSeries {
            field: self.field.clone(),
            coeffs: self.coeffs[..n].to_vec(),
            tail_model: None,
            polynomial: self.polynomial && self.degree() <= n,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: S::describe(&self.field).to_string(),
                right: S::describe(&other.field).to_string(),
            })
        }
    }
}

pub fn ps_add<S: UltraScalar>(a: &TruncatedSeries<S>, b: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    a.check(b)?;
    let n = a.order().min(b.order());
    let coeffs = (0..n)
        .map(|i| a.coeffs[i].try_add(&b.coeffs[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries {
        field: a.field.clone(),
        coeffs,
        tail_model: None,
        polynomial: a.polynomial && b.polynomial && a.degree() <= n && b.degree() <= n,
    })
}

pub fn ps_neg<S: UltraScalar>(a: &TruncatedSeries<S>) -> TruncatedSeries<S> {
    TruncatedSeries {
        field: a.field.clone(),
        coeffs: a.coeffs.iter().map(|c| c.neg()).collect(),
        tail_model: None,
        polynomial: a.polynomial,
    }
}

pub fn ps_sub<S: UltraScalar>(a: &TruncatedSeries<S>, b: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    ps_add(a, &ps_neg(b))
}

/// `c * a`.
pub fn ps_scale<S: UltraScalar>(c: &S, a: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    let coeffs = a.coeffs.iter().map(|x| c.try_mul(x)).collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries {
        field: a.field.clone(),
        coeffs,
        tail_model: None,
        polynomial: a.polynomial,
    })
}

/// Truncated Cauchy product of coefficient vectors indexed from degree 1.
fn mul_coeffs<S: UltraScalar>(field: &S::Field, a: &[S], b: &[S], n: usize) -> Result<Vec<S>> {
    let mut out = vec![S::zero(field); n];
    for (i, x) in a.iter().enumerate() {
        // degree i + 1; product degree (i + 1) + (j + 1)
        if x.is_exact_zero() || i + 2 > n {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i - 1) {
            if y.is_exact_zero() {
                continue;
            }
            let d = i + j + 1;
            out[d] = out[d].try_add(&x.try_mul(y)?)?;
        }
    }
    Ok(out)
}

pub fn ps_mul<S: UltraScalar>(a: &TruncatedSeries<S>, b: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    a.check(b)?;
    let n = a.order().min(b.order());
    let coeffs = mul_coeffs(&a.field, &a.coeffs, &b.coeffs, n)?;
    Ok(TruncatedSeries {
        field: a.field.clone(),
        coeffs,
        tail_model: None,
        polynomial: a.polynomial && b.polynomial && a.degree() + b.degree() <= n,
    })
}

/// Powers `inner^1 ..= inner^L`, each truncated to the order of `inner`.
#[derive(Clone, Debug)]
pub struct PowerTable<S: UltraScalar> {
    /// `rows[l - 1][k - 1] = [x^k] inner^l`
    rows: Vec<Vec<S>>,
}

impl<S: UltraScalar> PowerTable<S> {
    pub fn new(inner: &TruncatedSeries<S>, max_power: usize) -> Result<Self> {
        let n = inner.order();
        let max_power = max_power.min(n);
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(max_power);
        rows.push(inner.coeffs.clone());
        for l in 2..=max_power {
            let prev = &rows[l - 2];
            rows.push(mul_coeffs(&inner.field, prev, &inner.coeffs, n)?);
        }
        Ok(PowerTable { rows })
    }

    pub fn max_power(&self) -> usize {
        self.rows.len()
    }

    /// `[x^k] inner^l`; zero when `k < l`.
    pub fn coeff(&self, l: usize, k: usize) -> &S {
        &self.rows[l - 1][k - 1]
    }

    pub fn row(&self, l: usize) -> &[S] {
        &self.rows[l - 1]
    }
}

/// Coefficients of a composition together with, for each degree, the
/// smallest valuation lower bound among the summands that produced it.
///
/// The second vector measures cancellation: a coefficient that comes out as
/// zero modulo `π^m` from summands of valuation `s` has `m - s` digits of
/// agreement behind it. `None` means no summand contributed.
#[derive(Clone, Debug)]
pub struct Tracked<S: UltraScalar> {
    pub series: TruncatedSeries<S>,
    pub scales: Vec<Option<i64>>,
}

impl<S: UltraScalar> PowerTable<S> {
    /// `Σ_l outer_l · inner^l` through the table's order.
    pub fn compose(&self, outer: &TruncatedSeries<S>) -> Result<Tracked<S>> {
        self.compose_scaled(outer, None)
    }

    /// [`Self::compose`] for an outer series that is itself the result of a
    /// tracked composition: a summand `outer_l · [x^k] inner^l` is charged
    /// with the scale of `outer_l` as well, so cancellation is measured
    /// against the whole expansion.
    pub fn compose_tracked(&self, outer: &Tracked<S>) -> Result<Tracked<S>> {
        self.compose_scaled(&outer.series, Some(&outer.scales))
    }

    fn compose_scaled(&self, outer: &TruncatedSeries<S>, outer_scales: Option<&[Option<i64>]>) -> Result<Tracked<S>> {
        let field = outer.field();
        let n = outer.order().min(self.rows.first().map_or(0, |r| r.len()));
        let mut coeffs = vec![S::zero(field); n];
        let mut scales: Vec<Option<i64>> = vec![None; n];
        for l in 1..=n.min(self.max_power()) {
            let c = &outer.coeffs[l - 1];
            if c.is_exact_zero() {
                continue;
            }
            for k in l..=n {
                let t = self.coeff(l, k);
                if t.is_exact_zero() {
                    continue;
                }
                let term = c.try_mul(t)?;
                let chained = outer_scales
                    .and_then(|s| s[l - 1])
                    .zip(t.valuation().lower_bound())
                    .map(|(a, b)| a + b);
                let v = [term.valuation().lower_bound(), chained].into_iter().flatten().min();
                if let Some(v) = v {
                    scales[k - 1] = Some(scales[k - 1].map_or(v, |s| s.min(v)));
                }
                coeffs[k - 1] = coeffs[k - 1].try_add(&term)?;
            }
        }
        Ok(Tracked {
            series: TruncatedSeries {
                field: field.clone(),
                coeffs,
                tail_model: None,
                polynomial: false,
            },
            scales,
        })
    }
}

/// [`ps_compose`] with cancellation scales.
pub fn ps_compose_tracked<S: UltraScalar>(
    outer: &TruncatedSeries<S>,
    inner: &TruncatedSeries<S>,
) -> Result<Tracked<S>> {
    outer.check(inner)?;
    let n = outer.order().min(inner.order());
    let table = PowerTable::new(&inner.truncate(n), n)?;
    let mut t = table.compose(&outer.truncate(n))?;
    t.series.polynomial = outer.polynomial && inner.polynomial && outer.degree() * inner.degree() <= n;
    Ok(t)
}

/// `outer(inner(x))` through the common order.
pub fn ps_compose<S: UltraScalar>(
    outer: &TruncatedSeries<S>,
    inner: &TruncatedSeries<S>,
) -> Result<TruncatedSeries<S>> {
    Ok(ps_compose_tracked(outer, inner)?.series)
}

/// Compositional inverse through the order of `h`.
pub fn ps_comp_inverse<S: UltraScalar>(h: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    Ok(ps_comp_inverse_with_powers(h)?.0)
}

/// [`ps_comp_inverse`] together with the powers of the inverse that the
/// triangular solve builds anyway.
pub fn ps_comp_inverse_with_powers<S: UltraScalar>(
    h: &TruncatedSeries<S>,
) -> Result<(TruncatedSeries<S>, PowerTable<S>)> {
    let n = h.order();
    let field = &h.field;
    let c1 = &h.coeffs[0];
    if c1.is_zero_like() {
        return Err(Error::NonUnitLinearCoefficient);
    }
    let d1 = S::one(field).try_div(c1)?;
    // pw[l - 1][j - 1] = [x^j] k^l for the inverse k being built
    let mut pw: Vec<Vec<S>> = vec![vec![S::zero(field); n]; n];
    pw[0][0] = d1.clone();
    for m in 2..=n {
        // [x^m] k^l for l >= 2 only needs d_1 .. d_{m-1}
        for l in 2..=m {
            let mut acc = S::zero(field);
            for j in 1..=(m - l + 1) {
                let d = &pw[0][j - 1];
                let t = &pw[l - 2][m - j - 1];
                if !d.is_exact_zero() && !t.is_exact_zero() {
                    acc = acc.try_add(&d.try_mul(t)?)?;
                }
            }
            pw[l - 1][m - 1] = acc;
        }
        let mut s = S::zero(field);
        for l in 2..=m {
            let c = &h.coeffs[l - 1];
            let t = &pw[l - 1][m - 1];
            if !c.is_exact_zero() && !t.is_exact_zero() {
                s = s.try_add(&c.try_mul(t)?)?;
            }
        }
        pw[0][m - 1] = s.neg().try_div(c1)?;
    }
    let polynomial = h.degree() == 1;
    let inv = TruncatedSeries {
        field: field.clone(),
        coeffs: pw[0].clone(),
        tail_model: None,
        polynomial,
    };
    Ok((inv, PowerTable { rows: pw }))
}
