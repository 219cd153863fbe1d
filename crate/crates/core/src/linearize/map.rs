use crate::error::{Error, Result};
use crate::exact::{rat_int, ExtRational};
use crate::series::{CoeffBoundModel, TruncatedSeries};
use crate::ufield::{UltraScalar, Valuation};

use super::radii::inf_ratio;

/// Where the coefficients past the explicit ones come from.
#[derive(Clone, Debug, PartialEq)]
pub enum Tail<S> {
    /// Every coefficient past the explicit ones is zero.
    Polynomial,
    /// `a_i = unit · π^(alpha·i + beta)` for `i >= from`, zero between the
    /// explicit coefficients and `from`.
    Affine(AffineTail<S>),
    /// Nothing is known past the explicit coefficients.
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineTail<S> {
    pub alpha: i64,
    pub beta: i64,
    pub from: usize,
    /// Valuation-zero factor shared by every tail coefficient.
    pub unit: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Attracting,
    Repelling,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Attracting => "attracting",
            Regime::Repelling => "repelling",
        }
    }
}

/// `f(x) = λx + Σ_{i>=2} a_i x^i` with `|λ| != 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec<S: UltraScalar> {
    field: S::Field,
    lambda: S,
    vlam: i64,
    explicit: Vec<S>,
    tail: Tail<S>,
}

fn exact_valuation<S: UltraScalar>(x: &S, what: &str) -> Result<Option<i64>> {
    match x.valuation() {
        Valuation::Infinite => Ok(None),
        Valuation::Exact(v) => Ok(Some(v)),
        Valuation::AtLeast(m) => Err(Error::InvalidMap(format!(
            "{what} is only known to vanish modulo uniformizer^{m}"
        ))),
    }
}

impl<S: UltraScalar> MapSpec<S> {
    /// `explicit` holds `a_2 ..= a_M`.
    pub fn new(field: &S::Field, lambda: S, explicit: Vec<S>, tail: Tail<S>) -> Result<Self> {
        let mismatch = |x: &S| Error::FieldMismatch {
            left: S::describe(field).to_string(),
            right: S::describe(x.field()).to_string(),
        };
        if lambda.field() != field {
            return Err(mismatch(&lambda));
        }
        let vlam = match exact_valuation(&lambda, "multiplier")? {
            None => return Err(Error::InvalidMap("multiplier must be nonzero".into())),
            Some(0) => return Err(Error::IndifferentMultiplier),
            Some(v) => v,
        };
        for (i, a) in explicit.iter().enumerate() {
            if a.field() != field {
                return Err(mismatch(a));
            }
            exact_valuation(a, &format!("coefficient a_{}", i + 2))?;
        }
        if let Tail::Affine(t) = &tail {
            let m = explicit.len() + 1;
            if t.from <= m || t.from < 2 {
                return Err(Error::InvalidMap(format!(
                    "affine tail must start after the explicit coefficients (from {} <= {m})",
                    t.from
                )));
            }
            if t.unit.field() != field {
                return Err(mismatch(&t.unit));
            }
            if t.unit.valuation() != Valuation::Exact(0) {
                return Err(Error::InvalidMap("affine tail unit must have valuation 0".into()));
            }
        }
        Ok(MapSpec {
            field: field.clone(),
            lambda,
            vlam,
            explicit,
            tail,
        })
    }

    /// `λx + a_2 x^2 + ...` with a polynomial tail.
    pub fn polynomial(lambda: S, explicit: Vec<S>) -> Result<Self> {
        let field = lambda.field().clone();
        Self::new(&field, lambda, explicit, Tail::Polynomial)
    }

    pub fn field(&self) -> &S::Field {
        &self.field
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn vlam(&self) -> i64 {
        self.vlam
    }

    pub fn regime(&self) -> Regime {
        if self.vlam > 0 {
            Regime::Attracting
        } else {
            Regime::Repelling
        }
    }

    /// `a_2 ..= a_M`.
    pub fn explicit(&self) -> &[S] {
        &self.explicit
    }

    /// `M`, the last explicitly given degree (1 when there are none).
    pub fn explicit_degree(&self) -> usize {
        self.explicit.len() + 1
    }

    pub fn tail(&self) -> &Tail<S> {
        &self.tail
    }

    /// `a_i` for `i >= 1` (`a_1 = λ`), `None` for an unknown tail coefficient.
    pub fn coeff(&self, i: usize) -> Option<S> {
        if i == 0 {
            return Some(S::zero(&self.field));
        }
        if i == 1 {
            return Some(self.lambda.clone());
        }
        if let Some(a) = self.explicit.get(i - 2) {
            return Some(a.clone());
        }
        match &self.tail {
            Tail::Polynomial => Some(S::zero(&self.field)),
            Tail::Unknown => None,
            Tail::Affine(t) if i < t.from => Some(S::zero(&self.field)),
            Tail::Affine(t) => {
                let e = t.alpha * i as i64 + t.beta;
                Some(
                    S::uniformizer_pow(&self.field, e)
                        .try_mul(&t.unit)
                        .expect("tail unit lives in the map's field"),
                )
            }
        }
    }

    /// `v(a_i)`, `None` for an unknown tail coefficient.
    pub fn coeff_valuation(&self, i: usize) -> Option<ExtRational> {
        self.coeff(i).map(|a| a.valuation().as_ext())
    }

    /// `f` to order `n`. Polynomial maps keep the polynomial flag when `n`
    /// covers every nonzero coefficient; affine tails attach the model
    /// `v(a_k) >= c (k - 1)` for `k > n`.
    pub fn realize(&self, n: usize) -> Result<TruncatedSeries<S>> {
        if n == 0 {
            return Err(Error::Invariant("order must be at least 1".into()));
        }
        let mut coeffs = Vec::with_capacity(n);
        for i in 1..=n {
            match self.coeff(i) {
                Some(a) => coeffs.push(a),
                None => {
                    return Err(Error::UndeterminedTail);
                }
            }
        }
        let covered = n >= self.explicit_degree();
        let series = match (&self.tail, covered) {
            (Tail::Polynomial, true) => TruncatedSeries::polynomial(&self.field, coeffs)?,
            (Tail::Unknown, _) => TruncatedSeries::new(&self.field, coeffs)?,
            _ => {
                let s = TruncatedSeries::new(&self.field, coeffs)?;
                match inf_ratio(self, 0, n + 1).exponent {
                    ExtRational::Finite(c) => s.with_tail_model(CoeffBoundModel::new(c, rat_int(0))?),
                    // nothing nonzero beyond n
                    ExtRational::PosInf => TruncatedSeries::polynomial(&self.field, s.coeffs().to_vec())?,
                    ExtRational::NegInf => s,
                }
            }
        };
        Ok(series)
    }

    /// Conjugate `x ↦ x / c`: `a_i ↦ a_i c^(1 - i)`, so every radius exponent
    /// moves by `-v(c)` and `v(b_k)` by `-(k - 1) v(c)`.
    ///
    /// An affine tail keeps its shape only when `c` is a power of the
    /// uniformizer.
    pub fn rescale(&self, c: &S) -> Result<Self> {
        let vc = match exact_valuation(c, "scale")? {
            None => return Err(Error::InvalidMap("scale must be nonzero".into())),
            Some(v) => v,
        };
        let explicit = self
            .explicit
            .iter()
            .enumerate()
            .map(|(j, a)| a.try_mul(&c.powi(-(j as i64 + 1))?))
            .collect::<Result<Vec<_>>>()?;
        let tail = match &self.tail {
            Tail::Affine(t) => {
                let pure = S::uniformizer_pow(&self.field, vc);
                if !c.try_sub(&pure)?.is_zero_like() {
                    return Err(Error::InvalidMap(
                        "an affine tail can only be rescaled by a power of the uniformizer".into(),
                    ));
                }
                Tail::Affine(AffineTail {
                    alpha: t.alpha - vc,
                    beta: t.beta + vc,
                    from: t.from,
                    unit: t.unit.clone(),
                })
            }
            other => other.clone(),
        };
        Self::new(&self.field, self.lambda.clone(), explicit, tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ufield::{Element, PAdicDomain, QDomain};
    use crate::{LaurentQ, PAdic};

    fn q5() -> PAdicDomain {
        PAdicDomain::new(5, 32).unwrap()
    }

    #[test]
    fn rejects_indifferent_and_zero_multipliers() {
        let f = q5();
        let one = Element::parse(&f, "3").unwrap();
        assert_eq!(
            MapSpec::<PAdic>::polynomial(one, vec![]),
            Err(Error::IndifferentMultiplier)
        );
        let zero = Element::zero(&f);
        assert!(matches!(
            MapSpec::<PAdic>::polynomial(zero, vec![]),
            Err(Error::InvalidMap(_))
        ));
    }

    #[test]
    fn affine_tail_realizes_rule() {
        let f = QDomain::new(16).unwrap();
        let lam = Element::parse(&f, "T").unwrap();
        let tail = Tail::Affine(AffineTail {
            alpha: -1,
            beta: 0,
            from: 2,
            unit: Element::one(&f),
        });
        let m = MapSpec::<LaurentQ>::new(&f, lam, vec![], tail).unwrap();
        let s = m.realize(5).unwrap();
        for i in 2..=5 {
            assert_eq!(s.coeff(i).unwrap().valuation(), Valuation::Exact(-(i as i64)));
        }
        let model = s.tail_model().unwrap();
        // inf_{i>=6} -i / (i - 1) = -6/5 at i = 6
        assert_eq!(model.c1, crate::exact::rat(-6, 5));
    }

    #[test]
    fn polynomial_flag_needs_full_order() {
        let f = q5();
        let lam = Element::parse(&f, "5").unwrap();
        let m = MapSpec::<PAdic>::polynomial(lam, vec![Element::one(&f), Element::one(&f)]).unwrap();
        assert!(m.realize(3).unwrap().is_polynomial());
        let short = m.realize(2).unwrap();
        assert!(!short.is_polynomial());
        // a_3 = 1 beyond order 2: v(a_3) >= 0 * 2
        assert_eq!(short.tail_model().unwrap().c1, rat_int(0));
    }

    #[test]
    fn unknown_tail_stops_at_explicit_degree() {
        let f = q5();
        let lam = Element::parse(&f, "5").unwrap();
        let m = MapSpec::<PAdic>::new(&f, lam, vec![Element::one(&f)], Tail::Unknown).unwrap();
        assert!(m.realize(2).is_ok());
        assert_eq!(m.realize(3), Err(Error::UndeterminedTail));
    }

    #[test]
    fn rescale_moves_valuations() {
        let f = q5();
        let lam = Element::parse(&f, "5").unwrap();
        let m = MapSpec::<PAdic>::polynomial(lam, vec![Element::one(&f), Element::parse(&f, "3").unwrap()]).unwrap();
        let c = Element::parse(&f, "10").unwrap();
        let r = m.rescale(&c).unwrap();
        assert_eq!(r.coeff(2).unwrap().valuation(), Valuation::Exact(-1));
        assert_eq!(r.coeff(3).unwrap().valuation(), Valuation::Exact(-2));
    }
}
