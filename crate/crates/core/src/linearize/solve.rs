use num_rational::BigRational;

use super::bounds::{check_model, BoundVerdict, Verdict};
use super::map::{MapSpec, Regime, Tail};
use super::radii::{radii, LogRadius, Radii, RadiusStatus};
use crate::error::{Error, Result};
use crate::exact::{rat_int, ExtRational};
use crate::series::{ps_comp_inverse, ps_comp_inverse_with_powers, CoeffBoundModel, PowerTable, TruncatedSeries};
use crate::ufield::{UltraScalar, Valuation};

/// Output of [`schroder_solve`].
#[derive(Clone, Debug)]
pub struct ConjugacyReport<S: UltraScalar> {
    pub regime: Regime,
    pub order: usize,
    pub lambda: S,
    /// `f` realized to the solve order.
    pub f: TruncatedSeries<S>,
    /// `g` with `b_1 = 1`, carrying the proven coefficient model when one applies.
    pub g: TruncatedSeries<S>,
    pub radii: Radii,
    /// Lower bound for the convergence exponent of `g`.
    pub rg_lower: Option<LogRadius>,
    /// Lower bound for the injectivity exponent of `g`.
    pub delta_g_lower: Option<LogRadius>,
    pub delta_g_empirical: LogRadius,
    /// Verdicts for `k = 2 ..= N`, empty when the bound has no finite exponent to test.
    pub bound_check: Vec<BoundVerdict>,
    power_table: PowerTable<S>,
}

impl<S: UltraScalar> ConjugacyReport<S> {
    pub fn b(&self) -> &[S] {
        self.g.coeffs()
    }

    pub fn all_bounds_pass(&self) -> bool {
        self.bound_check.iter().all(|v| v.verdict == Verdict::Pass)
    }

    /// Powers of `f` used by the solve.
    pub fn power_table(&self) -> &PowerTable<S> {
        &self.power_table
    }

    /// Model for the coefficients of `g^{-1}`: `v(d_k) >= (k - 1) e_δg` with
    /// `e_δg` the proven injectivity exponent of `g`.
    pub fn inverse_model(&self) -> Option<CoeffBoundModel> {
        let e = self.delta_g_lower.as_ref()?.exponent.finite()?.clone();
        Some(CoeffBoundModel { c1: e, c2: rat_int(0) })
    }

    /// `g^{-1}` to the solve order, with [`Self::inverse_model`] attached.
    pub fn g_inverse(&self) -> Result<TruncatedSeries<S>> {
        let inv = ps_comp_inverse(&self.g)?;
        Ok(match self.inverse_model() {
            Some(m) if !inv.is_polynomial() => inv.with_tail_model(m),
            _ => inv,
        })
    }
}

/// Solves `g ∘ f = λ g` with `g(x) = x + b_2 x^2 + ...` through order `n`.
///
/// `b_k (λ - λ^k) = Σ_{l<k} b_l [x^k] f^l`, solved upward in `k`. With an
/// unknown tail the order is capped at the last explicit degree.
pub fn schroder_solve<S: UltraScalar>(m: &MapSpec<S>, n: usize) -> Result<ConjugacyReport<S>> {
    if n < 2 {
        return Err(Error::Invariant("solve order must be at least 2".into()));
    }
    let n = match m.tail() {
        Tail::Unknown => n.min(m.explicit_degree()).max(1),
        _ => n,
    };
    let field = m.field();
    let lam = m.lambda();
    let f = m.realize(n)?;
    let table = PowerTable::new(&f, n)?;
    let mut b: Vec<S> = Vec::with_capacity(n);
    b.push(S::one(field));
    let mut lam_pow = lam.clone();
    for k in 2..=n {
        lam_pow = lam_pow.try_mul(lam)?;
        let mut s = S::zero(field);
        for (l, bl) in b.iter().enumerate().map(|(i, x)| (i + 1, x)) {
            let t = table.coeff(l, k);
            if bl.is_exact_zero() || t.is_exact_zero() {
                continue;
            }
            s = s.try_add(&bl.try_mul(t)?)?;
        }
        let denom = lam.try_sub(&lam_pow)?;
        b.push(s.try_div(&denom)?);
    }

    let regime = m.regime();
    let vlam = rat_int(m.vlam());
    let r = radii(m);
    let exact_tail = !matches!(m.tail(), Tail::Unknown);
    let (rg_lower, delta_g_lower, model) = if !exact_tail {
        (None, None, None)
    } else {
        match regime {
            Regime::Attracting => {
                let rg = r.rho.clone();
                let dg = r.rho.shifted(&-&vlam);
                let model = r.rho.exponent.finite().map(|c| CoeffBoundModel {
                    c1: c.clone(),
                    c2: vlam.clone(),
                });
                (Some(rg), Some(dg), model)
            }
            Regime::Repelling => {
                let e = r.gamma.shifted(&-&vlam);
                let model = e.exponent.finite().map(|c| CoeffBoundModel {
                    c1: c.clone(),
                    c2: rat_int(0),
                });
                (Some(e.clone()), Some(e), model)
            }
        }
    };

    let linear = f.is_polynomial() && f.degree() <= 1;
    let mut g = if linear {
        TruncatedSeries::polynomial(field, b)?
    } else {
        TruncatedSeries::new(field, b)?
    };
    if let Some(model) = &model {
        if !linear {
            g = g.with_tail_model(model.clone());
        }
    }

    let bound_check = if exact_tail {
        match regime {
            Regime::Attracting => check_model(g.coeffs(), &r.rho.exponent, &vlam),
            Regime::Repelling => check_model(g.coeffs(), &r.gamma.exponent.add_rational(&-&vlam), &rat_int(0)),
        }
    } else {
        Vec::new()
    };

    let delta_g_empirical = empirical_injectivity(&g, linear);
    Ok(ConjugacyReport {
        regime,
        order: n,
        lambda: lam.clone(),
        f,
        g,
        radii: r,
        rg_lower,
        delta_g_lower,
        delta_g_empirical,
        bound_check,
        power_table: table,
    })
}

/// `min_{2<=k<=N} v(b_k) / (k - 1)` over coefficients with exact valuation.
///
/// Only finitely many coefficients inform it, so it bounds the true
/// injectivity exponent of `g` from above unless `g` is exactly `x`.
fn empirical_injectivity<S: UltraScalar>(g: &TruncatedSeries<S>, linear: bool) -> LogRadius {
    let mut e = ExtRational::PosInf;
    for (i, b) in g.coeffs().iter().enumerate().skip(1) {
        if let Valuation::Exact(v) = b.valuation() {
            let r = ExtRational::Finite(BigRational::new(v.into(), (i as i64).into()));
            if r < e {
                e = r;
            }
        }
    }
    LogRadius {
        exponent: e,
        status: if linear {
            RadiusStatus::Attained
        } else {
            RadiusStatus::UpperBoundFromTruncation
        },
    }
}

/// The empirical injectivity exponent of `g` recorded in a report.
pub fn delta_g_empirical<S: UltraScalar>(report: &ConjugacyReport<S>) -> LogRadius {
    report.delta_g_empirical.clone()
}

/// Residual of one coefficient of an identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub k: usize,
    /// Valuation of `lhs - rhs`.
    pub valuation: Valuation,
    /// Digits of agreement below the largest summand; `None` for an exact zero.
    pub digits: Option<i64>,
}

impl Residual {
    /// Exact zero, or zero to tracked precision with at least `min_digits`
    /// digits of agreement.
    pub fn vanishes(&self, min_digits: i64) -> bool {
        match self.valuation {
            Valuation::Infinite => true,
            Valuation::Exact(_) => false,
            Valuation::AtLeast(_) => self.digits.is_some_and(|d| d >= min_digits),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    /// `[x^k] (g ∘ f - λ g)` for `k = 1 ..= N`.
    pub semi: Vec<Residual>,
    /// `[x^k] (g ∘ f ∘ g^{-1} - λ x)` for `k = 1 ..= N`.
    pub full: Vec<Residual>,
}

impl IdentityCheck {
    pub fn semi_holds(&self, min_digits: i64) -> bool {
        self.semi.iter().all(|r| r.vanishes(min_digits))
    }

    pub fn full_holds(&self, min_digits: i64) -> bool {
        self.full.iter().all(|r| r.vanishes(min_digits))
    }

    /// Smallest digit count over both identities, `None` if every residual is exact.
    pub fn min_digits(&self) -> Option<i64> {
        self.semi.iter().chain(&self.full).filter_map(|r| r.digits).min()
    }
}

fn residual<S: UltraScalar>(k: usize, lhs: &S, rhs: &S, scale: Option<i64>) -> Result<Residual> {
    let d = lhs.try_sub(rhs)?;
    let valuation = d.valuation();
    let digits = match valuation {
        Valuation::Infinite => None,
        Valuation::Exact(v) | Valuation::AtLeast(v) => {
            let floor = [scale, lhs.valuation().lower_bound(), rhs.valuation().lower_bound()]
                .into_iter()
                .flatten()
                .min();
            Some(floor.map_or(0, |s| v - s))
        }
    };
    Ok(Residual { k, valuation, digits })
}

/// Coefficients of `g ∘ f - λ g` and `g ∘ f ∘ g^{-1} - λ x` through the solve order.
pub fn identity_residuals<S: UltraScalar>(report: &ConjugacyReport<S>) -> Result<IdentityCheck> {
    let field = report.g.field();
    let lam = &report.lambda;
    let gf = report.power_table.compose(&report.g)?;
    let mut semi = Vec::with_capacity(report.order);
    for k in 1..=report.order {
        let lhs = gf.series.coeff(k).expect("within order");
        let rhs = lam.try_mul(report.g.coeff(k).expect("within order"))?;
        semi.push(residual(k, lhs, &rhs, gf.scales[k - 1])?);
    }
    let (_, table) = ps_comp_inverse_with_powers(&report.g)?;
    let full_t = table.compose_tracked(&gf)?;
    let mut full = Vec::with_capacity(report.order);
    for k in 1..=report.order {
        let lhs = full_t.series.coeff(k).expect("within order");
        let rhs = if k == 1 { lam.clone() } else { S::zero(field) };
        full.push(residual(k, lhs, &rhs, full_t.scales[k - 1])?);
    }
    Ok(IdentityCheck { semi, full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearize::map::AffineTail;
    use crate::ufield::{Element, FpDomain, PAdicDomain, QDomain};
    use crate::{LaurentFp, LaurentQ, PAdic};

    fn quadratic() -> MapSpec<PAdic> {
        let f = PAdicDomain::new(5, 64).unwrap();
        MapSpec::polynomial(Element::parse(&f, "5").unwrap(), vec![Element::one(&f)]).unwrap()
    }

    #[test]
    fn quadratic_coefficients() {
        let m = quadratic();
        let r = schroder_solve(&m, 8).unwrap();
        let f = m.field();
        assert_eq!(r.b()[0], Element::one(f));
        assert_eq!(r.b()[1], Element::parse(f, "-1/20").unwrap());
        assert_eq!(r.b()[2], Element::parse(f, "1/240").unwrap());
        assert!(r.all_bounds_pass());
        assert!(r.bound_check[0].equality);
        assert_eq!(r.delta_g_empirical.exponent, ExtRational::int(-1));
    }

    #[test]
    fn quadratic_identities_hold() {
        let r = schroder_solve(&quadratic(), 16).unwrap();
        let id = identity_residuals(&r).unwrap();
        assert!(id.semi_holds(8), "{:?}", id.semi);
        assert!(id.full_holds(8), "{:?}", id.full);
    }

    #[test]
    fn linear_map_gives_identity() {
        let f = QDomain::new(8).unwrap();
        let m = MapSpec::<LaurentQ>::polynomial(Element::parse(&f, "T").unwrap(), vec![]).unwrap();
        let r = schroder_solve(&m, 6).unwrap();
        assert!(r.b()[1..].iter().all(|b| b.is_exact_zero()));
        assert!(r.all_bounds_pass());
        assert_eq!(r.delta_g_empirical.exponent, ExtRational::PosInf);
        let id = identity_residuals(&r).unwrap();
        assert!(id
            .semi
            .iter()
            .chain(&id.full)
            .all(|x| x.valuation == Valuation::Infinite));
    }

    #[test]
    fn laurent_identity_with_power_tail() {
        let f = FpDomain::new(3, 48).unwrap();
        let tail = Tail::Affine(AffineTail {
            alpha: -1,
            beta: 0,
            from: 2,
            unit: Element::one(&f),
        });
        let m = MapSpec::<LaurentFp>::new(&f, Element::uniformizer_pow(&f, 1), vec![], tail).unwrap();
        let r = schroder_solve(&m, 12).unwrap();
        assert!(r.all_bounds_pass());
        let id = identity_residuals(&r).unwrap();
        assert!(id.semi_holds(8), "{:?}", id.semi);
        assert!(id.full_holds(8), "{:?}", id.full);
    }

    #[test]
    fn repelling_bounds() {
        let f = PAdicDomain::new(5, 64).unwrap();
        let tail = Tail::Affine(AffineTail {
            alpha: 1,
            beta: 0,
            from: 2,
            unit: Element::one(&f),
        });
        let m = MapSpec::<PAdic>::new(&f, Element::parse(&f, "1/5").unwrap(), vec![], tail).unwrap();
        let r = schroder_solve(&m, 16).unwrap();
        assert_eq!(r.regime, Regime::Repelling);
        assert!(r.all_bounds_pass(), "{:?}", r.bound_check);
        assert_eq!(r.delta_g_lower.as_ref().unwrap().exponent, ExtRational::int(2));
        assert!(r.delta_g_empirical.exponent >= ExtRational::int(2));
    }

    #[test]
    fn unknown_tail_caps_order() {
        let f = PAdicDomain::new(5, 32).unwrap();
        let lam = Element::parse(&f, "5").unwrap();
        let m = MapSpec::<PAdic>::new(&f, lam, vec![Element::one(&f), Element::one(&f)], Tail::Unknown).unwrap();
        let r = schroder_solve(&m, 10).unwrap();
        assert_eq!(r.order, 3);
        assert!(r.bound_check.is_empty());
        assert!(r.rg_lower.is_none());
    }
}
