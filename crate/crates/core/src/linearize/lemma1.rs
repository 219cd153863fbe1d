//! Injectivity on discs from a coefficient dominance condition.
//!
//! For `h = Σ c_k x^k` and a radius `r = q^e`, if `|c_k| r^k <= |c_1| r` for
//! every `k >= 2`, then `h` maps the open disc of radius `r` one-to-one onto
//! its image disc and the closed disc exactly `d`-to-1, where `d` is the
//! largest `k` with equality. In valuations the hypothesis reads
//! `v(c_k) - k e >= v(c_1) - e`.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{argmin_linear_minus_log2, cmp_log2, rat_int};
use crate::series::TruncatedSeries;
use crate::ufield::{UltraScalar, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Decided by the first `N` coefficients alone.
    FromCoefficients(usize),
    /// The coefficient model was needed beyond the stored order.
    FromModel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub radius_exponent: BigRational,
    pub injective_on_open_disc: bool,
    /// Largest index of equality; absent when the hypothesis fails or the
    /// model leaves the equality set open.
    pub d: Option<usize>,
    pub basis: Basis,
}

pub fn lemma1_check<S: UltraScalar>(h: &TruncatedSeries<S>, e_r: &BigRational) -> Result<InjectivityReport> {
    let v1 = match h.coeffs()[0].valuation() {
        Valuation::Exact(v) => rat_int(v),
        _ => return Err(Error::NonUnitLinearCoefficient),
    };
    let rhs = &v1 - e_r;
    let n = h.order();
    let mut d = 1;
    for (i, c) in h.coeffs().iter().enumerate().skip(1) {
        let k = i as i64 + 1;
        let shift = e_r * rat_int(k);
        match c.valuation() {
            Valuation::Infinite => {}
            Valuation::Exact(v) => match (rat_int(v) - shift).cmp(&rhs) {
                Ordering::Less => {
                    return Ok(InjectivityReport {
                        radius_exponent: e_r.clone(),
                        injective_on_open_disc: false,
                        d: None,
                        basis: Basis::FromCoefficients(n),
                    })
                }
                Ordering::Equal => d = k as usize,
                Ordering::Greater => {}
            },
            Valuation::AtLeast(m) => {
                if rat_int(m) - shift <= rhs {
                    return Err(Error::PrecisionExhausted(format!(
                        "coefficient of degree {k} is only known to vanish modulo uniformizer^{m}"
                    )));
                }
            }
        }
    }
    if h.is_polynomial() {
        return Ok(InjectivityReport {
            radius_exponent: e_r.clone(),
            injective_on_open_disc: true,
            d: Some(d),
            basis: Basis::FromCoefficients(n),
        });
    }
    let model = h.tail_model().ok_or(Error::InsufficientTailInformation)?;
    // for k > N: c1 (k - 1) - c2 log2 k - k e >= v(c_1) - e
    //   <=> psi(k) = (c1 - e)(k - 1) - v(c_1) - c2 log2 k >= 0
    let slope = &model.c1 - e_r;
    let k = argmin_linear_minus_log2(&slope, &model.c2, n as u64 + 1).ok_or(Error::InsufficientTailInformation)?;
    let lin = &slope * rat_int(k as i64 - 1) - &v1;
    let d = match cmp_log2(&model.c2, k, &lin) {
        Ordering::Greater => return Err(Error::InsufficientTailInformation),
        // the model touches the hypothesis: an equality beyond N is possible
        Ordering::Equal => None,
        Ordering::Less => Some(d),
    };
    Ok(InjectivityReport {
        radius_exponent: e_r.clone(),
        injective_on_open_disc: true,
        d,
        basis: Basis::FromModel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::series::CoeffBoundModel;
    use crate::ufield::{Element, FpDomain, PAdicDomain};
    use crate::{LaurentFp, PAdic};

    fn lits(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn x_plus_x_squared_on_unit_disc() {
        let f = FpDomain::new(3, 16).unwrap();
        let h = TruncatedSeries::<LaurentFp>::parse(&f, &lits(&["1", "1"]), true).unwrap();
        let r = lemma1_check(&h, &rat_int(0)).unwrap();
        assert!(r.injective_on_open_disc);
        assert_eq!(r.d, Some(2));
        // on a larger disc the quadratic term dominates
        let r = lemma1_check(&h, &rat_int(1)).unwrap();
        assert!(!r.injective_on_open_disc);
        // on a smaller one the linear term wins strictly
        assert_eq!(lemma1_check(&h, &rat_int(-1)).unwrap().d, Some(1));
    }

    #[test]
    fn linear_is_one_to_one_everywhere() {
        let f = PAdicDomain::new(5, 16).unwrap();
        let h = TruncatedSeries::<PAdic>::linear(&Element::parse(&f, "5").unwrap(), 4);
        for e in [-7, 0, 3] {
            let r = lemma1_check(&h, &rat_int(e)).unwrap();
            assert!(r.injective_on_open_disc);
            assert_eq!(r.d, Some(1));
        }
    }

    #[test]
    fn model_extends_the_check() {
        let f = PAdicDomain::new(5, 16).unwrap();
        let h = TruncatedSeries::<PAdic>::parse(&f, &lits(&["1", "1/5"]), false).unwrap();
        assert_eq!(lemma1_check(&h, &rat_int(-1)), Err(Error::InsufficientTailInformation));
        let h = h.with_tail_model(CoeffBoundModel::new(rat_int(0), rat_int(1)).unwrap());
        // e = -1: (0 + 1)(k - 1) - log2 k >= 0 for k >= 3 strictly
        let r = lemma1_check(&h, &rat_int(-1)).unwrap();
        assert!(r.injective_on_open_disc);
        assert_eq!(r.d, Some(2));
        assert_eq!(r.basis, Basis::FromModel);
        assert_eq!(lemma1_check(&h, &rat_int(-2)).unwrap().d, Some(1));
        // a finite failure needs no model
        assert!(!lemma1_check(&h, &rat(-1, 2)).unwrap().injective_on_open_disc);
        // a model too weak to imply the hypothesis beyond the order
        let h = h.with_tail_model(CoeffBoundModel::new(rat_int(-2), rat_int(0)).unwrap());
        assert_eq!(lemma1_check(&h, &rat_int(-1)), Err(Error::InsufficientTailInformation));
    }
}
