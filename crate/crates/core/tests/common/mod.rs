//! Generators and checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use ultradisc::linearize::{schroder_solve, MapSpec};
use ultradisc::series::{ps_add, ps_compose, ps_mul, TruncatedSeries};
use ultradisc::ufield::{PAdicDomain, QDomain};
use ultradisc::{Element, LaurentQ, PAdic, UltraScalar, Valuation};

pub type Check = Result<(), TestCaseError>;

pub fn qfield() -> QDomain {
    QDomain::new(48).unwrap()
}

fn term_strategy() -> impl Strategy<Value = (i64, i64, i64)> {
    (-9i64..=9, 1i64..=5, -4i64..=4)
}

/// Finite Laurent polynomial `Σ c T^k` with small rational digits.
pub fn laurent_q() -> impl Strategy<Value = LaurentQ> {
    prop::collection::vec(term_strategy(), 0..5).prop_map(|terms| {
        let f = qfield();
        terms.into_iter().fold(Element::zero(&f), |acc, (n, d, k)| {
            let c = Element::from_rational(&f, &BigRational::new(n.into(), d.into())).unwrap();
            acc.try_add(&c.try_mul(&Element::uniformizer_pow(&f, k)).unwrap())
                .unwrap()
        })
    })
}

pub fn series_q(n: usize) -> impl Strategy<Value = TruncatedSeries<LaurentQ>> {
    prop::collection::vec(laurent_q(), n).prop_map(|c| TruncatedSeries::new(&qfield(), c).unwrap())
}

/// Series without constant term and with a unit linear coefficient, so compositions stay defined.
pub fn series_q_unit(n: usize) -> impl Strategy<Value = TruncatedSeries<LaurentQ>> {
    (1i64..=4, prop::collection::vec(laurent_q(), n - 1)).prop_map(|(a, mut rest)| {
        let f = qfield();
        rest.insert(0, Element::from_integer(&f, &BigInt::from(a)));
        TruncatedSeries::new(&f, rest).unwrap()
    })
}

fn coeffs(s: &TruncatedSeries<LaurentQ>) -> Vec<LaurentQ> {
    s.coeffs().to_vec()
}

pub fn strong_triangle(x: &LaurentQ, y: &LaurentQ) -> Check {
    let s = x.try_add(y).unwrap();
    let (vx, vy, vs) = (x.valuation().as_ext(), y.valuation().as_ext(), s.valuation().as_ext());
    let m = vx.clone().min(vy.clone());
    prop_assert!(vs >= m);
    if vx != vy {
        prop_assert_eq!(vs, m);
    }
    Ok(())
}

pub fn field_axioms(x: &LaurentQ, y: &LaurentQ, z: &LaurentQ) -> Check {
    prop_assert_eq!(x.try_add(y).unwrap(), y.try_add(x).unwrap());
    prop_assert_eq!(x.try_mul(y).unwrap(), y.try_mul(x).unwrap());
    prop_assert_eq!(
        x.try_add(y).unwrap().try_add(z).unwrap(),
        x.try_add(&y.try_add(z).unwrap()).unwrap()
    );
    prop_assert_eq!(
        x.try_mul(y).unwrap().try_mul(z).unwrap(),
        x.try_mul(&y.try_mul(z).unwrap()).unwrap()
    );
    prop_assert_eq!(
        x.try_mul(&y.try_add(z).unwrap()).unwrap(),
        x.try_mul(y).unwrap().try_add(&x.try_mul(z).unwrap()).unwrap()
    );
    prop_assert!(x.try_sub(x).unwrap().is_exact_zero());
    if let (Some(vx), Some(vy)) = (x.valuation().exact(), y.valuation().exact()) {
        prop_assert_eq!(x.try_mul(y).unwrap().valuation(), Valuation::Exact(vx + vy));
    }
    Ok(())
}

type S4 = TruncatedSeries<LaurentQ>;

pub fn series_ring_axioms(a: &S4, b: &S4, c: &S4) -> Check {
    let mul = |x: &S4, y: &S4| ps_mul(x, y).unwrap();
    let add = |x: &S4, y: &S4| ps_add(x, y).unwrap();
    prop_assert_eq!(coeffs(&mul(a, b)), coeffs(&mul(b, a)));
    prop_assert_eq!(coeffs(&mul(&mul(a, b), c)), coeffs(&mul(a, &mul(b, c))));
    prop_assert_eq!(coeffs(&mul(a, &add(b, c))), coeffs(&add(&mul(a, b), &mul(a, c))));
    Ok(())
}

pub fn composition_associative(a: &S4, b: &S4, c: &S4) -> Check {
    let left = ps_compose(&ps_compose(a, b).unwrap(), c).unwrap();
    let right = ps_compose(a, &ps_compose(b, c).unwrap()).unwrap();
    prop_assert_eq!(coeffs(&left), coeffs(&right));
    Ok(())
}

pub fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-500i64..=-1, 1i64..=500], 1i64..=500).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

/// `(attracting, explicit coefficients, c)` for a polynomial map over `Q_5`.
pub fn scaled_map() -> impl Strategy<Value = (bool, Vec<Option<BigRational>>, BigRational)> {
    (
        any::<bool>(),
        prop::collection::vec(prop_oneof![Just(None), nonzero_rational().prop_map(Some)], 1..4),
        nonzero_rational(),
    )
}

/// Conjugating by `x -> x / c` moves `v(b_k)` by `-(k - 1) v(c)`.
pub fn scale_covariance(attracting: bool, coeffs: &[Option<BigRational>], c: &BigRational) -> Check {
    let f = PAdicDomain::new(5, 64).unwrap();
    let lam = PAdic::parse(&f, if attracting { "5" } else { "1/5" }).unwrap();
    let explicit: Vec<PAdic> = coeffs
        .iter()
        .map(|r| {
            r.as_ref()
                .map_or(Element::zero(&f), |r| PAdic::from_rational(&f, r).unwrap())
        })
        .collect();
    let m = MapSpec::polynomial(lam, explicit).unwrap();
    let c = PAdic::from_rational(&f, c).unwrap();
    let vc = c.valuation().exact().unwrap();
    let scaled = m.rescale(&c).unwrap();
    let n = 10;
    let b = schroder_solve(&m, n).unwrap();
    let bs = schroder_solve(&scaled, n).unwrap();
    for k in 2..=n {
        let (x, y) = (b.b()[k - 1].valuation(), bs.b()[k - 1].valuation());
        match (x, y) {
            (Valuation::Exact(v), Valuation::Exact(w)) => prop_assert_eq!(w, v - (k as i64 - 1) * vc),
            (Valuation::Infinite, Valuation::Infinite) => {}
            (x, y) => prop_assert!(
                matches!(x, Valuation::AtLeast(_)) || matches!(y, Valuation::AtLeast(_)),
                "k={} {:?} {:?}",
                k,
                x,
                y
            ),
        }
    }
    Ok(())
}
