use num_bigint::BigInt;
use num_traits::One;

use super::index::enumerate_index_solutions;
use crate::error::{Error, Result};
use crate::linearize::MapSpec;
use crate::ufield::UltraScalar;

pub(crate) const MAX_KMAX: usize = 12;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `b_1 ..= b_kmax` from
/// `b_k (λ - λ^k) = Σ_{l<k} b_l Σ_α l!/(α_1!···α_k!) a_1^α_1 ··· a_k^α_k`
/// with `a_1 = λ`, summing over the enumerated index solutions. The
/// multinomials are integers before they enter the field.
pub fn direct_bk_recursion<S: UltraScalar>(m: &MapSpec<S>, kmax: usize) -> Result<Vec<S>> {
    if kmax > MAX_KMAX {
        return Err(Error::TooLarge(format!(
            "direct recursion is limited to k <= {MAX_KMAX}, got {kmax}"
        )));
    }
    if kmax == 0 {
        return Ok(Vec::new());
    }
    let field = m.field();
    let a: Vec<S> = (1..=kmax)
        .map(|i| m.coeff(i).ok_or(Error::UndeterminedTail))
        .collect::<Result<_>>()?;
    let lam = m.lambda();
    let mut b = vec![S::one(field)];
    for k in 2..=kmax {
        let mut sum = S::zero(field);
        for sol in enumerate_index_solutions(k)? {
            let mut coef = factorial(sol.l as u32);
            for &ai in &sol.alpha {
                coef /= factorial(ai);
            }
            let mut term = b[sol.l - 1].try_mul(&S::from_integer(field, &coef))?;
            for (i, &ai) in sol.alpha.iter().enumerate() {
                if ai > 0 {
                    term = term.try_mul(&a[i].powi(ai as i64)?)?;
                }
            }
            sum = sum.try_add(&term)?;
        }
        let denom = lam.try_sub(&lam.powi(k as i64)?)?;
        b.push(sum.try_div(&denom)?);
    }
    Ok(b)
}
