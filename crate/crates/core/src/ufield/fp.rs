use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Domain, Element, FieldDesc, Repr};
use crate::error::{Error, Result};

/// `F_p((T))` with a fixed coefficient window.
///
/// Windows are digit vectors with trailing zeros trimmed, so an empty
/// vector is the zero window.
#[derive(Clone, Debug, PartialEq)]
pub struct FpDomain {
    p: u64,
    cap: u32,
}

impl FpDomain {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        FieldDesc::LaurentFp { p, precision }.validate()?;
        Ok(FpDomain { p, cap: precision })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn trim(mut w: Vec<u32>, len: u32) -> Vec<u32> {
        w.truncate(len as usize);
        while w.last() == Some(&0) {
            w.pop();
        }
        w
    }

    fn inv_digit(&self, a: u64) -> u64 {
        // Fermat; p is prime and a != 0
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    /// Residue of a rational whose denominator is prime to `p`.
    pub fn residue(&self, r: &BigRational) -> Result<u32> {
        let p = BigInt::from(self.p);
        let d = (r.denom() % &p + &p) % &p;
        if d.is_zero() {
            return Err(Error::NonInvertibleDenominator(r.denom().to_string()));
        }
        let n = (r.numer() % &p + &p) % &p;
        let n = n.to_u64().expect("residue fits");
        let d = d.to_u64().expect("residue fits");
        Ok((n * self.inv_digit(d) % self.p) as u32)
    }
}

impl Domain for FpDomain {
    type Win = Vec<u32>;

    fn cap(&self) -> u32 {
        self.cap
    }

    fn desc(&self) -> FieldDesc {
        FieldDesc::LaurentFp {
            p: self.p,
            precision: self.cap,
        }
    }

    fn uniformizer_name(&self) -> String {
        "T".into()
    }

    fn has_exact_values(&self) -> bool {
        true
    }

    fn win_one(&self) -> Vec<u32> {
        vec![1]
    }

    fn win_add_shifted(&self, a: &Vec<u32>, b: &Vec<u32>, shift: u32, len: u32) -> Vec<u32> {
        let len = len as usize;
        let mut out = a.clone();
        out.truncate(len);
        let shift = shift as usize;
        if shift < len {
            let end = (shift + b.len()).min(len);
            if out.len() < end {
                out.resize(end, 0);
            }
            for (i, &d) in b.iter().enumerate().take(end.saturating_sub(shift)) {
                let s = out[shift + i] as u64 + d as u64;
                out[shift + i] = (s % self.p) as u32;
            }
        }
        Self::trim(out, len as u32)
    }

    fn win_neg(&self, a: &Vec<u32>, len: u32) -> Vec<u32> {
        let out = a
            .iter()
            .map(|&d| if d == 0 { 0 } else { (self.p - d as u64) as u32 })
            .collect();
        Self::trim(out, len)
    }

    fn win_mul(&self, a: &Vec<u32>, b: &Vec<u32>, len: u32) -> Vec<u32> {
        let len = len as usize;
        let n = (a.len() + b.len()).saturating_sub(1).min(len);
        let mut acc = vec![0u64; n];
        let p = self.p;
        for (i, &x) in a.iter().enumerate().take(n) {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(n - i) {
                if y != 0 {
                    acc[i + j] = (acc[i + j] + x as u64 * y as u64) % p;
                }
            }
        }
        Self::trim(acc.into_iter().map(|d| d as u32).collect(), len as u32)
    }

    fn win_inv(&self, a: &Vec<u32>, len: u32) -> Vec<u32> {
        let len = len as usize;
        let p = self.p;
        let inv0 = self.inv_digit(a[0] as u64);
        let mut out = vec![0u64; len];
        if len == 0 {
            return Vec::new();
        }
        out[0] = inv0;
        for n in 1..len {
            let mut s = 0u64;
            for i in 1..=n.min(a.len() - 1) {
                if a[i] != 0 {
                    s = (s + a[i] as u64 * out[n - i]) % p;
                }
            }
            out[n] = (p - s) % p * inv0 % p;
        }
        Self::trim(out.into_iter().map(|d| d as u32).collect(), len as u32)
    }

    fn win_valuation(&self, a: &Vec<u32>, len: u32) -> Option<u32> {
        a.iter().take(len as usize).position(|&d| d != 0).map(|i| i as u32)
    }

    fn win_span(&self, a: &Vec<u32>) -> u32 {
        a.len() as u32
    }

    fn win_shift_down(&self, a: &Vec<u32>, by: u32, len: u32) -> Vec<u32> {
        let by = by as usize;
        if by >= a.len() {
            return Vec::new();
        }
        Self::trim(a[by..].to_vec(), len)
    }

    fn repr_from_terms(&self, terms: &[(BigRational, i64)], abs: Option<i64>) -> Result<Repr<Vec<u32>>> {
        let mut digits: BTreeMap<i64, u64> = BTreeMap::new();
        for (c, k) in terms {
            let r = self.residue(c)? as u64;
            let e = digits.entry(*k).or_insert(0);
            *e = (*e + r) % self.p;
        }
        digits.retain(|_, d| *d != 0);
        let val = match digits.keys().next() {
            None => {
                return Ok(match abs {
                    Some(m) => Repr::ZeroTo(m),
                    None => Repr::Zero,
                })
            }
            Some(&v) => v,
        };
        let top = *digits.keys().next_back().expect("nonempty");
        let span = (top - val + 1) as u64;
        let (rel, exact) = match abs {
            None if span <= self.cap as u64 => (span as u32, true),
            None => (self.cap, false),
            Some(m) if m <= val => return Ok(Repr::ZeroTo(m)),
            Some(m) => (((m - val) as u64).min(self.cap as u64) as u32, false),
        };
        let mut win = vec![0u32; rel as usize];
        for (k, d) in digits {
            let i = (k - val) as usize;
            if i < rel as usize {
                win[i] = d as u32;
            }
        }
        Ok(Repr::Unit {
            val,
            rel,
            win: Self::trim(win, rel),
            exact,
        })
    }

    fn to_terms(&self, val: i64, _rel: u32, win: &Vec<u32>) -> Vec<(BigRational, i64)> {
        win.iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| (BigRational::from_integer(d.into()), val + i as i64))
            .collect()
    }
}

impl Element<FpDomain> {
    /// Coefficient of `T^k` as a residue, `None` when it lies beyond the
    /// tracked precision.
    pub fn coefficient(&self, k: i64) -> Option<u32> {
        match self.repr() {
            Repr::Zero => Some(0),
            Repr::ZeroTo(m) => (k < *m).then_some(0),
            Repr::Unit { val, rel, win, exact } => {
                if k < *val {
                    Some(0)
                } else if k >= val + *rel as i64 {
                    exact.then(Default::default)
                } else {
                    Some(win.get((k - val) as usize).copied().unwrap_or(0))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ufield::{UltraScalar, Valuation};

    fn f5() -> FpDomain {
        FpDomain::new(5, 16).unwrap()
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let x = Element::parse(&f5(), "1 - T").unwrap();
        let inv = Element::one(&f5()).try_div(&x).unwrap();
        for k in 0..16 {
            assert_eq!(inv.coefficient(k), Some(1));
        }
        assert_eq!(inv.coefficient(16), None);
    }

    #[test]
    fn fractions_reduce_mod_p() {
        let x = Element::parse(&f5(), "1/2 + 3/4*T").unwrap();
        assert_eq!(x.coefficient(0), Some(3));
        assert_eq!(x.coefficient(1), Some(2));
        assert!(matches!(
            Element::parse(&f5(), "1/5"),
            Err(Error::NonInvertibleDenominator(_))
        ));
    }

    #[test]
    fn coefficients_cancel_mod_p() {
        let x = Element::parse(&f5(), "2*T + 3*T + T^2").unwrap();
        assert_eq!(x.valuation(), Valuation::Exact(2));
    }

    #[test]
    fn window_truncation_on_multiplication() {
        let f = FpDomain::new(7, 3).unwrap();
        let x = Element::parse(&f, "1 + T").unwrap();
        let y = x.powi(5).unwrap();
        // (1+T)^5 = 1 + 5T + 10T^2 + ... mod T^3
        assert_eq!(y.coefficient(1), Some(5));
        assert_eq!(y.coefficient(2), Some(3));
        assert_eq!(y.coefficient(3), None);
    }

    #[test]
    fn display_round_trip() {
        let f = FpDomain::new(3, 8).unwrap();
        for s in ["T^-2 + 2*T", "2", "T^3 + O(T^5)", "O(T^4)"] {
            let x = Element::parse(&f, s).unwrap();
            assert_eq!(x.to_string(), s);
            assert_eq!(Element::parse(&f, &x.to_string()).unwrap(), x);
        }
    }
}
