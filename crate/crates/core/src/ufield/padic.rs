use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Domain, FieldDesc, Repr};
use crate::error::Result;

/// `Q_p` with a fixed relative precision. Windows are integers in `[0, p^len)`.
#[derive(Clone, Debug)]
pub struct PAdicDomain {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    p: u64,
    cap: u32,
    /// `p^0 ..= p^cap`
    powers: Vec<BigUint>,
}

impl PartialEq for PAdicDomain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.inner.p == other.inner.p && self.inner.cap == other.inner.cap)
    }
}

impl PAdicDomain {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        FieldDesc::Padic { p, precision }.validate()?;
        let pb = BigUint::from(p);
        let mut powers = Vec::with_capacity(precision as usize + 1);
        powers.push(BigUint::one());
        for i in 0..precision as usize {
            let next = &powers[i] * &pb;
            powers.push(next);
        }
        Ok(PAdicDomain {
            inner: Arc::new(Inner {
                p,
                cap: precision,
                powers,
            }),
        })
    }

    pub fn prime(&self) -> u64 {
        self.inner.p
    }

    fn modulus(&self, len: u32) -> &BigUint {
        &self.inner.powers[len as usize]
    }

    /// Splits a nonzero integer into `p^v · m` with `p ∤ m`.
    fn split(&self, n: &BigInt) -> (i64, BigInt) {
        let p = BigInt::from(self.inner.p);
        let mut n = n.clone();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return (v, n);
            }
            n = q;
            v += 1;
        }
    }

    fn reduce(&self, n: &BigInt, len: u32) -> BigUint {
        let m = BigInt::from(self.modulus(len).clone());
        n.mod_floor(&m).to_biguint().expect("nonnegative after mod_floor")
    }

    /// Rational `r/s` with `r ≡ s·u (mod p^len)` and both small, if one exists.
    fn reconstruct(&self, u: &BigUint, len: u32) -> Option<(BigInt, BigInt)> {
        let m = BigInt::from(self.modulus(len).clone());
        let bound = (&m / 2u32).sqrt();
        let (mut r0, mut r1) = (m.clone(), BigInt::from(u.clone()));
        let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let s2 = &s0 - &q * &s1;
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if s1.is_zero() || s1.abs() > bound {
            return None;
        }
        let (r, s) = if s1.is_negative() { (-r1, -s1) } else { (r1, s1) };
        if !s.gcd(&m).is_one() {
            return None;
        }
        debug_assert!((&r - &s * BigInt::from(u.clone())).mod_floor(&m).is_zero());
        Some((r, s))
    }
}

impl Domain for PAdicDomain {
    type Win = BigUint;

    fn cap(&self) -> u32 {
        self.inner.cap
    }

    fn desc(&self) -> FieldDesc {
        FieldDesc::Padic {
            p: self.inner.p,
            precision: self.inner.cap,
        }
    }

    fn uniformizer_name(&self) -> String {
        self.inner.p.to_string()
    }

    fn has_exact_values(&self) -> bool {
        false
    }

    fn win_one(&self) -> BigUint {
        BigUint::one()
    }

    fn win_add_shifted(&self, a: &BigUint, b: &BigUint, shift: u32, len: u32) -> BigUint {
        let m = self.modulus(len);
        if shift >= len {
            return a % m;
        }
        (a + b * self.modulus(shift)) % m
    }

    fn win_neg(&self, a: &BigUint, len: u32) -> BigUint {
        let m = self.modulus(len);
        let a = a % m;
        if a.is_zero() {
            a
        } else {
            m - a
        }
    }

    fn win_mul(&self, a: &BigUint, b: &BigUint, len: u32) -> BigUint {
        (a * b) % self.modulus(len)
    }

    fn win_inv(&self, a: &BigUint, len: u32) -> BigUint {
        let m = self.modulus(len);
        if m.is_one() {
            return BigUint::zero();
        }
        (a % m).modinv(m).expect("unit windows are invertible")
    }

    fn win_valuation(&self, a: &BigUint, len: u32) -> Option<u32> {
        let a = a % self.modulus(len);
        if a.is_zero() {
            return None;
        }
        let p = BigUint::from(self.inner.p);
        let mut v = 0;
        let mut a = a;
        loop {
            let (q, r) = a.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            a = q;
            v += 1;
        }
    }

    fn win_span(&self, _a: &BigUint) -> u32 {
        self.inner.cap
    }

    fn win_shift_down(&self, a: &BigUint, by: u32, len: u32) -> BigUint {
        (a / self.modulus(by)) % self.modulus(len)
    }

    fn repr_from_terms(&self, terms: &[(BigRational, i64)], abs: Option<i64>) -> Result<Repr<BigUint>> {
        let p = BigRational::from_integer(BigInt::from(self.inner.p));
        let mut sum = BigRational::zero();
        for (c, k) in terms {
            sum += c * num_traits::pow::Pow::pow(&p, *k as i32);
        }
        if sum.is_zero() {
            return Ok(match abs {
                Some(m) => Repr::ZeroTo(m),
                None => Repr::Zero,
            });
        }
        let (vn, n) = self.split(sum.numer());
        let (vd, d) = self.split(sum.denom());
        let val = vn - vd;
        let rel = match abs {
            None => self.inner.cap,
            Some(m) if m <= val => return Ok(Repr::ZeroTo(m)),
            Some(m) => ((m - val) as u64).min(self.inner.cap as u64) as u32,
        };
        let nu = self.reduce(&n, rel);
        let du = self.reduce(&d, rel);
        let inv = self.win_inv(&du, rel);
        Ok(Repr::Unit {
            val,
            rel,
            win: self.win_mul(&nu, &inv, rel),
            exact: false,
        })
    }

    fn to_terms(&self, val: i64, rel: u32, win: &BigUint) -> Vec<(BigRational, i64)> {
        let (r, s) = self
            .reconstruct(win, rel)
            .unwrap_or_else(|| (BigInt::from(win.clone()), BigInt::one()));
        let mut x = BigRational::new(r, s);
        let p = BigInt::from(self.inner.p);
        if val >= 0 {
            x *= BigRational::from_integer(num_traits::pow(p, val as usize));
        } else {
            x /= BigRational::from_integer(num_traits::pow(p, (-val) as usize));
        }
        debug_assert!(x.numer().sign() != Sign::NoSign);
        vec![(x, 0)]
    }
}
