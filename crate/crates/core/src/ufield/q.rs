use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Domain, Element, FieldDesc, Repr};
use crate::error::Result;

/// `Q((T))` with a fixed coefficient window.
#[derive(Clone, Debug, PartialEq)]
pub struct QDomain {
    cap: u32,
}

/// Rational digits `num[i] / den` with one positive common denominator,
/// trailing zeros trimmed and `gcd(den, num...) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QWindow {
    num: Vec<BigInt>,
    den: BigInt,
}

impl QWindow {
    fn new(mut num: Vec<BigInt>, mut den: BigInt, len: u32) -> Self {
        num.truncate(len as usize);
        while num.last().is_some_and(|c| c.is_zero()) {
            num.pop();
        }
        if num.is_empty() {
            return QWindow {
                num,
                den: BigInt::one(),
            };
        }
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -std::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in &mut num {
                    *c /= &g;
                }
                den /= &g;
            }
        }
        QWindow { num, den }
    }

    fn digit(&self, i: usize) -> BigRational {
        match self.num.get(i) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    fn len(&self) -> usize {
        self.num.len()
    }
}

impl QDomain {
    pub fn new(precision: u32) -> Result<Self> {
        FieldDesc::LaurentQ { precision }.validate()?;
        Ok(QDomain { cap: precision })
    }
}

fn to_i64s(a: &[BigInt]) -> Option<(Vec<i64>, u64)> {
    let mut bits = 0;
    let v = a
        .iter()
        .map(|c| {
            bits = bits.max(c.bits());
            c.to_i64()
        })
        .collect::<Option<Vec<_>>>()?;
    Some((v, bits))
}

/// `Σ a[i] b[j]` into `out[i + j]` for `i + j < n`.
fn convolve(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    // i128 accumulation when no partial sum can overflow
    if let (Some((x, bx)), Some((y, by))) = (to_i64s(a), to_i64s(b)) {
        let terms = a.len().min(b.len()).max(1) as u64;
        if bx + by + (64 - terms.leading_zeros() as u64) < 127 {
            let mut acc = vec![0i128; n];
            for (i, &xi) in x.iter().enumerate().take(n) {
                if xi == 0 {
                    continue;
                }
                for (j, &yj) in y.iter().enumerate().take(n - i) {
                    acc[i + j] += xi as i128 * yj as i128;
                }
            }
            return acc.into_iter().map(BigInt::from).collect();
        }
    }
    let mut acc = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                acc[i + j] += x * y;
            }
        }
    }
    acc
}

impl Domain for QDomain {
    type Win = QWindow;

    fn cap(&self) -> u32 {
        self.cap
    }

    fn desc(&self) -> FieldDesc {
        FieldDesc::LaurentQ { precision: self.cap }
    }

    fn uniformizer_name(&self) -> String {
        "T".into()
    }

    fn has_exact_values(&self) -> bool {
        true
    }

    fn win_one(&self) -> QWindow {
        QWindow {
            num: vec![BigInt::one()],
            den: BigInt::one(),
        }
    }

    fn win_add_shifted(&self, a: &QWindow, b: &QWindow, shift: u32, len: u32) -> QWindow {
        let len = len as usize;
        let shift = shift as usize;
        let (fa, fb, den) = if a.den == b.den {
            (BigInt::one(), BigInt::one(), a.den.clone())
        } else {
            let l = a.den.lcm(&b.den);
            (&l / &a.den, &l / &b.den, l)
        };
        let mut out: Vec<BigInt> = a.num.iter().take(len).map(|c| c * &fa).collect();
        if shift < len {
            let end = (shift + b.len()).min(len);
            if out.len() < end {
                out.resize(end, BigInt::zero());
            }
            for (i, d) in b.num.iter().enumerate().take(end.saturating_sub(shift)) {
                out[shift + i] += d * &fb;
            }
        }
        QWindow::new(out, den, len as u32)
    }

    fn win_neg(&self, a: &QWindow, len: u32) -> QWindow {
        QWindow::new(a.num.iter().map(|c| -c).collect(), a.den.clone(), len)
    }

    fn win_mul(&self, a: &QWindow, b: &QWindow, len: u32) -> QWindow {
        let n = (a.len() + b.len()).saturating_sub(1).min(len as usize);
        QWindow::new(convolve(&a.num, &b.num, n), &a.den * &b.den, len)
    }

    fn win_inv(&self, a: &QWindow, len: u32) -> QWindow {
        let len = len as usize;
        if len == 0 {
            return QWindow {
                num: Vec::new(),
                den: BigInt::one(),
            };
        }
        // 1/(N/D) = D/N; with c_0 = 1, c_n = -Σ_{i>=1} N_i c_{n-i} N_0^(i-1),
        // 1/N = Σ c_n T^n / N_0^(n+1).
        let n0 = &a.num[0];
        let mut pow = vec![BigInt::one()];
        for i in 1..len {
            let next = &pow[i - 1] * n0;
            pow.push(next);
        }
        let mut c: Vec<BigInt> = Vec::with_capacity(len);
        c.push(BigInt::one());
        for n in 1..len {
            let mut s = BigInt::zero();
            for i in 1..=n.min(a.len() - 1) {
                if !a.num[i].is_zero() && !c[n - i].is_zero() {
                    s += &a.num[i] * &c[n - i] * &pow[i - 1];
                }
            }
            c.push(-s);
        }
        // common denominator N_0^len
        let num = c
            .into_iter()
            .enumerate()
            .map(|(n, cn)| cn * &pow[len - 1 - n] * &a.den)
            .collect();
        QWindow::new(num, &pow[len - 1] * n0, len as u32)
    }

    fn win_valuation(&self, a: &QWindow, len: u32) -> Option<u32> {
        a.num
            .iter()
            .take(len as usize)
            .position(|c| !c.is_zero())
            .map(|i| i as u32)
    }

    fn win_span(&self, a: &QWindow) -> u32 {
        a.len() as u32
    }

    fn win_shift_down(&self, a: &QWindow, by: u32, len: u32) -> QWindow {
        let by = by as usize;
        if by >= a.len() {
            return QWindow {
                num: Vec::new(),
                den: BigInt::one(),
            };
        }
        QWindow::new(a.num[by..].to_vec(), a.den.clone(), len)
    }

    fn repr_from_terms(&self, terms: &[(BigRational, i64)], abs: Option<i64>) -> Result<Repr<QWindow>> {
        let mut digits: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (c, k) in terms {
            *digits.entry(*k).or_insert_with(BigRational::zero) += c;
        }
        digits.retain(|_, d| !d.is_zero());
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
        let den = digits.values().fold(BigInt::one(), |l, d| l.lcm(d.denom()));
        let mut num = vec![BigInt::zero(); rel as usize];
        for (k, d) in digits {
            let i = (k - val) as usize;
            if i < rel as usize {
                num[i] = d.numer() * (&den / d.denom());
            }
        }
        Ok(Repr::Unit {
            val,
            rel,
            win: QWindow::new(num, den, rel),
            exact,
        })
    }

    fn to_terms(&self, val: i64, _rel: u32, win: &QWindow) -> Vec<(BigRational, i64)> {
        (0..win.len())
            .filter(|&i| !win.num[i].is_zero())
            .map(|i| (win.digit(i), val + i as i64))
            .collect()
    }
}

impl Element<QDomain> {
    /// Coefficient of `T^k`, `None` when it lies beyond the tracked precision.
    pub fn coefficient(&self, k: i64) -> Option<BigRational> {
        match self.repr() {
            Repr::Zero => Some(BigRational::zero()),
            Repr::ZeroTo(m) => (k < *m).then(BigRational::zero),
            Repr::Unit { val, rel, win, exact } => {
                if k < *val {
                    Some(BigRational::zero())
                } else if k >= val + *rel as i64 {
                    exact.then(Default::default)
                } else {
                    Some(win.digit((k - val) as usize))
                }
            }
        }
    }
}
