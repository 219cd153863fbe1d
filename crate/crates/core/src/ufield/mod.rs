//! Complete discretely valued fields with exact valuations.
//!
//! Three fields are supported: the p-adic numbers `Q_p`, Laurent series
//! `F_p((T))` over a prime field, and Laurent series `Q((T))`. All three
//! share one representation, [`Element`], parameterised by a [`Domain`]
//! that knows how to do arithmetic on a finite window of digits.
//!
//! A nonzero element is `π^v · (u_0 + u_1 π + … + u_{r-1} π^{r-1}) + O(π^{v+r})`
//! where `π` is the uniformizer (`p` or `T`), `u_0 ≠ 0` and `r` is the
//! relative precision. Magnitudes are never real numbers: `|x| = q^(-v(x))`
//! for an abstract base `q > 1`, and every comparison is a valuation
//! comparison.
//!
//! In the Laurent fields a value built from finitely many terms is exact:
//! every digit past its window is known to vanish. Exactness survives
//! addition, multiplication and division by monomials while the window fits
//! the cap, so cancellations among exact values give an exact zero.
//!
//! Zero comes in two flavours. [`Valuation::Infinite`] is an exact zero.
//! [`Valuation::AtLeast`] is a value whose tracked digits all cancelled; it
//! is only known to be `≡ 0 mod π^m`.

mod fp;
mod literal;
mod padic;
mod q;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExtRational;

pub use fp::FpDomain;
pub use literal::{parse_literal, Literal};
pub use padic::PAdicDomain;
pub use q::{QDomain, QWindow};

pub const DEFAULT_PADIC_PRECISION: u32 = 64;
pub const DEFAULT_LAURENT_WINDOW: u32 = 256;

/// Largest prime accepted for residue arithmetic; products must fit in `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

fn default_padic_precision() -> u32 {
    DEFAULT_PADIC_PRECISION
}

fn default_laurent_window() -> u32 {
    DEFAULT_LAURENT_WINDOW
}

/// Runtime description of a field, as it appears in job files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDesc {
    /// `Q_p` with `precision` relative p-adic digits.
    Padic {
        p: u64,
        #[serde(default = "default_padic_precision")]
        precision: u32,
    },
    /// `F_p((T))` with a coefficient window of length `precision`.
    LaurentFp {
        p: u64,
        #[serde(default = "default_laurent_window")]
        precision: u32,
    },
    /// `Q((T))` with a coefficient window of length `precision`.
    LaurentQ {
        #[serde(default = "default_laurent_window")]
        precision: u32,
    },
}

impl FieldDesc {
    pub fn padic(p: u64) -> Self {
        FieldDesc::Padic {
            p,
            precision: DEFAULT_PADIC_PRECISION,
        }
    }

    pub fn laurent_fp(p: u64) -> Self {
        FieldDesc::LaurentFp {
            p,
            precision: DEFAULT_LAURENT_WINDOW,
        }
    }

    pub fn laurent_q() -> Self {
        FieldDesc::LaurentQ {
            precision: DEFAULT_LAURENT_WINDOW,
        }
    }

    pub fn precision(&self) -> u32 {
        match self {
            FieldDesc::Padic { precision, .. }
            | FieldDesc::LaurentFp { precision, .. }
            | FieldDesc::LaurentQ { precision } => *precision,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision() == 0 {
            return Err(Error::InvalidField("precision must be at least 1".into()));
        }
        match self {
            FieldDesc::Padic { p, .. } | FieldDesc::LaurentFp { p, .. } => {
                if *p > MAX_PRIME {
                    return Err(Error::InvalidField(format!("prime {p} exceeds {MAX_PRIME}")));
                }
                if !is_prime(*p) {
                    return Err(Error::InvalidField(format!("{p} is not prime")));
                }
                Ok(())
            }
            FieldDesc::LaurentQ { .. } => Ok(()),
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Padic { p, precision } => write!(f, "Q_{p} (prec {precision})"),
            FieldDesc::LaurentFp { p, precision } => write!(f, "F_{p}((T)) (window {precision})"),
            FieldDesc::LaurentQ { precision } => write!(f, "Q((T)) (window {precision})"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Valuation of a field element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    /// Exact zero.
    Infinite,
    /// Nonzero with known leading digit.
    Exact(i64),
    /// All tracked digits vanished: the value is `≡ 0 mod π^m`.
    AtLeast(i64),
}

impl Valuation {
    /// Best known lower bound, `None` meaning `+∞`.
    pub fn lower_bound(&self) -> Option<i64> {
        match self {
            Valuation::Infinite => None,
            Valuation::Exact(v) | Valuation::AtLeast(v) => Some(*v),
        }
    }

    pub fn exact(&self) -> Option<i64> {
        match self {
            Valuation::Exact(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_ext(&self) -> ExtRational {
        match self.lower_bound() {
            None => ExtRational::PosInf,
            Some(v) => ExtRational::int(v),
        }
    }

    /// True if the valuation is provably at least `m`.
    pub fn at_least(&self, m: i64) -> bool {
        match self.lower_bound() {
            None => true,
            Some(v) => v >= m,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinite => f.write_str("+inf"),
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Arithmetic on digit windows of a discretely valued field.
///
/// A window of logical length `len` stands for `u_0 + u_1 π + … + u_{len-1} π^{len-1}`
/// modulo `π^len`. Every method returns a canonical window for the requested
/// length, so derived equality on windows is equality of the represented
/// residues.
pub trait Domain: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Win: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// Relative precision given to freshly constructed values.
    fn cap(&self) -> u32;
    fn desc(&self) -> FieldDesc;
    /// Printed name of the uniformizer in literals (`"5"`, `"T"`).
    fn uniformizer_name(&self) -> String;
    /// Whether finite windows can stand for exact values.
    fn has_exact_values(&self) -> bool;

    fn win_one(&self) -> Self::Win;
    /// `a + π^shift · b` reduced to `len` digits.
    fn win_add_shifted(&self, a: &Self::Win, b: &Self::Win, shift: u32, len: u32) -> Self::Win;
    fn win_neg(&self, a: &Self::Win, len: u32) -> Self::Win;
    fn win_mul(&self, a: &Self::Win, b: &Self::Win, len: u32) -> Self::Win;
    /// Inverse of a window whose leading digit is nonzero.
    fn win_inv(&self, a: &Self::Win, len: u32) -> Self::Win;
    /// Index of the first nonzero digit below `len`, `None` if all vanish.
    fn win_valuation(&self, a: &Self::Win, len: u32) -> Option<u32>;
    /// Number of digits up to and including the last nonzero one.
    fn win_span(&self, a: &Self::Win) -> u32;
    /// Drops `by` leading digits and keeps `len`.
    fn win_shift_down(&self, a: &Self::Win, by: u32, len: u32) -> Self::Win;

    /// Element `Σ c_k π^k` for finitely many rational terms, known modulo
    /// `π^abs` when `abs` is given.
    fn repr_from_terms(&self, terms: &[(BigRational, i64)], abs: Option<i64>) -> Result<Repr<Self::Win>>;
    /// Printable terms `(coefficient, exponent)` of a nonzero value.
    fn to_terms(&self, val: i64, rel: u32, win: &Self::Win) -> Vec<(BigRational, i64)>;
}

#[derive(Clone, Debug, PartialEq)]
pub enum Repr<W> {
    Zero,
    ZeroTo(i64),
    /// `rel` counts tracked digits; for an exact value it is the window span.
    Unit {
        val: i64,
        rel: u32,
        win: W,
        exact: bool,
    },
}

/// An element of the field described by `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<D: Domain> {
    field: D,
    repr: Repr<D::Win>,
}

/// Field-element interface used by the series and linearization layers.
///
/// Elements carry their field at runtime, so every binary operation is
/// fallible: operands from different fields are rejected with
/// [`Error::FieldMismatch`].
pub trait UltraScalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    type Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn field(&self) -> &Self::Field;
    fn describe(field: &Self::Field) -> FieldDesc;

    fn zero(field: &Self::Field) -> Self;
    fn one(field: &Self::Field) -> Self;
    fn from_integer(field: &Self::Field, n: &BigInt) -> Self;
    fn from_rational(field: &Self::Field, r: &BigRational) -> Result<Self>;
    /// `π^e` for the field's uniformizer.
    fn uniformizer_pow(field: &Self::Field, e: i64) -> Self;
    fn parse(field: &Self::Field, literal: &str) -> Result<Self>;

    fn valuation(&self) -> Valuation;
    /// Absolute precision `m` such that the value is known modulo `π^m`;
    /// `None` for an exact zero.
    fn abs_precision(&self) -> Option<i64>;
    /// Forgets every digit at or beyond `π^m`.
    fn with_abs_precision(&self, m: i64) -> Self;

    fn try_add(&self, rhs: &Self) -> Result<Self>;
    fn try_mul(&self, rhs: &Self) -> Result<Self>;
    fn try_div(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }

    fn powi(&self, e: i64) -> Result<Self> {
        if e < 0 {
            let pos = self.powi(-e)?;
            return Self::one(self.field()).try_div(&pos);
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.field());
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    fn is_exact_zero(&self) -> bool {
        self.valuation() == Valuation::Infinite
    }

    /// Exact zero or zero to tracked precision.
    fn is_zero_like(&self) -> bool {
        !matches!(self.valuation(), Valuation::Exact(_))
    }
}

impl<D: Domain> Element<D> {
    pub fn repr(&self) -> &Repr<D::Win> {
        &self.repr
    }

    pub fn domain(&self) -> &D {
        &self.field
    }

    /// Relative precision of a nonzero value.
    pub fn rel_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { rel, exact: false, .. } => Some(*rel),
            _ => None,
        }
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.desc().to_string(),
                right: rhs.field.desc().to_string(),
            })
        }
    }

    fn unit(&self, val: i64, rel: u32, win: D::Win, exact: bool) -> Self {
        Element {
            field: self.field.clone(),
            repr: Repr::Unit { val, rel, win, exact },
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Zero | Repr::Unit { exact: true, .. })
    }

    fn zero_to(&self, m: i64) -> Self {
        Element {
            field: self.field.clone(),
            repr: Repr::ZeroTo(m),
        }
    }

    /// Canonicalises a sum window of logical length `len` that starts at valuation `base`.
    fn normalise(&self, base: i64, len: u32, win: D::Win, exact: bool) -> Self {
        match self.field.win_valuation(&win, len) {
            None if exact => Self::zero(&self.field),
            None => self.zero_to(base + len as i64),
            Some(f) => {
                let w = if f == 0 {
                    win
                } else {
                    self.field.win_shift_down(&win, f, len - f)
                };
                let rel = if exact { self.field.win_span(&w) } else { len - f };
                self.unit(base + f as i64, rel, w, exact)
            }
        }
    }

    /// Exact result of span `len`, demoted to a capped inexact value when
    /// the span exceeds the cap.
    fn fit(&self, val: i64, len: u32, win: D::Win) -> Self {
        let cap = self.field.cap();
        if len <= cap {
            let rel = self.field.win_span(&win);
            self.unit(val, rel, win, true)
        } else {
            let w = self.field.win_shift_down(&win, 0, cap);
            self.unit(val, cap, w, false)
        }
    }
}

impl<D: Domain> UltraScalar for Element<D> {
    type Field = D;

    fn field(&self) -> &D {
        &self.field
    }

    fn describe(field: &D) -> FieldDesc {
        field.desc()
    }

    fn zero(field: &D) -> Self {
        Element {
            field: field.clone(),
            repr: Repr::Zero,
        }
    }

    fn one(field: &D) -> Self {
        Self::uniformizer_pow(field, 0)
    }

    fn from_integer(field: &D, n: &BigInt) -> Self {
        Self::from_rational(field, &BigRational::from_integer(n.clone()))
            .expect("integers embed in every supported field")
    }

    fn from_rational(field: &D, r: &BigRational) -> Result<Self> {
        let repr = field.repr_from_terms(&[(r.clone(), 0)], None)?;
        Ok(Element {
            field: field.clone(),
            repr,
        })
    }

    fn uniformizer_pow(field: &D, e: i64) -> Self {
        let exact = field.has_exact_values();
        Element {
            field: field.clone(),
            repr: Repr::Unit {
                val: e,
                rel: if exact { 1 } else { field.cap() },
                win: field.win_one(),
                exact,
            },
        }
    }

    fn parse(field: &D, literal: &str) -> Result<Self> {
        let lit = parse_literal(literal)?;
        let name = field.uniformizer_name();
        let is_laurent = name == "T";
        for &(pos, ref base) in &lit.bases {
            if base != &name {
                return Err(Error::parse(
                    pos,
                    format!("precision term must be O({name}^m), found base {base}"),
                ));
            }
        }
        if !is_laurent {
            if let Some(pos) = lit.t_positions.first() {
                return Err(Error::parse(*pos, "the uniformizer T is not valid in a p-adic literal"));
            }
        }
        let repr = field.repr_from_terms(&lit.terms, lit.big_o)?;
        Ok(Element {
            field: field.clone(),
            repr,
        })
    }

    fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::ZeroTo(m) => Valuation::AtLeast(*m),
            Repr::Unit { val, .. } => Valuation::Exact(*val),
        }
    }

    fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero | Repr::Unit { exact: true, .. } => None,
            Repr::ZeroTo(m) => Some(*m),
            Repr::Unit { val, rel, .. } => Some(val + *rel as i64),
        }
    }

    fn with_abs_precision(&self, m: i64) -> Self {
        match &self.repr {
            Repr::Zero => self.zero_to(m),
            Repr::ZeroTo(n) => self.zero_to(m.min(*n)),
            Repr::Unit { val, rel, win, exact } => {
                if *val >= m {
                    self.zero_to(m)
                } else if !exact && val + (*rel as i64) <= m {
                    self.clone()
                } else {
                    let r = ((m - val) as u64).min(self.field.cap() as u64) as u32;
                    let r = if *exact { r } else { r.min(*rel) };
                    self.unit(*val, r, self.field.win_shift_down(win, 0, r), false)
                }
            }
        }
    }

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(match (&self.repr, &rhs.repr) {
            (Repr::Zero, _) => rhs.clone(),
            (_, Repr::Zero) => self.clone(),
            (Repr::ZeroTo(m), Repr::ZeroTo(n)) => self.zero_to(*m.min(n)),
            (Repr::ZeroTo(m), Repr::Unit { .. }) => rhs.with_abs_precision(*m),
            (Repr::Unit { .. }, Repr::ZeroTo(m)) => self.with_abs_precision(*m),
            (
                Repr::Unit {
                    val: va,
                    rel: ra,
                    win: wa,
                    exact: ea,
                },
                Repr::Unit {
                    val: vb,
                    rel: rb,
                    win: wb,
                    exact: eb,
                },
            ) => {
                let base = *va.min(vb);
                let (lo, hi, shift) = if va <= vb { (wa, wb, vb - va) } else { (wb, wa, va - vb) };
                let end_a = va + *ra as i64;
                let end_b = vb + *rb as i64;
                let cap = self.field.cap() as i64;
                let shift = u32::try_from(shift).unwrap_or(u32::MAX);
                if *ea && *eb {
                    let len = end_a.max(end_b) - base;
                    if len <= cap {
                        let sum = self.field.win_add_shifted(lo, hi, shift, len as u32);
                        return Ok(self.normalise(base, len as u32, sum, true));
                    }
                    let sum = self.field.win_add_shifted(lo, hi, shift, cap as u32);
                    return Ok(self.normalise(base, cap as u32, sum, false));
                }
                let abs = match (ea, eb) {
                    (true, _) => end_b,
                    (_, true) => end_a,
                    _ => end_a.min(end_b),
                };
                let len = (abs - base).min(cap) as u32;
                let sum = self.field.win_add_shifted(lo, hi, shift, len);
                self.normalise(base, len, sum, false)
            }
        })
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(match (&self.repr, &rhs.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(&self.field),
            (Repr::ZeroTo(m), Repr::ZeroTo(n)) => self.zero_to(m + n),
            (Repr::ZeroTo(m), Repr::Unit { val, .. }) | (Repr::Unit { val, .. }, Repr::ZeroTo(m)) => {
                self.zero_to(m + val)
            }
            (
                Repr::Unit {
                    val: va,
                    rel: ra,
                    win: wa,
                    exact: ea,
                },
                Repr::Unit {
                    val: vb,
                    rel: rb,
                    win: wb,
                    exact: eb,
                },
            ) => match (ea, eb) {
                (true, true) => {
                    let len = ra + rb - 1;
                    let w = self.field.win_mul(wa, wb, len.min(self.field.cap()));
                    self.fit(va + vb, len, w)
                }
                _ => {
                    let rel = match (ea, eb) {
                        (true, _) => *rb,
                        (_, true) => *ra,
                        _ => *ra.min(rb),
                    };
                    self.unit(va + vb, rel, self.field.win_mul(wa, wb, rel), false)
                }
            },
        })
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        match &rhs.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::ZeroTo(m) => Err(Error::PrecisionExhausted(format!(
                "divisor is only known to be zero modulo uniformizer^{m}"
            ))),
            Repr::Unit {
                val: vb,
                rel: rb,
                win: wb,
                exact: eb,
            } => Ok(match &self.repr {
                Repr::Zero => self.clone(),
                Repr::ZeroTo(m) => self.zero_to(m - vb),
                Repr::Unit {
                    val: va,
                    rel: ra,
                    win: wa,
                    exact: ea,
                } => {
                    let cap = self.field.cap();
                    if *ea && *eb && *rb == 1 {
                        let inv = self.field.win_inv(wb, *ra);
                        return Ok(self.fit(va - vb, *ra, self.field.win_mul(wa, &inv, *ra)));
                    }
                    let ra = if *ea { cap } else { *ra };
                    let rb = if *eb { cap } else { *rb };
                    let rel = ra.min(rb);
                    let inv = self.field.win_inv(wb, rel);
                    self.unit(va - vb, rel, self.field.win_mul(wa, &inv, rel), false)
                }
            }),
        }
    }

    fn neg(&self) -> Self {
        match &self.repr {
            Repr::Unit { val, rel, win, exact } => self.unit(*val, *rel, self.field.win_neg(win, *rel), *exact),
            _ => self.clone(),
        }
    }
}

impl<D: Domain> fmt::Display for Element<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.field.uniformizer_name();
        match &self.repr {
            Repr::Zero => f.write_str("0"),
            Repr::ZeroTo(m) => write!(f, "O({name}^{m})"),
            Repr::Unit { val, rel, win, exact } => {
                let terms = self.field.to_terms(*val, *rel, win);
                f.write_str(&literal::format_terms(&terms, &name))?;
                if !exact && (*rel < self.field.cap() || self.field.has_exact_values()) {
                    write!(f, " + O({name}^{})", val + *rel as i64)?;
                }
                Ok(())
            }
        }
    }
}
