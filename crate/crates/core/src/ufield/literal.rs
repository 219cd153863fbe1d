//! Scalar literal grammar shared by all fields.
//!
//! ```text
//! literal := sign? term (('+' | '-') term)*
//! term    := coef ('*'? 'T' power?)? | 'T' power? | 'O' '(' base power? ')'
//! coef    := digits ('/' digits)?
//! power   := '^' (int | '(' int ')')
//! base    := digits | 'T'
//! ```
//!
//! Whitespace is ignored between tokens. p-adic literals use only rational
//! coefficients; Laurent literals may use `T` with any integer exponent.
//! The `O(...)` term records the absolute precision of inexact values and
//! lets every printed element parse back to itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub terms: Vec<(BigRational, i64)>,
    pub big_o: Option<i64>,
    /// Bases written inside `O(...)`, with their byte offsets.
    pub bases: Vec<(usize, String)>,
    /// Byte offsets of every `T` outside an `O(...)` term.
    pub t_positions: Vec<usize>,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("validated digits"))
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        let paren = self.eat(b'(');
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let d = self.digits()?;
        if paren {
            self.expect(b')')?;
        }
        let v: i64 = i64::try_from(d).map_err(|_| Error::parse(start, "exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<i64> {
        if self.eat(b'^') {
            self.int()
        } else {
            Ok(1)
        }
    }
}

pub fn parse_literal(text: &str) -> Result<Literal> {
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut lit = Literal {
        terms: Vec::new(),
        big_o: None,
        bases: Vec::new(),
        t_positions: Vec::new(),
    };
    let mut first = true;
    loop {
        let sign_neg = match c.peek() {
            None if first => return Err(Error::parse(c.pos, "empty literal")),
            None => break,
            Some(b'+') => {
                c.pos += 1;
                false
            }
            Some(b'-') => {
                c.pos += 1;
                true
            }
            Some(_) if first => false,
            Some(ch) => {
                return Err(Error::parse(c.pos, format!("unexpected '{}'", ch as char)));
            }
        };
        first = false;
        match c.peek() {
            Some(b'O') => {
                if sign_neg {
                    return Err(Error::parse(c.pos, "precision term cannot be negated"));
                }
                c.pos += 1;
                c.expect(b'(')?;
                let base_pos = {
                    c.skip_ws();
                    c.pos
                };
                let base = if c.eat(b'T') {
                    "T".to_string()
                } else {
                    c.digits()?.to_string()
                };
                let m = c.power()?;
                c.expect(b')')?;
                if lit.big_o.is_some() {
                    return Err(Error::parse(base_pos, "more than one precision term"));
                }
                lit.bases.push((base_pos, base));
                lit.big_o = Some(m);
            }
            Some(b'T') => {
                lit.t_positions.push(c.pos);
                c.pos += 1;
                let k = c.power()?;
                let coef = if sign_neg {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
                lit.terms.push((coef, k));
            }
            Some(ch) if ch.is_ascii_digit() => {
                let num = c.digits()?;
                let den_pos = c.pos;
                let den = if c.eat(b'/') { c.digits()? } else { BigInt::one() };
                if den.is_zero() {
                    return Err(Error::parse(den_pos, "zero denominator"));
                }
                let mut coef = BigRational::new(num, den);
                if sign_neg {
                    coef = -coef;
                }
                let had_star = c.eat(b'*');
                let k = if c.peek() == Some(b'T') {
                    lit.t_positions.push(c.pos);
                    c.pos += 1;
                    c.power()?
                } else if had_star {
                    return Err(Error::parse(c.pos, "expected 'T' after '*'"));
                } else {
                    0
                };
                lit.terms.push((coef, k));
            }
            Some(ch) => {
                return Err(Error::parse(c.pos, format!("unexpected '{}'", ch as char)));
            }
            None => return Err(Error::parse(c.pos, "dangling sign")),
        }
    }
    Ok(lit)
}

fn format_term(coef: &BigRational, k: i64, name: &str) -> String {
    let abs = coef.abs();
    if k == 0 {
        return abs.to_string();
    }
    let mono = if k == 1 { "T".to_string() } else { format!("T^{k}") };
    debug_assert_eq!(name, "T");
    if abs.is_one() {
        mono
    } else {
        format!("{abs}*{mono}")
    }
}

/// Prints nonzero terms in increasing exponent order.
pub(crate) fn format_terms(terms: &[(BigRational, i64)], name: &str) -> String {
    let mut out = String::new();
    for (i, (c, k)) in terms.iter().enumerate() {
        let body = format_term(c, *k, name);
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}
