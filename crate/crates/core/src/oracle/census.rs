use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linearize::lemma1_check;
use crate::series::TruncatedSeries;
use crate::ufield::{Repr, UltraScalar, Valuation};
use crate::LaurentFp;

pub(crate) const MAX_POINTS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    /// Digits `y_0, y_1, ...` of the exact image `y = Σ y_j T^j`, trailing
    /// zeros removed.
    pub image: Vec<u32>,
    /// Distinct preimages in the closed unit disc.
    pub preimages: usize,
    /// Distinct preimages of valuation at least 1.
    pub preimages_open: usize,
    /// Some preimage has `h'(x) ≡ 0 mod T`, so several roots of
    /// `h(x) = y` collapse to one residue point.
    pub ramified: bool,
}

/// Distinct-preimage counts of `h` on the points of the closed unit disc
/// represented by `F_p[T]/(T^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub prime: u64,
    pub modulus_depth: u32,
    pub domain_size: u64,
    /// Ordered by image digits.
    pub histogram: Vec<CensusEntry>,
    /// Points of valuation at least 1, i.e. the open unit disc.
    pub open_domain_size: u64,
    /// Multiplicity bound from the dominance check on the unit disc.
    pub lemma1_d: Option<usize>,
}

impl CensusReport {
    pub fn max_preimages(&self) -> usize {
        self.histogram.iter().map(|e| e.preimages).max().unwrap_or(0)
    }

    pub fn open_disc_injective(&self) -> bool {
        self.histogram.iter().all(|e| e.preimages_open <= 1)
    }

    pub fn counts_sum(&self) -> u64 {
        self.histogram.iter().map(|e| e.preimages as u64).sum()
    }

    /// No image has more distinct preimages than `d`.
    pub fn within_d(&self) -> Option<bool> {
        self.lemma1_d.map(|d| self.max_preimages() <= d)
    }
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn add_assign(a: &mut Vec<u64>, b: &[u64], p: u64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x = (*x + y) % p;
    }
}

fn trim(mut a: Vec<u64>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a.into_iter().map(|d| d as u32).collect()
}

/// Exact digits of a coefficient with nonnegative valuation.
fn digits(c: &LaurentFp, degree: usize) -> Result<Vec<u64>> {
    match c.valuation() {
        Valuation::Infinite => return Ok(Vec::new()),
        Valuation::Exact(v) if v < 0 => return Err(Error::NonIntegralCoefficients(degree)),
        _ => {}
    }
    if !c.is_exact() {
        return Err(Error::PrecisionExhausted(format!(
            "coefficient of degree {degree} is not a finite polynomial in T"
        )));
    }
    let top = match c.repr() {
        Repr::Unit { val, rel, .. } => val + *rel as i64,
        _ => 0,
    };
    let mut out: Vec<u64> = (0..top).map(|j| c.coefficient(j).map_or(0, u64::from)).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

/// Evaluates `h` exactly at the `p^m` points `x = Σ_{j<m} x_j T^j` of the
/// closed unit disc and counts the distinct points mapping to each image.
pub fn preimage_census(h: &TruncatedSeries<LaurentFp>, m: u32) -> Result<CensusReport> {
    let p = h.field().prime();
    if m == 0 {
        return Err(Error::Invariant("census depth must be at least 1".into()));
    }
    let size = (p as u128).checked_pow(m).filter(|&s| s <= MAX_POINTS as u128);
    let Some(size) = size else {
        return Err(Error::TooLarge(format!("{p}^{m} points exceed {MAX_POINTS}")));
    };
    let size = size as u64;
    if !h.is_polynomial() {
        return Err(Error::NotAPolynomial);
    }
    // c_0 = 0, then c_1 ..= c_deg
    let mut coeffs = vec![Vec::new()];
    for (i, c) in h.coeffs()[..h.degree()].iter().enumerate() {
        coeffs.push(digits(c, i + 1)?);
    }
    // h'(x) mod T only needs the constant digits
    let deriv0 = |x0: u64| -> u64 {
        let mut acc = 0u64;
        for (i, c) in coeffs.iter().enumerate().skip(1).rev() {
            let c0 = c.first().copied().unwrap_or(0);
            acc = (acc * x0 + (i as u64 % p) * c0) % p;
        }
        acc
    };

    let mut hist: BTreeMap<Vec<u32>, CensusEntry> = BTreeMap::new();
    let mut x = vec![0u64; m as usize];
    for _ in 0..size {
        let mut acc: Vec<u64> = Vec::new();
        for c in coeffs.iter().rev() {
            acc = mul(&acc, &x, p);
            add_assign(&mut acc, c, p);
        }
        let y = trim(acc);
        let e = hist.entry(y.clone()).or_insert_with(|| CensusEntry {
            image: y,
            preimages: 0,
            preimages_open: 0,
            ramified: false,
        });
        e.preimages += 1;
        if x[0] == 0 {
            e.preimages_open += 1;
        }
        e.ramified |= deriv0(x[0]) == 0;
        // next point, little-endian in the digits
        for d in x.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    let lemma1_d = lemma1_check(h, &BigRational::from_integer(0.into()))
        .ok()
        .and_then(|r| r.d);
    Ok(CensusReport {
        prime: p,
        modulus_depth: m,
        domain_size: size,
        histogram: hist.into_values().collect(),
        open_domain_size: size / p,
        lemma1_d,
    })
}
