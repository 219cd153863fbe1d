use num_rational::BigRational;

use super::TruncatedSeries;
use crate::error::{Error, Result};
use crate::ufield::{UltraScalar, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: BigRational,
    pub length: u64,
}

/// Lower convex hull of the points `(i, v(c_i))`.
///
/// Root valuations are the negated slopes: a segment of slope `s` and
/// length `n` accounts for `n` nonzero roots of valuation `-s`, counted
/// with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(u64, BigRational)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// `(valuation, multiplicity)` of the nonzero roots.
    pub fn root_valuations(&self) -> Vec<(BigRational, u64)> {
        self.segments.iter().map(|s| (-s.slope.clone(), s.length)).collect()
    }
}

fn cross(o: &(u64, BigRational), a: &(u64, BigRational), b: &(u64, BigRational)) -> BigRational {
    let ax = BigRational::from_integer((a.0 as i64 - o.0 as i64).into());
    let bx = BigRational::from_integer((b.0 as i64 - o.0 as i64).into());
    ax * (&b.1 - &o.1) - (&a.1 - &o.1) * bx
}

pub fn newton_polygon<S: UltraScalar>(h: &TruncatedSeries<S>) -> Result<NewtonPolygon> {
    if !h.is_polynomial() {
        return Err(Error::NotAPolynomial);
    }
    let mut points = Vec::new();
    for (i, c) in h.coeffs().iter().enumerate() {
        match c.valuation() {
            Valuation::Infinite => {}
            Valuation::Exact(v) => points.push((i as u64 + 1, BigRational::from_integer(v.into()))),
            Valuation::AtLeast(m) => {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient of degree {} is only known to vanish modulo uniformizer^{m}",
                    i + 1
                )))
            }
        }
    }
    let mut hull: Vec<(u64, BigRational)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let n = hull.len();
            // drop the middle point unless it lies strictly below the chord
            if cross(&hull[n - 2], &hull[n - 1], &p) <= BigRational::from_integer(0.into()) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment {
                slope: (&w[1].1 - &w[0].1) / BigRational::from_integer(len.into()),
                length: len,
            }
        })
        .collect();
    Ok(NewtonPolygon {
        vertices: hull,
        segments,
    })
}
